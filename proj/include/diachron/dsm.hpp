#pragma once

// Lemma-by-lemma distributional model built from windowed cooccurrence
// counts, and the semantic-field queries run on it.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "diachron/index.hpp"

namespace diachron {

enum class Weighting { raw, ppmi, logdice };

Weighting parse_weighting(const std::string& name);
std::string to_string(Weighting weighting);

struct DsmConfig {
  int window = 5;
  std::uint64_t min_freq = 10;
  Weighting weighting = Weighting::ppmi;
  std::size_t k = 30;
  double edge_threshold = 0.5;

  // Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

// Square sparse matrix in compressed-row form; columns sorted within a row.
template <typename T>
class SparseMatrix {
 public:
  struct Entry {
    std::uint32_t col;
    T value;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  SparseMatrix() : offsets_{0} {}
  explicit SparseMatrix(std::size_t n) : n_(n), offsets_(n + 1, 0) {}
  SparseMatrix(std::size_t n, std::vector<std::size_t> offsets, std::vector<Entry> entries)
      : n_(n), offsets_(std::move(offsets)), entries_(std::move(entries)) {}

  std::size_t dimension() const { return n_; }
  std::size_t nonzeros() const { return entries_.size(); }

  std::pair<const Entry*, const Entry*> row(std::size_t i) const {
    return {entries_.data() + offsets_[i], entries_.data() + offsets_[i + 1]};
  }
  T at(std::size_t i, std::size_t j) const;

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<Entry> entries_;
};

template <typename T>
T SparseMatrix<T>::at(std::size_t i, std::size_t j) const {
  auto [b, e] = row(i);
  while (b != e) {
    auto mid = b + (e - b) / 2;
    if (mid->col < j) b = mid + 1;
    else e = mid;
  }
  return (b != row(i).second && b->col == j) ? b->value : T{};
}

using CountMatrix = SparseMatrix<std::uint64_t>;
using WeightMatrix = SparseMatrix<double>;

class EmptyVocabularyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OutOfVocabularyError : public std::invalid_argument {
 public:
  OutOfVocabularyError(std::string lemma, std::vector<std::string> suggestions);
  const std::string& lemma() const { return lemma_; }
  const std::vector<std::string>& suggestions() const { return suggestions_; }

 private:
  std::string lemma_;
  std::vector<std::string> suggestions_;
};

struct DsmMatrix {
  std::vector<std::string> vocabulary;        // sorted
  std::vector<std::uint64_t> frequencies;     // subset frequency per vocabulary item
  CountMatrix counts;                         // symmetric, zero diagonal
  WeightMatrix weights;
  std::uint64_t corpus_fingerprint = 0;
  DsmConfig config;

  std::optional<std::size_t> find(std::string_view lemma) const;
  // Index of `lemma`; throws OutOfVocabularyError with spelling suggestions.
  std::size_t require(std::string_view lemma) const;
};

// Counts unordered word-position pairs {p, q}, 0 < |p - q| <= window, inside
// one subset document, whose lemmas are distinct vocabulary items. Throws
// EmptyVocabularyError when no lemma reaches min_freq.
DsmMatrix dsm_build(const PositionalIndex& index, const DocSubset& subset, const DsmConfig& config, unsigned threads = 1);

// max(0, log(c_ij * N / (r_i * r_j))), N the total mass, r the row sums.
// Throws std::invalid_argument on an all-zero matrix.
WeightMatrix ppmi_weight(const CountMatrix& counts);

// max(0, 14 + log2(2 c_ij / (f_i + f_j))) with f the lemma frequencies.
WeightMatrix logdice_weight(const CountMatrix& counts, const std::vector<std::uint64_t>& frequencies);

WeightMatrix raw_weight(const CountMatrix& counts);

// Cosine of weighted rows i and j; 0 when either row is all zero.
double cosine(const WeightMatrix& weights, std::size_t i, std::size_t j);

struct Neighbor {
  std::string lemma;
  double similarity = 0.0;
  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

// Top-k by cosine similarity, target excluded; ties broken lexicographically.
std::vector<Neighbor> cosine_neighbors(const DsmMatrix& matrix, std::string_view target, std::size_t k);

struct FieldEdge {
  std::string a;
  std::string b;
  double similarity = 0.0;
  friend bool operator==(const FieldEdge&, const FieldEdge&) = default;
};

struct FieldGraph {
  std::string target;
  std::vector<Neighbor> nodes;  // target first (similarity 1), then neighbors
  std::vector<FieldEdge> edges;
  friend bool operator==(const FieldGraph&, const FieldGraph&) = default;
};

FieldGraph semantic_field(const DsmMatrix& matrix, std::string_view target, const DsmConfig& config);

struct FieldOverlap {
  std::size_t shared = 0;
  bool a_contains_b = false;
  bool b_contains_a = false;
  friend bool operator==(const FieldOverlap&, const FieldOverlap&) = default;
};

FieldOverlap field_overlap(const DsmMatrix& matrix, std::string_view a, std::string_view b, std::size_t k);

std::string to_dot(const FieldGraph& graph);
std::string to_json(const FieldGraph& graph);

}  // namespace diachron
