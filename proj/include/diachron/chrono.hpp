#pragma once

// Working-year assignment and equal-token-mass chronological binning.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "diachron/corpus.hpp"

namespace diachron {

inline constexpr std::uint64_t kDefaultTargetMass = 1'000'000;
inline constexpr int kDefaultMaxSpan = 100;

enum class YearPolicy { midpoint, start, end };

YearPolicy parse_year_policy(const std::string& name);
std::string to_string(YearPolicy policy);

struct DatingConfig {
  YearPolicy policy = YearPolicy::midpoint;
  // Interval-dated documents wider than this many years are excluded.
  int max_span = kDefaultMaxSpan;
};

struct YearAssignment {
  std::string doc_id;
  int year = 0;
  int span_width = 0;
  friend bool operator==(const YearAssignment&, const YearAssignment&) = default;
};

class UndatedDocumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// std::nullopt means the document is excluded (span wider than max_span).
// Throws UndatedDocumentError for undated documents.
std::optional<YearAssignment> assign_year(const Document& doc, const DatingConfig& config = {});

struct ChronoBin {
  std::size_t index = 0;
  int year_start = 0;
  int year_end = 0;
  std::uint64_t token_mass = 0;
  std::vector<std::string> doc_ids;
  friend bool operator==(const ChronoBin&, const ChronoBin&) = default;
};

struct ExcludedDocument {
  std::string doc_id;
  std::string reason;
  friend bool operator==(const ExcludedDocument&, const ExcludedDocument&) = default;
};

struct SliceConfig {
  std::uint64_t target_mass = kDefaultTargetMass;
  DatingConfig dating;
};

// Result of slicing one corpus. `doc_bins[i]` is the bin of corpus document i,
// or npos for undated and excluded documents.
struct BinSet {
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::vector<ChronoBin> bins;
  std::vector<std::size_t> doc_bins;
  std::vector<ExcludedDocument> excluded;
  // Set when the final bin holds less than half the target mass.
  bool last_is_remainder = false;
  std::uint64_t target_mass = 0;
  std::uint64_t corpus_fingerprint = 0;

  friend bool operator==(const BinSet&, const BinSet&) = default;
};

class EmptyDatedCorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CorpusMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sorts dated, non-excluded documents by (assigned year, id) and closes a bin
// as soon as its word mass reaches target_mass. Documents are never split.
// Documents with no countable words are excluded. Throws EmptyDatedCorpusError
// when nothing is left to bin.
BinSet slice_equal_mass(const Corpus& corpus, const SliceConfig& config = {});

// Assigned year of every binnable document (index-aligned with the corpus;
// nullopt for undated, excluded or empty documents).
std::vector<std::optional<int>> assigned_years(const Corpus& corpus, const DatingConfig& config);

// "{year_start}–{year_end}" (en dash).
std::string bin_label(const ChronoBin& bin);
double bin_midpoint(const ChronoBin& bin);

// Shortest decimal rendering of a midpoint year ("950", "950.5").
std::string format_year(double year);

}  // namespace diachron
