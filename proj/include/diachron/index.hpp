#pragma once

// Positional inverted index over lemmas.
//
// Positions count only non-skipped tokens (words): the word at position p of a
// document is its p-th non-punctuation token. Windows are measured in these
// positions and never cross document boundaries.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "diachron/chrono.hpp"
#include "diachron/corpus.hpp"

namespace diachron {

using LemmaId = std::uint32_t;

struct Posting {
  std::uint32_t doc = 0;
  std::uint32_t pos = 0;
  friend auto operator<=>(const Posting&, const Posting&) = default;
};

// Selection of corpus documents, as a membership mask aligned with the corpus.
class DocSubset {
 public:
  DocSubset() = default;
  explicit DocSubset(std::vector<char> mask) : mask_(std::move(mask)) {}

  static DocSubset all(const Corpus& corpus);
  static DocSubset dated(const Corpus& corpus);
  static DocSubset none(const Corpus& corpus);
  // Documents placed in bin `bin` of `bins`.
  static DocSubset of_bin(const BinSet& bins, std::size_t bin);
  // Documents placed in any bin.
  static DocSubset binned(const BinSet& bins);
  // Binnable documents whose assigned year lies in [first, last].
  static DocSubset years(const Corpus& corpus, int first, int last, const DatingConfig& dating = {});

  bool contains(std::size_t doc) const { return doc < mask_.size() && mask_[doc] != 0; }
  std::size_t size() const { return mask_.size(); }
  std::size_t count() const;
  const std::vector<char>& mask() const { return mask_; }

  friend bool operator==(const DocSubset&, const DocSubset&) = default;

 private:
  std::vector<char> mask_;
};

class PositionalIndex {
 public:
  // Builds the index, splitting the documents over `threads` workers. The
  // result does not depend on the thread count.
  static PositionalIndex build(std::shared_ptr<const Corpus> corpus, unsigned threads = 1);

  const Corpus& corpus() const { return *corpus_; }
  std::uint64_t fingerprint() const { return corpus_->fingerprint(); }

  std::size_t vocabulary_size() const { return lemmas_.size(); }
  const std::string& lemma(LemmaId id) const { return lemmas_[id]; }
  std::optional<LemmaId> id(std::string_view lemma) const;

  // Sorted by (document, position).
  const std::vector<Posting>& postings(LemmaId id) const { return postings_[id]; }
  std::uint64_t frequency(LemmaId id) const { return postings_[id].size(); }
  std::uint64_t frequency(std::string_view lemma) const;

  // Word sequence of a document as lemma ids.
  const std::vector<LemmaId>& words(std::size_t doc) const { return words_[doc]; }
  // Token index (in Document::tokens) of word `pos` of document `doc`.
  std::uint32_t token_index(std::size_t doc, std::uint32_t pos) const { return token_of_word_[doc][pos]; }

  std::uint64_t indexed_tokens() const { return indexed_tokens_; }

  // Merged, sorted postings of every member of the group present in the index.
  std::vector<Posting> group_postings(const LemmaGroup& group) const;

 private:
  std::shared_ptr<const Corpus> corpus_;
  std::vector<std::string> lemmas_;
  std::unordered_map<std::string, LemmaId> ids_;
  std::vector<std::vector<Posting>> postings_;
  std::vector<std::vector<LemmaId>> words_;
  std::vector<std::vector<std::uint32_t>> token_of_word_;
  std::uint64_t indexed_tokens_ = 0;
};

inline PositionalIndex build_index(std::shared_ptr<const Corpus> corpus, unsigned threads = 1) {
  return PositionalIndex::build(std::move(corpus), threads);
}

}  // namespace diachron
