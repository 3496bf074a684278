#pragma once

// Corpus model: dated documents of lemmatized tokens, read from and written to
// the vertical (one token per line) format.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace diachron {

inline constexpr int kDefaultEraMin = 300;
inline constexpr int kDefaultEraMax = 1600;

enum class DateKind { exact, interval, undated };

struct DateSpec {
  DateKind kind = DateKind::undated;
  std::optional<int> year_min;
  std::optional<int> year_max;

  static DateSpec exact(int year) { return {DateKind::exact, year, year}; }
  static DateSpec interval(int lo, int hi) { return {DateKind::interval, lo, hi}; }
  static DateSpec undated() { return {}; }

  bool dated() const { return kind != DateKind::undated; }
  friend bool operator==(const DateSpec&, const DateSpec&) = default;
};

struct Token {
  std::string surface;
  std::string lemma;
  std::optional<std::string> pos;
  friend bool operator==(const Token&, const Token&) = default;
};

struct Document {
  std::string id;
  DateSpec date;
  std::string collection;
  std::optional<std::string> region;
  std::vector<Token> tokens;
  friend bool operator==(const Document&, const Document&) = default;
};

struct CorpusStats {
  std::uint64_t n_documents = 0;
  std::uint64_t n_dated = 0;
  std::uint64_t n_tokens = 0;
  std::uint64_t n_dated_tokens = 0;
  // Absent when no document is dated.
  std::optional<std::pair<int, int>> year_span;
  friend bool operator==(const CorpusStats&, const CorpusStats&) = default;
};

// Lemmas that do not count as words: they stay in the token stream but take
// no position in cooccurrence windows and add no binning mass.
class SkipList {
 public:
  SkipList() = default;
  SkipList(bool skip_punctuation, std::set<std::string> extra)
      : skip_punctuation_(skip_punctuation), extra_(std::move(extra)) {}

  static SkipList none() { return SkipList(false, {}); }

  bool skips(std::string_view lemma) const;
  bool skip_punctuation() const { return skip_punctuation_; }
  const std::set<std::string>& extra() const { return extra_; }

  friend bool operator==(const SkipList&, const SkipList&) = default;

 private:
  bool skip_punctuation_ = true;
  std::set<std::string> extra_;
};

// True when `lemma` is exactly one punctuation character (ASCII or common
// Unicode punctuation used in Latin editions).
bool is_punctuation_lemma(std::string_view lemma);

class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<Document> documents, SkipList skip = {});

  const std::vector<Document>& documents() const { return documents_; }
  const CorpusStats& stats() const { return stats_; }
  const SkipList& skip() const { return skip_; }
  std::size_t size() const { return documents_.size(); }
  bool empty() const { return documents_.empty(); }

  // Index of the document with this id, if any.
  std::optional<std::size_t> find(std::string_view id) const;

  // Non-skipped tokens of document `doc`.
  std::uint64_t word_count(std::size_t doc) const { return word_counts_[doc]; }

  // Stable 64-bit content hash over documents and skip list.
  std::uint64_t fingerprint() const { return fingerprint_; }

  friend bool operator==(const Corpus& a, const Corpus& b) {
    return a.documents_ == b.documents_ && a.skip_ == b.skip_;
  }

 private:
  std::vector<Document> documents_;
  SkipList skip_;
  CorpusStats stats_;
  std::vector<std::uint64_t> word_counts_;
  std::uint64_t fingerprint_ = 0;
};

CorpusStats compute_stats(const std::vector<Document>& documents);

struct ParseOptions {
  bool strict = true;
  int era_min = kDefaultEraMin;
  int era_max = kDefaultEraMax;
  SkipList skip;
};

struct Reject {
  std::string id;
  std::size_t line = 0;
  std::string reason;
  friend bool operator==(const Reject&, const Reject&) = default;
};

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(Reject reject);
  const Reject& reject() const { return reject_; }

 private:
  Reject reject_;
};

struct ParseResult {
  Corpus corpus;
  std::vector<Reject> rejects;
};

// Throws ParseError on the first defect in strict mode; in lenient mode the
// offending document is dropped and recorded in `rejects`.
ParseResult parse_vertical(std::istream& in, const ParseOptions& options = {});
ParseResult parse_vertical(std::string_view text, const ParseOptions& options = {});

void serialize_vertical(const Corpus& corpus, std::ostream& out);
std::string serialize_vertical(const Corpus& corpus);

// One JSON object per line: {"id":..., "line":..., "reason":...}.
void write_rejects_jsonl(const std::vector<Reject>& rejects, std::ostream& out);

std::string escape_attribute(std::string_view value);
std::string unescape_attribute(std::string_view value);

// ---------------------------------------------------------------------------
// Lemma groups

struct LemmaGroup {
  std::string name;
  std::set<std::string> members;

  LemmaGroup() = default;
  LemmaGroup(std::string group_name, std::set<std::string> group_members);

  bool contains(std::string_view lemma) const {
    return members.find(std::string(lemma)) != members.end();
  }
  friend bool operator==(const LemmaGroup&, const LemmaGroup&) = default;
};

class GroupError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class GroupOverlapError : public GroupError {
 public:
  GroupOverlapError(std::string lemma, std::string first, std::string second);
  const std::string& lemma() const { return lemma_; }
  const std::string& first() const { return first_; }
  const std::string& second() const { return second_; }

 private:
  std::string lemma_, first_, second_;
};

// Throws GroupError for an empty group or unnamed group, GroupOverlapError
// when two groups share a member.
void validate_groups(const std::vector<LemmaGroup>& groups);

std::uint64_t group_frequency(const Corpus& corpus, const LemmaGroup& group,
                              bool dated_only = false);

// Lower-cases ASCII and the Latin-1 supplement / Latin Extended-A letters.
std::string fold_case(std::string_view text);

}  // namespace diachron
