#pragma once

// Windowed cooccurrence queries over a PositionalIndex.
//
// "x is associated with y within w" means: some occurrence of a member of y
// lies at word distance 1..w from the x occurrence, in the same document.
// Each x occurrence counts at most once, however many y occurrences are near.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "diachron/chrono.hpp"
#include "diachron/index.hpp"
#include "diachron/rational.hpp"

namespace diachron {

inline constexpr int kDefaultWindow = 5;

enum class Scope { all, dated };

Scope parse_scope(const std::string& name);
DocSubset scope_subset(const Corpus& corpus, Scope scope);

// One flag per entry of `xs`: true when some entry of `ys` is within `window`
// positions in the same document. Both inputs sorted by (doc, pos).
std::vector<char> near_flags(const std::vector<Posting>& xs, const std::vector<Posting>& ys, int window);

// Counts of group occurrences per bin; sums to the frequency over binned docs.
std::vector<std::uint64_t> frequency_series(const PositionalIndex& index, const BinSet& bins, const LemmaGroup& group);

struct AssociationCounts {
  std::uint64_t occurrences = 0;
  std::uint64_t associations = 0;
  friend bool operator==(const AssociationCounts&, const AssociationCounts&) = default;
};

AssociationCounts association_hits(const PositionalIndex& index, const LemmaGroup& target, const LemmaGroup& probe,
                                   int window, const DocSubset& subset);
AssociationCounts association_hits(const PositionalIndex& index, const LemmaGroup& target, const LemmaGroup& probe,
                                   int window = kDefaultWindow, Scope scope = Scope::all);

struct CoocRow {
  std::string target;
  std::uint64_t occurrences = 0;
  std::uint64_t associations = 0;
  Rational percent;  // 100 * associations / occurrences
  friend bool operator==(const CoocRow&, const CoocRow&) = default;
};

CoocRow make_cooc_row(std::string target, std::uint64_t occurrences, std::uint64_t associations);

// Sorted by percent descending, then occurrences descending, then input order.
void sort_cooc_rows(std::vector<CoocRow>& rows);

std::vector<CoocRow> association_table(const PositionalIndex& index, const std::vector<LemmaGroup>& targets,
                                       const LemmaGroup& probe, int window = kDefaultWindow, Scope scope = Scope::dated);

struct DiceCounts {
  std::uint64_t f_a = 0;
  std::uint64_t f_b = 0;
  std::uint64_t hits_a = 0;
  std::uint64_t hits_b = 0;
  // (hits_a + hits_b) / (f_a + f_b); 0 when both groups are absent.
  Rational dice() const { return Rational(hits_a + hits_b, f_a + f_b); }
  friend bool operator==(const DiceCounts&, const DiceCounts&) = default;
};

DiceCounts dice_counts(const PositionalIndex& index, const LemmaGroup& a, const LemmaGroup& b, int window,
                       const DocSubset& subset);
Rational dice_score(const PositionalIndex& index, const LemmaGroup& a, const LemmaGroup& b, int window,
                    const DocSubset& subset);

struct DicePoint {
  std::size_t bin_index = 0;
  DiceCounts counts;
  Rational dice;
  friend bool operator==(const DicePoint&, const DicePoint&) = default;
};

std::vector<DicePoint> dice_series(const PositionalIndex& index, const BinSet& bins, const LemmaGroup& a,
                                   const LemmaGroup& b, int window = kDefaultWindow);

struct KwicLine {
  std::string doc_id;
  std::uint32_t position = 0;  // token index within the document
  std::vector<std::string> left;
  std::string keyword;
  std::vector<std::string> right;
  std::optional<int> year;
  friend bool operator==(const KwicLine&, const KwicLine&) = default;
};

struct KwicOptions {
  int window = kDefaultWindow;
  std::size_t limit = 100;
  std::optional<std::pair<int, int>> years;  // inclusive, on assigned years
  DatingConfig dating;
};

// Up to `limit` lines in corpus order. Contexts hold up to `window` word
// surfaces on each side, clipped at the document edges.
std::vector<KwicLine> concordance(const PositionalIndex& index, const LemmaGroup& group, const KwicOptions& options = {});

struct LexiconRow {
  std::string group;
  std::uint64_t all = 0;
  std::uint64_t dated = 0;
  friend bool operator==(const LexiconRow&, const LexiconRow&) = default;
};

// Frequency of every group over all and over dated documents.
std::vector<LexiconRow> lexicon_report(const Corpus& corpus, const std::vector<LemmaGroup>& groups);
LexiconRow lexicon_total(const std::vector<LexiconRow>& rows);

// Throws GroupOverlapError when the two groups share a lemma.
void require_disjoint(const LemmaGroup& a, const LemmaGroup& b);

}  // namespace diachron
