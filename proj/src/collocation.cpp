#include "diachron/collocation.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

namespace diachron {

Scope parse_scope(const std::string& name) {
  if (name == "all") return Scope::all;
  if (name == "dated") return Scope::dated;
  throw std::invalid_argument(fmt::format("unknown scope \"{}\" (expected all or dated)", name));
}

DocSubset scope_subset(const Corpus& corpus, Scope scope) {
  return scope == Scope::all ? DocSubset::all(corpus) : DocSubset::dated(corpus);
}

void require_disjoint(const LemmaGroup& a, const LemmaGroup& b) {
  for (const auto& m : a.members)
    if (b.members.count(m)) throw GroupOverlapError(m, a.name, b.name);
}

namespace {

void check_window(int window) {
  if (window < 1) throw std::invalid_argument(fmt::format("window radius must be at least 1 (got {})", window));
}

void check_bins(const PositionalIndex& index, const BinSet& bins) {
  if (bins.corpus_fingerprint != index.fingerprint() || bins.doc_bins.size() != index.corpus().size())
    throw CorpusMismatchError("bins were computed on a different corpus than the index");
}

}  // namespace

std::vector<char> near_flags(const std::vector<Posting>& xs, const std::vector<Posting>& ys, int window) {
  std::vector<char> flags(xs.size(), 0);
  std::size_t j = 0;
  const auto w = static_cast<std::uint32_t>(window);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Posting x = xs[i];
    const std::uint32_t lo = x.pos > w ? x.pos - w : 0;
    // ys[j] is the first posting not before (x.doc, lo); xs ascend, so j only advances.
    while (j < ys.size() && (ys[j].doc < x.doc || (ys[j].doc == x.doc && ys[j].pos < lo))) ++j;
    for (std::size_t k = j; k < ys.size() && ys[k].doc == x.doc && ys[k].pos <= x.pos + w; ++k) {
      if (ys[k].pos != x.pos) {
        flags[i] = 1;
        break;
      }
    }
  }
  return flags;
}

std::vector<std::uint64_t> frequency_series(const PositionalIndex& index, const BinSet& bins, const LemmaGroup& group) {
  check_bins(index, bins);
  std::vector<std::uint64_t> counts(bins.bins.size(), 0);
  for (const auto& p : index.group_postings(group)) {
    std::size_t b = bins.doc_bins[p.doc];
    if (b != BinSet::npos) ++counts[b];
  }
  return counts;
}

AssociationCounts association_hits(const PositionalIndex& index, const LemmaGroup& target, const LemmaGroup& probe,
                                   int window, const DocSubset& subset) {
  require_disjoint(target, probe);
  check_window(window);
  const auto xs = index.group_postings(target);
  const auto ys = index.group_postings(probe);
  const auto flags = near_flags(xs, ys, window);
  AssociationCounts out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!subset.contains(xs[i].doc)) continue;
    ++out.occurrences;
    out.associations += flags[i] ? 1 : 0;
  }
  return out;
}

AssociationCounts association_hits(const PositionalIndex& index, const LemmaGroup& target, const LemmaGroup& probe,
                                   int window, Scope scope) {
  return association_hits(index, target, probe, window, scope_subset(index.corpus(), scope));
}

CoocRow make_cooc_row(std::string target, std::uint64_t occurrences, std::uint64_t associations) {
  if (associations > occurrences) throw std::invalid_argument("associations exceed occurrences");
  return {std::move(target), occurrences, associations, percent(occurrences, associations)};
}

void sort_cooc_rows(std::vector<CoocRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const CoocRow& a, const CoocRow& b) {
    if (a.percent != b.percent) return a.percent > b.percent;
    return a.occurrences > b.occurrences;
  });
}

std::vector<CoocRow> association_table(const PositionalIndex& index, const std::vector<LemmaGroup>& targets,
                                       const LemmaGroup& probe, int window, Scope scope) {
  for (const auto& t : targets) require_disjoint(t, probe);
  check_window(window);
  const auto subset = scope_subset(index.corpus(), scope);
  std::vector<CoocRow> rows;
  rows.reserve(targets.size());
  for (const auto& t : targets) {
    auto c = association_hits(index, t, probe, window, subset);
    rows.push_back(make_cooc_row(t.name, c.occurrences, c.associations));
  }
  sort_cooc_rows(rows);
  return rows;
}

DiceCounts dice_counts(const PositionalIndex& index, const LemmaGroup& a, const LemmaGroup& b, int window,
                       const DocSubset& subset) {
  require_disjoint(a, b);
  check_window(window);
  const auto pa = index.group_postings(a);
  const auto pb = index.group_postings(b);
  const auto ha = near_flags(pa, pb, window);
  const auto hb = near_flags(pb, pa, window);
  DiceCounts c;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    if (!subset.contains(pa[i].doc)) continue;
    ++c.f_a;
    c.hits_a += ha[i] ? 1 : 0;
  }
  for (std::size_t i = 0; i < pb.size(); ++i) {
    if (!subset.contains(pb[i].doc)) continue;
    ++c.f_b;
    c.hits_b += hb[i] ? 1 : 0;
  }
  return c;
}

Rational dice_score(const PositionalIndex& index, const LemmaGroup& a, const LemmaGroup& b, int window,
                    const DocSubset& subset) {
  return dice_counts(index, a, b, window, subset).dice();
}

std::vector<DicePoint> dice_series(const PositionalIndex& index, const BinSet& bins, const LemmaGroup& a,
                                   const LemmaGroup& b, int window) {
  check_bins(index, bins);
  require_disjoint(a, b);
  check_window(window);
  const auto pa = index.group_postings(a);
  const auto pb = index.group_postings(b);
  const auto ha = near_flags(pa, pb, window);
  const auto hb = near_flags(pb, pa, window);
  std::vector<DicePoint> points(bins.bins.size());
  for (std::size_t i = 0; i < points.size(); ++i) points[i].bin_index = i;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    std::size_t bin = bins.doc_bins[pa[i].doc];
    if (bin == BinSet::npos) continue;
    ++points[bin].counts.f_a;
    points[bin].counts.hits_a += ha[i] ? 1 : 0;
  }
  for (std::size_t i = 0; i < pb.size(); ++i) {
    std::size_t bin = bins.doc_bins[pb[i].doc];
    if (bin == BinSet::npos) continue;
    ++points[bin].counts.f_b;
    points[bin].counts.hits_b += hb[i] ? 1 : 0;
  }
  for (auto& p : points) p.dice = p.counts.dice();
  return points;
}

std::vector<KwicLine> concordance(const PositionalIndex& index, const LemmaGroup& group, const KwicOptions& options) {
  check_window(options.window);
  std::vector<KwicLine> lines;
  if (options.limit == 0) return lines;
  const Corpus& corpus = index.corpus();
  const auto years = assigned_years(corpus, options.dating);
  const auto w = static_cast<std::uint32_t>(options.window);

  auto surface_at = [&](std::size_t doc, std::uint32_t pos) {
    const Token& t = corpus.documents()[doc].tokens[index.token_index(doc, pos)];
    return t.surface.empty() ? t.lemma : t.surface;
  };

  for (const auto& p : index.group_postings(group)) {
    const auto& year = years[p.doc];
    if (options.years && (!year || *year < options.years->first || *year > options.years->second)) continue;
    KwicLine line;
    line.doc_id = corpus.documents()[p.doc].id;
    line.position = index.token_index(p.doc, p.pos);
    line.year = year;
    line.keyword = surface_at(p.doc, p.pos);
    const auto n = static_cast<std::uint32_t>(index.words(p.doc).size());
    for (std::uint32_t q = p.pos > w ? p.pos - w : 0; q < p.pos; ++q) line.left.push_back(surface_at(p.doc, q));
    for (std::uint32_t q = p.pos + 1; q < n && q <= p.pos + w; ++q) line.right.push_back(surface_at(p.doc, q));
    lines.push_back(std::move(line));
    if (lines.size() >= options.limit) break;
  }
  return lines;
}

std::vector<LexiconRow> lexicon_report(const Corpus& corpus, const std::vector<LemmaGroup>& groups) {
  std::vector<LexiconRow> rows;
  rows.reserve(groups.size());
  for (const auto& g : groups) rows.push_back({g.name, group_frequency(corpus, g, false), group_frequency(corpus, g, true)});
  return rows;
}

LexiconRow lexicon_total(const std::vector<LexiconRow>& rows) {
  LexiconRow total{"total", 0, 0};
  for (const auto& r : rows) {
    total.all += r.all;
    total.dated += r.dated;
  }
  return total;
}

}  // namespace diachron
