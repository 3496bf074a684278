#include "diachron/chrono.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

#include <fmt/format.h>

namespace diachron {

YearPolicy parse_year_policy(const std::string& name) {
  if (name == "midpoint") return YearPolicy::midpoint;
  if (name == "start") return YearPolicy::start;
  if (name == "end") return YearPolicy::end;
  throw std::invalid_argument(fmt::format("unknown date policy \"{}\" (expected midpoint, start or end)", name));
}

std::string to_string(YearPolicy policy) {
  switch (policy) {
    case YearPolicy::midpoint: return "midpoint";
    case YearPolicy::start: return "start";
    case YearPolicy::end: return "end";
  }
  return "midpoint";
}

namespace {

int floor_div2(int sum) { return sum >= 0 ? sum / 2 : -((-sum + 1) / 2); }

}  // namespace

std::optional<YearAssignment> assign_year(const Document& doc, const DatingConfig& config) {
  if (!doc.date.dated()) throw UndatedDocumentError(fmt::format("document \"{}\" is undated", doc.id));
  const int lo = *doc.date.year_min;
  const int hi = *doc.date.year_max;
  YearAssignment a{doc.id, lo, hi - lo};
  if (doc.date.kind == DateKind::exact) return a;
  if (a.span_width > config.max_span) return std::nullopt;
  switch (config.policy) {
    case YearPolicy::midpoint: a.year = floor_div2(lo + hi); break;
    case YearPolicy::start: a.year = lo; break;
    case YearPolicy::end: a.year = hi; break;
  }
  return a;
}

std::vector<std::optional<int>> assigned_years(const Corpus& corpus, const DatingConfig& config) {
  std::vector<std::optional<int>> years(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& d = corpus.documents()[i];
    if (!d.date.dated() || corpus.word_count(i) == 0) continue;
    if (auto a = assign_year(d, config)) years[i] = a->year;
  }
  return years;
}

BinSet slice_equal_mass(const Corpus& corpus, const SliceConfig& config) {
  if (config.target_mass < 1) throw std::invalid_argument("target mass must be at least 1");

  BinSet out;
  out.target_mass = config.target_mass;
  out.corpus_fingerprint = corpus.fingerprint();
  out.doc_bins.assign(corpus.size(), BinSet::npos);

  struct Entry {
    int year;
    const std::string* id;
    std::size_t doc;
  };
  std::vector<Entry> order;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& d = corpus.documents()[i];
    if (!d.date.dated()) continue;
    auto a = assign_year(d, config.dating);
    if (!a) {
      out.excluded.push_back({d.id, fmt::format("date span {} years exceeds maximum {}", *d.date.year_max - *d.date.year_min,
                                                config.dating.max_span)});
      continue;
    }
    if (corpus.word_count(i) == 0) {
      out.excluded.push_back({d.id, "no countable words"});
      continue;
    }
    order.push_back({a->year, &d.id, i});
  }
  if (order.empty()) throw EmptyDatedCorpusError("no dated documents to bin");

  std::sort(order.begin(), order.end(),
            [](const Entry& a, const Entry& b) { return std::tie(a.year, *a.id) < std::tie(b.year, *b.id); });

  ChronoBin current;
  bool open = false;
  for (const auto& e : order) {
    if (!open) {
      current = ChronoBin{};
      current.index = out.bins.size();
      current.year_start = e.year;
      open = true;
    }
    current.year_end = e.year;
    current.token_mass += corpus.word_count(e.doc);
    current.doc_ids.push_back(*e.id);
    out.doc_bins[e.doc] = current.index;
    if (current.token_mass >= config.target_mass) {
      out.bins.push_back(std::move(current));
      open = false;
    }
  }
  if (open) {
    out.last_is_remainder = current.token_mass * 2 < config.target_mass;
    out.bins.push_back(std::move(current));
  }
  return out;
}

std::string bin_label(const ChronoBin& bin) { return fmt::format("{}–{}", bin.year_start, bin.year_end); }

double bin_midpoint(const ChronoBin& bin) { return (static_cast<double>(bin.year_start) + bin.year_end) / 2.0; }

std::string format_year(double year) { return fmt::format("{}", year); }

}  // namespace diachron
