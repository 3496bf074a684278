#include "diachron/fixture.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include <fmt/format.h>

#include "diachron/chrono.hpp"
#include "diachron/corpus.hpp"

namespace diachron {

namespace {

using json = nlohmann::json;

std::pair<int, int> int_pair(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
    throw PlanError(fmt::format("{} must be a two-element integer array", what));
  return {j[0].get<int>(), j[1].get<int>()};
}

std::pair<std::size_t, std::size_t> size_pair(const json& j, const char* what) {
  auto [a, b] = int_pair(j, what);
  if (a < 0 || b < a) throw PlanError(fmt::format("{} must be a non-negative [min, max] range", what));
  return {static_cast<std::size_t>(a), static_cast<std::size_t>(b)};
}

std::optional<std::pair<int, int>> optional_years(const json& j) {
  if (!j.contains("years")) return std::nullopt;
  auto y = int_pair(j["years"], "years");
  if (y.second < y.first) throw PlanError("years range is reversed");
  return y;
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j[key].get<T>();
  } catch (const json::exception&) {
    throw PlanError(fmt::format("plan field \"{}\" has the wrong type", key));
  }
}

// Deterministic bounded draws; the standard distributions are not portable
// across library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t v;
    do v = engine_();
    while (v >= limit);
    return v % n;
  }
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }
  int between(int lo, int hi) { return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo) + 1)); }
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return p > 0 && unit() < p; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

const char* const kSyllables[] = {"ba", "ce", "di", "fo", "gu", "la", "me", "ni", "po", "ru", "sa", "te", "vi", "xo", "ze"};
const char* const kEndings[] = {"um", "us", "a", "is"};
const char* const kPunctuation[] = {",", ".", ";", ":"};

std::string filler_word(std::size_t i) {
  constexpr std::size_t n = std::size(kSyllables);
  constexpr std::size_t space = n * n * n * std::size(kEndings);
  // 7919 is coprime with `space`, so this is a permutation that spreads
  // consecutive indices over all syllables and endings.
  if (i < space) i = (i * 7919) % space;
  return fmt::format("{}{}{}{}", kSyllables[i % n], kSyllables[(i / n) % n], kSyllables[(i / (n * n)) % n],
                     kEndings[(i / (n * n * n)) % std::size(kEndings)]);
}

// A planted unit: nullopt slots are filler words drawn at layout time.
using Unit = std::vector<std::optional<std::string>>;

struct DocDraft {
  Document doc;
  std::optional<int> assigned;
  std::size_t filler = 0;
  std::vector<Unit> units;
  std::map<std::string, std::uint64_t> planted;
  std::map<std::string, std::uint64_t> pairs;
};

std::string capitalize(const std::string& s) {
  std::string out = s;
  if (!out.empty() && out[0] >= 'a' && out[0] <= 'z') out[0] = static_cast<char>(out[0] - 'a' + 'A');
  return out;
}

nlohmann::ordered_json date_json(const DateSpec& d) {
  nlohmann::ordered_json j;
  j["kind"] = d.kind == DateKind::exact ? "exact" : d.kind == DateKind::interval ? "interval" : "undated";
  if (d.year_min) j["year_min"] = *d.year_min;
  if (d.year_max) j["year_max"] = *d.year_max;
  return j;
}

}  // namespace

FixturePlan parse_plan(const json& j) {
  if (!j.is_object()) throw PlanError("plan must be a JSON object");
  FixturePlan p;
  if (j.contains("eras")) {
    if (!j["eras"].is_array()) throw PlanError("eras must be an array");
    for (const auto& e : j["eras"]) {
      EraPlan era;
      if (!e.contains("years")) throw PlanError("era without years");
      era.years = int_pair(e["years"], "era years");
      era.documents = get_or<std::size_t>(e, "documents", 0);
      if (e.contains("tokens")) era.tokens = size_pair(e["tokens"], "era tokens");
      era.interval_fraction = get_or<double>(e, "interval_fraction", 0.0);
      if (e.contains("interval_width")) era.interval_width = int_pair(e["interval_width"], "interval_width");
      era.wide_fraction = get_or<double>(e, "wide_fraction", 0.0);
      p.eras.push_back(era);
    }
  }
  p.undated_documents = get_or<std::size_t>(j, "undated_documents", 0);
  if (j.contains("undated_tokens")) p.undated_tokens = size_pair(j["undated_tokens"], "undated_tokens");
  p.filler_vocabulary = get_or<std::size_t>(j, "filler_vocabulary", p.filler_vocabulary);
  p.punctuation_rate = get_or<double>(j, "punctuation_rate", p.punctuation_rate);
  p.case_variation = get_or<double>(j, "case_variation", p.case_variation);
  p.isolation = get_or<int>(j, "isolation", p.isolation);
  if (j.contains("collections")) p.collections = get_or<std::vector<std::string>>(j, "collections", {});
  for (const auto& e : j.value("plants", json::array())) {
    PlantPlan plant;
    plant.lemma = get_or<std::string>(e, "lemma", "");
    plant.count = get_or<std::size_t>(e, "count", 0);
    plant.years = optional_years(e);
    p.plants.push_back(plant);
  }
  for (const auto& e : j.value("pairs", json::array())) {
    PairPlan pair;
    pair.a = get_or<std::string>(e, "a", "");
    pair.b = get_or<std::string>(e, "b", "");
    pair.count = get_or<std::size_t>(e, "count", 0);
    pair.gap = get_or<int>(e, "gap", 1);
    pair.years = optional_years(e);
    p.pairs.push_back(pair);
  }
  for (const auto& e : j.value("clusters", json::array())) {
    ClusterPlan c;
    c.name = get_or<std::string>(e, "name", "");
    c.members = get_or<std::vector<std::string>>(e, "members", {});
    c.context = get_or<std::vector<std::string>>(e, "context", {});
    c.occurrences = get_or<std::size_t>(e, "occurrences", 0);
    c.radius = get_or<int>(e, "radius", 2);
    c.years = optional_years(e);
    p.clusters.push_back(c);
  }
  validate_plan(p);
  return p;
}

FixturePlan load_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PlanError(fmt::format("cannot open plan file {}", path));
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw PlanError(fmt::format("plan file {} is not valid JSON: {}", path, e.what()));
  }
  return parse_plan(j);
}

void validate_plan(const FixturePlan& p) {
  auto check_lemma = [](const std::string& l) {
    if (l.empty() || l != fold_case(l) || l.find_first_of(" \t\r\n") != std::string::npos || is_punctuation_lemma(l))
      throw PlanError(fmt::format("planted lemma \"{}\" must be a non-empty lower-case word", l));
  };
  if (p.isolation < 1) throw PlanError("isolation must be at least 1");
  if (p.collections.empty()) throw PlanError("at least one collection label is required");
  if (p.filler_vocabulary < 1 || p.filler_vocabulary > 10000)
    throw PlanError("filler_vocabulary must lie in [1, 10000]");
  if (p.eras.empty() && p.undated_documents == 0) throw PlanError("plan produces no documents");
  for (const auto& e : p.eras) {
    if (e.years.first > e.years.second) throw PlanError("era years reversed");
    if (e.years.first < kDefaultEraMin || e.years.second > kDefaultEraMax)
      throw PlanError(fmt::format("era years must lie in [{}, {}]", kDefaultEraMin, kDefaultEraMax));
    if (e.interval_width.first < 1 || e.interval_width.second < e.interval_width.first)
      throw PlanError("interval_width must be a [min, max] range of positive widths");
  }
  for (const auto& pl : p.plants) check_lemma(pl.lemma);
  std::set<std::string> paired;
  for (const auto& pr : p.pairs) {
    check_lemma(pr.a);
    check_lemma(pr.b);
    if (pr.a == pr.b) throw PlanError("a pair needs two distinct lemmas");
    if (pr.gap < 1 || pr.gap >= p.isolation) throw PlanError("pair gap must lie in [1, isolation)");
    paired.insert(pr.a);
    paired.insert(pr.b);
  }
  std::set<std::string> clustered;
  for (const auto& c : p.clusters) {
    if (c.members.empty() || c.context.empty()) throw PlanError("a cluster needs members and context lemmas");
    if (c.radius < 1) throw PlanError("cluster radius must be at least 1");
    for (const auto& l : c.members) {
      check_lemma(l);
      if (!clustered.insert(l).second) throw PlanError(fmt::format("lemma \"{}\" used twice in clusters", l));
    }
    for (const auto& l : c.context) {
      check_lemma(l);
      if (!clustered.insert(l).second) throw PlanError(fmt::format("lemma \"{}\" used twice in clusters", l));
    }
  }
  for (const auto& l : clustered) {
    if (paired.count(l)) throw PlanError(fmt::format("lemma \"{}\" is both clustered and paired", l));
    for (const auto& pl : p.plants)
      if (pl.lemma == l) throw PlanError(fmt::format("lemma \"{}\" is both clustered and planted", l));
  }
}

Fixture generate_fixture(const FixturePlan& plan, std::uint64_t seed) {
  validate_plan(plan);
  Rng rng(seed);

  std::set<std::string> planted_lemmas;
  for (const auto& pl : plan.plants) planted_lemmas.insert(pl.lemma);
  for (const auto& pr : plan.pairs) {
    planted_lemmas.insert(pr.a);
    planted_lemmas.insert(pr.b);
  }
  for (const auto& c : plan.clusters) {
    planted_lemmas.insert(c.members.begin(), c.members.end());
    planted_lemmas.insert(c.context.begin(), c.context.end());
  }

  std::vector<std::string> filler;
  for (std::size_t i = 0; filler.size() < plan.filler_vocabulary; ++i) {
    std::string w = filler_word(i);
    if (!planted_lemmas.count(w)) filler.push_back(std::move(w));
  }
  std::vector<double> cumulative;
  double acc = 0;
  for (std::size_t r = 0; r < filler.size(); ++r) {
    acc += 1.0 / static_cast<double>(r + 1);
    cumulative.push_back(acc);
  }
  auto draw_filler = [&]() -> const std::string& {
    double u = rng.unit() * acc;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    return filler[std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), filler.size() - 1)];
  };

  // Documents and dates.
  std::vector<DocDraft> drafts;
  const std::size_t total_docs =
      plan.undated_documents + [&] {
        std::size_t n = 0;
        for (const auto& e : plan.eras) n += e.documents;
        return n;
      }();
  const int id_width = std::max<int>(5, static_cast<int>(std::to_string(total_docs).size()));
  auto next_id = [&] { return fmt::format("d{:0{}}", drafts.size() + 1, id_width); };

  for (const auto& era : plan.eras) {
    for (std::size_t i = 0; i < era.documents; ++i) {
      DocDraft d;
      d.doc.id = next_id();
      d.doc.collection = plan.collections[rng.below(plan.collections.size())];
      if (rng.chance(era.interval_fraction)) {
        int lo = rng.between(era.years.first, era.years.second);
        int width = rng.chance(era.wide_fraction) ? rng.between(kDefaultMaxSpan + 1, kDefaultMaxSpan + 150)
                                                   : rng.between(era.interval_width.first, era.interval_width.second);
        int hi = std::min(lo + width, kDefaultEraMax);
        if (hi == lo) lo = hi - 1;
        d.doc.date = DateSpec::interval(lo, hi);
      } else {
        d.doc.date = DateSpec::exact(rng.between(era.years.first, era.years.second));
      }
      if (auto a = assign_year(d.doc)) d.assigned = a->year;
      d.filler = rng.between(era.tokens.first, era.tokens.second);
      drafts.push_back(std::move(d));
    }
  }
  for (std::size_t i = 0; i < plan.undated_documents; ++i) {
    DocDraft d;
    d.doc.id = next_id();
    d.doc.collection = plan.collections[rng.below(plan.collections.size())];
    d.filler = rng.between(plan.undated_tokens.first, plan.undated_tokens.second);
    drafts.push_back(std::move(d));
  }

  auto eligible = [&](const std::optional<std::pair<int, int>>& years) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < drafts.size(); ++i) {
      if (!years) {
        out.push_back(i);
      } else if (drafts[i].assigned && *drafts[i].assigned >= years->first && *drafts[i].assigned <= years->second) {
        out.push_back(i);
      }
    }
    if (out.empty()) throw PlanError("no generated document matches a planted year range");
    return out;
  };

  // Planted units.
  for (const auto& pl : plan.plants) {
    auto docs = eligible(pl.years);
    for (std::size_t k = 0; k < pl.count; ++k) {
      auto& d = drafts[docs[rng.below(docs.size())]];
      d.units.push_back(Unit{pl.lemma});
      ++d.planted[pl.lemma];
    }
  }
  for (const auto& pr : plan.pairs) {
    auto docs = eligible(pr.years);
    for (std::size_t k = 0; k < pr.count; ++k) {
      auto& d = drafts[docs[rng.below(docs.size())]];
      Unit u{pr.a};
      for (int g = 1; g < pr.gap; ++g) u.push_back(std::nullopt);
      u.push_back(pr.b);
      d.units.push_back(std::move(u));
      ++d.planted[pr.a];
      ++d.planted[pr.b];
      ++d.pairs[pr.a + "|" + pr.b];
    }
  }
  for (const auto& c : plan.clusters) {
    auto docs = eligible(c.years);
    for (const auto& member : c.members) {
      for (std::size_t k = 0; k < c.occurrences; ++k) {
        auto& d = drafts[docs[rng.below(docs.size())]];
        Unit u;
        for (int r = 0; r < 2 * c.radius + 1; ++r) {
          const std::string& l = r == c.radius ? member : c.context[rng.below(c.context.size())];
          u.push_back(l);
          ++d.planted[l];
        }
        d.units.push_back(std::move(u));
      }
    }
  }

  // Layout: filler gaps of at least `isolation` words between units.
  std::vector<Document> documents;
  for (auto& d : drafts) {
    rng.shuffle(d.units);
    const std::size_t u = d.units.size();
    std::vector<std::size_t> gaps(u + 1, 0);
    for (std::size_t g = 1; g + 1 < gaps.size(); ++g) gaps[g] = static_cast<std::size_t>(plan.isolation);
    const std::size_t required = u > 1 ? (u - 1) * static_cast<std::size_t>(plan.isolation) : 0;
    for (std::size_t extra = d.filler > required ? d.filler - required : 0; extra > 0; --extra) ++gaps[rng.below(gaps.size())];

    auto emit_filler_word = [&] {
      if (rng.chance(plan.punctuation_rate)) {
        const char* p = kPunctuation[rng.below(std::size(kPunctuation))];
        d.doc.tokens.push_back({p, p, std::nullopt});
      }
      const auto& w = draw_filler();
      d.doc.tokens.push_back({w, w, std::nullopt});
    };
    for (std::size_t g = 0; g < gaps.size(); ++g) {
      for (std::size_t k = 0; k < gaps[g]; ++k) emit_filler_word();
      if (g == u) break;
      for (const auto& slot : d.units[g]) {
        if (!slot) {
          emit_filler_word();
          continue;
        }
        const bool upper = rng.chance(plan.case_variation);
        std::string form = upper ? capitalize(*slot) : *slot;
        d.doc.tokens.push_back({form, form, std::nullopt});
      }
    }
    if (d.doc.tokens.empty()) d.doc.tokens.push_back({draw_filler(), draw_filler(), std::nullopt});
    documents.push_back(d.doc);
  }

  // Lemma columns were written with case variation; fold them as the parser would.
  for (auto& doc : documents)
    for (auto& t : doc.tokens) t.lemma = fold_case(t.lemma);
  Corpus corpus(documents);

  Fixture out;
  {
    // The corpus text keeps the capitalized lemma forms so that ingestion
    // exercises case folding.
    std::vector<Document> raw;
    raw.reserve(drafts.size());
    for (std::size_t i = 0; i < drafts.size(); ++i) {
      Document r = documents[i];
      for (std::size_t t = 0; t < r.tokens.size(); ++t) r.tokens[t].lemma = r.tokens[t].surface;
      raw.push_back(std::move(r));
    }
    out.corpus = serialize_vertical(Corpus(std::move(raw)));
  }

  auto& m = out.manifest;
  m["seed"] = seed;
  m["isolation"] = plan.isolation;
  const auto& s = corpus.stats();
  m["stats"] = {{"n_documents", s.n_documents},
                {"n_dated", s.n_dated},
                {"n_tokens", s.n_tokens},
                {"n_dated_tokens", s.n_dated_tokens}};
  m["stats"]["year_span"] = s.year_span ? json::array({s.year_span->first, s.year_span->second}) : json(nullptr);

  m["documents"] = json::array();
  for (std::size_t i = 0; i < drafts.size(); ++i) {
    nlohmann::ordered_json dj;
    dj["id"] = documents[i].id;
    dj["date"] = date_json(documents[i].date);
    dj["assigned_year"] = drafts[i].assigned ? json(*drafts[i].assigned) : json(nullptr);
    dj["tokens"] = documents[i].tokens.size();
    dj["words"] = corpus.word_count(i);
    dj["planted"] = drafts[i].planted;
    dj["pairs"] = drafts[i].pairs;
    m["documents"].push_back(std::move(dj));
  }

  std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> totals;
  for (const auto& doc : documents) {
    for (const auto& t : doc.tokens) {
      auto& e = totals[t.lemma];
      ++e.first;
      if (doc.date.dated()) ++e.second;
    }
  }
  m["lemma_totals"] = nlohmann::ordered_json::object();
  for (const auto& [lemma, c] : totals) m["lemma_totals"][lemma] = {{"all", c.first}, {"dated", c.second}};

  m["pairs"] = json::array();
  for (const auto& pr : plan.pairs)
    m["pairs"].push_back({{"a", pr.a}, {"b", pr.b}, {"gap", pr.gap}, {"count", pr.count}});
  m["clusters"] = json::array();
  for (const auto& c : plan.clusters)
    m["clusters"].push_back({{"name", c.name}, {"members", c.members}, {"context", c.context}, {"radius", c.radius}});
  return out;
}

}  // namespace diachron
