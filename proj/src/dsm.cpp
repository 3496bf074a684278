#include "diachron/dsm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>
#include <tuple>
#include <unordered_map>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace diachron {

Weighting parse_weighting(const std::string& name) {
  if (name == "raw") return Weighting::raw;
  if (name == "ppmi") return Weighting::ppmi;
  if (name == "logdice") return Weighting::logdice;
  throw std::invalid_argument(fmt::format("unknown weighting \"{}\" (expected raw, ppmi or logdice)", name));
}

std::string to_string(Weighting weighting) {
  switch (weighting) {
    case Weighting::raw: return "raw";
    case Weighting::ppmi: return "ppmi";
    case Weighting::logdice: return "logdice";
  }
  return "ppmi";
}

void DsmConfig::validate() const {
  if (window < 1) throw std::invalid_argument("dsm window must be at least 1");
  if (min_freq < 1) throw std::invalid_argument("min_freq must be at least 1");
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (!(edge_threshold >= 0.0 && edge_threshold <= 1.0)) throw std::invalid_argument("edge_threshold must lie in [0, 1]");
}

namespace {

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += ", ";
    out += s;
  }
  return out;
}

}  // namespace

OutOfVocabularyError::OutOfVocabularyError(std::string lemma, std::vector<std::string> suggestions)
    : std::invalid_argument(suggestions.empty()
                                ? fmt::format("\"{}\" is not in the model vocabulary", lemma)
                                : fmt::format("\"{}\" is not in the model vocabulary (did you mean: {}?)", lemma,
                                              join(suggestions))),
      lemma_(std::move(lemma)),
      suggestions_(std::move(suggestions)) {}

std::optional<std::size_t> DsmMatrix::find(std::string_view lemma) const {
  auto it = std::lower_bound(vocabulary.begin(), vocabulary.end(), lemma);
  if (it == vocabulary.end() || *it != lemma) return std::nullopt;
  return static_cast<std::size_t>(it - vocabulary.begin());
}

std::size_t DsmMatrix::require(std::string_view lemma) const {
  if (auto i = find(lemma)) return *i;
  const std::size_t budget = std::max<std::size_t>(2, lemma.size() / 3);
  std::vector<std::tuple<std::size_t, std::uint64_t, std::size_t>> near;  // distance, frequency, index
  for (std::size_t i = 0; i < vocabulary.size(); ++i) {
    std::size_t d = edit_distance(lemma, vocabulary[i]);
    if (d <= budget) near.emplace_back(d, frequencies.empty() ? 0 : frequencies[i], i);
  }
  std::sort(near.begin(), near.end(), [](const auto& a, const auto& b) {
    if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
    if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) > std::get<1>(b);
    return std::get<2>(a) < std::get<2>(b);
  });
  std::vector<std::string> suggestions;
  for (std::size_t i = 0; i < near.size() && i < 5; ++i) suggestions.push_back(vocabulary[std::get<2>(near[i])]);
  throw OutOfVocabularyError(std::string(lemma), std::move(suggestions));
}

// ---------------------------------------------------------------------------

namespace {

using PairCounts = std::unordered_map<std::uint64_t, std::uint64_t>;

std::uint64_t pair_key(std::uint32_t i, std::uint32_t j) {
  if (i > j) std::swap(i, j);
  return (static_cast<std::uint64_t>(i) << 32) | j;
}

constexpr std::uint32_t kNotInVocabulary = std::numeric_limits<std::uint32_t>::max();

void count_range(const PositionalIndex& index, const DocSubset& subset, const std::vector<std::uint32_t>& vocab_of,
                 int window, std::size_t begin, std::size_t end, PairCounts& out) {
  const auto w = static_cast<std::size_t>(window);
  for (std::size_t d = begin; d < end; ++d) {
    if (!subset.contains(d)) continue;
    const auto& words = index.words(d);
    for (std::size_t p = 0; p < words.size(); ++p) {
      const std::uint32_t vi = vocab_of[words[p]];
      if (vi == kNotInVocabulary) continue;
      for (std::size_t q = p + 1; q < words.size() && q <= p + w; ++q) {
        const std::uint32_t vj = vocab_of[words[q]];
        if (vj == kNotInVocabulary || vj == vi) continue;
        ++out[pair_key(vi, vj)];
      }
    }
  }
}

template <typename T>
SparseMatrix<T> from_triplets(std::size_t n, std::vector<std::tuple<std::uint32_t, std::uint32_t, T>> triplets) {
  std::sort(triplets.begin(), triplets.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
  });
  std::vector<std::size_t> offsets(n + 1, 0);
  std::vector<typename SparseMatrix<T>::Entry> entries;
  entries.reserve(triplets.size());
  for (const auto& [i, j, v] : triplets) {
    ++offsets[i + 1];
    entries.push_back({j, v});
  }
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
  return SparseMatrix<T>(n, std::move(offsets), std::move(entries));
}

// Applies f(i, j, count) to every stored entry, keeping the sparsity pattern
// and dropping entries mapped to zero.
template <typename F>
WeightMatrix map_counts(const CountMatrix& counts, F f) {
  std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> triplets;
  triplets.reserve(counts.nonzeros());
  for (std::size_t i = 0; i < counts.dimension(); ++i) {
    auto [b, e] = counts.row(i);
    for (auto it = b; it != e; ++it) {
      if (it->value == 0) continue;
      double v = f(i, it->col, it->value);
      if (v != 0.0) triplets.emplace_back(static_cast<std::uint32_t>(i), it->col, v);
    }
  }
  return from_triplets<double>(counts.dimension(), std::move(triplets));
}

}  // namespace

WeightMatrix raw_weight(const CountMatrix& counts) {
  return map_counts(counts, [](std::size_t, std::size_t, std::uint64_t c) { return static_cast<double>(c); });
}

WeightMatrix ppmi_weight(const CountMatrix& counts) {
  std::vector<double> rows(counts.dimension(), 0.0);
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < counts.dimension(); ++i) {
    auto [b, e] = counts.row(i);
    std::uint64_t r = 0;
    for (auto it = b; it != e; ++it) r += it->value;
    rows[i] = static_cast<double>(r);
    total += r;
  }
  if (total == 0) throw std::invalid_argument("cannot weight an all-zero count matrix");
  const double n = static_cast<double>(total);
  return map_counts(counts, [&](std::size_t i, std::size_t j, std::uint64_t c) {
    double ratio = (static_cast<double>(c) * n) / (rows[i] * rows[j]);
    return std::max(0.0, std::log(ratio));
  });
}

WeightMatrix logdice_weight(const CountMatrix& counts, const std::vector<std::uint64_t>& frequencies) {
  if (frequencies.size() != counts.dimension()) throw std::invalid_argument("frequency vector does not match matrix");
  return map_counts(counts, [&](std::size_t i, std::size_t j, std::uint64_t c) {
    double f = static_cast<double>(frequencies[i]) + static_cast<double>(frequencies[j]);
    return std::max(0.0, 14.0 + std::log2(2.0 * static_cast<double>(c) / f));
  });
}

DsmMatrix dsm_build(const PositionalIndex& index, const DocSubset& subset, const DsmConfig& config, unsigned threads) {
  config.validate();
  const std::size_t n_docs = index.corpus().size();
  if (subset.count() == 0) throw std::invalid_argument("empty document subset");

  std::vector<std::uint64_t> freq(index.vocabulary_size(), 0);
  for (std::size_t d = 0; d < n_docs; ++d) {
    if (!subset.contains(d)) continue;
    for (LemmaId id : index.words(d)) ++freq[id];
  }

  DsmMatrix m;
  m.config = config;
  m.corpus_fingerprint = index.fingerprint();
  std::vector<LemmaId> kept;
  for (LemmaId id = 0; id < freq.size(); ++id)
    if (freq[id] >= config.min_freq) kept.push_back(id);
  if (kept.empty())
    throw EmptyVocabularyError(fmt::format("no lemma reaches min_freq {} in the selected documents", config.min_freq));
  std::sort(kept.begin(), kept.end(), [&](LemmaId a, LemmaId b) { return index.lemma(a) < index.lemma(b); });

  std::vector<std::uint32_t> vocab_of(index.vocabulary_size(), kNotInVocabulary);
  for (std::uint32_t v = 0; v < kept.size(); ++v) {
    vocab_of[kept[v]] = v;
    m.vocabulary.push_back(index.lemma(kept[v]));
    m.frequencies.push_back(freq[kept[v]]);
  }

  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(n_docs)));
  std::vector<PairCounts> partial(threads);
  if (threads == 1) {
    count_range(index, subset, vocab_of, config.window, 0, n_docs, partial[0]);
  } else {
    std::vector<std::thread> workers;
    for (unsigned t = 0; t < threads; ++t) {
      workers.emplace_back([&, t] {
        count_range(index, subset, vocab_of, config.window, n_docs * t / threads, n_docs * (t + 1) / threads, partial[t]);
      });
    }
    for (auto& w : workers) w.join();
  }
  for (unsigned t = 1; t < threads; ++t) {
    for (const auto& [key, c] : partial[t]) partial[0][key] += c;
    partial[t].clear();
  }

  std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint64_t>> triplets;
  triplets.reserve(partial[0].size() * 2);
  for (const auto& [key, c] : partial[0]) {
    auto i = static_cast<std::uint32_t>(key >> 32);
    auto j = static_cast<std::uint32_t>(key & 0xffffffffU);
    triplets.emplace_back(i, j, c);
    triplets.emplace_back(j, i, c);
  }
  m.counts = from_triplets<std::uint64_t>(kept.size(), std::move(triplets));

  switch (config.weighting) {
    case Weighting::raw: m.weights = raw_weight(m.counts); break;
    case Weighting::ppmi:
      m.weights = m.counts.nonzeros() == 0 ? WeightMatrix(kept.size()) : ppmi_weight(m.counts);
      break;
    case Weighting::logdice: m.weights = logdice_weight(m.counts, m.frequencies); break;
  }
  return m;
}

// ---------------------------------------------------------------------------

namespace {

double dot(const WeightMatrix& w, std::size_t i, std::size_t j) {
  auto [a, ae] = w.row(i);
  auto [b, be] = w.row(j);
  double s = 0.0;
  while (a != ae && b != be) {
    if (a->col < b->col) ++a;
    else if (b->col < a->col) ++b;
    else {
      s += a->value * b->value;
      ++a;
      ++b;
    }
  }
  return s;
}

double norm(const WeightMatrix& w, std::size_t i) { return std::sqrt(dot(w, i, i)); }

double cosine_with_norms(const WeightMatrix& w, std::size_t i, std::size_t j, double ni, double nj) {
  if (ni == 0.0 || nj == 0.0) return 0.0;
  return std::clamp(dot(w, i, j) / (ni * nj), -1.0, 1.0);
}

}  // namespace

double cosine(const WeightMatrix& weights, std::size_t i, std::size_t j) {
  return cosine_with_norms(weights, i, j, norm(weights, i), norm(weights, j));
}

std::vector<Neighbor> cosine_neighbors(const DsmMatrix& matrix, std::string_view target, std::size_t k) {
  const std::size_t t = matrix.require(target);
  const auto& w = matrix.weights;
  const double nt = norm(w, t);
  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(matrix.vocabulary.size());
  for (std::size_t j = 0; j < matrix.vocabulary.size(); ++j) {
    if (j == t) continue;
    scored.emplace_back(cosine_with_norms(w, t, j, nt, norm(w, j)), j);
  }
  // Vocabulary indices follow lexicographic order, so index order breaks ties.
  auto by_rank = [](const auto& a, const auto& b) { return a.first != b.first ? a.first > b.first : a.second < b.second; };
  const std::size_t take = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take), scored.end(), by_rank);
  std::vector<Neighbor> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back({matrix.vocabulary[scored[i].second], scored[i].first});
  return out;
}

FieldGraph semantic_field(const DsmMatrix& matrix, std::string_view target, const DsmConfig& config) {
  config.validate();
  FieldGraph g;
  g.target = std::string(target);
  auto neighbors = cosine_neighbors(matrix, target, config.k);
  g.nodes.push_back({g.target, 1.0});
  for (const auto& n : neighbors) {
    g.nodes.push_back(n);
    g.edges.push_back({g.target, n.lemma, n.similarity});
  }
  std::vector<std::size_t> ids;
  std::vector<double> norms;
  for (const auto& n : neighbors) {
    ids.push_back(*matrix.find(n.lemma));
    norms.push_back(norm(matrix.weights, ids.back()));
  }
  for (std::size_t a = 0; a < ids.size(); ++a) {
    for (std::size_t b = a + 1; b < ids.size(); ++b) {
      double s = cosine_with_norms(matrix.weights, ids[a], ids[b], norms[a], norms[b]);
      if (s >= config.edge_threshold) g.edges.push_back({neighbors[a].lemma, neighbors[b].lemma, s});
    }
  }
  return g;
}

FieldOverlap field_overlap(const DsmMatrix& matrix, std::string_view a, std::string_view b, std::size_t k) {
  auto na = cosine_neighbors(matrix, a, k);
  auto nb = cosine_neighbors(matrix, b, k);
  FieldOverlap o;
  for (const auto& x : na) {
    if (x.lemma == b) o.a_contains_b = true;
    for (const auto& y : nb)
      if (x.lemma == y.lemma) ++o.shared;
  }
  for (const auto& y : nb)
    if (y.lemma == a) o.b_contains_a = true;
  return o;
}

// ---------------------------------------------------------------------------

namespace {

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string to_dot(const FieldGraph& graph) {
  std::string out = fmt::format("graph {} {{\n", dot_quote("field_" + graph.target));
  out += "  node [shape=ellipse];\n";
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    const auto& n = graph.nodes[i];
    out += fmt::format("  {} [label={}, similarity=\"{:.3f}\"{}];\n", dot_quote(n.lemma), dot_quote(n.lemma),
                       n.similarity, i == 0 ? ", style=bold" : "");
  }
  for (const auto& e : graph.edges)
    out += fmt::format("  {} -- {} [similarity=\"{:.3f}\", label=\"{:.3f}\"];\n", dot_quote(e.a), dot_quote(e.b),
                       e.similarity, e.similarity);
  out += "}\n";
  return out;
}

std::string to_json(const FieldGraph& graph) {
  nlohmann::ordered_json j;
  j["target"] = graph.target;
  j["nodes"] = nlohmann::ordered_json::array();
  for (const auto& n : graph.nodes) j["nodes"].push_back({{"lemma", n.lemma}, {"sim", n.similarity}});
  j["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : graph.edges) j["edges"].push_back({{"a", e.a}, {"b", e.b}, {"sim", e.similarity}});
  return j.dump(2) + "\n";
}

}  // namespace diachron
