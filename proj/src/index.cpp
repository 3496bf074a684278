#include "diachron/index.hpp"

#include <algorithm>
#include <thread>

namespace diachron {

DocSubset DocSubset::all(const Corpus& corpus) { return DocSubset(std::vector<char>(corpus.size(), 1)); }

DocSubset DocSubset::none(const Corpus& corpus) { return DocSubset(std::vector<char>(corpus.size(), 0)); }

DocSubset DocSubset::dated(const Corpus& corpus) {
  std::vector<char> m(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) m[i] = corpus.documents()[i].date.dated() ? 1 : 0;
  return DocSubset(std::move(m));
}

DocSubset DocSubset::of_bin(const BinSet& bins, std::size_t bin) {
  std::vector<char> m(bins.doc_bins.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = bins.doc_bins[i] == bin ? 1 : 0;
  return DocSubset(std::move(m));
}

DocSubset DocSubset::binned(const BinSet& bins) {
  std::vector<char> m(bins.doc_bins.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = bins.doc_bins[i] != BinSet::npos ? 1 : 0;
  return DocSubset(std::move(m));
}

DocSubset DocSubset::years(const Corpus& corpus, int first, int last, const DatingConfig& dating) {
  auto years = assigned_years(corpus, dating);
  std::vector<char> m(corpus.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = years[i] && *years[i] >= first && *years[i] <= last ? 1 : 0;
  return DocSubset(std::move(m));
}

std::size_t DocSubset::count() const { return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), 1)); }

// ---------------------------------------------------------------------------

namespace {

struct Chunk {
  std::vector<std::string> lemmas;  // local id -> lemma, first-occurrence order
  std::vector<std::vector<LemmaId>> words;
  std::vector<std::vector<std::uint32_t>> token_of_word;
};

Chunk index_range(const Corpus& corpus, std::size_t begin, std::size_t end) {
  Chunk c;
  std::unordered_map<std::string, LemmaId> local;
  for (std::size_t d = begin; d < end; ++d) {
    const auto& tokens = corpus.documents()[d].tokens;
    std::vector<LemmaId> w;
    std::vector<std::uint32_t> t;
    for (std::uint32_t i = 0; i < tokens.size(); ++i) {
      const auto& lemma = tokens[i].lemma;
      if (corpus.skip().skips(lemma)) continue;
      auto [it, inserted] = local.try_emplace(lemma, static_cast<LemmaId>(c.lemmas.size()));
      if (inserted) c.lemmas.push_back(lemma);
      w.push_back(it->second);
      t.push_back(i);
    }
    c.words.push_back(std::move(w));
    c.token_of_word.push_back(std::move(t));
  }
  return c;
}

}  // namespace

PositionalIndex PositionalIndex::build(std::shared_ptr<const Corpus> corpus, unsigned threads) {
  PositionalIndex idx;
  idx.corpus_ = std::move(corpus);
  const Corpus& c = *idx.corpus_;
  const std::size_t n = c.size();
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));

  std::vector<Chunk> chunks(threads);
  std::vector<std::size_t> bounds(threads + 1);
  for (unsigned t = 0; t <= threads; ++t) bounds[t] = n * t / threads;
  if (threads == 1) {
    chunks[0] = index_range(c, 0, n);
  } else {
    std::vector<std::thread> workers;
    for (unsigned t = 0; t < threads; ++t)
      workers.emplace_back([&, t] { chunks[t] = index_range(c, bounds[t], bounds[t + 1]); });
    for (auto& w : workers) w.join();
  }

  idx.words_.reserve(n);
  idx.token_of_word_.reserve(n);
  std::uint32_t doc = 0;
  for (auto& chunk : chunks) {
    std::vector<LemmaId> remap(chunk.lemmas.size());
    for (std::size_t l = 0; l < chunk.lemmas.size(); ++l) {
      auto [it, inserted] = idx.ids_.try_emplace(chunk.lemmas[l], static_cast<LemmaId>(idx.lemmas_.size()));
      if (inserted) {
        idx.lemmas_.push_back(chunk.lemmas[l]);
        idx.postings_.emplace_back();
      }
      remap[l] = it->second;
    }
    for (std::size_t d = 0; d < chunk.words.size(); ++d, ++doc) {
      auto& w = chunk.words[d];
      for (std::uint32_t p = 0; p < w.size(); ++p) {
        w[p] = remap[w[p]];
        idx.postings_[w[p]].push_back({doc, p});
      }
      idx.indexed_tokens_ += w.size();
      idx.words_.push_back(std::move(w));
      idx.token_of_word_.push_back(std::move(chunk.token_of_word[d]));
    }
  }
  return idx;
}

std::optional<LemmaId> PositionalIndex::id(std::string_view lemma) const {
  auto it = ids_.find(std::string(lemma));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t PositionalIndex::frequency(std::string_view lemma) const {
  auto i = id(lemma);
  return i ? frequency(*i) : 0;
}

std::vector<Posting> PositionalIndex::group_postings(const LemmaGroup& group) const {
  std::vector<Posting> out;
  std::size_t members_found = 0;
  for (const auto& m : group.members) {
    if (auto i = id(m)) {
      const auto& p = postings_[*i];
      out.insert(out.end(), p.begin(), p.end());
      ++members_found;
    }
  }
  if (members_found > 1) std::sort(out.begin(), out.end());
  return out;
}

}  // namespace diachron
