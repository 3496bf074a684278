#include "diachron/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "diachron/hash.hpp"

namespace diachron {

std::string hex64(std::uint64_t value) { return fmt::format("{:016x}", value); }

namespace {

// Decodes one UTF-8 code point starting at text[i]; advances i. Invalid bytes
// decode as themselves.
char32_t next_code_point(std::string_view text, std::size_t& i) {
  auto c = static_cast<unsigned char>(text[i]);
  int extra = 0;
  char32_t cp = c;
  if (c >= 0xF0 && c < 0xF8) {
    extra = 3;
    cp = c & 0x07;
  } else if (c >= 0xE0) {
    extra = 2;
    cp = c & 0x0F;
  } else if (c >= 0xC0) {
    extra = 1;
    cp = c & 0x1F;
  }
  if (c >= 0x80 && extra == 0) {
    ++i;
    return c;
  }
  if (i + extra >= text.size()) {
    ++i;
    return c;
  }
  for (int k = 1; k <= extra; ++k) {
    auto cc = static_cast<unsigned char>(text[i + k]);
    if ((cc & 0xC0) != 0x80) {
      ++i;
      return c;
    }
    cp = (cp << 6) | (cc & 0x3F);
  }
  i += extra + 1;
  return cp;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

char32_t lower(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 32;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;
  if (cp >= 0x100 && cp <= 0x137) return (cp % 2 == 0) ? cp + 1 : cp;
  if (cp >= 0x139 && cp <= 0x148) return (cp % 2 == 1) ? cp + 1 : cp;
  if (cp >= 0x14A && cp <= 0x177) return (cp % 2 == 0) ? cp + 1 : cp;
  if (cp == 0x178) return 0xFF;
  if (cp >= 0x179 && cp <= 0x17E) return (cp % 2 == 1) ? cp + 1 : cp;
  return cp;
}

bool has_whitespace(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](unsigned char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f'; });
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string fold_case(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t start = i;
    char32_t cp = next_code_point(text, i);
    char32_t lc = lower(cp);
    if (lc == cp) {
      out.append(text.substr(start, i - start));
    } else {
      append_utf8(out, lc);
    }
  }
  return out;
}

bool is_punctuation_lemma(std::string_view lemma) {
  if (lemma.empty()) return false;
  std::size_t i = 0;
  char32_t cp = next_code_point(lemma, i);
  if (i != lemma.size()) return false;
  if (cp < 0x80) {
    return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) || (cp >= 0x5B && cp <= 0x60) ||
           (cp >= 0x7B && cp <= 0x7E);
  }
  switch (cp) {
    case 0xA1: case 0xA7: case 0xAB: case 0xB6: case 0xB7: case 0xBB: case 0xBF:
    case 0x2010: case 0x2011: case 0x2012: case 0x2013: case 0x2014: case 0x2015:
    case 0x2018: case 0x2019: case 0x201C: case 0x201D: case 0x2020: case 0x2021:
    case 0x2026: case 0x2039: case 0x203A: case 0x2E2B:
      return true;
    default:
      return false;
  }
}

bool SkipList::skips(std::string_view lemma) const {
  if (skip_punctuation_ && is_punctuation_lemma(lemma)) return true;
  return !extra_.empty() && extra_.count(std::string(lemma)) > 0;
}

// ---------------------------------------------------------------------------

CorpusStats compute_stats(const std::vector<Document>& documents) {
  CorpusStats s;
  s.n_documents = documents.size();
  for (const auto& d : documents) {
    s.n_tokens += d.tokens.size();
    if (!d.date.dated()) continue;
    ++s.n_dated;
    s.n_dated_tokens += d.tokens.size();
    int lo = *d.date.year_min, hi = *d.date.year_max;
    if (!s.year_span) {
      s.year_span = {lo, hi};
    } else {
      s.year_span->first = std::min(s.year_span->first, lo);
      s.year_span->second = std::max(s.year_span->second, hi);
    }
  }
  return s;
}

Corpus::Corpus(std::vector<Document> documents, SkipList skip)
    : documents_(std::move(documents)), skip_(std::move(skip)) {
  stats_ = compute_stats(documents_);
  word_counts_.reserve(documents_.size());
  Fnv1a h;
  h.update(static_cast<std::uint64_t>(skip_.skip_punctuation()));
  for (const auto& e : skip_.extra()) h.field(e);
  for (const auto& d : documents_) {
    std::uint64_t words = 0;
    for (const auto& t : d.tokens) words += skip_.skips(t.lemma) ? 0 : 1;
    word_counts_.push_back(words);

    h.field(d.id);
    h.update(static_cast<std::uint64_t>(d.date.kind));
    h.update(static_cast<std::uint64_t>(static_cast<std::int64_t>(d.date.year_min.value_or(0))));
    h.update(static_cast<std::uint64_t>(static_cast<std::int64_t>(d.date.year_max.value_or(0))));
    h.field(d.collection);
    h.field(d.region.value_or(std::string("\x01")));
    h.update(static_cast<std::uint64_t>(d.tokens.size()));
    for (const auto& t : d.tokens) {
      h.field(t.surface);
      h.field(t.lemma);
      h.field(t.pos.value_or(std::string("\x01")));
    }
  }
  fingerprint_ = h.digest();
}

std::optional<std::size_t> Corpus::find(std::string_view id) const {
  for (std::size_t i = 0; i < documents_.size(); ++i)
    if (documents_[i].id == id) return i;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Parsing

ParseError::ParseError(Reject reject)
    : std::runtime_error(fmt::format("line {}: document \"{}\": {}", reject.line, reject.id, reject.reason)),
      reject_(std::move(reject)) {}

std::string escape_attribute(std::string_view value) {
  std::string out;
  out.reserve(value.size());
  for (char c : value) {
    if (c == '&') out += "&amp;";
    else if (c == '"') out += "&quot;";
    else out.push_back(c);
  }
  return out;
}

std::string unescape_attribute(std::string_view value) {
  std::string out;
  out.reserve(value.size());
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (value[i] == '&') {
      if (value.substr(i, 5) == "&amp;") {
        out.push_back('&');
        i += 4;
        continue;
      }
      if (value.substr(i, 6) == "&quot;") {
        out.push_back('"');
        i += 5;
        continue;
      }
      throw std::invalid_argument("unknown entity in attribute value");
    }
    out.push_back(value[i]);
  }
  return out;
}

namespace {

struct HeaderDefect {
  std::string reason;
};

// Parses `<doc a="x" b="y">`; the caller has checked the `<doc` prefix.
std::map<std::string, std::string> parse_attributes(std::string_view line) {
  std::map<std::string, std::string> attrs;
  line = trim(line);
  if (line.size() < 5 || line.back() != '>') throw HeaderDefect{"document header not closed by '>'"};
  std::string_view body = line.substr(4, line.size() - 5);
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < body.size() && (body[i] == ' ' || body[i] == '\t')) ++i;
  };
  if (!body.empty() && body[0] != ' ' && body[0] != '\t') throw HeaderDefect{"malformed document header"};
  while (true) {
    skip_ws();
    if (i >= body.size()) break;
    std::size_t name_start = i;
    while (i < body.size() && body[i] != '=' && body[i] != ' ' && body[i] != '\t') ++i;
    std::string name(body.substr(name_start, i - name_start));
    if (name.empty() || i >= body.size() || body[i] != '=') throw HeaderDefect{"malformed attribute in document header"};
    ++i;
    if (i >= body.size() || body[i] != '"') throw HeaderDefect{fmt::format("attribute {} is not double-quoted", name)};
    ++i;
    std::size_t close = body.find('"', i);
    if (close == std::string_view::npos) throw HeaderDefect{fmt::format("unterminated value for attribute {}", name)};
    std::string value;
    try {
      value = unescape_attribute(body.substr(i, close - i));
    } catch (const std::invalid_argument& e) {
      throw HeaderDefect{fmt::format("attribute {}: {}", name, e.what())};
    }
    if (!attrs.emplace(name, std::move(value)).second) throw HeaderDefect{fmt::format("duplicate attribute {}", name)};
    i = close + 1;
    if (i < body.size() && body[i] != ' ' && body[i] != '\t') throw HeaderDefect{"malformed document header"};
  }
  return attrs;
}

int parse_year(const std::string& text, const char* attr) {
  int year = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), year);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw HeaderDefect{fmt::format("{}=\"{}\" is not an integer year", attr, text)};
  return year;
}

struct OpenDoc {
  Document doc;
  std::size_t line = 0;
  std::optional<std::string> defect;  // set when the document is already known bad
  std::size_t defect_line = 0;
};

}  // namespace

ParseResult parse_vertical(std::istream& in, const ParseOptions& options) {
  ParseResult result;
  std::vector<Document> docs;
  std::unordered_set<std::string> seen;
  std::optional<OpenDoc> open;

  auto reject = [&](Reject r) {
    if (options.strict) throw ParseError(std::move(r));
    result.rejects.push_back(std::move(r));
  };

  auto check_era = [&](int year) {
    if (year < options.era_min || year > options.era_max)
      throw HeaderDefect{fmt::format("year {} outside era bounds [{}, {}]", year, options.era_min, options.era_max)};
  };

  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line(raw);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::string_view trimmed = trim(line);
    if (trimmed.empty()) continue;

    if (trimmed.substr(0, 4) == "<doc" && (trimmed.size() == 4 || trimmed[4] == ' ' || trimmed[4] == '\t' || trimmed[4] == '>')) {
      if (open) {
        reject({open->doc.id, open->line, "unterminated document (new <doc> before </doc>)"});
        open.reset();
      }
      OpenDoc next;
      next.line = lineno;
      try {
        auto attrs = parse_attributes(trimmed);
        auto get = [&](const char* k) -> const std::string* {
          auto it = attrs.find(k);
          return it == attrs.end() ? nullptr : &it->second;
        };
        if (const auto* id = get("id")) next.doc.id = *id;
        if (next.doc.id.empty()) throw HeaderDefect{"document header without id"};
        if (const auto* c = get("collection")) next.doc.collection = *c;
        if (const auto* r = get("region")) next.doc.region = *r;
        const auto* date = get("date");
        const auto* dmin = get("date_min");
        const auto* dmax = get("date_max");
        if (date && (dmin || dmax)) throw HeaderDefect{"both date and date_min/date_max given"};
        if (date) {
          int y = parse_year(*date, "date");
          check_era(y);
          next.doc.date = DateSpec::exact(y);
        } else if (dmin || dmax) {
          if (!dmin || !dmax) throw HeaderDefect{"date_min and date_max must be given together"};
          int lo = parse_year(*dmin, "date_min");
          int hi = parse_year(*dmax, "date_max");
          check_era(lo);
          check_era(hi);
          if (lo > hi) throw HeaderDefect{fmt::format("date_min {} after date_max {}", lo, hi)};
          next.doc.date = lo == hi ? DateSpec::exact(lo) : DateSpec::interval(lo, hi);
        }
        if (seen.count(next.doc.id)) throw HeaderDefect{"duplicate document id"};
      } catch (const HeaderDefect& d) {
        next.defect = d.reason;
        next.defect_line = lineno;
      }
      open = std::move(next);
      continue;
    }

    if (trimmed == "</doc>") {
      if (!open) {
        reject({"", lineno, "</doc> without open document"});
        continue;
      }
      OpenDoc done = std::move(*open);
      open.reset();
      if (!done.defect && done.doc.tokens.empty()) done.defect = "document has no tokens";
      if (done.defect) {
        reject({done.doc.id, done.defect_line ? done.defect_line : done.line, *done.defect});
        continue;
      }
      seen.insert(done.doc.id);
      docs.push_back(std::move(done.doc));
      continue;
    }

    if (!open) {
      reject({"", lineno, "content outside a document"});
      continue;
    }
    if (open->defect) continue;

    // Structural tags inside a document (<s>, </p>, ...) carry no tokens.
    if (trimmed.front() == '<' && trimmed.back() == '>' && line.find('\t') == std::string_view::npos) continue;

    std::size_t t1 = line.find('\t');
    if (t1 == std::string_view::npos) {
      open->defect = "malformed token line (expected surface<TAB>lemma[<TAB>pos])";
      open->defect_line = lineno;
      continue;
    }
    std::size_t t2 = line.find('\t', t1 + 1);
    Token tok;
    tok.surface = std::string(line.substr(0, t1));
    std::string_view lemma_col = t2 == std::string_view::npos ? line.substr(t1 + 1) : line.substr(t1 + 1, t2 - t1 - 1);
    if (t2 != std::string_view::npos) {
      std::string_view pos_col = line.substr(t2 + 1);
      if (pos_col.find('\t') != std::string_view::npos) {
        open->defect = "malformed token line (too many columns)";
        open->defect_line = lineno;
        continue;
      }
      pos_col = trim(pos_col);
      if (!pos_col.empty()) tok.pos = std::string(pos_col);
    }
    lemma_col = trim(lemma_col);
    if (lemma_col.empty() || has_whitespace(lemma_col)) {
      open->defect = "empty lemma or lemma containing whitespace";
      open->defect_line = lineno;
      continue;
    }
    tok.lemma = fold_case(lemma_col);
    open->doc.tokens.push_back(std::move(tok));
  }
  if (open) reject({open->doc.id, open->line, "unterminated document (missing </doc>)"});

  result.corpus = Corpus(std::move(docs), options.skip);
  return result;
}

ParseResult parse_vertical(std::string_view text, const ParseOptions& options) {
  std::istringstream in{std::string(text)};
  return parse_vertical(in, options);
}

void serialize_vertical(const Corpus& corpus, std::ostream& out) {
  for (const auto& d : corpus.documents()) {
    out << "<doc id=\"" << escape_attribute(d.id) << '"';
    if (d.date.kind == DateKind::exact) {
      out << " date=\"" << *d.date.year_min << '"';
    } else if (d.date.kind == DateKind::interval) {
      out << " date_min=\"" << *d.date.year_min << "\" date_max=\"" << *d.date.year_max << '"';
    }
    if (!d.collection.empty()) out << " collection=\"" << escape_attribute(d.collection) << '"';
    if (d.region) out << " region=\"" << escape_attribute(*d.region) << '"';
    out << ">\n";
    for (const auto& t : d.tokens) {
      out << t.surface << '\t' << t.lemma;
      if (t.pos) out << '\t' << *t.pos;
      out << '\n';
    }
    out << "</doc>\n";
  }
}

std::string serialize_vertical(const Corpus& corpus) {
  std::ostringstream out;
  serialize_vertical(corpus, out);
  return out.str();
}

void write_rejects_jsonl(const std::vector<Reject>& rejects, std::ostream& out) {
  for (const auto& r : rejects) {
    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["line"] = r.line;
    j["reason"] = r.reason;
    out << j.dump() << '\n';
  }
}

// ---------------------------------------------------------------------------
// Groups

LemmaGroup::LemmaGroup(std::string group_name, std::set<std::string> group_members)
    : name(std::move(group_name)) {
  for (const auto& m : group_members) members.insert(fold_case(m));
}

GroupOverlapError::GroupOverlapError(std::string lemma, std::string first, std::string second)
    : GroupError(fmt::format("lemma \"{}\" belongs to both group \"{}\" and group \"{}\"", lemma, first, second)),
      lemma_(std::move(lemma)),
      first_(std::move(first)),
      second_(std::move(second)) {}

void validate_groups(const std::vector<LemmaGroup>& groups) {
  std::map<std::string, const LemmaGroup*> owner;
  for (const auto& g : groups) {
    if (g.name.empty()) throw GroupError("lemma group without a name");
    if (g.members.empty()) throw GroupError(fmt::format("lemma group \"{}\" has no members", g.name));
    for (const auto& m : g.members) {
      if (m.empty()) throw GroupError(fmt::format("lemma group \"{}\" has an empty member", g.name));
      auto [it, inserted] = owner.emplace(m, &g);
      if (!inserted) throw GroupOverlapError(m, it->second->name, g.name);
    }
  }
}

std::uint64_t group_frequency(const Corpus& corpus, const LemmaGroup& group, bool dated_only) {
  std::uint64_t n = 0;
  for (const auto& d : corpus.documents()) {
    if (dated_only && !d.date.dated()) continue;
    for (const auto& t : d.tokens) n += group.members.count(t.lemma);
  }
  return n;
}

}  // namespace diachron
