#include "diachron/report.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace diachron {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string join_words(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out.push_back(' ');
    out += w;
  }
  return out;
}

}  // namespace

std::string cell_text(const Cell& cell) {
  return std::visit(overloaded{
                        [](const std::string& s) { return s; },
                        [](std::uint64_t v) { return std::to_string(v); },
                        [](std::int64_t v) { return std::to_string(v); },
                        [](double v) { return fmt::format("{}", v); },
                        [](const RationalCell& r) { return r.value.to_fixed(r.decimals); },
                    },
                    cell);
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string emit_csv(const Table& table) {
  std::string out;
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out.push_back(',');
      out += csv_field(fields[i]);
    }
    out.push_back('\n');
  };
  line(table.columns);
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) throw std::invalid_argument("table row width does not match its header");
    std::vector<std::string> fields;
    fields.reserve(row.size());
    for (const auto& c : row) fields.push_back(cell_text(c));
    line(fields);
  }
  return out;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && !field_started) {
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      field_started = false;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      row.push_back(std::move(field));
      field.clear();
      field_started = false;
      rows.push_back(std::move(row));
      row.clear();
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (quoted) throw std::invalid_argument("unterminated quoted CSV field");
  if (field_started || !row.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string emit_json(const Table& table) {
  nlohmann::ordered_json j;
  j["columns"] = table.columns;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size() && i < table.columns.size(); ++i) {
      std::visit(overloaded{
                     [&](const std::string& s) { obj[table.columns[i]] = s; },
                     [&](std::uint64_t v) { obj[table.columns[i]] = v; },
                     [&](std::int64_t v) { obj[table.columns[i]] = v; },
                     [&](double v) { obj[table.columns[i]] = v; },
                     [&](const RationalCell& r) {
                       obj[table.columns[i]] = {{"num", r.value.num()}, {"den", r.value.den()}};
                     },
                 },
                 row[i]);
    }
    j["rows"].push_back(std::move(obj));
  }
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------

Table stats_table(const CorpusStats& s) {
  Table t;
  t.columns = {"statistic", "value"};
  t.rows.push_back({std::string("n_documents"), s.n_documents});
  t.rows.push_back({std::string("n_dated"), s.n_dated});
  t.rows.push_back({std::string("n_tokens"), s.n_tokens});
  t.rows.push_back({std::string("n_dated_tokens"), s.n_dated_tokens});
  t.rows.push_back({std::string("year_min"), s.year_span ? std::to_string(s.year_span->first) : std::string()});
  t.rows.push_back({std::string("year_max"), s.year_span ? std::to_string(s.year_span->second) : std::string()});
  return t;
}

Table bins_table(const BinSet& bins) {
  Table t;
  t.columns = {"index", "year_start", "year_end", "midpoint", "token_mass", "n_docs"};
  for (const auto& b : bins.bins) {
    t.rows.push_back({static_cast<std::uint64_t>(b.index), static_cast<std::int64_t>(b.year_start),
                      static_cast<std::int64_t>(b.year_end), format_year(bin_midpoint(b)), b.token_mass,
                      static_cast<std::uint64_t>(b.doc_ids.size())});
  }
  return t;
}

Table frequency_table(const BinSet& bins,
                      const std::vector<std::pair<std::string, std::vector<std::uint64_t>>>& series) {
  Table t;
  t.columns = {"bin", "label", "midpoint", "token_mass"};
  for (const auto& [name, counts] : series) {
    if (counts.size() != bins.bins.size()) throw std::invalid_argument("series length does not match bin count");
    t.columns.push_back(name);
  }
  for (const auto& b : bins.bins) {
    std::vector<Cell> row{static_cast<std::uint64_t>(b.index), bin_label(b), format_year(bin_midpoint(b)), b.token_mass};
    for (const auto& s : series) row.emplace_back(s.second[b.index]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table association_table_rows(const std::vector<CoocRow>& rows) {
  Table t;
  t.columns = {"target", "occurrences", "associations", "percent"};
  for (const auto& r : rows) t.rows.push_back({r.target, r.occurrences, r.associations, RationalCell{r.percent, 2}});
  return t;
}

Table dice_table(const std::vector<DicePoint>& points) {
  Table t;
  t.columns = {"bin", "f_a", "f_b", "hits_a", "hits_b", "dice"};
  for (const auto& p : points) {
    t.rows.push_back({static_cast<std::uint64_t>(p.bin_index), p.counts.f_a, p.counts.f_b, p.counts.hits_a,
                      p.counts.hits_b, RationalCell{p.dice, 6}});
  }
  return t;
}

Table kwic_table(const std::vector<KwicLine>& lines) {
  Table t;
  t.columns = {"doc_id", "year", "position", "left", "keyword", "right"};
  for (const auto& l : lines) {
    t.rows.push_back({l.doc_id, l.year ? std::to_string(*l.year) : std::string(), static_cast<std::uint64_t>(l.position),
                      join_words(l.left), l.keyword, join_words(l.right)});
  }
  return t;
}

Table lexicon_table(const std::vector<LexiconRow>& rows) {
  Table t;
  t.columns = {"group", "all", "dated"};
  for (const auto& r : rows) t.rows.push_back({r.group, r.all, r.dated});
  return t;
}

Table matrix_triplets_table(const DsmMatrix& matrix) {
  Table t;
  t.columns = {"i", "j", "weight"};
  for (std::size_t i = 0; i < matrix.weights.dimension(); ++i) {
    auto [b, e] = matrix.weights.row(i);
    for (auto it = b; it != e; ++it)
      t.rows.push_back({static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(it->col), it->value});
  }
  return t;
}

Table vocabulary_table(const DsmMatrix& matrix) {
  Table t;
  t.columns = {"i", "lemma", "frequency"};
  for (std::size_t i = 0; i < matrix.vocabulary.size(); ++i)
    t.rows.push_back({static_cast<std::uint64_t>(i), matrix.vocabulary[i], matrix.frequencies[i]});
  return t;
}

std::string kwic_text(const std::vector<KwicLine>& lines) {
  std::vector<std::string> lefts;
  std::size_t width = 0;
  for (const auto& l : lines) {
    lefts.push_back(join_words(l.left));
    width = std::max(width, lefts.back().size());
  }
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& l = lines[i];
    out += fmt::format("{}\t{}\t{:>{}} [{}] {}\n", l.doc_id, l.year ? std::to_string(*l.year) : std::string("-"),
                       lefts[i], width, l.keyword, join_words(l.right));
  }
  return out;
}

}  // namespace diachron
