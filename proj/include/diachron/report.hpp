#pragma once

// Tabular (CSV/JSON) and graphical (SVG) rendering of analysis results.
// Every emitter is a pure function of its input: no timestamps, no randomness.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "diachron/chrono.hpp"
#include "diachron/collocation.hpp"
#include "diachron/dsm.hpp"
#include "diachron/rational.hpp"

namespace diachron {

// A rational shown in CSV with a fixed number of decimals (rounded half-up)
// and mirrored exactly in JSON as {"num": .., "den": ..}.
struct RationalCell {
  Rational value;
  int decimals = 2;
  friend bool operator==(const RationalCell&, const RationalCell&) = default;
};

using Cell = std::variant<std::string, std::uint64_t, std::int64_t, double, RationalCell>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

// RFC 4180: header row, comma separated, fields quoted when they contain a
// comma, quote, CR or LF; LF line endings.
std::string emit_csv(const Table& table);
std::string csv_field(const std::string& text);
std::string cell_text(const Cell& cell);

// Parses RFC 4180 text into rows of fields (header included).
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

// {"columns": [...], "rows": [{column: value, ...}, ...]}
std::string emit_json(const Table& table);

Table stats_table(const CorpusStats& stats);
Table bins_table(const BinSet& bins);
Table frequency_table(const BinSet& bins, const std::vector<std::pair<std::string, std::vector<std::uint64_t>>>& series);
Table association_table_rows(const std::vector<CoocRow>& rows);
Table dice_table(const std::vector<DicePoint>& points);
Table kwic_table(const std::vector<KwicLine>& lines);
Table lexicon_table(const std::vector<LexiconRow>& rows);
Table matrix_triplets_table(const DsmMatrix& matrix);
Table vocabulary_table(const DsmMatrix& matrix);

// Plain-text KWIC rendering: right-aligned left context, keyword, right context.
std::string kwic_text(const std::vector<KwicLine>& lines);

// ---------------------------------------------------------------------------
// SVG

enum class YKind { count, rate, dice };

struct PlotSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;  // (midpoint year, value)
};

struct TimelinePlotSpec {
  std::vector<PlotSeries> series;
  YKind y_kind = YKind::count;
  std::string title;
  std::optional<std::pair<double, double>> x_range;
  // Centered moving-average width; odd and >= 3 when present.
  std::optional<int> smoothing;
};

// Centered moving average, window truncated at the ends.
std::vector<double> moving_average(const std::vector<double>& values, int width);

// 960x540 viewBox, year ticks, legend, one polyline per series.
// Throws std::invalid_argument on empty or mismatched series.
std::string emit_timeline_svg(const TimelinePlotSpec& spec);

// Target centered, neighbors on a ring ordered by similarity, edge opacity
// proportional to similarity, one text label per node.
std::string emit_field_svg(const FieldGraph& graph);

std::string xml_escape(const std::string& text);

}  // namespace diachron
