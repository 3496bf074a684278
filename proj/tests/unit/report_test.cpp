#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>

#include <nlohmann/json.hpp>

#include "diachron/report.hpp"

using namespace diachron;

namespace {

std::string golden_path(const std::string& name) { return std::string(GOLDEN_DIR) + "/" + name; }

// Compares with the committed file; DIACHRON_UPDATE_GOLDEN=1 rewrites it.
void check_golden(const std::string& name, const std::string& content) {
  const auto path = golden_path(name);
  if (std::getenv("DIACHRON_UPDATE_GOLDEN")) {
    std::ofstream(path, std::ios::binary) << content;
    return;
  }
  std::ifstream in(path, std::ios::binary);
  ASSERT_TRUE(in) << "missing golden file " << path;
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(buf.str(), content) << "golden mismatch for " << name;
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++n;
  return n;
}

// Minimal well-formedness check: tags balance and every attribute is quoted.
bool balanced_xml(const std::string& svg) {
  std::vector<std::string> stack;
  std::regex tag(R"(<(/?)([A-Za-z]+)((?:\s+[a-zA-Z0-9:-]+="[^"<]*")*)\s*(/?)>)");
  std::string body = svg.substr(svg.find("?>") + 2);
  auto begin = std::sregex_iterator(body.begin(), body.end(), tag);
  std::size_t tags = 0, opens = std::count(body.begin(), body.end(), '<');
  for (auto it = begin; it != std::sregex_iterator(); ++it, ++tags) {
    const auto& m = *it;
    if (m[4] == "/") continue;
    if (m[1] == "/") {
      if (stack.empty() || stack.back() != m[2]) return false;
      stack.pop_back();
    } else {
      stack.push_back(m[2]);
    }
  }
  return stack.empty() && tags == opens;
}

std::vector<CoocRow> granary_rows() {
  return {make_cooc_row("granarium", 317, 85), make_cooc_row("spicarium", 64, 14),
          make_cooc_row("horreum", 622, 79),   make_cooc_row("grangia", 6435, 318),
          make_cooc_row("cellarium, cella", 1362, 20)};
}

TimelinePlotSpec sample_timeline() {
  TimelinePlotSpec s;
  s.title = "Occurrences of horreum & grangia";
  s.series.push_back({"horreum", {{854.5, 12}, {933, 11}, {1005, 12}, {1069.5, 0}, {1113, 48}, {1154.5, 65}}});
  s.series.push_back({"grangia", {{854.5, 2}, {933, 4}, {1005, 3}, {1069.5, 1}, {1113, 30}, {1154.5, 71}}});
  return s;
}

FieldGraph sample_field() {
  FieldGraph g;
  g.target = "granica";
  g.nodes = {{"granica", 1.0}, {"granea", 0.999}, {"spicarium", 0.998}, {"modius", 0.64}, {"reddo", 0.61}};
  g.edges = {{"granica", "granea", 0.999},   {"granica", "spicarium", 0.998}, {"granica", "modius", 0.64},
             {"granica", "reddo", 0.61},     {"granea", "spicarium", 0.997},  {"modius", "reddo", 0.52}};
  return g;
}

}  // namespace

TEST(Csv, QuotingAndRoundTrip) {
  auto table = association_table_rows(granary_rows());
  auto csv = emit_csv(table);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "target,occurrences,associations,percent");
  EXPECT_NE(csv.find("granarium,317,85,26.81\n"), std::string::npos);
  EXPECT_NE(csv.find("\"cellarium, cella\",1362,20,1.47\n"), std::string::npos);
  auto rows = parse_csv(csv);
  ASSERT_EQ(rows.size(), table.rows.size() + 1);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    ASSERT_EQ(rows[r + 1].size(), 4u);
    for (std::size_t c = 0; c < 4; ++c) EXPECT_EQ(rows[r + 1][c], cell_text(table.rows[r][c]));
  }
  EXPECT_EQ(csv_field("a\"b"), "\"a\"\"b\"");
  EXPECT_EQ(csv_field("line\nbreak"), "\"line\nbreak\"");
  EXPECT_EQ(parse_csv("a,\"b\"\"c\",\"d\ne\"\n"), (std::vector<std::vector<std::string>>{{"a", "b\"c", "d\ne"}}));
  EXPECT_THROW(parse_csv("\"open"), std::invalid_argument);
}

TEST(Csv, RowWidthChecked) {
  Table t{{"a", "b"}, {{std::string("x")}}};
  EXPECT_THROW(emit_csv(t), std::invalid_argument);
}

TEST(Json, MirrorsCsvWithExactRationals) {
  auto rows = granary_rows();
  auto table = association_table_rows(rows);
  auto j = nlohmann::json::parse(emit_json(table));
  auto csv = parse_csv(emit_csv(table));
  ASSERT_EQ(j["rows"].size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& jr = j["rows"][i];
    EXPECT_EQ(jr["target"], csv[i + 1][0]);
    EXPECT_EQ(std::to_string(jr["occurrences"].get<std::uint64_t>()), csv[i + 1][1]);
    Rational exact(jr["percent"]["num"].get<std::uint64_t>(), jr["percent"]["den"].get<std::uint64_t>());
    EXPECT_EQ(exact, rows[i].percent);
    EXPECT_EQ(exact.to_fixed(2), csv[i + 1][3]);
  }
}

TEST(Tables, Shapes) {
  CorpusStats s{3, 2, 30, 20, std::make_pair(900, 1000)};
  auto st = stats_table(s);
  EXPECT_EQ(emit_csv(st), "statistic,value\nn_documents,3\nn_dated,2\nn_tokens,30\nn_dated_tokens,20\nyear_min,900\nyear_max,1000\n");

  BinSet bins;
  bins.bins = {{0, 900, 1000, 500, {"a", "b"}}, {1, 1001, 1001, 300, {"c"}}};
  EXPECT_EQ(emit_csv(bins_table(bins)),
            "index,year_start,year_end,midpoint,token_mass,n_docs\n0,900,1000,950,500,2\n1,1001,1001,1001,300,1\n");
  EXPECT_EQ(emit_csv(frequency_table(bins, {{"h", {4, 5}}})),
            "bin,label,midpoint,token_mass,h\n0,900\xE2\x80\x93" "1000,950,500,4\n1,1001\xE2\x80\x93" "1001,1001,300,5\n");
  EXPECT_THROW(frequency_table(bins, {{"h", {4}}}), std::invalid_argument);

  std::vector<DicePoint> pts{{0, {2, 1, 1, 1}, Rational(2, 3)}};
  EXPECT_EQ(emit_csv(dice_table(pts)), "bin,f_a,f_b,hits_a,hits_b,dice\n0,2,1,1,1,0.666667\n");

  std::vector<KwicLine> kw{{"d1", 3, {"in", "magno"}, "horreo", {"domini"}, 1096}};
  EXPECT_EQ(emit_csv(kwic_table(kw)), "doc_id,year,position,left,keyword,right\nd1,1096,3,in magno,horreo,domini\n");
  EXPECT_EQ(kwic_text(kw), "d1\t1096\tin magno [horreo] domini\n");
  EXPECT_EQ(emit_csv(lexicon_table({{"g", 3, 2}})), "group,all,dated\ng,3,2\n");
}

TEST(Timeline, ConstantSeriesIsHorizontal) {
  TimelinePlotSpec s;
  s.title = "flat";
  s.series.push_back({"c", {{900, 5}, {1000, 5}, {1100, 5}}});
  auto svg = emit_timeline_svg(s);
  std::smatch m;
  ASSERT_TRUE(std::regex_search(svg, m, std::regex("points=\"([^\"]*)\"")));
  std::regex pt("[0-9.]+,([0-9.]+)");
  std::set<std::string> ys;
  std::string pts = m[1];
  for (auto it = std::sregex_iterator(pts.begin(), pts.end(), pt); it != std::sregex_iterator(); ++it) ys.insert((*it)[1]);
  EXPECT_EQ(ys.size(), 1u);
}

TEST(Timeline, TwoPointSeries) {
  TimelinePlotSpec s;
  s.title = "two";
  s.series.push_back({"x", {{1000, 0}, {1100, 10}}});
  auto svg = emit_timeline_svg(s);
  std::smatch m;
  ASSERT_TRUE(std::regex_search(svg, m, std::regex("points=\"([^\"]*)\"")));
  std::string pts = m[1];
  EXPECT_EQ(std::count(pts.begin(), pts.end(), ','), 2);
  EXPECT_EQ(count(svg, "<polyline"), 1u);
  EXPECT_NE(svg.find("viewBox=\"0 0 960 540\""), std::string::npos);
  EXPECT_TRUE(balanced_xml(svg));
}

TEST(Timeline, OnePolylinePerSeriesAndDiceAxis) {
  auto s = sample_timeline();
  auto svg = emit_timeline_svg(s);
  EXPECT_EQ(count(svg, "<polyline"), 2u);
  EXPECT_NE(svg.find("&amp;"), std::string::npos);
  EXPECT_TRUE(balanced_xml(svg));
  EXPECT_EQ(svg, emit_timeline_svg(s));

  TimelinePlotSpec d;
  d.y_kind = YKind::dice;
  d.title = "dice";
  d.series.push_back({"d", {{900, 0.1}, {1000, 0.2}}});
  auto dsvg = emit_timeline_svg(d);
  EXPECT_NE(dsvg.find(">1</text>"), std::string::npos);
  EXPECT_NE(dsvg.find(">0.20</text>"), std::string::npos);
}

TEST(Timeline, Errors) {
  TimelinePlotSpec s;
  EXPECT_THROW(emit_timeline_svg(s), std::invalid_argument);
  s.series.push_back({"a", {{900, 1}}});
  EXPECT_THROW(emit_timeline_svg(s), std::invalid_argument);
  s.series[0].points.push_back({1000, 2});
  s.series.push_back({"b", {{900, 1}, {1001, 2}}});
  EXPECT_THROW(emit_timeline_svg(s), std::invalid_argument);
  s.series.pop_back();
  s.smoothing = 4;
  EXPECT_THROW(emit_timeline_svg(s), std::invalid_argument);
}

TEST(Timeline, SmoothingLabelledInLegend) {
  auto s = sample_timeline();
  s.smoothing = 3;
  auto svg = emit_timeline_svg(s);
  EXPECT_NE(svg.find("moving average, width 3"), std::string::npos);
  EXPECT_EQ(moving_average({0, 3, 6, 9}, 3), (std::vector<double>{1.5, 3, 6, 7.5}));
}

TEST(Timeline, Golden) {
  check_golden("timeline.svg", emit_timeline_svg(sample_timeline()));
  auto s = sample_timeline();
  s.y_kind = YKind::dice;
  for (auto& series : s.series)
    for (auto& p : series.points) p.second /= 100.0;
  s.title = "Dice";
  check_golden("timeline_dice.svg", emit_timeline_svg(s));
}

TEST(FieldSvg, StarOfOne) {
  FieldGraph g{"h", {{"h", 1.0}, {"g", 0.4}}, {{"h", "g", 0.4}}};
  auto svg = emit_field_svg(g);
  EXPECT_EQ(count(svg, "<circle"), 2u);
  EXPECT_EQ(count(svg, "<line"), 1u);
  EXPECT_NE(svg.find("stroke-opacity=\"0.400\""), std::string::npos);
  EXPECT_TRUE(balanced_xml(svg));
}

TEST(FieldSvg, ThirtyNeighborsThirtyOneLabels) {
  FieldGraph g;
  g.target = "t";
  g.nodes.push_back({"t", 1.0});
  for (int i = 0; i < 30; ++i) {
    g.nodes.push_back({"n" + std::to_string(i), 0.9 - i * 0.01});
    g.edges.push_back({"t", g.nodes.back().lemma, g.nodes.back().similarity});
  }
  auto svg = emit_field_svg(g);
  EXPECT_EQ(count(svg, "<text"), 31u);
  EXPECT_TRUE(balanced_xml(svg));
}

TEST(FieldSvg, GoldenAndErrors) {
  check_golden("field.svg", emit_field_svg(sample_field()));
  FieldGraph bad{"x", {{"y", 1.0}}, {}};
  EXPECT_THROW(emit_field_svg(bad), std::invalid_argument);
  auto g = sample_field();
  g.edges.push_back({"granica", "nowhere", 0.3});
  EXPECT_THROW(emit_field_svg(g), std::invalid_argument);
}

TEST(Xml, Escape) { EXPECT_EQ(xml_escape("a<b>&\"'"), "a&lt;b&gt;&amp;&quot;&apos;"); }
