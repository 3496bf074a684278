#include <gtest/gtest.h>

#include <sstream>

#include "diachron/config.hpp"

using namespace diachron;

namespace {

ProjectConfig parse(const std::string& text, const std::string& base = "/base") {
  std::istringstream in(text);
  return parse_config(in, base);
}

}  // namespace

TEST(Config, FullFile) {
  auto c = parse(R"(; comment
[corpus]
paths = a.vert, /abs/b.vert
strict = false
era_min = 500
skip = Et, in

[groups]
storage = horreum, granarium grangia
grain = frumentum

[bins]
target_mass = 5000
policy = start
max_span = 50

[analysis]
window = 4
scope = all

[dsm]
window = 3
min_freq = 2
weighting = logdice
k = 12
edge_threshold = 0.25

[output]
dir = out
)");
  EXPECT_EQ(c.corpus_paths, (std::vector<std::string>{"/base/a.vert", "/abs/b.vert"}));
  EXPECT_EQ(c.strict, false);
  EXPECT_EQ(c.era_min, 500);
  EXPECT_EQ(c.skip_extra, (std::vector<std::string>{"et", "in"}));
  ASSERT_EQ(c.groups.size(), 2u);
  EXPECT_EQ(c.groups[0].name, "storage");
  EXPECT_EQ(c.groups[0].members, (std::set<std::string>{"granarium", "grangia", "horreum"}));
  ASSERT_NE(c.group("grain"), nullptr);
  EXPECT_EQ(c.group("nothing"), nullptr);
  EXPECT_EQ(c.slice.target_mass, 5000u);
  EXPECT_EQ(c.slice.dating.policy, YearPolicy::start);
  EXPECT_EQ(c.slice.dating.max_span, 50);
  EXPECT_EQ(c.window, 4);
  EXPECT_EQ(c.scope, Scope::all);
  EXPECT_EQ(c.dsm.window, 3);
  EXPECT_EQ(c.dsm.min_freq, 2u);
  EXPECT_EQ(c.dsm.weighting, Weighting::logdice);
  EXPECT_EQ(c.dsm.k, 12u);
  EXPECT_DOUBLE_EQ(c.dsm.edge_threshold, 0.25);
  EXPECT_EQ(c.output_dir, "out");
}

TEST(Config, Defaults) {
  auto c = parse("");
  EXPECT_EQ(c.slice.target_mass, 1'000'000u);
  EXPECT_EQ(c.window, 5);
  EXPECT_EQ(c.scope, Scope::dated);
  EXPECT_EQ(c.dsm.min_freq, 10u);
  EXPECT_EQ(c.dsm.k, 30u);
  EXPECT_EQ(c.dsm.weighting, Weighting::ppmi);
  EXPECT_FALSE(c.strict);
}

TEST(Config, GroupErrors) {
  EXPECT_THROW(parse("[groups]\na = x, y\nb = y\n"), GroupOverlapError);
  EXPECT_THROW(parse("[groups]\na = x\na = z\n"), GroupError);
  EXPECT_THROW(parse("[groups]\na =\n"), GroupError);
}

TEST(Config, ValueErrors) {
  EXPECT_THROW(parse("[bins]\ntarget_mass = lots\n"), ConfigError);
  EXPECT_THROW(parse("[bins]\ntarget_mass = -5\n"), ConfigError);
  EXPECT_THROW(parse("[bins]\ntarget_mass = 0\n"), ConfigError);
  EXPECT_THROW(parse("[bins]\npolicy = median\n"), ConfigError);
  EXPECT_THROW(parse("[dsm]\nedge_threshold = 2\n"), ConfigError);
  EXPECT_THROW(parse("[dsm]\nweighting = tfidf\n"), ConfigError);
  EXPECT_THROW(parse("[analysis]\nwindow = 0\n"), ConfigError);
  EXPECT_THROW(parse("[corpus]\nstrict = maybe\n"), ConfigError);
  EXPECT_THROW(parse("[nonsense]\nx = 1\n"), ConfigError);
  EXPECT_THROW(parse("[bins]\ncolour = red\n"), ConfigError);
  EXPECT_THROW(parse("[bins\nx = 1\n"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/config.ini"), ConfigError);
}

TEST(Config, CanonicalCoversAnalysisSettings) {
  auto a = parse("[groups]\ng = x\n");
  auto b = parse("[groups]\ng = x, y\n");
  auto c = parse("[groups]\ng = x\n[output]\ndir = elsewhere\n");
  auto d = parse("[groups]\ng = x\n[dsm]\nk = 5\n");
  EXPECT_NE(a.canonical(), b.canonical());
  EXPECT_EQ(a.canonical(), c.canonical());
  EXPECT_NE(a.canonical(), d.canonical());
}

TEST(Config, SplitMembers) {
  EXPECT_EQ(split_members(" a, b\tc,,d "), (std::vector<std::string>{"a", "b", "c", "d"}));
}

TEST(Config, InlineComments) {
  auto c = parse("[bins]\npolicy = end   ; midpoint, start or end\ntarget_mass = 700\t# words\n"
                 "[groups]\ng = a#b, c ; two members\n");
  EXPECT_EQ(c.slice.dating.policy, YearPolicy::end);
  EXPECT_EQ(c.slice.target_mass, 700u);
  ASSERT_NE(c.group("g"), nullptr);
  EXPECT_EQ(c.group("g")->members.size(), 2u);
  EXPECT_TRUE(c.group("g")->contains("a#b"));
}
