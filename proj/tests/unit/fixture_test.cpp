#include <gtest/gtest.h>

#include "diachron/collocation.hpp"
#include "diachron/fixture.hpp"
#include "oracle.hpp"

using namespace diachron;

namespace {

FixturePlan small_plan() {
  FixturePlan plan;
  plan.eras.push_back({{900, 1049}, 25, {60, 100}, 0.3, {10, 40}, 0.2});
  plan.eras.push_back({{1100, 1250}, 25, {60, 100}, 0.3, {10, 40}, 0.0});
  plan.undated_documents = 4;
  plan.case_variation = 0.3;
  plan.plants = {{"horreum", 17, std::nullopt}, {"grangia", 9, std::make_pair(1100, 1250)}};
  plan.pairs = {{"granarium", "frumentum", 12, 2, std::make_pair(1100, 1250)}};
  plan.clusters = {{"c", {"alpha", "beta"}, {"x1", "x2", "x3"}, 6, 3, std::nullopt}};
  return plan;
}

}  // namespace

TEST(Fixture, SameSeedSameBytes) {
  auto a = generate_fixture(small_plan(), 3);
  auto b = generate_fixture(small_plan(), 3);
  EXPECT_EQ(a.corpus, b.corpus);
  EXPECT_EQ(a.manifest.dump(), b.manifest.dump());
  EXPECT_NE(a.corpus, generate_fixture(small_plan(), 4).corpus);
}

TEST(Fixture, ManifestMatchesParsedCorpus) {
  auto f = generate_fixture(small_plan(), 9);
  auto c = parse_vertical(std::string_view(f.corpus)).corpus;
  const auto& m = f.manifest;
  EXPECT_EQ(c.stats().n_documents, m["stats"]["n_documents"].get<std::uint64_t>());
  EXPECT_EQ(c.stats().n_documents, 54u);
  EXPECT_EQ(c.stats().n_dated, 50u);
  ASSERT_EQ(m["documents"].size(), c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto& d = m["documents"][i];
    EXPECT_EQ(d["id"], c.documents()[i].id);
    EXPECT_EQ(d["tokens"].get<std::size_t>(), c.documents()[i].tokens.size());
    EXPECT_EQ(d["words"].get<std::uint64_t>(), c.word_count(i));
    for (const auto& [lemma, n] : d["planted"].items()) {
      std::uint64_t seen = 0;
      for (const auto& t : c.documents()[i].tokens) seen += t.lemma == lemma;
      EXPECT_EQ(seen, n.get<std::uint64_t>()) << lemma;
    }
  }
  EXPECT_EQ(group_frequency(c, LemmaGroup("h", {"horreum"})), 17u);
  EXPECT_EQ(group_frequency(c, LemmaGroup("g", {"grangia"})), 9u);
}

TEST(Fixture, PlantedYearsRespected) {
  auto f = generate_fixture(small_plan(), 10);
  for (const auto& d : f.manifest["documents"]) {
    if (!d["planted"].contains("grangia")) continue;
    ASSERT_FALSE(d["assigned_year"].is_null());
    EXPECT_GE(d["assigned_year"].get<int>(), 1100);
  }
}

TEST(Fixture, IsolationMakesAssociationsExact) {
  auto plan = small_plan();
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto f = generate_fixture(plan, seed);
    auto c = parse_vertical(std::string_view(f.corpus)).corpus;
    std::uint64_t pairs = 0;
    for (const auto& d : f.manifest["documents"])
      if (d["pairs"].contains("granarium|frumentum")) pairs += d["pairs"]["granarium|frumentum"].get<std::uint64_t>();
    EXPECT_EQ(pairs, 12u);
    for (int w = 2; w < plan.isolation; ++w) {
      auto [occ, hit] = oracle::hits(c, LemmaGroup("a", {"granarium"}), LemmaGroup("b", {"frumentum"}), w,
                                     oracle::all_docs(c));
      EXPECT_EQ(occ, 12u);
      EXPECT_EQ(hit, 12u);
    }
    auto [occ, hit] = oracle::hits(c, LemmaGroup("a", {"granarium"}), LemmaGroup("b", {"frumentum"}), 1,
                                   oracle::all_docs(c));
    EXPECT_EQ(hit, 0u);  // planted at gap 2
    auto [h_occ, h_hit] =
        oracle::hits(c, LemmaGroup("h", {"horreum"}), LemmaGroup("g", {"grangia"}), 10, oracle::all_docs(c));
    EXPECT_EQ(h_hit, 0u);
    (void)h_occ;
  }
}

TEST(Fixture, CaseVariationIsFolded) {
  auto f = generate_fixture(small_plan(), 2);
  EXPECT_NE(f.corpus.find("Horreum"), std::string::npos);
  auto c = parse_vertical(std::string_view(f.corpus)).corpus;
  EXPECT_EQ(group_frequency(c, LemmaGroup("h", {"horreum"})), 17u);
}

TEST(Fixture, PlanParsingAndValidation) {
  auto plan = parse_plan(nlohmann::json::parse(R"({
    "eras": [{"years": [900, 1000], "documents": 3}],
    "plants": [{"lemma": "horreum", "count": 2, "years": [900, 1000]}],
    "pairs": [{"a": "x", "b": "y", "count": 1, "gap": 3}]
  })"));
  EXPECT_EQ(plan.eras.size(), 1u);
  EXPECT_EQ(plan.plants[0].years, std::make_pair(900, 1000));
  EXPECT_EQ(plan.pairs[0].gap, 3);
  EXPECT_EQ(plan.isolation, 11);

  auto bad = [](const char* text) { return [text] { parse_plan(nlohmann::json::parse(text)); }; };
  EXPECT_THROW(bad(R"([])")(), PlanError);
  EXPECT_THROW(bad(R"({})")(), PlanError);
  EXPECT_THROW(bad(R"({"eras": [{"years": [900]}]})")(), PlanError);
  EXPECT_THROW(bad(R"({"eras": [{"years": [900, 1000], "documents": 1}], "plants": [{"lemma": "Horreum", "count": 1}]})")(),
               PlanError);
  EXPECT_THROW(bad(R"({"eras": [{"years": [900, 1000], "documents": 1}], "pairs": [{"a": "x", "b": "x", "count": 1}]})")(),
               PlanError);
  EXPECT_THROW(bad(R"({"eras": [{"years": [900, 1000], "documents": 1}], "pairs": [{"a": "x", "b": "y", "gap": 11}]})")(),
               PlanError);
  EXPECT_THROW(bad(R"({"eras": [{"years": [100, 1000], "documents": 1}]})")(), PlanError);
  EXPECT_THROW(bad(R"({"eras": [{"years": [900, 1000], "documents": "many"}]})")(), PlanError);
  EXPECT_THROW(bad(R"({"eras": [{"years": [900, 1000], "documents": 1}],
                       "plants": [{"lemma": "a", "count": 1}],
                       "clusters": [{"members": ["a"], "context": ["b"], "occurrences": 1}]})")(),
               PlanError);
  EXPECT_THROW(load_plan("/nonexistent/plan.json"), PlanError);
}

TEST(Fixture, UnmatchedYearRangeIsAPlanError) {
  FixturePlan plan;
  plan.eras.push_back({{900, 1000}, 3});
  plan.plants = {{"horreum", 1, std::make_pair(1200, 1300)}};
  EXPECT_THROW(generate_fixture(plan, 1), PlanError);
}
