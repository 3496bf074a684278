#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "diachron/cli.hpp"
#include "diachron/collocation.hpp"
#include "diachron/config.hpp"
#include "diachron/fixture.hpp"
#include "diachron/hash.hpp"
#include "diachron/report.hpp"

namespace fs = std::filesystem;
using namespace diachron;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "diachron");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("diachron_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& content) {
    auto p = dir_ / name;
    std::ofstream(p, std::ios::binary) << content;
    return p.string();
  }
  std::string read(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }
  std::string path(const std::string& name) { return (dir_ / name).string(); }

  fs::path dir_;
};

const char* kDated =
    "<doc id=\"a\" date=\"1000\">\nhorreum\thorreum\nfrumentum\tfrumentum\nx\tx\n</doc>\n"
    "<doc id=\"b\" date=\"1100\">\nx\tx\nhorreum\thorreum\n,\t,\nbladum\tbladum\n</doc>\n"
    "<doc id=\"c\">\nhorreum\thorreum\n</doc>\n";

}  // namespace

TEST_F(CliTest, EmptyCorpusFileIsParseError) {
  auto corpus = write("empty.vert", "");
  auto r = run({"--corpus", corpus, "stats"});
  EXPECT_EQ(r.code, cli::kParseError);
  EXPECT_NE(r.err.find("no documents"), std::string::npos);
}

TEST_F(CliTest, MissingCorpusFileIsParseError) {
  EXPECT_EQ(run({"--corpus", path("nope.vert"), "stats"}).code, cli::kParseError);
}

TEST_F(CliTest, MalformedCorpusStrictAndLenient) {
  auto corpus = write("bad.vert", std::string(kDated) + "<doc id=\"d\" date=\"3000\">\nx\tx\n</doc>\n");
  auto strict = run({"--json", "--corpus", corpus, "stats"});
  EXPECT_EQ(strict.code, cli::kParseError);
  auto j = nlohmann::json::parse(strict.err);
  EXPECT_EQ(j["error"], "parse");
  EXPECT_EQ(j["exit_code"], 2);
  EXPECT_EQ(j["document"], "d");
  EXPECT_EQ(j["line"], 15);
  EXPECT_EQ(std::count(strict.err.begin(), strict.err.end(), '\n'), 1);

  auto lenient = run({"--lenient", "--out", path("o"), "--corpus", corpus, "stats"});
  EXPECT_EQ(lenient.code, 0);
  bool found = false;
  for (const auto& e : fs::directory_iterator(path("o")))
    if (e.path().filename().string().rfind("rejects_", 0) == 0) {
      found = true;
      EXPECT_NE(read(e.path().string()).find("\"id\":\"d\""), std::string::npos);
    }
  EXPECT_TRUE(found);
}

TEST_F(CliTest, StatsPrintsTableAndJson) {
  auto corpus = write("c.vert", kDated);
  auto r = run({"--corpus", corpus, "stats", "horreum", "grain=frumentum,bladum"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("n_documents     3"), std::string::npos);
  auto j = nlohmann::json::parse(r.out.substr(r.out.find('{')));
  EXPECT_EQ(j["n_documents"], 3);
  EXPECT_EQ(j["n_dated"], 2);
  EXPECT_EQ(j["n_tokens"], 8);
  EXPECT_EQ(j["lexicon"][0]["all"], 3);
  EXPECT_EQ(j["lexicon"][0]["dated"], 2);
  EXPECT_EQ(j["lexicon"][1]["all"], 2);
  EXPECT_EQ(j["lexicon"][2]["group"], "total");
}

TEST_F(CliTest, UndatedOnlyCorpusRefusesChronologicalCommands) {
  auto corpus = write("u.vert", "<doc id=\"u\">\nhorreum\thorreum\nbladum\tbladum\n</doc>\n");
  auto stats = run({"--corpus", corpus, "stats"});
  EXPECT_EQ(stats.code, 0);
  EXPECT_NE(stats.out.find("\"n_dated\": 0"), std::string::npos);
  EXPECT_EQ(run({"--corpus", corpus, "--out", path("o"), "freq", "horreum"}).code, cli::kEmptyDated);
  EXPECT_EQ(run({"--corpus", corpus, "--out", path("o"), "dice", "horreum", "bladum"}).code, cli::kEmptyDated);
  EXPECT_EQ(run({"--corpus", corpus, "--out", path("o"), "assoc", "--probe", "bladum", "horreum"}).code,
            cli::kEmptyDated);
  EXPECT_EQ(run({"--corpus", corpus, "--out", path("o"), "--scope", "all", "assoc", "--probe", "bladum", "horreum"}).code,
            0);
}

TEST_F(CliTest, BadGroupsExitFour) {
  auto corpus = write("c.vert", kDated);
  auto r = run({"--json", "--corpus", corpus, "--out", path("o"), "freq", "a=horreum,x", "b=x"});
  EXPECT_EQ(r.code, cli::kBadConfig);
  EXPECT_EQ(nlohmann::json::parse(r.err)["error"], "group");
  auto cfg = write("bad.ini", "[groups]\na = x, y\nb = y\n");
  EXPECT_EQ(run({"--config", cfg, "--corpus", corpus, "stats"}).code, cli::kBadConfig);
  EXPECT_EQ(run({"--corpus", corpus, "--out", path("o"), "assoc", "--probe", "a=horreum,bladum", "horreum"}).code,
            cli::kBadConfig);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).code, cli::kUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kUsage);
  auto corpus = write("c.vert", kDated);
  EXPECT_EQ(run({"--corpus", corpus, "--policy", "median", "stats"}).code, cli::kUsage);
  EXPECT_EQ(run({"stats"}).code, cli::kUsage);
  EXPECT_EQ(run({"--corpus", corpus, "--strict", "--lenient", "stats"}).code, cli::kUsage);
  EXPECT_EQ(run({"--help"}).code, 0);
  auto oov = run({"--json", "--corpus", corpus, "--out", path("o"), "--min-freq", "1", "--scope", "all", "field",
                  "horeum"});
  EXPECT_EQ(oov.code, cli::kUsage);
  auto j = nlohmann::json::parse(oov.err);
  EXPECT_EQ(j["error"], "out_of_vocabulary");
  EXPECT_EQ(j["suggestions"][0], "horreum");
}

TEST_F(CliTest, OutputNames) {
  EXPECT_EQ(cli::output_name("freq", "storage+grain", 0x0123456789abcdefULL, "csv"), "freq_storage+grain_01234567.csv");
  EXPECT_EQ(cli::output_name("field", "a/b c", 0xffffffff00000000ULL, "dot"), "field_a_b_c_ffffffff.dot");
  EXPECT_EQ(cli::output_name("kwic", "", 0, "csv"), "kwic___00000000.csv");
}

TEST_F(CliTest, GenFixtureDeterministic) {
  auto plan = write("plan.json", R"({"eras": [{"years": [900, 1100], "documents": 20}],
                                     "plants": [{"lemma": "horreum", "count": 17}]})");
  ASSERT_EQ(run({"--out", path("a"), "gen-fixture", "--seed", "5", "--plan", plan}).code, 0);
  ASSERT_EQ(run({"--out", path("b"), "gen-fixture", "--seed", "5", "--plan", plan}).code, 0);
  EXPECT_EQ(read(path("a/fixture.vert")), read(path("b/fixture.vert")));
  EXPECT_EQ(read(path("a/fixture.manifest.json")), read(path("b/fixture.manifest.json")));
  auto stats = run({"--corpus", path("a/fixture.vert"), "stats", "horreum"});
  auto j = nlohmann::json::parse(stats.out.substr(stats.out.find('{')));
  EXPECT_EQ(j["lexicon"][0]["all"], 17);
  auto bad = write("bad.json", R"({"eras": []})");
  EXPECT_EQ(run({"--out", path("c"), "gen-fixture", "--plan", bad}).code, cli::kBadConfig);
}

TEST_F(CliTest, FreqEqualsLibraryComposition) {
  FixturePlan plan;
  plan.eras.push_back({{900, 1200}, 40, {60, 100}});
  plan.plants = {{"horreum", 30, std::nullopt}, {"bladum", 20, std::nullopt}};
  auto f = generate_fixture(plan, 3);
  auto corpus_path = write("f.vert", f.corpus);
  auto cfg = write("p.ini", "[groups]\nstorage = horreum\n[bins]\ntarget_mass = 800\n");
  auto r = run({"--config", cfg, "--corpus", corpus_path, "--out", path("o"), "freq", "storage", "bladum"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto csv_path = r.out.substr(0, r.out.find('\n'));
  EXPECT_NE(csv_path.find("freq_storage+bladum_"), std::string::npos);

  auto corpus = std::make_shared<const Corpus>(parse_vertical(std::string_view(f.corpus)).corpus);
  auto idx = build_index(corpus);
  auto bins = slice_equal_mass(*corpus, {800, {}});
  auto expected = emit_csv(frequency_table(
      bins, {{"storage", frequency_series(idx, bins, LemmaGroup("storage", {"horreum"}))},
             {"bladum", frequency_series(idx, bins, LemmaGroup("bladum", {"bladum"}))}}));
  EXPECT_EQ(read(csv_path), expected);
}

TEST_F(CliTest, FingerprintTracksConfig) {
  auto corpus = write("c.vert", kDated);
  auto a = run({"--corpus", corpus, "--out", path("o"), "--scope", "all", "assoc", "--probe", "bladum", "horreum"});
  auto b = run({"--corpus", corpus, "--out", path("o"), "--scope", "all", "--window", "1", "assoc", "--probe",
                "bladum", "horreum"});
  ASSERT_EQ(a.code, 0);
  ASSERT_EQ(b.code, 0);
  EXPECT_NE(a.out, b.out);
  auto again = run({"--corpus", corpus, "--out", path("o"), "--scope", "all", "assoc", "--probe", "bladum", "horreum"});
  EXPECT_EQ(a.out, again.out);
}

TEST_F(CliTest, KwicPrintsAndWritesCsv) {
  auto corpus = write("c.vert", kDated);
  auto r = run({"--corpus", corpus, "kwic", "horreum", "--window", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 3);
  EXPECT_NE(r.out.find("[horreum] frumentum"), std::string::npos);
  auto y = run({"--corpus", corpus, "--out", path("o"), "kwic", "horreum", "--years", "1050-1200", "--csv"});
  ASSERT_EQ(y.code, 0) << y.err;
  auto csv = read(y.out.substr(0, y.out.find('\n')));
  EXPECT_EQ(csv, "doc_id,year,position,left,keyword,right\nb,1100,1,x,horreum,bladum\n");
  EXPECT_EQ(run({"--corpus", corpus, "kwic", "horreum", "--years", "1200-1100"}).code, cli::kUsage);
}

TEST_F(CliTest, FieldWritesAllFormats) {
  auto corpus = write("c.vert", kDated);
  auto r = run({"--corpus", corpus, "--out", path("o"), "--min-freq", "1", "--scope", "all", "field", "horreum",
                "--export-matrix"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* ext : {".dot", ".json", ".svg"}) EXPECT_NE(r.out.find(ext), std::string::npos) << ext;
  EXPECT_NE(r.out.find("matrix_horreum_"), std::string::npos);
  EXPECT_NE(r.out.find("vocabulary_horreum_"), std::string::npos);
  auto years = run({"--corpus", corpus, "--out", path("o"), "--min-freq", "1", "field", "horreum", "--years",
                    "1000-1100"});
  ASSERT_EQ(years.code, 0) << years.err;
  EXPECT_NE(years.out.find("field_horreum_1000-1100_"), std::string::npos);
}
