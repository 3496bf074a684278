#include "diachron/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "diachron/chrono.hpp"
#include "diachron/collocation.hpp"
#include "diachron/config.hpp"
#include "diachron/corpus.hpp"
#include "diachron/dsm.hpp"
#include "diachron/fixture.hpp"
#include "diachron/hash.hpp"
#include "diachron/index.hpp"
#include "diachron/report.hpp"

namespace diachron::cli {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Options {
  std::vector<std::string> corpus;
  std::string config;
  std::string out;
  unsigned threads = 0;
  bool strict = false;
  bool lenient = false;
  bool json_errors = false;

  std::optional<std::uint64_t> target_mass;
  std::optional<std::string> policy;
  std::optional<int> max_span;
  std::optional<int> window;
  std::optional<std::string> scope;
  std::optional<int> dsm_window;
  std::optional<std::uint64_t> min_freq;
  std::optional<std::string> weighting;
  std::optional<std::size_t> k;
  std::optional<double> edge_threshold;
};

struct Context {
  Options opt;
  ProjectConfig cfg;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;

  std::shared_ptr<const Corpus> corpus;
  std::optional<PositionalIndex> index;

  unsigned threads() const {
    if (opt.threads > 0) return opt.threads;
    return std::max(1u, std::thread::hardware_concurrency());
  }
  std::string out_dir() const {
    if (!opt.out.empty()) return opt.out;
    if (cfg.output_dir) return *cfg.output_dir;
    return ".";
  }
};

void apply_overrides(Context& ctx) {
  const auto& o = ctx.opt;
  auto& c = ctx.cfg;
  try {
    if (o.target_mass) c.slice.target_mass = *o.target_mass;
    if (o.policy) c.slice.dating.policy = parse_year_policy(*o.policy);
    if (o.max_span) c.slice.dating.max_span = *o.max_span;
    if (o.window) c.window = *o.window;
    if (o.scope) c.scope = parse_scope(*o.scope);
    if (o.dsm_window) c.dsm.window = *o.dsm_window;
    if (o.min_freq) c.dsm.min_freq = *o.min_freq;
    if (o.weighting) c.dsm.weighting = parse_weighting(*o.weighting);
    if (o.k) c.dsm.k = *o.k;
    if (o.edge_threshold) c.dsm.edge_threshold = *o.edge_threshold;
  } catch (const GroupError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
}

void load_corpus(Context& ctx) {
  std::vector<std::string> paths = ctx.opt.corpus.empty() ? ctx.cfg.corpus_paths : ctx.opt.corpus;
  if (paths.empty()) throw UsageError("no corpus given (use --corpus or [corpus] paths in the config)");

  ParseOptions po;
  po.strict = ctx.opt.lenient ? false : ctx.opt.strict ? true : ctx.cfg.strict.value_or(true);
  po.era_min = ctx.cfg.era_min;
  po.era_max = ctx.cfg.era_max;
  po.skip = SkipList(true, std::set<std::string>(ctx.cfg.skip_extra.begin(), ctx.cfg.skip_extra.end()));

  std::vector<Document> docs;
  std::vector<Reject> rejects;
  std::set<std::string> ids;
  for (const auto& path : paths) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(Reject{"", 0, fmt::format("cannot open corpus file {}", path)});
    auto result = parse_vertical(in, po);
    if (result.corpus.empty() && result.rejects.empty())
      throw ParseError(Reject{"", 0, fmt::format("corpus file {} contains no documents", path)});
    for (const auto& d : result.corpus.documents()) {
      if (!ids.insert(d.id).second) {
        Reject r{d.id, 0, fmt::format("duplicate document id across corpus files ({})", path)};
        if (po.strict) throw ParseError(r);
        rejects.push_back(r);
        continue;
      }
      docs.push_back(d);
    }
    rejects.insert(rejects.end(), result.rejects.begin(), result.rejects.end());
  }
  if (docs.empty()) throw ParseError(Reject{"", 0, "no well-formed document in the corpus"});
  ctx.corpus = std::make_shared<const Corpus>(std::move(docs), po.skip);

  if (!rejects.empty()) {
    fs::create_directories(ctx.out_dir());
    auto path = fs::path(ctx.out_dir()) / fmt::format("rejects_{}.jsonl", short_fingerprint(ctx.corpus->fingerprint()));
    std::ofstream rj(path, std::ios::binary);
    write_rejects_jsonl(rejects, rj);
    *ctx.err << fmt::format("{} document(s) rejected, see {}\n", rejects.size(), path.string());
  }
}

const PositionalIndex& index_of(Context& ctx) {
  if (!ctx.index) ctx.index = PositionalIndex::build(ctx.corpus, ctx.threads());
  return *ctx.index;
}

void require_dated(const Context& ctx) {
  if (ctx.corpus->stats().n_dated == 0) throw EmptyDatedCorpusError("the corpus has no dated documents");
}

// A config group name, "name=a,b,c", or a bare lemma.
LemmaGroup resolve_group(const Context& ctx, const std::string& arg) {
  if (auto eq = arg.find('='); eq != std::string::npos) {
    std::set<std::string> members;
    for (auto& m : split_members(arg.substr(eq + 1))) members.insert(std::move(m));
    LemmaGroup g(arg.substr(0, eq), std::move(members));
    validate_groups({g});
    return g;
  }
  if (const auto* g = ctx.cfg.group(arg)) return *g;
  LemmaGroup g(arg, {arg});
  validate_groups({g});
  return g;
}

std::vector<LemmaGroup> resolve_groups(const Context& ctx, const std::vector<std::string>& args) {
  std::vector<LemmaGroup> groups;
  for (const auto& a : args) groups.push_back(resolve_group(ctx, a));
  validate_groups(groups);
  return groups;
}

std::pair<int, int> parse_years(const std::string& text) {
  auto dash = text.find('-', 1);
  int a = 0, b = 0;
  try {
    if (dash == std::string::npos) throw std::invalid_argument("no dash");
    std::size_t used = 0;
    a = std::stoi(text.substr(0, dash), &used);
    if (used != dash) throw std::invalid_argument("trailing");
    b = std::stoi(text.substr(dash + 1), &used);
    if (used != text.size() - dash - 1) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw UsageError(fmt::format("bad year range \"{}\" (expected FIRST-LAST)", text));
  }
  if (b < a) throw UsageError(fmt::format("year range \"{}\" is reversed", text));
  return {a, b};
}

std::string describe(const LemmaGroup& g) {
  std::string out = g.name + ":";
  for (const auto& m : g.members) out += m + ",";
  return out;
}

// Covers the corpus, the effective configuration and the command arguments.
std::uint64_t run_fingerprint(const Context& ctx, const std::string& command, const std::vector<std::string>& args) {
  Fnv1a h;
  h.update(ctx.corpus->fingerprint());
  h.field(ctx.cfg.canonical());
  h.field(command);
  for (const auto& a : args) h.field(a);
  return h.digest();
}

std::string write_output(const Context& ctx, const std::string& name, const std::string& content) {
  fs::create_directories(ctx.out_dir());
  auto path = fs::path(ctx.out_dir()) / name;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  f << content;
  if (!f) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  *ctx.out << path.string() << '\n';
  return path.string();
}

std::string text_table(const Table& t) {
  std::vector<std::size_t> width(t.columns.size(), 0);
  std::vector<std::vector<std::string>> cells;
  cells.push_back(t.columns);
  for (const auto& row : t.rows) {
    std::vector<std::string> r;
    for (const auto& c : row) r.push_back(cell_text(c));
    cells.push_back(std::move(r));
  }
  for (const auto& r : cells)
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  std::string out;
  for (const auto& r : cells) {
    std::string line;
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) line += "  ";
      line += fmt::format("{:<{}}", r[i], width[i]);
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------

void cmd_stats(Context& ctx, const std::vector<std::string>& group_args) {
  const auto& s = ctx.corpus->stats();
  *ctx.out << text_table(stats_table(s));
  ojson j;
  j["n_documents"] = s.n_documents;
  j["n_dated"] = s.n_dated;
  j["n_tokens"] = s.n_tokens;
  j["n_dated_tokens"] = s.n_dated_tokens;
  j["year_span"] = s.year_span ? ojson::array({s.year_span->first, s.year_span->second}) : ojson(nullptr);
  if (!group_args.empty()) {
    auto groups = resolve_groups(ctx, group_args);
    auto rows = lexicon_report(*ctx.corpus, groups);
    rows.push_back(lexicon_total(rows));
    *ctx.out << '\n' << text_table(lexicon_table(rows));
    j["lexicon"] = ojson::array();
    for (const auto& r : rows) j["lexicon"].push_back({{"group", r.group}, {"all", r.all}, {"dated", r.dated}});
  }
  *ctx.out << '\n' << j.dump(2) << '\n';
}

struct FreqArgs {
  std::vector<std::string> groups;
  bool rate = false;
  int smooth = 0;
};

void cmd_freq(Context& ctx, const FreqArgs& a) {
  require_dated(ctx);
  auto groups = resolve_groups(ctx, a.groups);
  const auto& index = index_of(ctx);
  auto bins = slice_equal_mass(*ctx.corpus, ctx.cfg.slice);

  std::vector<std::pair<std::string, std::vector<std::uint64_t>>> series;
  std::vector<std::string> fp_args;
  std::string target;
  for (const auto& g : groups) {
    series.emplace_back(g.name, frequency_series(index, bins, g));
    fp_args.push_back(describe(g));
    target += (target.empty() ? "" : "+") + g.name;
  }
  fp_args.push_back(a.rate ? "rate" : "count");
  fp_args.push_back(std::to_string(a.smooth));
  const auto fp = run_fingerprint(ctx, "freq", fp_args);

  TimelinePlotSpec plot;
  plot.y_kind = a.rate ? YKind::rate : YKind::count;
  plot.title = fmt::format("Occurrences of {} per chronological bin", target);
  if (a.smooth) plot.smoothing = a.smooth;
  for (const auto& [name, counts] : series) {
    PlotSeries ps{name, {}};
    for (const auto& b : bins.bins) {
      double v = static_cast<double>(counts[b.index]);
      if (a.rate) v = v * 1e6 / static_cast<double>(b.token_mass);
      ps.points.emplace_back(bin_midpoint(b), v);
    }
    plot.series.push_back(std::move(ps));
  }
  write_output(ctx, output_name("freq", target, fp, "csv"), emit_csv(frequency_table(bins, series)));
  if (bins.bins.size() >= 2) {
    write_output(ctx, output_name("freq", target, fp, "svg"), emit_timeline_svg(plot));
  } else {
    *ctx.err << "only one chronological bin: timeline not drawn\n";
  }
}

struct AssocArgs {
  std::string probe;
  std::vector<std::string> targets;
};

void cmd_assoc(Context& ctx, const AssocArgs& a) {
  if (ctx.cfg.scope == Scope::dated) require_dated(ctx);
  auto probe = resolve_group(ctx, a.probe);
  auto targets = resolve_groups(ctx, a.targets);
  for (const auto& t : targets) require_disjoint(t, probe);
  const auto& index = index_of(ctx);
  auto rows = association_table(index, targets, probe, ctx.cfg.window, ctx.cfg.scope);

  std::vector<std::string> fp_args{describe(probe)};
  for (const auto& t : targets) fp_args.push_back(describe(t));
  const auto fp = run_fingerprint(ctx, "assoc", fp_args);
  auto table = association_table_rows(rows);
  write_output(ctx, output_name("assoc", probe.name, fp, "csv"), emit_csv(table));
  write_output(ctx, output_name("assoc", probe.name, fp, "json"), emit_json(table));
}

struct DiceArgs {
  std::string a;
  std::string b;
};

void cmd_dice(Context& ctx, const DiceArgs& args) {
  require_dated(ctx);
  auto ga = resolve_group(ctx, args.a);
  auto gb = resolve_group(ctx, args.b);
  validate_groups({ga, gb});
  const auto& index = index_of(ctx);
  auto bins = slice_equal_mass(*ctx.corpus, ctx.cfg.slice);
  auto points = dice_series(index, bins, ga, gb, ctx.cfg.window);

  const std::string target = ga.name + "+" + gb.name;
  const auto fp = run_fingerprint(ctx, "dice", {describe(ga), describe(gb)});
  write_output(ctx, output_name("dice", target, fp, "csv"), emit_csv(dice_table(points)));

  TimelinePlotSpec plot;
  plot.y_kind = YKind::dice;
  plot.title = fmt::format("Dice association of {} and {} (window {})", ga.name, gb.name, ctx.cfg.window);
  PlotSeries ps{fmt::format("dice({}, {})", ga.name, gb.name), {}};
  for (const auto& p : points) ps.points.emplace_back(bin_midpoint(bins.bins[p.bin_index]), p.dice.to_double());
  plot.series.push_back(std::move(ps));
  if (bins.bins.size() >= 2) {
    write_output(ctx, output_name("dice", target, fp, "svg"), emit_timeline_svg(plot));
  } else {
    *ctx.err << "only one chronological bin: timeline not drawn\n";
  }
}

struct FieldArgs {
  std::string target;
  std::string years;
  bool export_matrix = false;
};

void cmd_field(Context& ctx, const FieldArgs& a) {
  const std::string target = fold_case(a.target);
  DocSubset subset;
  std::string label = target;
  if (!a.years.empty()) {
    auto [y1, y2] = parse_years(a.years);
    require_dated(ctx);
    subset = DocSubset::years(*ctx.corpus, y1, y2, ctx.cfg.slice.dating);
    label += fmt::format("_{}-{}", y1, y2);
  } else {
    if (ctx.cfg.scope == Scope::dated) require_dated(ctx);
    subset = scope_subset(*ctx.corpus, ctx.cfg.scope);
  }
  const auto& index = index_of(ctx);
  auto matrix = dsm_build(index, subset, ctx.cfg.dsm, ctx.threads());
  auto graph = semantic_field(matrix, target, ctx.cfg.dsm);

  const auto fp = run_fingerprint(ctx, "field", {target, a.years});
  write_output(ctx, output_name("field", label, fp, "dot"), to_dot(graph));
  write_output(ctx, output_name("field", label, fp, "json"), to_json(graph));
  write_output(ctx, output_name("field", label, fp, "svg"), emit_field_svg(graph));
  if (a.export_matrix) {
    write_output(ctx, output_name("matrix", label, fp, "csv"), emit_csv(matrix_triplets_table(matrix)));
    write_output(ctx, output_name("vocabulary", label, fp, "csv"), emit_csv(vocabulary_table(matrix)));
  }
}

struct KwicArgs {
  std::string group;
  std::size_t limit = 100;
  std::string years;
  bool csv = false;
};

void cmd_kwic(Context& ctx, const KwicArgs& a) {
  auto group = resolve_group(ctx, a.group);
  KwicOptions ko;
  ko.window = ctx.cfg.window;
  ko.limit = a.limit;
  ko.dating = ctx.cfg.slice.dating;
  if (!a.years.empty()) ko.years = parse_years(a.years);
  const auto& index = index_of(ctx);
  auto lines = concordance(index, group, ko);
  if (a.csv) {
    const auto fp = run_fingerprint(ctx, "kwic", {describe(group), a.years, std::to_string(a.limit)});
    write_output(ctx, output_name("kwic", group.name, fp, "csv"), emit_csv(kwic_table(lines)));
  } else {
    *ctx.out << kwic_text(lines);
  }
}

struct FixtureArgs {
  std::uint64_t seed = 1;
  std::string plan;
  std::string name = "fixture";
};

void cmd_gen_fixture(Context& ctx, const FixtureArgs& a) {
  auto plan = load_plan(a.plan);
  auto fixture = generate_fixture(plan, a.seed);
  write_output(ctx, a.name + ".vert", fixture.corpus);
  write_output(ctx, a.name + ".manifest.json", fixture.manifest.dump(2) + "\n");
}

struct Failure {
  int code;
  std::string kind;
  std::string message;
  ojson extra = ojson::object();
};

void report(const Failure& f, bool json, std::ostream& err) {
  if (json) {
    ojson j;
    j["error"] = f.kind;
    j["exit_code"] = f.code;
    j["message"] = f.message;
    for (const auto& [k, v] : f.extra.items()) j[k] = v;
    err << j.dump() << '\n';
  } else {
    err << "error: " << f.message << '\n';
  }
}

}  // namespace

std::string output_name(const std::string& command, const std::string& target, std::uint64_t fingerprint,
                        const std::string& ext) {
  std::string safe;
  for (unsigned char c : target) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '+' || c == '.' || c >= 0x80) safe.push_back(static_cast<char>(c));
    else safe.push_back('_');
  }
  if (safe.empty() || safe.front() == '.') safe.insert(safe.begin(), '_');
  return fmt::format("{}_{}_{}.{}", command, safe, short_fingerprint(fingerprint), ext);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Context ctx;
  ctx.out = &out;
  ctx.err = &err;
  auto& o = ctx.opt;

  CLI::App app{"Diachronic corpus analysis: binning, frequency timelines, cooccurrence, semantic fields"};
  app.name("diachron");
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--corpus", o.corpus, "Vertical-format corpus file (repeatable)");
  app.add_option("--config", o.config, "Project config file");
  app.add_option("--out", o.out, "Output directory");
  app.add_option("--threads", o.threads, "Worker threads (default: available parallelism)")->check(CLI::PositiveNumber);
  auto* strict = app.add_flag("--strict", o.strict, "Abort on the first malformed document");
  app.add_flag("--lenient", o.lenient, "Skip malformed documents and report them")->excludes(strict);
  app.add_flag("--json", o.json_errors, "Report errors as single-line JSON on stderr");
  app.add_option("--target-mass", o.target_mass, "Words per chronological bin");
  app.add_option("--policy", o.policy, "Working year of interval dates: midpoint, start or end");
  app.add_option("--max-span", o.max_span, "Widest accepted date interval, in years");
  app.add_option("--window", o.window, "Cooccurrence window, in words");
  app.add_option("--scope", o.scope, "Documents used by assoc and field: all or dated");
  app.add_option("--dsm-window", o.dsm_window, "Window of the distributional model");
  app.add_option("--min-freq", o.min_freq, "Minimum frequency of a distributional vocabulary item");
  app.add_option("--weighting", o.weighting, "raw, ppmi or logdice");
  app.add_option("-k,--neighbors", o.k, "Neighbors in a semantic field");
  app.add_option("--edge-threshold", o.edge_threshold, "Least similarity of a neighbor-neighbor edge");

  std::vector<std::string> stats_groups;
  auto* stats = app.add_subcommand("stats", "Corpus statistics and optional lexicon counts");
  stats->add_option("groups", stats_groups, "Lemma groups to count");

  FreqArgs freq_args;
  auto* freq = app.add_subcommand("freq", "Group frequencies per chronological bin (CSV and SVG)");
  freq->add_option("groups", freq_args.groups, "Lemma groups")->required();
  freq->add_flag("--rate", freq_args.rate, "Plot occurrences per million words");
  freq->add_option("--smooth", freq_args.smooth, "Moving-average width for the plot (odd, >= 3)");

  AssocArgs assoc_args;
  auto* assoc = app.add_subcommand("assoc", "Share of target occurrences near a probe group (CSV and JSON)");
  assoc->add_option("--probe", assoc_args.probe, "Probe group")->required();
  assoc->add_option("targets", assoc_args.targets, "Target groups")->required();

  DiceArgs dice_args;
  auto* dice = app.add_subcommand("dice", "Dice association of two groups per bin (CSV and SVG)");
  dice->add_option("a", dice_args.a, "First group")->required();
  dice->add_option("b", dice_args.b, "Second group")->required();

  FieldArgs field_args;
  auto* field = app.add_subcommand("field", "Semantic field of a lemma (DOT, JSON and SVG)");
  field->add_option("target", field_args.target, "Target lemma")->required();
  field->add_option("--years", field_args.years, "Restrict to assigned years FIRST-LAST");
  field->add_flag("--export-matrix", field_args.export_matrix, "Also write the weighted matrix and vocabulary");

  KwicArgs kwic_args;
  auto* kwic = app.add_subcommand("kwic", "Keyword-in-context concordance");
  kwic->add_option("group", kwic_args.group, "Lemma group")->required();
  kwic->add_option("--limit", kwic_args.limit, "Maximum number of lines");
  kwic->add_option("--years", kwic_args.years, "Restrict to assigned years FIRST-LAST");
  kwic->add_flag("--csv", kwic_args.csv, "Write a CSV file instead of printing");

  FixtureArgs fixture_args;
  auto* gen = app.add_subcommand("gen-fixture", "Generate a synthetic corpus and its ground-truth manifest");
  gen->add_option("--seed", fixture_args.seed, "Random seed");
  gen->add_option("--plan", fixture_args.plan, "Fixture plan (JSON)")->required();
  gen->add_option("--name", fixture_args.name, "Base name of the written files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kOk;
    }
    const bool json = std::any_of(argv + 1, argv + argc, [](const char* a) { return std::string_view(a) == "--json"; });
    report({kUsage, "usage", e.what()}, json, err);
    if (!json) err << "run with --help for usage\n";
    return kUsage;
  }

  try {
    if (!o.config.empty()) ctx.cfg = load_config(o.config);
    apply_overrides(ctx);
    if (gen->parsed()) {
      cmd_gen_fixture(ctx, fixture_args);
      return kOk;
    }
    load_corpus(ctx);
    if (stats->parsed()) cmd_stats(ctx, stats_groups);
    else if (freq->parsed()) cmd_freq(ctx, freq_args);
    else if (assoc->parsed()) cmd_assoc(ctx, assoc_args);
    else if (dice->parsed()) cmd_dice(ctx, dice_args);
    else if (field->parsed()) cmd_field(ctx, field_args);
    else if (kwic->parsed()) cmd_kwic(ctx, kwic_args);
    return kOk;
  } catch (const ParseError& e) {
    Failure f{kParseError, "parse", e.what()};
    f.extra["document"] = e.reject().id;
    f.extra["line"] = e.reject().line;
    report(f, o.json_errors, err);
    return kParseError;
  } catch (const EmptyDatedCorpusError& e) {
    report({kEmptyDated, "empty_dated_corpus", e.what()}, o.json_errors, err);
    return kEmptyDated;
  } catch (const GroupError& e) {
    report({kBadConfig, "group", e.what()}, o.json_errors, err);
    return kBadConfig;
  } catch (const ConfigError& e) {
    report({kBadConfig, "config", e.what()}, o.json_errors, err);
    return kBadConfig;
  } catch (const PlanError& e) {
    report({kBadConfig, "plan", e.what()}, o.json_errors, err);
    return kBadConfig;
  } catch (const OutOfVocabularyError& e) {
    Failure f{kUsage, "out_of_vocabulary", e.what()};
    f.extra["suggestions"] = e.suggestions();
    report(f, o.json_errors, err);
    return kUsage;
  } catch (const UsageError& e) {
    report({kUsage, "usage", e.what()}, o.json_errors, err);
    return kUsage;
  } catch (const std::exception& e) {
    report({kUsage, "runtime", e.what()}, o.json_errors, err);
    return kUsage;
  }
}

}  // namespace diachron::cli
