#include "diachron/config.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <type_traits>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

namespace diachron {

namespace pt = boost::property_tree;

namespace {

const std::set<std::string> kSections = {"corpus", "groups", "bins", "analysis", "dsm", "output"};

const std::set<std::string>& known_keys(const std::string& section) {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"corpus", {"paths", "path", "strict", "era_min", "era_max", "skip"}},
      {"bins", {"target_mass", "policy", "max_span"}},
      {"analysis", {"window", "scope"}},
      {"dsm", {"window", "min_freq", "weighting", "k", "edge_threshold"}},
      {"output", {"dir"}},
  };
  return keys.at(section);
}

template <typename T>
T value_of(const pt::ptree& node, const std::string& where) {
  if constexpr (std::is_unsigned_v<T>) {
    if (node.data().find('-') != std::string::npos)
      throw ConfigError(fmt::format("bad value \"{}\" for {}", node.data(), where));
  }
  auto v = node.get_value_optional<T>();
  if (!v) throw ConfigError(fmt::format("bad value \"{}\" for {}", node.data(), where));
  return *v;
}

bool bool_of(const pt::ptree& node, const std::string& where) {
  const std::string v = fold_case(node.data());
  if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
  if (v == "false" || v == "no" || v == "0" || v == "off") return false;
  throw ConfigError(fmt::format("bad boolean \"{}\" for {}", node.data(), where));
}

// Drops a trailing "; comment" or "# comment" (the marker must follow a blank).
void strip_inline_comments(pt::ptree& tree) {
  for (auto& [key, child] : tree) {
    strip_inline_comments(child);
    std::string v = child.data();
    for (std::size_t i = 1; i < v.size(); ++i) {
      if ((v[i] == ';' || v[i] == '#') && (v[i - 1] == ' ' || v[i - 1] == '\t')) {
        v.erase(i);
        break;
      }
    }
    while (!v.empty() && (v.back() == ' ' || v.back() == '\t')) v.pop_back();
    child.data() = v;
  }
}

}  // namespace

std::vector<std::string> split_members(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

const LemmaGroup* ProjectConfig::group(const std::string& name) const {
  for (const auto& g : groups)
    if (g.name == name) return &g;
  return nullptr;
}

std::string ProjectConfig::canonical() const {
  std::string out;
  out += fmt::format("era={}..{}\n", era_min, era_max);
  std::set<std::string> skip(skip_extra.begin(), skip_extra.end());
  out += "skip=";
  for (const auto& s : skip) out += s + ",";
  out += "\n";
  for (const auto& g : groups) {
    out += "group." + g.name + "=";
    for (const auto& m : g.members) out += m + ",";
    out += "\n";
  }
  out += fmt::format("bins.target_mass={}\nbins.policy={}\nbins.max_span={}\n", slice.target_mass,
                     to_string(slice.dating.policy), slice.dating.max_span);
  out += fmt::format("analysis.window={}\nanalysis.scope={}\n", window, scope == Scope::all ? "all" : "dated");
  out += fmt::format("dsm.window={}\ndsm.min_freq={}\ndsm.weighting={}\ndsm.k={}\ndsm.edge_threshold={:.17g}\n", dsm.window,
                     dsm.min_freq, to_string(dsm.weighting), dsm.k, dsm.edge_threshold);
  return out;
}

void ProjectConfig::validate() const {
  if (era_min > era_max) throw ConfigError("era_min exceeds era_max");
  if (slice.target_mass == 0) throw ConfigError("bins.target_mass must be positive");
  if (slice.dating.max_span < 0) throw ConfigError("bins.max_span must be non-negative");
  if (window < 1) throw ConfigError("analysis.window must be at least 1");
  try {
    dsm.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  validate_groups(groups);
  std::set<std::string> names;
  for (const auto& g : groups)
    if (!names.insert(g.name).second) throw GroupError(fmt::format("lemma group \"{}\" defined twice", g.name));
}

ProjectConfig parse_config(std::istream& in, const std::string& base_dir) {
  // Duplicate group names are reported as group errors, so detect them before
  // the INI reader rejects them.
  std::stringstream buffer;
  buffer << in.rdbuf();
  {
    std::string section;
    std::set<std::string> seen;
    std::istringstream lines(buffer.str());
    for (std::string line; std::getline(lines, line);) {
      auto b = line.find_first_not_of(" \t\r");
      if (b == std::string::npos || line[b] == ';' || line[b] == '#') continue;
      if (line[b] == '[') {
        section = line.substr(b + 1, line.find(']', b) - b - 1);
        continue;
      }
      if (section != "groups") continue;
      auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string name = line.substr(b, eq - b);
      while (!name.empty() && (name.back() == ' ' || name.back() == '\t')) name.pop_back();
      if (!seen.insert(name).second) throw GroupError(fmt::format("lemma group \"{}\" defined twice", name));
    }
  }

  pt::ptree tree;
  try {
    pt::read_ini(buffer, tree);
    strip_inline_comments(tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(fmt::format("config line {}: {}", e.line(), e.message()));
  }

  ProjectConfig cfg;
  for (const auto& [section, body] : tree) {
    if (!kSections.count(section)) throw ConfigError(fmt::format("unknown config section [{}]", section));
    if (body.empty() && !body.data().empty()) throw ConfigError(fmt::format("key \"{}\" outside any section", section));
    if (section == "groups") {
      for (const auto& [name, node] : body) {
        std::set<std::string> members;
        for (auto& m : split_members(node.data())) members.insert(std::move(m));
        cfg.groups.emplace_back(name, std::move(members));
      }
      continue;
    }
    const auto& keys = known_keys(section);
    for (const auto& [key, node] : body) {
      const std::string where = section + "." + key;
      if (!keys.count(key)) throw ConfigError(fmt::format("unknown config key {}", where));
      if (section == "corpus") {
        if (key == "paths" || key == "path") {
          for (const auto& p : split_members(node.data())) {
            std::filesystem::path path(p);
            if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
            cfg.corpus_paths.push_back(path.lexically_normal().string());
          }
        } else if (key == "strict") {
          cfg.strict = bool_of(node, where);
        } else if (key == "era_min") {
          cfg.era_min = value_of<int>(node, where);
        } else if (key == "era_max") {
          cfg.era_max = value_of<int>(node, where);
        } else if (key == "skip") {
          for (auto& s : split_members(node.data())) cfg.skip_extra.push_back(fold_case(s));
        }
      } else if (section == "bins") {
        if (key == "target_mass") cfg.slice.target_mass = value_of<std::uint64_t>(node, where);
        else if (key == "max_span") cfg.slice.dating.max_span = value_of<int>(node, where);
        else {
          try {
            cfg.slice.dating.policy = parse_year_policy(node.data());
          } catch (const std::invalid_argument&) {
            throw ConfigError(fmt::format("bad value \"{}\" for {}", node.data(), where));
          }
        }
      } else if (section == "analysis") {
        if (key == "window") cfg.window = value_of<int>(node, where);
        else {
          try {
            cfg.scope = parse_scope(node.data());
          } catch (const std::invalid_argument&) {
            throw ConfigError(fmt::format("bad value \"{}\" for {}", node.data(), where));
          }
        }
      } else if (section == "dsm") {
        if (key == "window") cfg.dsm.window = value_of<int>(node, where);
        else if (key == "min_freq") cfg.dsm.min_freq = value_of<std::uint64_t>(node, where);
        else if (key == "k") cfg.dsm.k = value_of<std::size_t>(node, where);
        else if (key == "edge_threshold") cfg.dsm.edge_threshold = value_of<double>(node, where);
        else {
          try {
            cfg.dsm.weighting = parse_weighting(node.data());
          } catch (const std::invalid_argument&) {
            throw ConfigError(fmt::format("bad value \"{}\" for {}", node.data(), where));
          }
        }
      } else if (section == "output") {
        cfg.output_dir = node.data();
      }
    }
  }
  cfg.validate();
  return cfg;
}

ProjectConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config file {}", path));
  auto base = std::filesystem::path(path).parent_path();
  return parse_config(in, base.empty() ? "." : base.string());
}

}  // namespace diachron
