#pragma once

// Project configuration: an INI-style file of [section] headers and
// key = value lines.
//
//   [corpus]   paths = a.vert, b.vert   strict = true   era_min / era_max   skip = lemma ...
//   [groups]   name = lemma, lemma, ...
//   [bins]     target_mass, policy (midpoint|start|end), max_span
//   [analysis] window, scope (all|dated)
//   [dsm]      window, min_freq, weighting (raw|ppmi|logdice), k, edge_threshold
//   [output]   dir
//
// Relative corpus paths are resolved against the config file's directory.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "diachron/chrono.hpp"
#include "diachron/collocation.hpp"
#include "diachron/corpus.hpp"
#include "diachron/dsm.hpp"

namespace diachron {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ProjectConfig {
  std::vector<std::string> corpus_paths;
  std::optional<bool> strict;
  int era_min = kDefaultEraMin;
  int era_max = kDefaultEraMax;
  std::vector<std::string> skip_extra;
  std::vector<LemmaGroup> groups;  // file order
  SliceConfig slice;
  int window = kDefaultWindow;
  Scope scope = Scope::dated;
  DsmConfig dsm;
  std::optional<std::string> output_dir;

  const LemmaGroup* group(const std::string& name) const;

  // Every setting that can change an analysis result, in a fixed textual
  // form. Paths and the output directory are left out.
  std::string canonical() const;

  // Throws ConfigError or GroupError.
  void validate() const;
};

// Throws ConfigError on syntax errors or bad values, GroupError on bad groups.
ProjectConfig parse_config(std::istream& in, const std::string& base_dir = ".");
ProjectConfig load_config(const std::string& path);

// Splits a member list on commas and whitespace.
std::vector<std::string> split_members(const std::string& text);

}  // namespace diachron
