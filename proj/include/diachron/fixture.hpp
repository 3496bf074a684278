#pragma once

// Synthetic corpus generator with planted ground truth.
//
// A plan describes eras of dated documents, undated documents, and lemmas to
// plant: isolated occurrences, adjacent pairs at a fixed word gap, and
// clusters of lemmas sharing a context vocabulary. Planted units are separated
// by at least `isolation` filler words, so for any window smaller than the
// isolation every association in the corpus is a planted one. The manifest
// records every planted count per document.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace diachron {

struct EraPlan {
  std::pair<int, int> years;
  std::size_t documents = 0;
  std::pair<std::size_t, std::size_t> tokens{100, 200};  // filler words per document
  double interval_fraction = 0.0;
  std::pair<int, int> interval_width{10, 60};
  // Share of interval-dated documents given a span wider than 100 years.
  double wide_fraction = 0.0;
};

struct PlantPlan {
  std::string lemma;
  std::size_t count = 0;
  std::optional<std::pair<int, int>> years;  // on midpoint-assigned years
};

struct PairPlan {
  std::string a;
  std::string b;
  std::size_t count = 0;
  int gap = 1;  // word distance between a and b
  std::optional<std::pair<int, int>> years;
};

struct ClusterPlan {
  std::string name;
  std::vector<std::string> members;
  std::vector<std::string> context;
  std::size_t occurrences = 0;  // per member
  int radius = 2;               // context words on each side
  std::optional<std::pair<int, int>> years;
};

struct FixturePlan {
  std::vector<EraPlan> eras;
  std::size_t undated_documents = 0;
  std::pair<std::size_t, std::size_t> undated_tokens{100, 200};
  std::size_t filler_vocabulary = 300;
  double punctuation_rate = 0.05;
  double case_variation = 0.0;
  int isolation = 11;
  std::vector<std::string> collections{"fixture"};
  std::vector<PlantPlan> plants;
  std::vector<PairPlan> pairs;
  std::vector<ClusterPlan> clusters;
};

class PlanError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Throws PlanError on a malformed or contradictory plan.
FixturePlan parse_plan(const nlohmann::json& json);
FixturePlan load_plan(const std::string& path);
void validate_plan(const FixturePlan& plan);

struct Fixture {
  std::string corpus;  // vertical format
  nlohmann::ordered_json manifest;
};

// Deterministic for a given (plan, seed).
Fixture generate_fixture(const FixturePlan& plan, std::uint64_t seed);

}  // namespace diachron
