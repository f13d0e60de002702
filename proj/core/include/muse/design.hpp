#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json.hpp>

#include "muse/catalog.hpp"
#include "muse/corpus.hpp"
#include "muse/error.hpp"

namespace muse {

struct DesignProblem {
  std::string key_ingredient;
  std::set<std::string> cuisines;
  std::string dish_type;
  std::size_t min_ingredients = 3;
  std::size_t max_ingredients = 10;

  bool operator==(const DesignProblem&) const = default;
};

/// Optional fitness used for parent selection (binary tournament). Off when empty.
using FitnessBias = std::function<double(const std::vector<std::string>&)>;

struct GenerationConfig {
  std::size_t population_size = 200;
  std::size_t generations = 50;
  double mutation_rate = 0.2;
  double crossover_rate = 0.7;
  std::uint64_t seed = 0;
  std::size_t output_cap = 10000;
  FitnessBias fitness_bias;
};

struct Mutation {
  std::string from;
  std::string to;
  bool operator==(const Mutation&) const = default;
};

struct Candidate {
  std::string id;
  std::vector<std::string> ingredients;  // sorted, distinct
  std::size_t generation = 0;
  std::set<std::string> parents;         // corpus recipe ids the candidate descends from
  std::vector<Mutation> mutations;

  bool operator==(const Candidate&) const = default;
};

struct GenerationStats {
  std::size_t populations_evaluated = 0;
  std::size_t individuals_evaluated = 0;
  std::size_t duplicates_removed = 0;
  std::size_t corpus_matches_removed = 0;
  std::size_t capped = 0;
};

struct CandidateSet {
  DesignProblem problem;
  std::vector<Candidate> candidates;
  GenerationStats stats;
};

/// Evolutionary generation seeded from corpus recipes of the problem's dish type.
/// Crossover exchanges random ingredient subsets between two parents; mutation
/// swaps a non-key ingredient for a same-category one, weighted by typicality in
/// the problem cuisines. Every individual is repaired (key reinserted, size
/// clamped) and collected; duplicates and sets identical to a corpus recipe are
/// dropped. Deterministic for a given seed.
CandidateSet generate(const DesignProblem& problem, const std::vector<Recipe>& corpus, const CompoundCatalog& catalog,
                      const CuisineTable& cuisines, const GenerationConfig& config, Warnings* warnings = nullptr);

/// Sum over n in [min,max] of C(E-1, n-1), times |cuisines| * dish_type_options,
/// with E the number of catalog ingredients.
boost::multiprecision::cpp_int estimate_design_space(const CompoundCatalog& catalog, const DesignProblem& problem,
                                                     std::size_t dish_type_options = 1);

/// Drops candidates whose every ingredient pair co-occurs at least `threshold`
/// times in the corpus. Single-ingredient candidates are judged by their unigram count.
CandidateSet novelty_prefilter(const CandidateSet& candidates, const FrequencyTable& freq, std::size_t threshold);

void validate(const DesignProblem& problem, const CompoundCatalog& catalog);

nlohmann::json to_json(const DesignProblem& problem);
DesignProblem design_problem_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Candidate& candidate);
Candidate candidate_from_json(const nlohmann::json& j);

}  // namespace muse
