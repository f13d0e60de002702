#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "muse/design.hpp"
#include "muse/error.hpp"
#include "muse/types.hpp"

namespace muse {

struct TopicModel {
  std::size_t topics = 1;
  std::vector<std::string> vocab;
  std::vector<std::vector<double>> phi;  // topics x vocab, rows sum to 1
  std::vector<double> topic_marginal;
  double hyper_alpha = 2.0;
  double hyper_beta = 0.01;
  std::uint64_t seed = 0;
  std::size_t iterations = 0;

  std::optional<std::size_t> word_index(const std::string& ingredient) const;
  bool operator==(const TopicModel&) const = default;
};

struct LdaOptions {
  std::size_t topics = 25;
  std::optional<double> hyper_alpha;  // defaults to 50 / topics
  double hyper_beta = 0.01;
  std::size_t iterations = 1000;
  std::uint64_t seed = 0;
};

using Document = std::vector<std::string>;

/// Collapsed Gibbs sampling. phi and topic_marginal come from the final sample's
/// counts with hyperparameter smoothing. Vocabulary is sorted; identical inputs
/// and seed give an identical model.
TopicModel fit_lda(const std::vector<Document>& documents, const LdaOptions& options);

/// P(T | ingredient) by Bayes' rule over phi and the topic marginal. Unknown
/// ingredients get the uniform distribution and a warning.
std::vector<double> topic_posterior(const TopicModel& model, const std::string& ingredient,
                                    Warnings* warnings = nullptr);

/// s_l = 1 - prod_n (1 - P(T = l | I_n)).
std::vector<double> spanning_vector(const TopicModel& model, const std::vector<std::string>& ingredients,
                                    Warnings* warnings = nullptr);

enum class VarietyDistance { mean_pairwise, min_pairwise, max_pairwise };
std::string_view to_string(VarietyDistance d);
VarietyDistance parse_variety_distance(std::string_view name);

double euclidean(const std::vector<double>& a, const std::vector<double>& b);

/// Aggregate pairwise Euclidean distance between spanning vectors.
double menu_variety(const std::vector<std::vector<double>>& spanning_vectors,
                    VarietyDistance distance = VarietyDistance::mean_pairwise);

struct MenuSeed {
  DesignProblem problem;
  std::string exemplar_id;
  std::vector<double> spanning;
};

struct MenuSuggestion {
  std::vector<MenuSeed> seeds;
  double variety = 0.0;
};

/// Greedy farthest-point selection of K corpus exemplars (distinct dish types
/// while possible) maximizing menu_variety of their spanning vectors. Each seed's
/// key ingredient is the exemplar's most topic-specific ingredient.
MenuSuggestion suggest_menu_parameters(const TopicModel& model, const std::vector<Recipe>& corpus, std::size_t k,
                                       double variety_target = 0.0, std::uint64_t seed = 0,
                                       Warnings* warnings = nullptr);

nlohmann::json to_json(const TopicModel& model);
TopicModel topic_model_from_json(const nlohmann::json& j);

}  // namespace muse
