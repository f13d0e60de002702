#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "muse/corpus.hpp"

namespace muse {

/// Dirichlet prior over ingredient occurrence frequencies. Ingredients outside
/// `alpha` share a single reserved component whose pseudo-count is `unseen_mass`.
struct SurpriseModel {
  std::map<std::string, double> alpha;
  double alpha0 = 0.0;
  double unseen_mass = 0.0;

  double pseudo_count(const std::string& ingredient_id) const;
  /// Prior predictive probability of drawing this ingredient.
  double predictive(const std::string& ingredient_id) const;

  bool operator==(const SurpriseModel&) const = default;
};

/// alpha(i) = unigram(i) + smoothing for every id in `vocabulary` and every id
/// counted in `freq`; unseen_mass = smoothing.
SurpriseModel fit_surprise_prior(const FrequencyTable& freq, const std::vector<std::string>& vocabulary,
                                 double smoothing);

/// KL(Dir(posterior) || Dir(prior)) in nats, where the posterior adds one count
/// per recipe ingredient. Only updated components contribute to the sums.
double bayesian_surprise(const SurpriseModel& model, const std::vector<std::string>& ingredient_ids);
double bayesian_surprise(const SurpriseModel& model, const Recipe& recipe);

/// Closed-form KL(Dir(posterior) || Dir(prior)) over explicit parameter vectors.
double dirichlet_kl(const std::vector<double>& posterior, const std::vector<double>& prior);

nlohmann::json to_json(const SurpriseModel& model);
SurpriseModel surprise_model_from_json(const nlohmann::json& j);

}  // namespace muse
