#include "muse/surprise.hpp"

#include <cmath>

#include <boost/math/special_functions/digamma.hpp>

#include "muse/error.hpp"

namespace muse {

namespace {

constexpr int kModelVersion = 1;
const std::string kUnseenKey = "\x01unseen";

double digamma(double x) { return boost::math::digamma(x); }

}  // namespace

double SurpriseModel::pseudo_count(const std::string& ingredient_id) const {
  auto it = alpha.find(ingredient_id);
  return it == alpha.end() ? unseen_mass : it->second;
}

double SurpriseModel::predictive(const std::string& ingredient_id) const {
  return pseudo_count(ingredient_id) / alpha0;
}

SurpriseModel fit_surprise_prior(const FrequencyTable& freq, const std::vector<std::string>& vocabulary,
                                 double smoothing) {
  if (!(smoothing > 0.0) || !std::isfinite(smoothing)) throw InvalidArgument("smoothing must be positive");
  if (freq.total_recipes == 0) throw InvalidArgument("frequency table is empty");
  SurpriseModel m;
  m.unseen_mass = smoothing;
  for (const auto& id : vocabulary) m.alpha[id] = smoothing;
  for (const auto& [id, n] : freq.unigram) m.alpha[id] = smoothing + static_cast<double>(n);
  double sum = 0.0;
  for (const auto& [id, a] : m.alpha) sum += a;
  m.alpha0 = sum + m.unseen_mass;
  return m;
}

double dirichlet_kl(const std::vector<double>& posterior, const std::vector<double>& prior) {
  if (posterior.size() != prior.size() || prior.empty()) throw InvalidArgument("dirichlet_kl: size mismatch");
  double a0 = 0.0;
  double b0 = 0.0;
  for (std::size_t i = 0; i < prior.size(); ++i) {
    if (!(prior[i] > 0.0) || !(posterior[i] > 0.0)) throw InvalidArgument("dirichlet_kl: parameters must be positive");
    a0 += posterior[i];
    b0 += prior[i];
  }
  double kl = std::lgamma(a0) - std::lgamma(b0);
  const double psi0 = digamma(a0);
  for (std::size_t i = 0; i < prior.size(); ++i) {
    if (posterior[i] == prior[i]) continue;
    kl -= std::lgamma(posterior[i]) - std::lgamma(prior[i]);
    kl += (posterior[i] - prior[i]) * (digamma(posterior[i]) - psi0);
  }
  if (!std::isfinite(kl)) throw DataError("dirichlet_kl: non-finite result");
  return std::max(0.0, kl);
}

double bayesian_surprise(const SurpriseModel& model, const std::vector<std::string>& ingredient_ids) {
  if (ingredient_ids.empty()) return 0.0;
  if (!(model.alpha0 > 0.0) || !(model.unseen_mass > 0.0)) throw DataError("surprise model is not fitted");

  std::map<std::string, double> updates;  // component -> added count
  for (const auto& id : ingredient_ids) {
    const auto& key = model.alpha.count(id) ? id : kUnseenKey;
    updates[key] += 1.0;
  }
  const double prior0 = model.alpha0;
  double added = 0.0;
  for (const auto& [key, n] : updates) added += n;
  const double post0 = prior0 + added;

  double kl = std::lgamma(post0) - std::lgamma(prior0);
  const double psi0 = digamma(post0);
  for (const auto& [key, n] : updates) {
    const double a = key == kUnseenKey ? model.unseen_mass : model.alpha.at(key);
    const double a_post = a + n;
    kl -= std::lgamma(a_post) - std::lgamma(a);
    kl += n * (digamma(a_post) - psi0);
  }
  if (!std::isfinite(kl)) throw DataError("bayesian_surprise: non-finite result (corrupted model?)");
  // the closed form is nonnegative; clamp rounding noise of order 1e-16
  return std::max(0.0, kl);
}

double bayesian_surprise(const SurpriseModel& model, const Recipe& recipe) {
  if (recipe.ingredients.empty()) throw InvalidArgument("bayesian_surprise: empty recipe");
  return bayesian_surprise(model, recipe.ingredient_ids());
}

nlohmann::json to_json(const SurpriseModel& model) {
  return {{"version", kModelVersion}, {"alpha", model.alpha}, {"unseen_mass", model.unseen_mass}};
}

SurpriseModel surprise_model_from_json(const nlohmann::json& j) {
  try {
    if (j.value("version", 0) != kModelVersion) throw DataError("unsupported surprise model version");
    SurpriseModel m;
    m.alpha = j.at("alpha").get<std::map<std::string, double>>();
    m.unseen_mass = j.at("unseen_mass").get<double>();
    if (!(m.unseen_mass > 0.0)) throw DataError("unseen_mass must be positive");
    double sum = 0.0;
    for (const auto& [id, a] : m.alpha) {
      if (!(a > 0.0)) throw DataError("alpha for '" + id + "' must be positive");
      sum += a;
    }
    m.alpha0 = sum + m.unseen_mass;
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed surprise model: ") + e.what());
  }
}

}  // namespace muse
