#include "muse/pleasantness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include <Eigen/Dense>

#include "muse/random.hpp"

namespace muse {

namespace {

constexpr int kModelVersion = 1;

Eigen::MatrixXd design(const TrainingSet& data, const std::vector<std::size_t>& columns,
                       const std::vector<std::size_t>& rows) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(columns.size() + 1));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    x(static_cast<Eigen::Index>(r), 0) = 1.0;
    for (std::size_t c = 0; c < columns.size(); ++c)
      x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c + 1)) = data.rows[rows[r]][columns[c]];
  }
  return x;
}

Eigen::VectorXd labels(const TrainingSet& data, const std::vector<std::size_t>& rows) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) y(static_cast<Eigen::Index>(r)) = data.labels[rows[r]];
  return y;
}

Eigen::VectorXd ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  return x.colPivHouseholderQr().solve(y);
}

bool full_rank(const TrainingSet& data, const std::vector<std::size_t>& columns) {
  std::vector<std::size_t> all(data.rows.size());
  std::iota(all.begin(), all.end(), 0);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design(data, columns, all));
  qr.setThreshold(1e-10);
  return qr.rank() == static_cast<Eigen::Index>(columns.size() + 1);
}

std::vector<std::size_t> fold_of(std::size_t n, CvMode mode, std::uint64_t seed) {
  std::vector<std::size_t> fold(n);
  if (mode == CvMode::leave_one_out) {
    std::iota(fold.begin(), fold.end(), 0);
    return fold;
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);
  for (std::size_t i = 0; i < n; ++i) fold[order[i]] = i % 10;
  return fold;
}

double variance(const std::vector<double>& y) {
  if (y.empty()) return 0.0;
  double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
  double ss = 0.0;
  for (double v : y) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(y.size());
}

}  // namespace

std::string_view to_string(CvMode mode) { return mode == CvMode::ten_fold ? "ten-fold" : "leave-one-out"; }

CvMode parse_cv_mode(std::string_view name) {
  if (name == "ten-fold" || name == "10-fold" || name == "tenfold") return CvMode::ten_fold;
  if (name == "leave-one-out" || name == "loo") return CvMode::leave_one_out;
  throw InvalidArgument("unknown cv mode '" + std::string(name) + "'");
}

TrainingSet TrainingSet::from_catalog(const CompoundCatalog& catalog) {
  TrainingSet t;
  t.feature_names = catalog.descriptors;
  for (const auto* c : catalog.labeled_compounds()) {
    t.rows.push_back(c->features);
    t.labels.push_back(*c->rated_pleasantness);
  }
  return t;
}

double cross_validated_mse(const TrainingSet& data, const std::vector<std::size_t>& columns, CvMode cv_mode,
                           std::uint64_t seed) {
  const std::size_t n = data.rows.size();
  auto fold = fold_of(n, cv_mode, seed);
  const std::size_t folds = cv_mode == CvMode::leave_one_out ? n : 10;
  double sse = 0.0;
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    for (std::size_t i = 0; i < n; ++i) (fold[i] == f ? test : train).push_back(i);
    if (test.empty()) continue;
    Eigen::VectorXd beta = ols(design(data, columns, train), labels(data, train));
    Eigen::VectorXd resid = design(data, columns, test) * beta - labels(data, test);
    sse += resid.squaredNorm();
  }
  return sse / static_cast<double>(n);
}

PleasantnessModel fit_pleasantness(const TrainingSet& data, CvMode cv_mode, Warnings* warnings, std::uint64_t seed) {
  const std::size_t n = data.rows.size();
  const std::size_t p = data.feature_names.size();
  if (n < 10) throw InvalidArgument("fit_pleasantness needs at least 10 labeled observations");
  if (p < 2) throw InvalidArgument("fit_pleasantness needs at least 2 candidate features");
  if (data.labels.size() != n) throw InvalidArgument("fit_pleasantness: label count mismatch");
  for (const auto& row : data.rows)
    if (row.size() != p) throw InvalidArgument("fit_pleasantness: ragged design");

  const double tol = 1e-12 * variance(data.labels) + 1e-24;
  std::vector<std::size_t> selected;
  std::set<std::size_t> rejected;
  double best = std::numeric_limits<double>::infinity();
  for (;;) {
    std::optional<std::size_t> pick;
    double pick_err = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < p; ++c) {
      if (rejected.count(c) || std::find(selected.begin(), selected.end(), c) != selected.end()) continue;
      auto trial = selected;
      trial.push_back(c);
      if (trial.size() + 1 > n || !full_rank(data, trial)) {
        warn(warnings, "feature '" + data.feature_names[c] + "' makes the design rank-deficient; dropped");
        rejected.insert(c);
        continue;
      }
      double err = cross_validated_mse(data, trial, cv_mode, seed);
      if (err < pick_err) {
        pick_err = err;
        pick = c;
      }
    }
    if (!pick) break;
    if (!selected.empty() && !(best - pick_err > tol)) break;
    selected.push_back(*pick);
    best = pick_err;
  }
  if (selected.empty()) throw DataError("fit_pleasantness: every feature is rank-deficient");

  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  Eigen::VectorXd beta = ols(design(data, selected, all), labels(data, all));

  PleasantnessModel m;
  m.cv_mode = cv_mode;
  m.cv_error = best;
  m.intercept = beta(0);
  for (std::size_t i = 0; i < selected.size(); ++i) {
    m.selected_features.push_back(data.feature_names[selected[i]]);
    m.coefficients.push_back(beta(static_cast<Eigen::Index>(i + 1)));
  }
  return m;
}

double predict_raw(const PleasantnessModel& model, const std::vector<double>& features,
                   const std::vector<std::string>& descriptors) {
  double y = model.intercept;
  for (std::size_t i = 0; i < model.selected_features.size(); ++i) {
    auto it = std::find(descriptors.begin(), descriptors.end(), model.selected_features[i]);
    if (it == descriptors.end()) throw NotFound("missing feature '" + model.selected_features[i] + "'");
    auto idx = static_cast<std::size_t>(it - descriptors.begin());
    if (idx >= features.size()) throw NotFound("missing feature '" + model.selected_features[i] + "'");
    y += model.coefficients[i] * features[idx];
  }
  return y;
}

double compound_pleasantness(const PleasantnessModel& model, const Compound& compound,
                             const std::vector<std::string>& descriptors) {
  return std::clamp(predict_raw(model, compound.features, descriptors), 0.0, 1.0);
}

double ingredient_pleasantness(const Ingredient& ingredient, const CompoundCatalog& catalog,
                               const PleasantnessModel& model) {
  double weighted = 0.0;
  double total_ppm = 0.0;
  double plain = 0.0;
  std::size_t count = 0;
  for (const auto& [cid, ppm] : ingredient.compound_profile) {
    const auto* c = catalog.find_compound(cid);
    if (c == nullptr) continue;
    double v = compound_pleasantness(model, *c, catalog.descriptors);
    weighted += ppm * v;
    total_ppm += ppm;
    plain += v;
    ++count;
  }
  if (count == 0) throw DataError("ingredient '" + ingredient.id + "' has an empty compound profile");
  return total_ppm > 0.0 ? weighted / total_ppm : plain / static_cast<double>(count);
}

double recipe_pleasantness(const Recipe& recipe, const CompoundCatalog& catalog, const PleasantnessModel& model,
                           Warnings* warnings) {
  std::vector<std::pair<double, std::optional<double>>> values;  // value, quantity
  for (const auto& ri : recipe.ingredients) {
    const auto* ing = catalog.find_ingredient(ri.id);
    if (ing == nullptr || ing->compound_profile.empty()) {
      warn(warnings, "ingredient '" + ri.id + "' has no compound profile; excluded from pleasantness");
      continue;
    }
    values.emplace_back(ingredient_pleasantness(*ing, catalog, model), ri.quantity);
  }
  if (values.empty()) throw DataError("recipe '" + recipe.id + "': no ingredient has a compound profile");
  const bool use_qty = std::all_of(values.begin(), values.end(), [](const auto& v) { return v.second.has_value(); });
  double num = 0.0;
  double den = 0.0;
  for (const auto& [v, q] : values) {
    double w = use_qty ? *q : 1.0;
    num += w * v;
    den += w;
  }
  return num / den;
}

nlohmann::json to_json(const PleasantnessModel& m) {
  return {{"version", kModelVersion},         {"features", m.selected_features}, {"coefficients", m.coefficients},
          {"intercept", m.intercept},          {"cv_mode", std::string(to_string(m.cv_mode))},
          {"cv_error", m.cv_error}};
}

PleasantnessModel pleasantness_model_from_json(const nlohmann::json& j) {
  try {
    if (j.value("version", 0) != kModelVersion) throw DataError("unsupported pleasantness model version");
    PleasantnessModel m;
    m.selected_features = j.at("features").get<std::vector<std::string>>();
    m.coefficients = j.at("coefficients").get<std::vector<double>>();
    m.intercept = j.at("intercept").get<double>();
    m.cv_mode = parse_cv_mode(j.at("cv_mode").get<std::string>());
    m.cv_error = j.at("cv_error").get<double>();
    if (m.selected_features.size() != m.coefficients.size() || m.selected_features.empty())
      throw DataError("pleasantness model: features and coefficients disagree");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed pleasantness model: ") + e.what());
  }
}

}  // namespace muse
