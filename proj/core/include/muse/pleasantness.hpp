#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "muse/catalog.hpp"
#include "muse/error.hpp"

namespace muse {

enum class CvMode { ten_fold, leave_one_out };
std::string_view to_string(CvMode mode);
CvMode parse_cv_mode(std::string_view name);

/// Row-major design: rows[i][j] is feature j of observation i.
struct TrainingSet {
  std::vector<std::string> feature_names;
  std::vector<std::vector<double>> rows;
  std::vector<double> labels;

  /// Labeled compounds of a catalog, all descriptors as candidate features.
  static TrainingSet from_catalog(const CompoundCatalog& catalog);
};

struct PleasantnessModel {
  std::vector<std::string> selected_features;
  std::vector<double> coefficients;
  double intercept = 0.0;
  CvMode cv_mode = CvMode::ten_fold;
  double cv_error = 0.0;

  bool operator==(const PleasantnessModel&) const = default;
};

/// Greedy forward selection of features by cross-validated mean squared
/// prediction error, then OLS on the full set. The first feature is always
/// admitted; later ones only while CV error strictly improves. Candidates that
/// make the design rank-deficient are skipped with a warning. Requires at
/// least ten observations, so ten folds are always populated.
/// `seed` drives the fold assignment in ten-fold mode.
PleasantnessModel fit_pleasantness(const TrainingSet& data, CvMode cv_mode, Warnings* warnings = nullptr,
                                   std::uint64_t seed = 0);

/// CV mean squared error of OLS on the given feature columns (empty = intercept only).
double cross_validated_mse(const TrainingSet& data, const std::vector<std::size_t>& columns, CvMode cv_mode,
                           std::uint64_t seed = 0);

/// Unclamped linear prediction. `descriptors` names the entries of `features`.
double predict_raw(const PleasantnessModel& model, const std::vector<double>& features,
                   const std::vector<std::string>& descriptors);

/// Prediction clamped to [0,1]. Throws NotFound when a selected feature is not a descriptor.
double compound_pleasantness(const PleasantnessModel& model, const Compound& compound,
                             const std::vector<std::string>& descriptors);

/// Concentration-weighted mean over each ingredient's compounds, then a
/// quantity-weighted mean over ingredients (equal weights when any quantity is
/// absent). Ingredients with empty profiles are skipped with a warning;
/// DataError when nothing remains.
double recipe_pleasantness(const Recipe& recipe, const CompoundCatalog& catalog, const PleasantnessModel& model,
                           Warnings* warnings = nullptr);

double ingredient_pleasantness(const Ingredient& ingredient, const CompoundCatalog& catalog,
                               const PleasantnessModel& model);

nlohmann::json to_json(const PleasantnessModel& model);
PleasantnessModel pleasantness_model_from_json(const nlohmann::json& j);

}  // namespace muse
