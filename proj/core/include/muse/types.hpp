#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace muse {

enum class Category { protein, vegetable, fruit, dairy, grain, spice, herb, fat, liquid, sweetener, other };

std::string_view to_string(Category c);
/// Throws DataError on an unknown category name.
Category parse_category(std::string_view name);

struct Ingredient {
  std::string id;
  std::string name;
  Category category = Category::other;
  std::set<std::string> cuisines;
  std::set<std::string> seasons;
  /// compound id -> concentration in ppm
  std::map<std::string, double> compound_profile;

  bool operator==(const Ingredient&) const = default;
};

struct Compound {
  std::string id;
  std::string name;
  std::vector<double> features;
  std::optional<double> rated_pleasantness;

  bool operator==(const Compound&) const = default;
};

struct Step {
  std::string action;
  std::string tool;                 // empty when no tool
  std::vector<std::string> inputs;  // ingredient ids or intermediate ids
  std::string output;
  std::optional<double> duration;   // minutes

  bool operator==(const Step&) const = default;
};

struct RecipeIngredient {
  std::string id;
  std::optional<double> quantity;
  std::string unit;
  std::string state;

  bool operator==(const RecipeIngredient&) const = default;
};

enum class Provenance { corpus, generated };

struct Recipe {
  std::string id;
  std::string title;
  std::string dish_type;
  std::string cuisine;  // empty when none
  double servings = 4.0;
  std::vector<RecipeIngredient> ingredients;
  std::vector<Step> steps;
  Provenance provenance = Provenance::corpus;

  std::vector<std::string> ingredient_ids() const;
  bool contains(std::string_view ingredient_id) const;
  bool operator==(const Recipe&) const = default;
};

/// Recipe built from a bare ingredient set (no quantities, no steps).
Recipe recipe_from_set(std::string id, const std::vector<std::string>& ingredient_ids,
                       std::string dish_type = {}, std::string cuisine = {});

}  // namespace muse
