#include "muse/types.hpp"

#include <algorithm>
#include <array>

#include "muse/error.hpp"

namespace muse {

namespace {
constexpr std::array<std::string_view, 11> kCategoryNames = {
    "protein", "vegetable", "fruit", "dairy", "grain", "spice", "herb", "fat", "liquid", "sweetener", "other"};
}

std::string_view to_string(Category c) { return kCategoryNames.at(static_cast<std::size_t>(c)); }

Category parse_category(std::string_view name) {
  for (std::size_t i = 0; i < kCategoryNames.size(); ++i)
    if (kCategoryNames[i] == name) return static_cast<Category>(i);
  throw DataError("unknown ingredient category '" + std::string(name) + "'");
}

std::vector<std::string> Recipe::ingredient_ids() const {
  std::vector<std::string> ids;
  ids.reserve(ingredients.size());
  for (const auto& ing : ingredients) ids.push_back(ing.id);
  return ids;
}

bool Recipe::contains(std::string_view ingredient_id) const {
  return std::any_of(ingredients.begin(), ingredients.end(),
                     [&](const RecipeIngredient& r) { return r.id == ingredient_id; });
}

Recipe recipe_from_set(std::string id, const std::vector<std::string>& ingredient_ids, std::string dish_type,
                       std::string cuisine) {
  Recipe r;
  r.id = std::move(id);
  r.title = r.id;
  r.dish_type = std::move(dish_type);
  r.cuisine = std::move(cuisine);
  r.provenance = Provenance::generated;
  for (const auto& ing : ingredient_ids) r.ingredients.push_back({ing, std::nullopt, {}, {}});
  return r;
}

}  // namespace muse
