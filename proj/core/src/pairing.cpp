#include "muse/pairing.hpp"

namespace muse {

std::size_t shared_compounds(const Ingredient& a, const Ingredient& b) {
  std::size_t shared = 0;
  auto ia = a.compound_profile.begin();
  auto ib = b.compound_profile.begin();
  while (ia != a.compound_profile.end() && ib != b.compound_profile.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      if (ia->second > 0.0 && ib->second > 0.0) ++shared;
      ++ia;
      ++ib;
    }
  }
  return shared;
}

double pairing_score(const Recipe& recipe, const CompoundCatalog& catalog) {
  const auto n = recipe.ingredients.size();
  if (n < 2) return 0.0;
  static const Ingredient kEmpty{};
  std::vector<const Ingredient*> ings;
  ings.reserve(n);
  for (const auto& ri : recipe.ingredients) {
    const auto* ing = catalog.find_ingredient(ri.id);
    ings.push_back(ing ? ing : &kEmpty);
  }
  std::size_t total = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) total += shared_compounds(*ings[i], *ings[j]);
  return static_cast<double>(total) / static_cast<double>(n * (n - 1) / 2);
}

}  // namespace muse
