#pragma once

#include "muse/catalog.hpp"
#include "muse/types.hpp"

namespace muse {

/// Number of compounds present (ppm > 0) in both ingredients.
std::size_t shared_compounds(const Ingredient& a, const Ingredient& b);

/// Mean shared-compound count over all unordered ingredient pairs. Ingredients
/// missing from the catalog count as having an empty profile. Fewer than two
/// ingredients scores 0.
double pairing_score(const Recipe& recipe, const CompoundCatalog& catalog);

}  // namespace muse
