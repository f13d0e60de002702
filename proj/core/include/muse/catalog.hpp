#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "muse/error.hpp"
#include "muse/text.hpp"
#include "muse/types.hpp"

namespace muse {

/// Ingredients, their flavor-compound profiles, and compound descriptors.
/// Immutable after loading.
struct CompoundCatalog {
  std::vector<std::string> descriptors;  // feature names, shared by all compounds
  std::map<std::string, Compound> compounds;
  std::map<std::string, Ingredient> ingredients;

  const Ingredient* find_ingredient(const std::string& id) const;
  const Ingredient* find_by_name(const std::string& name) const;
  const Compound* find_compound(const std::string& id) const;
  std::vector<const Compound*> labeled_compounds() const;
  std::size_t descriptor_index(const std::string& name) const;  // throws NotFound

  bool operator==(const CompoundCatalog&) const = default;
};

/// Reads compounds.csv and ingredient_compounds.csv.
///
/// compounds.csv: `compound_id,name,feature:<name>...,pleasantness`
/// ingredient_compounds.csv: `ingredient_id,compound_id,ppm`
///
/// Blank ppm takes the median of that compound's known concentrations. Rows
/// naming an unknown compound are skipped with a warning. Pleasantness labels
/// outside [0,1] are min-max rescaled over the labeled set.
CompoundCatalog load_compound_catalog(const std::filesystem::path& compound_features_path,
                                      const std::filesystem::path& ingredient_compound_path,
                                      Warnings* warnings = nullptr);

/// Writes both files in the same formats, with full double precision.
void save_compound_catalog(const CompoundCatalog& catalog, const std::filesystem::path& compound_features_path,
                           const std::filesystem::path& ingredient_compound_path);

/// Merges ingredients.csv (`ingredient_id,name,category,cuisines,seasons`, sets
/// pipe-separated) into the catalog. Ingredients without compound rows are added
/// with an empty profile. Names are canonicalized and must be unique.
void load_ingredients(const std::filesystem::path& path, CompoundCatalog& catalog,
                      const text::Singularizer& singular, Warnings* warnings = nullptr);

struct Cuisine {
  std::string id;
  std::string name;
  std::map<std::string, double> typicality;  // ingredient id -> [0,1]

  bool operator==(const Cuisine&) const = default;
};

class CuisineTable {
 public:
  /// `cuisine_id,name,ingredient_id,typicality` rows; ids must resolve in `catalog`.
  static CuisineTable load(const std::filesystem::path& path, const CompoundCatalog& catalog);

  void add(Cuisine cuisine) { cuisines_[cuisine.id] = std::move(cuisine); }
  bool contains(const std::string& cuisine_id) const { return cuisines_.count(cuisine_id) != 0; }
  const std::map<std::string, Cuisine>& all() const { return cuisines_; }
  /// 0 for unknown cuisine or ingredient.
  double typicality(const std::string& cuisine_id, const std::string& ingredient_id) const;

 private:
  std::map<std::string, Cuisine> cuisines_;
};

namespace csv {
/// Splits one CSV record; supports double-quoted fields with "" escapes.
std::vector<std::string> parse_line(const std::string& line);
}  // namespace csv

}  // namespace muse
