#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "muse/catalog.hpp"
#include "muse/lexicon.hpp"
#include "muse/parser.hpp"
#include "muse/types.hpp"

namespace muse {

struct RecipeLoad {
  std::vector<Recipe> recipes;
  std::vector<LineDiagnostic> skipped;  // one per line that produced no recipe
  ParseDiagnostics parse;               // partial parses inside accepted recipes
};

/// JSON-lines corpus. Each object: {id?, title, dish_type, cuisine, servings?,
/// ingredients:[{ingredient_id | raw_text, qty?, unit?, state?}], steps:[string]}.
/// Raw ingredient text and step sentences go through the recipe parser.
/// Lines with zero ingredients (or malformed JSON) are skipped with a diagnostic.
RecipeLoad load_recipes(const std::filesystem::path& path, const Lexicons& lex,
                        const CompoundCatalog* catalog = nullptr);

Recipe recipe_from_json(const nlohmann::json& j, const Lexicons& lex, const CompoundCatalog* catalog,
                        ParseDiagnostics* diagnostics = nullptr);
nlohmann::json to_json(const Recipe& recipe);

/// Per-recipe presence counts.
struct FrequencyTable {
  std::map<std::string, std::size_t> unigram;
  std::map<std::pair<std::string, std::string>, std::size_t> pair;  // key ordered first < second
  std::size_t total_recipes = 0;

  std::size_t count(const std::string& id) const;
  std::size_t pair_count(const std::string& a, const std::string& b) const;
  /// Sum of unigram counts.
  std::size_t total_mentions() const;
};

/// Throws InvalidArgument on an empty recipe list.
FrequencyTable build_frequency_table(const std::vector<Recipe>& recipes);

nlohmann::json to_json(const FrequencyTable& table);

}  // namespace muse
