#include "muse/corpus.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>

namespace muse {

namespace {

std::string ingredient_display_name(const std::string& id, const CompoundCatalog* catalog) {
  if (catalog != nullptr)
    if (const auto* ing = catalog->find_ingredient(id)) return ing->name;
  std::string name = id;
  std::replace(name.begin(), name.end(), '_', ' ');
  return name;
}

std::string canonical_unit(const std::string& unit, const Lexicons& lex) {
  auto w = text::words(unit);
  if (w.empty()) return {};
  if (auto m = lex.units.match_at(w, 0, &lex.singular); m && m->length == w.size()) return m->canonical;
  return text::lower(text::trim(unit));
}

std::string str_or(const nlohmann::json& j, const char* key, std::string fallback = {}) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  if (!it->is_string()) throw DataError(std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

}  // namespace

Recipe recipe_from_json(const nlohmann::json& j, const Lexicons& lex, const CompoundCatalog* catalog,
                        ParseDiagnostics* diagnostics) {
  if (!j.is_object()) throw DataError("recipe must be a JSON object");
  Recipe r;
  r.id = str_or(j, "id");
  r.title = str_or(j, "title");
  r.dish_type = str_or(j, "dish_type");
  r.cuisine = str_or(j, "cuisine");
  if (auto s = j.find("servings"); s != j.end() && s->is_number()) r.servings = s->get<double>();
  if (r.servings <= 0) throw DataError("servings must be positive");
  if (str_or(j, "provenance") == "generated") r.provenance = Provenance::generated;

  auto ings = j.find("ingredients");
  if (ings == j.end() || !ings->is_array()) throw DataError("recipe has no ingredient list");
  for (const auto& item : *ings) {
    RecipeIngredient ri;
    if (item.is_string()) {
      auto parsed = parse_ingredient_line(item.get<std::string>(), lex);
      ri.id = parsed.name;
      if (parsed.quantity)
        ri.quantity = static_cast<double>(parsed.quantity->numerator()) / static_cast<double>(parsed.quantity->denominator());
      ri.unit = parsed.unit;
      ri.state = parsed.state;
    } else if (item.is_object() && item.contains("ingredient_id")) {
      ri.id = item.at("ingredient_id").get<std::string>();
      if (auto q = item.find("qty"); q != item.end() && !q->is_null()) ri.quantity = q->get<double>();
      ri.unit = canonical_unit(str_or(item, "unit"), lex);
      ri.state = str_or(item, "state");
    } else if (item.is_object() && item.contains("raw_text")) {
      LineDiagnostic diag;
      auto parsed = parse_ingredient_line(item.at("raw_text").get<std::string>(), lex, &diag);
      if (diagnostics && diag.outcome != ParseOutcome::parsed) diagnostics->entries.push_back(diag);
      ri.id = parsed.name;
      if (parsed.quantity)
        ri.quantity = static_cast<double>(parsed.quantity->numerator()) / static_cast<double>(parsed.quantity->denominator());
      ri.unit = parsed.unit;
      ri.state = parsed.state;
    } else {
      throw DataError("ingredient entry needs ingredient_id or raw_text");
    }
    if (!(item.is_object() && item.contains("ingredient_id"))) {
      // raw text resolves through the catalog by canonical name
      const Ingredient* hit = catalog ? catalog->find_by_name(ri.id) : nullptr;
      if (hit) {
        ri.id = hit->id;
      } else {
        std::replace(ri.id.begin(), ri.id.end(), ' ', '_');
      }
    }
    if (ri.id.empty()) throw DataError("empty ingredient id");
    if (ri.quantity && !(*ri.quantity > 0)) {
      if (diagnostics) diagnostics->entries.push_back({0, ParseOutcome::partial, "nonpositive_quantity", ri.id});
      ri.quantity.reset();
    }
    if (r.contains(ri.id)) {
      if (diagnostics) diagnostics->entries.push_back({0, ParseOutcome::partial, "duplicate_ingredient", ri.id});
      continue;
    }
    r.ingredients.push_back(std::move(ri));
  }
  if (r.ingredients.empty()) throw DataError("recipe '" + r.title + "' has zero ingredients");

  if (auto steps = j.find("steps"); steps != j.end() && steps->is_array()) {
    std::vector<StepCandidate> candidates;
    std::vector<Step> explicit_steps;
    std::vector<std::string> known;
    std::map<std::string, std::string> mention_ids;
    for (const auto& ri : r.ingredients) {
      auto name = ingredient_display_name(ri.id, catalog);
      known.push_back(name);
      mention_ids[name] = ri.id;
    }
    for (const auto& s : *steps) {
      if (s.is_string()) {
        for (const auto& sentence : split_sentences(s.get<std::string>())) {
          LineDiagnostic diag;
          candidates.push_back(parse_instruction(sentence, known, lex, &diag));
          if (diagnostics && diag.outcome != ParseOutcome::parsed) diagnostics->entries.push_back(diag);
        }
      } else if (s.is_object()) {
        Step step;
        step.action = str_or(s, "action");
        step.tool = str_or(s, "tool");
        step.inputs = s.value("inputs", std::vector<std::string>{});
        step.output = str_or(s, "output");
        if (auto d = s.find("duration"); d != s.end() && !d->is_null()) step.duration = d->get<double>();
        explicit_steps.push_back(std::move(step));
      }
    }
    if (!explicit_steps.empty() && !candidates.empty())
      throw DataError("recipe '" + r.title + "' mixes step sentences and structured steps");
    r.steps = explicit_steps.empty() ? link_steps(candidates, mention_ids, diagnostics) : std::move(explicit_steps);
  }
  return r;
}

nlohmann::json to_json(const Recipe& r) {
  nlohmann::json ings = nlohmann::json::array();
  for (const auto& ri : r.ingredients) {
    nlohmann::json i = {{"ingredient_id", ri.id}};
    if (ri.quantity) i["qty"] = *ri.quantity;
    if (!ri.unit.empty()) i["unit"] = ri.unit;
    if (!ri.state.empty()) i["state"] = ri.state;
    ings.push_back(std::move(i));
  }
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : r.steps) {
    nlohmann::json js = {{"action", s.action}, {"tool", s.tool}, {"inputs", s.inputs}, {"output", s.output}};
    js["duration"] = s.duration ? nlohmann::json(*s.duration) : nlohmann::json();
    steps.push_back(std::move(js));
  }
  return {{"id", r.id},
          {"title", r.title},
          {"dish_type", r.dish_type},
          {"cuisine", r.cuisine},
          {"servings", r.servings},
          {"provenance", r.provenance == Provenance::generated ? "generated" : "corpus"},
          {"ingredients", std::move(ings)},
          {"steps", std::move(steps)}};
}

RecipeLoad load_recipes(const std::filesystem::path& path, const Lexicons& lex, const CompoundCatalog* catalog) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  RecipeLoad out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (text::trim(line).empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      ParseDiagnostics diag;
      auto recipe = recipe_from_json(j, lex, catalog, &diag);
      if (recipe.id.empty()) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "r%04zu", n);
        recipe.id = buf;
      }
      for (auto& d : diag.entries) {
        d.line = n;
        out.parse.entries.push_back(std::move(d));
      }
      out.recipes.push_back(std::move(recipe));
    } catch (const nlohmann::json::exception& e) {
      out.skipped.push_back({n, ParseOutcome::failed, "malformed_json", e.what()});
    } catch (const DataError& e) {
      out.skipped.push_back({n, ParseOutcome::failed, "invalid_recipe", e.what()});
    }
  }
  std::set<std::string> ids;
  for (const auto& r : out.recipes)
    if (!ids.insert(r.id).second) throw DataError(path.string() + ": duplicate recipe id '" + r.id + "'");
  return out;
}

std::size_t FrequencyTable::count(const std::string& id) const {
  auto it = unigram.find(id);
  return it == unigram.end() ? 0 : it->second;
}

std::size_t FrequencyTable::pair_count(const std::string& a, const std::string& b) const {
  auto key = a < b ? std::pair{a, b} : std::pair{b, a};
  auto it = pair.find(key);
  return it == pair.end() ? 0 : it->second;
}

std::size_t FrequencyTable::total_mentions() const {
  return std::accumulate(unigram.begin(), unigram.end(), std::size_t{0},
                         [](std::size_t acc, const auto& kv) { return acc + kv.second; });
}

FrequencyTable build_frequency_table(const std::vector<Recipe>& recipes) {
  if (recipes.empty()) throw InvalidArgument("build_frequency_table: empty recipe list");
  FrequencyTable t;
  t.total_recipes = recipes.size();
  for (const auto& r : recipes) {
    std::vector<std::string> ids = r.ingredient_ids();
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      ++t.unigram[ids[i]];
      for (std::size_t k = i + 1; k < ids.size(); ++k) ++t.pair[{ids[i], ids[k]}];
    }
  }
  return t;
}

nlohmann::json to_json(const FrequencyTable& table) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& [key, n] : table.pair) pairs.push_back({key.first, key.second, n});
  return {{"total_recipes", table.total_recipes}, {"unigram", table.unigram}, {"pair", std::move(pairs)}};
}

}  // namespace muse
