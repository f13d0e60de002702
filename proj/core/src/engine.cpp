#include "muse/engine.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>

#include "muse/pairing.hpp"

namespace muse {

namespace {

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const nlohmann::json& section, const char* key,
                              const std::filesystem::path& fallback = {}) {
  std::filesystem::path p = fallback;
  if (auto it = section.find(key); it != section.end() && it->is_string()) p = it->get<std::string>();
  if (p.empty() || p.is_absolute()) return p;
  return base / p;
}

template <typename T>
void read(const nlohmann::json& section, const char* key, T& into) {
  if (auto it = section.find(key); it != section.end() && !it->is_null()) into = it->get<T>();
}

const nlohmann::json& section(const nlohmann::json& j, const char* key) {
  static const nlohmann::json empty = nlohmann::json::object();
  auto it = j.find(key);
  if (it == j.end()) return empty;
  if (!it->is_object()) throw DataError(std::string("config section '") + key + "' must be an object");
  return *it;
}

}  // namespace

EngineConfig EngineConfig::from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw DataError("config must be a JSON object");
  EngineConfig c;
  try {
    const auto& data = section(j, "data");
    c.data.compounds = resolve(base_dir, data, "compounds", "compounds.csv");
    c.data.ingredient_compounds = resolve(base_dir, data, "ingredient_compounds", "ingredient_compounds.csv");
    c.data.ingredients = resolve(base_dir, data, "ingredients", "ingredients.csv");
    c.data.cuisines = resolve(base_dir, data, "cuisines", "cuisines.csv");
    c.data.recipes = resolve(base_dir, data, "recipes", "recipes.jsonl");
    c.data.lexicon_dir = resolve(base_dir, data, "lexicon_dir", "lexicon");
    c.data.action_durations = resolve(base_dir, data, "action_durations", "action_durations.csv");

    const auto& models = section(j, "models");
    c.models.surprise = resolve(base_dir, models, "surprise");
    c.models.pleasantness = resolve(base_dir, models, "pleasantness");
    c.models.topics = resolve(base_dir, models, "topics");

    const auto& gen = section(j, "generation");
    read(gen, "population_size", c.generation.population_size);
    read(gen, "generations", c.generation.generations);
    read(gen, "mutation_rate", c.generation.mutation_rate);
    read(gen, "crossover_rate", c.generation.crossover_rate);
    read(gen, "output_cap", c.generation.output_cap);
    read(gen, "seed", c.generation.seed);
    read(gen, "novelty_threshold", c.novelty_threshold);
    read(gen, "min_ingredients", c.default_min_ingredients);
    read(gen, "max_ingredients", c.default_max_ingredients);

    const auto& weights = section(j, "weights");
    read(weights, "surprise", c.weights.surprise);
    read(weights, "pleasantness", c.weights.pleasantness);
    read(weights, "pairing", c.weights.pairing);

    const auto& surprise = section(j, "surprise");
    read(surprise, "smoothing", c.smoothing);

    const auto& pleasant = section(j, "pleasantness");
    if (auto it = pleasant.find("cv_mode"); it != pleasant.end()) c.cv_mode = parse_cv_mode(it->get<std::string>());

    const auto& topics = section(j, "topics");
    read(topics, "topics", c.lda.topics);
    read(topics, "iterations", c.lda.iterations);
    read(topics, "hyper_beta", c.lda.hyper_beta);
    read(topics, "seed", c.lda.seed);
    if (auto it = topics.find("hyper_alpha"); it != topics.end() && !it->is_null()) c.lda.hyper_alpha = it->get<double>();

    const auto& service = section(j, "service");
    read(service, "port", c.port);
    c.session_dir = resolve(base_dir, service, "session_dir", "sessions");
    c.output_dir = resolve(base_dir, j, "output_dir", "out");
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad config value: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw DataError(std::string("bad config value: ") + e.what());
  }
  return c;
}

EngineConfig EngineConfig::load(const std::filesystem::path& path) {
  auto j = read_json_file(path);
  auto c = from_json(j, std::filesystem::absolute(path).parent_path());
  if (const char* port = std::getenv("MUSE_PORT"); port != nullptr && *port != '\0') {
    try {
      c.port = std::stoi(port);
    } catch (const std::exception&) {
      throw DataError(std::string("MUSE_PORT is not a number: ") + port);
    }
  }
  return c;
}

void EngineConfig::validate() const {
  for (const auto* p : {&data.compounds, &data.ingredient_compounds, &data.ingredients, &data.cuisines,
                        &data.recipes, &data.lexicon_dir, &data.action_durations})
    if (!std::filesystem::exists(*p)) throw DataError("configured path does not exist: " + p->string());
  if (smoothing <= 0) throw DataError("surprise.smoothing must be positive");
  if (default_min_ingredients < 1 || default_min_ingredients > default_max_ingredients)
    throw DataError("generation min/max ingredients are inconsistent");
  if (port < 0 || port > 65535) throw DataError("service.port out of range");
}

std::optional<std::filesystem::path> resolve_config_path(const std::string& explicit_path) {
  if (!explicit_path.empty()) return std::filesystem::path(explicit_path);
  if (const char* env = std::getenv("MUSE_CONFIG"); env != nullptr && *env != '\0') return std::filesystem::path(env);
  return std::nullopt;
}

Engine::Engine(EngineConfig config, Warnings* warnings) : config_(std::move(config)) {
  config_.validate();
  lex_ = Lexicons::load(config_.data.lexicon_dir);
  durations_ = ActionDurations::load(config_.data.action_durations);
  catalog_ = load_compound_catalog(config_.data.compounds, config_.data.ingredient_compounds, warnings);
  load_ingredients(config_.data.ingredients, catalog_, lex_.singular, warnings);
  cuisines_ = CuisineTable::load(config_.data.cuisines, catalog_);

  auto loaded = load_recipes(config_.data.recipes, lex_, &catalog_);
  for (const auto& d : loaded.skipped)
    warn(warnings, config_.data.recipes.string() + ":" + std::to_string(d.line) + ": skipped (" + d.reason + ")");
  recipes_ = std::move(loaded.recipes);
  freq_ = build_frequency_table(recipes_);

  if (!config_.models.surprise.empty() && std::filesystem::exists(config_.models.surprise)) {
    surprise_ = surprise_model_from_json(read_json_file(config_.models.surprise));
  } else {
    std::vector<std::string> vocab;
    for (const auto& [id, _] : catalog_.ingredients) vocab.push_back(id);
    surprise_ = fit_surprise_prior(freq_, vocab, config_.smoothing);
  }

  if (!config_.models.pleasantness.empty() && std::filesystem::exists(config_.models.pleasantness)) {
    pleasantness_ = pleasantness_model_from_json(read_json_file(config_.models.pleasantness));
  } else {
    pleasantness_ = fit_pleasantness(TrainingSet::from_catalog(catalog_), config_.cv_mode, warnings,
                                     config_.generation.seed);
  }

  if (!config_.models.topics.empty() && std::filesystem::exists(config_.models.topics)) {
    topics_ = topic_model_from_json(read_json_file(config_.models.topics));
  } else {
    std::vector<Document> docs;
    for (const auto& r : recipes_) docs.push_back(r.ingredient_ids());
    topics_ = fit_lda(docs, config_.lda);
  }
}

CandidateSet Engine::generate(const DesignProblem& problem, const GenerationConfig& config,
                              Warnings* warnings) const {
  auto set = muse::generate(problem, recipes_, catalog_, cuisines_, config, warnings);
  if (config_.novelty_threshold > 0) set = novelty_prefilter(set, freq_, config_.novelty_threshold);
  return set;
}

std::vector<RankedCandidate> Engine::assess(const std::vector<Candidate>& candidates, const RankWeights& weights,
                                            const std::string& dish_type, Warnings* warnings) const {
  if (candidates.empty()) return {};
  std::vector<ScoredCandidate> scored;
  scored.reserve(candidates.size());
  std::map<std::string, const Candidate*> by_id;
  for (const auto& c : candidates) {
    if (!by_id.emplace(c.id, &c).second) throw InvalidArgument("duplicate candidate id '" + c.id + "'");
    ScoredCandidate s;
    s.recipe = recipe_from_set(c.id, c.ingredients, dish_type);
    s.surprise = bayesian_surprise(surprise_, s.recipe);
    try {
      s.pleasantness = recipe_pleasantness(s.recipe, catalog_, pleasantness_, warnings);
    } catch (const DataError& e) {
      warn(warnings, "candidate " + c.id + ": " + e.what() + "; pleasantness set to 0");
      s.pleasantness = 0.0;
    }
    s.pairing = pairing_score(s.recipe, catalog_);
    scored.push_back(std::move(s));
  }
  auto ranked = rank_candidates(std::move(scored), weights);
  std::vector<RankedCandidate> out;
  out.reserve(ranked.size());
  for (const auto& s : ranked)
    out.push_back({*by_id.at(s.recipe.id), s.surprise, s.pleasantness, s.pairing, s.composite, s.composite_rank});
  return out;
}

PlanResult Engine::plan(const std::vector<std::string>& ingredients, const std::string& dish_type, std::size_t cooks,
                        Warnings* warnings) const {
  PlanResult result;
  result.proportions = estimate_proportions(ingredients, dish_type, recipes_, catalog_, lex_.conversions, warnings);
  result.proportions.title = dish_type.empty() ? "generated recipe" : "generated " + dish_type;
  auto graph = build_step_graph(result.proportions, recipes_, catalog_, durations_, warnings);
  result.plan = schedule(std::move(graph), cooks);
  return result;
}

MenuSuggestion Engine::menu(std::size_t k, double variety_target, std::uint64_t seed, Warnings* warnings) const {
  return suggest_menu_parameters(topics_, recipes_, k, variety_target, seed, warnings);
}

std::vector<std::string> Engine::dish_types() const {
  std::set<std::string> types;
  for (const auto& r : recipes_)
    if (!r.dish_type.empty()) types.insert(r.dish_type);
  return {types.begin(), types.end()};
}

std::vector<Engine::IngredientChoice> Engine::ingredient_choices(const std::string& dish_type) const {
  if (!dish_type.empty()) {
    auto types = dish_types();
    if (!std::binary_search(types.begin(), types.end(), dish_type))
      throw NotFound("unknown dish type '" + dish_type + "'");
  }
  std::map<std::string, std::size_t> counts;
  for (const auto& r : recipes_) {
    if (!dish_type.empty() && r.dish_type != dish_type) continue;
    for (const auto& ri : r.ingredients) ++counts[ri.id];
  }
  std::vector<IngredientChoice> out;
  for (const auto& [id, ing] : catalog_.ingredients) {
    auto it = counts.find(id);
    out.push_back({id, ing.name, ing.category, it == counts.end() ? 0 : it->second, 4, ""});
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.count > b.count; });
  const auto n = out.size();
  std::size_t tier_start = 0;  // equal counts share the quartile of their best position
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && out[i].count != out[i - 1].count) tier_start = i;
    out[i].quartile = static_cast<int>(1 + (4 * tier_start) / n);
    out[i].commonness = out[i].quartile <= 2 ? "common" : "uncommon";
  }
  return out;
}

}  // namespace muse
