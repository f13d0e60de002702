#include "muse/design.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "muse/random.hpp"

namespace muse {

namespace {

constexpr double kTypicalityFloor = 0.05;
constexpr std::size_t kMutationHistory = 8;

struct Individual {
  std::vector<std::string> ingredients;  // sorted
  std::set<std::string> parents;
  std::vector<Mutation> mutations;
};

bool has(const std::vector<std::string>& sorted, const std::string& id) {
  return std::binary_search(sorted.begin(), sorted.end(), id);
}

void insert_sorted(std::vector<std::string>& sorted, const std::string& id) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), id);
  if (it == sorted.end() || *it != id) sorted.insert(it, id);
}

class Generator {
 public:
  Generator(const DesignProblem& problem, const CompoundCatalog& catalog, const CuisineTable& cuisines,
            const GenerationConfig& config)
      : problem_(problem), catalog_(catalog), config_(config), rng_(config.seed) {
    for (const auto& [id, ing] : catalog.ingredients) {
      eligible_.push_back(id);
      double t = 0.0;
      for (const auto& c : problem.cuisines) t = std::max(t, cuisines.typicality(c, id));
      weight_[id] = kTypicalityFloor + t;
      by_category_[ing.category].push_back(id);
    }
    max_size_ = std::min(problem.max_ingredients, eligible_.size());
  }

  Rng& rng() { return rng_; }

  // Key ingredient reinserted, size clamped into [min, max].
  void repair(Individual& ind) {
    insert_sorted(ind.ingredients, problem_.key_ingredient);
    while (ind.ingredients.size() > max_size_) {
      std::vector<std::size_t> removable;
      for (std::size_t i = 0; i < ind.ingredients.size(); ++i)
        if (ind.ingredients[i] != problem_.key_ingredient) removable.push_back(i);
      auto victim = removable[rng_.below(removable.size())];
      ind.ingredients.erase(ind.ingredients.begin() + static_cast<std::ptrdiff_t>(victim));
    }
    while (ind.ingredients.size() < problem_.min_ingredients) {
      std::vector<std::string> pool;
      std::vector<double> w;
      for (const auto& id : eligible_) {
        if (has(ind.ingredients, id)) continue;
        pool.push_back(id);
        w.push_back(weight_.at(id));
      }
      insert_sorted(ind.ingredients, pool[rng_.weighted(w)]);
    }
  }

  void mutate(Individual& ind) {
    auto current = ind.ingredients;
    for (const auto& id : current) {
      if (id == problem_.key_ingredient || !rng_.bernoulli(config_.mutation_rate)) continue;
      const auto* ing = catalog_.find_ingredient(id);
      if (ing == nullptr) continue;
      std::vector<std::string> pool;
      std::vector<double> w;
      for (const auto& alt : by_category_[ing->category]) {
        if (alt == id || has(ind.ingredients, alt)) continue;
        pool.push_back(alt);
        w.push_back(weight_.at(alt));
      }
      if (pool.empty()) continue;
      const auto& replacement = pool[rng_.weighted(w)];
      ind.ingredients.erase(std::lower_bound(ind.ingredients.begin(), ind.ingredients.end(), id));
      insert_sorted(ind.ingredients, replacement);
      ind.mutations.push_back({id, replacement});
    }
    if (ind.mutations.size() > kMutationHistory)
      ind.mutations.erase(ind.mutations.begin(),
                          ind.mutations.end() - static_cast<std::ptrdiff_t>(kMutationHistory));
  }

  std::pair<Individual, Individual> crossover(const Individual& a, const Individual& b) {
    auto pick_subset = [&](const Individual& from, const Individual& other) {
      std::vector<std::string> subset;
      for (const auto& id : from.ingredients)
        if (id != problem_.key_ingredient && !has(other.ingredients, id) && rng_.bernoulli(0.5)) subset.push_back(id);
      return subset;
    };
    auto sa = pick_subset(a, b);
    auto sb = pick_subset(b, a);
    auto exchange = [&](const Individual& base, const std::vector<std::string>& out,
                        const std::vector<std::string>& in, const Individual& donor) {
      Individual child;
      for (const auto& id : base.ingredients)
        if (std::find(out.begin(), out.end(), id) == out.end()) child.ingredients.push_back(id);
      for (const auto& id : in) insert_sorted(child.ingredients, id);
      child.parents = base.parents;
      child.parents.insert(donor.parents.begin(), donor.parents.end());
      child.mutations = base.mutations;
      return child;
    };
    return {exchange(a, sa, sb, b), exchange(b, sb, sa, a)};
  }

  const Individual& select(const std::vector<Individual>& population) {
    const auto& first = population[rng_.below(population.size())];
    if (!config_.fitness_bias) return first;
    const auto& second = population[rng_.below(population.size())];
    return config_.fitness_bias(second.ingredients) > config_.fitness_bias(first.ingredients) ? second : first;
  }

 private:
  const DesignProblem& problem_;
  const CompoundCatalog& catalog_;
  const GenerationConfig& config_;
  Rng rng_;
  std::vector<std::string> eligible_;
  std::map<std::string, double> weight_;
  std::map<Category, std::vector<std::string>> by_category_;
  std::size_t max_size_ = 0;
};

}  // namespace

void validate(const DesignProblem& problem, const CompoundCatalog& catalog) {
  if (problem.key_ingredient.empty()) throw InvalidArgument("design problem needs a key ingredient");
  if (!catalog.find_ingredient(problem.key_ingredient))
    throw InvalidArgument("unknown key ingredient '" + problem.key_ingredient + "'");
  if (problem.cuisines.empty()) throw InvalidArgument("design problem needs at least one cuisine");
  if (problem.min_ingredients < 1 || problem.min_ingredients > problem.max_ingredients)
    throw InvalidArgument("infeasible ingredient count bounds");
  if (problem.min_ingredients > catalog.ingredients.size())
    throw InvalidArgument("minimum ingredient count exceeds the catalog size");
}

CandidateSet generate(const DesignProblem& problem, const std::vector<Recipe>& corpus, const CompoundCatalog& catalog,
                      const CuisineTable& cuisines, const GenerationConfig& config, Warnings* warnings) {
  if (corpus.empty()) throw InvalidArgument("generate: empty corpus");
  validate(problem, catalog);
  if (config.population_size < 1 || config.output_cap < 1) throw InvalidArgument("generate: sizes must be >= 1");
  if (!(config.mutation_rate >= 0.0 && config.mutation_rate <= 1.0) ||
      !(config.crossover_rate >= 0.0 && config.crossover_rate <= 1.0))
    throw InvalidArgument("generate: rates must lie in [0,1]");
  for (const auto& c : problem.cuisines)
    if (!cuisines.contains(c)) warn(warnings, "cuisine '" + c + "' is not in the cuisine table");

  std::vector<const Recipe*> seeds;
  for (const auto& r : corpus)
    if (r.dish_type == problem.dish_type) seeds.push_back(&r);
  if (seeds.empty()) {
    warn(warnings, "no corpus recipe has dish type '" + problem.dish_type + "'; seeding from all recipes");
    for (const auto& r : corpus) seeds.push_back(&r);
  }

  std::set<std::vector<std::string>> corpus_sets;
  for (const auto& r : corpus) {
    auto ids = r.ingredient_ids();
    std::sort(ids.begin(), ids.end());
    corpus_sets.insert(std::move(ids));
  }

  Generator gen(problem, catalog, cuisines, config);
  CandidateSet out;
  out.problem = problem;
  std::set<std::vector<std::string>> seen;

  auto collect = [&](const std::vector<Individual>& population, std::size_t generation) {
    ++out.stats.populations_evaluated;
    for (const auto& ind : population) {
      ++out.stats.individuals_evaluated;
      if (corpus_sets.count(ind.ingredients)) {
        ++out.stats.corpus_matches_removed;
        continue;
      }
      if (!seen.insert(ind.ingredients).second) {
        ++out.stats.duplicates_removed;
        continue;
      }
      if (out.candidates.size() >= config.output_cap) {
        ++out.stats.capped;
        continue;
      }
      Candidate c;
      c.ingredients = ind.ingredients;
      c.generation = generation;
      c.parents = ind.parents;
      c.mutations = ind.mutations;
      out.candidates.push_back(std::move(c));
    }
  };

  std::vector<std::size_t> order(seeds.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  gen.rng().shuffle(order);

  bool dropped_unknown = false;
  std::vector<Individual> population;
  population.reserve(config.population_size);
  for (std::size_t i = 0; i < config.population_size; ++i) {
    const auto& seed = *seeds[order[i % order.size()]];
    Individual ind;
    for (const auto& id : seed.ingredient_ids()) {
      if (catalog.find_ingredient(id))
        insert_sorted(ind.ingredients, id);
      else
        dropped_unknown = true;
    }
    ind.parents.insert(seed.id);
    gen.repair(ind);
    population.push_back(std::move(ind));
  }
  if (dropped_unknown) warn(warnings, "corpus ingredients outside the catalog were dropped from seeds");
  collect(population, 0);

  for (std::size_t g = 1; g <= config.generations; ++g) {
    std::vector<Individual> next;
    next.reserve(config.population_size);
    while (next.size() < config.population_size) {
      const auto& a = gen.select(population);
      const auto& b = gen.select(population);
      std::pair<Individual, Individual> children;
      if (gen.rng().bernoulli(config.crossover_rate))
        children = gen.crossover(a, b);
      else
        children = {a, b};
      for (auto* child : {&children.first, &children.second}) {
        if (next.size() >= config.population_size) break;
        gen.mutate(*child);
        gen.repair(*child);
        next.push_back(std::move(*child));
      }
    }
    population = std::move(next);
    collect(population, g);
  }

  for (std::size_t i = 0; i < out.candidates.size(); ++i) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "c%05zu", i + 1);
    out.candidates[i].id = buf;
  }
  return out;
}

boost::multiprecision::cpp_int estimate_design_space(const CompoundCatalog& catalog, const DesignProblem& problem,
                                                     std::size_t dish_type_options) {
  using boost::multiprecision::cpp_int;
  const std::size_t eligible = catalog.ingredients.size();
  if (eligible == 0 || problem.min_ingredients < 1 || problem.min_ingredients > problem.max_ingredients)
    return 0;
  const std::size_t free = eligible - 1;  // the key ingredient is fixed
  cpp_int total = 0;
  for (std::size_t n = problem.min_ingredients; n <= problem.max_ingredients && n - 1 <= free; ++n) {
    const std::size_t k = n - 1;
    cpp_int binom = 1;
    for (std::size_t i = 1; i <= k; ++i) {
      binom *= free - k + i;
      binom /= i;
    }
    total += binom;
  }
  return total * std::max<std::size_t>(1, problem.cuisines.size()) * std::max<std::size_t>(1, dish_type_options);
}

CandidateSet novelty_prefilter(const CandidateSet& candidates, const FrequencyTable& freq, std::size_t threshold) {
  if (threshold < 1) throw InvalidArgument("novelty_prefilter: threshold must be >= 1");
  CandidateSet out;
  out.problem = candidates.problem;
  out.stats = candidates.stats;
  for (const auto& c : candidates.candidates) {
    bool familiar = true;
    const auto& ids = c.ingredients;
    if (ids.size() == 1) familiar = freq.count(ids.front()) >= threshold;
    for (std::size_t i = 0; i < ids.size() && familiar; ++i)
      for (std::size_t j = i + 1; j < ids.size() && familiar; ++j)
        if (freq.pair_count(ids[i], ids[j]) < threshold) familiar = false;
    if (!familiar) out.candidates.push_back(c);
  }
  return out;
}

nlohmann::json to_json(const DesignProblem& p) {
  return {{"key_ingredient", p.key_ingredient},
          {"cuisines", p.cuisines},
          {"dish_type", p.dish_type},
          {"min_ingredients", p.min_ingredients},
          {"max_ingredients", p.max_ingredients}};
}

DesignProblem design_problem_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidArgument("design problem must be an object");
  try {
    DesignProblem p;
    p.key_ingredient = j.at("key_ingredient").get<std::string>();
    const auto& cz = j.at("cuisines");
    if (cz.is_string())
      p.cuisines.insert(cz.get<std::string>());
    else
      p.cuisines = cz.get<std::set<std::string>>();
    p.dish_type = j.at("dish_type").get<std::string>();
    p.min_ingredients = j.value("min_ingredients", p.min_ingredients);
    p.max_ingredients = j.value("max_ingredients", p.max_ingredients);
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed design problem: ") + e.what());
  }
}

nlohmann::json to_json(const Candidate& c) {
  nlohmann::json muts = nlohmann::json::array();
  for (const auto& m : c.mutations) muts.push_back({{"from", m.from}, {"to", m.to}});
  return {{"id", c.id},
          {"ingredients", c.ingredients},
          {"generation", c.generation},
          {"parents", c.parents},
          {"mutations", std::move(muts)}};
}

Candidate candidate_from_json(const nlohmann::json& j) {
  try {
    Candidate c;
    c.id = j.at("id").get<std::string>();
    c.ingredients = j.at("ingredients").get<std::vector<std::string>>();
    std::sort(c.ingredients.begin(), c.ingredients.end());
    c.generation = j.value("generation", std::size_t{0});
    c.parents = j.value("parents", std::set<std::string>{});
    if (auto m = j.find("mutations"); m != j.end())
      for (const auto& mj : *m) c.mutations.push_back({mj.at("from").get<std::string>(), mj.at("to").get<std::string>()});
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed candidate: ") + e.what());
  }
}

}  // namespace muse
