#include <benchmark/benchmark.h>

#include "fixtures.hpp"
#include "muse/design.hpp"
#include "muse/topics.hpp"

using namespace muse;

namespace {

struct Corpus {
  Lexicons lex = testing::bundled_lexicons();
  CompoundCatalog catalog;
  CuisineTable cuisines;
  std::vector<Recipe> recipes;

  Corpus() {
    catalog = load_compound_catalog(testing::data_dir() / "compounds.csv",
                                    testing::data_dir() / "ingredient_compounds.csv");
    load_ingredients(testing::data_dir() / "ingredients.csv", catalog, lex.singular);
    cuisines = CuisineTable::load(testing::data_dir() / "cuisines.csv", catalog);
    recipes = load_recipes(testing::data_dir() / "recipes.jsonl", lex, &catalog).recipes;
  }
};

const Corpus& corpus() {
  static const Corpus c;
  return c;
}

void BM_Generate(benchmark::State& state) {
  const auto& c = corpus();
  DesignProblem p;
  p.key_ingredient = "saffron";
  p.cuisines = {"spanish"};
  p.dish_type = "soup";
  p.min_ingredients = 4;
  p.max_ingredients = 9;
  GenerationConfig g;
  g.population_size = static_cast<std::size_t>(state.range(0));
  g.generations = static_cast<std::size_t>(state.range(1));
  g.seed = 7;
  for (auto _ : state) benchmark::DoNotOptimize(generate(p, c.recipes, c.catalog, c.cuisines, g));
}
BENCHMARK(BM_Generate)->Args({60, 15})->Args({200, 50})->Unit(benchmark::kMillisecond);

void BM_DesignSpace(benchmark::State& state) {
  auto cat = testing::catalog_of_size(static_cast<std::size_t>(state.range(0)));
  DesignProblem p;
  p.key_ingredient = "i0";
  p.cuisines = {"any"};
  p.min_ingredients = 1;
  p.max_ingredients = 12;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_design_space(cat, p));
}
BENCHMARK(BM_DesignSpace)->Arg(1000)->Arg(100000);

void BM_FitLdaPlanted(benchmark::State& state) {
  auto planted = testing::planted_topics(17);
  LdaOptions opt;
  opt.topics = 3;
  opt.hyper_alpha = 0.3;
  opt.iterations = static_cast<std::size_t>(state.range(0));
  opt.seed = 7;
  for (auto _ : state) benchmark::DoNotOptimize(fit_lda(planted.docs, opt));
}
BENCHMARK(BM_FitLdaPlanted)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_SuggestMenu(benchmark::State& state) {
  const auto& c = corpus();
  std::vector<Document> docs;
  for (const auto& r : c.recipes) docs.push_back(r.ingredient_ids());
  LdaOptions opt;
  opt.topics = 10;
  opt.iterations = 200;
  opt.seed = 7;
  auto model = fit_lda(docs, opt);
  for (auto _ : state)
    benchmark::DoNotOptimize(suggest_menu_parameters(model, c.recipes, static_cast<std::size_t>(state.range(0)), 0.0, 7));
}
BENCHMARK(BM_SuggestMenu)->Arg(3)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace
