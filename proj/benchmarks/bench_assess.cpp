#include <benchmark/benchmark.h>

#include <random>

#include "fixtures.hpp"
#include "muse/pairing.hpp"
#include "muse/pleasantness.hpp"
#include "muse/surprise.hpp"

using namespace muse;

namespace {

struct Bundled {
  Lexicons lex = testing::bundled_lexicons();
  CompoundCatalog catalog;
  std::vector<Recipe> recipes;
  SurpriseModel prior;
  PleasantnessModel pleasant;

  Bundled() {
    catalog = load_compound_catalog(testing::data_dir() / "compounds.csv",
                                    testing::data_dir() / "ingredient_compounds.csv");
    load_ingredients(testing::data_dir() / "ingredients.csv", catalog, lex.singular);
    recipes = load_recipes(testing::data_dir() / "recipes.jsonl", lex, &catalog).recipes;
    std::vector<std::string> vocab;
    for (const auto& [id, _] : catalog.ingredients) vocab.push_back(id);
    prior = fit_surprise_prior(build_frequency_table(recipes), vocab, 0.5);
    pleasant = fit_pleasantness(TrainingSet::from_catalog(catalog), CvMode::leave_one_out);
  }
};

const Bundled& bundled() {
  static const Bundled b;
  return b;
}

void BM_SurpriseCorpus(benchmark::State& state) {
  const auto& b = bundled();
  for (auto _ : state)
    for (const auto& r : b.recipes) benchmark::DoNotOptimize(bayesian_surprise(b.prior, r));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(b.recipes.size()));
}
BENCHMARK(BM_SurpriseCorpus);

void BM_PleasantnessCorpus(benchmark::State& state) {
  const auto& b = bundled();
  for (auto _ : state)
    for (const auto& r : b.recipes) benchmark::DoNotOptimize(recipe_pleasantness(r, b.catalog, b.pleasant));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(b.recipes.size()));
}
BENCHMARK(BM_PleasantnessCorpus);

void BM_PairingCorpus(benchmark::State& state) {
  const auto& b = bundled();
  for (auto _ : state)
    for (const auto& r : b.recipes) benchmark::DoNotOptimize(pairing_score(r, b.catalog));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(b.recipes.size()));
}
BENCHMARK(BM_PairingCorpus);

void BM_FitPleasantness(benchmark::State& state) {
  auto t = testing::planted_regression(static_cast<std::size_t>(state.range(0)), 0.05, 4);
  const auto mode = state.range(1) ? CvMode::leave_one_out : CvMode::ten_fold;
  for (auto _ : state) benchmark::DoNotOptimize(fit_pleasantness(t, mode, nullptr, 4));
}
BENCHMARK(BM_FitPleasantness)->Args({70, 0})->Args({70, 1})->Args({500, 0})->Unit(benchmark::kMillisecond);

}  // namespace
