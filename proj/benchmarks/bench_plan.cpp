#include <benchmark/benchmark.h>

#include <random>

#include "fixtures.hpp"
#include "muse/parser.hpp"
#include "muse/planner.hpp"
#include "parser_eval.hpp"

using namespace muse;

namespace {

void BM_ScheduleRandomDags(benchmark::State& state) {
  std::mt19937_64 rng(909);
  std::vector<Plan> plans;
  for (int i = 0; i < 500; ++i) plans.push_back(testing::dag_plan(testing::random_dag(rng)));
  const auto cooks = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    for (const auto& p : plans) benchmark::DoNotOptimize(schedule(p, cooks));
  state.SetItemsProcessed(state.iterations() * 500);
}
BENCHMARK(BM_ScheduleRandomDags)->Arg(1)->Arg(3);

void BM_ScheduleWide(benchmark::State& state) {
  Plan p;
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> dur(1, 30);
  for (std::size_t i = 0; i < n; ++i) {
    p.nodes.push_back({"n" + std::to_string(i), NodeKind::action, "cook", "", static_cast<double>(dur(rng))});
    if (i >= 4) p.edges.emplace_back(i - 4, i);
  }
  for (auto _ : state) benchmark::DoNotOptimize(schedule(p, 4));
}
BENCHMARK(BM_ScheduleWide)->Arg(64)->Arg(1024);

void BM_ParseIngredientLines(benchmark::State& state) {
  auto lex = testing::bundled_lexicons();
  std::vector<std::string> lines;
  for (const auto& row : testing::read_rows(testing::data_dir() / "eval" / "ingredient_lines.jsonl"))
    lines.push_back(row.at("text").get<std::string>());
  for (auto _ : state)
    for (const auto& l : lines) benchmark::DoNotOptimize(parse_ingredient_line(l, lex));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(lines.size()));
}
BENCHMARK(BM_ParseIngredientLines);

void BM_ParseInstructions(benchmark::State& state) {
  auto lex = testing::bundled_lexicons();
  std::vector<std::pair<std::string, std::vector<std::string>>> rows;
  for (const auto& row : testing::read_rows(testing::data_dir() / "eval" / "instructions.jsonl"))
    rows.emplace_back(row.at("text").get<std::string>(), row.at("known").get<std::vector<std::string>>());
  for (auto _ : state)
    for (const auto& [text, known] : rows) benchmark::DoNotOptimize(parse_instruction(text, known, lex));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(rows.size()));
}
BENCHMARK(BM_ParseInstructions);

}  // namespace
