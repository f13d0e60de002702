#include <doctest.h>

#include <chrono>
#include <random>

#include "muse/corpus.hpp"
#include "muse/planner.hpp"
#include "fixtures.hpp"

using namespace muse;

namespace {

struct Fixture {
  Lexicons lex = testing::bundled_lexicons();
  ActionDurations durations = ActionDurations::load(testing::data_dir() / "action_durations.csv");
  CompoundCatalog catalog;

  Fixture() {
    catalog = load_compound_catalog(testing::data_dir() / "compounds.csv",
                                    testing::data_dir() / "ingredient_compounds.csv");
    load_ingredients(testing::data_dir() / "ingredients.csv", catalog, lex.singular);
  }
};

const Fixture& fx() {
  static const Fixture f;
  return f;
}

RecipeIngredient item(std::string id, double qty, std::string unit) {
  RecipeIngredient ri;
  ri.id = std::move(id);
  ri.quantity = qty;
  ri.unit = std::move(unit);
  return ri;
}

Recipe with_items(std::string id, std::string dish, std::vector<RecipeIngredient> items, double servings = 4.0) {
  Recipe r;
  r.id = std::move(id);
  r.dish_type = std::move(dish);
  r.servings = servings;
  r.ingredients = std::move(items);
  return r;
}

const RecipeIngredient& get(const Recipe& r, const std::string& id) {
  for (const auto& ri : r.ingredients)
    if (ri.id == id) return ri;
  throw std::runtime_error("missing " + id);
}

bool reaches(const Plan& p, std::size_t from, std::size_t to) {
  if (from == to) return true;
  for (auto [u, v] : p.edges)
    if (u == from && reaches(p, v, to)) return true;
  return false;
}

}  // namespace

TEST_CASE("constant corpus amounts give that amount") {
  std::vector<Recipe> corpus;
  for (int i = 0; i < 5; ++i)
    corpus.push_back(with_items("r" + std::to_string(i), "soup", {item("onion", 2.0, "cup"), item("stock", 4, "cup")}));
  auto r = estimate_proportions({"onion", "stock"}, "soup", corpus, fx().catalog, fx().lex.conversions);
  CHECK(r.servings == 4.0);
  CHECK(r.provenance == Provenance::generated);
  CHECK(get(r, "onion").unit == "cup");
  CHECK(*get(r, "onion").quantity == doctest::Approx(2.0));
  CHECK(*get(r, "stock").quantity == doctest::Approx(4.0));
}

TEST_CASE("amounts scale per serving") {
  std::vector<Recipe> corpus = {with_items("a", "soup", {item("onion", 1.0, "cup")}, 2.0),
                                with_items("b", "soup", {item("onion", 4.0, "cup")}, 8.0),
                                with_items("c", "soup", {item("onion", 0.5, "cup")}, 1.0)};
  auto r = estimate_proportions({"onion"}, "soup", corpus, fx().catalog, fx().lex.conversions);
  CHECK(*get(r, "onion").quantity == doctest::Approx(2.0));

  // doubling every recipe's yield and amounts changes nothing
  for (auto& rec : corpus) {
    rec.servings *= 2;
    for (auto& ri : rec.ingredients) *ri.quantity *= 2;
  }
  auto s = estimate_proportions({"onion"}, "soup", corpus, fx().catalog, fx().lex.conversions);
  CHECK(*get(s, "onion").quantity == doctest::Approx(2.0));
}

TEST_CASE("hand-computed medians across units") {
  // per serving in ml: 120, 180, 15; the gram sample is another dimension
  std::vector<Recipe> corpus = {with_items("a", "soup", {item("onion", 2.0, "cup")}),
                                with_items("b", "soup", {item("onion", 3.0, "cup")}),
                                with_items("c", "soup", {item("onion", 4.0, "tablespoon")}),
                                with_items("d", "soup", {item("onion", 100.0, "gram")}),
                                with_items("e", "salad", {item("onion", 50.0, "cup")})};
  auto r = estimate_proportions({"onion"}, "soup", corpus, fx().catalog, fx().lex.conversions);
  CHECK(get(r, "onion").unit == "cup");
  CHECK(*get(r, "onion").quantity == doctest::Approx(2.0));

  corpus.push_back(with_items("f", "soup", {item("onion", 4.0, "cup")}));
  auto s = estimate_proportions({"onion"}, "soup", corpus, fx().catalog, fx().lex.conversions);
  CHECK(*get(s, "onion").quantity == doctest::Approx(2.5));
}

TEST_CASE("fallbacks: category median, then one piece") {
  std::vector<Recipe> corpus = {with_items("a", "soup", {item("cumin", 1.0, "teaspoon")}),
                                with_items("b", "salad", {item("paprika", 3.0, "teaspoon")}),
                                with_items("c", "salad", {item("tomato", 2.0, "")})};
  Warnings w;
  auto r = estimate_proportions({"saffron", "unknown_thing", "tomato"}, "soup", corpus, fx().catalog,
                                fx().lex.conversions, &w);
  CHECK(get(r, "saffron").unit == "teaspoon");
  CHECK(*get(r, "saffron").quantity == doctest::Approx(2.0));  // median of 1 and 3
  CHECK(*get(r, "unknown_thing").quantity == doctest::Approx(1.0));
  CHECK(get(r, "unknown_thing").unit.empty());
  CHECK(*get(r, "tomato").quantity == doctest::Approx(2.0));  // vegetable category, any dish
  CHECK(w.size() == 3);
  CHECK_THROWS_AS(estimate_proportions({}, "soup", corpus, fx().catalog, fx().lex.conversions), InvalidArgument);
  CHECK_THROWS_AS(estimate_proportions({"onion"}, "soup", {}, fx().catalog, fx().lex.conversions), InvalidArgument);
}

TEST_CASE("template transfer binds by id and by category") {
  auto tmpl = with_items("t", "quiche", {item("onion", 1, ""), item("butter", 1, ""), item("egg", 3, ""),
                                         item("flour", 1, "cup"), item("cheese", 1, "cup")});
  tmpl.steps = {{"cut", "knife", {"onion"}, "s1", std::nullopt},
                {"fry", "pan", {"s1", "butter"}, "s2", 6.0},
                {"mix", "bowl", {"egg", "cheese"}, "s3", std::nullopt},
                {"roll", "rolling pin", {"flour"}, "s4", std::nullopt},
                {"assemble", "", {"s2", "s3", "s4"}, "s5", std::nullopt},
                {"bake", "oven", {"s5"}, "s6", 40.0},
                {"cool", "rack", {"s6"}, "s7", std::nullopt}};
  auto other = with_items("u", "quiche", {item("spinach", 1, "")});
  other.steps = {{"boil", "pot", {"spinach"}, "s1", std::nullopt}};

  // mushroom takes onion's place (both vegetables); no fat, so butter's input vanishes;
  // saffron has no counterpart and joins the prep step
  auto recipe = with_items("x", "quiche", {item("mushroom", 1, ""), item("egg", 3, ""), item("flour", 1, "cup"),
                                           item("cheese", 1, "cup"), item("saffron", 1, "pinch")});
  Warnings w;
  auto plan = build_step_graph(recipe, {other, tmpl}, fx().catalog, fx().durations, &w);
  CHECK(w.empty());
  REQUIRE(plan.action_count() == 8);
  std::vector<std::string> actions;
  for (const auto& n : plan.nodes)
    if (n.kind == NodeKind::action) actions.push_back(n.action);
  CHECK(actions == std::vector<std::string>{"cut", "fry", "mix", "roll", "assemble", "bake", "cool", "prep"});
  auto id = [&](const std::string& s) { return *plan.find(s); };
  CHECK(reaches(plan, id("ing:mushroom"), id("a1")));
  CHECK(plan.nodes[id("a2")].duration == 6.0);
  CHECK(plan.nodes[id("a1")].duration == 5.0);  // action default
  CHECK(plan.nodes[id("a6")].tool == "oven");
  CHECK(reaches(plan, id("a6"), id("a7")));
  CHECK(reaches(plan, id("ing:saffron"), id("prep")));
  CHECK(reaches(plan, id("prep"), id("a3")));  // first merging step
  CHECK(plan.nodes.size() == 5 + 8);
  CHECK_FALSE(check_plan(plan).has_value());
}

TEST_CASE("steps that lose every input are dropped") {
  auto tmpl = with_items("t", "salad", {item("chicken", 1, ""), item("tomato", 1, "")});
  tmpl.steps = {{"fry", "pan", {"chicken"}, "s1", std::nullopt},
                {"cut", "knife", {"tomato"}, "s2", std::nullopt},
                {"toss", "bowl", {"s2"}, "s3", std::nullopt}};
  auto recipe = with_items("x", "salad", {item("tomato", 1, ""), item("basil", 1, "")});
  Warnings w;
  auto plan = build_step_graph(recipe, {tmpl}, fx().catalog, fx().durations, &w);
  REQUIRE(w.size() == 1);
  CHECK(plan.nodes[*plan.find("a1")].action == "cut");
  CHECK(plan.nodes[*plan.find("a2")].action == "toss");
  CHECK(reaches(plan, *plan.find("ing:basil"), *plan.find("a2")));
}

TEST_CASE("no template falls back to a chain") {
  auto recipe = with_items("x", "pie", {item("apple", 3, ""), item("sugar", 1, "cup")});
  Warnings w;
  auto plan = build_step_graph(recipe, {with_items("t", "soup", {item("onion", 1, "")})}, fx().catalog,
                               fx().durations, &w);
  CHECK(w.size() == 1);
  REQUIRE(plan.nodes.size() == 5);
  CHECK(plan.nodes[2].action == "prep");
  CHECK(plan.nodes[3].action == "combine");
  CHECK(plan.nodes[4].action == "cook");
  CHECK(plan.critical_path() == doctest::Approx(5 + 3 + 10));
  auto s = schedule(plan, 3);
  CHECK(s.makespan == doctest::Approx(18.0));
}

TEST_CASE("bundled quiche template orders baking before cooling") {
  auto corpus = load_recipes(testing::data_dir() / "recipes.jsonl", fx().lex, &fx().catalog).recipes;
  auto recipe = estimate_proportions({"egg", "cream", "cheese", "flour", "butter", "spinach", "mushroom"}, "quiche",
                                     corpus, fx().catalog, fx().lex.conversions);
  for (const auto& ri : recipe.ingredients) CHECK(*ri.quantity > 0);
  auto plan = schedule(build_step_graph(recipe, corpus, fx().catalog, fx().durations), 2);
  CHECK_FALSE(check_plan(plan).has_value());
  std::optional<std::size_t> bake, cool;
  for (std::size_t i = 0; i < plan.nodes.size(); ++i) {
    if (plan.nodes[i].action == "bake") bake = i;
    if (plan.nodes[i].action == "cool") cool = i;
  }
  REQUIRE(bake);
  REQUIRE(cool);
  CHECK(reaches(plan, *bake, *cool));
  CHECK(plan.start_times[*cool] >= plan.start_times[*bake] + plan.nodes[*bake].duration);
  for (std::size_t i = 0; i < plan.nodes.size(); ++i)
    if (plan.nodes[i].kind == NodeKind::ingredient) CHECK(plan.nodes[i].duration == 0.0);
}

TEST_CASE("schedule hand examples") {
  // a(4) -> c(3); b(2) -> c; d(6) independent
  oracle::Dag dag{{4, 2, 3, 6}, {{0, 2}, {1, 2}}};
  auto plan = testing::dag_plan(dag);
  auto one = schedule(plan, 1);
  CHECK(one.makespan == 15.0);
  auto two = schedule(plan, 2);
  // t=0: d on cook 0, a on cook 1; t=4: b on cook 1; t=6: c on cook 0 -> 9
  CHECK(two.start_times == std::vector<double>{0, 4, 6, 0});
  CHECK(two.assignment == std::vector<std::size_t>{1, 1, 0, 0});
  CHECK(two.makespan == 9.0);
  auto many = schedule(plan, 8);
  CHECK(many.makespan == plan.critical_path());
  CHECK(plan.critical_path() == 7.0);

  SUBCASE("ties break by node id") {
    oracle::Dag tie{{5, 5}, {}};
    auto p = testing::dag_plan(tie);
    std::swap(p.nodes[0].id, p.nodes[1].id);
    auto s = schedule(p, 1);
    CHECK(s.start_times == std::vector<double>{5, 0});
  }
  SUBCASE("invalid inputs") {
    CHECK_THROWS_AS(schedule(plan, 0), InvalidArgument);
    auto cyclic = plan;
    cyclic.edges.emplace_back(2, 0);
    CHECK_THROWS_AS(schedule(cyclic, 1), InvalidArgument);
    CHECK(check_plan(cyclic).has_value());
    auto negative = plan;
    negative.nodes[0].duration = -1;
    CHECK_THROWS_AS(schedule(negative, 1), InvalidArgument);
  }
}

TEST_CASE("500 random DAGs against exhaustive search") {
  std::mt19937_64 rng(2024);
  const auto t0 = std::chrono::steady_clock::now();
  for (int t = 0; t < 500; ++t) {
    auto dag = testing::random_dag(rng);
    auto plan = testing::dag_plan(dag);
    const std::size_t cooks = 1 + t % 3;
    auto s = schedule(plan, cooks);
    CHECK_FALSE(check_plan(s).has_value());
    auto one = schedule(plan, 1);
    CHECK(one.makespan == doctest::Approx(plan.serial_sum()));
    const double opt = oracle::optimal_makespan(dag, cooks);
    CHECK(s.makespan >= opt - 1e-9);
    CHECK(s.makespan <= 2.0 * opt + 1e-9);
    CHECK(s.makespan >= oracle::critical_path(dag) - 1e-9);
    CHECK(plan.critical_path() == doctest::Approx(oracle::critical_path(dag)));
  }
  CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() < 60.0);
}

TEST_CASE("check_plan catches broken schedules") {
  auto s = schedule(testing::dag_plan({{4, 2, 3, 6}, {{0, 2}, {1, 2}}}), 2);
  auto early = s;
  early.start_times[2] = 1.0;
  CHECK(check_plan(early).has_value());
  auto overlap = s;
  overlap.assignment[3] = 1;
  CHECK(check_plan(overlap).has_value());
  auto wrong = s;
  wrong.makespan = 100;
  CHECK(check_plan(wrong).has_value());
  auto missing = s;
  missing.assignment[0] = 5;
  CHECK(check_plan(missing).has_value());
}

TEST_CASE("json round trip") {
  auto s = schedule(testing::dag_plan({{4, 2.5, 3, 6}, {{0, 2}, {1, 2}}}), 2);
  s.nodes[1].kind = NodeKind::ingredient;
  s.nodes[2].tool = "oven";
  auto j = to_json(s);
  CHECK(j["edges"][0] == nlohmann::json::array({"n0", "n2"}));
  CHECK(j["assignment"]["n3"] == 0);
  CHECK(plan_from_json(j) == s);
  auto unscheduled = testing::dag_plan({{1}, {}});
  CHECK(plan_from_json(to_json(unscheduled)) == unscheduled);
  j["edges"].push_back({"n0", "zz"});
  CHECK_THROWS_AS(plan_from_json(j), DataError);
}
