#include <doctest.h>

#include <fstream>

#include "muse/catalog.hpp"
#include "muse/parser.hpp"
#include "parser_eval.hpp"
#include "testing.hpp"

using namespace muse;

namespace {

const Lexicons& lex() {
  static const Lexicons l = testing::bundled_lexicons();
  return l;
}

double as_double(const std::optional<Quantity>& q) { return boost::rational_cast<double>(*q); }

}  // namespace

TEST_CASE("quantity forms") {
  CHECK(*parse_quantity("2") == Quantity(2));
  CHECK(*parse_quantity("3/4") == Quantity(3, 4));
  CHECK(*parse_quantity("1 1/2") == Quantity(3, 2));
  CHECK(*parse_quantity("½") == Quantity(1, 2));
  CHECK(*parse_quantity("1½") == Quantity(3, 2));
  CHECK(*parse_quantity("2.25") == Quantity(9, 4));
  CHECK(*parse_quantity(".5") == Quantity(1, 2));
  CHECK(*parse_quantity("2-3") == Quantity(2));
  CHECK_FALSE(parse_quantity("0").has_value());
  CHECK_FALSE(parse_quantity("1/0").has_value());
  CHECK_FALSE(parse_quantity("abc").has_value());
  CHECK_FALSE(parse_quantity("").has_value());
  CHECK(format_quantity(Quantity(3, 2)) == "1 1/2");
  CHECK(format_quantity(Quantity(1, 4)) == "1/4");
  CHECK(format_quantity(Quantity(5)) == "5");
}

TEST_CASE("ingredient line grammar") {
  SUBCASE("full line") {
    LineDiagnostic d;
    auto p = parse_ingredient_line("1 1/2 cups chopped onions", lex(), &d);
    CHECK(*p.quantity == Quantity(3, 2));
    CHECK(p.unit == "cup");
    CHECK(p.state == "chopped");
    CHECK(p.name == "onion");
    CHECK(d.outcome == ParseOutcome::parsed);
  }
  SUBCASE("trailing states and parentheticals") {
    auto p = parse_ingredient_line("1 (14 oz) can diced tomatoes, drained", lex());
    CHECK(as_double(p.quantity) == 1.0);
    CHECK(p.unit == "can");
    CHECK(p.name == "tomato");
    CHECK(p.state == "diced drained");
  }
  SUBCASE("article counts only before a unit") {
    auto p = parse_ingredient_line("a pinch of saffron", lex());
    CHECK(as_double(p.quantity) == 1.0);
    CHECK(p.unit == "pinch");
    CHECK(p.name == "saffron");
    auto q = parse_ingredient_line("an egg", lex());
    CHECK_FALSE(q.quantity.has_value());
  }
  SUBCASE("range with words keeps the lower bound") {
    auto p = parse_ingredient_line("2 to 3 cloves garlic, minced", lex());
    CHECK(as_double(p.quantity) == 2.0);
    CHECK(p.unit == "clove");
    CHECK(p.name == "garlic");
  }
  SUBCASE("noise suffix") {
    auto p = parse_ingredient_line("Salt to taste", lex());
    CHECK_FALSE(p.quantity.has_value());
    CHECK(p.name == "salt");
  }
  SUBCASE("unit word that is the whole name is kept as name") {
    auto p = parse_ingredient_line("2 cloves", lex());
    CHECK(p.name == "clove");
    CHECK(p.unit.empty());
  }
  SUBCASE("unrecognized trailing clause is partial") {
    LineDiagnostic d;
    auto p = parse_ingredient_line("1 lemon, cut into wedges for the table", lex(), &d);
    CHECK(p.name == "lemon");
    CHECK(d.outcome == ParseOutcome::partial);
  }
  SUBCASE("no name falls back to the text") {
    LineDiagnostic d;
    auto p = parse_ingredient_line("3 (optional)", lex(), &d);
    CHECK(p.name == "3 (optional)");
    CHECK_FALSE(p.quantity.has_value());
    CHECK(d.reason == "no_name");
  }
  CHECK(render(parse_ingredient_line("1 1/2 cups chopped onions", lex())) == "1 1/2 cup chopped onion");
}

TEST_CASE("instruction extraction") {
  const std::vector<std::string> known = {"onion", "olive oil", "bell pepper", "egg", "milk"};
  SUBCASE("action, tool, mentions and duration") {
    auto s = parse_instruction("Fry the onion in the olive oil in a large skillet for 5 minutes.", known, lex());
    CHECK(s.action == "fry");
    CHECK(s.tool == "pan");
    CHECK(s.ingredient_mentions == std::vector<std::string>{"onion", "olive oil"});
    REQUIRE(s.duration.has_value());
    CHECK(*s.duration == doctest::Approx(5.0));
  }
  SUBCASE("plural mentions fold to known names") {
    auto s = parse_instruction("Whisk the eggs and milk in a bowl.", known, lex());
    CHECK(s.action == "mix");
    CHECK(s.tool == "bowl");
    CHECK(s.ingredient_mentions == std::vector<std::string>{"egg", "milk"});
  }
  SUBCASE("head noun fallback") {
    auto s = parse_instruction("Slice the peppers.", known, lex());
    CHECK(s.ingredient_mentions == std::vector<std::string>{"bell pepper"});
  }
  SUBCASE("duration ranges take the upper bound and hours convert") {
    CHECK(*parse_instruction("Simmer for 10 to 15 minutes.", known, lex()).duration == doctest::Approx(15.0));
    CHECK(*parse_instruction("Bake for 1 hour.", known, lex()).duration == doctest::Approx(60.0));
    CHECK(*parse_instruction("Roast for 1 hour 30 minutes.", known, lex()).duration == doctest::Approx(90.0));
  }
  SUBCASE("no verb") {
    LineDiagnostic d;
    auto s = parse_instruction("Onion goes here.", known, lex(), &d);
    CHECK(s.action == "unknown");
    CHECK(d.reason == "no_verb");
  }
}

TEST_CASE("sentence splitting") {
  auto s = split_sentences("Chop the onion. Fry it for 2.5 minutes! Serve.");
  REQUIRE(s.size() == 3);
  CHECK(s[1] == "Fry it for 2.5 minutes!");
}

TEST_CASE("linking steps into a dataflow graph") {
  std::map<std::string, std::string> ids = {{"onion", "onion"}, {"butter", "butter"}, {"egg", "egg"}};
  std::vector<StepCandidate> c(6);
  c[0] = {"heat", "oven", {}, std::nullopt, ""};
  c[1] = {"cut", "", {"onion"}, std::nullopt, ""};
  c[2] = {"fry", "pan", {"onion", "butter"}, 5.0, ""};
  c[3] = {"mix", "bowl", {"egg"}, std::nullopt, ""};
  c[4] = {"bake", "oven", {}, 30.0, ""};
  c[5] = {"serve", "", {"ghost"}, std::nullopt, ""};
  ParseDiagnostics diag;
  auto steps = link_steps(c, ids, &diag);
  REQUIRE(steps.size() == 5);
  CHECK(steps[0].action == "cut");
  CHECK(steps[0].inputs == std::vector<std::string>{"onion"});
  CHECK(steps[1].inputs == std::vector<std::string>{"s1", "butter"});
  CHECK(steps[2].inputs == std::vector<std::string>{"egg"});
  CHECK(steps[3].inputs == std::vector<std::string>{"s2", "s3"});
  CHECK(steps[3].output == "s4");
  CHECK(steps[4].inputs == std::vector<std::string>{"s4"});
  REQUIRE(diag.entries.size() == 2);
  CHECK(diag.entries[0].reason == "no_inputs");
  CHECK(diag.entries[0].line == 1);
  CHECK(diag.entries[1].reason == "unmatched_mention");
  CHECK(diag.entries[1].line == 6);
}

TEST_CASE("quiche document parses into the expected step order") {
  auto catalog = load_compound_catalog(testing::data_dir() / "compounds.csv",
                                       testing::data_dir() / "ingredient_compounds.csv");
  load_ingredients(testing::data_dir() / "ingredients.csv", catalog, lex().singular);
  auto rows = testing::read_rows(testing::data_dir() / "parse_corpus.jsonl");
  REQUIRE(rows.size() == 20);

  auto document = [](const nlohmann::json& j) {
    RecipeDocument d;
    d.id = j.at("id");
    d.title = j.at("title");
    d.dish_type = j.at("dish_type");
    d.cuisine = j.at("cuisine");
    d.ingredient_lines = j.at("ingredient_lines").get<std::vector<std::string>>();
    d.instruction_lines = j.at("instruction_lines").get<std::vector<std::string>>();
    return d;
  };

  auto parsed = parse_recipe(document(rows[0]), lex(), &catalog);
  const auto& r = parsed.recipe;
  CHECK(r.ingredients.size() == 9);
  CHECK(r.contains("mushroom"));
  CHECK(r.contains("salt"));
  std::vector<std::string> actions;
  for (const auto& s : r.steps) actions.push_back(s.action);
  CHECK(actions ==
        std::vector<std::string>{"cut", "fry", "mix", "roll", "sprinkle", "assemble", "bake", "cool"});
  // bake consumes the assembled quiche and cooling follows baking
  CHECK(r.steps[6].inputs == std::vector<std::string>{"s6"});
  CHECK(r.steps[7].inputs == std::vector<std::string>{"s7"});
  CHECK(r.steps[5].inputs == std::vector<std::string>{"s3", "s5"});

  std::size_t lines = 0, partial = 0;
  for (const auto& row : rows) {
    auto p = parse_recipe(document(row), lex(), &catalog);
    CHECK_FALSE(p.recipe.steps.empty());
    lines += p.diagnostics.entries.size();
    partial += p.diagnostics.count(ParseOutcome::partial);
    for (const auto& ri : p.recipe.ingredients) CHECK_MESSAGE(catalog.find_ingredient(ri.id), ri.id);
  }
  CHECK(lines > 200);
  CHECK(partial == 0);
}

TEST_CASE("empty ingredient block is a data error") {
  RecipeDocument d;
  d.instruction_lines = {"Boil."};
  CHECK_THROWS_AS(parse_recipe(d, lex()), DataError);
}

TEST_CASE("bundled labeled sets") {
  auto ing = testing::ingredient_line_accuracy(testing::data_dir() / "eval" / "ingredient_lines.jsonl", lex());
  auto ins = testing::instruction_accuracy(testing::data_dir() / "eval" / "instructions.jsonl", lex());
  CHECK(ing.total == 400);
  CHECK(ins.total == 200);
  for (const auto& m : ing.misses) MESSAGE("ingredient miss: " << m);
  for (const auto& m : ins.misses) MESSAGE("instruction miss: " << m);
  CHECK(ing.rate() >= 0.95);
  CHECK(ins.rate() >= 0.80);
}
