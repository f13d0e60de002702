#include <doctest.h>

#include "muse/catalog.hpp"
#include "testing.hpp"

using namespace muse;
using muse::testing::TempDir;
using muse::testing::write_file;

namespace {

const char* kCompounds =
    "compound_id,name,feature:a,feature:b,pleasantness\n"
    "c1,alpha,0.1,0.2,0.5\n"
    "c2,beta,0.3,0.4,\n"
    "c3,\"gamma, delta\",0.5,0.6,0.25\n";

const char* kProfiles =
    "ingredient_id,compound_id,ppm\n"
    "x,c1,10\n"
    "x,c2,\n"
    "y,c2,4\n"
    "z,c2,8\n"
    "y,c9,3\n";

}  // namespace

TEST_CASE("compound catalog loads features, labels and profiles") {
  TempDir dir;
  write_file(dir / "c.csv", kCompounds);
  write_file(dir / "p.csv", kProfiles);
  Warnings w;
  auto cat = load_compound_catalog(dir / "c.csv", dir / "p.csv", &w);
  CHECK(cat.descriptors == std::vector<std::string>{"a", "b"});
  REQUIRE(cat.compounds.size() == 3);
  CHECK(cat.find_compound("c3")->name == "gamma, delta");
  CHECK(cat.find_compound("c1")->rated_pleasantness == doctest::Approx(0.5));
  CHECK_FALSE(cat.find_compound("c2")->rated_pleasantness.has_value());
  CHECK(cat.labeled_compounds().size() == 2);

  SUBCASE("blank ppm takes the compound median") {
    // c2 known concentrations: 4, 8 -> median 6
    CHECK(cat.find_ingredient("x")->compound_profile.at("c2") == doctest::Approx(6.0));
  }
  SUBCASE("unknown compound rows are skipped with a warning") {
    CHECK(cat.find_ingredient("y")->compound_profile.count("c9") == 0);
    REQUIRE(w.size() == 1);
    CHECK(w[0].find("c9") != std::string::npos);
  }
  CHECK(cat.descriptor_index("b") == 1);
  CHECK_THROWS_AS(cat.descriptor_index("zzz"), NotFound);
}

TEST_CASE("labels outside [0,1] are min-max rescaled") {
  TempDir dir;
  write_file(dir / "c.csv",
             "compound_id,name,feature:a,feature:b,pleasantness\nc1,a,0,0,2\nc2,b,0,0,6\nc3,c,0,0,4\n");
  write_file(dir / "p.csv", "ingredient_id,compound_id,ppm\nonion,c1,10\n");
  auto cat = load_compound_catalog(dir / "c.csv", dir / "p.csv");
  CHECK(*cat.find_compound("c1")->rated_pleasantness == doctest::Approx(0.0));
  CHECK(*cat.find_compound("c2")->rated_pleasantness == doctest::Approx(1.0));
  CHECK(*cat.find_compound("c3")->rated_pleasantness == doctest::Approx(0.5));
}

TEST_CASE("malformed catalog rows fail with file and line") {
  TempDir dir;
  write_file(dir / "p.csv", "ingredient_id,compound_id,ppm\nonion,c1,10\n");
  SUBCASE("bad header") {
    write_file(dir / "c.csv", "id,name,a\nc1,x,1\n");
    CHECK_THROWS_AS(load_compound_catalog(dir / "c.csv", dir / "p.csv"), DataError);
  }
  SUBCASE("wrong field count") {
    write_file(dir / "c.csv", "compound_id,name,feature:a,pleasantness\nc1,x,1\n");
    try {
      load_compound_catalog(dir / "c.csv", dir / "p.csv");
      FAIL("expected DataError");
    } catch (const DataError& e) {
      CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }
  }
  SUBCASE("duplicate compound") {
    write_file(dir / "c.csv", "compound_id,name,feature:a,pleasantness\nc1,x,1,\nc1,y,2,\n");
    CHECK_THROWS_AS(load_compound_catalog(dir / "c.csv", dir / "p.csv"), DataError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_compound_catalog(dir / "nope.csv", dir / "p.csv"), DataError);
  }
  SUBCASE("empty files") {
    write_file(dir / "c.csv", "compound_id,name,feature:a,pleasantness\nc1,x,1,\n");
    write_file(dir / "empty.csv", "");
    CHECK_THROWS_AS(load_compound_catalog(dir / "empty.csv", dir / "p.csv"), DataError);
    CHECK_THROWS_AS(load_compound_catalog(dir / "c.csv", dir / "empty.csv"), DataError);
    write_file(dir / "header.csv", "ingredient_id,compound_id,ppm\n");
    CHECK_THROWS_AS(load_compound_catalog(dir / "c.csv", dir / "header.csv"), DataError);
  }
}

TEST_CASE("catalog save/load round trip") {
  TempDir dir;
  write_file(dir / "c.csv", kCompounds);
  write_file(dir / "p.csv", kProfiles);
  auto cat = load_compound_catalog(dir / "c.csv", dir / "p.csv");
  save_compound_catalog(cat, dir / "c2.csv", dir / "p2.csv");
  auto again = load_compound_catalog(dir / "c2.csv", dir / "p2.csv");
  CHECK(again == cat);
}

TEST_CASE("ingredient metadata merges into the catalog") {
  TempDir dir;
  write_file(dir / "c.csv", kCompounds);
  write_file(dir / "p.csv", kProfiles);
  write_file(dir / "i.csv",
             "ingredient_id,name,category,cuisines,seasons\n"
             "x,Red Onions,vegetable,spanish|french,all\n"
             "w,saffron,spice,spanish,\n");
  auto cat = load_compound_catalog(dir / "c.csv", dir / "p.csv");
  text::Singularizer s;
  load_ingredients(dir / "i.csv", cat, s);
  const auto* x = cat.find_ingredient("x");
  REQUIRE(x != nullptr);
  CHECK(x->name == "red onion");
  CHECK(x->category == Category::vegetable);
  CHECK(x->cuisines == std::set<std::string>{"french", "spanish"});
  CHECK(cat.find_by_name("red onion") == x);
  REQUIRE(cat.find_ingredient("w") != nullptr);
  CHECK(cat.find_ingredient("w")->compound_profile.empty());

  write_file(dir / "bad.csv", "ingredient_id,name,category,cuisines,seasons\nq,thing,mineral,,\n");
  CHECK_THROWS_AS(load_ingredients(dir / "bad.csv", cat, s), DataError);
}

TEST_CASE("cuisine table validates ids and weights") {
  TempDir dir;
  write_file(dir / "c.csv", kCompounds);
  write_file(dir / "p.csv", kProfiles);
  auto cat = load_compound_catalog(dir / "c.csv", dir / "p.csv");
  write_file(dir / "cz.csv", "cuisine_id,name,ingredient_id,typicality\nes,Spanish,x,0.9\nes,Spanish,y,0.2\n");
  auto table = CuisineTable::load(dir / "cz.csv", cat);
  CHECK(table.contains("es"));
  CHECK(table.typicality("es", "x") == doctest::Approx(0.9));
  CHECK(table.typicality("es", "z") == 0.0);
  CHECK(table.typicality("fr", "x") == 0.0);

  write_file(dir / "bad1.csv", "cuisine_id,name,ingredient_id,typicality\nes,Spanish,nope,0.5\n");
  CHECK_THROWS_AS(CuisineTable::load(dir / "bad1.csv", cat), DataError);
  write_file(dir / "bad2.csv", "cuisine_id,name,ingredient_id,typicality\nes,Spanish,x,1.5\n");
  CHECK_THROWS_AS(CuisineTable::load(dir / "bad2.csv", cat), DataError);
}

TEST_CASE("bundled fixture catalog") {
  Warnings w;
  auto cat = load_compound_catalog(testing::data_dir() / "compounds.csv",
                                   testing::data_dir() / "ingredient_compounds.csv", &w);
  text::Singularizer s;
  load_ingredients(testing::data_dir() / "ingredients.csv", cat, s, &w);
  CHECK(cat.ingredients.size() == 40);
  CHECK(cat.compounds.size() == 25);
  CHECK(cat.labeled_compounds().size() == 18);
  CHECK(cat.find_ingredient("saffron") != nullptr);
  CHECK(cat.find_by_name("olive oil")->id == "olive_oil");
}

TEST_CASE("csv line parsing") {
  CHECK(csv::parse_line("a,b,c") == std::vector<std::string>{"a", "b", "c"});
  CHECK(csv::parse_line("\"x, y\",z") == std::vector<std::string>{"x, y", "z"});
  CHECK(csv::parse_line("\"say \"\"hi\"\"\",") == std::vector<std::string>{"say \"hi\"", ""});
}
