#include <doctest.h>

#include <atomic>
#include <thread>

#include "muse/api.hpp"
#include "session_model.hpp"
#include "testing.hpp"

using namespace muse;
using nlohmann::json;

namespace {

struct Harness {
  testing::TempDir dir;
  Engine engine{EngineConfig::load(testing::write_config(dir.path(), testing::fast_config(dir.path())))};
  SessionStore store{dir / "sessions"};
  Api api{engine, store};

  ApiResponse get(const std::string& path, std::map<std::string, std::string> query = {}) {
    return api.handle({"GET", path, std::move(query), ""});
  }
  ApiResponse post(const std::string& path, const json& body = json::object()) {
    return api.handle({"POST", path, {}, body.is_null() ? "" : body.dump()});
  }
  ApiResponse post_raw(const std::string& path, const std::string& body) { return api.handle({"POST", path, {}, body}); }

  std::string create(std::uint64_t seed = 7) {
    auto r = post("/sessions", {{"seed", seed}});
    REQUIRE(r.status == 201);
    return r.body["id"];
  }
};

Harness& harness() {
  static Harness h;
  return h;
}

std::string code_of(const ApiResponse& r) { return r.body.contains("error") ? r.body["error"]["code"] : ""; }

const json kProblem = {{"key_ingredient", "saffron"}, {"cuisines", {"spanish"}}, {"dish_type", "soup"}};
const json kSmall = {{"population_size", 20}, {"generations", 3}};

}  // namespace

TEST_CASE("full session walk-through") {
  auto& h = harness();
  auto id = h.create(11);
  auto base = "/sessions/" + id;

  auto s = h.get(base);
  CHECK(s.status == 200);
  CHECK(s.body["state"] == "problem_finding");
  CHECK(s.body["seed"] == 11);
  CHECK(s.body["engine_version"] == kEngineVersion);

  auto p = h.post(base + "/problem", kProblem);
  REQUIRE(p.status == 200);
  CHECK(p.body["problem"]["min_ingredients"] == h.engine.config().default_min_ingredients);

  auto g = h.post(base + "/generate", kSmall);
  REQUIRE(g.status == 200);
  CHECK(g.body["state"] == "generated");
  CHECK(g.body["seed"] == 11);
  const std::size_t total = g.body["candidate_count"];
  REQUIRE(total > 3);
  CHECK(g.body["top"].size() == std::min<std::size_t>(10, total));
  const auto& top = g.body["top"][0];
  CHECK(top["rank"] == 1);
  CHECK(top["ingredient_names"].size() == top["ingredients"].size());
  CHECK(top["scores"].contains("composite"));
  CHECK(top["reasoning"].contains("parents"));

  for (const char* sort : {"composite", "surprise", "pleasantness", "pairing"}) {
    auto c = h.get(base + "/candidates", {{"sort", sort}, {"limit", "5"}});
    REQUIRE(c.status == 200);
    CHECK(c.body["candidates"].size() == std::min<std::size_t>(5, total));
    CHECK(c.body["total"] == total);
    for (std::size_t i = 1; i < c.body["candidates"].size(); ++i)
      CHECK(c.body["candidates"][i - 1]["scores"][sort].get<double>() >=
            c.body["candidates"][i]["scores"][sort].get<double>());
  }
  CHECK(code_of(h.get(base + "/candidates", {{"sort", "taste"}})) == "bad_query");
  CHECK(code_of(h.get(base + "/candidates", {{"limit", "0"}})) == "bad_query");
  CHECK(code_of(h.get(base + "/candidates", {{"limit", "x"}})) == "bad_query");

  CHECK(code_of(h.get(base + "/plan")) == "invalid_state");
  CHECK(code_of(h.post(base + "/select", {{"candidate_id", "c99999"}})) == "unknown_candidate");
  CHECK(code_of(h.post(base + "/select", {{"candidate_id", 3}})) == "malformed_body");
  std::string chosen = top["id"];
  auto sel = h.post(base + "/select", {{"candidate_id", chosen}});
  REQUIRE(sel.status == 200);
  CHECK(sel.body["state"] == "selected");
  CHECK(sel.body["selection"] == chosen);
  CHECK(code_of(h.post(base + "/select", {{"candidate_id", chosen}})) == "invalid_state");

  CHECK(code_of(h.get(base + "/plan", {{"cooks", "0"}})) == "bad_query");
  CHECK(code_of(h.get(base + "/plan", {{"cooks", "65"}})) == "bad_query");
  auto plan = h.get(base + "/plan", {{"cooks", "2"}});
  REQUIRE(plan.status == 200);
  CHECK(plan.body["state"] == "planned");
  CHECK(plan.body["plan"]["cooks"] == 2);
  CHECK(plan.body["proportions"]["servings"] == 4.0);
  CHECK(plan.body["proportions"]["cuisine"] == "spanish");
  CHECK(plan.body["serial_sum"].get<double>() >= plan.body["plan"]["makespan"].get<double>());
  auto parsed = plan_from_json(plan.body["plan"]);
  CHECK_FALSE(check_plan(parsed).has_value());

  auto replan = h.get(base + "/plan", {{"cooks", "1"}});
  REQUIRE(replan.status == 200);
  CHECK(replan.body["plan"]["makespan"] == replan.body["serial_sum"]);
  auto stored = h.get(base);
  CHECK(stored.body["plan"]["cooks"] == 1);
  CHECK(stored.body["selection"] == chosen);

  CHECK(code_of(h.post(base + "/generate", kSmall)) == "invalid_state");
  CHECK(code_of(h.post(base + "/problem", kProblem)) == "invalid_state");
  auto reset = h.post(base + "/reset");
  REQUIRE(reset.status == 200);
  CHECK(reset.body["state"] == "problem_finding");
  CHECK(reset.body["candidate_count"] == 0);
  CHECK(reset.body["plan"].is_null());
  CHECK(reset.body["problem"]["key_ingredient"] == "saffron");
  CHECK(code_of(h.get(base + "/candidates")) == "no_candidates");
  auto again = h.post(base + "/generate", kSmall);
  CHECK(again.status == 200);
  CHECK(again.body["candidate_count"] == total);  // same seed, same problem
}

TEST_CASE("routing and validation errors") {
  auto& h = harness();
  auto id = h.create();
  auto base = "/sessions/" + id;
  CHECK(h.get("/nowhere").status == 404);
  CHECK(code_of(h.get("/nowhere")) == "unknown_route");
  CHECK(h.get("/sessions").status == 405);
  CHECK(h.post(base).status == 405);
  CHECK(code_of(h.post("/sessions/unknown123/reset")) == "unknown_session");
  CHECK(code_of(h.get("/sessions/unknown123")) == "unknown_session");
  CHECK(code_of(h.get("/sessions/unknown123/candidates")) == "unknown_session");
  CHECK(code_of(h.post_raw(base + "/problem", "{not json")) == "malformed_body");
  CHECK(code_of(h.post_raw(base + "/problem", "[1]")) == "malformed_body");
  CHECK(code_of(h.post_raw(base + "/problem", "")) == "malformed_body");
  CHECK(code_of(h.post_raw("/sessions", "{\"seed\": -1}")) == "malformed_body");
  CHECK(code_of(h.post(base + "/generate")) == "no_problem");

  auto bad = kProblem;
  bad["cuisines"] = {"martian"};
  CHECK(code_of(h.post(base + "/problem", bad)) == "invalid_problem");
  bad = kProblem;
  bad["key_ingredient"] = "unobtainium";
  CHECK(code_of(h.post(base + "/problem", bad)) == "invalid_problem");
  bad = kProblem;
  bad["min_ingredients"] = 8;
  bad["max_ingredients"] = 3;
  CHECK(code_of(h.post(base + "/problem", bad)) == "invalid_problem");
  bad["min_ingredients"] = -2;
  CHECK(h.post(base + "/problem", bad).status == 422);

  REQUIRE(h.post(base + "/problem", kProblem).status == 200);
  CHECK(h.post(base + "/generate", {{"population_size", 100000}}).status == 422);
  CHECK(h.post(base + "/generate", {{"mutation_rate", "high"}}).status == 422);
  CHECK(h.post(base + "/generate", {{"mutation_rate", 3.0}}).status == 422);

  for (const auto& r : {h.get("/nowhere"), h.get(base), h.post(base + "/generate", {{"population_size", 100000}})}) {
    CHECK(r.body.contains("engine_version"));
    CHECK(r.body.contains("seed"));
  }
}

TEST_CASE("ingredient choices and menus") {
  auto& h = harness();
  auto r = h.get("/ingredients", {{"suggest_for", "quiche"}});
  REQUIRE(r.status == 200);
  CHECK(r.body["dish_type"] == "quiche");
  CHECK(r.body["ingredients"].size() == 40);
  CHECK(r.body["ingredients"][0]["commonness"] == "common");
  CHECK(r.body["dish_types"].size() == 6);
  CHECK(r.body["cuisines"].size() == 5);
  CHECK(h.get("/ingredients").status == 200);
  CHECK(code_of(h.get("/ingredients", {{"suggest_for", "pie"}})) == "unknown_dish_type");

  auto m = h.get("/menus/suggest", {{"k", "3"}, {"seed", "4"}});
  REQUIRE(m.status == 200);
  CHECK(m.body["seeds"].size() == 3);
  CHECK(m.body["seed"] == 4);
  CHECK(m.body["variety"].get<double>() > 0.0);
  CHECK(code_of(h.get("/menus/suggest", {{"k", "1"}})) == "bad_query");
  CHECK(code_of(h.get("/menus/suggest", {{"k", "13"}})) == "bad_query");
  CHECK(code_of(h.get("/menus/suggest", {{"target", "lots"}})) == "bad_query");
}

TEST_CASE("concurrent mutations on one session") {
  auto& h = harness();
  auto id = h.create();
  auto base = "/sessions/" + id;
  REQUIRE(h.post(base + "/problem", kProblem).status == 200);
  const json heavy = {{"population_size", 400}, {"generations", 40}};
  std::atomic<int> go{0};
  std::vector<ApiResponse> results(6);
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < results.size(); ++t)
    threads.emplace_back([&, t] {
      ++go;
      while (go.load() < static_cast<int>(results.size())) std::this_thread::yield();
      results[t] = h.post(base + "/generate", heavy);
    });
  for (auto& th : threads) th.join();
  int ok = 0, busy = 0;
  for (const auto& r : results) {
    CHECK((r.status == 200 || r.status == 409));
    ok += r.status == 200;
    busy += code_of(r) == "session_busy";
  }
  CHECK(ok == 1);
  CHECK(busy >= 1);
  CHECK(h.get(base).body["state"] == "generated");
}

TEST_CASE("1000 random request sequences respect the state machine") {
  auto rep = testing::run_session_sequences(harness().api, 1000, 77);
  for (std::size_t i = 0; i < std::min<std::size_t>(rep.notes.size(), 10); ++i) MESSAGE(rep.notes[i]);
  CHECK(rep.sequences == 1000);
  CHECK(rep.server_errors == 0);
  CHECK(rep.invalid_transitions == 0);
  CHECK(rep.mismatches == 0);
}
