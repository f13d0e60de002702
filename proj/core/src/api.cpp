#include "muse/api.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

namespace muse {

namespace {

constexpr std::size_t kMaxCooks = 64;
constexpr std::size_t kDefaultLimit = 10;

struct ApiError {
  int status;
  std::string code;
  std::string message;
};

[[noreturn]] void fail(int status, std::string code, std::string message) {
  throw ApiError{status, std::move(code), std::move(message)};
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : path.substr(0, path.find('?'))) {
    if (c == '/') {
      if (!cur.empty()) parts.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) parts.push_back(std::move(cur));
  return parts;
}

nlohmann::json parse_body(const ApiRequest& request, bool required) {
  if (request.body.empty() || request.body.find_first_not_of(" \t\r\n") == std::string::npos) {
    if (required) fail(422, "malformed_body", "request body is required");
    return nlohmann::json::object();
  }
  auto j = nlohmann::json::parse(request.body, nullptr, false);
  if (j.is_discarded()) fail(422, "malformed_body", "request body is not valid JSON");
  if (!j.is_object()) fail(422, "malformed_body", "request body must be a JSON object");
  return j;
}

std::optional<std::uint64_t> query_uint(const ApiRequest& request, const std::string& key) {
  auto it = request.query.find(key);
  if (it == request.query.end()) return std::nullopt;
  const auto& v = it->second;
  if (v.empty() || v.size() > 18 || !std::all_of(v.begin(), v.end(), [](char c) { return c >= '0' && c <= '9'; }))
    fail(422, "bad_query", "query parameter '" + key + "' must be a non-negative integer");
  return std::stoull(v);
}

std::optional<double> query_double(const ApiRequest& request, const std::string& key) {
  auto it = request.query.find(key);
  if (it == request.query.end()) return std::nullopt;
  try {
    std::size_t used = 0;
    double d = std::stod(it->second, &used);
    if (used == it->second.size() && std::isfinite(d)) return d;
  } catch (const std::exception&) {
  }
  fail(422, "bad_query", "query parameter '" + key + "' must be a number");
}

template <typename T>
void override_field(const nlohmann::json& body, const char* key, T& into) {
  auto it = body.find(key);
  if (it == body.end() || it->is_null()) return;
  if (!it->is_number()) fail(422, "malformed_body", std::string("'") + key + "' must be a number");
  if constexpr (std::is_unsigned_v<T>) {
    if (!it->is_number_unsigned()) fail(422, "malformed_body", std::string("'") + key + "' must be a non-negative integer");
  }
  into = it->get<T>();
}

nlohmann::json session_view(const Session& s) {
  return {{"id", s.id},
          {"state", to_string(s.state)},
          {"problem", s.problem ? to_json(*s.problem) : nlohmann::json()},
          {"candidate_count", s.candidates.size()},
          {"selection", s.selection ? nlohmann::json(*s.selection) : nlohmann::json()},
          {"proportions", s.proportions ? to_json(*s.proportions) : nlohmann::json()},
          {"plan", s.plan ? to_json(*s.plan) : nlohmann::json()},
          {"created", s.created},
          {"updated", s.updated},
          {"seed", s.seed}};
}

nlohmann::json candidate_view(const RankedCandidate& c, const CompoundCatalog& catalog) {
  nlohmann::json names = nlohmann::json::array();
  for (const auto& id : c.candidate.ingredients) {
    const auto* ing = catalog.find_ingredient(id);
    names.push_back(ing ? ing->name : id);
  }
  nlohmann::json muts = nlohmann::json::array();
  for (const auto& m : c.candidate.mutations) muts.push_back({{"from", m.from}, {"to", m.to}});
  return {{"id", c.candidate.id},
          {"rank", c.rank},
          {"ingredients", c.candidate.ingredients},
          {"ingredient_names", std::move(names)},
          {"scores",
           {{"surprise", c.surprise}, {"pleasantness", c.pleasantness}, {"pairing", c.pairing}, {"composite", c.composite}}},
          {"reasoning",
           {{"generation", c.candidate.generation}, {"parents", c.candidate.parents}, {"mutations", std::move(muts)}}}};
}

}  // namespace

Api::Api(const Engine& engine, SessionStore& store) : engine_(engine), store_(store) {}

std::shared_ptr<std::mutex> Api::session_lock(const std::string& id) {
  std::lock_guard guard(locks_mutex_);
  auto& slot = locks_[id];
  if (!slot) slot = std::make_shared<std::mutex>();
  return slot;
}

ApiResponse Api::handle(const ApiRequest& request) {
  ApiResponse response;
  auto error = [&](int status, const std::string& code, const std::string& message) {
    response.status = status;
    response.body = {{"error", {{"code", code}, {"message", message}}}};
  };
  try {
    response = dispatch(request);
  } catch (const ApiError& e) {
    error(e.status, e.code, e.message);
  } catch (const NotFound& e) {
    error(404, "not_found", e.what());
  } catch (const StateConflict& e) {
    error(409, e.reason(), e.what());
  } catch (const InvalidArgument& e) {
    error(422, "invalid_argument", e.what());
  } catch (const DataError& e) {
    error(422, "data_error", e.what());
  } catch (const nlohmann::json::exception& e) {
    error(422, "malformed_body", e.what());
  } catch (const std::exception& e) {
    error(500, "internal", e.what());
  }
  if (!response.body.is_object()) response.body = {{"result", response.body}};
  response.body["engine_version"] = kEngineVersion;
  if (!response.body.contains("seed")) response.body["seed"] = nullptr;
  return response;
}

ApiResponse Api::dispatch(const ApiRequest& request) {
  const auto parts = split_path(request.path);
  const auto& m = request.method;
  auto method_check = [&](const char* want) {
    if (m != want) fail(405, "method_not_allowed", m + " is not allowed on " + request.path);
  };

  if (parts.size() == 1 && parts[0] == "sessions") {
    method_check("POST");
    return create_session(request);
  }
  if (parts.size() == 1 && parts[0] == "ingredients") {
    method_check("GET");
    return ingredients(request);
  }
  if (parts.size() == 2 && parts[0] == "menus" && parts[1] == "suggest") {
    method_check("GET");
    return suggest_menu(request);
  }
  if (parts.size() >= 2 && parts[0] == "sessions") {
    const auto& id = parts[1];
    if (parts.size() == 2) {
      method_check("GET");
      return get_session(id);
    }
    if (parts.size() == 3) {
      const auto& op = parts[2];
      if (op == "candidates") {
        method_check("GET");
        return list_candidates(id, request);
      }
      if (op == "problem" || op == "generate" || op == "select" || op == "reset" || op == "plan") {
        method_check(op == "plan" ? "GET" : "POST");
        if (!store_.exists(id)) fail(404, "unknown_session", "unknown session '" + id + "'");
        auto lock = session_lock(id);
        std::unique_lock guard(*lock, std::try_to_lock);
        if (!guard.owns_lock()) fail(409, "session_busy", "another request is modifying session '" + id + "'");
        if (op == "problem") return set_problem(id, request);
        if (op == "generate") return run_generate(id, request);
        if (op == "select") return select(id, request);
        if (op == "plan") return make_plan(id, request);
        return reset(id);
      }
    }
  }
  fail(404, "unknown_route", "no route for " + m + " " + request.path);
}

ApiResponse Api::create_session(const ApiRequest& request) {
  auto body = parse_body(request, false);
  Session s;
  override_field(body, "seed", s.seed);
  {
    std::lock_guard guard(id_mutex_);
    auto micros = std::chrono::duration_cast<std::chrono::microseconds>(
                      std::chrono::system_clock::now().time_since_epoch())
                      .count();
    do {
      char buf[48];
      std::snprintf(buf, sizeof buf, "s%012llx%04llx", static_cast<unsigned long long>(micros),
                    static_cast<unsigned long long>(next_id_++ & 0xffff));
      s.id = buf;
    } while (store_.exists(s.id));
    s.created = s.updated = utc_timestamp();
    store_.save(s);
  }
  return {201, session_view(s)};
}

ApiResponse Api::get_session(const std::string& id) {
  if (!store_.exists(id)) fail(404, "unknown_session", "unknown session '" + id + "'");
  return {200, session_view(store_.load(id))};
}

ApiResponse Api::ingredients(const ApiRequest& request) {
  std::string dish;
  if (auto it = request.query.find("suggest_for"); it != request.query.end()) dish = it->second;
  std::vector<Engine::IngredientChoice> choices;
  try {
    choices = engine_.ingredient_choices(dish);
  } catch (const NotFound& e) {
    fail(404, "unknown_dish_type", e.what());
  }
  nlohmann::json items = nlohmann::json::array();
  for (const auto& c : choices)
    items.push_back({{"id", c.id},
                     {"name", c.name},
                     {"category", to_string(c.category)},
                     {"count", c.count},
                     {"quartile", c.quartile},
                     {"commonness", c.commonness}});
  nlohmann::json cuisines = nlohmann::json::array();
  for (const auto& [cid, c] : engine_.cuisines().all()) cuisines.push_back({{"id", cid}, {"name", c.name}});
  return {200,
          {{"dish_type", dish},
           {"ingredients", std::move(items)},
           {"dish_types", engine_.dish_types()},
           {"cuisines", std::move(cuisines)}}};
}

ApiResponse Api::set_problem(const std::string& id, const ApiRequest& request) {
  auto body = parse_body(request, true);
  auto s = store_.load(id);
  if (s.state != SessionState::problem_finding)
    fail(409, "invalid_state", "problem can only be set in problem_finding (session is " +
                                   std::string(to_string(s.state)) + "); reset first");
  if (!body.contains("min_ingredients")) body["min_ingredients"] = engine_.config().default_min_ingredients;
  if (!body.contains("max_ingredients")) body["max_ingredients"] = engine_.config().default_max_ingredients;
  for (const char* key : {"min_ingredients", "max_ingredients"})
    if (!body[key].is_number_unsigned()) fail(422, "malformed_body", std::string("'") + key + "' must be a non-negative integer");
  DesignProblem problem;
  try {
    problem = design_problem_from_json(body);
    validate(problem, engine_.catalog());
  } catch (const InvalidArgument& e) {
    fail(422, "invalid_problem", e.what());
  }
  for (const auto& c : problem.cuisines)
    if (!engine_.cuisines().contains(c)) fail(422, "invalid_problem", "unknown cuisine '" + c + "'");
  s.problem = problem;
  s.updated = utc_timestamp();
  store_.save(s);
  return {200, session_view(s)};
}

ApiResponse Api::run_generate(const std::string& id, const ApiRequest& request) {
  auto body = parse_body(request, false);
  auto s = store_.load(id);
  if (!s.problem) fail(409, "no_problem", "set a design problem before generating");
  if (!transition_allowed(s.state, SessionState::generated))
    fail(409, "invalid_state", "cannot generate in state " + std::string(to_string(s.state)) + "; reset first");

  GenerationConfig config = engine_.config().generation;
  config.seed = s.seed;
  override_field(body, "seed", config.seed);
  override_field(body, "population_size", config.population_size);
  override_field(body, "generations", config.generations);
  override_field(body, "mutation_rate", config.mutation_rate);
  override_field(body, "crossover_rate", config.crossover_rate);
  override_field(body, "output_cap", config.output_cap);
  if (config.population_size > 5000 || config.generations > 1000)
    fail(422, "invalid_argument", "population_size or generations too large");

  Warnings warnings;
  auto set = engine_.generate(*s.problem, config, &warnings);
  auto ranked = engine_.assess(set.candidates, engine_.config().weights, s.problem->dish_type, &warnings);

  s.seed = config.seed;
  s.candidates = std::move(ranked);
  s.selection.reset();
  s.proportions.reset();
  s.plan.reset();
  transition(s, SessionState::generated);
  s.updated = utc_timestamp();
  store_.save(s);

  nlohmann::json top = nlohmann::json::array();
  for (std::size_t i = 0; i < std::min(kDefaultLimit, s.candidates.size()); ++i)
    top.push_back(candidate_view(s.candidates[i], engine_.catalog()));
  return {200,
          {{"session_id", s.id},
           {"state", to_string(s.state)},
           {"candidate_count", s.candidates.size()},
           {"top", std::move(top)},
           {"stats",
            {{"individuals_evaluated", set.stats.individuals_evaluated},
             {"duplicates_removed", set.stats.duplicates_removed},
             {"corpus_matches_removed", set.stats.corpus_matches_removed},
             {"capped", set.stats.capped}}},
           {"warnings", warnings},
           {"seed", s.seed}}};
}

ApiResponse Api::list_candidates(const std::string& id, const ApiRequest& request) {
  if (!store_.exists(id)) fail(404, "unknown_session", "unknown session '" + id + "'");
  auto s = store_.load(id);
  std::string sort = "composite";
  if (auto it = request.query.find("sort"); it != request.query.end()) sort = it->second;
  double RankedCandidate::*key = nullptr;
  if (sort == "composite") key = &RankedCandidate::composite;
  else if (sort == "surprise") key = &RankedCandidate::surprise;
  else if (sort == "pleasantness") key = &RankedCandidate::pleasantness;
  else if (sort == "pairing") key = &RankedCandidate::pairing;
  else fail(422, "bad_query", "sort must be composite, surprise, pleasantness or pairing");
  const auto limit = query_uint(request, "limit").value_or(kDefaultLimit);
  if (limit < 1) fail(422, "bad_query", "limit must be at least 1");
  if (s.state == SessionState::problem_finding) fail(409, "no_candidates", "session has not generated candidates");

  std::vector<const RankedCandidate*> order;
  for (const auto& c : s.candidates) order.push_back(&c);
  if (sort != "composite")
    std::stable_sort(order.begin(), order.end(), [key](const auto* a, const auto* b) {
      if (a->*key != b->*key) return a->*key > b->*key;
      return a->rank < b->rank;
    });
  nlohmann::json items = nlohmann::json::array();
  for (std::size_t i = 0; i < std::min<std::size_t>(limit, order.size()); ++i)
    items.push_back(candidate_view(*order[i], engine_.catalog()));
  return {200,
          {{"session_id", s.id}, {"sort", sort}, {"total", s.candidates.size()}, {"candidates", std::move(items)},
           {"seed", s.seed}}};
}

ApiResponse Api::select(const std::string& id, const ApiRequest& request) {
  auto body = parse_body(request, true);
  auto it = body.find("candidate_id");
  if (it == body.end() || !it->is_string()) fail(422, "malformed_body", "'candidate_id' must be a string");
  auto s = store_.load(id);
  if (s.state != SessionState::generated)
    fail(409, "invalid_state", "select requires state generated (session is " + std::string(to_string(s.state)) + ")");
  const auto candidate_id = it->get<std::string>();
  if (s.find_candidate(candidate_id) == nullptr)
    fail(404, "unknown_candidate", "session has no candidate '" + candidate_id + "'");
  s.selection = candidate_id;
  transition(s, SessionState::selected);
  s.updated = utc_timestamp();
  store_.save(s);
  return {200, session_view(s)};
}

ApiResponse Api::make_plan(const std::string& id, const ApiRequest& request) {
  const auto cooks = query_uint(request, "cooks").value_or(1);
  if (cooks < 1 || cooks > kMaxCooks) fail(422, "bad_query", "cooks must be between 1 and 64");
  auto s = store_.load(id);
  if (!transition_allowed(s.state, SessionState::planned) || !s.selection)
    fail(409, "invalid_state", "plan requires a selected candidate (session is " + std::string(to_string(s.state)) + ")");
  const auto* chosen = s.find_candidate(*s.selection);
  Warnings warnings;
  auto result = engine_.plan(chosen->candidate.ingredients, s.problem ? s.problem->dish_type : std::string{}, cooks,
                             &warnings);
  result.proportions.id = chosen->candidate.id;
  if (s.problem && s.problem->cuisines.size() == 1) result.proportions.cuisine = *s.problem->cuisines.begin();
  s.proportions = result.proportions;
  s.plan = result.plan;
  transition(s, SessionState::planned);
  s.updated = utc_timestamp();
  store_.save(s);
  return {200,
          {{"session_id", s.id},
           {"state", to_string(s.state)},
           {"proportions", to_json(result.proportions)},
           {"plan", to_json(result.plan)},
           {"serial_sum", result.plan.serial_sum()},
           {"critical_path", result.plan.critical_path()},
           {"warnings", warnings},
           {"seed", s.seed}}};
}

ApiResponse Api::reset(const std::string& id) {
  auto s = store_.load(id);
  transition(s, SessionState::problem_finding);
  s.candidates.clear();
  s.selection.reset();
  s.proportions.reset();
  s.plan.reset();
  s.updated = utc_timestamp();
  store_.save(s);
  return {200, session_view(s)};
}

ApiResponse Api::suggest_menu(const ApiRequest& request) {
  const auto k = query_uint(request, "k").value_or(3);
  if (k < 2 || k > 12) fail(422, "bad_query", "k must be between 2 and 12");
  const auto target = query_double(request, "target").value_or(0.0);
  const auto seed = query_uint(request, "seed").value_or(engine_.config().generation.seed);
  Warnings warnings;
  MenuSuggestion menu;
  try {
    menu = engine_.menu(k, target, seed, &warnings);
  } catch (const InvalidArgument& e) {
    fail(422, "invalid_argument", e.what());
  }
  nlohmann::json seeds = nlohmann::json::array();
  for (const auto& m : menu.seeds)
    seeds.push_back({{"problem", to_json(m.problem)}, {"exemplar_id", m.exemplar_id}, {"spanning", m.spanning}});
  return {200, {{"k", k}, {"variety", menu.variety}, {"seeds", std::move(seeds)}, {"warnings", warnings}, {"seed", seed}}};
}

}  // namespace muse
