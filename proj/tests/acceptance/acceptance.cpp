// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "fixtures.hpp"
#include "muse/api.hpp"
#include "muse/design.hpp"
#include "muse/engine.hpp"
#include "muse/surprise.hpp"
#include "oracles.hpp"
#include "parser_eval.hpp"
#include "session_model.hpp"
#include "testing.hpp"

using namespace muse;
namespace fs = std::filesystem;
using boost::multiprecision::cpp_int;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  std::function<Outcome()> run;
};

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << v;
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SurpriseModel model_of(const std::map<std::string, double>& alpha, double unseen) {
  SurpriseModel m;
  m.alpha = alpha;
  m.unseen_mass = unseen;
  m.alpha0 = unseen;
  for (const auto& [id, a] : alpha) m.alpha0 += a;
  return m;
}

/// Prior and posterior Dirichlet parameters for a recipe, unseen component last.
std::pair<std::vector<double>, std::vector<double>> dirichlet_update(const SurpriseModel& m,
                                                                     const std::vector<std::string>& recipe) {
  std::set<std::string> touched(recipe.begin(), recipe.end());
  std::vector<double> prior, post;
  double unknown = 0.0;
  for (const auto& id : touched)
    if (!m.alpha.count(id)) unknown += 1.0;
  for (const auto& [id, a] : m.alpha) {
    prior.push_back(a);
    post.push_back(a + (touched.count(id) ? 1.0 : 0.0));
  }
  prior.push_back(m.unseen_mass);
  post.push_back(m.unseen_mass + unknown);
  return {prior, post};
}

Outcome surprise_closed_form() {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> pseudo(0.1, 10.0);
  std::uniform_int_distribution<int> vocab(1, 4);
  double worst_marginal = 0.0, worst_direct = 0.0;
  std::size_t direct_cases = 0;
  const auto t0 = std::chrono::steady_clock::now();
  for (int t = 0; t < 100; ++t) {
    std::map<std::string, double> alpha;
    const int n = vocab(rng);
    for (int i = 0; i < n; ++i) alpha["v" + std::to_string(i)] = pseudo(rng);
    auto m = model_of(alpha, pseudo(rng));
    std::vector<std::string> recipe;
    for (int i = 0; i < n; ++i)
      if (rng() % 2) recipe.push_back("v" + std::to_string(i));
    if (rng() % 3 == 0) recipe.push_back("unseen");
    if (recipe.empty()) recipe.push_back("v0");

    const double closed = bayesian_surprise(m, recipe);
    auto [prior, post] = dirichlet_update(m, recipe);
    worst_marginal = std::max(worst_marginal, std::abs(closed - oracle::dirichlet_kl_by_marginals(post, prior)));
    if (prior.size() == 2) {
      ++direct_cases;
      const double direct = oracle::beta_kl_direct(post[0], post[1], prior[0], prior[1]);
      worst_direct = std::max(worst_direct, std::abs(closed - direct));
    }
  }
  const double secs = seconds_since(t0);
  const bool pass = worst_marginal <= 1e-6 && worst_direct <= 1e-6 && direct_cases > 0 && secs < 10.0;
  return {pass, "100 cases, max |err| " + fmt(worst_marginal) + " vs marginal quadrature, " + fmt(worst_direct) +
                    " vs direct Beta integration over " + std::to_string(direct_cases) +
                    " two-component cases (tol 1e-6), " + fmt(secs) + " s (limit 10 s)"};
}

Outcome surprise_axioms() {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> pseudo(0.01, 100.0);
  bool zero_ok = true;
  std::size_t negatives = 0;
  for (int t = 0; t < 1000; ++t) {
    std::map<std::string, double> alpha;
    const int n = 2 + static_cast<int>(rng() % 29);
    for (int i = 0; i < n; ++i) alpha["v" + std::to_string(i)] = pseudo(rng);
    auto m = model_of(alpha, pseudo(rng) / 10.0);
    if (bayesian_surprise(m, std::vector<std::string>{}) != 0.0) zero_ok = false;
    std::vector<std::string> recipe;
    for (int i = 0; i < n; ++i)
      if (rng() % 3 == 0) recipe.push_back("v" + std::to_string(i));
    for (int u = static_cast<int>(rng() % 3); u > 0; --u) recipe.push_back("new" + std::to_string(u));
    if (bayesian_surprise(m, recipe) < 0.0) ++negatives;
  }

  // skewed prior: pseudo-counts fall geometrically, so rarity order is the reverse of id order
  std::map<std::string, double> skewed;
  std::vector<std::string> ids;
  for (int i = 0; i < 12; ++i) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "r%02d", i);
    ids.push_back(buf);
    skewed[buf] = 1000.0 * std::pow(0.5, i);
  }
  auto m = model_of(skewed, 0.1);
  std::vector<double> s;
  for (const auto& id : ids) s.push_back(bayesian_surprise(m, std::vector<std::string>{id}));
  std::vector<std::size_t> by_surprise(ids.size()), by_rarity(ids.size());
  std::iota(by_surprise.begin(), by_surprise.end(), 0);
  std::iota(by_rarity.begin(), by_rarity.end(), 0);
  std::sort(by_surprise.begin(), by_surprise.end(), [&](auto a, auto b) { return s[a] < s[b]; });
  std::sort(by_rarity.begin(), by_rarity.end(),
            [&](auto a, auto b) { return skewed.at(ids[a]) > skewed.at(ids[b]); });
  const bool monotone = by_surprise == by_rarity;
  return {zero_ok && negatives == 0 && monotone,
          std::string("zero update ") + (zero_ok ? "exactly 0" : "nonzero") + ", " + std::to_string(negatives) +
              " negative of 1000 random pairs, rarity argsort " + (monotone ? "matches" : "differs")};
}

Outcome design_space() {
  auto cat = testing::catalog_of_size(1000);
  DesignProblem p;
  p.key_ingredient = "i0";
  p.cuisines = {"any"};
  p.min_ingredients = 1;
  p.max_ingredients = 12;
  const auto t0 = std::chrono::steady_clock::now();
  auto space = estimate_design_space(cat, p);
  const double secs = seconds_since(t0);
  std::vector<cpp_int> row(13, 0);
  row[0] = 1;
  for (int n = 1; n <= 999; ++n)
    for (int k = std::min(n, 12); k >= 1; --k) row[k] += row[k - 1];
  cpp_int pascal = 0;
  for (int k = 0; k <= 11; ++k) pascal += row[k];
  const bool pass = space > cpp_int("1000000000000000000000000") && space == pascal && secs < 1.0;
  return {pass, "1000 ingredients, up to 12 per recipe: " + space.str() + " (> 1e24, " +
                    (space == pascal ? "matches" : "differs from") + " Pascal recurrence), " + fmt(secs) +
                    " s (limit 1 s)"};
}

Outcome lda_recovery() {
  auto planted = testing::planted_topics(17);
  LdaOptions opt;
  opt.topics = 3;
  opt.hyper_alpha = 0.3;
  opt.hyper_beta = 0.01;
  opt.iterations = 300;
  opt.seed = 7;
  const auto t0 = std::chrono::steady_clock::now();
  auto m = fit_lda(planted.docs, opt);
  const double secs = seconds_since(t0);
  if (m.vocab != planted.vocab) return {false, "vocabulary order differs from the planted one"};
  auto tv = oracle::greedy_topic_match(planted.phi, m.phi);
  const double worst = *std::max_element(tv.begin(), tv.end());
  return {worst <= 0.15 && secs < 60.0, "3 planted topics, 500 docs: worst TV " + fmt(worst) + " (tol 0.15), " +
                                            fmt(secs) + " s (limit 60 s)"};
}

Outcome spanning_variety() {
  auto hand = [](std::vector<std::vector<double>> phi, std::vector<double> marginal) {
    TopicModel m;
    m.topics = phi.size();
    m.vocab = {"a", "b"};
    m.phi = std::move(phi);
    m.topic_marginal = std::move(marginal);
    return m;
  };
  double err = 0.0;
  auto even = hand({{0.5, 0.5}, {0.5, 0.5}}, {0.5, 0.5});
  for (double v : spanning_vector(even, {"a", "b"})) err = std::max(err, std::abs(v - 0.75));
  auto skew = hand({{0.8, 0.2}, {0.3, 0.7}}, {0.6, 0.4});
  auto post = topic_posterior(skew, "a");
  auto single = spanning_vector(skew, {"a"});
  for (std::size_t i = 0; i < post.size(); ++i) err = std::max(err, std::abs(single[i] - post[i]));
  err = std::max(err, std::abs(post[0] - 0.8));

  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double variety_err = 0.0, dup = 0.0;
  for (int t = 0; t < 50; ++t) {
    std::vector<std::vector<double>> vs(4, std::vector<double>(8));
    for (auto& v : vs)
      for (auto& x : v) x = u(rng);
    variety_err = std::max(variety_err, std::abs(menu_variety(vs) - oracle::pairwise_distances(vs).mean));
    dup = std::max(dup, menu_variety(std::vector<std::vector<double>>(4, vs[0])));
  }
  return {err <= 1e-12 && variety_err <= 1e-12 && dup == 0.0,
          "hand spanning cases err " + fmt(err) + ", K=4 variety vs pair enumeration err " + fmt(variety_err) +
              " over 50 menus (tol 1e-12), duplicated menu variety " + fmt(dup)};
}

Outcome pleasantness_recovery() {
  const auto t0 = std::chrono::steady_clock::now();
  double noiseless_cv = 0.0;
  for (auto mode : {CvMode::ten_fold, CvMode::leave_one_out})
    noiseless_cv = std::max(noiseless_cv, fit_pleasantness(testing::planted_regression(70, 0.0, 3), mode, nullptr, 9).cv_error);
  bool all_selected = true;
  double worst_rmse = 0.0;
  for (std::uint64_t seed : {4, 5, 6}) {
    auto m = fit_pleasantness(testing::planted_regression(70, 0.05, seed), CvMode::ten_fold, nullptr, seed);
    std::set<std::string> chosen(m.selected_features.begin(), m.selected_features.end());
    for (const auto& [name, beta] : testing::planted_coefficients())
      if (!chosen.count(name)) all_selected = false;
    worst_rmse = std::max(worst_rmse, testing::coefficient_rmse(m));
  }
  const double secs = seconds_since(t0);
  return {all_selected && worst_rmse <= 0.1 && noiseless_cv <= 1e-9 && secs < 30.0,
          std::string("70x20 design, 5 true features, sigma 0.05 over 3 seeds: true features ") +
              (all_selected ? "all selected" : "missed") + ", worst coefficient RMSE " + fmt(worst_rmse) +
              " (tol 0.1); noiseless CV error " + fmt(noiseless_cv) + " (tol 1e-9); " + fmt(secs) +
              " s (limit 30 s)"};
}

Outcome mixture_linearity() {
  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PleasantnessModel m;
  m.selected_features = {"w", "z"};
  m.coefficients = {0.6, -0.3};
  m.intercept = 0.2;
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    CompoundCatalog cat;
    cat.descriptors = {"z", "w"};
    const double v = u(rng);
    const int compounds = 1 + t % 6;
    for (int c = 0; c < compounds; ++c) {
      const double z = u(rng);
      const double w = (v - 0.2 + 0.3 * z) / 0.6;
      auto id = "c" + std::to_string(c);
      cat.compounds[id] = {id, id, {z, w}, std::nullopt};
    }
    Recipe r;
    const int ingredients = 1 + t % 9;
    for (int i = 0; i < ingredients; ++i) {
      std::map<std::string, double> profile;
      for (int c = 0; c < compounds; ++c)
        if (u(rng) < 0.6 || profile.empty()) profile["c" + std::to_string(c)] = 0.1 + 100.0 * u(rng);
      auto id = "i" + std::to_string(i);
      cat.ingredients[id] = testing::make_ingredient(id, Category::other, profile);
      RecipeIngredient ri;
      ri.id = id;
      if (t % 4 != 0) ri.quantity = 0.01 + 5.0 * u(rng);
      r.ingredients.push_back(ri);
    }
    worst = std::max(worst, std::abs(recipe_pleasantness(r, cat, m) - v));
  }
  return {worst <= 1e-9, "200 random recipes of equally pleasant ingredients: max |P - v| " + fmt(worst) +
                             " (tol 1e-9)"};
}

Outcome parser_accuracy(const fs::path& data) {
  auto lex = Lexicons::load(data / "lexicon");
  auto ing = testing::ingredient_line_accuracy(data / "eval" / "ingredient_lines.jsonl", lex);
  auto ins = testing::instruction_accuracy(data / "eval" / "instructions.jsonl", lex);
  return {ing.total > 0 && ins.total > 0 && ing.rate() >= 0.95 && ins.rate() >= 0.80,
          "ingredient fields " + std::to_string(ing.correct) + "/" + std::to_string(ing.total) + " = " +
              fmt(ing.rate()) + " (min 0.95), instruction fields " + std::to_string(ins.correct) + "/" +
              std::to_string(ins.total) + " = " + fmt(ins.rate()) + " (min 0.80)"};
}

Outcome scheduler() {
  std::mt19937_64 rng(909);
  std::size_t violations = 0, serial_mismatch = 0, over_bound = 0;
  double worst_ratio = 0.0;
  const auto t0 = std::chrono::steady_clock::now();
  for (int t = 0; t < 500; ++t) {
    auto dag = testing::random_dag(rng);
    auto plan = testing::dag_plan(dag);
    const std::size_t cooks = 1 + t % 3;
    auto s = schedule(plan, cooks);
    if (check_plan(s)) ++violations;
    if (std::abs(schedule(plan, 1).makespan - plan.serial_sum()) > 1e-9) ++serial_mismatch;
    const double opt = oracle::optimal_makespan(dag, cooks);
    if (s.makespan > 2.0 * opt + 1e-9 || s.makespan < opt - 1e-9) ++over_bound;
    if (opt > 0) worst_ratio = std::max(worst_ratio, s.makespan / opt);
  }
  const double secs = seconds_since(t0);
  return {violations == 0 && serial_mismatch == 0 && over_bound == 0 && secs < 60.0,
          "500 random DAGs of up to 8 nodes: " + std::to_string(violations) + " invariant violations, " +
              std::to_string(serial_mismatch) + " one-cook makespans differ from the serial sum, worst makespan/optimum " +
              fmt(worst_ratio) + " (limit 2), " + fmt(secs) + " s (limit 60 s)"};
}

Outcome determinism(const fs::path& cli, const fs::path& data) {
  testing::TempDir dir;
  auto config = nlohmann::json::parse(testing::read_file(data / "muse.json"));
  for (auto& [key, value] : config["data"].items()) value = (data / value.get<std::string>()).string();
  config["service"]["session_dir"] = "sessions";
  config["output_dir"] = "out";
  const auto config_path = testing::write_config(dir.path(), config);
  const auto common = " --config " + testing::quote(config_path) + " --seed 7";

  const auto t0 = std::chrono::steady_clock::now();
  auto ingest = testing::run_command(testing::quote(cli) + " ingest" + common);
  if (ingest.exit_code != 0) return {false, "ingest failed: " + ingest.output};
  for (const char* run : {"a", "b"}) {
    const auto out = dir / run;
    auto g = testing::run_command(testing::quote(cli) + " generate" + common + " --out " + testing::quote(out) +
                                  " --key saffron --cuisine spanish --dish soup");
    if (g.exit_code != 0) return {false, "generate failed: " + g.output};
    auto p = testing::run_command(testing::quote(cli) + " plan" + common + " --out " + testing::quote(out) +
                                  " --candidates " + testing::quote(out / "candidates.jsonl") + " --dish soup --cooks 2");
    if (p.exit_code != 0) return {false, "plan failed: " + p.output};
  }
  const double secs = seconds_since(t0);
  const auto ca = testing::read_file(dir / "a" / "candidates.jsonl"), cb = testing::read_file(dir / "b" / "candidates.jsonl");
  const auto pa = testing::read_file(dir / "a" / "plan.json"), pb = testing::read_file(dir / "b" / "plan.json");
  const auto rows = std::count(ca.begin(), ca.end(), '\n');
  const bool same = !ca.empty() && !pa.empty() && ca == cb && pa == pb;
  return {same && secs < 120.0, "two --seed 7 runs: candidates.jsonl (" + std::to_string(rows) + " rows) and plan.json " +
                                    (same ? "byte-identical" : "differ") + ", " + fmt(secs) + " s (limit 120 s)"};
}

Outcome session_machine(const fs::path& data) {
  testing::TempDir dir;
  Engine engine(EngineConfig::load(testing::write_config(dir.path(), testing::fast_config(dir.path(), data))));
  SessionStore store(dir / "sessions");
  Api api(engine, store);
  auto rep = testing::run_session_sequences(api, 1000, 1111);
  std::string detail = std::to_string(rep.sequences) + " random sequences, " + std::to_string(rep.requests) +
                       " requests: " + std::to_string(rep.invalid_transitions) + " invalid transitions, " +
                       std::to_string(rep.server_errors) + " 5xx, " + std::to_string(rep.mismatches) +
                       " responses differing from the model";
  if (!rep.notes.empty()) detail += "; first: " + rep.notes.front();
  return {rep.clean() && rep.sequences == 1000, detail};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"muse acceptance suite"};
  std::string cli, data;
  app.add_option("--cli", cli, "Path to the muse binary")->required()->check(CLI::ExistingFile);
  app.add_option("--data", data, "Bundled data directory")->required()->check(CLI::ExistingDirectory);
  CLI11_PARSE(app, argc, argv);

  const fs::path data_dir = fs::absolute(data);
  const std::vector<Criterion> criteria = {
      {"surprise closed form matches numerical integration", surprise_closed_form},
      {"surprise axioms", surprise_axioms},
      {"design space size", design_space},
      {"LDA planted-topic recovery", lda_recovery},
      {"spanning vector and variety exactness", spanning_variety},
      {"pleasantness regression recovery", pleasantness_recovery},
      {"mixture linearity of recipe pleasantness", mixture_linearity},
      {"parser field accuracy", [&] { return parser_accuracy(data_dir); }},
      {"cooking schedule quality", scheduler},
      {"seeded CLI runs are byte-identical", [&] { return determinism(fs::absolute(cli), data_dir); }},
      {"session state machine under random requests", [&] { return session_machine(data_dir); }},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << std::setw(2) << i + 1 << "  " << criteria[i].name << ": "
              << o.detail << std::endl;
  }
  std::cout << criteria.size() - static_cast<std::size_t>(failures) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failures == 0 ? 0 : 1;
}
