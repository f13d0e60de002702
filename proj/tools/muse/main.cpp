#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "muse/api.hpp"
#include "muse/engine.hpp"
#include "server.hpp"

namespace fs = std::filesystem;
using namespace muse;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "Config file (default: $MUSE_CONFIG)");
  cmd->add_option("--seed", c.seed, "Random seed");
  cmd->add_option("--out", c.out, "Output directory (default: output_dir from the config)");
}

EngineConfig load_config(const Common& c) {
  auto path = resolve_config_path(c.config);
  if (!path) throw UsageError("no config file: pass --config or set MUSE_CONFIG");
  if (!fs::exists(*path)) throw UsageError("config file not found: " + path->string());
  auto config = EngineConfig::load(*path);
  if (c.seed) {
    config.generation.seed = *c.seed;
    config.lda.seed = *c.seed;
  }
  if (!c.out.empty()) config.output_dir = c.out;
  return config;
}

void print_warnings(const Warnings& w) {
  std::vector<std::pair<std::string, std::size_t>> unique;
  for (const auto& m : w) {
    auto it = std::find_if(unique.begin(), unique.end(), [&](const auto& u) { return u.first == m; });
    if (it == unique.end())
      unique.emplace_back(m, 1);
    else
      ++it->second;
  }
  for (const auto& [m, n] : unique) {
    std::cerr << "warning: " << m;
    if (n > 1) std::cerr << " (x" << n << ")";
    std::cerr << "\n";
  }
}

fs::path output_path(const EngineConfig& config, const std::string& explicit_path, const char* file) {
  fs::path p = explicit_path.empty() ? config.output_dir / file : fs::path(explicit_path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  return p;
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::vector<nlohmann::json> read_jsonl(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  std::vector<nlohmann::json> rows;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      rows.push_back(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(path.string() + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return rows;
}

fs::path model_output(const fs::path& configured, const EngineConfig& config, const std::string& explicit_path,
                      const char* fallback) {
  if (!explicit_path.empty()) return explicit_path;
  if (!configured.empty()) return configured;
  return config.output_dir / fallback;
}

struct CorpusData {
  Lexicons lex;
  CompoundCatalog catalog;
  RecipeLoad load;
};

CorpusData load_corpus(const EngineConfig& config, Warnings* warnings) {
  config.validate();
  CorpusData d;
  d.lex = Lexicons::load(config.data.lexicon_dir);
  d.catalog = load_compound_catalog(config.data.compounds, config.data.ingredient_compounds, warnings);
  load_ingredients(config.data.ingredients, d.catalog, d.lex.singular, warnings);
  CuisineTable::load(config.data.cuisines, d.catalog);
  d.load = load_recipes(config.data.recipes, d.lex, &d.catalog);
  return d;
}

int cmd_ingest(const Common& c, const std::string& output) {
  auto config = load_config(c);
  Warnings warnings;
  auto data = load_corpus(config, &warnings);
  print_warnings(warnings);

  const auto corpus_path = output_path(config, "", "corpus.jsonl");
  {
    std::ofstream out(corpus_path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + corpus_path.string());
    for (const auto& r : data.load.recipes) out << to_json(r).dump() << '\n';
  }
  auto freq = build_frequency_table(data.load.recipes);
  write_json(output_path(config, "", "frequencies.json"), to_json(freq));

  nlohmann::json skipped = nlohmann::json::array();
  for (const auto& d : data.load.skipped) skipped.push_back({{"line", d.line}, {"reason", d.reason}, {"text", d.text}});
  nlohmann::json partial = nlohmann::json::array();
  for (const auto& d : data.load.parse.entries)
    partial.push_back({{"outcome", to_string(d.outcome)}, {"reason", d.reason}, {"text", d.text}});
  write_json(output_path(config, "", "ingest_report.json"),
             {{"recipes", data.load.recipes.size()},
              {"skipped", std::move(skipped)},
              {"partial", std::move(partial)},
              {"ingredients", data.catalog.ingredients.size()},
              {"compounds", data.catalog.compounds.size()}});

  std::vector<std::string> vocab;
  for (const auto& [id, _] : data.catalog.ingredients) vocab.push_back(id);
  auto prior = fit_surprise_prior(freq, vocab, config.smoothing);
  const auto prior_path = model_output(config.models.surprise, config, output, "surprise.json");
  write_json(prior_path, to_json(prior));

  std::cout << "ingested " << data.load.recipes.size() << " recipes (" << data.load.skipped.size() << " skipped, "
            << data.load.parse.entries.size() << " partial parses)\n"
            << "wrote " << corpus_path.string() << "\nwrote " << prior_path.string() << "\n";
  return 0;
}

int cmd_fit_pleasantness(const Common& c, const std::string& cv, const std::string& output) {
  auto config = load_config(c);
  if (!cv.empty()) config.cv_mode = parse_cv_mode(cv);
  Warnings warnings;
  config.validate();
  auto lex = Lexicons::load(config.data.lexicon_dir);
  auto catalog = load_compound_catalog(config.data.compounds, config.data.ingredient_compounds, &warnings);
  auto model = fit_pleasantness(TrainingSet::from_catalog(catalog), config.cv_mode, &warnings, config.generation.seed);
  print_warnings(warnings);
  const auto path = model_output(config.models.pleasantness, config, output, "pleasantness.json");
  write_json(path, to_json(model));
  std::cout << "selected";
  for (std::size_t i = 0; i < model.selected_features.size(); ++i)
    std::cout << " " << model.selected_features[i] << "=" << model.coefficients[i];
  std::cout << "\nintercept " << model.intercept << "\n"
            << to_string(model.cv_mode) << " cv mse " << model.cv_error << "\nwrote " << path.string() << "\n";
  return 0;
}

int cmd_fit_topics(const Common& c, std::optional<std::size_t> topics, std::optional<std::size_t> iters,
                   std::optional<double> alpha, std::optional<double> beta, const std::string& output) {
  auto config = load_config(c);
  if (topics) config.lda.topics = *topics;
  if (iters) config.lda.iterations = *iters;
  if (alpha) config.lda.hyper_alpha = *alpha;
  if (beta) config.lda.hyper_beta = *beta;
  Warnings warnings;
  auto data = load_corpus(config, &warnings);
  print_warnings(warnings);
  std::vector<Document> docs;
  for (const auto& r : data.load.recipes) docs.push_back(r.ingredient_ids());
  auto model = fit_lda(docs, config.lda);
  const auto path = model_output(config.models.topics, config, output, "topics.json");
  write_json(path, to_json(model));
  std::cout << "fitted " << model.topics << " topics over " << model.vocab.size() << " ingredients ("
            << model.iterations << " iterations, seed " << model.seed << ")\nwrote " << path.string() << "\n";
  return 0;
}

struct GenerateArgs {
  std::string key;
  std::vector<std::string> cuisines;
  std::string dish;
  std::optional<std::size_t> min, max, population, generations;
  std::string output;
};

int cmd_generate(const Common& c, const GenerateArgs& a) {
  auto config = load_config(c);
  if (a.population) config.generation.population_size = *a.population;
  if (a.generations) config.generation.generations = *a.generations;
  Warnings warnings;
  Engine engine(config, &warnings);
  DesignProblem problem;
  problem.key_ingredient = a.key;
  problem.cuisines = {a.cuisines.begin(), a.cuisines.end()};
  problem.dish_type = a.dish;
  problem.min_ingredients = a.min.value_or(config.default_min_ingredients);
  problem.max_ingredients = a.max.value_or(config.default_max_ingredients);
  for (const auto& cz : problem.cuisines)
    if (!engine.cuisines().contains(cz)) throw InvalidArgument("unknown cuisine '" + cz + "'");

  auto set = engine.generate(problem, config.generation, &warnings);
  auto ranked = engine.assess(set.candidates, config.weights, problem.dish_type, &warnings);
  print_warnings(warnings);

  const auto path = output_path(config, a.output, "candidates.jsonl");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  for (const auto& r : ranked) out << to_json(r).dump() << '\n';
  out.close();

  std::cout << ranked.size() << " candidates (" << set.stats.individuals_evaluated << " evaluated, "
            << set.stats.duplicates_removed << " duplicates, " << set.stats.corpus_matches_removed
            << " corpus matches removed)\n";
  for (std::size_t i = 0; i < std::min<std::size_t>(10, ranked.size()); ++i) {
    const auto& r = ranked[i];
    std::cout << r.rank << "\t" << r.candidate.id << "\tS=" << r.surprise << "\tP=" << r.pleasantness
              << "\tF=" << r.pairing << "\t";
    for (std::size_t k = 0; k < r.candidate.ingredients.size(); ++k)
      std::cout << (k ? "," : "") << r.candidate.ingredients[k];
    std::cout << "\n";
  }
  std::cout << "wrote " << path.string() << "\n";
  return 0;
}

Candidate candidate_from_row(const nlohmann::json& row, std::size_t n) {
  if (row.is_array()) {
    Candidate c;
    c.id = "c" + std::to_string(n);
    c.ingredients = row.get<std::vector<std::string>>();
    std::sort(c.ingredients.begin(), c.ingredients.end());
    return c;
  }
  if (row.contains("ingredients") && !row.contains("generation")) {
    Candidate c;
    c.id = row.value("id", "c" + std::to_string(n));
    c.ingredients = row.at("ingredients").get<std::vector<std::string>>();
    std::sort(c.ingredients.begin(), c.ingredients.end());
    return c;
  }
  return candidate_from_json(row);
}

RankWeights parse_weights(const std::string& text, RankWeights fallback) {
  if (text.empty()) return fallback;
  std::vector<double> w;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) w.push_back(std::stod(item));
  if (w.size() != 3) throw UsageError("--weights expects three comma-separated numbers");
  return {w[0], w[1], w[2]};
}

int cmd_assess(const Common& c, const std::string& candidates, const std::string& dish, const std::string& weights,
               const std::string& output) {
  auto config = load_config(c);
  auto w = parse_weights(weights, config.weights);
  Warnings warnings;
  Engine engine(config, &warnings);
  std::vector<Candidate> list;
  std::size_t n = 0;
  for (const auto& row : read_jsonl(candidates)) list.push_back(candidate_from_row(row, ++n));
  auto ranked = engine.assess(list, w, dish, &warnings);
  print_warnings(warnings);
  const auto path = output_path(config, output, "assessed.jsonl");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  for (const auto& r : ranked) out << to_json(r).dump() << '\n';
  std::cout << "assessed " << ranked.size() << " candidates\nwrote " << path.string() << "\n";
  return 0;
}

struct PlanArgs {
  std::string candidates;
  std::string candidate_id;
  std::size_t rank = 1;
  std::vector<std::string> ingredients;
  std::string dish;
  std::size_t cooks = 1;
  std::string output;
};

int cmd_plan(const Common& c, const PlanArgs& a) {
  auto config = load_config(c);
  std::vector<std::string> ingredients = a.ingredients;
  std::string recipe_id = "plan";
  if (ingredients.empty()) {
    if (a.candidates.empty()) throw UsageError("plan needs --candidates or --ingredients");
    auto rows = read_jsonl(a.candidates);
    std::optional<Candidate> chosen;
    std::size_t n = 0;
    for (const auto& row : rows) {
      auto cand = candidate_from_row(row, ++n);
      const std::size_t rank = row.is_object() ? row.value("rank", n) : n;
      if ((!a.candidate_id.empty() && cand.id == a.candidate_id) || (a.candidate_id.empty() && rank == a.rank)) {
        chosen = cand;
        break;
      }
    }
    if (!chosen) throw NotFound("no candidate matches the requested id or rank in " + a.candidates);
    ingredients = chosen->ingredients;
    recipe_id = chosen->id;
  }
  Warnings warnings;
  Engine engine(config, &warnings);
  auto result = engine.plan(ingredients, a.dish, a.cooks, &warnings);
  result.proportions.id = recipe_id;
  print_warnings(warnings);
  const auto plan_path = output_path(config, a.output, "plan.json");
  write_json(plan_path, to_json(result.plan));
  const auto recipe_path = plan_path.parent_path() / "recipe.json";
  write_json(recipe_path, to_json(result.proportions));
  std::cout << result.plan.action_count() << " steps, " << a.cooks << " cook(s): makespan " << result.plan.makespan
            << " min (serial " << result.plan.serial_sum() << ", critical path " << result.plan.critical_path()
            << ")\nwrote " << plan_path.string() << "\nwrote " << recipe_path.string() << "\n";
  return 0;
}

int cmd_menu(const Common& c, std::size_t k, double target, const std::string& output) {
  auto config = load_config(c);
  Warnings warnings;
  Engine engine(config, &warnings);
  auto menu = engine.menu(k, target, config.generation.seed, &warnings);
  print_warnings(warnings);
  nlohmann::json seeds = nlohmann::json::array();
  for (const auto& s : menu.seeds) {
    seeds.push_back({{"problem", to_json(s.problem)}, {"exemplar_id", s.exemplar_id}, {"spanning", s.spanning}});
    std::cout << s.problem.dish_type << "\tkey=" << s.problem.key_ingredient << "\texemplar=" << s.exemplar_id << "\n";
  }
  const auto path = output_path(config, output, "menu.json");
  write_json(path, {{"k", k}, {"variety", menu.variety}, {"seeds", std::move(seeds)}});
  std::cout << "variety " << menu.variety << "\nwrote " << path.string() << "\n";
  return 0;
}

int cmd_serve(const Common& c, std::optional<int> port, const std::string& host) {
  auto config = load_config(c);
  Warnings warnings;
  Engine engine(config, &warnings);
  print_warnings(warnings);
  SessionStore store(config.session_dir);
  Api api(engine, store);
  cli::serve(api, host, port.value_or(config.port));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"muse: computational-creativity recipe engine"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kEngineVersion));

  Common common;
  std::string output;

  auto* ingest = app.add_subcommand("ingest", "Parse the corpus, write normalized recipes and fit the surprise prior");
  add_common(ingest, common);
  ingest->add_option("--output", output, "Surprise model path");

  std::string cv;
  auto* fitp = app.add_subcommand("fit-pleasantness", "Fit the compound pleasantness regression");
  add_common(fitp, common);
  fitp->add_option("--cv", cv, "ten-fold or leave-one-out")->check(CLI::IsMember({"ten-fold", "leave-one-out"}));
  fitp->add_option("--output", output, "Model path");

  std::optional<std::size_t> topics, iters;
  std::optional<double> alpha, beta;
  auto* fitt = app.add_subcommand("fit-topics", "Fit the LDA topic model over the corpus");
  add_common(fitt, common);
  fitt->add_option("--topics", topics, "Number of topics")->check(CLI::PositiveNumber);
  fitt->add_option("--iters", iters, "Gibbs sweeps");
  fitt->add_option("--alpha", alpha, "Document-topic prior");
  fitt->add_option("--beta", beta, "Topic-word prior");
  fitt->add_option("--output", output, "Model path");

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Generate and rank candidate ingredient sets");
  add_common(generate, common);
  generate->add_option("--key", gen.key, "Key ingredient id")->required();
  generate->add_option("--cuisine", gen.cuisines, "Cuisine id (repeatable)")->required();
  generate->add_option("--dish", gen.dish, "Dish type")->required();
  generate->add_option("--min", gen.min, "Minimum ingredients");
  generate->add_option("--max", gen.max, "Maximum ingredients");
  generate->add_option("--population", gen.population, "Population size");
  generate->add_option("--generations", gen.generations, "Generations");
  generate->add_option("--output", gen.output, "candidates.jsonl path");

  std::string candidates, dish, weights;
  auto* assess = app.add_subcommand("assess", "Score and rank candidate ingredient sets");
  add_common(assess, common);
  assess->add_option("--candidates", candidates, "JSON-lines candidates")->required();
  assess->add_option("--dish", dish, "Dish type");
  assess->add_option("--weights", weights, "surprise,pleasantness,pairing");
  assess->add_option("--output", output, "assessed.jsonl path");

  PlanArgs plan_args;
  auto* plan = app.add_subcommand("plan", "Proportions, step graph and cooking schedule for one candidate");
  add_common(plan, common);
  plan->add_option("--candidates", plan_args.candidates, "candidates.jsonl to pick from");
  plan->add_option("--candidate", plan_args.candidate_id, "Candidate id (default: --rank)");
  plan->add_option("--rank", plan_args.rank, "Candidate rank")->check(CLI::PositiveNumber);
  plan->add_option("--ingredients", plan_args.ingredients, "Explicit ingredient ids")->delimiter(',');
  plan->add_option("--dish", plan_args.dish, "Dish type")->required();
  plan->add_option("--cooks", plan_args.cooks, "Number of cooks")->check(CLI::Range(1, 64));
  plan->add_option("--output", plan_args.output, "plan.json path");

  std::size_t k = 3;
  double target = 0.0;
  auto* menu = app.add_subcommand("menu", "Suggest varied menu parameters from the topic model");
  add_common(menu, common);
  menu->add_option("--k", k, "Courses")->check(CLI::Range(2, 12));
  menu->add_option("--target", target, "Variety target");
  menu->add_option("--output", output, "menu.json path");

  std::optional<int> port;
  std::string host = "0.0.0.0";
  auto* serve = app.add_subcommand("serve", "Run the HTTP session service");
  add_common(serve, common);
  serve->add_option("--port", port, "Port (default: service.port or $MUSE_PORT)");
  serve->add_option("--host", host, "Bind address");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*ingest) return cmd_ingest(common, output);
    if (*fitp) return cmd_fit_pleasantness(common, cv, output);
    if (*fitt) return cmd_fit_topics(common, topics, iters, alpha, beta, output);
    if (*generate) return cmd_generate(common, gen);
    if (*assess) return cmd_assess(common, candidates, dish, weights, output);
    if (*plan) return cmd_plan(common, plan_args);
    if (*menu) return cmd_menu(common, k, target, output);
    if (*serve) return cmd_serve(common, port, host);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
