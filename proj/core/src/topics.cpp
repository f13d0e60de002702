#include "muse/topics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "muse/random.hpp"

namespace muse {

namespace {
constexpr int kModelVersion = 1;
constexpr std::size_t kMenuPoolCap = 400;
}  // namespace

std::optional<std::size_t> TopicModel::word_index(const std::string& ingredient) const {
  auto it = std::lower_bound(vocab.begin(), vocab.end(), ingredient);
  if (it != vocab.end() && *it == ingredient) return static_cast<std::size_t>(it - vocab.begin());
  // hand-built models need not keep the vocabulary sorted
  auto lin = std::find(vocab.begin(), vocab.end(), ingredient);
  if (lin != vocab.end()) return static_cast<std::size_t>(lin - vocab.begin());
  return std::nullopt;
}

TopicModel fit_lda(const std::vector<Document>& documents, const LdaOptions& options) {
  const std::size_t L = options.topics;
  if (L < 1) throw InvalidArgument("fit_lda: topic count must be >= 1");
  if (documents.empty()) throw InvalidArgument("fit_lda: empty corpus");
  const double alpha = options.hyper_alpha.value_or(50.0 / static_cast<double>(L));
  const double beta = options.hyper_beta;
  if (!(alpha > 0.0) || !(beta > 0.0)) throw InvalidArgument("fit_lda: hyperparameters must be positive");

  std::set<std::string> vocab_set;
  std::set<Document> distinct;
  for (const auto& d : documents) {
    vocab_set.insert(d.begin(), d.end());
    auto sorted = d;
    std::sort(sorted.begin(), sorted.end());
    distinct.insert(std::move(sorted));
  }
  if (distinct.size() < L) throw InvalidArgument("fit_lda: fewer distinct documents than topics");
  if (vocab_set.size() < L) throw InvalidArgument("fit_lda: vocabulary smaller than topic count");

  TopicModel model;
  model.topics = L;
  model.vocab.assign(vocab_set.begin(), vocab_set.end());
  model.hyper_alpha = alpha;
  model.hyper_beta = beta;
  model.seed = options.seed;
  model.iterations = options.iterations;
  const std::size_t V = model.vocab.size();

  std::vector<std::vector<std::size_t>> words(documents.size());
  for (std::size_t d = 0; d < documents.size(); ++d)
    for (const auto& w : documents[d]) words[d].push_back(*model.word_index(w));

  Rng rng(options.seed);
  std::vector<std::vector<std::size_t>> z(documents.size());
  std::vector<std::vector<double>> ndk(documents.size(), std::vector<double>(L, 0.0));
  std::vector<std::vector<double>> nkw(L, std::vector<double>(V, 0.0));
  std::vector<double> nk(L, 0.0);
  std::size_t tokens = 0;
  for (std::size_t d = 0; d < words.size(); ++d) {
    for (auto w : words[d]) {
      auto k = static_cast<std::size_t>(rng.below(L));
      z[d].push_back(k);
      ndk[d][k] += 1;
      nkw[k][w] += 1;
      nk[k] += 1;
      ++tokens;
    }
  }

  const double vbeta = static_cast<double>(V) * beta;
  std::vector<double> p(L);
  for (std::size_t it = 0; it < options.iterations; ++it) {
    for (std::size_t d = 0; d < words.size(); ++d) {
      for (std::size_t i = 0; i < words[d].size(); ++i) {
        const auto w = words[d][i];
        auto k = z[d][i];
        ndk[d][k] -= 1;
        nkw[k][w] -= 1;
        nk[k] -= 1;
        double total = 0.0;
        for (std::size_t t = 0; t < L; ++t) {
          total += (ndk[d][t] + alpha) * (nkw[t][w] + beta) / (nk[t] + vbeta);
          p[t] = total;
        }
        const double u = rng.uniform() * total;
        k = static_cast<std::size_t>(std::upper_bound(p.begin(), p.end(), u) - p.begin());
        if (k >= L) k = L - 1;
        z[d][i] = k;
        ndk[d][k] += 1;
        nkw[k][w] += 1;
        nk[k] += 1;
      }
    }
  }

  model.phi.assign(L, std::vector<double>(V, 0.0));
  model.topic_marginal.assign(L, 0.0);
  for (std::size_t k = 0; k < L; ++k) {
    for (std::size_t w = 0; w < V; ++w) model.phi[k][w] = (nkw[k][w] + beta) / (nk[k] + vbeta);
    model.topic_marginal[k] =
        (nk[k] + alpha) / (static_cast<double>(tokens) + static_cast<double>(L) * alpha);
  }
  return model;
}

std::vector<double> topic_posterior(const TopicModel& model, const std::string& ingredient, Warnings* warnings) {
  const std::size_t L = model.topics;
  auto idx = model.word_index(ingredient);
  if (!idx) {
    warn(warnings, "ingredient '" + ingredient + "' is outside the topic vocabulary; using a uniform posterior");
    return std::vector<double>(L, 1.0 / static_cast<double>(L));
  }
  std::vector<double> post(L);
  double total = 0.0;
  for (std::size_t k = 0; k < L; ++k) {
    post[k] = model.phi[k][*idx] * model.topic_marginal[k];
    total += post[k];
  }
  if (!(total > 0.0)) return std::vector<double>(L, 1.0 / static_cast<double>(L));
  for (auto& v : post) v /= total;
  return post;
}

std::vector<double> spanning_vector(const TopicModel& model, const std::vector<std::string>& ingredients,
                                    Warnings* warnings) {
  if (ingredients.empty()) throw InvalidArgument("spanning_vector: empty recipe");
  std::vector<double> miss(model.topics, 1.0);  // P(no ingredient drawn from topic l)
  for (const auto& ing : ingredients) {
    auto post = topic_posterior(model, ing, warnings);
    for (std::size_t k = 0; k < model.topics; ++k) miss[k] *= 1.0 - post[k];
  }
  for (auto& v : miss) v = 1.0 - v;
  return miss;
}

std::string_view to_string(VarietyDistance d) {
  switch (d) {
    case VarietyDistance::mean_pairwise: return "mean";
    case VarietyDistance::min_pairwise: return "min";
    case VarietyDistance::max_pairwise: return "max";
  }
  return "mean";
}

VarietyDistance parse_variety_distance(std::string_view name) {
  if (name == "mean") return VarietyDistance::mean_pairwise;
  if (name == "min") return VarietyDistance::min_pairwise;
  if (name == "max") return VarietyDistance::max_pairwise;
  throw InvalidArgument("unknown variety distance '" + std::string(name) + "'");
}

double euclidean(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw InvalidArgument("euclidean: length mismatch");
  double ss = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) ss += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(ss);
}

double menu_variety(const std::vector<std::vector<double>>& vs, VarietyDistance distance) {
  if (vs.size() < 2) throw InvalidArgument("menu_variety needs at least two recipes");
  for (const auto& v : vs)
    if (v.size() != vs.front().size()) throw InvalidArgument("menu_variety: spanning vectors differ in length");
  double sum = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    for (std::size_t j = i + 1; j < vs.size(); ++j) {
      double d = euclidean(vs[i], vs[j]);
      sum += d;
      lo = std::min(lo, d);
      hi = std::max(hi, d);
      ++pairs;
    }
  }
  switch (distance) {
    case VarietyDistance::min_pairwise: return lo;
    case VarietyDistance::max_pairwise: return hi;
    case VarietyDistance::mean_pairwise: break;
  }
  return sum / static_cast<double>(pairs);
}

MenuSuggestion suggest_menu_parameters(const TopicModel& model, const std::vector<Recipe>& corpus, std::size_t k,
                                       double variety_target, std::uint64_t seed, Warnings* warnings) {
  if (k < 2) throw InvalidArgument("suggest_menu_parameters: K must be >= 2");
  if (corpus.empty()) throw InvalidArgument("suggest_menu_parameters: empty corpus");

  std::vector<const Recipe*> pool;
  for (const auto& r : corpus)
    if (!r.ingredients.empty()) pool.push_back(&r);
  if (pool.empty()) throw InvalidArgument("suggest_menu_parameters: corpus has no ingredients");
  if (pool.size() > kMenuPoolCap) {
    Rng rng(seed);
    rng.shuffle(pool);
    pool.resize(kMenuPoolCap);
  }
  std::sort(pool.begin(), pool.end(), [](const Recipe* a, const Recipe* b) { return a->id < b->id; });

  std::vector<std::vector<double>> span;
  span.reserve(pool.size());
  for (const auto* r : pool) span.push_back(spanning_vector(model, r->ingredient_ids()));

  std::vector<std::size_t> chosen;
  std::set<std::string> used_dish_types;
  bool warned_dish = false;

  // best opening pair, preferring distinct dish types
  if (pool.size() >= 2) {
    for (bool require_distinct : {true, false}) {
      double best = -1.0;
      std::pair<std::size_t, std::size_t> pick{0, 0};
      for (std::size_t i = 0; i < pool.size(); ++i)
        for (std::size_t j = i + 1; j < pool.size(); ++j) {
          if (require_distinct && pool[i]->dish_type == pool[j]->dish_type) continue;
          double d = euclidean(span[i], span[j]);
          if (d > best) {
            best = d;
            pick = {i, j};
          }
        }
      if (best >= 0.0) {
        chosen = {pick.first, pick.second};
        if (!require_distinct) {
          warn(warnings, "corpus lacks distinct dish types; menu repeats a dish type");
          warned_dish = true;
        }
        break;
      }
    }
  } else {
    chosen = {0};
  }
  for (auto c : chosen) used_dish_types.insert(pool[c]->dish_type);

  while (chosen.size() < k) {
    std::optional<std::size_t> pick;
    for (int pass = 0; pass < 3 && !pick; ++pass) {
      double best = -1.0;
      for (std::size_t c = 0; c < pool.size(); ++c) {
        if (pass < 2 && std::find(chosen.begin(), chosen.end(), c) != chosen.end()) continue;
        if (pass == 0 && used_dish_types.count(pool[c]->dish_type)) continue;
        std::vector<std::vector<double>> trial;
        for (auto s : chosen) trial.push_back(span[s]);
        trial.push_back(span[c]);
        double v = menu_variety(trial);
        if (v > best) {
          best = v;
          pick = c;
        }
      }
      if (pick && pass > 0 && !warned_dish) {
        warn(warnings, pass == 1 ? "corpus lacks K distinct dish types; relaxing to repeats"
                                 : "corpus has fewer than K recipes; repeating seeds");
        warned_dish = true;
      }
    }
    chosen.push_back(*pick);
    used_dish_types.insert(pool[*pick]->dish_type);
  }
  if (chosen.size() > k) chosen.resize(k);

  MenuSuggestion out;
  std::vector<std::vector<double>> vs;
  for (auto c : chosen) {
    const auto& r = *pool[c];
    MenuSeed seed_out;
    seed_out.exemplar_id = r.id;
    seed_out.spanning = span[c];
    // the ingredient most concentrated in a single topic carries the dish's theme
    double best = -1.0;
    for (const auto& id : r.ingredient_ids()) {
      auto post = topic_posterior(model, id);
      double peak = *std::max_element(post.begin(), post.end());
      if (peak > best || (peak == best && id < seed_out.problem.key_ingredient)) {
        best = peak;
        seed_out.problem.key_ingredient = id;
      }
    }
    if (!r.cuisine.empty()) seed_out.problem.cuisines.insert(r.cuisine);
    seed_out.problem.dish_type = r.dish_type;
    const auto n = r.ingredients.size();
    seed_out.problem.min_ingredients = n > 2 ? n - 2 : 1;
    seed_out.problem.max_ingredients = n + 2;
    vs.push_back(span[c]);
    out.seeds.push_back(std::move(seed_out));
  }
  out.variety = menu_variety(vs);
  if (out.variety < variety_target)
    warn(warnings, "menu variety " + std::to_string(out.variety) + " is below the target " + std::to_string(variety_target));
  return out;
}

nlohmann::json to_json(const TopicModel& m) {
  std::vector<double> flat;
  for (const auto& row : m.phi) flat.insert(flat.end(), row.begin(), row.end());
  return {{"version", kModelVersion},        {"L", m.topics},           {"vocab", m.vocab},
          {"phi", flat},                     {"topic_marginal", m.topic_marginal},
          {"hyper_alpha", m.hyper_alpha},    {"hyper_beta", m.hyper_beta},
          {"seed", m.seed},                  {"iterations", m.iterations}};
}

TopicModel topic_model_from_json(const nlohmann::json& j) {
  try {
    if (j.value("version", 0) != kModelVersion) throw DataError("unsupported topic model version");
    TopicModel m;
    m.topics = j.at("L").get<std::size_t>();
    m.vocab = j.at("vocab").get<std::vector<std::string>>();
    auto flat = j.at("phi").get<std::vector<double>>();
    m.topic_marginal = j.at("topic_marginal").get<std::vector<double>>();
    m.hyper_alpha = j.at("hyper_alpha").get<double>();
    m.hyper_beta = j.at("hyper_beta").get<double>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.iterations = j.at("iterations").get<std::size_t>();
    const auto V = m.vocab.size();
    if (m.topics < 1 || flat.size() != m.topics * V || m.topic_marginal.size() != m.topics)
      throw DataError("topic model dimensions disagree");
    m.phi.assign(m.topics, std::vector<double>(V));
    for (std::size_t k = 0; k < m.topics; ++k)
      for (std::size_t w = 0; w < V; ++w) m.phi[k][w] = flat[k * V + w];
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed topic model: ") + e.what());
  }
}

}  // namespace muse
