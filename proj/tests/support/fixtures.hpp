#pragma once

// Synthetic inputs shared by the unit tests and the acceptance suite.

#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "muse/catalog.hpp"
#include "muse/planner.hpp"
#include "muse/pleasantness.hpp"
#include "muse/topics.hpp"
#include "oracles.hpp"
#include "testing.hpp"

namespace muse::testing {

struct PlantedTopics {
  std::vector<std::string> vocab;
  std::vector<std::vector<double>> phi;
  std::vector<Document> docs;
};

/// Three topics over disjoint blocks of ten words; each of `docs` documents
/// mixes topics with weights drawn from Dirichlet(0.3).
inline PlantedTopics planted_topics(std::uint64_t seed, std::size_t docs = 500) {
  std::mt19937_64 rng(seed);
  PlantedTopics p;
  for (int w = 0; w < 30; ++w) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "w%02d", w);
    p.vocab.push_back(buf);
  }
  std::uniform_real_distribution<double> u(0.5, 2.0);
  for (int k = 0; k < 3; ++k) {
    std::vector<double> row(30, 0.0);
    double total = 0.0;
    for (int w = 10 * k; w < 10 * k + 10; ++w) total += row[w] = u(rng);
    for (auto& v : row) v /= total;
    p.phi.push_back(row);
  }
  std::gamma_distribution<double> g(0.3, 1.0);
  std::uniform_int_distribution<int> len(8, 16);
  for (std::size_t d = 0; d < docs; ++d) {
    std::vector<double> theta(3);
    for (auto& t : theta) t = g(rng) + 1e-12;
    std::discrete_distribution<int> topic(theta.begin(), theta.end());
    Document doc;
    for (int n = len(rng); n > 0; --n) {
      const auto& row = p.phi[topic(rng)];
      std::discrete_distribution<int> word(row.begin(), row.end());
      doc.push_back(p.vocab[word(rng)]);
    }
    p.docs.push_back(doc);
  }
  return p;
}

inline const std::map<std::string, double>& planted_coefficients() {
  static const std::map<std::string, double> k = {
      {"f3", 0.5}, {"f7", -0.4}, {"f12", 0.3}, {"f15", 0.2}, {"f18", -0.25}};
  return k;
}

/// y = 0.3 + sum of planted terms + N(0, noise), over 20 independent uniform features.
inline TrainingSet planted_regression(std::size_t n, double noise, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> e(0.0, noise > 0 ? noise : 1.0);
  TrainingSet t;
  for (int j = 0; j < 20; ++j) t.feature_names.push_back("f" + std::to_string(j));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(20);
    for (auto& v : row) v = u(rng);
    double y = 0.3 + 0.5 * row[3] - 0.4 * row[7] + 0.3 * row[12] + 0.2 * row[15] - 0.25 * row[18];
    if (noise > 0) y += e(rng);
    t.rows.push_back(row);
    t.labels.push_back(y);
  }
  return t;
}

inline double coefficient_of(const PleasantnessModel& m, const std::string& name) {
  for (std::size_t i = 0; i < m.selected_features.size(); ++i)
    if (m.selected_features[i] == name) return m.coefficients[i];
  return 0.0;
}

/// Root-mean-square error over all 20 coefficients, unselected ones counting as zero.
inline double coefficient_rmse(const PleasantnessModel& m) {
  double sq = 0.0;
  for (int j = 0; j < 20; ++j) {
    const auto name = "f" + std::to_string(j);
    auto it = planted_coefficients().find(name);
    const double err = coefficient_of(m, name) - (it == planted_coefficients().end() ? 0.0 : it->second);
    sq += err * err;
  }
  return std::sqrt(sq / 20.0);
}

/// Up to 8 nodes with integer durations in [0, 20]; edges only point forward.
inline oracle::Dag random_dag(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> size(1, 8);
  std::uniform_int_distribution<int> dur(0, 20);
  std::bernoulli_distribution edge(0.3);
  oracle::Dag d;
  const int n = size(rng);
  for (int i = 0; i < n; ++i) d.duration.push_back(dur(rng));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (edge(rng)) d.edges.emplace_back(i, j);
  return d;
}

inline Plan dag_plan(const oracle::Dag& dag) {
  Plan p;
  for (std::size_t i = 0; i < dag.duration.size(); ++i)
    p.nodes.push_back({"n" + std::to_string(i), NodeKind::action, "cook", "", dag.duration[i]});
  p.edges = dag.edges;
  return p;
}

inline CompoundCatalog catalog_of_size(std::size_t n) {
  CompoundCatalog cat;
  for (std::size_t i = 0; i < n; ++i) {
    auto id = "i" + std::to_string(i);
    cat.ingredients[id] = make_ingredient(id, Category::other);
  }
  return cat;
}

}  // namespace muse::testing
