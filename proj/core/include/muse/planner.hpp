#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "muse/catalog.hpp"
#include "muse/error.hpp"
#include "muse/lexicon.hpp"
#include "muse/types.hpp"

namespace muse {

enum class NodeKind { ingredient, action };

struct PlanNode {
  std::string id;
  NodeKind kind = NodeKind::action;
  std::string action;  // ingredient id for ingredient nodes
  std::string tool;
  double duration = 0.0;

  bool operator==(const PlanNode&) const = default;
};

/// Precedence DAG over ingredient and action nodes. Edges index into `nodes`.
/// The schedule fields are empty until schedule() runs.
struct Plan {
  std::vector<PlanNode> nodes;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<std::size_t> assignment;  // node -> cook
  std::vector<double> start_times;
  double makespan = 0.0;
  std::size_t cooks = 0;

  bool scheduled() const { return !start_times.empty(); }
  double serial_sum() const;
  double critical_path() const;
  std::size_t action_count() const;
  std::optional<std::size_t> find(const std::string& id) const;
  bool operator==(const Plan&) const = default;
};

/// Recipe of the given ingredient set with every quantity filled, scaled to 4
/// servings. Each quantity is the median per-serving amount across corpus
/// recipes of the dish type containing the ingredient, falling back to the
/// median over same-category ingredients, then to 1 piece.
Recipe estimate_proportions(const std::vector<std::string>& ingredient_set, const std::string& dish_type,
                            const std::vector<Recipe>& corpus, const CompoundCatalog& catalog,
                            const UnitConversions& units, Warnings* warnings = nullptr);

/// Transfers the step sequence of the corpus recipe (same dish type) with the
/// largest ingredient overlap. Template ingredients bind to recipe ingredients by
/// id, then by category; unbound template inputs are dropped and leftover recipe
/// ingredients join a "prep" step feeding the first merging step. Without a
/// template the graph is the chain prep -> combine -> cook.
Plan build_step_graph(const Recipe& recipe, const std::vector<Recipe>& corpus, const CompoundCatalog& catalog,
                      const ActionDurations& durations, Warnings* warnings = nullptr);

/// Non-delay list scheduling: whenever a cook is free, start the ready node with
/// the longest duration (ties by node id). Throws InvalidArgument on a cyclic
/// plan or zero cooks.
Plan schedule(Plan plan, std::size_t num_cooks);

/// Empty when all plan invariants hold, else a description of the first violation.
std::optional<std::string> check_plan(const Plan& plan);

std::vector<std::size_t> topological_order(const Plan& plan);  // throws InvalidArgument on cycles

nlohmann::json to_json(const Plan& plan);
Plan plan_from_json(const nlohmann::json& j);

}  // namespace muse
