#include "muse/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace muse {

namespace {

constexpr double kServings = 4.0;
constexpr double kEps = 1e-9;

struct Sample {
  double per_serving_base = 0.0;
  std::string unit;
  UnitInfo info;
};

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Median per-serving amount expressed in the most common unit among the samples.
std::optional<std::pair<double, std::string>> summarize(const std::vector<Sample>& samples) {
  if (samples.empty()) return std::nullopt;
  std::map<std::string, std::size_t> unit_counts;
  for (const auto& s : samples) ++unit_counts[s.unit];
  auto best = std::max_element(unit_counts.begin(), unit_counts.end(),
                               [](const auto& a, const auto& b) { return a.second < b.second; });
  const auto& unit = best->first;
  UnitInfo info{};
  std::vector<double> values;
  for (const auto& s : samples)
    if (s.unit == unit) info = s.info;
  for (const auto& s : samples)
    if (s.info.dimension == info.dimension) values.push_back(s.per_serving_base);
  return std::pair{median(values) / info.to_base, unit};
}

void collect(const Recipe& r, const RecipeIngredient& ri, const UnitConversions& units, std::vector<Sample>& out) {
  if (!ri.quantity) return;
  auto info = units.info(ri.unit);
  out.push_back({*ri.quantity * info.to_base / r.servings, ri.unit, info});
}

std::size_t add_node(Plan& plan, PlanNode node) {
  plan.nodes.push_back(std::move(node));
  return plan.nodes.size() - 1;
}

Plan fallback_chain(const Recipe& recipe, const ActionDurations& durations) {
  Plan plan;
  std::vector<std::size_t> ings;
  for (const auto& ri : recipe.ingredients)
    ings.push_back(add_node(plan, {"ing:" + ri.id, NodeKind::ingredient, ri.id, "", 0.0}));
  auto prep = add_node(plan, {"a1", NodeKind::action, "prep", "", durations.minutes("prep")});
  auto combine = add_node(plan, {"a2", NodeKind::action, "combine", "bowl", durations.minutes("combine")});
  auto cook = add_node(plan, {"a3", NodeKind::action, "cook", "", durations.minutes("cook")});
  for (auto i : ings) plan.edges.emplace_back(i, prep);
  plan.edges.emplace_back(prep, combine);
  plan.edges.emplace_back(combine, cook);
  return plan;
}

double jaccard(const Recipe& a, const Recipe& b) {
  auto x = a.ingredient_ids();
  auto y = b.ingredient_ids();
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  std::vector<std::string> common;
  std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(common));
  const double uni = static_cast<double>(x.size() + y.size() - common.size());
  return uni > 0 ? static_cast<double>(common.size()) / uni : 0.0;
}

}  // namespace

double Plan::serial_sum() const {
  double s = 0.0;
  for (const auto& n : nodes) s += n.duration;
  return s;
}

double Plan::critical_path() const {
  auto order = topological_order(*this);
  std::vector<std::vector<std::size_t>> preds(nodes.size());
  for (auto [u, v] : edges) preds[v].push_back(u);
  std::vector<double> finish(nodes.size(), 0.0);
  double best = 0.0;
  for (auto v : order) {
    double start = 0.0;
    for (auto u : preds[v]) start = std::max(start, finish[u]);
    finish[v] = start + nodes[v].duration;
    best = std::max(best, finish[v]);
  }
  return best;
}

std::size_t Plan::action_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const PlanNode& n) { return n.kind == NodeKind::action; }));
}

std::optional<std::size_t> Plan::find(const std::string& id) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].id == id) return i;
  return std::nullopt;
}

std::vector<std::size_t> topological_order(const Plan& plan) {
  const auto n = plan.nodes.size();
  std::vector<std::size_t> indegree(n, 0);
  std::vector<std::vector<std::size_t>> succ(n);
  for (auto [u, v] : plan.edges) {
    if (u >= n || v >= n) throw InvalidArgument("plan edge references a missing node");
    succ[u].push_back(v);
    ++indegree[v];
  }
  std::set<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i)
    if (indegree[i] == 0) ready.insert(i);
  std::vector<std::size_t> order;
  while (!ready.empty()) {
    auto u = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(u);
    for (auto v : succ[u])
      if (--indegree[v] == 0) ready.insert(v);
  }
  if (order.size() != n) throw InvalidArgument("plan contains a cycle");
  return order;
}

Recipe estimate_proportions(const std::vector<std::string>& ingredient_set, const std::string& dish_type,
                            const std::vector<Recipe>& corpus, const CompoundCatalog& catalog,
                            const UnitConversions& units, Warnings* warnings) {
  if (ingredient_set.empty()) throw InvalidArgument("estimate_proportions: empty ingredient set");
  if (corpus.empty()) throw InvalidArgument("estimate_proportions: empty corpus");

  Recipe out;
  out.dish_type = dish_type;
  out.servings = kServings;
  out.provenance = Provenance::generated;
  for (const auto& id : ingredient_set) {
    std::vector<Sample> own;
    for (const auto& r : corpus) {
      if (r.dish_type != dish_type) continue;
      for (const auto& ri : r.ingredients)
        if (ri.id == id) collect(r, ri, units, own);
    }
    auto summary = summarize(own);
    if (!summary) {
      const auto* ing = catalog.find_ingredient(id);
      std::vector<Sample> same_category;
      if (ing != nullptr) {
        for (const auto& r : corpus)
          for (const auto& ri : r.ingredients) {
            const auto* other = catalog.find_ingredient(ri.id);
            if (other != nullptr && other->category == ing->category) collect(r, ri, units, same_category);
          }
      }
      summary = summarize(same_category);
      if (summary)
        warn(warnings, "no corpus quantity for '" + id + "' in dish type '" + dish_type + "'; using category median");
    }
    if (!summary) {
      warn(warnings, "no quantity evidence for '" + id + "'; defaulting to 1 piece");
      summary = std::pair{1.0 / kServings, std::string{}};
    }
    RecipeIngredient ri;
    ri.id = id;
    ri.quantity = summary->first * kServings;
    ri.unit = summary->second;
    out.ingredients.push_back(std::move(ri));
  }
  return out;
}

Plan build_step_graph(const Recipe& recipe, const std::vector<Recipe>& corpus, const CompoundCatalog& catalog,
                      const ActionDurations& durations, Warnings* warnings) {
  if (recipe.ingredients.empty()) throw InvalidArgument("build_step_graph: recipe has no ingredients");

  const Recipe* best = nullptr;
  double best_overlap = -1.0;
  for (const auto& r : corpus) {
    if (r.dish_type != recipe.dish_type || r.steps.empty()) continue;
    double o = jaccard(recipe, r);
    if (o > best_overlap || (o == best_overlap && best != nullptr && r.id < best->id)) {
      best_overlap = o;
      best = &r;
    }
  }
  if (best == nullptr) {
    warn(warnings, "no step template for dish type '" + recipe.dish_type + "'; using prep/combine/cook chain");
    return fallback_chain(recipe, durations);
  }

  auto category_of = [&](const std::string& id) {
    const auto* ing = catalog.find_ingredient(id);
    return ing ? ing->category : Category::other;
  };

  // template ingredient -> recipe ingredient
  std::map<std::string, std::string> bind;
  std::set<std::string> bound;
  for (const auto& ti : best->ingredients)
    if (recipe.contains(ti.id)) {
      bind[ti.id] = ti.id;
      bound.insert(ti.id);
    }
  for (const auto& ti : best->ingredients) {
    if (bind.count(ti.id)) continue;
    for (const auto& ri : recipe.ingredients) {
      if (bound.count(ri.id) || category_of(ri.id) != category_of(ti.id)) continue;
      bind[ti.id] = ri.id;
      bound.insert(ri.id);
      break;
    }
  }

  Plan plan;
  std::map<std::string, std::size_t> ingredient_node;
  for (const auto& ri : recipe.ingredients)
    ingredient_node[ri.id] = add_node(plan, {"ing:" + ri.id, NodeKind::ingredient, ri.id, "", 0.0});

  std::map<std::string, std::size_t> output_node;  // template intermediate -> node
  std::vector<std::size_t> actions;
  std::vector<std::size_t> action_inputs;
  std::size_t dropped = 0;
  for (const auto& step : best->steps) {
    std::vector<std::size_t> inputs;
    for (const auto& in : step.inputs) {
      if (auto it = output_node.find(in); it != output_node.end()) {
        inputs.push_back(it->second);
      } else if (auto b = bind.find(in); b != bind.end()) {
        inputs.push_back(ingredient_node.at(b->second));
      }
    }
    if (inputs.empty()) {
      ++dropped;
      continue;
    }
    const double minutes = step.duration.value_or(durations.minutes(step.action));
    auto node = add_node(plan, {"a" + std::to_string(actions.size() + 1), NodeKind::action, step.action, step.tool, minutes});
    for (auto u : inputs) plan.edges.emplace_back(u, node);
    output_node[step.output] = node;
    actions.push_back(node);
    action_inputs.push_back(inputs.size());
  }
  if (actions.empty()) {
    warn(warnings, "template '" + best->id + "' kept no steps after binding; using prep/combine/cook chain");
    return fallback_chain(recipe, durations);
  }
  if (dropped > 0) warn(warnings, std::to_string(dropped) + " template step(s) lost all inputs and were dropped");

  std::vector<std::size_t> unbound;
  for (const auto& ri : recipe.ingredients)
    if (!bound.count(ri.id)) unbound.push_back(ingredient_node.at(ri.id));
  if (!unbound.empty()) {
    std::size_t target = actions.back();
    for (std::size_t i = 0; i < actions.size(); ++i)
      if (action_inputs[i] >= 2) {
        target = actions[i];
        break;
      }
    auto prep = add_node(plan, {"prep", NodeKind::action, "prep", "", durations.minutes("prep")});
    for (auto u : unbound) plan.edges.emplace_back(u, prep);
    plan.edges.emplace_back(prep, target);
  }
  return plan;
}

Plan schedule(Plan plan, std::size_t num_cooks) {
  if (num_cooks < 1) throw InvalidArgument("schedule: need at least one cook");
  topological_order(plan);  // rejects cycles
  const auto n = plan.nodes.size();
  for (const auto& node : plan.nodes)
    if (!(node.duration >= 0.0) || !std::isfinite(node.duration)) throw InvalidArgument("schedule: bad duration");

  std::vector<std::vector<std::size_t>> preds(n);
  for (auto [u, v] : plan.edges) preds[v].push_back(u);

  plan.cooks = num_cooks;
  plan.assignment.assign(n, 0);
  plan.start_times.assign(n, 0.0);
  std::vector<double> finish(n, 0.0);
  std::vector<bool> started(n, false);
  std::vector<double> cook_free(num_cooks, 0.0);
  std::size_t remaining = n;
  double now = 0.0;

  while (remaining > 0) {
    // ready: every predecessor started and finished by now
    std::optional<std::size_t> pick;
    for (std::size_t v = 0; v < n; ++v) {
      if (started[v]) continue;
      bool ready = std::all_of(preds[v].begin(), preds[v].end(),
                               [&](std::size_t u) { return started[u] && finish[u] <= now; });
      if (!ready) continue;
      const auto& a = plan.nodes[v];
      if (!pick || a.duration > plan.nodes[*pick].duration ||
          (a.duration == plan.nodes[*pick].duration && a.id < plan.nodes[*pick].id))
        pick = v;
    }
    std::optional<std::size_t> cook;
    for (std::size_t c = 0; c < num_cooks; ++c)
      if (cook_free[c] <= now) {
        cook = c;
        break;
      }
    if (pick && cook) {
      plan.assignment[*pick] = *cook;
      plan.start_times[*pick] = now;
      finish[*pick] = now + plan.nodes[*pick].duration;
      cook_free[*cook] = finish[*pick];
      started[*pick] = true;
      --remaining;
      continue;
    }
    double next = std::numeric_limits<double>::infinity();
    for (std::size_t v = 0; v < n; ++v)
      if (started[v] && finish[v] > now) next = std::min(next, finish[v]);
    if (!std::isfinite(next)) throw InvalidArgument("schedule: no progress possible");
    now = next;
  }
  plan.makespan = n ? *std::max_element(finish.begin(), finish.end()) : 0.0;
  return plan;
}

std::optional<std::string> check_plan(const Plan& plan) {
  try {
    topological_order(plan);
  } catch (const InvalidArgument& e) {
    return std::string(e.what());
  }
  if (!plan.scheduled()) return std::nullopt;
  const auto n = plan.nodes.size();
  if (plan.start_times.size() != n || plan.assignment.size() != n) return "schedule size mismatch";
  double makespan = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    if (plan.assignment[v] >= plan.cooks) return "node " + plan.nodes[v].id + " assigned to a missing cook";
    if (plan.start_times[v] < -kEps) return "negative start time";
    makespan = std::max(makespan, plan.start_times[v] + plan.nodes[v].duration);
  }
  for (auto [u, v] : plan.edges)
    if (plan.start_times[v] + kEps < plan.start_times[u] + plan.nodes[u].duration)
      return "node " + plan.nodes[v].id + " starts before input " + plan.nodes[u].id + " is ready";
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      if (plan.assignment[a] != plan.assignment[b]) continue;
      if (plan.nodes[a].duration <= 0.0 || plan.nodes[b].duration <= 0.0) continue;
      double sa = plan.start_times[a], fa = sa + plan.nodes[a].duration;
      double sb = plan.start_times[b], fb = sb + plan.nodes[b].duration;
      if (sa + kEps < fb && sb + kEps < fa)
        return "cook " + std::to_string(plan.assignment[a]) + " overlaps " + plan.nodes[a].id + " and " +
               plan.nodes[b].id;
    }
  if (std::abs(makespan - plan.makespan) > kEps) return "makespan is not the latest finish time";
  return std::nullopt;
}

nlohmann::json to_json(const Plan& plan) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : plan.nodes)
    nodes.push_back({{"id", n.id},
                     {"kind", n.kind == NodeKind::ingredient ? "ingredient" : "action"},
                     {"action", n.action},
                     {"tool", n.tool},
                     {"duration", n.duration}});
  nlohmann::json edges = nlohmann::json::array();
  for (auto [u, v] : plan.edges) edges.push_back({plan.nodes[u].id, plan.nodes[v].id});
  nlohmann::json assignment = nlohmann::json::object();
  nlohmann::json starts = nlohmann::json::object();
  if (plan.scheduled())
    for (std::size_t i = 0; i < plan.nodes.size(); ++i) {
      assignment[plan.nodes[i].id] = plan.assignment[i];
      starts[plan.nodes[i].id] = plan.start_times[i];
    }
  return {{"nodes", std::move(nodes)},    {"edges", std::move(edges)},  {"assignment", std::move(assignment)},
          {"start_times", std::move(starts)}, {"makespan", plan.makespan}, {"cooks", plan.cooks}};
}

Plan plan_from_json(const nlohmann::json& j) {
  try {
    Plan plan;
    std::map<std::string, std::size_t> index;
    for (const auto& n : j.at("nodes")) {
      PlanNode node;
      node.id = n.at("id").get<std::string>();
      node.kind = n.at("kind").get<std::string>() == "ingredient" ? NodeKind::ingredient : NodeKind::action;
      node.action = n.value("action", "");
      node.tool = n.value("tool", "");
      node.duration = n.value("duration", 0.0);
      if (!index.emplace(node.id, plan.nodes.size()).second) throw DataError("duplicate plan node '" + node.id + "'");
      plan.nodes.push_back(std::move(node));
    }
    for (const auto& e : j.at("edges"))
      plan.edges.emplace_back(index.at(e.at(0).get<std::string>()), index.at(e.at(1).get<std::string>()));
    const auto& assignment = j.value("assignment", nlohmann::json::object());
    if (!assignment.empty()) {
      plan.assignment.assign(plan.nodes.size(), 0);
      plan.start_times.assign(plan.nodes.size(), 0.0);
      const auto& starts = j.at("start_times");
      for (std::size_t i = 0; i < plan.nodes.size(); ++i) {
        plan.assignment[i] = assignment.at(plan.nodes[i].id).get<std::size_t>();
        plan.start_times[i] = starts.at(plan.nodes[i].id).get<double>();
      }
    }
    plan.makespan = j.value("makespan", 0.0);
    plan.cooks = j.value("cooks", std::size_t{0});
    return plan;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed plan: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw DataError(std::string("plan edge references an unknown node: ") + e.what());
  }
}

}  // namespace muse
