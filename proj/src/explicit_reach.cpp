#include "rbnkit/explicit_reach.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

namespace rbnkit {

void PopulationRange::validate() const {
  if (first > last) {
    throw Error(ErrorCode::EmptyRange,
                "population range " + std::to_string(first) + ".." + std::to_string(last) + " is empty");
  }
}

namespace {

// Cube bounds resolved against a state list. States named by the cube but
// absent from the list are rejected.
class DenseCube {
 public:
  DenseCube(const StepSystem& sys, const Cube& cube) {
    const auto& qs = sys.states();
    bounds_.reserve(qs.size());
    for (const auto& q : qs) bounds_.push_back(cube.bounds(q));
    for (const auto& [q, b] : cube.explicit_bounds()) {
      if (!sys.index_of(q)) {
        throw Error(ErrorCode::UnknownState, "cube names undeclared state '" + q.str() + "'");
      }
    }
  }

  [[nodiscard]] bool contains(const Counts& c) const {
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (!bounds_[i].admits(c[i])) return false;
    }
    return true;
  }

 private:
  std::vector<Bounds> bounds_;
};

/// Breadth-first exploration from a list of seeds with parent links for
/// witness reconstruction.
class Explorer {
 public:
  Explorer(const StepSystem& sys, std::size_t budget) : sys_(sys), budget_(budget) {}

  struct Outcome {
    std::optional<std::size_t> goal;
    bool partial = false;
  };

  Outcome run(const std::vector<Counts>& seeds, const DenseCube* goal, bool stop_at_goal) {
    Outcome outcome;
    std::deque<std::size_t> queue;
    auto discover = [&](Counts c, std::int64_t parent, DenseStep step) -> bool {
      if (index_.contains(c)) return false;
      if (nodes_.size() >= budget_) {
        outcome.partial = true;
        return true;
      }
      const auto id = nodes_.size();
      index_.emplace(c, id);
      nodes_.push_back(std::move(c));
      parents_.push_back(parent);
      steps_.push_back(std::move(step));
      queue.push_back(id);
      if (goal && !outcome.goal && goal->contains(nodes_.back())) {
        outcome.goal = id;
        if (stop_at_goal) return true;
      }
      return false;
    };

    for (const auto& s : seeds) {
      if (discover(s, -1, {})) return outcome;
    }
    std::vector<std::pair<DenseStep, Counts>> succ;
    while (!queue.empty()) {
      const auto id = queue.front();
      queue.pop_front();
      succ.clear();
      sys_.successors(nodes_[id], succ);
      for (auto& [step, next] : succ) {
        if (discover(std::move(next), static_cast<std::int64_t>(id), std::move(step))) {
          return outcome;
        }
      }
    }
    return outcome;
  }

  [[nodiscard]] Trace trace_to(std::size_t id) const {
    std::vector<std::size_t> path;
    for (auto cur = static_cast<std::int64_t>(id); cur >= 0; cur = parents_[cur]) {
      path.push_back(static_cast<std::size_t>(cur));
    }
    std::reverse(path.begin(), path.end());
    Trace trace;
    trace.initial = sys_.to_configuration(nodes_[path.front()]);
    for (std::size_t i = 1; i < path.size(); ++i) {
      trace.steps.push_back({sys_.to_step(steps_[path[i]]), sys_.to_configuration(nodes_[path[i]])});
    }
    return trace;
  }

  [[nodiscard]] const std::vector<Counts>& nodes() const { return nodes_; }

 private:
  const StepSystem& sys_;
  std::size_t budget_;
  std::vector<Counts> nodes_;
  std::vector<std::int64_t> parents_;
  std::vector<DenseStep> steps_;
  std::unordered_map<Counts, std::size_t, CountsHash> index_;
};

void enumerate_counts(const std::vector<Bounds>& bounds, std::size_t i, Count left, Counts& cur,
                      std::vector<Counts>& out) {
  if (i + 1 == bounds.size()) {
    if (bounds[i].admits(left)) {
      cur[i] = static_cast<std::uint32_t>(left);
      out.push_back(cur);
    }
    return;
  }
  const auto hi = bounds[i].upper ? std::min(*bounds[i].upper, left) : left;
  for (Count n = bounds[i].lower; n <= hi; ++n) {
    cur[i] = static_cast<std::uint32_t>(n);
    enumerate_counts(bounds, i + 1, left - n, cur, out);
  }
  cur[i] = 0;
}

std::vector<Counts> counts_in_cube(const std::vector<StateId>& states, const Cube& cube,
                                   Count population) {
  std::vector<Counts> out;
  if (states.empty()) {
    if (population == 0) out.emplace_back();
    return out;
  }
  std::vector<Bounds> bounds;
  bounds.reserve(states.size());
  for (const auto& q : states) bounds.push_back(cube.bounds(q));
  Counts cur(states.size(), 0);
  enumerate_counts(bounds, 0, population, cur, out);
  return out;
}

void require_consistent(const Cube& cube, const char* what) {
  if (!cube.consistent()) {
    throw Error(ErrorCode::Inconsistent, std::string(what) + " cube is inconsistent");
  }
}

}  // namespace

std::vector<Configuration> configurations_in_cube(const std::vector<StateId>& states,
                                                  const Cube& cube, Count population) {
  std::vector<Configuration> out;
  for (const auto& c : counts_in_cube(states, cube, population)) {
    Configuration config;
    for (std::size_t i = 0; i < c.size(); ++i) config.add(states[i], c[i]);
    out.push_back(std::move(config));
  }
  return out;
}

namespace {

ReachResult explore_from(const StepSystem& sys, const Configuration& c0, const Cube* goal,
                         ExploreLimits limits) {
  std::optional<DenseCube> dense_goal;
  if (goal) dense_goal.emplace(sys, *goal);
  Explorer explorer(sys, limits.node_budget);
  const auto outcome = explorer.run({sys.to_counts(c0)}, dense_goal ? &*dense_goal : nullptr, false);

  ReachResult result;
  result.population = c0.population();
  result.partial = outcome.partial;
  result.explored = explorer.nodes().size();
  for (const auto& c : explorer.nodes()) result.reachable.insert(sys.to_configuration(c));
  if (outcome.goal) result.witness = explorer.trace_to(*outcome.goal);
  return result;
}

}  // namespace

ReachResult post_star(const StepSystem& sys, const Configuration& c0, ExploreLimits limits) {
  return explore_from(sys, c0, nullptr, limits);
}

ReachResult post_star(const StepSystem& sys, const Configuration& c0, const Cube& goal,
                      ExploreLimits limits) {
  return explore_from(sys, c0, &goal, limits);
}

ReachResult post_star(const IONet& net, const Configuration& c0, ExploreLimits limits) {
  return post_star(IoStepSystem(net), c0, limits);
}

ReachResult post_star(const RBN& net, const Configuration& c0, ExploreLimits limits) {
  return post_star(RbnStepSystem(net), c0, limits);
}

BoundedResult reach_bounded(const StepSystem& sys, const Cube& from, const Cube& to,
                            PopulationRange populations, ExploreLimits limits) {
  require_consistent(from, "initial");
  require_consistent(to, "target");
  populations.validate();
  DenseCube source(sys, from);
  DenseCube goal(sys, to);

  BoundedResult result;
  for (Count n = populations.first; n <= populations.last; ++n) {
    const auto seeds = counts_in_cube(sys.states(), from, n);
    if (seeds.empty()) continue;
    Explorer explorer(sys, limits.node_budget);
    const auto outcome = explorer.run(seeds, &goal, true);
    result.explored += explorer.nodes().size();
    if (outcome.goal) {
      result.verdict = BoundedVerdict::Yes;
      result.witness = explorer.trace_to(*outcome.goal);
      return result;
    }
    if (outcome.partial) {
      throw Error(ErrorCode::BudgetExceeded, "node budget of " + std::to_string(limits.node_budget) +
                                                 " exhausted at population " + std::to_string(n));
    }
  }
  return result;
}

BoundedResult reach_bounded(const IONet& net, const Cube& from, const Cube& to,
                            PopulationRange populations, ExploreLimits limits) {
  return reach_bounded(IoStepSystem(net), from, to, populations, limits);
}

BoundedResult reach_bounded(const RBN& net, const Cube& from, const Cube& to,
                            PopulationRange populations, ExploreLimits limits) {
  return reach_bounded(RbnStepSystem(net), from, to, populations, limits);
}

std::set<StateId> coverable_states_explicit(const StepSystem& sys,
                                            const std::set<StateId>& support, Count max_pop,
                                            ExploreLimits limits) {
  Cube from = Cube::initial();
  for (const auto& q : support) {
    if (!sys.index_of(q)) {
      throw Error(ErrorCode::UnknownState, "support names undeclared state '" + q.str() + "'");
    }
    from.set(q, Bounds::at_least(0));
  }
  std::vector<bool> seen(sys.states().size(), false);
  for (Count n = 1; n <= max_pop && !support.empty(); ++n) {
    Explorer explorer(sys, limits.node_budget);
    const auto outcome = explorer.run(counts_in_cube(sys.states(), from, n), nullptr, false);
    if (outcome.partial) {
      throw Error(ErrorCode::BudgetExceeded, "node budget of " + std::to_string(limits.node_budget) +
                                                 " exhausted at population " + std::to_string(n));
    }
    for (const auto& c : explorer.nodes()) {
      for (std::size_t i = 0; i < c.size(); ++i) seen[i] = seen[i] || c[i] > 0;
    }
  }
  std::set<StateId> out;
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (seen[i]) out.insert(sys.states()[i]);
  }
  return out;
}

std::set<StateId> coverable_states_explicit(const RBN& net, const std::set<StateId>& support,
                                            Count max_pop, ExploreLimits limits) {
  return coverable_states_explicit(RbnStepSystem(net), support, max_pop, limits);
}

}  // namespace rbnkit
