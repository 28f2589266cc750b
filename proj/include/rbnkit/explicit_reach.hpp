#pragma once

#include <cstddef>
#include <optional>
#include <set>

#include "rbnkit/model.hpp"
#include "rbnkit/step_system.hpp"

namespace rbnkit {

struct ExploreLimits {
  std::size_t node_budget = 1'000'000;
};

/// Inclusive population interval, written A..B on the command line.
struct PopulationRange {
  Count first = 0;
  Count last = 0;

  // Throws EmptyRange when first > last.
  void validate() const;
};

struct ReachResult {
  std::set<Configuration> reachable;
  // Shortest run into the goal cube, when a goal was given and reached.
  std::optional<Trace> witness;
  std::size_t explored = 0;
  Count population = 0;
  // The node budget was hit; `reachable` is an under-approximation.
  bool partial = false;
};

ReachResult post_star(const StepSystem& sys, const Configuration& c0, ExploreLimits limits = {});
ReachResult post_star(const StepSystem& sys, const Configuration& c0, const Cube& goal,
                      ExploreLimits limits = {});
ReachResult post_star(const IONet& net, const Configuration& c0, ExploreLimits limits = {});
ReachResult post_star(const RBN& net, const Configuration& c0, ExploreLimits limits = {});

enum class BoundedVerdict { Yes, NoAtBounds };

struct BoundedResult {
  BoundedVerdict verdict = BoundedVerdict::NoAtBounds;
  std::optional<Trace> witness;
  std::size_t explored = 0;
};

/// Searches every population in `populations` for a run from a member of
/// `from` to a member of `to`. NoAtBounds is inconclusive outside the range.
/// Throws Inconsistent, EmptyRange, UnknownState, BudgetExceeded.
BoundedResult reach_bounded(const StepSystem& sys, const Cube& from, const Cube& to,
                            PopulationRange populations, ExploreLimits limits = {});
BoundedResult reach_bounded(const IONet& net, const Cube& from, const Cube& to,
                            PopulationRange populations, ExploreLimits limits = {});
BoundedResult reach_bounded(const RBN& net, const Cube& from, const Cube& to,
                            PopulationRange populations, ExploreLimits limits = {});

/// States occupied in some configuration reachable from an initial
/// configuration of population at most `max_pop` supported on `support`.
std::set<StateId> coverable_states_explicit(const RBN& net, const std::set<StateId>& support,
                                            Count max_pop, ExploreLimits limits = {});
std::set<StateId> coverable_states_explicit(const StepSystem& sys,
                                            const std::set<StateId>& support, Count max_pop,
                                            ExploreLimits limits = {});

/// All configurations over `states` of exactly `population` processes that
/// lie in `cube`, in lexicographic order of their count vectors.
std::vector<Configuration> configurations_in_cube(const std::vector<StateId>& states,
                                                  const Cube& cube, Count population);

}  // namespace rbnkit
