#include "rbnkit/step_system.hpp"

#include <algorithm>
#include <unordered_set>

namespace rbnkit {

std::size_t CountsHash::operator()(const Counts& c) const noexcept {
  std::size_t h = 1469598103934665603ULL;
  for (auto v : c) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

std::optional<std::uint32_t> StepSystem::index_of(const StateId& q) const {
  const auto& qs = states();
  auto it = std::find(qs.begin(), qs.end(), q);
  if (it == qs.end()) return std::nullopt;
  return static_cast<std::uint32_t>(it - qs.begin());
}

Counts StepSystem::to_counts(const Configuration& c) const {
  Counts out(states().size(), 0);
  for (const auto& [q, n] : c) {
    auto idx = index_of(q);
    if (!idx) throw Error(ErrorCode::UnknownState, "state '" + q.str() + "' is not declared");
    out[*idx] = static_cast<std::uint32_t>(n);
  }
  return out;
}

Configuration StepSystem::to_configuration(const Counts& c) const {
  Configuration out;
  const auto& qs = states();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] != 0) out.add(qs[i], c[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------

bool IoStepSystem::enabled(const Counts& c, const IONet::Indexed& t) const {
  if (t.source == t.observed) return c[t.source] >= 2;
  return c[t.source] >= 1 && c[t.observed] >= 1;
}

void IoStepSystem::successors(const Counts& c,
                              std::vector<std::pair<DenseStep, Counts>>& out) const {
  const auto& ts = net_.indexed();
  std::unordered_set<Counts, CountsHash> seen;
  for (std::uint32_t i = 0; i < ts.size(); ++i) {
    const auto& t = ts[i];
    if (!enabled(c, t)) continue;
    Counts next = c;
    --next[t.source];
    ++next[t.target];
    if (!seen.insert(next).second) continue;
    out.emplace_back(DenseStep{i, {}}, std::move(next));
  }
}

Step IoStepSystem::to_step(const DenseStep& s) const { return net_.transitions().at(s.primary); }

// ---------------------------------------------------------------------------

RbnStepSystem::RbnStepSystem(const RBN& net) : net_(net), receive_groups_(net.alphabet().size()) {
  const auto& ts = net_.indexed();
  for (std::uint32_t i = 0; i < ts.size(); ++i) {
    const auto& t = ts[i];
    if (t.kind == ActionKind::Broadcast) {
      broadcasts_.push_back(i);
      continue;
    }
    auto& groups = receive_groups_[t.message];
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const ReceiveGroup& g) { return g.source == t.source; });
    if (it == groups.end()) {
      groups.push_back({t.source, {i}});
    } else {
      it->transitions.push_back(i);
    }
  }
}

namespace {

// Enumerates every multiset of receive transitions drawn from `groups`
// such that no source state supplies more receivers than its capacity.
class ReceiverEnumerator {
 public:
  ReceiverEnumerator(const std::vector<RBN::Indexed>& ts,
                     std::vector<const std::vector<std::uint32_t>*> groups,
                     std::vector<std::uint32_t> capacity)
      : ts_(ts), groups_(std::move(groups)), capacity_(std::move(capacity)) {}

  template <typename Visit>
  void run(Counts& config, Visit&& visit) {
    chosen_.clear();
    group(0, config, visit);
  }

 private:
  template <typename Visit>
  void group(std::size_t g, Counts& config, Visit& visit) {
    if (g == groups_.size()) {
      visit(config, chosen_);
      return;
    }
    member(g, 0, capacity_[g], config, visit);
  }

  template <typename Visit>
  void member(std::size_t g, std::size_t k, std::uint32_t left, Counts& config, Visit& visit) {
    const auto& members = *groups_[g];
    if (k == members.size()) {
      group(g + 1, config, visit);
      return;
    }
    const auto idx = members[k];
    const auto& t = ts_[idx];
    std::uint32_t used = 0;
    member(g, k + 1, left, config, visit);
    while (used < left) {
      ++used;
      --config[t.source];
      ++config[t.target];
      chosen_.push_back(idx);
      member(g, k + 1, left - used, config, visit);
    }
    for (std::uint32_t i = 0; i < used; ++i) {
      ++config[t.source];
      --config[t.target];
      chosen_.pop_back();
    }
  }

  const std::vector<RBN::Indexed>& ts_;
  std::vector<const std::vector<std::uint32_t>*> groups_;
  std::vector<std::uint32_t> capacity_;
  std::vector<std::uint32_t> chosen_;
};

}  // namespace

void RbnStepSystem::successors(const Counts& c,
                               std::vector<std::pair<DenseStep, Counts>>& out) const {
  const auto& ts = net_.indexed();
  std::unordered_set<Counts, CountsHash> seen;
  for (auto b : broadcasts_) {
    const auto& bt = ts[b];
    if (c[bt.source] == 0) continue;
    // The sender is not available as a receiver.
    Counts pool = c;
    --pool[bt.source];

    std::vector<const std::vector<std::uint32_t>*> groups;
    std::vector<std::uint32_t> capacity;
    for (const auto& g : receive_groups_[bt.message]) {
      if (pool[g.source] == 0) continue;
      groups.push_back(&g.transitions);
      capacity.push_back(pool[g.source]);
    }

    Counts config = c;
    --config[bt.source];
    ++config[bt.target];
    ReceiverEnumerator e(ts, std::move(groups), std::move(capacity));
    e.run(config, [&](const Counts& next, const std::vector<std::uint32_t>& chosen) {
      if (!seen.insert(next).second) return;
      DenseStep step{b, chosen};
      std::sort(step.receives.begin(), step.receives.end());
      out.emplace_back(std::move(step), next);
    });
  }
}

Step RbnStepSystem::to_step(const DenseStep& s) const {
  const auto& ts = net_.transitions();
  RBNStep step{ts.at(s.primary), {}};
  step.receives.reserve(s.receives.size());
  for (auto r : s.receives) step.receives.push_back(ts.at(r));
  return step;
}

std::unique_ptr<StepSystem> make_step_system(const Net& net) {
  if (const auto* io = std::get_if<IONet>(&net)) return std::make_unique<IoStepSystem>(*io);
  return std::make_unique<RbnStepSystem>(std::get<RBN>(net));
}

}  // namespace rbnkit
