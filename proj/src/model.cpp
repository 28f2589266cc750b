#include "rbnkit/model.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "rbnkit/step_system.hpp"

namespace rbnkit {

bool is_valid_name(std::string_view name) {
  if (name.empty()) return false;
  return std::all_of(name.begin(), name.end(), [](char ch) {
    return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') ||
           ch == '_' || ch == '\'';
  });
}

// ---------------------------------------------------------------------------
// Configuration

Configuration::Configuration(std::initializer_list<std::pair<std::string, Count>> entries) {
  for (const auto& [name, n] : entries) add(StateId{name}, n);
}

Count Configuration::count(const StateId& q) const {
  auto it = counts_.find(q);
  return it == counts_.end() ? 0 : it->second;
}

Count Configuration::population() const {
  return std::accumulate(counts_.begin(), counts_.end(), Count{0},
                         [](Count acc, const auto& kv) { return acc + kv.second; });
}

std::vector<StateId> Configuration::support() const {
  std::vector<StateId> out;
  out.reserve(counts_.size());
  for (const auto& [q, n] : counts_) out.push_back(q);
  return out;
}

void Configuration::add(const StateId& q, Count n) {
  if (n == 0) return;
  counts_[q] += n;
}

void Configuration::remove(const StateId& q, Count n) {
  if (n == 0) return;
  auto it = counts_.find(q);
  if (it == counts_.end() || it->second < n) {
    throw Error(ErrorCode::Disabled, "fewer than " + std::to_string(n) + " processes in '" +
                                         q.str() + "'");
  }
  it->second -= n;
  if (it->second == 0) counts_.erase(it);
}

bool Configuration::contains(const Configuration& sub) const {
  return std::all_of(sub.begin(), sub.end(),
                     [&](const auto& kv) { return count(kv.first) >= kv.second; });
}

Configuration& Configuration::operator+=(const Configuration& other) {
  for (const auto& [q, n] : other) add(q, n);
  return *this;
}

std::string to_string(const Configuration& c) {
  std::string out = "{";
  bool first = true;
  for (const auto& [q, n] : c) {
    if (!first) out += ", ";
    first = false;
    out += q.str() + ":" + std::to_string(n);
  }
  out += "}";
  return out;
}

// ---------------------------------------------------------------------------
// Nets

namespace {

std::unordered_map<std::string, std::uint32_t> index_states(const std::vector<StateId>& states) {
  std::unordered_map<std::string, std::uint32_t> index;
  for (std::uint32_t i = 0; i < states.size(); ++i) {
    if (!index.emplace(states[i].str(), i).second) {
      throw Error(ErrorCode::DuplicateState, "state '" + states[i].str() + "' declared twice");
    }
  }
  return index;
}

std::uint32_t lookup(const std::unordered_map<std::string, std::uint32_t>& index,
                     const std::string& name, const char* what) {
  auto it = index.find(name);
  if (it == index.end()) {
    throw Error(ErrorCode::UnknownState, std::string(what) + " '" + name + "' is not declared");
  }
  return it->second;
}

}  // namespace

std::string to_string(const IOTransition& t) {
  return t.source.str() + " @ " + t.observed.str() + " -> " + t.target.str();
}

IONet::IONet(std::vector<StateId> states, std::vector<IOTransition> transitions)
    : states_(std::move(states)), index_(index_states(states_)) {
  std::vector<std::pair<Indexed, IOTransition>> items;
  items.reserve(transitions.size());
  for (auto& t : transitions) {
    Indexed ix{lookup(index_, t.source.str(), "state"), lookup(index_, t.observed.str(), "state"),
               lookup(index_, t.target.str(), "state")};
    items.emplace_back(ix, std::move(t));
  }
  auto key = [](const Indexed& ix) { return std::tuple(ix.source, ix.observed, ix.target); };
  std::sort(items.begin(), items.end(),
            [&](const auto& a, const auto& b) { return key(a.first) < key(b.first); });
  for (std::size_t i = 1; i < items.size(); ++i) {
    if (key(items[i - 1].first) == key(items[i].first)) {
      throw Error(ErrorCode::DuplicateTransition, to_string(items[i].second));
    }
  }
  for (auto& [ix, t] : items) {
    indexed_.push_back(ix);
    transitions_.push_back(std::move(t));
  }
}

std::optional<std::uint32_t> IONet::index_of(const StateId& q) const {
  auto it = index_.find(q.str());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::uint32_t IONet::require_index(const StateId& q) const {
  return lookup(index_, q.str(), "state");
}

bool IONet::has_transition(const IOTransition& t) const {
  return std::find(transitions_.begin(), transitions_.end(), t) != transitions_.end();
}

std::string to_string(const RBNTransition& t) {
  return t.source.str() + (t.is_broadcast() ? " !" : " ?") + t.action.message.str() + " -> " +
         t.target.str();
}

RBN::RBN(std::vector<StateId> states, std::vector<MessageId> alphabet,
         std::vector<RBNTransition> transitions)
    : states_(std::move(states)), alphabet_(std::move(alphabet)), index_(index_states(states_)) {
  for (std::uint32_t i = 0; i < alphabet_.size(); ++i) {
    if (!message_index_.emplace(alphabet_[i].str(), i).second) {
      throw Error(ErrorCode::DuplicateState, "message '" + alphabet_[i].str() + "' declared twice");
    }
  }
  std::vector<std::pair<Indexed, RBNTransition>> items;
  items.reserve(transitions.size());
  for (auto& t : transitions) {
    Indexed ix{lookup(index_, t.source.str(), "state"), t.action.kind,
               lookup(message_index_, t.action.message.str(), "message"),
               lookup(index_, t.target.str(), "state")};
    items.emplace_back(ix, std::move(t));
  }
  auto key = [](const Indexed& ix) {
    return std::tuple(ix.source, static_cast<int>(ix.kind), ix.message, ix.target);
  };
  std::sort(items.begin(), items.end(),
            [&](const auto& a, const auto& b) { return key(a.first) < key(b.first); });
  for (std::size_t i = 1; i < items.size(); ++i) {
    if (key(items[i - 1].first) == key(items[i].first)) {
      throw Error(ErrorCode::DuplicateTransition, to_string(items[i].second));
    }
  }
  for (auto& [ix, t] : items) {
    indexed_.push_back(ix);
    transitions_.push_back(std::move(t));
  }
}

std::optional<std::uint32_t> RBN::index_of(const StateId& q) const {
  auto it = index_.find(q.str());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::uint32_t RBN::require_index(const StateId& q) const { return lookup(index_, q.str(), "state"); }

std::optional<std::uint32_t> RBN::message_index(const MessageId& m) const {
  auto it = message_index_.find(m.str());
  if (it == message_index_.end()) return std::nullopt;
  return it->second;
}

bool RBN::has_transition(const RBNTransition& t) const {
  return std::find(transitions_.begin(), transitions_.end(), t) != transitions_.end();
}

std::string to_string(const RBNStep& s) {
  std::string out = to_string(s.broadcast) + " recv [";
  for (std::size_t i = 0; i < s.receives.size(); ++i) {
    const auto& r = s.receives[i];
    if (i) out += ", ";
    out += r.source.str() + "?" + r.action.message.str() + "->" + r.target.str();
  }
  return out + "]";
}

// ---------------------------------------------------------------------------
// Semantics

namespace {

template <typename Net>
void require_known_states(const Net& net, const Configuration& c) {
  for (const auto& [q, n] : c) {
    if (!net.index_of(q)) {
      throw Error(ErrorCode::UnknownState, "state '" + q.str() + "' is not declared");
    }
  }
}

}  // namespace

Configuration io_apply(const IONet& net, const Configuration& c, const IOTransition& t) {
  if (!net.has_transition(t)) throw Error(ErrorCode::UnknownTransition, to_string(t));
  require_known_states(net, c);
  Configuration needed;
  needed.add(t.source);
  needed.add(t.observed);
  if (!c.contains(needed)) {
    throw Error(ErrorCode::Disabled, to_string(t) + " in " + to_string(c));
  }
  Configuration out = c;
  out.remove(t.source);
  out.add(t.target);
  return out;
}

std::vector<std::pair<IOTransition, Configuration>> io_successors(const IONet& net,
                                                                  const Configuration& c) {
  IoStepSystem sys(net);
  std::vector<std::pair<DenseStep, Counts>> dense;
  sys.successors(sys.to_counts(c), dense);
  std::vector<std::pair<IOTransition, Configuration>> out;
  out.reserve(dense.size());
  for (const auto& [step, next] : dense) {
    out.emplace_back(net.transitions()[step.primary], sys.to_configuration(next));
  }
  return out;
}

Configuration rbn_apply(const RBN& net, const Configuration& c, const RBNStep& s) {
  if (!s.broadcast.is_broadcast()) {
    throw Error(ErrorCode::UnknownTransition, "step must start with a broadcast");
  }
  if (!net.has_transition(s.broadcast)) throw Error(ErrorCode::UnknownTransition, to_string(s.broadcast));
  for (const auto& r : s.receives) {
    if (r.is_broadcast() || r.action.message != s.broadcast.action.message) {
      throw Error(ErrorCode::MessageMismatch, to_string(r) + " does not receive " +
                                                  s.broadcast.action.message.str());
    }
    if (!net.has_transition(r)) throw Error(ErrorCode::UnknownTransition, to_string(r));
  }
  require_known_states(net, c);

  Configuration sources;
  sources.add(s.broadcast.source);
  for (const auto& r : s.receives) sources.add(r.source);
  if (!c.contains(sources)) {
    throw Error(ErrorCode::Disabled, to_string(s) + " in " + to_string(c));
  }
  Configuration out = c;
  out.remove(s.broadcast.source);
  for (const auto& r : s.receives) out.remove(r.source);
  out.add(s.broadcast.target);
  for (const auto& r : s.receives) out.add(r.target);
  return out;
}

std::vector<std::pair<RBNStep, Configuration>> rbn_successors(const RBN& net,
                                                              const Configuration& c) {
  RbnStepSystem sys(net);
  std::vector<std::pair<DenseStep, Counts>> dense;
  sys.successors(sys.to_counts(c), dense);
  std::vector<std::pair<RBNStep, Configuration>> out;
  out.reserve(dense.size());
  for (const auto& [step, next] : dense) {
    out.emplace_back(std::get<RBNStep>(sys.to_step(step)), sys.to_configuration(next));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cubes

Cube& Cube::set(const StateId& q, Bounds b) {
  bounds_[q] = b;
  return *this;
}

Bounds Cube::default_bounds() const {
  return role_ == Role::Initial ? Bounds::exactly(0) : Bounds::at_least(0);
}

Bounds Cube::bounds(const StateId& q) const {
  auto it = bounds_.find(q);
  return it == bounds_.end() ? default_bounds() : it->second;
}

bool Cube::consistent() const {
  return std::all_of(bounds_.begin(), bounds_.end(),
                     [](const auto& kv) { return kv.second.consistent(); });
}

std::string to_string(const Cube& cube) {
  std::string out;
  for (const auto& [q, b] : cube.explicit_bounds()) {
    if (!out.empty()) out += " ";
    out += q.str() + ":[" + std::to_string(b.lower) + "," +
           (b.upper ? std::to_string(*b.upper) : std::string("*")) + "]";
  }
  return out;
}

bool cube_contains(const Cube& cube, const Configuration& c) {
  for (const auto& [q, b] : cube.explicit_bounds()) {
    if (!b.admits(c.count(q))) return false;
  }
  const auto dflt = cube.default_bounds();
  for (const auto& [q, n] : c) {
    if (!cube.explicit_bounds().contains(q) && !dflt.admits(n)) return false;
  }
  return true;
}

Configuration cube_min_config(const Cube& cube) {
  Configuration out;
  for (const auto& [q, b] : cube.explicit_bounds()) {
    if (!b.consistent()) {
      throw Error(ErrorCode::Inconsistent, "lower bound exceeds upper bound for '" + q.str() + "'");
    }
    out.add(q, b.lower);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Traces

std::string to_string(const Step& s) {
  return std::visit(
      [](const auto& step) -> std::string {
        using T = std::decay_t<decltype(step)>;
        if constexpr (std::is_same_v<T, IOTransition>) {
          return "io " + to_string(step);
        } else {
          return "bcast " + to_string(step);
        }
      },
      s);
}

namespace {

template <typename Net, typename StepT, typename Apply>
std::optional<std::string> replay(const Net& net, const Trace& trace, Apply apply) {
  Configuration current = trace.initial;
  const auto population = current.population();
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& ts = trace.steps[i];
    const auto* step = std::get_if<StepT>(&ts.step);
    if (!step) return "step " + std::to_string(i) + " belongs to the other model";
    try {
      current = apply(net, current, *step);
    } catch (const Error& e) {
      return "step " + std::to_string(i) + ": " + e.what();
    }
    if (current != ts.after) {
      return "step " + std::to_string(i) + " yields " + to_string(current) + ", trace records " +
             to_string(ts.after);
    }
    if (current.population() != population) {
      return "step " + std::to_string(i) + " changes the population";
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::string> trace_error(const IONet& net, const Trace& trace) {
  try {
    require_known_states(net, trace.initial);
  } catch (const Error& e) {
    return std::string(e.what());
  }
  return replay<IONet, IOTransition>(net, trace, io_apply);
}

std::optional<std::string> trace_error(const RBN& net, const Trace& trace) {
  try {
    require_known_states(net, trace.initial);
  } catch (const Error& e) {
    return std::string(e.what());
  }
  return replay<RBN, RBNStep>(net, trace, rbn_apply);
}

}  // namespace rbnkit
