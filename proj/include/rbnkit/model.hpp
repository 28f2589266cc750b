#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "rbnkit/error.hpp"

namespace rbnkit {

using Count = std::uint64_t;

bool is_valid_name(std::string_view name);

// A name drawn from [A-Za-z0-9_'], tagged so that states and messages do not mix.
template <typename Tag>
class Name {
 public:
  Name() = default;
  explicit Name(std::string name) : name_(std::move(name)) {
    if (!is_valid_name(name_)) {
      throw Error(ErrorCode::InvalidName, "invalid name '" + name_ + "'");
    }
  }

  [[nodiscard]] const std::string& str() const noexcept { return name_; }

  auto operator<=>(const Name&) const = default;
  bool operator==(const Name&) const = default;

 private:
  std::string name_;
};

struct StateTag {};
struct MessageTag {};
using StateId = Name<StateTag>;
using MessageId = Name<MessageTag>;

/// Multiset of states. Zero counts are never stored, so two configurations
/// are equal exactly when they denote the same multiset.
class Configuration {
 public:
  using Map = std::map<StateId, Count>;

  Configuration() = default;
  Configuration(std::initializer_list<std::pair<std::string, Count>> entries);

  [[nodiscard]] Count count(const StateId& q) const;
  [[nodiscard]] Count population() const;
  [[nodiscard]] bool empty() const { return counts_.empty(); }
  [[nodiscard]] std::vector<StateId> support() const;
  [[nodiscard]] const Map& counts() const { return counts_; }

  void add(const StateId& q, Count n = 1);
  // Throws Disabled when fewer than n processes occupy q.
  void remove(const StateId& q, Count n = 1);

  // Multiset inclusion.
  [[nodiscard]] bool contains(const Configuration& sub) const;

  Configuration& operator+=(const Configuration& other);
  friend Configuration operator+(Configuration lhs, const Configuration& rhs) {
    lhs += rhs;
    return lhs;
  }

  auto begin() const { return counts_.begin(); }
  auto end() const { return counts_.end(); }

  bool operator==(const Configuration&) const = default;
  auto operator<=>(const Configuration&) const = default;

 private:
  Map counts_;
};

std::string to_string(const Configuration& c);

// ---------------------------------------------------------------------------
// IO nets

/// `source` observes a process in `observed` and moves to `target`.
struct IOTransition {
  StateId source;
  StateId observed;
  StateId target;

  auto operator<=>(const IOTransition&) const = default;
  bool operator==(const IOTransition&) const = default;
};

std::string to_string(const IOTransition& t);

class IONet {
 public:
  struct Indexed {
    std::uint32_t source;
    std::uint32_t observed;
    std::uint32_t target;
  };

  IONet() = default;
  // Throws DuplicateState, UnknownState, DuplicateTransition.
  IONet(std::vector<StateId> states, std::vector<IOTransition> transitions);

  [[nodiscard]] const std::vector<StateId>& states() const { return states_; }
  // Canonical order: lexicographic over declaration indices.
  [[nodiscard]] const std::vector<IOTransition>& transitions() const { return transitions_; }
  [[nodiscard]] const std::vector<Indexed>& indexed() const { return indexed_; }

  [[nodiscard]] std::optional<std::uint32_t> index_of(const StateId& q) const;
  [[nodiscard]] std::uint32_t require_index(const StateId& q) const;
  [[nodiscard]] bool has_transition(const IOTransition& t) const;

  bool operator==(const IONet& other) const {
    return states_ == other.states_ && transitions_ == other.transitions_;
  }

 private:
  std::vector<StateId> states_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<IOTransition> transitions_;
  std::vector<Indexed> indexed_;
};

// ---------------------------------------------------------------------------
// Reconfigurable broadcast networks

enum class ActionKind : std::uint8_t { Broadcast, Receive };

struct Action {
  ActionKind kind = ActionKind::Broadcast;
  MessageId message;

  auto operator<=>(const Action&) const = default;
  bool operator==(const Action&) const = default;
};

struct RBNTransition {
  StateId source;
  Action action;
  StateId target;

  static RBNTransition broadcast(StateId source, MessageId m, StateId target) {
    return {std::move(source), {ActionKind::Broadcast, std::move(m)}, std::move(target)};
  }
  static RBNTransition receive(StateId source, MessageId m, StateId target) {
    return {std::move(source), {ActionKind::Receive, std::move(m)}, std::move(target)};
  }

  [[nodiscard]] bool is_broadcast() const { return action.kind == ActionKind::Broadcast; }

  auto operator<=>(const RBNTransition&) const = default;
  bool operator==(const RBNTransition&) const = default;
};

std::string to_string(const RBNTransition& t);

class RBN {
 public:
  struct Indexed {
    std::uint32_t source;
    ActionKind kind;
    std::uint32_t message;
    std::uint32_t target;
  };

  RBN() = default;
  RBN(std::vector<StateId> states, std::vector<MessageId> alphabet,
      std::vector<RBNTransition> transitions);

  [[nodiscard]] const std::vector<StateId>& states() const { return states_; }
  [[nodiscard]] const std::vector<MessageId>& alphabet() const { return alphabet_; }
  // Canonical order: source, kind (broadcasts first), message, target.
  [[nodiscard]] const std::vector<RBNTransition>& transitions() const { return transitions_; }
  [[nodiscard]] const std::vector<Indexed>& indexed() const { return indexed_; }

  [[nodiscard]] std::optional<std::uint32_t> index_of(const StateId& q) const;
  [[nodiscard]] std::uint32_t require_index(const StateId& q) const;
  [[nodiscard]] std::optional<std::uint32_t> message_index(const MessageId& m) const;
  [[nodiscard]] bool has_transition(const RBNTransition& t) const;

  bool operator==(const RBN& other) const {
    return states_ == other.states_ && alphabet_ == other.alphabet_ &&
           transitions_ == other.transitions_;
  }

 private:
  std::vector<StateId> states_;
  std::vector<MessageId> alphabet_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::unordered_map<std::string, std::uint32_t> message_index_;
  std::vector<RBNTransition> transitions_;
  std::vector<Indexed> indexed_;
};

using Net = std::variant<IONet, RBN>;

/// One broadcast plus the receives it triggers in other processes (possibly none).
struct RBNStep {
  RBNTransition broadcast;
  std::vector<RBNTransition> receives;

  bool operator==(const RBNStep&) const = default;
};

std::string to_string(const RBNStep& s);

// ---------------------------------------------------------------------------
// Semantics

Configuration io_apply(const IONet& net, const Configuration& c, const IOTransition& t);
std::vector<std::pair<IOTransition, Configuration>> io_successors(const IONet& net,
                                                                  const Configuration& c);

Configuration rbn_apply(const RBN& net, const Configuration& c, const RBNStep& s);
std::vector<std::pair<RBNStep, Configuration>> rbn_successors(const RBN& net,
                                                              const Configuration& c);

// ---------------------------------------------------------------------------
// Cubes

/// Closed interval of counts; an empty `upper` means unbounded.
struct Bounds {
  Count lower = 0;
  std::optional<Count> upper;

  [[nodiscard]] bool admits(Count n) const { return n >= lower && (!upper || n <= *upper); }
  [[nodiscard]] bool consistent() const { return !upper || lower <= *upper; }

  static Bounds exactly(Count n) { return {n, n}; }
  static Bounds at_least(Count n) { return {n, std::nullopt}; }

  bool operator==(const Bounds&) const = default;
};

class Cube {
 public:
  // Unlisted states default to [0,0] in an initial cube and [0,inf] in a target cube.
  enum class Role { Initial, Target };

  explicit Cube(Role role = Role::Target) : role_(role) {}
  static Cube initial() { return Cube(Role::Initial); }
  static Cube target() { return Cube(Role::Target); }

  Cube& set(const StateId& q, Bounds b);

  [[nodiscard]] Role role() const { return role_; }
  [[nodiscard]] Bounds default_bounds() const;
  [[nodiscard]] Bounds bounds(const StateId& q) const;
  [[nodiscard]] const std::map<StateId, Bounds>& explicit_bounds() const { return bounds_; }
  [[nodiscard]] bool consistent() const;

  bool operator==(const Cube&) const = default;

 private:
  Role role_;
  std::map<StateId, Bounds> bounds_;
};

std::string to_string(const Cube& cube);

bool cube_contains(const Cube& cube, const Configuration& c);
// Throws Inconsistent if some lower bound exceeds its upper bound.
Configuration cube_min_config(const Cube& cube);

// ---------------------------------------------------------------------------
// Traces

using Step = std::variant<IOTransition, RBNStep>;

struct TraceStep {
  Step step;
  Configuration after;

  bool operator==(const TraceStep&) const = default;
};

struct Trace {
  Configuration initial;
  std::vector<TraceStep> steps;

  [[nodiscard]] const Configuration& final_config() const {
    return steps.empty() ? initial : steps.back().after;
  }

  bool operator==(const Trace&) const = default;
};

std::string to_string(const Step& s);

// Replays a trace and returns a description of the first discrepancy, if any.
std::optional<std::string> trace_error(const IONet& net, const Trace& trace);
std::optional<std::string> trace_error(const RBN& net, const Trace& trace);

}  // namespace rbnkit

template <typename Tag>
struct std::hash<rbnkit::Name<Tag>> {
  std::size_t operator()(const rbnkit::Name<Tag>& n) const noexcept {
    return std::hash<std::string>{}(n.str());
  }
};
