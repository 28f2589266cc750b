#pragma once

#include <set>
#include <string>
#include <vector>

#include "rbnkit/model.hpp"

namespace rbnkit::test {

inline StateId S(const std::string& s) { return StateId(s); }
inline MessageId M(const std::string& s) { return MessageId(s); }

inline std::vector<StateId> states(std::initializer_list<const char*> names) {
  std::vector<StateId> out;
  for (const auto* n : names) out.emplace_back(n);
  return out;
}

inline std::set<StateId> state_set(std::initializer_list<const char*> names) {
  std::set<StateId> out;
  for (const auto* n : names) out.emplace(n);
  return out;
}

inline IOTransition io(const char* p, const char* q, const char* r) { return {S(p), S(q), S(r)}; }
inline RBNTransition bcast(const char* p, const char* m, const char* r) {
  return RBNTransition::broadcast(S(p), M(m), S(r));
}
inline RBNTransition recv(const char* p, const char* m, const char* r) {
  return RBNTransition::receive(S(p), M(m), S(r));
}

// The two-state IO net a @ b -> b used throughout.
inline IONet observe_net() { return IONet(states({"a", "b"}), {io("a", "b", "b")}); }

// q !m -> q, p ?m -> r
inline RBN relay_net() {
  return RBN(states({"q", "p", "r"}), {M("m")}, {bcast("q", "m", "q"), recv("p", "m", "r")});
}

template <typename Pairs>
std::set<Configuration> configs_of(const Pairs& pairs) {
  std::set<Configuration> out;
  for (const auto& [step, c] : pairs) out.insert(c);
  return out;
}

}  // namespace rbnkit::test

#define CHECK_ERROR_CODE(expr, expected)                         \
  do {                                                           \
    bool thrown_ = false;                                        \
    try {                                                        \
      (void)(expr);                                              \
    } catch (const ::rbnkit::Error& e_) {                        \
      thrown_ = true;                                            \
      CHECK_MESSAGE(e_.code() == (expected), e_.what());         \
    }                                                            \
    CHECK_MESSAGE(thrown_, "expected an error from " #expr);     \
  } while (false)
