#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "rbnkit/explicit_reach.hpp"
#include "rbnkit/model.hpp"
#include "rbnkit/step_system.hpp"
#include "rbnkit/symbolic_reach.hpp"
#include "rbnkit/translate.hpp"

namespace rbnkit {

/// 64-bit Mersenne twister with a bounded draw that does not depend on the
/// standard library's distribution implementations, so a seed yields the
/// same sequence on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [lo, hi].
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi);
  bool coin() { return uniform(0, 1) == 1; }

 private:
  std::mt19937_64 engine_;
};

struct SizeRange {
  std::size_t min = 0;
  std::size_t max = 0;
};

struct GenSpec {
  std::uint64_t seed = 0;
  SizeRange num_states{2, 4};
  SizeRange num_transitions{0, 6};
  ModelKind kind = ModelKind::IONet;
  // RBN only.
  SizeRange num_messages{1, 3};
};

// Both throw InvalidSpec for empty ranges or nets without states. The
// transition count is capped by the number of distinct transitions.
IONet gen_random_ionet(const GenSpec& spec);
RBN gen_random_rbn(const GenSpec& spec);

Configuration random_configuration(Rng& rng, const std::vector<StateId>& states, Count population);

/// A failed check, written so that the net and configurations can be fed
/// back to the command line tool.
struct Counterexample {
  std::string check;
  std::uint64_t seed = 0;
  std::string net;
  Configuration initial;
  std::optional<Configuration> offending;
  std::string direction;
  std::string detail;
};

std::string to_string(const Counterexample& cx);

/// post* of `c0` in the source and of its transport in the target must agree
/// under the certificate. Throws BudgetExceeded.
std::optional<Counterexample> check_translation_equivalence(const StepSystem& source,
                                                            const StepSystem& target,
                                                            const TranslationCertificate& cert,
                                                            const Configuration& c0,
                                                            ExploreLimits limits = {});
std::optional<Counterexample> check_translation_equivalence(const IONet& net, const Configuration& c0,
                                                            ExploreLimits limits = {});

struct ConfigPair {
  Configuration from;
  Configuration to;
};

struct SimulationReport {
  std::size_t instances_checked = 0;
  std::vector<Counterexample> mismatches;
  std::chrono::milliseconds elapsed{0};

  [[nodiscard]] bool passed() const { return mismatches.empty(); }
};

/// For every pair, C' in post*(C) on `a` iff C'.h in post*(C.h) on `b`.
/// Throws InvalidCertificate if the certificate does not fit the two state
/// sets, BudgetExceeded if an exploration is cut short.
SimulationReport check_strong_simulation(const StepSystem& a, const StepSystem& b,
                                         const TranslationCertificate& cert,
                                         const std::vector<ConfigPair>& pairs,
                                         ExploreLimits limits = {});
SimulationReport check_strong_simulation(const Net& a, const Net& b,
                                         const TranslationCertificate& cert,
                                         const std::vector<ConfigPair>& pairs,
                                         ExploreLimits limits = {});

/// Half of the pairs take C' from post*(C), the rest pick a random
/// configuration of the same population.
std::vector<ConfigPair> sample_config_pairs(const StepSystem& sys, std::uint64_t seed,
                                            std::size_t count, Count max_pop,
                                            ExploreLimits limits = {});

/// Checks that the explicit coverable set at `max_pop` is contained in the
/// saturated set, and that every saturated state has a replayable witness.
std::optional<Counterexample> check_saturation_against_oracle(
    const RBN& net, const std::set<StateId>& support, Count max_pop,
    const Saturator& saturate = crp_geq1_saturate, ExploreLimits limits = {});

// ---------------------------------------------------------------------------
// Fault injection

enum class Mutation { None, DropReceive, SkipBroadcastPremise, LaxSelfObservation };

std::string_view to_string(Mutation m);

namespace mutants {

// io_to_rbn without its first non-stuttering receive transition.
std::pair<RBN, TranslationCertificate> io_to_rbn_dropping_receive(const IONet& net);

// Saturation whose receive rule fires without a coverable broadcaster.
Saturation saturate_without_broadcast_premise(const RBN& net, const UnboundedInitialCube& init);

// IO semantics that lets a lone process in p observe itself.
class LaxSelfObservation : public IoStepSystem {
 public:
  using IoStepSystem::IoStepSystem;

 protected:
  [[nodiscard]] bool enabled(const Counts& c, const IONet::Indexed& t) const override;
};

}  // namespace mutants

// ---------------------------------------------------------------------------
// Randomized suites

struct SuiteOptions {
  std::uint64_t seed = 1;
  std::size_t instances = 500;
  Mutation mutation = Mutation::None;
  ExploreLimits limits;
  // Counterexamples kept in the report; the count covers all of them.
  std::size_t keep_mismatches = 10;
};

struct SuiteReport {
  std::string name;
  std::uint64_t seed = 0;
  Mutation mutation = Mutation::None;
  std::size_t instances_checked = 0;
  std::size_t checks = 0;
  std::size_t mismatch_count = 0;
  std::vector<Counterexample> mismatches;
  std::map<std::string, std::size_t> stats;
  std::chrono::milliseconds elapsed{0};

  [[nodiscard]] bool passed() const { return mismatch_count == 0; }
};

// Instance i of every suite is generated from seed + i.

// IO nets with 2..4 states and 0..6 transitions; every initial configuration
// of population at most 4.
SuiteReport run_equivalence_suite(const SuiteOptions& options);
// RBN with 2..6 states and 1..10 transitions; explicit oracle up to population 4.
SuiteReport run_saturation_suite(const SuiteOptions& options);
// IO nets; >=1 queries decided through the translation, cross-checked by the
// IO explicit oracle up to population 6. Also compares >=1,=0 bounded answers
// of both routes up to population 4.
SuiteReport run_io_crp_suite(const SuiteOptions& options);
// IO nets against their translation, 10 sampled pairs each, populations <= 4.
SuiteReport run_strong_simulation_suite(const SuiteOptions& options);

std::string format_report_text(const std::vector<SuiteReport>& reports);
// One JSON object: per-suite counts and seeds.
std::string format_report_json(const std::vector<SuiteReport>& reports);

}  // namespace rbnkit
