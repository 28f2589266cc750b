#pragma once

#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "rbnkit/explicit_reach.hpp"
#include "rbnkit/model.hpp"

namespace rbnkit {

enum class CrpKind { Geq1, Geq1Eq0 };

/// Cardinality target: at least one process in every state of
/// `must_be_present`, none in any state of `must_be_absent`.
struct CrpQuery {
  CrpKind kind = CrpKind::Geq1;
  std::set<StateId> must_be_present;
  std::set<StateId> must_be_absent;

  static CrpQuery geq1(std::set<StateId> present);
  static CrpQuery geq1_eq0(std::set<StateId> present, std::set<StateId> absent);

  // Throws InvalidQuery (absent atoms in a Geq1 query) or ContradictoryAtom.
  void validate() const;
  [[nodiscard]] Cube target_cube() const;
};

/// Initial cube allowing arbitrarily many processes in each supported state
/// and none elsewhere.
struct UnboundedInitialCube {
  std::set<StateId> support;

  [[nodiscard]] Cube to_cube() const;
};

struct SaturationRule {
  enum class Kind { Init, BroadcastFrom, ReceiveUsing };

  Kind kind = Kind::Init;
  // The transition that produced the state (BroadcastFrom, ReceiveUsing).
  std::optional<RBNTransition> transition;
  // The broadcast that a ReceiveUsing entry listens to.
  std::optional<RBNTransition> enabling;

  bool operator==(const SaturationRule&) const = default;
};

struct CertificateEntry {
  StateId state;
  SaturationRule rule;

  bool operator==(const CertificateEntry&) const = default;
};

/// Derivation order of the coverable states. Every premise of an entry
/// appears earlier in `order`.
struct SaturationCertificate {
  std::vector<CertificateEntry> order;

  [[nodiscard]] const CertificateEntry* find(const StateId& q) const;
};

struct Saturation {
  std::set<StateId> coverable;
  SaturationCertificate certificate;
};

using Saturator = std::function<Saturation(const RBN&, const UnboundedInitialCube&)>;

/// Least set of states coverable from the unbounded initial cube:
///  - every supported state;
///  - q' whenever q is coverable and q !m -> q' exists;
///  - p' whenever p is coverable, p ?m -> p' exists, and some coverable
///    state can broadcast m.
Saturation crp_geq1_saturate(const RBN& net, const UnboundedInitialCube& init);

enum class Verdict { Yes, No, NoAtBounds };

std::string_view to_string(Verdict v);

struct CrpResult {
  Verdict verdict = Verdict::No;
  std::optional<Trace> witness;
};

CrpResult crp_geq1_decide(const RBN& net, const UnboundedInitialCube& init, const CrpQuery& query);

/// Concrete run covering every target. Each node of the unfolded derivation
/// gets its own process; ReceiveUsing nodes become one broadcast with one
/// receiver. Throws TargetNotCovered or InvalidCertificate.
Trace expand_witness(const RBN& net, const UnboundedInitialCube& init,
                     const SaturationCertificate& cert, const std::set<StateId>& targets);

/// Default search window: from the number of required states (at least 1)
/// up to twice the number of states.
PopulationRange default_population_range(std::size_t num_states, const CrpQuery& query);

/// Bounded search. Never answers No: outside the explored populations the
/// result is NoAtBounds.
CrpResult crp_geq1_eq0_bounded(const RBN& net, const UnboundedInitialCube& init,
                               const CrpQuery& query,
                               std::optional<PopulationRange> populations = std::nullopt,
                               ExploreLimits limits = {});

/// Decides a CRP query on an IO net through its RBN translation. Witnesses
/// are mapped back to IO runs.
CrpResult io_crp_decide(const IONet& net, const UnboundedInitialCube& init, const CrpQuery& query,
                        std::optional<PopulationRange> populations = std::nullopt,
                        ExploreLimits limits = {});

/// Replaces each step q !q -> q with receivers p_i ?q -> p_i' by the IO
/// steps p_i @ q -> p_i'. Throws InvalidTrace on steps of any other shape.
Trace io_trace_from_rbn(const IONet& net, const Trace& rbn_trace);

}  // namespace rbnkit
