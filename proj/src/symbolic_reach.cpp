#include "rbnkit/symbolic_reach.hpp"

#include <algorithm>
#include <map>

#include "rbnkit/translate.hpp"

namespace rbnkit {

CrpQuery CrpQuery::geq1(std::set<StateId> present) {
  return {CrpKind::Geq1, std::move(present), {}};
}

CrpQuery CrpQuery::geq1_eq0(std::set<StateId> present, std::set<StateId> absent) {
  return {CrpKind::Geq1Eq0, std::move(present), std::move(absent)};
}

void CrpQuery::validate() const {
  if (kind == CrpKind::Geq1 && !must_be_absent.empty()) {
    throw Error(ErrorCode::InvalidQuery, "a >=1 query cannot constrain states to zero");
  }
  for (const auto& q : must_be_present) {
    if (must_be_absent.contains(q)) {
      throw Error(ErrorCode::ContradictoryAtom, "'" + q.str() + "' is required both >=1 and =0");
    }
  }
}

Cube CrpQuery::target_cube() const {
  Cube cube = Cube::target();
  for (const auto& q : must_be_present) cube.set(q, Bounds::at_least(1));
  for (const auto& q : must_be_absent) cube.set(q, Bounds::exactly(0));
  return cube;
}

Cube UnboundedInitialCube::to_cube() const {
  Cube cube = Cube::initial();
  for (const auto& q : support) cube.set(q, Bounds::at_least(0));
  return cube;
}

const CertificateEntry* SaturationCertificate::find(const StateId& q) const {
  auto it = std::find_if(order.begin(), order.end(),
                         [&](const CertificateEntry& e) { return e.state == q; });
  return it == order.end() ? nullptr : &*it;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "YES";
    case Verdict::No: return "NO";
    case Verdict::NoAtBounds: return "NO_AT_BOUNDS";
  }
  return "?";
}

namespace {

template <typename Net>
void require_states(const Net& net, const std::set<StateId>& states, const char* what) {
  for (const auto& q : states) {
    if (!net.index_of(q)) {
      throw Error(ErrorCode::UnknownState, std::string(what) + " names undeclared state '" + q.str() + "'");
    }
  }
}

}  // namespace

Saturation crp_geq1_saturate(const RBN& net, const UnboundedInitialCube& init) {
  require_states(net, init.support, "initial support");
  const auto& ts = net.transitions();
  const auto& ix = net.indexed();

  std::vector<bool> in(net.states().size(), false);
  std::vector<std::optional<std::uint32_t>> broadcaster(net.alphabet().size());
  Saturation out;

  auto add = [&](std::uint32_t q, SaturationRule rule) {
    in[q] = true;
    out.coverable.insert(net.states()[q]);
    out.certificate.order.push_back({net.states()[q], std::move(rule)});
    for (std::uint32_t i = 0; i < ix.size(); ++i) {
      if (ix[i].source == q && ix[i].kind == ActionKind::Broadcast && !broadcaster[ix[i].message]) {
        broadcaster[ix[i].message] = i;
      }
    }
  };

  for (std::uint32_t q = 0; q < net.states().size(); ++q) {
    if (init.support.contains(net.states()[q])) add(q, {});
  }

  for (bool changed = true; changed;) {
    changed = false;
    for (std::uint32_t i = 0; i < ix.size(); ++i) {
      const auto& t = ix[i];
      if (!in[t.source] || in[t.target]) continue;
      if (t.kind == ActionKind::Broadcast) {
        add(t.target, {SaturationRule::Kind::BroadcastFrom, ts[i], std::nullopt});
        changed = true;
      } else if (const auto b = broadcaster[t.message]) {
        add(t.target, {SaturationRule::Kind::ReceiveUsing, ts[i], ts[*b]});
        changed = true;
      }
    }
  }
  return out;
}

CrpResult crp_geq1_decide(const RBN& net, const UnboundedInitialCube& init, const CrpQuery& query) {
  query.validate();
  if (query.kind != CrpKind::Geq1) {
    throw Error(ErrorCode::InvalidQuery, "saturation decides only >=1 queries");
  }
  require_states(net, query.must_be_present, "query");
  const auto sat = crp_geq1_saturate(net, init);
  const bool covered = std::all_of(query.must_be_present.begin(), query.must_be_present.end(),
                                   [&](const StateId& q) { return sat.coverable.contains(q); });
  if (!covered) return {Verdict::No, std::nullopt};
  return {Verdict::Yes, expand_witness(net, init, sat.certificate, query.must_be_present)};
}

namespace {

class WitnessBuilder {
 public:
  WitnessBuilder(const RBN& net, const UnboundedInitialCube& init, const SaturationCertificate& cert)
      : net_(net), init_(init), cert_(cert) {
    for (std::size_t i = 0; i < cert_.order.size(); ++i) {
      const auto& e = cert_.order[i];
      if (!position_.emplace(e.state, i).second) {
        invalid("state '" + e.state.str() + "' is derived twice");
      }
    }
    for (std::size_t i = 0; i < cert_.order.size(); ++i) check_entry(i);
  }

  void realize(const StateId& q) {
    const auto& entry = cert_.order[position_.at(q)];
    const auto& rule = entry.rule;
    switch (rule.kind) {
      case SaturationRule::Kind::Init:
        initial_.add(q);
        break;
      case SaturationRule::Kind::BroadcastFrom:
        realize(rule.transition->source);
        steps_.push_back({*rule.transition, {}});
        break;
      case SaturationRule::Kind::ReceiveUsing:
        realize(rule.transition->source);
        realize(rule.enabling->source);
        steps_.push_back({*rule.enabling, {*rule.transition}});
        break;
    }
  }

  [[nodiscard]] bool covers(const StateId& q) const { return position_.contains(q); }

  Trace finish() const {
    Trace trace;
    trace.initial = initial_;
    Configuration current = initial_;
    for (const auto& s : steps_) {
      current = rbn_apply(net_, current, s);
      trace.steps.push_back({s, current});
    }
    return trace;
  }

 private:
  [[noreturn]] static void invalid(const std::string& msg) {
    throw Error(ErrorCode::InvalidCertificate, msg);
  }

  void require_earlier(const StateId& premise, std::size_t i) const {
    auto it = position_.find(premise);
    if (it == position_.end() || it->second >= i) {
      invalid("premise '" + premise.str() + "' of entry " + std::to_string(i) +
              " is not derived earlier");
    }
  }

  void check_entry(std::size_t i) const {
    const auto& e = cert_.order[i];
    const auto& rule = e.rule;
    switch (rule.kind) {
      case SaturationRule::Kind::Init:
        if (!init_.support.contains(e.state)) {
          invalid("'" + e.state.str() + "' is not in the initial support");
        }
        return;
      case SaturationRule::Kind::BroadcastFrom:
        if (!rule.transition || !rule.transition->is_broadcast() ||
            !net_.has_transition(*rule.transition) || rule.transition->target != e.state) {
          invalid("entry " + std::to_string(i) + " has no matching broadcast");
        }
        require_earlier(rule.transition->source, i);
        return;
      case SaturationRule::Kind::ReceiveUsing:
        if (!rule.transition || rule.transition->is_broadcast() ||
            !net_.has_transition(*rule.transition) || rule.transition->target != e.state) {
          invalid("entry " + std::to_string(i) + " has no matching receive");
        }
        if (!rule.enabling || !rule.enabling->is_broadcast() || !net_.has_transition(*rule.enabling) ||
            rule.enabling->action.message != rule.transition->action.message) {
          invalid("entry " + std::to_string(i) + " has no enabling broadcast");
        }
        require_earlier(rule.transition->source, i);
        require_earlier(rule.enabling->source, i);
        return;
    }
  }

  const RBN& net_;
  const UnboundedInitialCube& init_;
  const SaturationCertificate& cert_;
  std::map<StateId, std::size_t> position_;
  Configuration initial_;
  std::vector<RBNStep> steps_;
};

}  // namespace

Trace expand_witness(const RBN& net, const UnboundedInitialCube& init,
                     const SaturationCertificate& cert, const std::set<StateId>& targets) {
  WitnessBuilder builder(net, init, cert);
  for (const auto& q : targets) {
    if (!builder.covers(q)) {
      throw Error(ErrorCode::TargetNotCovered, "'" + q.str() + "' is not in the coverable set");
    }
  }
  for (const auto& q : targets) builder.realize(q);
  return builder.finish();
}

PopulationRange default_population_range(std::size_t num_states, const CrpQuery& query) {
  const Count first = std::max<Count>(1, query.must_be_present.size());
  return {first, std::max<Count>(first, 2 * static_cast<Count>(num_states))};
}

CrpResult crp_geq1_eq0_bounded(const RBN& net, const UnboundedInitialCube& init,
                               const CrpQuery& query, std::optional<PopulationRange> populations,
                               ExploreLimits limits) {
  query.validate();
  require_states(net, init.support, "initial support");
  require_states(net, query.must_be_present, "query");
  require_states(net, query.must_be_absent, "query");
  const auto range = populations.value_or(default_population_range(net.states().size(), query));
  range.validate();
  auto bounded = reach_bounded(net, init.to_cube(), query.target_cube(), range, limits);
  if (bounded.verdict == BoundedVerdict::Yes) return {Verdict::Yes, std::move(bounded.witness)};
  return {Verdict::NoAtBounds, std::nullopt};
}

Trace io_trace_from_rbn(const IONet& net, const Trace& rbn_trace) {
  Trace out;
  out.initial = rbn_trace.initial;
  Configuration current = out.initial;
  for (std::size_t i = 0; i < rbn_trace.steps.size(); ++i) {
    const auto* step = std::get_if<RBNStep>(&rbn_trace.steps[i].step);
    if (!step) throw Error(ErrorCode::InvalidTrace, "step " + std::to_string(i) + " is not a broadcast");
    const auto& b = step->broadcast;
    if (b.source != b.target || b.action.message.str() != b.source.str()) {
      throw Error(ErrorCode::InvalidTrace, to_string(b) + " is not a self-announcement");
    }
    for (const auto& r : step->receives) {
      IOTransition t{r.source, b.source, r.target};
      try {
        current = io_apply(net, current, t);
      } catch (const Error& e) {
        throw Error(ErrorCode::InvalidTrace, "step " + std::to_string(i) + ": " + e.what());
      }
      out.steps.push_back({t, current});
    }
    if (current != rbn_trace.steps[i].after) {
      throw Error(ErrorCode::InvalidTrace, "step " + std::to_string(i) + " does not match its record");
    }
  }
  return out;
}

namespace {

std::set<StateId> rename(const TranslationCertificate& cert, const std::set<StateId>& states) {
  std::set<StateId> out;
  for (const auto& q : states) {
    auto it = cert.state_map.find(q);
    if (it == cert.state_map.end()) {
      throw Error(ErrorCode::UnknownState, "state '" + q.str() + "' is not declared");
    }
    out.insert(it->second);
  }
  return out;
}

}  // namespace

CrpResult io_crp_decide(const IONet& net, const UnboundedInitialCube& init, const CrpQuery& query,
                        std::optional<PopulationRange> populations, ExploreLimits limits) {
  query.validate();
  const auto [rbn, cert] = io_to_rbn(net);
  const UnboundedInitialCube rbn_init{rename(cert, init.support)};
  CrpQuery rbn_query = query;
  rbn_query.must_be_present = rename(cert, query.must_be_present);
  rbn_query.must_be_absent = rename(cert, query.must_be_absent);

  CrpResult result = query.kind == CrpKind::Geq1
                         ? crp_geq1_decide(rbn, rbn_init, rbn_query)
                         : crp_geq1_eq0_bounded(rbn, rbn_init, rbn_query, populations, limits);
  // The certificate of io_to_rbn is the identity, so RBN configurations are
  // IO configurations verbatim.
  if (result.witness) result.witness = io_trace_from_rbn(net, *result.witness);
  return result;
}

}  // namespace rbnkit
