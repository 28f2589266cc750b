#include <doctest.h>

#include "rbnkit/explicit_reach.hpp"
#include "rbnkit/harness.hpp"
#include "rbnkit/symbolic_reach.hpp"
#include "rbnkit/translate.hpp"
#include "support.hpp"

using namespace rbnkit;
using namespace rbnkit::test;

namespace {

// q !m -> q', p ?m -> r
RBN moving_relay() {
  return RBN(states({"q", "q'", "p", "r"}), {M("m")},
             {bcast("q", "m", "q'"), recv("p", "m", "r")});
}

UnboundedInitialCube support(std::initializer_list<const char*> names) {
  return UnboundedInitialCube{state_set(names)};
}

}  // namespace

TEST_CASE("crp query validation") {
  CHECK_ERROR_CODE(CrpQuery::geq1_eq0(state_set({"a"}), state_set({"a"})).validate(),
                   ErrorCode::ContradictoryAtom);
  CrpQuery bad = CrpQuery::geq1(state_set({"a"}));
  bad.must_be_absent = state_set({"b"});
  CHECK_ERROR_CODE(bad.validate(), ErrorCode::InvalidQuery);
  const auto cube = CrpQuery::geq1_eq0(state_set({"a"}), state_set({"b"})).target_cube();
  CHECK(cube.bounds(S("a")) == Bounds::at_least(1));
  CHECK(cube.bounds(S("b")) == Bounds::exactly(0));
  CHECK(cube.bounds(S("c")) == Bounds::at_least(0));
}

TEST_CASE("crp_geq1_saturate") {
  const auto net = relay_net();
  CHECK(crp_geq1_saturate(net, support({"q", "p"})).coverable == state_set({"q", "p", "r"}));
  CHECK(crp_geq1_saturate(net, support({"p"})).coverable == state_set({"p"}));
  CHECK(crp_geq1_saturate(moving_relay(), support({"q", "p"})).coverable ==
        state_set({"q", "q'", "p", "r"}));
  // Both sides of the explicit check at the population used in the example.
  CHECK(coverable_states_explicit(moving_relay(), state_set({"q", "p"}), 2) ==
        state_set({"q", "q'", "p", "r"}));
}

TEST_CASE("saturation certificate lists premises first") {
  const auto sat = crp_geq1_saturate(moving_relay(), support({"q", "p"}));
  REQUIRE(sat.certificate.order.size() == 4);
  std::set<StateId> seen;
  for (const auto& e : sat.certificate.order) {
    if (e.rule.transition) CHECK(seen.count(e.rule.transition->source));
    if (e.rule.enabling) CHECK(seen.count(e.rule.enabling->source));
    seen.insert(e.state);
  }
  const auto* r = sat.certificate.find(S("r"));
  REQUIRE(r);
  CHECK(r->rule.kind == SaturationRule::Kind::ReceiveUsing);
  CHECK(r->rule.enabling == bcast("q", "m", "q'"));
}

TEST_CASE("crp_geq1_decide") {
  const auto net = relay_net();
  const auto yes = crp_geq1_decide(net, support({"q", "p"}), CrpQuery::geq1(state_set({"r"})));
  CHECK(yes.verdict == Verdict::Yes);
  REQUIRE(yes.witness);
  CHECK(yes.witness->initial.population() == 2);
  CHECK_FALSE(trace_error(net, *yes.witness));
  CHECK(yes.witness->final_config().count(S("r")) >= 1);

  const RBN with_isolated(states({"q", "p", "r", "x"}), {M("m")},
                          {bcast("q", "m", "q"), recv("p", "m", "r")});
  CHECK(crp_geq1_decide(with_isolated, support({"q", "p"}), CrpQuery::geq1(state_set({"x"})))
            .verdict == Verdict::No);

  const auto trivial = crp_geq1_decide(net, support({"q", "p"}), CrpQuery::geq1(state_set({"p"})));
  CHECK(trivial.verdict == Verdict::Yes);
  REQUIRE(trivial.witness);
  CHECK(trivial.witness->steps.empty());
}

TEST_CASE("expand_witness") {
  const auto net = relay_net();
  const auto init = support({"q", "p"});
  const auto cert = crp_geq1_saturate(net, init).certificate;

  const auto run = expand_witness(net, init, cert, state_set({"r"}));
  CHECK(run.initial == Configuration{{"q", 1}, {"p", 1}});
  REQUIRE(run.steps.size() == 1);
  CHECK(std::get<RBNStep>(run.steps[0].step) == RBNStep{bcast("q", "m", "q"), {recv("p", "m", "r")}});
  CHECK_FALSE(trace_error(net, run));

  const auto still = expand_witness(net, init, cert, state_set({"q", "p"}));
  CHECK(still.steps.empty());

  CHECK_ERROR_CODE(expand_witness(net, support({"p"}), crp_geq1_saturate(net, support({"p"})).certificate,
                                  state_set({"r"})),
                   ErrorCode::TargetNotCovered);
}

TEST_CASE("expand_witness rejects forged certificates") {
  const auto net = relay_net();
  const auto init = support({"p"});
  SaturationCertificate forged;
  forged.order.push_back({S("p"), {}});
  forged.order.push_back({S("r"),
                          {SaturationRule::Kind::ReceiveUsing, recv("p", "m", "r"),
                           bcast("q", "m", "q")}});
  CHECK_ERROR_CODE(expand_witness(net, init, forged, state_set({"r"})),
                   ErrorCode::InvalidCertificate);
}

TEST_CASE("expand_witness spends separate processes on repeated premises") {
  // Reaching z needs one process in y listening to a broadcast from another
  // process that also had to pass through y.
  const RBN net(states({"x", "y", "z", "w"}), {M("go"), M("m")},
                {bcast("x", "go", "y"), bcast("y", "m", "w"), recv("y", "m", "z")});
  const auto init = support({"x"});
  const auto sat = crp_geq1_saturate(net, init);
  CHECK(sat.coverable == state_set({"x", "y", "z", "w"}));
  const auto run = expand_witness(net, init, sat.certificate, state_set({"z", "w"}));
  CHECK_FALSE(trace_error(net, run));
  CHECK(run.final_config().count(S("z")) >= 1);
  CHECK(run.final_config().count(S("w")) >= 1);
}

TEST_CASE("crp_geq1_eq0_bounded") {
  const auto net = relay_net();
  const auto query = CrpQuery::geq1_eq0(state_set({"r"}), state_set({"p"}));
  const auto yes = crp_geq1_eq0_bounded(net, support({"q", "p"}), query, PopulationRange{2, 3});
  CHECK(yes.verdict == Verdict::Yes);
  REQUIRE(yes.witness);
  CHECK_FALSE(trace_error(net, *yes.witness));
  CHECK(yes.witness->final_config().count(S("p")) == 0);

  const RBN frozen(states({"a", "b"}), {M("m")}, {});
  const auto stuck = crp_geq1_eq0_bounded(frozen, support({"a"}),
                                          CrpQuery::geq1_eq0(state_set({"b"}), state_set({"a"})));
  CHECK(stuck.verdict == Verdict::NoAtBounds);

  CHECK_ERROR_CODE(crp_geq1_eq0_bounded(net, support({"q", "p"}), query, PopulationRange{3, 2}),
                   ErrorCode::EmptyRange);
}

TEST_CASE("default population range") {
  const auto q = CrpQuery::geq1_eq0(state_set({"a", "b"}), state_set({"c"}));
  const auto r = default_population_range(5, q);
  CHECK(r.first == 2);
  CHECK(r.last == 10);
  const auto empty = default_population_range(3, CrpQuery::geq1({}));
  CHECK(empty.first == 1);
  CHECK(empty.last == 6);
}

TEST_CASE("io_crp_decide") {
  const auto net = observe_net();
  const auto yes = io_crp_decide(net, support({"a", "b"}), CrpQuery::geq1(state_set({"b"})));
  CHECK(yes.verdict == Verdict::Yes);
  REQUIRE(yes.witness);
  CHECK(yes.witness->steps.empty());

  CHECK(io_crp_decide(net, support({"a"}), CrpQuery::geq1(state_set({"b"}))).verdict == Verdict::No);
  for (Count n = 1; n <= 4; ++n) {
    CHECK(post_star(net, {{"a", n}}).reachable == std::set<Configuration>{{{"a", n}}});
  }

  const auto all_b = io_crp_decide(net, support({"a", "b"}),
                                   CrpQuery::geq1_eq0(state_set({"b"}), state_set({"a"})),
                                   PopulationRange{2, 4});
  CHECK(all_b.verdict == Verdict::Yes);
  REQUIRE(all_b.witness);
  CHECK_FALSE(trace_error(net, *all_b.witness));
  CHECK(all_b.witness->final_config().count(S("a")) == 0);
  for (const auto& s : all_b.witness->steps) CHECK(std::holds_alternative<IOTransition>(s.step));
}

TEST_CASE("io_trace_from_rbn expands receivers into observations") {
  const IONet net(states({"a", "b", "c"}), {io("a", "b", "b"), io("c", "b", "a")});
  const auto [rbn, cert] = io_to_rbn(net);
  Trace rbn_run;
  rbn_run.initial = {{"a", 1}, {"b", 1}, {"c", 1}};
  const RBNStep step{bcast("b", "b", "b"), {recv("a", "b", "b"), recv("c", "b", "a")}};
  rbn_run.steps.push_back({step, rbn_apply(rbn, rbn_run.initial, step)});
  const auto mapped = io_trace_from_rbn(net, rbn_run);
  CHECK(mapped.steps.size() == 2);
  CHECK_FALSE(trace_error(net, mapped));
  CHECK(mapped.final_config() == rbn_run.final_config());

  Trace odd = rbn_run;
  odd.steps[0].step = RBNStep{RBNTransition::broadcast(S("b"), M("a"), S("b")), {}};
  CHECK_ERROR_CODE(io_trace_from_rbn(net, odd), ErrorCode::InvalidTrace);
}

// ---------------------------------------------------------------------------

TEST_CASE("property: saturation is exact against explicit coverability") {
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    GenSpec spec;
    spec.seed = seed;
    spec.kind = ModelKind::RBN;
    spec.num_states = {2, 5};
    spec.num_transitions = {1, 8};
    const auto net = gen_random_rbn(spec);
    Rng rng(seed);
    UnboundedInitialCube init;
    for (const auto& q : net.states()) {
      if (rng.coin()) init.support.insert(q);
    }
    const auto sat = crp_geq1_saturate(net, init);
    const auto explicit_set = coverable_states_explicit(net, init.support, 4);
    CHECK(std::includes(sat.coverable.begin(), sat.coverable.end(), explicit_set.begin(),
                        explicit_set.end()));
    for (const auto& q : sat.coverable) {
      const auto run = expand_witness(net, init, sat.certificate, {q});
      CHECK_FALSE(trace_error(net, run));
      CHECK(run.final_config().count(q) >= 1);
    }
    // Covering everything at once must also work.
    if (!sat.coverable.empty()) {
      const auto run = expand_witness(net, init, sat.certificate, sat.coverable);
      for (const auto& q : sat.coverable) CHECK(run.final_config().count(q) >= 1);
    }
  }
}

TEST_CASE("property: the bounded >=1,=0 search never answers NO") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    GenSpec spec;
    spec.seed = seed;
    spec.kind = ModelKind::RBN;
    spec.num_states = {2, 4};
    spec.num_transitions = {0, 6};
    const auto net = gen_random_rbn(spec);
    Rng rng(seed);
    UnboundedInitialCube init{{net.states().front()}};
    const auto present = net.states()[rng.uniform(0, net.states().size() - 1)];
    std::set<StateId> absent;
    for (const auto& q : net.states()) {
      if (q != present && rng.coin()) absent.insert(q);
    }
    const auto r = crp_geq1_eq0_bounded(net, init, CrpQuery::geq1_eq0({present}, absent),
                                        PopulationRange{1, 3});
    CHECK(r.verdict != Verdict::No);
    if (r.verdict == Verdict::Yes) {
      REQUIRE(r.witness);
      CHECK_FALSE(trace_error(net, *r.witness));
    }
  }
}

TEST_CASE("property: the IO route matches the translated route") {
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    GenSpec spec;
    spec.seed = seed;
    const auto net = gen_random_ionet(spec);
    const auto [rbn, cert] = io_to_rbn(net);
    Rng rng(seed);
    UnboundedInitialCube init;
    for (const auto& q : net.states()) {
      if (rng.coin()) init.support.insert(q);
    }
    const auto target = net.states()[rng.uniform(0, net.states().size() - 1)];
    const auto query = CrpQuery::geq1({target});
    const auto io_answer = io_crp_decide(net, init, query);
    CHECK(io_answer.verdict == crp_geq1_decide(rbn, init, query).verdict);
    if (io_answer.witness) {
      CHECK_FALSE(trace_error(net, *io_answer.witness));
      for (const auto& s : io_answer.witness->steps) {
        CHECK(std::holds_alternative<IOTransition>(s.step));
      }
    }
  }
}
