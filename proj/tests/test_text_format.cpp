#include <doctest.h>

#include "rbnkit/explicit_reach.hpp"
#include "rbnkit/harness.hpp"
#include "rbnkit/text_format.hpp"
#include "support.hpp"

using namespace rbnkit;
using namespace rbnkit::test;

TEST_CASE("parse_net") {
  const auto io_net = parse_net("ionet\nstates a b\ntrans a @ b -> b\n");
  REQUIRE(std::holds_alternative<IONet>(io_net));
  CHECK(std::get<IONet>(io_net) == observe_net());

  const auto rbn = parse_net("rbn\nstates p\nalphabet m\ntrans p !m -> p\n");
  REQUIRE(std::holds_alternative<RBN>(rbn));
  CHECK(std::get<RBN>(rbn).transitions() == std::vector<RBNTransition>{bcast("p", "m", "p")});

  CHECK_ERROR_CODE(parse_net("ionet\nstates a\ntrans a @ b -> a\n"), ErrorCode::UndeclaredState);
}

TEST_CASE("parse_net tolerates comments and spacing") {
  const auto net = parse_net("# header comment\n  ionet\n\nstates   a\tb # trailing\ntrans a@b->b\n");
  CHECK(std::get<IONet>(net) == observe_net());
}

TEST_CASE("parse errors carry positions") {
  try {
    (void)parse_net("ionet\nstates a b\ntrans a @ c -> b\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.code() == ErrorCode::UndeclaredState);
    CHECK(e.line() == 3);
    CHECK(e.column() == 11);
  }
  CHECK_ERROR_CODE(parse_net("ionet\nstates a a\n"), ErrorCode::DuplicateState);
  CHECK_ERROR_CODE(parse_net("ionet\nstates a\ntrans a @ a -> a\ntrans a @ a -> a\n"),
                   ErrorCode::DuplicateTransition);
  CHECK_ERROR_CODE(parse_net("petri\nstates a\n"), ErrorCode::ParseError);
  CHECK_ERROR_CODE(parse_net("ionet\nstates a\ntrans a ! a -> a\n"), ErrorCode::ParseError);
  CHECK_ERROR_CODE(parse_net("rbn\nstates a\nalphabet m\ntrans a !n -> a\n"),
                   ErrorCode::UndeclaredState);
}

TEST_CASE("parse_query") {
  const auto geq1 = parse_query("init: a ; target: #b>=1");
  REQUIRE(geq1.crp);
  CHECK(geq1.crp->kind == CrpKind::Geq1);
  REQUIRE(geq1.support);
  CHECK(geq1.support->support == state_set({"a"}));
  CHECK(geq1.crp->must_be_present == state_set({"b"}));

  const auto eq0 = parse_query("init: a b ; target: #b>=1 & #a=0");
  REQUIRE(eq0.crp);
  CHECK(eq0.crp->kind == CrpKind::Geq1Eq0);
  CHECK(eq0.crp->must_be_absent == state_set({"a"}));

  CHECK_ERROR_CODE(parse_query("target: #a>=1 & #a=0"), ErrorCode::ContradictoryAtom);
  CHECK_ERROR_CODE(parse_query("init: a"), ErrorCode::ParseError);
}

TEST_CASE("parse_query with cube atoms") {
  const auto q = parse_query("init: a:[1,2] b:[0,*]\ntarget: b:[2,*] a:[0,0]\n");
  CHECK_FALSE(q.crp);
  CHECK_FALSE(q.support);
  CHECK(q.from.bounds(S("a")) == Bounds{1, 2});
  CHECK(q.from.bounds(S("b")) == Bounds::at_least(0));
  CHECK(q.from.bounds(S("c")) == Bounds::exactly(0));
  CHECK(q.to.bounds(S("b")) == Bounds::at_least(2));
  CHECK(q.to.bounds(S("a")) == Bounds::exactly(0));
}

TEST_CASE("configurations and ranges") {
  CHECK(parse_config("{a:1, b:2}") == Configuration{{"a", 1}, {"b", 2}});
  CHECK(parse_config("a:3") == Configuration{{"a", 3}});
  CHECK(parse_config("{}").empty());
  const auto r = parse_population_range("2..5");
  CHECK(r.first == 2);
  CHECK(r.last == 5);
  CHECK(parse_population_range("3").last == 3);
  CHECK_ERROR_CODE(parse_population_range("2.."), ErrorCode::ParseError);
}

TEST_CASE("traces print in the documented form") {
  const auto net = relay_net();
  Trace t;
  t.initial = {{"q", 1}, {"p", 2}};
  const RBNStep s{bcast("q", "m", "q"), {recv("p", "m", "r"), recv("p", "m", "r")}};
  t.steps.push_back({s, rbn_apply(net, t.initial, s)});
  CHECK(format_trace(t) ==
        "config {p:2, q:1}\n"
        "step bcast q !m -> q recv [p?m->r, p?m->r]\n"
        "config {q:1, r:2}\n");
  CHECK(format_step(Step{io("a", "b", "b")}) == "step io a @ b -> b");
  CHECK(parse_trace(format_trace(t)) == t);
}

TEST_CASE("certificate block is a comment") {
  const auto [rbn, cert] = io_to_rbn(observe_net());
  const auto text = serialize_net(rbn) + format_certificate(cert);
  CHECK(std::get<RBN>(parse_net(text)) == rbn);
  CHECK(text.find("# certificate") != std::string::npos);
}

// ---------------------------------------------------------------------------

TEST_CASE("property: serialize then parse is the identity") {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    GenSpec spec;
    spec.seed = seed;
    spec.num_states = {1, 6};
    spec.num_transitions = {0, 10};
    const auto io_net = gen_random_ionet(spec);
    const auto io_text = serialize_net(io_net);
    CHECK(std::get<IONet>(parse_net(io_text)) == io_net);
    CHECK(serialize_net(parse_net(io_text)) == io_text);

    spec.kind = ModelKind::RBN;
    const auto rbn = gen_random_rbn(spec);
    const auto rbn_text = serialize_net(rbn);
    CHECK(std::get<RBN>(parse_net(rbn_text)) == rbn);
    CHECK(serialize_net(parse_net(rbn_text)) == rbn_text);
  }
}

TEST_CASE("property: printed witnesses parse back and replay") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    GenSpec spec;
    spec.seed = seed;
    spec.kind = seed % 2 ? ModelKind::IONet : ModelKind::RBN;
    spec.num_transitions = {2, 6};
    Rng rng(seed);
    const Net net = spec.kind == ModelKind::IONet ? Net{gen_random_ionet(spec)}
                                                  : Net{gen_random_rbn(spec)};
    const auto sys = make_step_system(net);
    std::visit(
        [&](const auto& n) {
          const auto c0 = random_configuration(rng, n.states(), rng.uniform(1, 4));
          const auto goal = Cube::target().set(n.states().back(), Bounds::at_least(c0.population()));
          const auto r = post_star(*sys, c0, goal);
          if (!r.witness) return;
          const auto back = parse_trace(format_trace(*r.witness));
          CHECK(back == *r.witness);
          CHECK_FALSE(trace_error(n, back));
        },
        net);
  }
}
