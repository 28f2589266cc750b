#include "rbnkit/harness.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "rbnkit/text_format.hpp"

namespace rbnkit {

std::uint64_t Rng::uniform(std::uint64_t lo, std::uint64_t hi) {
  if (lo > hi) std::swap(lo, hi);
  const std::uint64_t span = hi - lo;
  if (span == std::numeric_limits<std::uint64_t>::max()) return engine_();
  const std::uint64_t range = span + 1;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return lo + x % range;
}

// ---------------------------------------------------------------------------
// Generators

namespace {

std::size_t draw_size(Rng& rng, SizeRange r, const char* what) {
  if (r.min > r.max) {
    throw Error(ErrorCode::InvalidSpec, std::string(what) + " range is empty");
  }
  return static_cast<std::size_t>(rng.uniform(r.min, r.max));
}

std::vector<StateId> make_states(std::size_t n) {
  std::vector<StateId> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.emplace_back("q" + std::to_string(i));
  return out;
}

// First k entries of a seeded Fisher-Yates shuffle.
template <typename T>
std::vector<T> sample_without_replacement(Rng& rng, std::vector<T> pool, std::size_t k) {
  k = std::min(k, pool.size());
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = static_cast<std::size_t>(rng.uniform(i, pool.size() - 1));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

std::size_t draw_state_count(Rng& rng, const GenSpec& spec) {
  const auto n = draw_size(rng, spec.num_states, "state");
  if (n == 0) throw Error(ErrorCode::InvalidSpec, "a net needs at least one state");
  return n;
}

}  // namespace

IONet gen_random_ionet(const GenSpec& spec) {
  Rng rng(spec.seed);
  const auto n = draw_state_count(rng, spec);
  const auto k = draw_size(rng, spec.num_transitions, "transition");
  auto states = make_states(n);
  std::vector<IOTransition> all;
  all.reserve(n * n * n);
  for (const auto& p : states) {
    for (const auto& q : states) {
      for (const auto& r : states) all.push_back({p, q, r});
    }
  }
  auto chosen = sample_without_replacement(rng, std::move(all), k);
  return IONet(std::move(states), std::move(chosen));
}

RBN gen_random_rbn(const GenSpec& spec) {
  Rng rng(spec.seed);
  const auto n = draw_state_count(rng, spec);
  const auto m = draw_size(rng, spec.num_messages, "message");
  if (m == 0) throw Error(ErrorCode::InvalidSpec, "an RBN needs at least one message");
  const auto k = draw_size(rng, spec.num_transitions, "transition");
  auto states = make_states(n);
  std::vector<MessageId> alphabet;
  for (std::size_t i = 0; i < m; ++i) alphabet.emplace_back("m" + std::to_string(i));
  std::vector<RBNTransition> all;
  for (const auto& p : states) {
    for (const auto& msg : alphabet) {
      for (const auto& r : states) {
        all.push_back(RBNTransition::broadcast(p, msg, r));
        all.push_back(RBNTransition::receive(p, msg, r));
      }
    }
  }
  auto chosen = sample_without_replacement(rng, std::move(all), k);
  return RBN(std::move(states), std::move(alphabet), std::move(chosen));
}

Configuration random_configuration(Rng& rng, const std::vector<StateId>& states, Count population) {
  Configuration c;
  if (states.empty()) return c;
  for (Count i = 0; i < population; ++i) c.add(states[rng.uniform(0, states.size() - 1)]);
  return c;
}

std::string to_string(const Counterexample& cx) {
  std::ostringstream out;
  out << "# counterexample: " << cx.check << " (seed " << cx.seed << ")\n";
  if (!cx.direction.empty()) out << "# direction: " << cx.direction << "\n";
  out << "# initial " << to_string(cx.initial) << "\n";
  if (cx.offending) out << "# offending " << to_string(*cx.offending) << "\n";
  if (!cx.detail.empty()) out << "# detail: " << cx.detail << "\n";
  out << cx.net;
  return out.str();
}

// ---------------------------------------------------------------------------
// Checks

namespace {

std::string serialize_system(const StepSystem& sys) {
  if (const auto* io = dynamic_cast<const IoStepSystem*>(&sys)) return serialize_net(io->net());
  if (const auto* rbn = dynamic_cast<const RbnStepSystem*>(&sys)) return serialize_net(rbn->net());
  return "";
}

const std::set<Configuration>& complete_post_star(const StepSystem& sys, const Configuration& c,
                                                  std::map<Configuration, std::set<Configuration>>& cache,
                                                  ExploreLimits limits) {
  auto it = cache.find(c);
  if (it != cache.end()) return it->second;
  auto result = post_star(sys, c, limits);
  if (result.partial) {
    throw Error(ErrorCode::BudgetExceeded, "post* of " + to_string(c) + " exceeds the node budget");
  }
  return cache.emplace(c, std::move(result.reachable)).first->second;
}

}  // namespace

std::optional<Counterexample> check_translation_equivalence(const StepSystem& source,
                                                            const StepSystem& target,
                                                            const TranslationCertificate& cert,
                                                            const Configuration& c0,
                                                            ExploreLimits limits) {
  std::map<Configuration, std::set<Configuration>> src_cache;
  std::map<Configuration, std::set<Configuration>> dst_cache;
  const auto& src = complete_post_star(source, c0, src_cache, limits);
  const auto& dst = complete_post_star(target, transport_config(cert, c0), dst_cache, limits);

  std::set<Configuration> transported;
  for (const auto& c : src) transported.insert(transport_config(cert, c));

  auto counterexample = [&](const Configuration& offending, std::string direction) {
    Counterexample cx;
    cx.check = "translation-equivalence";
    cx.net = serialize_system(source);
    cx.initial = c0;
    cx.offending = offending;
    cx.direction = std::move(direction);
    cx.detail = "source reaches " + std::to_string(src.size()) + " configurations, target " +
                std::to_string(dst.size());
    return cx;
  };
  for (const auto& c : transported) {
    if (!dst.contains(c)) return counterexample(c, "source-only");
  }
  for (const auto& c : dst) {
    if (!transported.contains(c)) return counterexample(c, "target-only");
  }
  return std::nullopt;
}

std::optional<Counterexample> check_translation_equivalence(const IONet& net, const Configuration& c0,
                                                            ExploreLimits limits) {
  const auto [rbn, cert] = io_to_rbn(net);
  return check_translation_equivalence(IoStepSystem(net), RbnStepSystem(rbn), cert, c0, limits);
}

namespace {

void validate_against(const TranslationCertificate& cert, const StepSystem& a, const StepSystem& b) {
  cert.validate();
  const auto& qa = a.states();
  if (cert.state_map.size() != qa.size()) {
    throw Error(ErrorCode::InvalidCertificate, "state map does not cover the source states");
  }
  for (const auto& q : qa) {
    auto it = cert.state_map.find(q);
    if (it == cert.state_map.end()) {
      throw Error(ErrorCode::InvalidCertificate, "state map misses '" + q.str() + "'");
    }
    if (!b.index_of(it->second)) {
      throw Error(ErrorCode::InvalidCertificate, "'" + it->second.str() + "' is not a target state");
    }
  }
  for (const auto& [q, n] : cert.padding) {
    if (!b.index_of(q)) {
      throw Error(ErrorCode::InvalidCertificate, "padding state '" + q.str() + "' is not a target state");
    }
  }
}

}  // namespace

SimulationReport check_strong_simulation(const StepSystem& a, const StepSystem& b,
                                         const TranslationCertificate& cert,
                                         const std::vector<ConfigPair>& pairs, ExploreLimits limits) {
  const auto start = std::chrono::steady_clock::now();
  validate_against(cert, a, b);
  SimulationReport report;
  std::map<Configuration, std::set<Configuration>> cache_a;
  std::map<Configuration, std::set<Configuration>> cache_b;
  for (const auto& [from, to] : pairs) {
    ++report.instances_checked;
    const bool in_a = complete_post_star(a, from, cache_a, limits).contains(to);
    const auto padded_to = transport_config(cert, to);
    const bool in_b =
        complete_post_star(b, transport_config(cert, from), cache_b, limits).contains(padded_to);
    if (in_a == in_b) continue;
    Counterexample cx;
    cx.check = "strong-simulation";
    cx.net = serialize_system(a);
    cx.initial = from;
    cx.offending = to;
    cx.direction = in_a ? "forward" : "backward";
    cx.detail = in_a ? "reachable in the source only" : "reachable in the target only";
    report.mismatches.push_back(std::move(cx));
  }
  report.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);
  return report;
}

SimulationReport check_strong_simulation(const Net& a, const Net& b,
                                         const TranslationCertificate& cert,
                                         const std::vector<ConfigPair>& pairs, ExploreLimits limits) {
  return check_strong_simulation(*make_step_system(a), *make_step_system(b), cert, pairs, limits);
}

std::vector<ConfigPair> sample_config_pairs(const StepSystem& sys, std::uint64_t seed,
                                            std::size_t count, Count max_pop, ExploreLimits limits) {
  Rng rng(seed);
  std::map<Configuration, std::set<Configuration>> cache;
  std::vector<ConfigPair> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const Count pop = max_pop == 0 ? 0 : rng.uniform(1, max_pop);
    auto from = random_configuration(rng, sys.states(), pop);
    Configuration to;
    if (i % 2 == 0) {
      const auto& reach = complete_post_star(sys, from, cache, limits);
      auto it = reach.begin();
      std::advance(it, static_cast<std::ptrdiff_t>(rng.uniform(0, reach.size() - 1)));
      to = *it;
    } else {
      to = random_configuration(rng, sys.states(), pop);
    }
    out.push_back({std::move(from), std::move(to)});
  }
  return out;
}

std::optional<Counterexample> check_saturation_against_oracle(const RBN& net,
                                                              const std::set<StateId>& support,
                                                              Count max_pop, const Saturator& saturate,
                                                              ExploreLimits limits) {
  const UnboundedInitialCube init{support};
  auto fail = [&](std::string direction, std::string detail, std::optional<StateId> state) {
    Counterexample cx;
    cx.check = "saturation";
    cx.net = serialize_net(net);
    for (const auto& q : support) cx.initial.add(q);
    if (state) cx.offending = Configuration{{state->str(), 1}};
    cx.direction = std::move(direction);
    cx.detail = std::move(detail);
    return cx;
  };

  const auto sat = saturate(net, init);
  std::set<StateId> entries;
  for (const auto& e : sat.certificate.order) entries.insert(e.state);
  if (entries != sat.coverable) {
    return fail("certificate", "certificate entries differ from the saturated set", std::nullopt);
  }

  const auto oracle = coverable_states_explicit(net, support, max_pop, limits);
  for (const auto& q : oracle) {
    if (!sat.coverable.contains(q)) {
      return fail("oracle-only", "'" + q.str() + "' is coverable with " + std::to_string(max_pop) +
                                     " processes but not saturated", q);
    }
  }

  for (const auto& q : sat.coverable) {
    try {
      const auto trace = expand_witness(net, init, sat.certificate, {q});
      if (auto err = trace_error(net, trace)) return fail("saturation-only", *err, q);
      if (trace.final_config().count(q) == 0) {
        return fail("saturation-only", "witness does not end in '" + q.str() + "'", q);
      }
      for (const auto& [p, n] : trace.initial) {
        if (!support.contains(p)) {
          return fail("saturation-only", "witness starts outside the support", q);
        }
      }
    } catch (const Error& e) {
      return fail("saturation-only", e.what(), q);
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Mutants

std::string_view to_string(Mutation m) {
  switch (m) {
    case Mutation::None: return "none";
    case Mutation::DropReceive: return "drop-receive";
    case Mutation::SkipBroadcastPremise: return "skip-broadcast-premise";
    case Mutation::LaxSelfObservation: return "lax-self-observation";
  }
  return "?";
}

namespace mutants {

std::pair<RBN, TranslationCertificate> io_to_rbn_dropping_receive(const IONet& net) {
  auto [rbn, cert] = io_to_rbn(net);
  auto ts = rbn.transitions();
  auto it = std::find_if(ts.begin(), ts.end(),
                         [](const RBNTransition& t) { return !t.is_broadcast() && t.source != t.target; });
  if (it == ts.end()) return {std::move(rbn), std::move(cert)};
  ts.erase(it);
  return {RBN(rbn.states(), rbn.alphabet(), std::move(ts)), std::move(cert)};
}

Saturation saturate_without_broadcast_premise(const RBN& net, const UnboundedInitialCube& init) {
  const auto& ts = net.transitions();
  Saturation out;
  for (const auto& q : net.states()) {
    if (init.support.contains(q)) {
      out.coverable.insert(q);
      out.certificate.order.push_back({q, {}});
    }
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& t : ts) {
      if (!out.coverable.contains(t.source) || out.coverable.contains(t.target)) continue;
      SaturationRule rule{SaturationRule::Kind::BroadcastFrom, t, std::nullopt};
      if (!t.is_broadcast()) {
        // Any broadcaster of the message will do, coverable or not.
        auto b = std::find_if(ts.begin(), ts.end(), [&](const RBNTransition& x) {
          return x.is_broadcast() && x.action.message == t.action.message;
        });
        if (b == ts.end()) continue;
        rule = {SaturationRule::Kind::ReceiveUsing, t, *b};
      }
      out.coverable.insert(t.target);
      out.certificate.order.push_back({t.target, std::move(rule)});
      changed = true;
    }
  }
  return out;
}

bool LaxSelfObservation::enabled(const Counts& c, const IONet::Indexed& t) const {
  return c[t.source] >= 1 && c[t.observed] >= 1;
}

}  // namespace mutants

// ---------------------------------------------------------------------------
// Suites

namespace {

class SuiteRun {
 public:
  SuiteRun(std::string name, const SuiteOptions& options)
      : options_(options), start_(std::chrono::steady_clock::now()) {
    report_.name = std::move(name);
    report_.seed = options.seed;
    report_.mutation = options.mutation;
  }

  void record(std::optional<Counterexample> cx, std::uint64_t seed) {
    ++report_.checks;
    if (!cx) return;
    ++report_.mismatch_count;
    if (report_.mismatches.size() < options_.keep_mismatches) {
      cx->seed = seed;
      report_.mismatches.push_back(std::move(*cx));
    }
  }

  void stat(const std::string& key, std::size_t n = 1) { report_.stats[key] += n; }
  void instance() { ++report_.instances_checked; }

  SuiteReport finish() {
    report_.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start_);
    return std::move(report_);
  }

 private:
  const SuiteOptions& options_;
  std::chrono::steady_clock::time_point start_;
  SuiteReport report_;
};

GenSpec io_spec(std::uint64_t seed) {
  return {seed, {2, 4}, {0, 6}, ModelKind::IONet, {1, 3}};
}

std::pair<RBN, TranslationCertificate> translate_for(const IONet& net, Mutation m) {
  return m == Mutation::DropReceive ? mutants::io_to_rbn_dropping_receive(net) : io_to_rbn(net);
}

std::unique_ptr<IoStepSystem> io_system_for(const IONet& net, Mutation m) {
  if (m == Mutation::LaxSelfObservation) return std::make_unique<mutants::LaxSelfObservation>(net);
  return std::make_unique<IoStepSystem>(net);
}

std::set<StateId> random_subset(Rng& rng, const std::vector<StateId>& states) {
  std::set<StateId> out;
  for (const auto& q : states) {
    if (rng.coin()) out.insert(q);
  }
  if (out.empty()) out.insert(states[rng.uniform(0, states.size() - 1)]);
  return out;
}

}  // namespace

SuiteReport run_equivalence_suite(const SuiteOptions& options) {
  SuiteRun run("translation-equivalence", options);
  for (std::size_t i = 0; i < options.instances; ++i) {
    const auto seed = options.seed + i;
    const auto net = gen_random_ionet(io_spec(seed));
    const auto [rbn, cert] = translate_for(net, options.mutation);
    const auto source = io_system_for(net, options.mutation);
    const RbnStepSystem target(rbn);
    run.instance();
    for (Count pop = 0; pop <= 4; ++pop) {
      for (const auto& c0 : configurations_in_cube(net.states(), Cube::target(), pop)) {
        run.record(check_translation_equivalence(*source, target, cert, c0, options.limits), seed);
      }
    }
  }
  return run.finish();
}

SuiteReport run_saturation_suite(const SuiteOptions& options) {
  SuiteRun run("saturation", options);
  const Saturator saturate = options.mutation == Mutation::SkipBroadcastPremise
                                 ? Saturator(mutants::saturate_without_broadcast_premise)
                                 : Saturator(crp_geq1_saturate);
  for (std::size_t i = 0; i < options.instances; ++i) {
    const auto seed = options.seed + i;
    const auto net = gen_random_rbn({seed, {2, 6}, {1, 10}, ModelKind::RBN, {1, 3}});
    Rng rng(seed ^ 0x5a7u);
    const auto support = random_subset(rng, net.states());
    run.instance();
    auto cx = check_saturation_against_oracle(net, support, 4, saturate, options.limits);
    if (!cx) run.stat("saturated-states", saturate(net, {support}).coverable.size());
    run.record(std::move(cx), seed);
  }
  return run.finish();
}

SuiteReport run_io_crp_suite(const SuiteOptions& options) {
  SuiteRun run("io-crp", options);
  for (std::size_t i = 0; i < options.instances; ++i) {
    const auto seed = options.seed + i;
    const auto net = gen_random_ionet(io_spec(seed));
    Rng rng(seed ^ 0xc4bu);
    const UnboundedInitialCube init{random_subset(rng, net.states())};
    const auto picks = sample_without_replacement(rng, net.states(), rng.uniform(1, 2));
    const auto query = CrpQuery::geq1({picks.begin(), picks.end()});
    const auto text = serialize_net(net);
    run.instance();

    auto fail = [&](std::string direction, std::string detail) {
      Counterexample cx;
      cx.check = "io-crp";
      cx.net = text;
      for (const auto& q : init.support) cx.initial.add(q);
      for (const auto& q : query.must_be_present) {
        cx.offending = cx.offending.value_or(Configuration{}) + Configuration{{q.str(), 1}};
      }
      cx.direction = std::move(direction);
      cx.detail = std::move(detail);
      return std::optional<Counterexample>(std::move(cx));
    };

    std::optional<Counterexample> cx;
    const auto decided = io_crp_decide(net, init, query);
    if (decided.verdict == Verdict::Yes) {
      run.stat("geq1-yes");
      const auto& w = *decided.witness;
      if (auto err = trace_error(net, w)) {
        cx = fail("witness", *err);
      } else if (!cube_contains(query.target_cube(), w.final_config())) {
        cx = fail("witness", "witness misses the target");
      } else if (!cube_contains(init.to_cube(), w.initial)) {
        cx = fail("witness", "witness starts outside the support");
      } else if (!post_star(IoStepSystem(net), w.initial, query.target_cube(), options.limits).witness) {
        cx = fail("witness", "oracle cannot reach the target from the witness start");
      }
    } else {
      run.stat("geq1-no");
      const auto oracle = reach_bounded(net, init.to_cube(), query.target_cube(), {1, 6}, options.limits);
      if (oracle.verdict == BoundedVerdict::Yes) cx = fail("oracle", "oracle finds a run for a NO answer");
    }
    run.record(std::move(cx), seed);

    // >=1,=0 through the translation against the direct IO search.
    std::vector<StateId> rest;
    for (const auto& q : net.states()) {
      if (!query.must_be_present.contains(q)) rest.push_back(q);
    }
    if (rest.empty()) continue;
    const auto eq0 = CrpQuery::geq1_eq0(query.must_be_present, {rest[rng.uniform(0, rest.size() - 1)]});
    const PopulationRange window{1, 4};
    const auto via_rbn = io_crp_decide(net, init, eq0, window, options.limits);
    const auto direct = reach_bounded(net, init.to_cube(), eq0.target_cube(), window, options.limits);
    std::optional<Counterexample> cx0;
    const bool rbn_yes = via_rbn.verdict == Verdict::Yes;
    if (rbn_yes != (direct.verdict == BoundedVerdict::Yes)) {
      cx0 = fail("geq1-eq0", "translation and direct search disagree");
    } else if (rbn_yes) {
      if (auto err = trace_error(net, *via_rbn.witness)) cx0 = fail("geq1-eq0", *err);
      else if (!cube_contains(eq0.target_cube(), via_rbn.witness->final_config())) {
        cx0 = fail("geq1-eq0", "witness misses the target");
      }
    }
    run.stat(rbn_yes ? "geq1-eq0-yes" : "geq1-eq0-no-at-bounds");
    run.record(std::move(cx0), seed);
  }
  return run.finish();
}

SuiteReport run_strong_simulation_suite(const SuiteOptions& options) {
  SuiteRun run("strong-simulation", options);
  for (std::size_t i = 0; i < options.instances; ++i) {
    const auto seed = options.seed + i;
    const auto net = gen_random_ionet(io_spec(seed));
    const auto [rbn, cert] = translate_for(net, options.mutation);
    const auto source = io_system_for(net, options.mutation);
    const RbnStepSystem target(rbn);
    const auto pairs = sample_config_pairs(*source, seed, 10, 4, options.limits);
    run.instance();
    auto report = check_strong_simulation(*source, target, cert, pairs, options.limits);
    std::map<Configuration, std::set<Configuration>> cache;
    for (const auto& p : pairs) {
      if (complete_post_star(*source, p.from, cache, options.limits).contains(p.to)) {
        run.stat("related-pairs");
      }
    }
    for (auto& cx : report.mismatches) run.record(std::move(cx), seed);
    for (auto k = report.mismatches.size(); k < pairs.size(); ++k) run.record(std::nullopt, seed);
  }
  return run.finish();
}

std::string format_report_text(const std::vector<SuiteReport>& reports) {
  std::ostringstream out;
  for (const auto& r : reports) {
    out << "suite " << r.name << " seed=" << r.seed << " mutation=" << to_string(r.mutation)
        << " instances=" << r.instances_checked << " checks=" << r.checks
        << " mismatches=" << r.mismatch_count << " elapsed_ms=" << r.elapsed.count() << " "
        << (r.passed() ? "PASS" : "FAIL") << "\n";
    for (const auto& [k, v] : r.stats) out << "  " << k << "=" << v << "\n";
    for (const auto& cx : r.mismatches) out << to_string(cx);
  }
  return out.str();
}

std::string format_report_json(const std::vector<SuiteReport>& reports) {
  nlohmann::json doc;
  bool passed = true;
  doc["suites"] = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json s;
    s["name"] = r.name;
    s["seed"] = r.seed;
    s["last_seed"] = r.instances_checked ? r.seed + r.instances_checked - 1 : r.seed;
    s["mutation"] = std::string(to_string(r.mutation));
    s["instances"] = r.instances_checked;
    s["checks"] = r.checks;
    s["mismatches"] = r.mismatch_count;
    s["passed"] = r.passed();
    s["stats"] = r.stats;
    nlohmann::json seeds = nlohmann::json::array();
    for (const auto& cx : r.mismatches) seeds.push_back(cx.seed);
    s["counterexample_seeds"] = seeds;
    doc["suites"].push_back(std::move(s));
    passed = passed && r.passed();
  }
  doc["passed"] = passed;
  return doc.dump();
}

}  // namespace rbnkit
