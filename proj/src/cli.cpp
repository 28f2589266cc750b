#include "rbnkit/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>

#include "rbnkit/explicit_reach.hpp"
#include "rbnkit/harness.hpp"
#include "rbnkit/symbolic_reach.hpp"
#include "rbnkit/text_format.hpp"
#include "rbnkit/translate.hpp"

namespace rbnkit::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Arguments that name an existing file are read; anything else is taken literally.
std::string file_or_literal(const std::string& arg) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) return read_file(arg);
  return arg;
}

Net load_net(const std::string& path) { return parse_net(read_file(path)); }

std::size_t state_count(const Net& net) {
  return std::visit([](const auto& n) { return n.states().size(); }, net);
}

Count lower_sum(const Cube& cube) {
  return std::accumulate(cube.explicit_bounds().begin(), cube.explicit_bounds().end(), Count{0},
                         [](Count acc, const auto& kv) { return acc + kv.second.lower; });
}

PopulationRange range_or_default(const std::string& pop, const Net& net, const Cube& from,
                                 const Cube& to) {
  if (!pop.empty()) return parse_population_range(pop);
  const Count first = std::max<Count>({1, lower_sum(from), lower_sum(to)});
  return {first, std::max<Count>(first, 2 * state_count(net))};
}

void print_trace(std::ostream& out, const std::optional<Trace>& trace) {
  if (trace) out << format_trace(*trace);
}

struct Options {
  std::string in;
  std::string out;
  std::string net;
  std::string query;
  std::string pop;
  std::string mode = "saturate";
  std::string config;
  std::string mutation = "none";
  std::size_t steps = 10;
  std::uint64_t seed = 1;
  std::size_t iters = 500;
  std::size_t budget = ExploreLimits{}.node_budget;
};

int cmd_translate(const Options& o, std::ostream& out) {
  const auto net = load_net(o.in);
  const auto* io = std::get_if<IONet>(&net);
  if (!io) throw UsageError("translate expects an ionet file");
  const auto [rbn, cert] = io_to_rbn(*io);
  const auto text = serialize_net(rbn) + format_certificate(cert);
  if (o.out.empty()) {
    out << text;
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + o.out + "'");
    f << text;
  }
  return kYes;
}

int cmd_reach(const Options& o, std::ostream& out) {
  const auto net = load_net(o.net);
  const auto query = parse_query(file_or_literal(o.query));
  const auto range = range_or_default(o.pop, net, query.from, query.to);
  const ExploreLimits limits{o.budget};
  const auto result = std::visit(
      [&](const auto& n) { return reach_bounded(n, query.from, query.to, range, limits); }, net);
  if (result.verdict == BoundedVerdict::Yes) {
    out << "YES\n";
    print_trace(out, result.witness);
    return kYes;
  }
  out << "NO_AT_BOUNDS\n";
  return kUnknown;
}

int report(std::ostream& out, const CrpResult& r) {
  out << to_string(r.verdict) << "\n";
  print_trace(out, r.witness);
  switch (r.verdict) {
    case Verdict::Yes: return kYes;
    case Verdict::No: return kNo;
    case Verdict::NoAtBounds: return kUnknown;
  }
  return kUnknown;
}

int cmd_crp(const Options& o, std::ostream& out) {
  const auto net = load_net(o.net);
  const auto query = parse_query(file_or_literal(o.query));
  if (!query.crp) throw UsageError("crp needs a target made of #q>=1 and #q=0 atoms");
  if (!query.support) throw UsageError("crp needs an init clause listing state names");
  const ExploreLimits limits{o.budget};
  std::optional<PopulationRange> range;
  if (!o.pop.empty()) range = parse_population_range(o.pop);

  if (o.mode == "explicit") {
    const auto r = range.value_or(default_population_range(state_count(net), *query.crp));
    const auto result = std::visit(
        [&](const auto& n) {
          return reach_bounded(n, query.support->to_cube(), query.crp->target_cube(), r, limits);
        },
        net);
    if (result.verdict == BoundedVerdict::Yes) return report(out, {Verdict::Yes, result.witness});
    return report(out, {Verdict::NoAtBounds, std::nullopt});
  }
  if (const auto* io = std::get_if<IONet>(&net)) {
    return report(out, io_crp_decide(*io, *query.support, *query.crp, range, limits));
  }
  const auto& rbn = std::get<RBN>(net);
  if (query.crp->kind == CrpKind::Geq1) {
    return report(out, crp_geq1_decide(rbn, *query.support, *query.crp));
  }
  return report(out, crp_geq1_eq0_bounded(rbn, *query.support, *query.crp, range, limits));
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const auto net = load_net(o.net);
  Rng rng(o.seed);
  Trace trace;
  trace.initial = parse_config(file_or_literal(o.config));
  Configuration current = trace.initial;
  for (std::size_t k = 0; k < o.steps; ++k) {
    std::optional<TraceStep> next = std::visit(
        [&](const auto& n) -> std::optional<TraceStep> {
          std::vector<TraceStep> options;
          if constexpr (std::is_same_v<std::decay_t<decltype(n)>, IONet>) {
            for (auto& [t, c] : io_successors(n, current)) options.push_back({t, std::move(c)});
          } else {
            for (auto& [s, c] : rbn_successors(n, current)) options.push_back({s, std::move(c)});
          }
          if (options.empty()) return std::nullopt;
          return options[rng.uniform(0, options.size() - 1)];
        },
        net);
    if (!next) break;
    current = next->after;
    trace.steps.push_back(std::move(*next));
  }
  out << format_trace(trace);
  return kYes;
}

Mutation parse_mutation(const std::string& name) {
  for (auto m : {Mutation::None, Mutation::DropReceive, Mutation::SkipBroadcastPremise,
                 Mutation::LaxSelfObservation}) {
    if (to_string(m) == name) return m;
  }
  throw UsageError("unknown mutation '" + name + "'");
}

int cmd_validate(const Options& o, std::ostream& out) {
  SuiteOptions options;
  options.seed = o.seed;
  options.instances = o.iters;
  options.mutation = parse_mutation(o.mutation);
  options.limits.node_budget = o.budget;
  std::vector<SuiteReport> reports;
  reports.push_back(run_equivalence_suite(options));
  reports.push_back(run_saturation_suite(options));
  reports.push_back(run_io_crp_suite(options));
  reports.push_back(run_strong_simulation_suite(options));
  out << format_report_text(reports);
  out << format_report_json(reports) << "\n";
  const bool ok = std::all_of(reports.begin(), reports.end(),
                              [](const SuiteReport& r) { return r.passed(); });
  return ok ? kYes : kNo;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Verification toolkit for IO nets and reconfigurable broadcast networks", "rbnkit"};
  app.require_subcommand(1);
  Options o;

  auto* translate = app.add_subcommand("translate", "Translate an IO net into an RBN");
  translate->add_option("--in", o.in, "IO net file")->required();
  translate->add_option("--out", o.out, "Output file (default: standard output)");

  auto* reach = app.add_subcommand("reach", "Bounded cube reachability");
  reach->add_option("--net", o.net, "Net file")->required();
  reach->add_option("--query", o.query, "Query file or text")->required();
  reach->add_option("--pop", o.pop, "Population range A..B");
  reach->add_option("--budget", o.budget, "Node budget per exploration");

  auto* crp = app.add_subcommand("crp", "Decide a cardinality reachability query");
  crp->add_option("--net", o.net, "Net file")->required();
  crp->add_option("--query", o.query, "Query file or text")->required();
  crp->add_option("--mode", o.mode, "saturate or explicit")
      ->check(CLI::IsMember({"saturate", "explicit"}));
  crp->add_option("--pop", o.pop, "Population range A..B for bounded search");
  crp->add_option("--budget", o.budget, "Node budget per exploration");

  auto* simulate = app.add_subcommand("simulate", "Print a random run");
  simulate->add_option("--net", o.net, "Net file")->required();
  simulate->add_option("--config", o.config, "Initial configuration, e.g. {a:1, b:2}")->required();
  simulate->add_option("--steps", o.steps, "Maximum number of steps");
  simulate->add_option("--seed", o.seed, "Random seed");

  auto* validate = app.add_subcommand("validate", "Run the randomized differential suites");
  validate->add_option("--seed", o.seed, "Base seed");
  validate->add_option("--iters", o.iters, "Instances per suite");
  validate->add_option("--budget", o.budget, "Node budget per exploration");
  validate->add_option("--mutation", o.mutation, "Inject a fault: none, drop-receive, "
                                                 "skip-broadcast-premise, lax-self-observation");

  std::vector<std::string> argv_store{"rbnkit"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kYes : kUsage;
  }

  try {
    if (*translate) return cmd_translate(o, out);
    if (*reach) return cmd_reach(o, out);
    if (*crp) return cmd_crp(o, out);
    if (*simulate) return cmd_simulate(o, out);
    if (*validate) return cmd_validate(o, out);
  } catch (const UsageError& e) {
    err << "rbnkit: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "rbnkit: " << e.what() << "\n";
    return e.code() == ErrorCode::BudgetExceeded ? kBudget : kUsage;
  } catch (const std::exception& e) {
    err << "rbnkit: internal error: " << e.what() << "\n";
    return kBudget;
  }
  return kUsage;
}

}  // namespace rbnkit::cli
