#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "rbnkit/cli.hpp"
#include "rbnkit/text_format.hpp"
#include "support.hpp"

using namespace rbnkit;

namespace {

namespace fs = std::filesystem;

struct Scratch {
  fs::path dir;

  Scratch() {
    dir = fs::temp_directory_path() / ("rbnkit_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }

  std::string write(const std::string& name, const std::string& text) const {
    const auto path = dir / name;
    std::ofstream(path) << text;
    return path.string();
  }
};

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

const char* kObserveNet = "ionet\nstates a b\ntrans a @ b -> b\n";

}  // namespace

TEST_CASE("cli crp answers yes with an empty trace") {
  Scratch s;
  const auto net = s.write("n.io", kObserveNet);
  const auto r = run({"crp", "--net", net, "--query", "init: a b ; target: #b>=1"});
  CHECK(r.code == cli::kYes);
  CHECK(r.out.rfind("YES\n", 0) == 0);
  const auto trace = parse_trace(r.out.substr(4));
  CHECK(trace.steps.empty());
}

TEST_CASE("cli crp answers no through saturation") {
  Scratch s;
  const auto net = s.write("n.io", kObserveNet);
  const auto query = s.write("q.txt", "init: a\ntarget: #b>=1\n");
  const auto r = run({"crp", "--net", net, "--query", query, "--mode", "saturate"});
  CHECK(r.code == cli::kNo);
  CHECK(r.out == "NO\n");
}

TEST_CASE("cli reach reports exhausted populations") {
  Scratch s;
  const auto net = s.write("n.io", kObserveNet);
  const auto r = run({"reach", "--net", net, "--query", "init: a ; target: #b>=1", "--pop", "1..3"});
  CHECK(r.code == cli::kUnknown);
  CHECK(r.out == "NO_AT_BOUNDS\n");
}

TEST_CASE("cli reach prints a replayable witness") {
  Scratch s;
  const auto net = s.write("n.io", kObserveNet);
  const auto r = run({"reach", "--net", net, "--query", "init: a:[1,*] b:[1,*] ; target: b:[2,*]", "--pop", "2"});
  REQUIRE(r.code == cli::kYes);
  const auto trace = parse_trace(r.out.substr(4));
  CHECK(trace.steps.size() == 1);
  CHECK_FALSE(trace_error(std::get<IONet>(parse_net(kObserveNet)), trace));
}

TEST_CASE("cli crp explicit mode and >=1,=0 queries") {
  Scratch s;
  const auto net = s.write("n.io", kObserveNet);
  const auto eq0 = run({"crp", "--net", net, "--query", "init: a b ; target: #b>=1 & #a=0",
                        "--pop", "2..4"});
  CHECK(eq0.code == cli::kYes);
  const auto expl = run({"crp", "--net", net, "--query", "init: a ; target: #b>=1", "--mode",
                         "explicit", "--pop", "1..3"});
  CHECK(expl.code == cli::kUnknown);
}

TEST_CASE("cli translate writes the net and certificate") {
  Scratch s;
  const auto in = s.write("n.io", kObserveNet);
  const auto out = (s.dir / "n.rbn").string();
  CHECK(run({"translate", "--in", in, "--out", out}).code == cli::kYes);
  std::ifstream f(out);
  std::stringstream text;
  text << f.rdbuf();
  const auto rbn = std::get<RBN>(parse_net(text.str()));
  CHECK(rbn.transitions().size() == 3);
  CHECK(text.str().find("# certificate") != std::string::npos);

  const auto stdout_run = run({"translate", "--in", in});
  CHECK(stdout_run.out == text.str());
}

TEST_CASE("cli simulate is reproducible") {
  Scratch s;
  const auto net = s.write("n.rbn", "rbn\nstates q p r\nalphabet m\ntrans q !m -> q\ntrans p ?m -> r\n");
  const std::vector<std::string> args{"simulate", "--net", net, "--config", "{q:1, p:3}",
                                      "--steps", "4", "--seed", "5"};
  const auto first = run(args);
  CHECK(first.code == cli::kYes);
  CHECK(first.out == run(args).out);
  const auto trace = parse_trace(first.out);
  CHECK(trace.initial == Configuration{{"q", 1}, {"p", 3}});
  CHECK_FALSE(trace_error(std::get<RBN>(parse_net(
                              "rbn\nstates q p r\nalphabet m\ntrans q !m -> q\ntrans p ?m -> r\n")),
                          trace));
}

TEST_CASE("cli validate passes on a small corpus") {
  const auto r = run({"validate", "--seed", "3", "--iters", "20"});
  CHECK(r.code == cli::kYes);
  CHECK(r.out.find("\"seed\"") != std::string::npos);
  const auto mutated = run({"validate", "--iters", "100", "--mutation", "drop-receive"});
  CHECK(mutated.code == cli::kNo);
}

TEST_CASE("cli usage, parse and budget errors") {
  Scratch s;
  const auto net = s.write("n.io", kObserveNet);
  CHECK(run({}).code == cli::kUsage);
  CHECK(run({"frobnicate"}).code == cli::kUsage);
  CHECK(run({"crp", "--net", net}).code == cli::kUsage);
  CHECK(run({"crp", "--net", (s.dir / "missing").string(), "--query", "target: #a>=1"}).code ==
        cli::kUsage);

  const auto bad_net = s.write("bad.io", "ionet\nstates a\ntrans a @ b -> a\n");
  const auto parse_fail = run({"crp", "--net", bad_net, "--query", "init: a ; target: #a>=1"});
  CHECK(parse_fail.code == cli::kUsage);
  CHECK(parse_fail.err.find("3:") != std::string::npos);

  CHECK(run({"reach", "--net", net, "--query", "init: a b ; target: #a>=1", "--pop", "3..1"}).code ==
        cli::kUsage);
  CHECK(run({"validate", "--mutation", "nonsense"}).code == cli::kUsage);

  const auto unknown_state = run({"reach", "--net", net, "--query", "init: a b ; target: c:[1,*]"});
  CHECK(unknown_state.code == cli::kUsage);
  const auto tight = run({"reach", "--net", net, "--query", "init: a b ; target: a:[5,*]",
                          "--pop", "4..4", "--budget", "2"});
  CHECK(tight.code == cli::kBudget);
  CHECK(run({"--help"}).code == cli::kYes);
}
