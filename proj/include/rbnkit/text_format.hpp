#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "rbnkit/explicit_reach.hpp"
#include "rbnkit/model.hpp"
#include "rbnkit/symbolic_reach.hpp"
#include "rbnkit/translate.hpp"

namespace rbnkit {

// Net files:
//
//   ionet                     rbn
//   states a b                states p q
//   trans a @ b -> b          alphabet m
//                             trans p !m -> q
//                             trans q ?m -> p
//
// `#` starts a comment. Tokens may be separated by any amount of blank space.
Net parse_net(std::string_view text);
std::string serialize_net(const IONet& net);
std::string serialize_net(const RBN& net);
std::string serialize_net(const Net& net);

/// `init: a b ; target: #b>=1 & #a=0`. Clauses are separated by `;` or a
/// newline. Either side also accepts cube atoms `q:[l,u]` with `*` for an
/// unbounded upper limit.
struct QuerySpec {
  Cube from = Cube::initial();
  // Set when the init clause lists plain state names only.
  std::optional<UnboundedInitialCube> support;
  Cube to = Cube::target();
  // Set when the target clause uses only `#q>=1` and `#q=0` atoms.
  std::optional<CrpQuery> crp;
};

QuerySpec parse_query(std::string_view text);

// `{a:1, b:2}`; the braces are optional.
Configuration parse_config(std::string_view text);
// `A..B`, or a single population `A`.
PopulationRange parse_population_range(std::string_view text);

// Traces alternate `config {...}` and `step ...` lines:
//   step io a @ b -> b
//   step bcast q !m -> q recv [p?m->r, p?m->r]
std::string format_step(const Step& step);
std::string format_trace(const Trace& trace);
Trace parse_trace(std::string_view text);

// `#`-prefixed lines describing the certificate; appended to translated nets.
std::string format_certificate(const TranslationCertificate& cert);

}  // namespace rbnkit
