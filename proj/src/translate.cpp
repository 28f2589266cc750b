#include "rbnkit/translate.hpp"

#include <set>

namespace rbnkit {

std::string_view to_string(ModelKind kind) {
  return kind == ModelKind::IONet ? "ionet" : "rbn";
}

TranslationCertificate TranslationCertificate::identity(const std::vector<StateId>& states,
                                                        ModelKind source, ModelKind target) {
  TranslationCertificate cert;
  for (const auto& q : states) cert.state_map.emplace(q, q);
  cert.source_kind = source;
  cert.target_kind = target;
  return cert;
}

bool TranslationCertificate::is_identity() const {
  if (!padding.empty()) return false;
  for (const auto& [from, to] : state_map) {
    if (from != to) return false;
  }
  return true;
}

void TranslationCertificate::validate() const {
  std::set<StateId> image;
  for (const auto& [from, to] : state_map) {
    if (!image.insert(to).second) {
      throw Error(ErrorCode::InvalidCertificate, "state map is not injective at '" + to.str() + "'");
    }
  }
  for (const auto& [q, n] : padding) {
    if (image.contains(q)) {
      throw Error(ErrorCode::InvalidCertificate,
                  "padding state '" + q.str() + "' is the image of a source state");
    }
  }
}

std::pair<RBN, TranslationCertificate> io_to_rbn(const IONet& net) {
  std::vector<MessageId> alphabet;
  std::vector<RBNTransition> transitions;
  alphabet.reserve(net.states().size());
  transitions.reserve(net.states().size() + net.transitions().size());
  for (const auto& q : net.states()) {
    alphabet.emplace_back(q.str());
    transitions.push_back(RBNTransition::broadcast(q, MessageId{q.str()}, q));
  }
  for (const auto& t : net.transitions()) {
    transitions.push_back(RBNTransition::receive(t.source, MessageId{t.observed.str()}, t.target));
  }
  RBN rbn(net.states(), std::move(alphabet), std::move(transitions));
  return {std::move(rbn), TranslationCertificate::identity(net.states(), ModelKind::IONet,
                                                           ModelKind::RBN)};
}

namespace {

const StateId& renamed(const TranslationCertificate& cert, const StateId& q) {
  auto it = cert.state_map.find(q);
  if (it == cert.state_map.end()) {
    throw Error(ErrorCode::UnknownState, "state '" + q.str() + "' is outside the certificate");
  }
  return it->second;
}

}  // namespace

Configuration transport_config(const TranslationCertificate& cert, const Configuration& c) {
  Configuration out;
  for (const auto& [q, n] : c) out.add(renamed(cert, q), n);
  return out + cert.padding;
}

Cube transport_cube(const TranslationCertificate& cert, const Cube& cube) {
  Cube out(cube.role());
  for (const auto& [q, b] : cube.explicit_bounds()) out.set(renamed(cert, q), b);
  for (const auto& [q, n] : cert.padding) out.set(q, Bounds::exactly(n));
  return out;
}

TranslationCertificate compose(const TranslationCertificate& first,
                               const TranslationCertificate& second) {
  TranslationCertificate out;
  for (const auto& [from, mid] : first.state_map) out.state_map.emplace(from, renamed(second, mid));
  out.padding = transport_config(second, first.padding);
  out.source_kind = first.source_kind;
  out.target_kind = second.target_kind;
  return out;
}

}  // namespace rbnkit
