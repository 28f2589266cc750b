#pragma once

#include <map>
#include <utility>

#include "rbnkit/model.hpp"

namespace rbnkit {

enum class ModelKind { IONet, RBN };

std::string_view to_string(ModelKind kind);

/// Witness that one instance simulates another: configurations of the source
/// are renamed through `state_map` and padded with the fixed multiset
/// `padding` of auxiliary target-only states.
struct TranslationCertificate {
  std::map<StateId, StateId> state_map;
  Configuration padding;
  ModelKind source_kind = ModelKind::IONet;
  ModelKind target_kind = ModelKind::RBN;

  static TranslationCertificate identity(const std::vector<StateId>& states, ModelKind source,
                                         ModelKind target);

  [[nodiscard]] bool is_identity() const;

  // Throws InvalidCertificate if the map is not injective or the padding
  // touches the image of a source state.
  void validate() const;

  bool operator==(const TranslationCertificate&) const = default;
};

/// Every state q announces itself with q !q -> q; every observation
/// p @ q -> p' becomes the receive p ?q -> p'.
std::pair<RBN, TranslationCertificate> io_to_rbn(const IONet& net);

// Both throw UnknownState for states outside the certificate's domain.
Configuration transport_config(const TranslationCertificate& cert, const Configuration& c);
Cube transport_cube(const TranslationCertificate& cert, const Cube& cube);

// Certificate for "first, then second". The padding of `first` is carried
// through `second`'s renaming.
TranslationCertificate compose(const TranslationCertificate& first,
                               const TranslationCertificate& second);

}  // namespace rbnkit
