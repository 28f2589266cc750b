#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "rbnkit/model.hpp"

namespace rbnkit {

// Dense count vector indexed by a net's state declaration order.
using Counts = std::vector<std::uint32_t>;

struct CountsHash {
  std::size_t operator()(const Counts& c) const noexcept;
};

// A step as indices into the owning net's canonical transition list. For IO
// nets `primary` is the transition and `receives` is empty; for RBN
// `primary` is the broadcast and `receives` is sorted.
struct DenseStep {
  std::uint32_t primary = 0;
  std::vector<std::uint32_t> receives;
};

/// Successor relation of a net over dense configurations. This is the
/// interface the explicit engine explores; the harness overrides it to
/// inject faults.
class StepSystem {
 public:
  virtual ~StepSystem() = default;

  [[nodiscard]] virtual const std::vector<StateId>& states() const = 0;

  // Appends every successor of `c` exactly once, in canonical order, each
  // with one representative step.
  virtual void successors(const Counts& c, std::vector<std::pair<DenseStep, Counts>>& out) const = 0;

  [[nodiscard]] virtual Step to_step(const DenseStep& s) const = 0;

  // Throws UnknownState for states outside the net.
  [[nodiscard]] Counts to_counts(const Configuration& c) const;
  [[nodiscard]] Configuration to_configuration(const Counts& c) const;
  [[nodiscard]] std::optional<std::uint32_t> index_of(const StateId& q) const;
};

class IoStepSystem : public StepSystem {
 public:
  explicit IoStepSystem(const IONet& net) : net_(net) {}

  [[nodiscard]] const std::vector<StateId>& states() const override { return net_.states(); }
  void successors(const Counts& c, std::vector<std::pair<DenseStep, Counts>>& out) const override;
  [[nodiscard]] Step to_step(const DenseStep& s) const override;

  [[nodiscard]] const IONet& net() const { return net_; }

 protected:
  // Observer and observed must be distinct processes.
  [[nodiscard]] virtual bool enabled(const Counts& c, const IONet::Indexed& t) const;

 private:
  const IONet& net_;
};

class RbnStepSystem : public StepSystem {
 public:
  explicit RbnStepSystem(const RBN& net);

  [[nodiscard]] const std::vector<StateId>& states() const override { return net_.states(); }
  void successors(const Counts& c, std::vector<std::pair<DenseStep, Counts>>& out) const override;
  [[nodiscard]] Step to_step(const DenseStep& s) const override;

  [[nodiscard]] const RBN& net() const { return net_; }

 private:
  struct ReceiveGroup {
    std::uint32_t source;
    std::vector<std::uint32_t> transitions;
  };

  const RBN& net_;
  std::vector<std::uint32_t> broadcasts_;
  // Receive transitions per message, grouped by source state.
  std::vector<std::vector<ReceiveGroup>> receive_groups_;
};

// The system borrows `net`, which must outlive it.
std::unique_ptr<StepSystem> make_step_system(const Net& net);

}  // namespace rbnkit
