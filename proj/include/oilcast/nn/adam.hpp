#pragma once

#include <cstdint>
#include <span>

#include "oilcast/nn/lstm.hpp"

namespace oilcast::nn {

struct AdamHyper {
  double learning_rate = 0.0005;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Moment accumulators shaped like the parameters; both start at zero, step at 0.
struct AdamState {
  AdamState() = default;
  explicit AdamState(const LstmConfig& config, AdamHyper hyper = {})
      : hyper(hyper), first_moment(config), second_moment(config) {}

  AdamHyper hyper;
  LstmParams first_moment;
  LstmParams second_moment;
  std::uint64_t step = 0;
};

/// One bias-corrected Adam update over flat buffers. `t` is the 1-based step number.
void adam_update(std::span<double> params, std::span<const double> grads, std::span<double> first_moment,
                 std::span<double> second_moment, std::uint64_t t, const AdamHyper& hyper);

/// Advances `state.step` and updates `params` in place. Throws DataError naming the
/// block if any gradient is not finite; nothing is modified in that case.
void adam_step(LstmParams& params, const LstmParams& grads, AdamState& state);

}  // namespace oilcast::nn
