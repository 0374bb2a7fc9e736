#include "oilcast/nn/adam.hpp"

#include <cmath>

#include "oilcast/error.hpp"

namespace oilcast::nn {

void adam_update(std::span<double> params, std::span<const double> grads, std::span<double> first_moment,
                 std::span<double> second_moment, std::uint64_t t, const AdamHyper& hyper) {
  if (grads.size() != params.size() || first_moment.size() != params.size() || second_moment.size() != params.size())
    throw DataError("adam buffers differ in size");
  if (t == 0) throw DataError("adam step numbers start at 1");
  const double correction1 = 1.0 - std::pow(hyper.beta1, static_cast<double>(t));
  const double correction2 = 1.0 - std::pow(hyper.beta2, static_cast<double>(t));
  for (std::size_t k = 0; k < params.size(); ++k) {
    const double g = grads[k];
    first_moment[k] = hyper.beta1 * first_moment[k] + (1.0 - hyper.beta1) * g;
    second_moment[k] = hyper.beta2 * second_moment[k] + (1.0 - hyper.beta2) * g * g;
    const double m_hat = first_moment[k] / correction1;
    const double v_hat = second_moment[k] / correction2;
    params[k] -= hyper.learning_rate * m_hat / (std::sqrt(v_hat) + hyper.epsilon);
  }
}

void adam_step(LstmParams& params, const LstmParams& grads, AdamState& state) {
  if (grads.config() != params.config() || state.first_moment.size() != params.size())
    throw DataError("adam state, gradients and parameters have different shapes");
  const auto g = grads.values();
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!std::isfinite(g[k]))
      throw DataError("non-finite gradient in " + std::string(grads.block_name(k)) + " at flat index " +
                      std::to_string(k));
  }
  ++state.step;
  adam_update(params.values(), g, state.first_moment.values(), state.second_moment.values(), state.step, state.hyper);
}

}  // namespace oilcast::nn
