#include "oilcast/nn/gradient_check.hpp"

#include <algorithm>
#include <cmath>

namespace oilcast::nn {

double relative_error(double analytic, double numeric) {
  const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
  return std::abs(analytic - numeric) / scale;
}

GradientCheckReport gradient_check(const LstmConfig& config, std::uint64_t seed, double epsilon, std::size_t batch) {
  Rng rng(derive_seed(seed, "gradient-check"));
  LstmParams params = init_params(config, seed);
  // non-zero biases so every term of the chain rule is exercised
  for (std::size_t b = static_cast<std::size_t>(Block::ForgetBias); b < kBlockCount; ++b) {
    const auto& s = params.shape(static_cast<Block>(b));
    if (!s.name.ends_with("bias")) continue;
    for (std::size_t k = 0; k < s.size(); ++k) params.values()[s.offset + k] = rng.uniform(-0.5, 0.5);
  }

  Tensor3 inputs(batch, config.lookback, config.input_dim);
  for (double& v : inputs.values()) v = rng.uniform(-1.0, 1.0);
  std::vector<double> targets(batch);
  for (double& t : targets) t = rng.uniform(0.0, 1.0);

  const Matrix mask = config.dropout_rate > 0.0
                          ? sample_dropout_mask(config, batch, rng)
                          : Matrix::Ones(static_cast<Eigen::Index>(config.hidden_dim), static_cast<Eigen::Index>(batch));

  const auto pass = forward_with_mask(inputs, params, mask);
  const LstmParams grads = backward(pass.cache, targets, params);

  auto loss_at = [&](const LstmParams& p) { return mse_loss(forward_with_mask(inputs, p, mask).predictions, targets); };

  GradientCheckReport report;
  auto values = params.values();
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double original = values[k];
    values[k] = original + epsilon;
    const double up = loss_at(params);
    values[k] = original - epsilon;
    const double down = loss_at(params);
    values[k] = original;

    const double numeric = (up - down) / (2.0 * epsilon);
    const double analytic = grads.values()[k];
    const double err = relative_error(analytic, numeric);
    if (err > report.max_relative_error || report.parameters_checked == 0) {
      report.max_relative_error = err;
      report.worst_block = std::string(params.block_name(k));
      report.worst_index = k;
      report.analytic = analytic;
      report.numeric = numeric;
    }
    ++report.parameters_checked;
  }
  return report;
}

}  // namespace oilcast::nn
