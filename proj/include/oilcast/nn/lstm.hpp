#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "oilcast/random.hpp"
#include "oilcast/tensor.hpp"

namespace oilcast::nn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// LSTM(H) -> Dropout -> Dense(D) -> sigmoid -> Dense(1) -> linear.
struct LstmConfig {
  std::size_t input_dim = 6;
  std::size_t hidden_dim = 50;
  std::size_t lookback = 50;
  std::size_t dense_dim = 64;
  double dropout_rate = 0.2;

  static constexpr std::size_t output_dim = 1;

  /// Throws DataError on zero dimensions or a rate outside [0, 1).
  void validate() const;

  friend bool operator==(const LstmConfig&, const LstmConfig&) = default;
};

/// 4((F+H)H + H) + (HD + D) + (D + 1).
std::size_t param_count(const LstmConfig& config);

/// The recurrent block alone: 4((F+H)H + H).
std::size_t lstm_param_count(const LstmConfig& config);

enum class Gate : std::size_t { Forget = 0, Input = 1, Candidate = 2, Output = 3 };

enum class Block : std::size_t {
  ForgetWeights,
  InputWeights,
  CandidateWeights,
  OutputWeights,
  ForgetBias,
  InputBias,
  CandidateBias,
  OutputBias,
  Dense1Weights,
  Dense1Bias,
  Dense2Weights,
  Dense2Bias,
};

inline constexpr std::size_t kBlockCount = 12;

struct BlockShape {
  std::string_view name;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t offset = 0;

  std::size_t size() const { return rows * cols; }
};

/// Gate weights are [H x (H+F)] and multiply the stacked vector [h_prev; x_t].
std::array<BlockShape, kBlockCount> block_layout(const LstmConfig& config);

/// Every trainable scalar of the network in one contiguous buffer.
///
/// Blocks are exposed as column-major Eigen maps over that buffer, so the
/// optimizer, the gradient checker and the checkpoint codec can treat the
/// parameters as a flat vector. Gradients use the same type.
class LstmParams {
 public:
  using MatrixMap = Eigen::Map<Matrix>;
  using ConstMatrixMap = Eigen::Map<const Matrix>;

  LstmParams() = default;
  explicit LstmParams(const LstmConfig& config);  // all zeros

  const LstmConfig& config() const { return config_; }
  const std::array<BlockShape, kBlockCount>& layout() const { return layout_; }
  const BlockShape& shape(Block b) const { return layout_[static_cast<std::size_t>(b)]; }

  std::size_t size() const { return values_.size(); }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  MatrixMap block(Block b);
  ConstMatrixMap block(Block b) const;

  MatrixMap weights(Gate g) { return block(static_cast<Block>(static_cast<std::size_t>(g))); }
  ConstMatrixMap weights(Gate g) const { return block(static_cast<Block>(static_cast<std::size_t>(g))); }
  MatrixMap bias(Gate g) { return block(static_cast<Block>(static_cast<std::size_t>(g) + 4)); }
  ConstMatrixMap bias(Gate g) const { return block(static_cast<Block>(static_cast<std::size_t>(g) + 4)); }

  /// Name of the block holding flat index `i`.
  std::string_view block_name(std::size_t i) const;

  friend bool operator==(const LstmParams& a, const LstmParams& b) {
    return a.config_ == b.config_ && a.values_ == b.values_;
  }

 private:
  LstmConfig config_;
  std::array<BlockShape, kBlockCount> layout_{};
  std::vector<double> values_;
};

/// Glorot-uniform weights (bound sqrt(6 / (fan_in + fan_out)) per matrix), zero biases.
LstmParams init_params(const LstmConfig& config, std::uint64_t seed);

/// Glorot bound used by init_params for a block (0 for biases).
double init_bound(const BlockShape& shape);

double sigmoid(double x);

struct GateActivations {
  Matrix forget;
  Matrix input;
  Matrix candidate;
  Matrix output;
};

/// Everything one timestep contributes to backpropagation. Matrices are [rows x batch].
struct StepCache {
  Matrix stacked;  // [h_prev; x_t]
  Matrix c_prev;
  GateActivations gates;
  Matrix c;
  Matrix tanh_c;
  Matrix h;
};

/// Batched cell update. x is [F x B], h_prev and c_prev are [H x B].
StepCache cell_step(const Matrix& x, const Matrix& h_prev, const Matrix& c_prev, const LstmParams& params);

struct CellOutput {
  Vector h;
  Vector c;
  GateActivations gates;
};

/// Single-sample cell update: the five gate equations for one timestep.
CellOutput lstm_cell_forward(const Vector& x, const Vector& h_prev, const Vector& c_prev, const LstmParams& params);

struct ForwardCache {
  std::vector<StepCache> steps;  // one per lookback step
  Matrix dropout_mask;           // [H x B], entries 0 or 1 / (1 - rate)
  Matrix dropped;                // h_L masked
  Matrix dense_act;              // sigmoid(dense1), [D x B]
  Vector output;                 // [B]
};

enum class Mode { Train, Eval };

struct ForwardResult {
  std::vector<double> predictions;
  ForwardCache cache;
};

/// Inverted-dropout keep mask for the final hidden state.
Matrix sample_dropout_mask(const LstmConfig& config, std::size_t batch, Rng& rng);

/// Unrolls `lookback` steps from zero states. Train mode with a positive dropout
/// rate needs `rng`. Throws DataError on shape mismatch.
ForwardResult forward(const Tensor3& batch, const LstmParams& params, Mode mode, Rng* rng = nullptr);

/// Forward pass with an explicit dropout mask ([H x B]).
ForwardResult forward_with_mask(const Tensor3& batch, const LstmParams& params, const Matrix& mask);

/// Mean of squared residuals. Throws DataError on empty or mismatched input.
double mse_loss(std::span<const double> predictions, std::span<const double> targets);

/// Exact gradient of mse_loss(forward(batch), targets) for the cached pass.
LstmParams backward(const ForwardCache& cache, std::span<const double> targets, const LstmParams& params);

}  // namespace oilcast::nn
