#include "oilcast/nn/lstm.hpp"

#include <cmath>

#include "oilcast/error.hpp"

namespace oilcast::nn {

void LstmConfig::validate() const {
  if (input_dim == 0 || hidden_dim == 0 || lookback == 0 || dense_dim == 0)
    throw DataError("LSTM dimensions must be positive");
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) throw DataError("dropout rate must lie in [0, 1)");
}

std::size_t lstm_param_count(const LstmConfig& c) {
  return 4 * ((c.input_dim + c.hidden_dim) * c.hidden_dim + c.hidden_dim);
}

std::size_t param_count(const LstmConfig& c) {
  return lstm_param_count(c) + (c.hidden_dim * c.dense_dim + c.dense_dim) + (c.dense_dim * c.output_dim + c.output_dim);
}

std::array<BlockShape, kBlockCount> block_layout(const LstmConfig& c) {
  const std::size_t h = c.hidden_dim;
  const std::size_t z = c.hidden_dim + c.input_dim;
  std::array<BlockShape, kBlockCount> layout{{
      {"lstm.forget.weights", h, z},
      {"lstm.input.weights", h, z},
      {"lstm.candidate.weights", h, z},
      {"lstm.output.weights", h, z},
      {"lstm.forget.bias", h, 1},
      {"lstm.input.bias", h, 1},
      {"lstm.candidate.bias", h, 1},
      {"lstm.output.bias", h, 1},
      {"dense1.weights", c.dense_dim, h},
      {"dense1.bias", c.dense_dim, 1},
      {"dense2.weights", c.output_dim, c.dense_dim},
      {"dense2.bias", c.output_dim, 1},
  }};
  std::size_t offset = 0;
  for (auto& b : layout) {
    b.offset = offset;
    offset += b.size();
  }
  return layout;
}

LstmParams::LstmParams(const LstmConfig& config) : config_(config), layout_(block_layout(config)) {
  config_.validate();
  values_.assign(param_count(config_), 0.0);
}

LstmParams::MatrixMap LstmParams::block(Block b) {
  const auto& s = shape(b);
  return MatrixMap(values_.data() + s.offset, static_cast<Eigen::Index>(s.rows), static_cast<Eigen::Index>(s.cols));
}

LstmParams::ConstMatrixMap LstmParams::block(Block b) const {
  const auto& s = shape(b);
  return ConstMatrixMap(values_.data() + s.offset, static_cast<Eigen::Index>(s.rows), static_cast<Eigen::Index>(s.cols));
}

std::string_view LstmParams::block_name(std::size_t i) const {
  for (const auto& s : layout_) {
    if (i >= s.offset && i < s.offset + s.size()) return s.name;
  }
  return "out of range";
}

double init_bound(const BlockShape& shape) {
  if (shape.name.ends_with("bias")) return 0.0;
  // weights map cols -> rows
  return std::sqrt(6.0 / static_cast<double>(shape.rows + shape.cols));
}

LstmParams init_params(const LstmConfig& config, std::uint64_t seed) {
  LstmParams params(config);
  Rng rng(seed);
  auto values = params.values();
  for (const auto& s : params.layout()) {
    const double bound = init_bound(s);
    if (bound == 0.0) continue;
    for (std::size_t k = 0; k < s.size(); ++k) values[s.offset + k] = rng.uniform(-bound, bound);
  }
  return params;
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

namespace {

Matrix sigmoid_of(const Matrix& a) { return a.unaryExpr([](double v) { return sigmoid(v); }); }
Matrix tanh_of(const Matrix& a) { return a.array().tanh().matrix(); }

Matrix affine(const LstmParams& p, Gate g, const Matrix& stacked) {
  Matrix out = p.weights(g) * stacked;
  out.colwise() += p.bias(g).col(0);
  return out;
}

void check_batch(const Tensor3& batch, const LstmConfig& config) {
  if (batch.samples() == 0) throw DataError("empty batch");
  if (batch.steps() != config.lookback || batch.features() != config.input_dim)
    throw DataError("batch shape [" + std::to_string(batch.samples()) + " x " + std::to_string(batch.steps()) + " x " +
                    std::to_string(batch.features()) + "] does not match config [B x " +
                    std::to_string(config.lookback) + " x " + std::to_string(config.input_dim) + "]");
}

}  // namespace

StepCache cell_step(const Matrix& x, const Matrix& h_prev, const Matrix& c_prev, const LstmParams& params) {
  const auto& cfg = params.config();
  const auto h = static_cast<Eigen::Index>(cfg.hidden_dim);
  if (x.rows() != static_cast<Eigen::Index>(cfg.input_dim) || h_prev.rows() != h || c_prev.rows() != h ||
      h_prev.cols() != x.cols() || c_prev.cols() != x.cols())
    throw DataError("cell input dimensions do not match config");

  StepCache step;
  step.stacked.resize(h + x.rows(), x.cols());
  step.stacked.topRows(h) = h_prev;
  step.stacked.bottomRows(x.rows()) = x;
  step.c_prev = c_prev;
  step.gates.forget = sigmoid_of(affine(params, Gate::Forget, step.stacked));
  step.gates.input = sigmoid_of(affine(params, Gate::Input, step.stacked));
  step.gates.candidate = tanh_of(affine(params, Gate::Candidate, step.stacked));
  step.gates.output = sigmoid_of(affine(params, Gate::Output, step.stacked));
  step.c = step.gates.forget.cwiseProduct(c_prev) + step.gates.input.cwiseProduct(step.gates.candidate);
  step.tanh_c = tanh_of(step.c);
  step.h = step.gates.output.cwiseProduct(step.tanh_c);
  return step;
}

CellOutput lstm_cell_forward(const Vector& x, const Vector& h_prev, const Vector& c_prev, const LstmParams& params) {
  auto step = cell_step(x, h_prev, c_prev, params);
  return CellOutput{step.h.col(0), step.c.col(0), std::move(step.gates)};
}

Matrix sample_dropout_mask(const LstmConfig& config, std::size_t batch, Rng& rng) {
  const double keep = 1.0 - config.dropout_rate;
  Matrix mask(static_cast<Eigen::Index>(config.hidden_dim), static_cast<Eigen::Index>(batch));
  for (Eigen::Index j = 0; j < mask.cols(); ++j) {
    for (Eigen::Index i = 0; i < mask.rows(); ++i) mask(i, j) = rng.bernoulli(keep) ? 1.0 / keep : 0.0;
  }
  return mask;
}

ForwardResult forward_with_mask(const Tensor3& batch, const LstmParams& params, const Matrix& mask) {
  const auto& cfg = params.config();
  check_batch(batch, cfg);
  const auto b = static_cast<Eigen::Index>(batch.samples());
  const auto h = static_cast<Eigen::Index>(cfg.hidden_dim);
  const auto f = static_cast<Eigen::Index>(cfg.input_dim);
  if (mask.rows() != h || mask.cols() != b) throw DataError("dropout mask shape does not match batch");

  ForwardResult result;
  auto& cache = result.cache;
  cache.steps.reserve(cfg.lookback);
  Matrix h_state = Matrix::Zero(h, b);
  Matrix c_state = Matrix::Zero(h, b);
  Matrix x(f, b);
  for (std::size_t t = 0; t < cfg.lookback; ++t) {
    for (Eigen::Index n = 0; n < b; ++n) {
      for (Eigen::Index k = 0; k < f; ++k)
        x(k, n) = batch(static_cast<std::size_t>(n), t, static_cast<std::size_t>(k));
    }
    cache.steps.push_back(cell_step(x, h_state, c_state, params));
    h_state = cache.steps.back().h;
    c_state = cache.steps.back().c;
  }

  cache.dropout_mask = mask;
  cache.dropped = h_state.cwiseProduct(mask);
  Matrix dense_pre = params.block(Block::Dense1Weights) * cache.dropped;
  dense_pre.colwise() += params.block(Block::Dense1Bias).col(0);
  cache.dense_act = sigmoid_of(dense_pre);
  Matrix out = params.block(Block::Dense2Weights) * cache.dense_act;
  out.colwise() += params.block(Block::Dense2Bias).col(0);
  cache.output = out.row(0).transpose();
  result.predictions.assign(cache.output.data(), cache.output.data() + cache.output.size());
  return result;
}

ForwardResult forward(const Tensor3& batch, const LstmParams& params, Mode mode, Rng* rng) {
  const auto& cfg = params.config();
  check_batch(batch, cfg);
  if (mode == Mode::Train && cfg.dropout_rate > 0.0) {
    if (rng == nullptr) throw DataError("train-mode forward with dropout needs a random generator");
    return forward_with_mask(batch, params, sample_dropout_mask(cfg, batch.samples(), *rng));
  }
  return forward_with_mask(
      batch, params,
      Matrix::Ones(static_cast<Eigen::Index>(cfg.hidden_dim), static_cast<Eigen::Index>(batch.samples())));
}

double mse_loss(std::span<const double> predictions, std::span<const double> targets) {
  if (predictions.empty()) throw DataError("mse of empty input");
  if (predictions.size() != targets.size()) throw DataError("prediction/target length mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const double r = targets[i] - predictions[i];
    sum += r * r;
  }
  return sum / static_cast<double>(predictions.size());
}

LstmParams backward(const ForwardCache& cache, std::span<const double> targets, const LstmParams& params) {
  const auto& cfg = params.config();
  const auto batch = cache.output.size();
  if (cache.steps.size() != cfg.lookback) throw DataError("forward cache length does not match lookback");
  if (static_cast<std::size_t>(batch) != targets.size()) throw DataError("target count does not match cached batch");
  if (cache.dropped.rows() != static_cast<Eigen::Index>(cfg.hidden_dim)) throw DataError("cache does not match config");

  LstmParams grads(cfg);
  const auto h = static_cast<Eigen::Index>(cfg.hidden_dim);

  // loss = mean (y - t)^2
  Matrix d_out(1, batch);
  for (Eigen::Index n = 0; n < batch; ++n)
    d_out(0, n) = 2.0 * (cache.output(n) - targets[static_cast<std::size_t>(n)]) / static_cast<double>(batch);

  grads.block(Block::Dense2Weights) = d_out * cache.dense_act.transpose();
  grads.block(Block::Dense2Bias) = d_out.rowwise().sum();
  const Matrix d_act = params.block(Block::Dense2Weights).transpose() * d_out;
  const Matrix d_dense_pre =
      d_act.cwiseProduct(cache.dense_act.cwiseProduct((1.0 - cache.dense_act.array()).matrix()));
  grads.block(Block::Dense1Weights) = d_dense_pre * cache.dropped.transpose();
  grads.block(Block::Dense1Bias) = d_dense_pre.rowwise().sum();

  Matrix d_h = (params.block(Block::Dense1Weights).transpose() * d_dense_pre).cwiseProduct(cache.dropout_mask);
  Matrix d_c = Matrix::Zero(h, batch);

  for (auto it = cache.steps.rbegin(); it != cache.steps.rend(); ++it) {
    const auto& s = *it;
    const auto& g = s.gates;
    const Matrix d_o = d_h.cwiseProduct(s.tanh_c);
    d_c += d_h.cwiseProduct(g.output).cwiseProduct((1.0 - s.tanh_c.array().square()).matrix());

    const Matrix d_f_pre = d_c.cwiseProduct(s.c_prev).cwiseProduct(g.forget.cwiseProduct((1.0 - g.forget.array()).matrix()));
    const Matrix d_i_pre = d_c.cwiseProduct(g.candidate).cwiseProduct(g.input.cwiseProduct((1.0 - g.input.array()).matrix()));
    const Matrix d_g_pre = d_c.cwiseProduct(g.input).cwiseProduct((1.0 - g.candidate.array().square()).matrix());
    const Matrix d_o_pre = d_o.cwiseProduct(g.output.cwiseProduct((1.0 - g.output.array()).matrix()));

    Matrix d_stacked = Matrix::Zero(s.stacked.rows(), batch);
    const std::array<std::pair<Gate, const Matrix*>, 4> pre{
        {{Gate::Forget, &d_f_pre}, {Gate::Input, &d_i_pre}, {Gate::Candidate, &d_g_pre}, {Gate::Output, &d_o_pre}}};
    for (const auto& [gate, d_pre] : pre) {
      grads.weights(gate).noalias() += *d_pre * s.stacked.transpose();
      grads.bias(gate) += d_pre->rowwise().sum();
      d_stacked.noalias() += params.weights(gate).transpose() * *d_pre;
    }
    d_h = d_stacked.topRows(h);
    d_c = d_c.cwiseProduct(g.forget).eval();
  }
  return grads;
}

}  // namespace oilcast::nn
