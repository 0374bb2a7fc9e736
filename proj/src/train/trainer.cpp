#include "oilcast/train/trainer.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "oilcast/error.hpp"
#include "oilcast/format.hpp"
#include "oilcast/nn/adam.hpp"

namespace oilcast::train {

void TrainConfig::validate() const {
  if (batch_size == 0) throw DataError("batch_size must be at least 1");
  if (!(validation_fraction >= 0.0 && validation_fraction <= 0.5))
    throw DataError("validation_fraction must lie in [0, 0.5]");
  if (!(learning_rate > 0.0)) throw DataError("learning_rate must be positive");
}

std::size_t training_sample_count(std::size_t samples, double validation_fraction) {
  return static_cast<std::size_t>(std::floor(static_cast<double>(samples) * (1.0 - validation_fraction)));
}

std::vector<double> predict(const nn::LstmParams& params, const Tensor3& inputs) {
  constexpr std::size_t kChunk = 256;
  std::vector<double> out;
  out.reserve(inputs.samples());
  for (std::size_t begin = 0; begin < inputs.samples(); begin += kChunk) {
    const auto end = std::min(inputs.samples(), begin + kChunk);
    const auto pass = nn::forward(inputs.slice(begin, end), params, nn::Mode::Eval);
    out.insert(out.end(), pass.predictions.begin(), pass.predictions.end());
  }
  return out;
}

TrainResult train(nn::LstmParams params, const data::SupervisedTensors& tensors, const TrainConfig& config,
                  const EpochCallback& on_epoch) {
  config.validate();
  const auto& cfg = params.config();
  const std::size_t n = tensors.samples();
  if (tensors.inputs.steps() != cfg.lookback || tensors.inputs.features() != cfg.input_dim)
    throw DataError("training tensors do not match the model's lookback/input width");
  if (n <= config.batch_size)
    throw DataError("need more samples (" + std::to_string(n) + ") than batch_size (" +
                    std::to_string(config.batch_size) + ")");
  const std::size_t n_train = training_sample_count(n, config.validation_fraction);
  if (n_train == 0) throw DataError("validation split leaves no training samples");

  const auto train_part = tensors.slice(0, n_train);
  const auto val_part = tensors.slice(n_train, n);

  nn::AdamState adam(cfg, nn::AdamHyper{.learning_rate = config.learning_rate});
  Rng dropout_rng(derive_seed(config.seed, "dropout"));
  Rng shuffle_rng(derive_seed(config.seed, "shuffle"));
  std::vector<std::size_t> order(n_train);
  std::iota(order.begin(), order.end(), 0);

  TrainResult result{std::move(params), {}};
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    if (config.shuffle) {
      for (std::size_t i = n_train - 1; i > 0; --i) std::swap(order[i], order[shuffle_rng.index(i + 1)]);
    }
    double weighted = 0.0;
    std::size_t batch_no = 0;
    for (std::size_t begin = 0; begin < n_train; begin += config.batch_size, ++batch_no) {
      const std::size_t end = std::min(n_train, begin + config.batch_size);
      const std::span<const std::size_t> idx(order.data() + begin, end - begin);
      const Tensor3 inputs = train_part.inputs.gather(idx);
      std::vector<double> targets;
      targets.reserve(idx.size());
      for (auto i : idx) targets.push_back(train_part.targets[i]);

      const auto pass = nn::forward(inputs, result.params, nn::Mode::Train, &dropout_rng);
      const double loss = nn::mse_loss(pass.predictions, targets);
      if (!std::isfinite(loss))
        throw Error("non-finite training loss at epoch " + std::to_string(epoch + 1) + ", batch " +
                    std::to_string(batch_no + 1));
      weighted += loss * static_cast<double>(idx.size());
      const auto grads = nn::backward(pass.cache, targets, result.params);
      nn::adam_step(result.params, grads, adam);
    }
    const double train_loss = weighted / static_cast<double>(n_train);
    const double val_loss = val_part.samples() == 0
                                ? std::numeric_limits<double>::quiet_NaN()
                                : nn::mse_loss(predict(result.params, val_part.inputs), val_part.targets);
    result.history.train_loss.push_back(train_loss);
    result.history.val_loss.push_back(val_loss);
    if (on_epoch) on_epoch(epoch, train_loss, val_loss);
  }
  return result;
}

std::string history_to_csv(const TrainHistory& history) {
  std::string out = "epoch,train_loss,val_loss\n";
  for (std::size_t e = 0; e < history.train_loss.size(); ++e) {
    out += std::to_string(e + 1) + "," + format_real(history.train_loss[e]) + ",";
    out += std::isnan(history.val_loss[e]) ? std::string("nan") : format_real(history.val_loss[e]);
    out += "\n";
  }
  return out;
}

}  // namespace oilcast::train
