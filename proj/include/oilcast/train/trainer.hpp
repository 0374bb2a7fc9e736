#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "oilcast/data/supervised.hpp"
#include "oilcast/nn/lstm.hpp"

namespace oilcast::train {

struct TrainConfig {
  double learning_rate = 0.0005;
  std::size_t epochs = 50;
  std::size_t batch_size = 25;
  double validation_fraction = 0.10;
  std::uint64_t seed = 0;
  bool shuffle = false;  // chronological batches by default

  /// Throws DataError unless batch_size >= 1 and validation_fraction in [0, 0.5].
  void validate() const;
};

struct TrainHistory {
  std::vector<double> train_loss;  // sample-weighted mean batch loss per epoch
  std::vector<double> val_loss;    // eval-mode loss on the validation tail; NaN when there is none
};

struct TrainResult {
  nn::LstmParams params;
  TrainHistory history;
};

/// Called after every epoch with (epoch index, train loss, validation loss).
using EpochCallback = std::function<void(std::size_t, double, double)>;

/// Number of leading samples used for gradient steps; the rest form the validation tail.
std::size_t training_sample_count(std::size_t samples, double validation_fraction);

/// Mini-batch Adam on mse_loss. The last `validation_fraction` of samples (in
/// chronological order) are held out and only ever evaluated. Deterministic for a
/// given seed. Throws DataError when N <= batch_size or shapes disagree, and Error
/// with epoch/batch coordinates if the training loss becomes NaN.
TrainResult train(nn::LstmParams params, const data::SupervisedTensors& tensors, const TrainConfig& config,
                  const EpochCallback& on_epoch = {});

/// Eval-mode forward over `inputs`, chunked; deterministic.
std::vector<double> predict(const nn::LstmParams& params, const Tensor3& inputs);

/// `epoch,train_loss,val_loss` CSV (1-based epochs).
std::string history_to_csv(const TrainHistory& history);

}  // namespace oilcast::train
