#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "oilcast/nn/lstm.hpp"

namespace oilcast::nn {

struct GradientCheckReport {
  double max_relative_error = 0.0;
  std::string worst_block;
  std::size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  std::size_t parameters_checked = 0;
};

/// |a - n| / max(|a|, |n|, 1e-6). The floor keeps near-zero gradients from
/// turning round-off into large ratios.
double relative_error(double analytic, double numeric);

/// Compares backward() against central differences on every parameter of a
/// randomly initialised network, with a random batch and targets drawn from
/// `seed`. With a positive dropout rate one mask is sampled and held fixed.
GradientCheckReport gradient_check(const LstmConfig& config, std::uint64_t seed, double epsilon = 1e-5,
                                   std::size_t batch = 2);

}  // namespace oilcast::nn
