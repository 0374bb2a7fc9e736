#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace oilcast {

/// Dense [samples x steps x features] array, row-major.
class Tensor3 {
 public:
  Tensor3() = default;
  Tensor3(std::size_t samples, std::size_t steps, std::size_t features, double fill = 0.0)
      : samples_(samples), steps_(steps), features_(features), values_(samples * steps * features, fill) {}

  std::size_t samples() const { return samples_; }
  std::size_t steps() const { return steps_; }
  std::size_t features() const { return features_; }

  double& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return values_[(i * steps_ + j) * features_ + k];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return values_[(i * steps_ + j) * features_ + k];
  }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  /// Contiguous sample range [begin, end).
  Tensor3 slice(std::size_t begin, std::size_t end) const {
    Tensor3 out(end - begin, steps_, features_);
    const std::size_t stride = steps_ * features_;
    std::copy(values_.begin() + static_cast<std::ptrdiff_t>(begin * stride),
              values_.begin() + static_cast<std::ptrdiff_t>(end * stride), out.values_.begin());
    return out;
  }

  /// Samples in the given order.
  Tensor3 gather(std::span<const std::size_t> indices) const {
    Tensor3 out(indices.size(), steps_, features_);
    const std::size_t stride = steps_ * features_;
    for (std::size_t n = 0; n < indices.size(); ++n) {
      const auto src = values_.begin() + static_cast<std::ptrdiff_t>(indices[n] * stride);
      std::copy(src, src + static_cast<std::ptrdiff_t>(stride),
                out.values_.begin() + static_cast<std::ptrdiff_t>(n * stride));
    }
    return out;
  }

  friend bool operator==(const Tensor3&, const Tensor3&) = default;

 private:
  std::size_t samples_ = 0;
  std::size_t steps_ = 0;
  std::size_t features_ = 0;
  std::vector<double> values_;
};

}  // namespace oilcast
