// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gaussreg/error.hpp"
#include "gaussreg/parallel.hpp"

namespace gaussreg {

/// The standard Gaussian measure on R^dim.
class GaussianSpace {
 public:
  explicit GaussianSpace(std::size_t dim);
  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }

 private:
  std::size_t dim_;
};

/// Immutable batch of i.i.d. standard normal vectors, stored row-major.
class SampleBatch {
 public:
  SampleBatch(std::size_t dim, std::uint64_t seed, std::uint64_t stream_id,
              std::vector<double> data);

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] std::size_t size() const noexcept { return data_.size() / dim_; }
  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] std::uint64_t stream_id() const noexcept { return stream_id_; }
  [[nodiscard]] std::span<const double> point(std::size_t i) const noexcept {
    return {data_.data() + i * dim_, dim_};
  }
  [[nodiscard]] const std::vector<double>& data() const noexcept { return data_; }

  /// First `count` points as a new batch (same seed/stream).
  [[nodiscard]] SampleBatch prefix(std::size_t count) const;

 private:
  std::size_t dim_;
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::vector<double> data_;
};

struct MCEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // unbiased sample sd / sqrt(count)
  std::size_t count = 0;
};

[[nodiscard]] SampleBatch sample(const GaussianSpace& space, std::size_t count,
                                 std::uint64_t seed, std::uint64_t stream_id);

/// Mean and standard error of precomputed per-sample values (compensated sum).
/// Throws NonFiniteValue on NaN/inf; `what` names the integrand.
[[nodiscard]] MCEstimate estimate_from_values(std::span<const double> values,
                                              const std::string& what = "integrand");

/// Evaluates fn on every batch point (in parallel, fixed partition).
template <class Fn>
[[nodiscard]] std::vector<double> evaluate_on(const SampleBatch& batch, Fn&& fn) {
  std::vector<double> values(batch.size());
  parallel_for(batch.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) values[i] = fn(batch.point(i));
  });
  return values;
}

template <class Fn>
[[nodiscard]] MCEstimate mc_expect(Fn&& fn, const SampleBatch& batch) {
  const auto values = evaluate_on(batch, fn);
  return estimate_from_values(values);
}

/// (E|fn|^p)^{1/p} with delta-method standard error.
[[nodiscard]] MCEstimate lp_from_values(std::span<const double> values, double p);

template <class Fn>
[[nodiscard]] MCEstimate lp_norm(Fn&& fn, double p, const SampleBatch& batch) {
  if (!(p >= 1.0)) throw Error(ErrorCode::kInvalidArgument, "lp_norm requires p >= 1");
  const auto values = evaluate_on(batch, fn);
  return lp_from_values(values, p);
}

/// Neumaier-compensated sum.
[[nodiscard]] double compensated_sum(std::span<const double> values) noexcept;

}  // namespace gaussreg
