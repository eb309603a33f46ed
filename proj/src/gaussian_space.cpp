// SPDX-License-Identifier: MIT
#include "gaussreg/gaussian_space.hpp"

#include <cmath>

#include "gaussreg/rng.hpp"

namespace gaussreg {

GaussianSpace::GaussianSpace(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw Error(ErrorCode::kInvalidArgument, "GaussianSpace dim must be >= 1");
}

SampleBatch::SampleBatch(std::size_t dim, std::uint64_t seed, std::uint64_t stream_id,
                         std::vector<double> data)
    : dim_(dim), seed_(seed), stream_id_(stream_id), data_(std::move(data)) {
  if (dim_ == 0 || data_.empty() || data_.size() % dim_ != 0) {
    throw Error(ErrorCode::kDimensionMismatch, "SampleBatch data is not a whole number of points");
  }
}

SampleBatch SampleBatch::prefix(std::size_t count) const {
  if (count == 0 || count > size()) {
    throw Error(ErrorCode::kInvalidArgument, "prefix count out of range");
  }
  return SampleBatch(dim_, seed_, stream_id_,
                     std::vector<double>(data_.begin(), data_.begin() + count * dim_));
}

SampleBatch sample(const GaussianSpace& space, std::size_t count, std::uint64_t seed,
                   std::uint64_t stream_id) {
  if (count == 0) throw Error(ErrorCode::kInvalidArgument, "sample count must be >= 1");
  const std::size_t total = count * space.dim();
  std::vector<double> data(total);
  parallel_for(total, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) data[i] = normal_variate(seed, stream_id, i);
  });
  return SampleBatch(space.dim(), seed, stream_id, std::move(data));
}

double compensated_sum(std::span<const double> values) noexcept {
  double sum = 0.0;
  double carry = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  return sum + carry;
}

MCEstimate estimate_from_values(std::span<const double> values, const std::string& what) {
  if (values.empty()) throw Error(ErrorCode::kInvalidArgument, "no samples for " + what);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw Error(ErrorCode::kNonFiniteValue,
                  what + " is non-finite at sample " + std::to_string(i));
    }
  }
  const double n = static_cast<double>(values.size());
  const double mean = compensated_sum(values) / n;
  MCEstimate est{mean, 0.0, values.size()};
  if (values.size() > 1) {
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double d = values[i] - mean;
      sq[i] = d * d;
    }
    const double var = compensated_sum(sq) / (n - 1.0);
    est.std_error = std::sqrt(var / n);
  }
  return est;
}

MCEstimate lp_from_values(std::span<const double> values, double p) {
  if (!(p >= 1.0)) throw Error(ErrorCode::kInvalidArgument, "lp_norm requires p >= 1");
  std::vector<double> powered(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) powered[i] = std::pow(std::abs(values[i]), p);
  const MCEstimate moment = estimate_from_values(powered, "|fn|^p");
  MCEstimate out{std::pow(moment.mean, 1.0 / p), 0.0, moment.count};
  if (moment.mean > 0.0) {
    out.std_error = moment.std_error * std::pow(moment.mean, 1.0 / p - 1.0) / p;
  }
  return out;
}

}  // namespace gaussreg
