// Copyright 2026 The CHFS Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "chfs/core/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace chfs {

double binomial_tail_ge(std::uint64_t n, double p, std::uint64_t k) {
  if (k == 0) return 1.0;
  if (k > n) return 0.0;
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  const double lp = std::log(p);
  const double lq = std::log1p(-p);
  const double ln_fact_n = std::lgamma(static_cast<double>(n) + 1.0);
  double total = 0.0;
  for (std::uint64_t i = k; i <= n; ++i) {
    const double di = static_cast<double>(i);
    const double lt = ln_fact_n - std::lgamma(di + 1.0) -
                      std::lgamma(static_cast<double>(n - i) + 1.0) + di * lp +
                      static_cast<double>(n - i) * lq;
    total += std::exp(lt);
  }
  return std::min(1.0, total);
}

void RunningStats::add(double x) {
  if (n_ == 0) {
    min_ = max_ = x;
  } else {
    min_ = std::min(min_, x);
    max_ = std::max(max_, x);
  }
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

void RunningStats::merge(const RunningStats& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double delta = other.mean_ - mean_;
  const double n = na + nb;
  mean_ += delta * nb / n;
  m2_ += other.m2_ + delta * delta * na * nb / n;
  n_ += other.n_;
  min_ = std::min(min_, other.min_);
  max_ = std::max(max_, other.max_);
}

double RunningStats::variance() const {
  if (n_ < 2) return 0.0;
  return m2_ / static_cast<double>(n_ - 1);
}

double RunningStats::standard_error() const {
  if (n_ < 2) return 0.0;
  return std::sqrt(variance() / static_cast<double>(n_));
}

double poisson_binomial_tail_ge(const std::vector<double>& p, std::uint64_t k) {
  std::vector<double> dp(p.size() + 1, 0.0);
  dp[0] = 1.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] >= 0.0 && p[i] <= 1.0)) {
      throw std::invalid_argument("poisson_binomial_tail_ge: probability outside [0, 1]");
    }
    for (std::size_t j = i + 1; j > 0; --j) dp[j] = dp[j] * (1.0 - p[i]) + dp[j - 1] * p[i];
    dp[0] *= 1.0 - p[i];
  }
  double tail = 0.0;
  for (std::size_t j = static_cast<std::size_t>(k); j < dp.size(); ++j) tail += dp[j];
  return std::clamp(tail, 0.0, 1.0);
}

double bernoulli_se(double p, std::uint64_t n) {
  if (n == 0) return std::numeric_limits<double>::infinity();
  const double q = std::clamp(p, 0.0, 1.0);
  return std::sqrt(q * (1.0 - q) / static_cast<double>(n));
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("fit_line: need at least two paired points");
  }
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  if (std::abs(den) < 1e-300) {
    throw std::invalid_argument("fit_line: degenerate abscissae");
  }
  const double slope = (n * sxy - sx * sy) / den;
  return LinearFit{slope, (sy - slope * sx) / n};
}

}  // namespace chfs
