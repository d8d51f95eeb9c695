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

#pragma once

#include <cstdint>
#include <vector>

namespace chfs {

/// Pr[X >= k] for X ~ Binomial(n, p), summed in log space.
double binomial_tail_ge(std::uint64_t n, double p, std::uint64_t k);
/// P[at least k successes] for independent Bernoulli(p_i) trials.
double poisson_binomial_tail_ge(const std::vector<double>& p, std::uint64_t k);

/// Welford accumulator for sample mean and standard error.
class RunningStats {
 public:
  void add(double x);
  void merge(const RunningStats& other);
  std::uint64_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const;  // unbiased
  double standard_error() const;
  double min() const { return min_; }
  double max() const { return max_; }

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double min_ = 0.0;
  double max_ = 0.0;
};

/// Standard error of a frequency estimate from n Bernoulli(p) trials.
double bernoulli_se(double p, std::uint64_t n);

/// Least-squares slope and intercept of y against x.
struct LinearFit {
  double slope;
  double intercept;
};
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace chfs
