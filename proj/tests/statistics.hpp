// Copyright 2026 The krrtext Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Test-only statistics: chi-squared goodness of fit with a p-value from the
// regularized incomplete gamma function. Independent of the library under
// test.

#ifndef KRRTEXT_TESTS_STATISTICS_HPP_
#define KRRTEXT_TESTS_STATISTICS_HPP_

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace krrtext::test {

// Regularized lower incomplete gamma P(a, x) by series expansion (x < a+1)
// or continued fraction (otherwise).
inline double gamma_p(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw std::invalid_argument("gamma_p domain");
  if (x == 0.0) return 0.0;
  const double log_gamma_a = std::lgamma(a);
  if (x < a + 1.0) {
    // series: P(a,x) = e^{-x} x^a / Gamma(a) * sum x^n / (a)_{n+1}
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int n = 0; n < 500; ++n) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - log_gamma_a);
  }
  // Lentz continued fraction for Q(a,x)
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-15) break;
  }
  const double q = std::exp(-x + a * std::log(x) - log_gamma_a) * h;
  return 1.0 - q;
}

// Survival function of the chi-squared distribution.
inline double chi_squared_sf(double statistic, double degrees_of_freedom) {
  return 1.0 - gamma_p(degrees_of_freedom / 2.0, statistic / 2.0);
}

struct ChiSquaredResult {
  double statistic = 0.0;
  double degrees_of_freedom = 0.0;
  double p_value = 1.0;
};

// Pearson goodness of fit of observed counts against expected counts.
inline ChiSquaredResult chi_squared_test(const std::vector<double>& observed,
                                         const std::vector<double>& expected) {
  if (observed.size() != expected.size() || observed.empty()) {
    throw std::invalid_argument("chi_squared_test size mismatch");
  }
  ChiSquaredResult result;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] <= 0.0) {
      throw std::invalid_argument("expected count must be positive");
    }
    const double diff = observed[i] - expected[i];
    result.statistic += diff * diff / expected[i];
  }
  result.degrees_of_freedom = static_cast<double>(observed.size() - 1);
  result.p_value = chi_squared_sf(result.statistic, result.degrees_of_freedom);
  return result;
}

}  // namespace krrtext::test

#endif  // KRRTEXT_TESTS_STATISTICS_HPP_
