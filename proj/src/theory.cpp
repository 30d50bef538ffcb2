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

#include "krrtext/theory.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "krrtext/errors.hpp"
#include "krrtext/mechanism.hpp"

namespace krrtext {

namespace {

void check_gamma_open_interval(double gamma) {
  if (!(gamma > 0.0) || !(gamma < 1.0)) {
    throw ParameterError("gamma must lie strictly inside (0, 1), got " +
                         std::to_string(gamma));
  }
}

// C(n, m), exact 64-bit integer arithmetic; valid for n <= 50 (long tokens
// such as URLs go through the log-space path instead).
double binomial_exact(int n, int m) {
  if (m < 0 || m > n) return 0.0;
  unsigned long long value = 1;
  int r = std::min(m, n - m);
  for (int i = 1; i <= r; ++i) {
    value = value * static_cast<unsigned long long>(n - r + i) /
            static_cast<unsigned long long>(i);
  }
  return static_cast<double>(value);
}

double log_binomial(int n, int m) {
  return std::lgamma(n + 1.0) - std::lgamma(m + 1.0) -
         std::lgamma(n - m + 1.0);
}

}  // namespace

CharPrior::CharPrior(std::vector<double> probabilities)
    : probabilities_(std::move(probabilities)) {
  if (probabilities_.size() < 2) {
    throw ParameterError("prior needs at least 2 entries");
  }
  double sum = 0.0;
  for (double p : probabilities_) {
    if (p < 0.0 || std::isnan(p)) {
      throw ParameterError("prior entries must be nonnegative");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ParameterError("prior must sum to 1, got " + std::to_string(sum));
  }
}

CharPrior CharPrior::uniform(int k) {
  if (k < 2) throw ParameterError("uniform prior needs k >= 2");
  return CharPrior(std::vector<double>(static_cast<std::size_t>(k), 1.0 / k));
}

double posterior_char(const CharPrior& prior, int observed_index,
                      int candidate_index, double gamma) {
  check_gamma_open_interval(gamma);
  const int k = prior.k();
  if (observed_index < 0 || observed_index >= k || candidate_index < 0 ||
      candidate_index >= k) {
    throw ParameterError("character index out of range for the prior");
  }
  // coefficient ((1-gamma)(k-1) - gamma) vanishes at gamma = (k-1)/k, where
  // the channel output carries no information and the posterior equals the
  // prior.
  const double coeff = (1.0 - gamma) * (k - 1) - gamma;
  const double numerator =
      (gamma + (candidate_index == observed_index ? coeff : 0.0)) *
      prior[candidate_index];
  const double denominator = gamma + coeff * prior[observed_index];
  return numerator / denominator;
}

double random_word_exact_prob(int word_length, double gamma) {
  if (word_length < 1) throw ParameterError("word length must be positive");
  return std::pow(1.0 - gamma, word_length);
}

double log_likelihood_ratio(int word_length, double gamma) {
  if (word_length < 1) throw ParameterError("word length must be positive");
  check_gamma_open_interval(gamma);
  return word_length * (std::log1p(-gamma) - std::log(gamma));
}

double cum_hamming_prob(int ell, int word_length, double gamma) {
  if (word_length < 1) throw ParameterError("word length must be positive");
  if (ell < 0 || ell > word_length) {
    throw ParameterError("ell must lie in [0, word_length]");
  }
  if (gamma < 0.0 || gamma > 1.0 || std::isnan(gamma)) {
    throw ParameterError("gamma must lie in [0, 1]");
  }
  if (gamma == 0.0) return 1.0;  // nothing ever flips
  if (gamma == 1.0) return ell == word_length ? 1.0 : 0.0;  // everything flips
  // Term m = 0 is computed with pow so that ell = 0 agrees bit-for-bit with
  // random_word_exact_prob.
  double sum = std::pow(1.0 - gamma, word_length);
  if (ell == 0) return sum;
  if (word_length <= 50) {
    for (int m = 1; m <= ell; ++m) {
      sum += binomial_exact(word_length, m) *
             std::pow(1.0 - gamma, word_length - m) * std::pow(gamma, m);
    }
  } else {
    const double log_keep = std::log1p(-gamma);
    const double log_flip = std::log(gamma);
    for (int m = 1; m <= ell; ++m) {
      sum += std::exp(log_binomial(word_length, m) +
                      (word_length - m) * log_keep + m * log_flip);
    }
  }
  return std::min(sum, 1.0);
}

double baseline_T_alpha(const std::map<std::size_t, std::size_t>& histogram,
                        double alpha, double gamma) {
  if (histogram.empty()) {
    throw ParameterError("word-length histogram is empty");
  }
  if (alpha < 0.0 || alpha > 1.0 || std::isnan(alpha)) {
    throw ParameterError("alpha must lie in [0, 1]");
  }
  double total = 0.0;
  double weighted = 0.0;
  for (const auto& [length, count] : histogram) {
    if (length == 0 || count == 0) continue;
    const int len = static_cast<int>(length);
    const int ell = static_cast<int>(std::floor(alpha * len));
    weighted += cum_hamming_prob(ell, len, gamma) * static_cast<double>(count);
    total += static_cast<double>(count);
  }
  if (total == 0.0) {
    throw ParameterError("word-length histogram has no usable entries");
  }
  return weighted / total;
}

EpsilonGrid EpsilonGrid::parse(const std::string& spec) {
  EpsilonGrid grid;
  char sep1 = 0;
  char sep2 = 0;
  std::istringstream in(spec);
  if (!(in >> grid.start >> sep1 >> grid.stop >> sep2 >> grid.step) ||
      sep1 != ':' || sep2 != ':' || !(in >> std::ws).eof()) {
    throw ParameterError("epsilon range must look like start:stop:step, got \"" +
                         spec + "\"");
  }
  if (grid.step <= 0 || grid.stop < grid.start) {
    throw ParameterError("epsilon range needs stop >= start and step > 0");
  }
  return grid;
}

std::vector<double> EpsilonGrid::values() const {
  std::vector<double> values;
  for (int i = 0;; ++i) {
    double value = start + step * i;
    if (value > stop + step * 1e-9) break;
    values.push_back(value);
  }
  return values;
}

BaselineCurve baseline_curve(
    const std::map<std::size_t, std::size_t>& histogram, double alpha,
    const EpsilonGrid& grid, int k) {
  BaselineCurve curve;
  curve.alpha = alpha;
  for (double epsilon : grid.values()) {
    double gamma = gamma_from_epsilon(epsilon, k);
    curve.rows.push_back(
        {epsilon, gamma, baseline_T_alpha(histogram, alpha, gamma)});
  }
  return curve;
}

BruteForceChannel::BruteForceChannel(int k, int word_length, double gamma)
    : k_(k), length_(word_length), gamma_(gamma) {
  if (k < 2 || k > 5) throw ParameterError("brute-force channel needs 2 <= k <= 5");
  if (word_length < 1 || word_length > 3) {
    throw ParameterError("brute-force channel needs word length in [1, 3]");
  }
  check_gamma_open_interval(gamma);
}

std::size_t BruteForceChannel::word_count() const {
  std::size_t count = 1;
  for (int i = 0; i < length_; ++i) count *= static_cast<std::size_t>(k_);
  return count;
}

std::vector<int> BruteForceChannel::decode(std::size_t code) const {
  std::vector<int> word(static_cast<std::size_t>(length_));
  for (int pos = length_ - 1; pos >= 0; --pos) {
    word[static_cast<std::size_t>(pos)] =
        static_cast<int>(code % static_cast<std::size_t>(k_));
    code /= static_cast<std::size_t>(k_);
  }
  return word;
}

double BruteForceChannel::transition(const std::vector<int>& input,
                                     const std::vector<int>& output) const {
  if (input.size() != static_cast<std::size_t>(length_) ||
      output.size() != input.size()) {
    throw ParameterError("word length mismatch in channel query");
  }
  // Per character: kept with 1 - gamma, or replaced by one specific other
  // character with gamma * 1/(k-1). The replacement branch never reproduces
  // the input character.
  double probability = 1.0;
  for (std::size_t pos = 0; pos < input.size(); ++pos) {
    probability *= (input[pos] == output[pos])
                       ? (1.0 - gamma_)
                       : gamma_ / static_cast<double>(k_ - 1);
  }
  return probability;
}

double BruteForceChannel::posterior_char(const CharPrior& prior, int position,
                                         int observed_index,
                                         int candidate_index) const {
  if (prior.k() != k_) {
    throw ParameterError("prior size does not match channel alphabet");
  }
  if (position < 0 || position >= length_) {
    throw ParameterError("position out of range");
  }
  const std::size_t words = word_count();
  double joint = 0.0;     // Pr[input char = candidate AND output char = observed]
  double marginal = 0.0;  // Pr[output char = observed]
  for (std::size_t in_code = 0; in_code < words; ++in_code) {
    const std::vector<int> input = decode(in_code);
    double input_prob = 1.0;
    for (int c : input) input_prob *= prior[c];
    if (input_prob == 0.0) continue;
    for (std::size_t out_code = 0; out_code < words; ++out_code) {
      const std::vector<int> output = decode(out_code);
      if (output[static_cast<std::size_t>(position)] != observed_index) {
        continue;
      }
      const double mass = input_prob * transition(input, output);
      marginal += mass;
      if (input[static_cast<std::size_t>(position)] == candidate_index) {
        joint += mass;
      }
    }
  }
  if (marginal == 0.0) {
    throw ParameterError("observed character has zero probability");
  }
  return joint / marginal;
}

double BruteForceChannel::prob_within_hamming(int ell) const {
  if (ell < 0 || ell > length_) {
    throw ParameterError("ell must lie in [0, word_length]");
  }
  const std::size_t words = word_count();
  const double uniform_input = 1.0 / static_cast<double>(words);
  double probability = 0.0;
  for (std::size_t in_code = 0; in_code < words; ++in_code) {
    const std::vector<int> input = decode(in_code);
    for (std::size_t out_code = 0; out_code < words; ++out_code) {
      const std::vector<int> output = decode(out_code);
      int distance = 0;
      for (std::size_t pos = 0; pos < input.size(); ++pos) {
        if (input[pos] != output[pos]) ++distance;
      }
      if (distance <= ell) {
        probability += uniform_input * transition(input, output);
      }
    }
  }
  return probability;
}

}  // namespace krrtext
