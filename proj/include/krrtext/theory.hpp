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

#ifndef KRRTEXT_THEORY_HPP_
#define KRRTEXT_THEORY_HPP_

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace krrtext {

// Prior distribution over the k alphabet characters. Entries must be
// nonnegative and sum to 1 within 1e-9.
class CharPrior {
 public:
  explicit CharPrior(std::vector<double> probabilities);

  static CharPrior uniform(int k);

  int k() const { return static_cast<int>(probabilities_.size()); }
  double operator[](int i) const {
    return probabilities_[static_cast<std::size_t>(i)];
  }
  const std::vector<double>& probabilities() const { return probabilities_; }

 private:
  std::vector<double> probabilities_;
};

// Posterior probability that the original character was candidate_index
// given that observed_index came out of the channel:
//
//   (gamma + ((1-gamma)(k-1) - gamma) * delta_ij) * prior[i]
//   ---------------------------------------------------------
//    gamma + ((1-gamma)(k-1) - gamma) * prior[j]
//
// Indices are 0-based. With a uniform prior this collapses to 1 - gamma on
// the diagonal and gamma/(k-1) off it.
double posterior_char(const CharPrior& prior, int observed_index,
                      int candidate_index, double gamma);

// Probability that a word whose characters are uniform over the alphabet
// survives the channel unchanged: (1 - gamma)^length.
double random_word_exact_prob(int word_length, double gamma);

// Log-likelihood ratio between "every character kept" and "every character
// replaced": length * (ln(1-gamma) - ln(gamma)). Crosses zero at
// gamma = 1/2, i.e. at epsilon = ln(k-1).
double log_likelihood_ratio(int word_length, double gamma);

// Probability that at most ell of the word's characters were replaced:
//   sum_{m=0..ell} C(length, m) (1-gamma)^(length-m) gamma^m.
double cum_hamming_prob(int ell, int word_length, double gamma);

// Chance-level probability of reconstructing a corpus of random words to
// within relative Hamming fraction alpha:
//   (1/|T|) * sum_i q_{floor(alpha*i), i, gamma} * T(i)
// over the word-length histogram T(i).
double baseline_T_alpha(const std::map<std::size_t, std::size_t>& histogram,
                        double alpha, double gamma);

// epsilon grid "start:stop:step", inclusive of stop up to a half-step slack.
// The default grid 1.0:10.0:0.5 matches the sweep presets.
struct EpsilonGrid {
  double start = 1.0;
  double stop = 10.0;
  double step = 0.5;

  static EpsilonGrid parse(const std::string& spec);
  std::vector<double> values() const;
};

struct BaselineCurve {
  struct Row {
    double epsilon;
    double gamma;
    double probability;
  };
  double alpha = 0.0;
  std::vector<Row> rows;
};

BaselineCurve baseline_curve(
    const std::map<std::size_t, std::size_t>& histogram, double alpha,
    const EpsilonGrid& grid, int k);

// Exhaustive joint distribution of (input word, output word) for tiny
// alphabets, built directly from the mechanism's branch probabilities.
// Serves as the enumeration oracle for the closed forms above; every query
// is a plain sum over the table.
class BruteForceChannel {
 public:
  // Requires k <= 5 and word_length <= 3 so k^(2*length) stays enumerable.
  BruteForceChannel(int k, int word_length, double gamma);

  int k() const { return k_; }
  int word_length() const { return length_; }

  // Pr[output | input] with words encoded as base-k digit vectors.
  double transition(const std::vector<int>& input,
                    const std::vector<int>& output) const;

  // Pr[input char at position = candidate | output char at position =
  // observed] with independent per-character prior. Computed by summing the
  // joint over all words, never via the Bayes closed form.
  double posterior_char(const CharPrior& prior, int position,
                        int observed_index, int candidate_index) const;

  // Pr[d(input, output) <= ell] for uniformly random input words.
  double prob_within_hamming(int ell) const;

  // Pr[output == input] for uniformly random input words.
  double prob_exact() const { return prob_within_hamming(0); }

 private:
  std::size_t word_count() const;
  std::vector<int> decode(std::size_t code) const;

  int k_;
  int length_;
  double gamma_;
};

}  // namespace krrtext

#endif  // KRRTEXT_THEORY_HPP_
