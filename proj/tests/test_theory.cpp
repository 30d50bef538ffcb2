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

#include <doctest.h>

#include "krrtext/errors.hpp"
#include "krrtext/mechanism.hpp"
#include "krrtext/rng.hpp"

using namespace krrtext;

TEST_CASE("prior validation") {
  CHECK_NOTHROW(CharPrior({0.5, 0.3, 0.2}));
  CHECK_THROWS_AS(CharPrior({0.5, 0.6}), ParameterError);
  CHECK_THROWS_AS(CharPrior({-0.1, 1.1}), ParameterError);
  CHECK(CharPrior::uniform(94)[0] == doctest::Approx(1.0 / 94).epsilon(1e-15));
}

TEST_CASE("posterior with a uniform prior collapses to the channel") {
  const int k = 94;
  const double gamma = 0.4;
  const CharPrior uniform = CharPrior::uniform(k);
  CHECK(posterior_char(uniform, 7, 7, gamma) ==
        doctest::Approx(1.0 - gamma).epsilon(1e-12));
  CHECK(posterior_char(uniform, 7, 11, gamma) ==
        doctest::Approx(gamma / (k - 1)).epsilon(1e-12));
}

TEST_CASE("posterior worked example: k=3, gamma=0.5, skewed prior") {
  const CharPrior prior({0.5, 0.3, 0.2});
  // observing character 0, asking about character 0: 0.25 / 0.375
  CHECK(posterior_char(prior, 0, 0, 0.5) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("uninformative channel returns the prior") {
  // at gamma = (k-1)/k the delta coefficient vanishes
  const CharPrior prior({0.5, 0.3, 0.2});
  const double gamma = 2.0 / 3.0;
  for (int observed = 0; observed < 3; ++observed) {
    for (int candidate = 0; candidate < 3; ++candidate) {
      CHECK(posterior_char(prior, observed, candidate, gamma) ==
            doctest::Approx(prior[candidate]).epsilon(1e-12));
    }
  }
}

TEST_CASE("posteriors sum to one over candidates, for random priors") {
  Xoshiro256StarStar rng(2026);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 2 + static_cast<int>(rng.uniform_below(9));
    std::vector<double> weights(static_cast<std::size_t>(k));
    double total = 0.0;
    for (double& w : weights) {
      w = 0.01 + rng.next_double();
      total += w;
    }
    for (double& w : weights) w /= total;
    const CharPrior prior(weights);
    const double gamma = 0.01 + 0.98 * rng.next_double();
    const int observed = static_cast<int>(rng.uniform_below(k));
    double sum = 0.0;
    for (int candidate = 0; candidate < k; ++candidate) {
      const double p = posterior_char(prior, observed, candidate, gamma);
      CHECK(p >= 0.0);
      sum += p;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("random word exact probability") {
  CHECK(random_word_exact_prob(1, 0.3) == doctest::Approx(0.7).epsilon(1e-15));
  // k=3, epsilon = ln 2 -> gamma = 1/2; two characters
  CHECK(random_word_exact_prob(2, 0.5) == doctest::Approx(0.25).epsilon(1e-15));
  // six characters at the epsilon = 5.5 operating point
  const double gamma = gamma_from_epsilon(5.5, 94);
  CHECK(random_word_exact_prob(6, gamma) ==
        doctest::Approx(0.14474174099790935).epsilon(1e-12));
  CHECK_THROWS_AS(random_word_exact_prob(0, 0.5), ParameterError);
}

TEST_CASE("log likelihood ratio and its zero crossing") {
  for (int length : {1, 3, 6, 40}) {
    CHECK(log_likelihood_ratio(length, 0.5) == 0.0);
  }
  // k = 94: gamma = 1/2 exactly at epsilon = ln 93
  const double crossing = std::log(93.0);
  CHECK(crossing == doctest::Approx(4.532599493153256).epsilon(1e-15));
  CHECK(log_likelihood_ratio(6, gamma_from_epsilon(crossing - 0.01, 94)) < 0.0);
  CHECK(log_likelihood_ratio(6, gamma_from_epsilon(crossing + 0.01, 94)) > 0.0);

  const double gamma = gamma_from_epsilon(5.5, 94);
  CHECK(log_likelihood_ratio(6, gamma) ==
        doctest::Approx(5.804403041080464).epsilon(1e-12));

  CHECK_THROWS_AS(log_likelihood_ratio(6, 0.0), ParameterError);
  CHECK_THROWS_AS(log_likelihood_ratio(6, 1.0), ParameterError);
}

TEST_CASE("log likelihood ratio agrees with the exact-probability form") {
  // llr = ln((1-gamma)^L) - L ln(gamma)
  Xoshiro256StarStar rng(31337);
  for (int trial = 0; trial < 200; ++trial) {
    const int length = 1 + static_cast<int>(rng.uniform_below(30));
    const double gamma = 0.02 + 0.96 * rng.next_double();
    const double llr = log_likelihood_ratio(length, gamma);
    const double via_exact =
        std::log(random_word_exact_prob(length, gamma)) -
        length * std::log(gamma);
    CHECK(llr == doctest::Approx(via_exact).epsilon(1e-9));
  }
}

TEST_CASE("cumulative Hamming probability") {
  CHECK(cum_hamming_prob(2, 2, 0.37) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cum_hamming_prob(0, 6, 0.37) ==
        doctest::Approx(random_word_exact_prob(6, 0.37)).epsilon(1e-15));
  CHECK(cum_hamming_prob(1, 2, 0.5) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK_THROWS_AS(cum_hamming_prob(3, 2, 0.5), ParameterError);
  CHECK_THROWS_AS(cum_hamming_prob(-1, 2, 0.5), ParameterError);

  // nondecreasing in ell
  for (double gamma : {0.1, 0.5, 0.9}) {
    double previous = -1.0;
    for (int ell = 0; ell <= 12; ++ell) {
      const double value = cum_hamming_prob(ell, 12, gamma);
      CHECK(value >= previous);
      previous = value;
    }
  }
}

TEST_CASE("long tokens use the log-space binomial path consistently") {
  // independent long-double reference for lengths past the switchover
  auto reference = [](int ell, int length, double gamma) {
    long double sum = 0.0L;
    long double coefficient = 1.0L;  // C(length, m), updated incrementally
    for (int m = 0; m <= ell; ++m) {
      if (m > 0) coefficient = coefficient * (length - m + 1) / m;
      sum += coefficient * powl(1.0L - gamma, length - m) * powl(gamma, m);
    }
    return static_cast<double>(sum);
  };
  for (double gamma : {0.1, 0.4, 0.8}) {
    for (int length : {51, 80, 120}) {
      for (int ell : {0, 3, 10, 40}) {
        CHECK(cum_hamming_prob(ell, length, gamma) ==
              doctest::Approx(reference(ell, length, gamma)).epsilon(1e-9));
      }
      CHECK(cum_hamming_prob(length, length, gamma) ==
            doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("corpus baseline") {
  const std::map<std::size_t, std::size_t> two_twos{{2, 2}};
  CHECK(baseline_T_alpha(two_twos, 0.0, 0.5) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(baseline_T_alpha(two_twos, 1.0, 0.5) == doctest::Approx(1.0).epsilon(1e-12));

  const std::map<std::size_t, std::size_t> mixed{{1, 1}, {4, 1}, {6, 2}};
  // alpha = 1 always gives 1, any histogram and gamma
  for (double gamma : {0.05, 0.5, 0.95}) {
    CHECK(baseline_T_alpha(mixed, 1.0, gamma) == doctest::Approx(1.0).epsilon(1e-12));
  }
  // monotone nondecreasing in alpha
  double previous = -1.0;
  for (double alpha = 0.0; alpha <= 1.0; alpha += 0.05) {
    const double value = baseline_T_alpha(mixed, alpha, 0.4);
    CHECK(value >= previous);
    previous = value;
  }
  // monotone nondecreasing in epsilon (gamma falls, survival rises)
  previous = -1.0;
  for (double epsilon = 0.5; epsilon <= 10.0; epsilon += 0.5) {
    const double value =
        baseline_T_alpha(mixed, 0.0, gamma_from_epsilon(epsilon, 94));
    CHECK(value >= previous);
    previous = value;
  }

  CHECK_THROWS_AS(baseline_T_alpha({}, 0.0, 0.5), ParameterError);
  CHECK_THROWS_AS(baseline_T_alpha(mixed, 1.5, 0.5), ParameterError);
}

TEST_CASE("epsilon grid parsing") {
  const EpsilonGrid grid = EpsilonGrid::parse("1.0:10.0:0.5");
  CHECK(grid.values().size() == 19);
  CHECK(grid.values().front() == doctest::Approx(1.0));
  CHECK(grid.values().back() == doctest::Approx(10.0));

  CHECK(EpsilonGrid::parse("4:4:1").values() == std::vector<double>{4.0});
  CHECK_THROWS_AS(EpsilonGrid::parse("oops"), ParameterError);
  CHECK_THROWS_AS(EpsilonGrid::parse("5:1:0.5"), ParameterError);
  CHECK_THROWS_AS(EpsilonGrid::parse("1:5:0"), ParameterError);
}

// ---- enumeration oracle ----

TEST_CASE("channel rows for a single character") {
  const BruteForceChannel channel(3, 1, 0.5);
  CHECK(channel.transition({0}, {0}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(channel.transition({0}, {1}) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(channel.transition({0}, {2}) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("oracle: exact reconstruction of two-character words") {
  // k=3, gamma=0.5: Pr[output == input] summed over the 81-entry joint
  const BruteForceChannel channel(3, 2, 0.5);
  CHECK(channel.prob_exact() == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("oracle matches the closed forms to 1e-12") {
  for (double gamma : {0.25, 0.5, 0.9}) {
    for (int length : {1, 2}) {
      const BruteForceChannel channel(3, length, gamma);
      CHECK(channel.prob_exact() ==
            doctest::Approx(random_word_exact_prob(length, gamma))
                .epsilon(1e-12));
      for (int ell = 0; ell <= length; ++ell) {
        CHECK(channel.prob_within_hamming(ell) ==
              doctest::Approx(cum_hamming_prob(ell, length, gamma))
                  .epsilon(1e-12));
      }
      const CharPrior uniform = CharPrior::uniform(3);
      for (int observed = 0; observed < 3; ++observed) {
        for (int candidate = 0; candidate < 3; ++candidate) {
          CHECK(channel.posterior_char(uniform, 0, observed, candidate) ==
                doctest::Approx(posterior_char(uniform, observed, candidate, gamma))
                    .epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("oracle posterior with a non-uniform prior matches the closed form") {
  const CharPrior prior({0.5, 0.3, 0.2});
  for (double gamma : {0.25, 0.5, 0.9}) {
    for (int length : {1, 2}) {
      const BruteForceChannel channel(3, length, gamma);
      for (int position = 0; position < length; ++position) {
        for (int observed = 0; observed < 3; ++observed) {
          for (int candidate = 0; candidate < 3; ++candidate) {
            CHECK(channel.posterior_char(prior, position, observed, candidate) ==
                  doctest::Approx(posterior_char(prior, observed, candidate, gamma))
                      .epsilon(1e-12));
          }
        }
      }
    }
  }
}

TEST_CASE("oracle bounds are enforced") {
  CHECK_THROWS_AS(BruteForceChannel(6, 1, 0.5), ParameterError);
  CHECK_THROWS_AS(BruteForceChannel(3, 4, 0.5), ParameterError);
}

TEST_CASE("baseline curve rows carry consistent gamma") {
  const std::map<std::size_t, std::size_t> histogram{{6, 10}};
  const BaselineCurve curve =
      baseline_curve(histogram, 0.0, EpsilonGrid{1.0, 10.0, 0.5}, 94);
  REQUIRE(curve.rows.size() == 19);
  for (const BaselineCurve::Row& row : curve.rows) {
    CHECK(row.gamma == doctest::Approx(gamma_from_epsilon(row.epsilon, 94))
                           .epsilon(1e-15));
    CHECK(row.probability ==
          doctest::Approx(std::pow(1.0 - row.gamma, 6)).epsilon(1e-15));
  }
}
