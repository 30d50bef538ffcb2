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

// Monte Carlo agreement between the mechanism and the closed forms. All
// seeds are fixed, so these checks are deterministic replays rather than
// flaky statistical gambles.

#include <cmath>
#include <string>
#include <vector>

#include <doctest.h>

#include "krrtext/mechanism.hpp"
#include "krrtext/theory.hpp"
#include "statistics.hpp"

using namespace krrtext;
using krrtext::test::chi_squared_test;

namespace {

CharAlphabet small_alphabet() { return CharAlphabet::from_characters("abc"); }

}  // namespace

TEST_CASE("chi-squared helper sanity") {
  // known quantile neighborhood: P(chi2_1 > 3.841) ~ 0.05
  CHECK(krrtext::test::chi_squared_sf(3.841, 1.0) ==
        doctest::Approx(0.05).epsilon(0.01));
  CHECK(krrtext::test::chi_squared_sf(0.0, 5.0) == doctest::Approx(1.0));
  // uniform gamma_p spot values
  CHECK(krrtext::test::gamma_p(1.0, 1.0) ==
        doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("single-character output distribution fits the closed form") {
  // goodness of fit at significance 0.001, N = 10^6 per combination
  const int samples = 1'000'000;
  struct Combo {
    int k;
    double epsilon;
    std::uint64_t seed;
  };
  const std::vector<Combo> combos = {
      {3, 1.0, 101}, {3, 4.0, 102}, {3, 5.5, 103}, {3, 8.0, 104},
      {94, 1.0, 201}, {94, 4.0, 202}, {94, 5.5, 203}, {94, 8.0, 204},
  };
  for (const Combo& combo : combos) {
    CAPTURE(combo.k);
    CAPTURE(combo.epsilon);
    const CharAlphabet alphabet = combo.k == 3
                                      ? small_alphabet()
                                      : CharAlphabet::printable_ascii();
    PerturbationParams params(combo.epsilon, combo.k, combo.seed);
    Xoshiro256StarStar rng(combo.seed);
    const char input = alphabet.char_at(0);

    std::vector<double> observed(static_cast<std::size_t>(combo.k), 0.0);
    for (int i = 0; i < samples; ++i) {
      const char output = perturb_char(input, params, alphabet, rng);
      observed[static_cast<std::size_t>(alphabet.index_of(output))] += 1.0;
    }
    std::vector<double> expected(static_cast<std::size_t>(combo.k));
    for (int i = 0; i < combo.k; ++i) {
      expected[static_cast<std::size_t>(i)] =
          samples * (i == 0 ? 1.0 - params.gamma()
                            : params.gamma() / (combo.k - 1));
    }
    const auto result = chi_squared_test(observed, expected);
    CAPTURE(result.statistic);
    CHECK(result.p_value >= 0.001);
  }
}

TEST_CASE("replaced-character fraction matches gamma at epsilon 5.5") {
  // ~10^5 characters across a corpus of documents
  const std::size_t doc_count = 500;
  const std::size_t chars_per_doc = 200;
  PerturbationParams params(5.5, 94, 20260205);
  PerturbOptions options;
  options.keep_flip_log = true;

  Xoshiro256StarStar corpus_rng(7);
  const CharAlphabet& alphabet = CharAlphabet::printable_ascii();
  std::size_t replaced = 0;
  std::size_t total = 0;
  for (std::size_t d = 0; d < doc_count; ++d) {
    std::string text;
    for (std::size_t i = 0; i < chars_per_doc; ++i) {
      if (i % 8 == 7) {
        text.push_back(' ');
      } else {
        text.push_back(alphabet.char_at(
            static_cast<int>(corpus_rng.uniform_below(94))));
      }
    }
    AnnotatedDocument doc =
        AnnotatedDocument::from_text("doc-" + std::to_string(d), text);
    const PerturbedDocument perturbed =
        perturb_document(doc, params, alphabet, options);
    for (bool flip : *perturbed.flip_log) replaced += flip ? 1 : 0;
    total += perturbed.flip_log->size();
  }

  const double gamma = params.gamma();
  CHECK(gamma == doctest::Approx(0.27539893943108473).epsilon(1e-12));
  const double fraction = static_cast<double>(replaced) / total;
  const double standard_error = std::sqrt(gamma * (1.0 - gamma) / total);
  CHECK(std::abs(fraction - gamma) <= 3.0 * standard_error);
}

TEST_CASE("at epsilon 50 replacements effectively never happen") {
  PerturbationParams params(50.0, 94, 11);
  CHECK(params.gamma() < 1e-19);
  const CharAlphabet& alphabet = CharAlphabet::printable_ascii();
  Xoshiro256StarStar rng(11);
  int replaced = 0;
  for (int i = 0; i < 1'000'000; ++i) {
    if (perturb_char('a', params, alphabet, rng) != 'a') ++replaced;
  }
  CHECK(replaced == 0);
}

TEST_CASE("at epsilon 0 the unchanged fraction is 1/k") {
  PerturbationParams params(0.0, 94, 13);
  const CharAlphabet& alphabet = CharAlphabet::printable_ascii();
  Xoshiro256StarStar rng(13);
  const int samples = 1'000'000;
  int unchanged = 0;
  for (int i = 0; i < samples; ++i) {
    if (perturb_char('Q', params, alphabet, rng) == 'Q') ++unchanged;
  }
  const double p = 1.0 / 94.0;
  const double standard_error = std::sqrt(p * (1.0 - p) / samples);
  CHECK(std::abs(static_cast<double>(unchanged) / samples - p) <=
        3.0 * standard_error);
}

TEST_CASE("word survival: probability that 'ab' survives at k=3, eps=ln 2") {
  const CharAlphabet alphabet = small_alphabet();
  PerturbationParams params(std::log(2.0), 3, 17);
  Xoshiro256StarStar rng(17);
  const Token word{"ab", 0};
  const int samples = 200'000;
  int survived = 0;
  for (int i = 0; i < samples; ++i) {
    if (perturb_word(word, params, alphabet, rng).text == "ab") ++survived;
  }
  const double p = 0.25;  // (1 - gamma)^2 with gamma = 1/2
  const double standard_error = std::sqrt(p * (1.0 - p) / samples);
  CHECK(std::abs(static_cast<double>(survived) / samples - p) <=
        3.0 * standard_error);
}

TEST_CASE("identity guessing on random 6-character words tracks (1-gamma)^6") {
  const CharAlphabet& alphabet = CharAlphabet::printable_ascii();
  const int samples = 100'000;
  for (double epsilon : {1.0, 4.0, 5.5, 8.0}) {
    CAPTURE(epsilon);
    PerturbationParams params(epsilon, 94, 3000 + static_cast<int>(epsilon * 10));
    Xoshiro256StarStar rng(static_cast<std::uint64_t>(epsilon * 1000) + 5);
    int exact = 0;
    for (int i = 0; i < samples; ++i) {
      std::string word;
      for (int c = 0; c < 6; ++c) {
        word.push_back(alphabet.char_at(static_cast<int>(rng.uniform_below(94))));
      }
      // guess = the observed perturbed word itself
      if (perturb_word(Token{word, 0}, params, alphabet, rng).text == word) {
        ++exact;
      }
    }
    const double p = random_word_exact_prob(6, params.gamma());
    const double standard_error = std::sqrt(p * (1.0 - p) / samples);
    CHECK(std::abs(static_cast<double>(exact) / samples - p) <=
          3.0 * standard_error);
  }
}
