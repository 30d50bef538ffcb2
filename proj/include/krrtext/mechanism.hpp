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

#ifndef KRRTEXT_MECHANISM_HPP_
#define KRRTEXT_MECHANISM_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "krrtext/alphabet.hpp"
#include "krrtext/errors.hpp"
#include "krrtext/rng.hpp"
#include "krrtext/text.hpp"

namespace krrtext {

// Flip probability of k-ary randomized response:
//   gamma = (k - 1) / (k - 1 + e^epsilon).
// A character is kept with probability 1 - gamma and otherwise replaced
// uniformly among the other k - 1 characters, which makes one character
// epsilon-DP and a word of length L (L * epsilon)-DP by composition.
double gamma_from_epsilon(double epsilon, int k);

// epsilon, the derived gamma, the alphabet size and the RNG seed for one
// perturbation run. gamma is always recomputed from (epsilon, k); the pair
// cannot drift apart.
class PerturbationParams {
 public:
  PerturbationParams(double epsilon, int k, std::uint64_t seed)
      : epsilon_(epsilon), k_(k), seed_(seed),
        gamma_(gamma_from_epsilon(epsilon, k)) {}

  double epsilon() const { return epsilon_; }
  double gamma() const { return gamma_; }
  int k() const { return k_; }
  std::uint64_t seed() const { return seed_; }

 private:
  double epsilon_;
  int k_;
  std::uint64_t seed_;
  double gamma_;
};

struct PerturbOptions {
  // Strict mode refuses tokens containing non-alphabet characters; lenient
  // mode passes them through unchanged (consuming no randomness).
  bool strict = false;
  // Diagnostic only: records one boolean per character (token order) saying
  // whether the replacement branch fired. Never serialized.
  bool keep_flip_log = false;
};

struct PerturbedDocument {
  std::string source_id;
  std::vector<Token> perturbed_tokens;
  double epsilon = 0.0;
  double gamma = 0.0;
  int k = 0;
  std::uint64_t seed = 0;
  // Source text with each token span overwritten; whitespace layout intact.
  std::string perturbed_text;
  // Set only by perturb_document / the perturbed-JSONL loader. Restorers
  // refuse documents without it so original text can never reach a remote
  // endpoint through this pipeline.
  bool mechanism_applied = false;
  std::optional<std::vector<bool>> flip_log;
};

// One character of k-RR: keep with probability 1 - gamma, else draw
// uniformly from the k - 1 other characters. The uniform draw picks an
// index in [0, k-2] and skips past the input's own index, so the
// replacement branch can never return the input. params must have been
// built for this alphabet (params.k() == alphabet.k()); perturb_document
// checks this once per document.
template <RandomStream R>
char perturb_char(char c, const PerturbationParams& params,
                  const CharAlphabet& alphabet, R& rng,
                  bool* flipped = nullptr) {
  int own = alphabet.index_of(c);
  bool replace = rng.bernoulli(params.gamma());
  if (flipped != nullptr) *flipped = replace;
  if (!replace) return c;
  auto draw = static_cast<int>(
      rng.uniform_below(static_cast<std::uint64_t>(alphabet.k() - 1)));
  return alphabet.char_at(draw < own ? draw : draw + 1);
}

// Perturbs every alphabet character of a token independently. Length is
// always preserved. Non-alphabet characters follow PerturbOptions.
template <RandomStream R>
Token perturb_word(const Token& word, const PerturbationParams& params,
                   const CharAlphabet& alphabet, R& rng,
                   const PerturbOptions& options = {},
                   std::vector<bool>* flip_log = nullptr) {
  Token result = word;
  for (char& c : result.text) {
    if (!alphabet.contains(c)) {
      if (options.strict) {
        throw ValidationError(
            "token contains a character outside the alphabet: \"" + word.text +
            "\"");
      }
      if (flip_log != nullptr) flip_log->push_back(false);
      continue;
    }
    bool flipped = false;
    c = perturb_char(c, params, alphabet, rng, &flipped);
    if (flip_log != nullptr) flip_log->push_back(flipped);
  }
  return result;
}

// Applies k-RR to every token of the document. Deterministic for a fixed
// (seed, document id): the document draws from its own substream
// Xoshiro256StarStar::for_stream(seed, id), so corpora can be processed in
// any order (or in parallel) without changing results.
PerturbedDocument perturb_document(const AnnotatedDocument& doc,
                                   const PerturbationParams& params,
                                   const CharAlphabet& alphabet =
                                       CharAlphabet::printable_ascii(),
                                   const PerturbOptions& options = {});

// Exhaustive check of the privacy bound over the single-character channel:
// max over inputs x, x' and outputs y of Pr[M(x)=y] / Pr[M(x')=y].
// Appendix-style case analysis gives (k-1)(1-gamma)/gamma = e^epsilon.
struct DpRatioReport {
  double epsilon = 0.0;
  int k = 0;
  double max_ratio = 0.0;        // maximum over all (x, x', y) triples
  double expected_ratio = 0.0;   // e^epsilon
  double relative_error = 0.0;   // |max_ratio - e^eps| / e^eps
  double off_support_ratio = 0.0;  // ratio when y differs from both inputs
};

DpRatioReport verify_dp_ratio(const PerturbationParams& params);

}  // namespace krrtext

#endif  // KRRTEXT_MECHANISM_HPP_
