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

#include "krrtext/mechanism.hpp"

#include <algorithm>
#include <cmath>

namespace krrtext {

double gamma_from_epsilon(double epsilon, int k) {
  if (k < 2) {
    throw ParameterError("alphabet size k must be at least 2, got " +
                         std::to_string(k));
  }
  if (epsilon < 0 || std::isnan(epsilon)) {
    throw ParameterError("epsilon must be nonnegative");
  }
  const double km1 = static_cast<double>(k - 1);
  if (epsilon > 40.0) {
    // e^epsilon dwarfs k - 1 here; the rearranged form keeps full relative
    // precision instead of dividing two huge numbers.
    const double w = km1 * std::exp(-epsilon);
    return w / (w + 1.0);
  }
  return km1 / (km1 + std::exp(epsilon));
}

PerturbedDocument perturb_document(const AnnotatedDocument& doc,
                                   const PerturbationParams& params,
                                   const CharAlphabet& alphabet,
                                   const PerturbOptions& options) {
  if (params.k() != alphabet.k()) {
    throw ParameterError("params.k does not match the alphabet size");
  }
  PerturbedDocument result;
  result.source_id = doc.id;
  result.epsilon = params.epsilon();
  result.gamma = params.gamma();
  result.k = params.k();
  result.seed = params.seed();
  if (options.keep_flip_log) result.flip_log.emplace();

  auto rng = Xoshiro256StarStar::for_stream(params.seed(), doc.id);
  result.perturbed_tokens.reserve(doc.tokens.size());
  for (const Token& token : doc.tokens) {
    result.perturbed_tokens.push_back(
        perturb_word(token, params, alphabet, rng, options,
                     options.keep_flip_log ? &*result.flip_log : nullptr));
  }
  result.perturbed_text =
      replace_token_spans(doc.raw_text, result.perturbed_tokens);
  result.mechanism_applied = true;
  return result;
}

DpRatioReport verify_dp_ratio(const PerturbationParams& params) {
  const int k = params.k();
  const double gamma = params.gamma();
  const double keep = 1.0 - gamma;
  const double move = gamma / static_cast<double>(k - 1);

  // Full enumeration over input pairs and outputs; Pr[M(x) = y] only
  // depends on whether y == x, but the verification does not assume that.
  double max_ratio = 0.0;
  double off_support = 0.0;
  for (int x = 0; x < k; ++x) {
    for (int xp = 0; xp < k; ++xp) {
      if (x == xp) continue;  // DP quantifies over distinct inputs
      for (int y = 0; y < k; ++y) {
        const double p_num = (y == x) ? keep : move;
        const double p_den = (y == xp) ? keep : move;
        const double ratio = p_num / p_den;
        max_ratio = std::max(max_ratio, ratio);
        if (y != x && y != xp) off_support = ratio;
      }
    }
  }

  DpRatioReport report;
  report.epsilon = params.epsilon();
  report.k = k;
  report.max_ratio = max_ratio;
  report.expected_ratio = std::exp(params.epsilon());
  report.relative_error =
      std::abs(max_ratio - report.expected_ratio) / report.expected_ratio;
  report.off_support_ratio = off_support;
  return report;
}

}  // namespace krrtext
