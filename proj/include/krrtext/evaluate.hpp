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

#ifndef KRRTEXT_EVALUATE_HPP_
#define KRRTEXT_EVALUATE_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "krrtext/http.hpp"
#include "krrtext/restore.hpp"
#include "krrtext/text.hpp"
#include "krrtext/theory.hpp"

namespace krrtext {

// Mapping from original token positions to restored ones. Equal token
// counts give the positional identity; otherwise a global sequence
// alignment over tokens is used (substitution cost = normalized character
// edit distance, gap cost 1) and unmatched originals map to nullopt.
struct TokenAlignment {
  enum class Method { positional, sequence };
  Method method = Method::positional;
  std::vector<std::optional<std::size_t>> restored_index_of_original;
};

TokenAlignment align_tokens(const std::vector<Token>& original,
                            const std::vector<Token>& restored);

// Levenshtein distance between two strings (used as alignment cost).
std::size_t edit_distance(const std::string& a, const std::string& b);

struct MatchOptions {
  // Relative Hamming slack: a token counts as reconstructed if the distance
  // is at most floor(alpha * length). alpha = 0 is exact match.
  double alpha = 0.0;
  // Optional normalizations, off by default to keep the strict metric.
  bool case_fold = false;
  bool strip_punctuation = false;
};

// Whether a restored token counts as a reconstruction of the original.
// Unmatched (nullptr) and length-changed tokens never count: Hamming
// distance is undefined across lengths.
bool token_reconstructed(const Token& original, const Token* restored,
                         const MatchOptions& options = {});

// A percentage together with the counts it came from.
struct Rate {
  std::size_t numerator = 0;
  std::size_t denominator = 0;

  double percent() const {
    return denominator == 0
               ? 0.0
               : 100.0 * static_cast<double>(numerator) /
                     static_cast<double>(denominator);
  }
};

struct EntityRates {
  // Both rates share the instance denominator (entity token occurrences).
  // single_part scores each token on its own; full_entity credits a token
  // only when its entire entity was exactly reconstructed, so
  // full_entity <= single_part on any corpus.
  std::map<std::string, Rate> single_part;
  std::map<std::string, Rate> full_entity;
  // Strict record-level metric: all street+city+state entities of a document
  // reconstructed at once. Documents lacking any of the three components are
  // excluded from the denominator.
  std::optional<Rate> complete_address;
};

struct EvaluationReport {
  double epsilon = 0.0;
  double gamma = 0.0;
  double alpha = 0.0;
  // Chance-level reconstruction probability for the corpus histogram, as a
  // percentage (the closed-form floor any restorer is compared against).
  double baseline_prob = 0.0;
  Rate sensitive;
  Rate non_sensitive;
  std::map<std::string, Rate> per_category;
  EntityRates entities;
  // Mean cosine similarity (0-100) between each original document and its
  // restored counterpart; absent when no embedder was supplied.
  std::optional<double> semantic_similarity;
  // privacy_preserved = 100 - sensitive reconstruction rate, always.
  double privacy_preserved = 100.0;
  int pass_index = 1;
  std::optional<std::string> error;  // set when a sweep step failed

  std::vector<std::string> warnings;
};

// Text embedding for semantic similarity. Two implementations ship: a
// remote embedding endpoint and a deterministic hashed unigram-count
// embedder for offline runs and tests.
class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::vector<double> embed(const std::string& text) = 0;
};

class HashedUnigramEmbedder final : public Embedder {
 public:
  explicit HashedUnigramEmbedder(std::size_t dimension = 1 << 16)
      : dimension_(dimension) {}
  std::vector<double> embed(const std::string& text) override;

 private:
  std::size_t dimension_;
};

class RemoteEmbedder final : public Embedder {
 public:
  RemoteEmbedder(HttpEndpoint endpoint, std::string model_name)
      : endpoint_(std::move(endpoint)), model_name_(std::move(model_name)) {}
  std::vector<double> embed(const std::string& text) override;

 private:
  HttpEndpoint endpoint_;
  std::string model_name_;
};

// Cosine similarity scaled to 0-100; negative cosines clamp to 0. Empty
// text yields 0.
double semantic_similarity(const std::string& text_a, const std::string& text_b,
                           Embedder& embedder);

// Computes every corpus metric for one (epsilon, restoration) pair.
// `restorations` must hold one result per document (matched by source_id);
// pass_index selects which restoration pass to score when several are
// present. Set embedder to nullptr to skip semantic similarity.
EvaluationReport evaluate_corpus(const std::vector<AnnotatedDocument>& originals,
                                 const std::vector<RestorationResult>& restorations,
                                 double epsilon, int k,
                                 const MatchOptions& options = {},
                                 Embedder* embedder = nullptr,
                                 int pass_index = 0,
                                 bool compare_summary = false);

// Perturb -> restore -> evaluate across an epsilon grid. Restorer failures
// are recorded on their row and the sweep continues. Per-epsilon seeds are
// drawn from SplitMix64(seed), one per grid point, so rows are independent
// and the whole sweep is reproducible from (corpus, grid, seed).
std::vector<EvaluationReport> sweep(const std::vector<AnnotatedDocument>& corpus,
                                    const EpsilonGrid& grid,
                                    const RestorerConfig& restorer,
                                    double alpha, std::uint64_t seed,
                                    Embedder* embedder = nullptr,
                                    const CharAlphabet& alphabet =
                                        CharAlphabet::printable_ascii());

// Report serialization. CSV columns: epsilon, gamma, baseline_prob,
// sensitive_rate, non_sensitive_rate, semantic_similarity,
// privacy_preserved, then one column per entity category.
std::string reports_to_csv(const std::vector<EvaluationReport>& reports);
std::string report_to_json(const EvaluationReport& report);
std::string reports_to_json(const std::vector<EvaluationReport>& reports);

}  // namespace krrtext

#endif  // KRRTEXT_EVALUATE_HPP_
