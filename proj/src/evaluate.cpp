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

#include "krrtext/evaluate.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "krrtext/errors.hpp"
#include "krrtext/http.hpp"
#include "krrtext/rng.hpp"

namespace krrtext {

namespace {

using nlohmann::json;

const char* const kStreetCategory = "LOCATION-STREET";
const char* const kCityCategory = "LOCATION-CITY";
const char* const kStateCategory = "LOCATION-STATE";

std::string normalize(const std::string& text, const MatchOptions& options) {
  std::string result = text;
  if (options.strip_punctuation) {
    auto is_punct = [](unsigned char c) {
      return std::ispunct(c) != 0;
    };
    std::size_t begin = 0;
    std::size_t end = result.size();
    while (begin < end && is_punct(static_cast<unsigned char>(result[begin]))) {
      ++begin;
    }
    while (end > begin && is_punct(static_cast<unsigned char>(result[end - 1]))) {
      --end;
    }
    result = result.substr(begin, end - begin);
  }
  if (options.case_fold) {
    std::transform(result.begin(), result.end(), result.begin(),
                   [](unsigned char c) { return std::tolower(c); });
  }
  return result;
}

double format_safe(double value) { return std::isfinite(value) ? value : 0.0; }

std::string csv_number(double value) {
  std::ostringstream os;
  os.precision(6);
  os << std::fixed << format_safe(value);
  return os.str();
}

std::string csv_escape(const std::string& value) {
  if (value.find_first_of(",\"\n") == std::string::npos) return value;
  std::string quoted = "\"";
  for (char c : value) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

}  // namespace

std::size_t edit_distance(const std::string& a, const std::string& b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  std::vector<std::size_t> previous(m + 1);
  std::vector<std::size_t> current(m + 1);
  for (std::size_t j = 0; j <= m; ++j) previous[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    current[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      std::size_t substitution =
          previous[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      current[j] = std::min({substitution, previous[j] + 1, current[j - 1] + 1});
    }
    std::swap(previous, current);
  }
  return previous[m];
}

TokenAlignment align_tokens(const std::vector<Token>& original,
                            const std::vector<Token>& restored) {
  TokenAlignment alignment;
  if (original.size() == restored.size()) {
    alignment.method = TokenAlignment::Method::positional;
    alignment.restored_index_of_original.resize(original.size());
    for (std::size_t i = 0; i < original.size(); ++i) {
      alignment.restored_index_of_original[i] = i;
    }
    return alignment;
  }

  alignment.method = TokenAlignment::Method::sequence;
  const std::size_t n = original.size();
  const std::size_t m = restored.size();
  constexpr double kGapCost = 1.0;

  auto substitution_cost = [&](std::size_t i, std::size_t j) {
    const std::string& a = original[i].text;
    const std::string& b = restored[j].text;
    const std::size_t longest = std::max(a.size(), b.size());
    if (longest == 0) return 0.0;
    return static_cast<double>(edit_distance(a, b)) /
           static_cast<double>(longest);
  };

  // Global alignment; traceback chooses substitution over gaps on ties so
  // plausible pairings survive.
  std::vector<std::vector<double>> cost(n + 1, std::vector<double>(m + 1));
  for (std::size_t i = 0; i <= n; ++i) cost[i][0] = kGapCost * i;
  for (std::size_t j = 0; j <= m; ++j) cost[0][j] = kGapCost * j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      cost[i][j] = std::min({cost[i - 1][j - 1] + substitution_cost(i - 1, j - 1),
                             cost[i - 1][j] + kGapCost,
                             cost[i][j - 1] + kGapCost});
    }
  }

  alignment.restored_index_of_original.assign(n, std::nullopt);
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 && j > 0) {
    if (cost[i][j] ==
        cost[i - 1][j - 1] + substitution_cost(i - 1, j - 1)) {
      alignment.restored_index_of_original[i - 1] = j - 1;
      --i;
      --j;
    } else if (cost[i][j] == cost[i - 1][j] + kGapCost) {
      --i;
    } else {
      --j;
    }
  }
  return alignment;
}

bool token_reconstructed(const Token& original, const Token* restored,
                         const MatchOptions& options) {
  if (options.alpha < 0.0 || options.alpha > 1.0) {
    throw ParameterError("alpha must lie in [0, 1]");
  }
  if (restored == nullptr) return false;
  const std::string a = normalize(original.text, options);
  const std::string b = normalize(restored->text, options);
  if (a.size() != b.size()) return false;
  if (a.empty()) return true;
  const auto allowed = static_cast<std::size_t>(
      std::floor(options.alpha * static_cast<double>(a.size())));
  std::size_t distance = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i] && ++distance > allowed) return false;
  }
  return true;
}

std::vector<double> HashedUnigramEmbedder::embed(const std::string& text) {
  std::vector<double> vector(dimension_, 0.0);
  for (const Token& token : tokenize(text)) {
    vector[fnv1a64(token.text) % dimension_] += 1.0;
  }
  return vector;
}

std::vector<double> RemoteEmbedder::embed(const std::string& text) {
  json body;
  body["model"] = model_name_;
  body["input"] = json::array({text});
  const json response = post_json(endpoint_, "/embeddings", body);
  try {
    return response.at("data").at(0).at("embedding").get<std::vector<double>>();
  } catch (const json::exception&) {
    throw ProtocolError("embedding response lacks data[0].embedding",
                        response.dump());
  }
}

double semantic_similarity(const std::string& text_a, const std::string& text_b,
                           Embedder& embedder) {
  if (text_a.empty() || text_b.empty()) return 0.0;
  const std::vector<double> a = embedder.embed(text_a);
  const std::vector<double> b = embedder.embed(text_b);
  if (a.size() != b.size()) {
    throw ProtocolError("embedder returned vectors of different dimensions",
                        "");
  }
  double dot = 0.0;
  double norm_a = 0.0;
  double norm_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    norm_a += a[i] * a[i];
    norm_b += b[i] * b[i];
  }
  if (norm_a == 0.0 || norm_b == 0.0) return 0.0;
  const double cosine = dot / (std::sqrt(norm_a) * std::sqrt(norm_b));
  return 100.0 * std::max(0.0, cosine);
}

EvaluationReport evaluate_corpus(const std::vector<AnnotatedDocument>& originals,
                                 const std::vector<RestorationResult>& restorations,
                                 double epsilon, int k,
                                 const MatchOptions& options,
                                 Embedder* embedder, int pass_index,
                                 bool compare_summary) {
  // Pick the requested pass (default: the highest one present).
  int effective_pass = pass_index;
  if (effective_pass == 0) {
    for (const RestorationResult& result : restorations) {
      effective_pass = std::max(effective_pass, result.pass_index);
    }
    if (effective_pass == 0) effective_pass = 1;
  }
  std::unordered_map<std::string, const RestorationResult*> by_id;
  for (const RestorationResult& result : restorations) {
    if (result.pass_index == effective_pass) by_id[result.source_id] = &result;
  }

  EvaluationReport report;
  report.epsilon = epsilon;
  report.gamma = gamma_from_epsilon(epsilon, k);
  report.alpha = options.alpha;
  report.pass_index = effective_pass;

  const auto histogram = word_length_histogram(originals);
  if (!histogram.empty()) {
    report.baseline_prob =
        100.0 * baseline_T_alpha(histogram, options.alpha, report.gamma);
  }

  MatchOptions exact_options = options;
  exact_options.alpha = 0.0;  // entity metrics always use exact matching

  double similarity_sum = 0.0;
  std::size_t similarity_count = 0;

  // Per-document complete-address bookkeeping.
  std::size_t address_documents = 0;
  std::size_t address_reconstructed = 0;

  for (const AnnotatedDocument& doc : originals) {
    auto found = by_id.find(doc.id);
    if (found == by_id.end()) {
      report.warnings.push_back("document " + doc.id +
                                " has no restoration; all its tokens count as "
                                "non-reconstructed");
    }
    const RestorationResult* restoration =
        found != by_id.end() ? found->second : nullptr;

    std::vector<Token> restored_tokens;
    if (restoration != nullptr) {
      restored_tokens = tokenize(restoration->restored_text);
    }
    const TokenAlignment alignment = align_tokens(doc.tokens, restored_tokens);

    auto restored_token_for = [&](std::size_t original_index) -> const Token* {
      const auto& mapped =
          alignment.restored_index_of_original[original_index];
      if (!mapped.has_value()) return nullptr;
      return &restored_tokens[*mapped];
    };

    // Sensitive = any token covered by an entity annotation (deduplicated
    // across categories); instance-level counting throughout.
    std::set<std::size_t> sensitive_indices;
    for (const EntityAnnotation& entity : doc.entities) {
      sensitive_indices.insert(entity.token_indices.begin(),
                               entity.token_indices.end());
    }

    for (std::size_t t = 0; t < doc.tokens.size(); ++t) {
      const bool hit =
          token_reconstructed(doc.tokens[t], restored_token_for(t), options);
      Rate& bucket = sensitive_indices.count(t) > 0 ? report.sensitive
                                                     : report.non_sensitive;
      ++bucket.denominator;
      if (hit) ++bucket.numerator;
    }

    std::map<std::string, bool> address_component_present;
    bool address_all_reconstructed = true;

    for (const EntityAnnotation& entity : doc.entities) {
      Rate& category = report.per_category[entity.category];
      Rate& single = report.entities.single_part[entity.category];
      Rate& full = report.entities.full_entity[entity.category];

      bool all_parts = true;
      for (std::size_t index : entity.token_indices) {
        const bool relaxed_hit = token_reconstructed(
            doc.tokens[index], restored_token_for(index), options);
        const bool exact_hit = token_reconstructed(
            doc.tokens[index], restored_token_for(index), exact_options);
        ++category.denominator;
        if (relaxed_hit) ++category.numerator;
        ++single.denominator;
        if (exact_hit) ++single.numerator;
        all_parts = all_parts && exact_hit;
      }
      // Instance-weighted: every part of the entity contributes, and counts
      // toward the numerator only when the whole entity came back. Tokens
      // counted here are a subset of those counted for single_part, so
      // full_entity <= single_part holds on any fixture, mixed entity sizes
      // included.
      full.denominator += entity.token_indices.size();
      if (all_parts) full.numerator += entity.token_indices.size();

      if (entity.category == kStreetCategory ||
          entity.category == kCityCategory ||
          entity.category == kStateCategory) {
        address_component_present[entity.category] = true;
        address_all_reconstructed = address_all_reconstructed && all_parts;
      }
    }

    if (address_component_present.count(kStreetCategory) > 0 &&
        address_component_present.count(kCityCategory) > 0 &&
        address_component_present.count(kStateCategory) > 0) {
      ++address_documents;
      if (address_all_reconstructed) ++address_reconstructed;
    }

    if (embedder != nullptr && restoration != nullptr) {
      const std::string& restored_side =
          compare_summary ? restoration->summary : restoration->restored_text;
      similarity_sum += semantic_similarity(doc.raw_text, restored_side, *embedder);
      ++similarity_count;
    }
  }

  if (address_documents > 0) {
    report.entities.complete_address =
        Rate{address_reconstructed, address_documents};
  }
  if (similarity_count > 0) {
    report.semantic_similarity =
        similarity_sum / static_cast<double>(similarity_count);
  }
  report.privacy_preserved = 100.0 - report.sensitive.percent();
  return report;
}

std::vector<EvaluationReport> sweep(const std::vector<AnnotatedDocument>& corpus,
                                    const EpsilonGrid& grid,
                                    const RestorerConfig& restorer,
                                    double alpha, std::uint64_t seed,
                                    Embedder* embedder,
                                    const CharAlphabet& alphabet) {
  std::vector<EvaluationReport> reports;
  SplitMix64 seeder(seed);
  MatchOptions options;
  options.alpha = alpha;

  for (double epsilon : grid.values()) {
    const std::uint64_t row_seed = seeder.next();
    EvaluationReport row;
    try {
      PerturbationParams params(epsilon, alphabet.k(), row_seed);
      std::vector<PerturbedDocument> perturbed;
      perturbed.reserve(corpus.size());
      for (const AnnotatedDocument& doc : corpus) {
        perturbed.push_back(perturb_document(doc, params, alphabet));
      }
      const std::vector<RestorationResult> restored =
          restore_corpus(perturbed, restorer, 1);
      row = evaluate_corpus(corpus, restored, epsilon, alphabet.k(), options,
                            embedder);
    } catch (const Error& e) {
      row.epsilon = epsilon;
      row.gamma = gamma_from_epsilon(epsilon, alphabet.k());
      row.alpha = alpha;
      row.error = std::string(to_string(e.category())) + ": " + e.what();
    }
    reports.push_back(std::move(row));
  }
  return reports;
}

std::string reports_to_csv(const std::vector<EvaluationReport>& reports) {
  // Union of categories, sorted, so every row has the same columns.
  std::set<std::string> categories;
  for (const EvaluationReport& report : reports) {
    for (const auto& [category, rate] : report.per_category) {
      categories.insert(category);
    }
  }

  std::ostringstream out;
  out << "epsilon,gamma,baseline_prob,sensitive_rate,non_sensitive_rate,"
         "semantic_similarity,privacy_preserved";
  for (const std::string& category : categories) out << ',' << category;
  out << ",error\n";

  for (const EvaluationReport& report : reports) {
    out << csv_number(report.epsilon) << ',' << csv_number(report.gamma) << ',';
    if (report.error.has_value()) {
      out << ",,,,";
      for (std::size_t i = 0; i < categories.size(); ++i) out << ',';
      out << ',' << csv_escape(*report.error) << '\n';
      continue;
    }
    out << csv_number(report.baseline_prob) << ','
        << csv_number(report.sensitive.percent()) << ','
        << csv_number(report.non_sensitive.percent()) << ',';
    if (report.semantic_similarity.has_value()) {
      out << csv_number(*report.semantic_similarity);
    }
    out << ',' << csv_number(report.privacy_preserved);
    for (const std::string& category : categories) {
      out << ',';
      auto found = report.per_category.find(category);
      if (found != report.per_category.end()) {
        out << csv_number(found->second.percent());
      }
    }
    out << ",\n";
  }
  return out.str();
}

namespace {

json rate_to_json(const Rate& rate) {
  return {{"percent", rate.percent()},
          {"numerator", rate.numerator},
          {"denominator", rate.denominator}};
}

json report_to_json_object(const EvaluationReport& report) {
  json object;
  object["epsilon"] = report.epsilon;
  object["gamma"] = report.gamma;
  object["alpha"] = report.alpha;
  object["pass_index"] = report.pass_index;
  if (report.error.has_value()) {
    object["error"] = *report.error;
    return object;
  }
  object["baseline_prob"] = report.baseline_prob;
  object["sensitive"] = rate_to_json(report.sensitive);
  object["non_sensitive"] = rate_to_json(report.non_sensitive);
  object["privacy_preserved"] = report.privacy_preserved;
  if (report.semantic_similarity.has_value()) {
    object["semantic_similarity"] = *report.semantic_similarity;
  }
  json per_category = json::object();
  for (const auto& [category, rate] : report.per_category) {
    per_category[category] = rate_to_json(rate);
  }
  object["per_category"] = std::move(per_category);
  json entities = json::object();
  json single = json::object();
  json full = json::object();
  for (const auto& [category, rate] : report.entities.single_part) {
    single[category] = rate_to_json(rate);
  }
  for (const auto& [category, rate] : report.entities.full_entity) {
    full[category] = rate_to_json(rate);
  }
  entities["single_part"] = std::move(single);
  entities["full_entity"] = std::move(full);
  if (report.entities.complete_address.has_value()) {
    entities["complete_address"] =
        rate_to_json(*report.entities.complete_address);
  }
  object["entities"] = std::move(entities);
  if (!report.warnings.empty()) object["warnings"] = report.warnings;
  return object;
}

}  // namespace

std::string report_to_json(const EvaluationReport& report) {
  return report_to_json_object(report).dump(2);
}

std::string reports_to_json(const std::vector<EvaluationReport>& reports) {
  json array = json::array();
  for (const EvaluationReport& report : reports) {
    array.push_back(report_to_json_object(report));
  }
  return array.dump(2);
}

}  // namespace krrtext
