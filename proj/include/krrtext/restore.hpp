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

#ifndef KRRTEXT_RESTORE_HPP_
#define KRRTEXT_RESTORE_HPP_

#include <chrono>
#include <string>
#include <unordered_map>
#include <vector>

#include "krrtext/mechanism.hpp"
#include "krrtext/text.hpp"

namespace krrtext {

enum class RestorerKind { remote, mock };
enum class PromptMode { unified, restore_only, summarize_only };

struct RestorerConfig {
  RestorerKind kind = RestorerKind::mock;
  // remote
  std::string endpoint_url;
  std::string model_name;
  std::string api_key_env = "KRRTEXT_API_KEY";
  int max_retries = 3;
  std::chrono::milliseconds request_timeout{30000};
  std::chrono::milliseconds retry_backoff{250};
  int max_concurrent_requests = 1;
  double temperature = 0.0;
  // mock
  std::string dictionary_path;

  PromptMode prompt_mode = PromptMode::unified;

  // Throws ConfigError when required fields for the chosen kind are missing.
  void validate() const;

  // Reads a flat `key = value` table (toml-style; [section] headers and
  // # comments are skipped). CLI flags override whatever is loaded here.
  static RestorerConfig from_file(const std::string& path);
};

struct ChatMessage {
  std::string role;
  std::string content;

  bool operator==(const ChatMessage&) const = default;
};

// The exact instruction text sent to the restorer. Unified mode carries
// both the restoration and summarization instructions; the split modes each
// carry one of the two instruction blocks for the sequential
// restore -> summarize analysis.
const std::string& restoration_system_prompt(PromptMode mode);

// System + user messages for one restoration request. The unified user turn
// additionally pins the output framing (RESTORED: / SUMMARY: headers) so
// the two sections can be separated unambiguously.
std::vector<ChatMessage> build_restoration_prompt(
    const std::string& perturbed_text, PromptMode mode = PromptMode::unified);

struct RestorationResult {
  std::string source_id;
  std::string restored_text;
  std::string summary;
  int pass_index = 1;  // 1 = first restoration, 2 = second
  std::string raw_response;
};

// Same-length Hamming-nearest dictionary lookup, the deterministic offline
// stand-in for a remote LLM. Ties go to the lexicographically smallest
// word; tokens with no candidate within ceil(length/2) pass through
// unchanged. Operates token-by-token with no cross-token context, so it is
// a conservative lower bound on what a real restorer can do.
class MockDictionary {
 public:
  explicit MockDictionary(const std::vector<std::string>& words);

  std::string restore_word(const std::string& word) const;
  std::string restore_text(const std::string& text) const;

  std::size_t size() const { return size_; }

 private:
  // words bucketed by length, each bucket sorted so the first strict
  // minimum found is also the lexicographic tie winner
  std::unordered_map<std::size_t, std::vector<std::string>> by_length_;
  std::size_t size_ = 0;
};

// One word per line, UTF-8; blank lines skipped.
std::vector<std::string> load_dictionary(const std::string& path);

Token mock_dictionary_restore(const Token& token,
                              const std::vector<std::string>& dictionary);

// Restores one perturbed document. Pass 2 takes the pass-1 result as its
// input text. Only documents that actually went through the mechanism are
// accepted, which keeps original text out of remote requests by
// construction.
RestorationResult restore(const PerturbedDocument& perturbed,
                          const RestorerConfig& config, int pass_index = 1,
                          const RestorationResult* previous = nullptr);

// Runs `passes` rounds of restoration over the corpus with at most
// max_concurrent_requests requests in flight. Results are ordered by pass,
// then by input position, regardless of completion order.
std::vector<RestorationResult> restore_corpus(
    const std::vector<PerturbedDocument>& perturbed,
    const RestorerConfig& config, int passes = 1);

// ---- perturbed / restored JSONL ----
// perturbed file: {"params": {...}} header, then per document
//   {"id": ..., "perturbed_text": ..., "entities": [...]}
// The original "text" field is deliberately absent: this file is the
// adversary-visible artifact.
// restored file: same params header plus restorer metadata, then
//   {"id": ..., "restored_text": ..., "summary": ..., "pass_index": ...}

void save_perturbed(const std::string& path,
                    const std::vector<AnnotatedDocument>& sources,
                    const std::vector<PerturbedDocument>& docs);

struct PerturbedCorpus {
  std::vector<PerturbedDocument> documents;
  // entity annotations carried through for downstream evaluation
  std::vector<std::vector<EntityAnnotation>> entities;
};

PerturbedCorpus load_perturbed(const std::string& path);

void save_restored(const std::string& path,
                   const std::vector<RestorationResult>& results,
                   double epsilon, int k, std::uint64_t seed,
                   const std::string& restorer_label);

struct RestoredCorpus {
  std::vector<RestorationResult> results;
  double epsilon = 0.0;
  double gamma = 0.0;
  int k = 0;
  std::uint64_t seed = 0;
};

RestoredCorpus load_restored(const std::string& path);

}  // namespace krrtext

#endif  // KRRTEXT_RESTORE_HPP_
