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

#include "krrtext/restore.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <optional>
#include <thread>

#include <json.hpp>

#include "krrtext/errors.hpp"
#include "krrtext/http.hpp"

namespace krrtext {

namespace {

using nlohmann::json;

// Instruction text for the restorer. The unified prompt is the role line
// plus both blocks; the split modes carry one block each.
const char kRoleLine[] = "You are a text restoration and summarization assistant.";
const char kRestoreBlock[] =
    "First, correct only the errors introduced by distortion/noise. Do not "
    "make any unnecessary changes. Preserve the original wording, "
    "punctuation, capitalization, and formatting as much as possible.";
const char kSummarizeBlock[] =
    "Second, create a concise and accurate summary of the restored text. "
    "Focus on the main ideas and key details, and avoid unnecessary details. "
    "Do not add opinions or any prefacing.";

const char kRestoredHeader[] = "RESTORED:";
const char kSummaryHeader[] = "SUMMARY:";

std::string trim(std::string_view s) {
  std::size_t begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return "";
  std::size_t end = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(begin, end - begin + 1));
}

int hamming_distance_capped(const std::string& a, const std::string& b,
                            int cap) {
  int distance = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i] && ++distance > cap) break;
  }
  return distance;
}

// Splits a unified-mode completion into its two sections.
std::pair<std::string, std::string> parse_unified_response(
    const std::string& content, const std::string& raw_payload) {
  auto restored_at = content.find(kRestoredHeader);
  auto summary_at = content.find(kSummaryHeader);
  if (restored_at == std::string::npos || summary_at == std::string::npos ||
      summary_at < restored_at) {
    throw ProtocolError(
        "unified response is missing the RESTORED:/SUMMARY: headers",
        raw_payload);
  }
  std::string restored =
      trim(std::string_view(content).substr(restored_at + sizeof(kRestoredHeader) - 1,
                                            summary_at - restored_at - (sizeof(kRestoredHeader) - 1)));
  std::string summary =
      trim(std::string_view(content).substr(summary_at + sizeof(kSummaryHeader) - 1));
  return {restored, summary};
}

class RemoteRestorer {
 public:
  explicit RemoteRestorer(const RestorerConfig& config) : config_(config) {
    endpoint_.base_url = config.endpoint_url;
    endpoint_.api_key_env = config.api_key_env;
    endpoint_.max_retries = config.max_retries;
    endpoint_.request_timeout = config.request_timeout;
    endpoint_.retry_backoff = config.retry_backoff;
  }

  RestorationResult run(const std::string& source_id,
                        const std::string& input_text, int pass_index) const {
    json body;
    body["model"] = config_.model_name;
    body["temperature"] = config_.temperature;
    json messages = json::array();
    for (const ChatMessage& message :
         build_restoration_prompt(input_text, config_.prompt_mode)) {
      messages.push_back({{"role", message.role}, {"content", message.content}});
    }
    body["messages"] = std::move(messages);

    const json response = post_json(endpoint_, "/chat/completions", body);
    std::string content;
    try {
      content = response.at("choices").at(0).at("message").at("content")
                    .get<std::string>();
    } catch (const json::exception&) {
      throw ProtocolError("completion lacks choices[0].message.content",
                          response.dump());
    }

    RestorationResult result;
    result.source_id = source_id;
    result.pass_index = pass_index;
    result.raw_response = response.dump();
    if (config_.prompt_mode == PromptMode::unified) {
      std::tie(result.restored_text, result.summary) =
          parse_unified_response(content, result.raw_response);
    } else if (config_.prompt_mode == PromptMode::restore_only) {
      result.restored_text = trim(content);
    } else {
      result.restored_text = input_text;
      result.summary = trim(content);
    }
    if (result.restored_text.empty()) {
      throw ProtocolError("restorer returned an empty restoration",
                          result.raw_response);
    }
    return result;
  }

 private:
  RestorerConfig config_;
  HttpEndpoint endpoint_;
};

// Shared per-run state so the dictionary is loaded once per corpus.
class RestorerSession {
 public:
  explicit RestorerSession(const RestorerConfig& config) : config_(config) {
    config.validate();
    if (config.kind == RestorerKind::mock) {
      mock_.emplace(load_dictionary(config.dictionary_path));
    } else {
      remote_.emplace(config);
    }
  }

  RestorationResult run(const PerturbedDocument& perturbed, int pass_index,
                        const RestorationResult* previous) const {
    if (pass_index != 1 && pass_index != 2) {
      throw ParameterError("pass_index must be 1 or 2");
    }
    if (!perturbed.mechanism_applied) {
      throw ValidationError(
          "document " + perturbed.source_id +
          " is not flagged as perturbed; refusing to send it to a restorer");
    }
    if (pass_index == 2 && previous == nullptr) {
      throw ParameterError("pass 2 requires the pass-1 result as input");
    }
    const std::string& input_text =
        pass_index == 2 ? previous->restored_text : perturbed.perturbed_text;

    if (mock_) {
      RestorationResult result;
      result.source_id = perturbed.source_id;
      result.pass_index = pass_index;
      result.restored_text = mock_->restore_text(input_text);
      // The mock has no summarizer; the restored text stands in so unified
      // pipelines stay runnable offline.
      if (config_.prompt_mode != PromptMode::restore_only) {
        result.summary = result.restored_text;
      }
      return result;
    }
    return remote_->run(perturbed.source_id, input_text, pass_index);
  }

 private:
  RestorerConfig config_;
  std::optional<MockDictionary> mock_;
  std::optional<RemoteRestorer> remote_;
};

}  // namespace

void RestorerConfig::validate() const {
  if (kind == RestorerKind::remote) {
    if (endpoint_url.empty() || model_name.empty()) {
      throw ConfigError("remote restorer needs endpoint_url and model_name");
    }
  } else {
    if (dictionary_path.empty()) {
      throw ConfigError("mock restorer needs a dictionary path");
    }
  }
  if (max_concurrent_requests < 1) {
    throw ConfigError("max_concurrent_requests must be at least 1");
  }
  if (max_retries < 0) throw ConfigError("max_retries must be nonnegative");
  if (temperature < 0) throw ConfigError("temperature must be nonnegative");
}

RestorerConfig RestorerConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open restorer config: " + path);

  RestorerConfig config;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::string text = trim(line);
    if (text.empty() || text[0] == '#' || text[0] == '[') continue;
    auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(line_number) +
                        ": expected key = value");
    }
    std::string key = trim(text.substr(0, eq));
    std::string value = trim(text.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    try {
      if (key == "kind") {
        if (value == "remote") {
          config.kind = RestorerKind::remote;
        } else if (value == "mock") {
          config.kind = RestorerKind::mock;
        } else {
          throw ConfigError("kind must be remote or mock");
        }
      } else if (key == "endpoint_url") {
        config.endpoint_url = value;
      } else if (key == "model_name") {
        config.model_name = value;
      } else if (key == "api_key_env") {
        config.api_key_env = value;
      } else if (key == "dictionary") {
        config.dictionary_path = value;
      } else if (key == "max_retries") {
        config.max_retries = std::stoi(value);
      } else if (key == "request_timeout_ms") {
        config.request_timeout = std::chrono::milliseconds(std::stol(value));
      } else if (key == "retry_backoff_ms") {
        config.retry_backoff = std::chrono::milliseconds(std::stol(value));
      } else if (key == "max_concurrent_requests") {
        config.max_concurrent_requests = std::stoi(value);
      } else if (key == "temperature") {
        config.temperature = std::stod(value);
      } else if (key == "prompt_mode") {
        if (value == "unified") {
          config.prompt_mode = PromptMode::unified;
        } else if (value == "restore_only") {
          config.prompt_mode = PromptMode::restore_only;
        } else if (value == "summarize_only") {
          config.prompt_mode = PromptMode::summarize_only;
        } else {
          throw ConfigError("unknown prompt_mode: " + value);
        }
      } else {
        throw ConfigError("unknown key: " + key);
      }
    } catch (const std::invalid_argument&) {
      throw ConfigError(path + ":" + std::to_string(line_number) +
                        ": bad value for " + key);
    }
  }
  return config;
}

const std::string& restoration_system_prompt(PromptMode mode) {
  static const std::string unified = std::string(kRoleLine) + "\n" +
                                     kRestoreBlock + "\n" + kSummarizeBlock;
  static const std::string restore_only =
      std::string(kRoleLine) + "\n" + kRestoreBlock;
  static const std::string summarize_only =
      std::string(kRoleLine) + "\n" + kSummarizeBlock;
  switch (mode) {
    case PromptMode::restore_only:
      return restore_only;
    case PromptMode::summarize_only:
      return summarize_only;
    case PromptMode::unified:
    default:
      return unified;
  }
}

std::vector<ChatMessage> build_restoration_prompt(
    const std::string& perturbed_text, PromptMode mode) {
  if (perturbed_text.empty()) {
    throw ParameterError("cannot build a restoration prompt for empty text");
  }
  std::string user;
  if (mode == PromptMode::unified) {
    // Output framing lives in the user turn; the system prompt stays
    // exactly as published.
    user = std::string("Output the corrected text after a line containing "
                       "exactly \"") +
           kRestoredHeader + "\" and the summary after a line containing "
           "exactly \"" + kSummaryHeader + "\".\n\n" + perturbed_text;
  } else {
    user = perturbed_text;
  }
  return {{"system", restoration_system_prompt(mode)}, {"user", std::move(user)}};
}

MockDictionary::MockDictionary(const std::vector<std::string>& words) {
  for (const std::string& word : words) {
    if (word.empty()) continue;
    by_length_[word.size()].push_back(word);
  }
  for (auto& [length, bucket] : by_length_) {
    std::sort(bucket.begin(), bucket.end());
    bucket.erase(std::unique(bucket.begin(), bucket.end()), bucket.end());
    size_ += bucket.size();
  }
}

std::string MockDictionary::restore_word(const std::string& word) const {
  auto bucket_it = by_length_.find(word.size());
  if (bucket_it == by_length_.end()) return word;

  const int threshold = static_cast<int>((word.size() + 1) / 2);
  int best_distance = static_cast<int>(word.size()) + 1;
  const std::string* best = nullptr;
  for (const std::string& candidate : bucket_it->second) {
    int distance = hamming_distance_capped(word, candidate, best_distance - 1);
    if (distance < best_distance) {
      best_distance = distance;
      best = &candidate;
      if (best_distance == 0) break;
    }
  }
  if (best == nullptr || best_distance > threshold) return word;
  return *best;
}

std::string MockDictionary::restore_text(const std::string& text) const {
  std::vector<Token> tokens = tokenize(text);
  for (Token& token : tokens) token.text = restore_word(token.text);
  return replace_token_spans(text, tokens);
}

std::vector<std::string> load_dictionary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dictionary: " + path);
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) words.push_back(line);
  }
  return words;
}

Token mock_dictionary_restore(const Token& token,
                              const std::vector<std::string>& dictionary) {
  MockDictionary dict(dictionary);
  Token result = token;
  result.text = dict.restore_word(token.text);
  return result;
}

RestorationResult restore(const PerturbedDocument& perturbed,
                          const RestorerConfig& config, int pass_index,
                          const RestorationResult* previous) {
  RestorerSession session(config);
  return session.run(perturbed, pass_index, previous);
}

std::vector<RestorationResult> restore_corpus(
    const std::vector<PerturbedDocument>& perturbed,
    const RestorerConfig& config, int passes) {
  if (passes != 1 && passes != 2) {
    throw ParameterError("passes must be 1 or 2");
  }
  RestorerSession session(config);

  auto run_pass = [&](int pass_index,
                      const std::vector<RestorationResult>* previous) {
    std::vector<std::optional<RestorationResult>> slots(perturbed.size());
    std::atomic<std::size_t> cursor{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;

    auto worker = [&] {
      for (;;) {
        std::size_t index = cursor.fetch_add(1);
        if (index >= perturbed.size()) return;
        {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (first_error) return;
        }
        try {
          slots[index] = session.run(
              perturbed[index], pass_index,
              previous != nullptr ? &(*previous)[index] : nullptr);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    };

    const std::size_t thread_count = std::min<std::size_t>(
        static_cast<std::size_t>(config.max_concurrent_requests),
        std::max<std::size_t>(perturbed.size(), 1));
    if (thread_count <= 1) {
      worker();
    } else {
      std::vector<std::thread> threads;
      threads.reserve(thread_count);
      for (std::size_t i = 0; i < thread_count; ++i) {
        threads.emplace_back(worker);
      }
      for (std::thread& thread : threads) thread.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    std::vector<RestorationResult> results;
    results.reserve(slots.size());
    for (auto& slot : slots) results.push_back(std::move(*slot));
    return results;
  };

  std::vector<RestorationResult> all = run_pass(1, nullptr);
  if (passes == 2) {
    std::vector<RestorationResult> second = run_pass(2, &all);
    all.insert(all.end(), std::make_move_iterator(second.begin()),
               std::make_move_iterator(second.end()));
  }
  return all;
}

void save_perturbed(const std::string& path,
                    const std::vector<AnnotatedDocument>& sources,
                    const std::vector<PerturbedDocument>& docs) {
  if (sources.size() != docs.size()) {
    throw ParameterError("source/perturbed corpus size mismatch");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output file: " + path);

  json header;
  if (!docs.empty()) {
    header["params"] = {{"epsilon", docs.front().epsilon},
                        {"gamma", docs.front().gamma},
                        {"k", docs.front().k},
                        {"seed", docs.front().seed},
                        {"mechanism", "k-rr"}};
  } else {
    header["params"] = json::object();
  }
  out << header.dump() << '\n';

  for (std::size_t i = 0; i < docs.size(); ++i) {
    const AnnotatedDocument& source = sources[i];
    const PerturbedDocument& doc = docs[i];
    if (source.id != doc.source_id) {
      throw ParameterError("source/perturbed corpus order mismatch at " +
                           source.id);
    }
    json row;
    row["id"] = doc.source_id;
    row["perturbed_text"] = doc.perturbed_text;
    json entities = json::array();
    for (const EntityAnnotation& entity : source.entities) {
      const Token& first = source.tokens[entity.token_indices.front()];
      const Token& last = source.tokens[entity.token_indices.back()];
      entities.push_back({{"start", first.start_offset},
                          {"end", last.start_offset + last.length()},
                          {"category", entity.category},
                          {"entity_id", entity.entity_id}});
    }
    row["entities"] = std::move(entities);
    out << row.dump() << '\n';
  }
  if (!out) throw IoError("failed writing perturbed corpus: " + path);
}

PerturbedCorpus load_perturbed(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open perturbed corpus: " + path);

  PerturbedCorpus corpus;
  std::string line;
  std::size_t line_number = 0;
  double epsilon = 0.0;
  double gamma = 0.0;
  int k = 0;
  std::uint64_t seed = 0;
  bool saw_header = false;

  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    json object;
    try {
      object = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ValidationError(path + ": line " + std::to_string(line_number) +
                            ": malformed JSON: " + e.what());
    }
    if (!saw_header) {
      if (!object.contains("params")) {
        throw ValidationError(path +
                              ": first line must be the params header; is this "
                              "a perturbed corpus?");
      }
      const json& params = object.at("params");
      epsilon = params.value("epsilon", 0.0);
      gamma = params.value("gamma", 0.0);
      k = params.value("k", 0);
      seed = params.value("seed", std::uint64_t{0});
      saw_header = true;
      continue;
    }
    if (!object.contains("id") || !object.contains("perturbed_text")) {
      throw ValidationError(path + ": line " + std::to_string(line_number) +
                            ": expected id and perturbed_text");
    }
    PerturbedDocument doc;
    doc.source_id = object.at("id").get<std::string>();
    doc.perturbed_text = object.at("perturbed_text").get<std::string>();
    doc.perturbed_tokens = tokenize(doc.perturbed_text);
    doc.epsilon = epsilon;
    doc.gamma = gamma;
    doc.k = k;
    doc.seed = seed;
    doc.mechanism_applied = true;

    std::vector<EntityAnnotation> entities;
    if (object.contains("entities")) {
      // Spans are offsets into the equal-length perturbed text.
      AnnotatedDocument shadow;
      shadow.id = doc.source_id;
      shadow.raw_text = doc.perturbed_text;
      shadow.tokens = doc.perturbed_tokens;
      for (const json& entry : object.at("entities")) {
        EntityAnnotation entity;
        entity.category = entry.at("category").get<std::string>();
        entity.entity_id = entry.value("entity_id", "");
        std::size_t start = entry.at("start").get<std::size_t>();
        std::size_t end = entry.at("end").get<std::size_t>();
        for (std::size_t t = 0; t < shadow.tokens.size(); ++t) {
          std::size_t token_start = shadow.tokens[t].start_offset;
          std::size_t token_end = token_start + shadow.tokens[t].length();
          if (token_end <= start || token_start >= end) continue;
          entity.token_indices.push_back(t);
        }
        entities.push_back(std::move(entity));
      }
    }
    corpus.documents.push_back(std::move(doc));
    corpus.entities.push_back(std::move(entities));
  }
  if (!saw_header) {
    throw ValidationError(path + ": missing params header line");
  }
  return corpus;
}

void save_restored(const std::string& path,
                   const std::vector<RestorationResult>& results,
                   double epsilon, int k, std::uint64_t seed,
                   const std::string& restorer_label) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output file: " + path);
  json header;
  header["params"] = {{"epsilon", epsilon},
                      {"gamma", k >= 2 ? gamma_from_epsilon(epsilon, k) : 0.0},
                      {"k", k},
                      {"seed", seed},
                      {"restorer", restorer_label}};
  out << header.dump() << '\n';
  for (const RestorationResult& result : results) {
    json row;
    row["id"] = result.source_id;
    row["restored_text"] = result.restored_text;
    row["summary"] = result.summary;
    row["pass_index"] = result.pass_index;
    out << row.dump() << '\n';
  }
  if (!out) throw IoError("failed writing restored corpus: " + path);
}

RestoredCorpus load_restored(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open restored corpus: " + path);
  RestoredCorpus corpus;
  std::string line;
  std::size_t line_number = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    json object;
    try {
      object = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ValidationError(path + ": line " + std::to_string(line_number) +
                            ": malformed JSON: " + e.what());
    }
    if (!saw_header) {
      if (!object.contains("params")) {
        throw ValidationError(path + ": first line must be the params header");
      }
      const json& params = object.at("params");
      corpus.epsilon = params.value("epsilon", 0.0);
      corpus.gamma = params.value("gamma", 0.0);
      corpus.k = params.value("k", 0);
      corpus.seed = params.value("seed", std::uint64_t{0});
      saw_header = true;
      continue;
    }
    RestorationResult result;
    result.source_id = object.at("id").get<std::string>();
    result.restored_text = object.at("restored_text").get<std::string>();
    result.summary = object.value("summary", "");
    result.pass_index = object.value("pass_index", 1);
    corpus.results.push_back(std::move(result));
  }
  if (!saw_header) {
    throw ValidationError(path + ": missing params header line");
  }
  return corpus;
}

}  // namespace krrtext
