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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "krrtext/corpus.hpp"
#include "krrtext/errors.hpp"
#include "krrtext/evaluate.hpp"
#include "krrtext/manifest.hpp"
#include "krrtext/mechanism.hpp"
#include "krrtext/restore.hpp"
#include "krrtext/theory.hpp"

namespace {

using namespace krrtext;

int category_exit_code(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::usage:
      return 2;
    case ErrorCategory::io:
      return 3;
    case ErrorCategory::transport:
      return 4;
    default:
      return 1;
  }
}

// The perturbed/restored artifacts must never sit on top of the original
// corpus file.
void refuse_overwriting_input(const std::string& in, const std::string& out) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (fs::weakly_canonical(in, ec) == fs::weakly_canonical(out, ec)) {
    throw Error(ErrorCategory::usage,
                "--out would overwrite --in; pick a different output path");
  }
}

std::uint64_t fresh_seed() {
  std::random_device device;
  return (static_cast<std::uint64_t>(device()) << 32) ^ device();
}

void write_text_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output file: " + path);
  out << content;
  if (!out) throw IoError("failed writing output: " + path);
}

const CharAlphabet& resolve_alphabet(const std::string& alphabet_file,
                                     std::optional<CharAlphabet>& storage) {
  if (alphabet_file.empty()) return CharAlphabet::printable_ascii();
  storage = CharAlphabet::from_file(alphabet_file);
  return *storage;
}

// Restorer settings resolved in precedence order:
// CLI flags > config file > environment > defaults.
struct RestorerCliFlags {
  std::string config_path;
  std::string kind;
  std::string dictionary;
  std::string endpoint;
  std::string model;
  std::string api_key_env;
  std::string mode;
  int max_concurrent = 0;
  int max_retries = -1;
  long timeout_ms = 0;

  void register_on(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "restorer config file (key = value)");
    cmd->add_option("--restorer", kind, "restorer kind: mock or remote");
    cmd->add_option("--dictionary", dictionary, "dictionary file for the mock restorer");
    cmd->add_option("--endpoint", endpoint, "chat-completions base URL, e.g. https://api.openai.com/v1");
    cmd->add_option("--model", model, "remote model name");
    cmd->add_option("--api-key-env", api_key_env, "environment variable holding the API key");
    cmd->add_option("--mode", mode, "prompt mode: unified, restore_only or summarize_only");
    cmd->add_option("--max-concurrent", max_concurrent, "max requests in flight");
    cmd->add_option("--retries", max_retries, "max transport retries");
    cmd->add_option("--timeout-ms", timeout_ms, "request timeout in milliseconds");
  }

  RestorerConfig resolve() const {
    RestorerConfig config;
    if (!config_path.empty()) config = RestorerConfig::from_file(config_path);
    // environment fills only what the file left unset
    if (config.endpoint_url.empty()) {
      if (const char* env = std::getenv("KRRTEXT_ENDPOINT_URL")) {
        config.endpoint_url = env;
      }
    }
    if (config.model_name.empty()) {
      if (const char* env = std::getenv("KRRTEXT_MODEL_NAME")) {
        config.model_name = env;
      }
    }
    if (!kind.empty()) {
      if (kind == "mock") {
        config.kind = RestorerKind::mock;
      } else if (kind == "remote") {
        config.kind = RestorerKind::remote;
      } else {
        throw Error(ErrorCategory::usage, "--restorer must be mock or remote");
      }
    }
    if (!dictionary.empty()) config.dictionary_path = dictionary;
    if (!endpoint.empty()) config.endpoint_url = endpoint;
    if (!model.empty()) config.model_name = model;
    if (!api_key_env.empty()) config.api_key_env = api_key_env;
    if (!mode.empty()) {
      if (mode == "unified") {
        config.prompt_mode = PromptMode::unified;
      } else if (mode == "restore_only") {
        config.prompt_mode = PromptMode::restore_only;
      } else if (mode == "summarize_only") {
        config.prompt_mode = PromptMode::summarize_only;
      } else {
        throw Error(ErrorCategory::usage, "unknown --mode: " + mode);
      }
    }
    if (max_concurrent > 0) config.max_concurrent_requests = max_concurrent;
    if (max_retries >= 0) config.max_retries = max_retries;
    if (timeout_ms > 0) {
      config.request_timeout = std::chrono::milliseconds(timeout_ms);
    }
    return config;
  }

  std::string label(const RestorerConfig& config) const {
    return config.kind == RestorerKind::mock ? "mock"
                                             : "remote:" + config.model_name;
  }
};

int run_cli(int argc, char** argv) {
  CLI::App app{"character-level randomized-response text sanitization"};
  app.require_subcommand(1);

  bool strict_annotations = false;
  app.add_flag("--strict-annotations", strict_annotations,
               "reject spans that cross token boundaries and documents with "
               "non-alphabet characters");

  // ---- perturb ----
  auto* perturb_cmd =
      app.add_subcommand("perturb", "apply k-RR noise to a corpus");
  double perturb_epsilon = 0.0;
  std::optional<std::uint64_t> perturb_seed;
  std::string perturb_in;
  std::string perturb_out;
  std::string perturb_alphabet_file;
  bool perturb_flip_log = false;
  perturb_cmd->add_option("--epsilon", perturb_epsilon, "privacy budget per character")
      ->required();
  perturb_cmd->add_option("--seed", perturb_seed, "RNG seed (auto-generated when absent)");
  perturb_cmd->add_option("--in", perturb_in, "input corpus JSONL")->required();
  perturb_cmd->add_option("--out", perturb_out, "output perturbed JSONL")->required();
  perturb_cmd->add_option("--alphabet", perturb_alphabet_file, "custom alphabet file");
  perturb_cmd->add_flag("--flip-log", perturb_flip_log,
                        "keep the diagnostic per-character flip log in memory "
                        "(never written to the output)");

  // ---- baseline ----
  auto* baseline_cmd = app.add_subcommand(
      "baseline", "closed-form chance-level reconstruction curve");
  double baseline_alpha = 0.0;
  std::string baseline_range = "1.0:10.0:0.5";
  std::string baseline_histogram_from;
  std::string baseline_out;
  int baseline_k = 94;
  baseline_cmd->add_option("--alpha", baseline_alpha, "relative Hamming fraction in [0,1]");
  baseline_cmd->add_option("--epsilon-range", baseline_range, "grid start:stop:step");
  baseline_cmd
      ->add_option("--histogram-from", baseline_histogram_from,
                   "corpus JSONL supplying the word-length histogram")
      ->required();
  baseline_cmd->add_option("--k", baseline_k, "alphabet size");
  baseline_cmd->add_option("--out", baseline_out, "output CSV (default stdout)");

  // ---- restore ----
  auto* restore_cmd =
      app.add_subcommand("restore", "restore a perturbed corpus");
  std::string restore_in;
  std::string restore_out;
  int restore_passes = 1;
  RestorerCliFlags restore_flags;
  restore_cmd->add_option("--in", restore_in, "perturbed corpus JSONL")->required();
  restore_cmd->add_option("--out", restore_out, "output restored JSONL")->required();
  restore_cmd->add_option("--passes", restore_passes, "restoration passes (1 or 2)")
      ->check(CLI::Range(1, 2));
  restore_flags.register_on(restore_cmd);

  // ---- evaluate ----
  auto* evaluate_cmd = app.add_subcommand(
      "evaluate", "score a restoration against the original corpus");
  double evaluate_alpha = 0.0;
  std::string evaluate_in_original;
  std::string evaluate_in_restored;
  std::string evaluate_report = "csv";
  std::string evaluate_out;
  int evaluate_pass = 0;
  bool evaluate_case_fold = false;
  bool evaluate_strip_punct = false;
  std::string evaluate_embedder = "hash";
  std::string evaluate_embedding_endpoint;
  std::string evaluate_embedding_model;
  std::string evaluate_embedding_key_env = "KRRTEXT_API_KEY";
  std::string evaluate_compare = "restored";
  evaluate_cmd->add_option("--alpha", evaluate_alpha, "relative Hamming fraction in [0,1]");
  evaluate_cmd->add_option("--in-original", evaluate_in_original, "original corpus JSONL")
      ->required();
  evaluate_cmd->add_option("--in-restored", evaluate_in_restored, "restored JSONL")
      ->required();
  evaluate_cmd->add_option("--report", evaluate_report, "report format: csv or json");
  evaluate_cmd->add_option("--out", evaluate_out, "report path (default stdout)");
  evaluate_cmd->add_option("--pass", evaluate_pass,
                           "restoration pass to score (default: highest present)");
  evaluate_cmd->add_flag("--case-fold", evaluate_case_fold, "fold case before matching");
  evaluate_cmd->add_flag("--strip-punct", evaluate_strip_punct,
                         "strip surrounding punctuation before matching");
  evaluate_cmd->add_option("--embedder", evaluate_embedder,
                           "semantic-similarity embedder: hash, remote or none");
  evaluate_cmd->add_option("--embedding-endpoint", evaluate_embedding_endpoint,
                           "remote embeddings base URL");
  evaluate_cmd->add_option("--embedding-model", evaluate_embedding_model,
                           "remote embedding model name");
  evaluate_cmd->add_option("--embedding-key-env", evaluate_embedding_key_env,
                           "environment variable holding the embeddings API key");
  evaluate_cmd->add_option("--compare", evaluate_compare,
                           "restored-side text to embed: restored or summary");

  // ---- sweep ----
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "perturb + restore + evaluate across an epsilon grid");
  std::string sweep_range = "1.0:10.0:0.5";
  std::string sweep_in;
  std::string sweep_out;
  double sweep_alpha = 0.0;
  std::optional<std::uint64_t> sweep_seed;
  std::string sweep_embedder = "hash";
  std::string sweep_alphabet_file;
  RestorerCliFlags sweep_flags;
  sweep_cmd->add_option("--epsilon-range", sweep_range, "grid start:stop:step");
  sweep_cmd->add_option("--in", sweep_in, "input corpus JSONL")->required();
  sweep_cmd->add_option("--out", sweep_out, "output CSV (default stdout)");
  sweep_cmd->add_option("--alpha", sweep_alpha, "relative Hamming fraction in [0,1]");
  sweep_cmd->add_option("--seed", sweep_seed, "master seed (auto-generated when absent)");
  sweep_cmd->add_option("--embedder", sweep_embedder, "hash or none");
  sweep_cmd->add_option("--alphabet", sweep_alphabet_file, "custom alphabet file");
  sweep_flags.register_on(sweep_cmd);

  // ---- verify-dp ----
  auto* verify_cmd = app.add_subcommand(
      "verify-dp", "check the mechanism's privacy ratio against e^epsilon");
  double verify_epsilon = 0.0;
  int verify_k = 94;
  verify_cmd->add_option("--epsilon", verify_epsilon, "privacy budget")->required();
  verify_cmd->add_option("--k", verify_k, "alphabet size");

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);  // --help and friends
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // usage error
  }

  const LoadOptions load_options{strict_annotations};

  if (perturb_cmd->parsed()) {
    refuse_overwriting_input(perturb_in, perturb_out);
    std::optional<CharAlphabet> alphabet_storage;
    const CharAlphabet& alphabet =
        resolve_alphabet(perturb_alphabet_file, alphabet_storage);

    Corpus corpus = load_corpus(perturb_in, load_options);
    for (const std::string& warning : corpus.warnings) {
      std::cerr << "warning: " << warning << '\n';
    }
    const std::uint64_t seed = perturb_seed.value_or(fresh_seed());
    if (!perturb_seed.has_value()) {
      std::cerr << "note: seed auto-generated: " << seed << '\n';
    }
    PerturbationParams params(perturb_epsilon, alphabet.k(), seed);
    PerturbOptions perturb_options;
    perturb_options.strict = strict_annotations;
    perturb_options.keep_flip_log = perturb_flip_log;

    std::vector<PerturbedDocument> perturbed;
    perturbed.reserve(corpus.documents.size());
    for (const AnnotatedDocument& doc : corpus.documents) {
      perturbed.push_back(perturb_document(doc, params, alphabet, perturb_options));
    }
    save_perturbed(perturb_out, corpus.documents, perturbed);

    RunManifest manifest;
    manifest.subcommand = "perturb";
    manifest.params = {{"epsilon", perturb_epsilon},
                       {"gamma", params.gamma()},
                       {"k", alphabet.k()},
                       {"seed", seed},
                       {"strict_annotations", strict_annotations}};
    manifest.input_paths = {perturb_in};
    manifest.output_paths = {perturb_out};
    write_manifest(manifest, perturb_out);
    return 0;
  }

  if (baseline_cmd->parsed()) {
    Corpus corpus = load_corpus(baseline_histogram_from, load_options);
    const auto histogram = word_length_histogram(corpus.documents);
    const EpsilonGrid grid = EpsilonGrid::parse(baseline_range);
    const BaselineCurve curve =
        baseline_curve(histogram, baseline_alpha, grid, baseline_k);

    std::ostringstream csv;
    csv << "epsilon,gamma,probability\n";
    csv.precision(12);
    for (const BaselineCurve::Row& row : curve.rows) {
      csv << row.epsilon << ',' << row.gamma << ',' << row.probability << '\n';
    }
    write_text_output(baseline_out, csv.str());
    if (!baseline_out.empty() && baseline_out != "-") {
      RunManifest manifest;
      manifest.subcommand = "baseline";
      manifest.params = {{"alpha", baseline_alpha},
                         {"epsilon_range", baseline_range},
                         {"k", baseline_k}};
      manifest.input_paths = {baseline_histogram_from};
      manifest.output_paths = {baseline_out};
      write_manifest(manifest, baseline_out);
    }
    return 0;
  }

  if (restore_cmd->parsed()) {
    refuse_overwriting_input(restore_in, restore_out);
    const RestorerConfig config = restore_flags.resolve();
    PerturbedCorpus perturbed = load_perturbed(restore_in);
    const std::vector<RestorationResult> results =
        restore_corpus(perturbed.documents, config, restore_passes);
    const double epsilon =
        perturbed.documents.empty() ? 0.0 : perturbed.documents.front().epsilon;
    const int k = perturbed.documents.empty() ? 94 : perturbed.documents.front().k;
    const std::uint64_t seed =
        perturbed.documents.empty() ? 0 : perturbed.documents.front().seed;
    save_restored(restore_out, results, epsilon, k, seed, restore_flags.label(config));

    RunManifest manifest;
    manifest.subcommand = "restore";
    manifest.params = {{"passes", restore_passes},
                       {"restorer", restore_flags.label(config)},
                       {"prompt_mode",
                        config.prompt_mode == PromptMode::unified
                            ? "unified"
                            : (config.prompt_mode == PromptMode::restore_only
                                   ? "restore_only"
                                   : "summarize_only")}};
    manifest.input_paths = {restore_in};
    if (config.kind == RestorerKind::mock) {
      manifest.input_paths.push_back(config.dictionary_path);
    }
    manifest.output_paths = {restore_out};
    write_manifest(manifest, restore_out);
    return 0;
  }

  if (evaluate_cmd->parsed()) {
    Corpus originals = load_corpus(evaluate_in_original, load_options);
    RestoredCorpus restored = load_restored(evaluate_in_restored);

    MatchOptions options;
    options.alpha = evaluate_alpha;
    options.case_fold = evaluate_case_fold;
    options.strip_punctuation = evaluate_strip_punct;

    std::unique_ptr<Embedder> embedder;
    if (evaluate_embedder == "hash") {
      embedder = std::make_unique<HashedUnigramEmbedder>();
    } else if (evaluate_embedder == "remote") {
      HttpEndpoint endpoint;
      endpoint.base_url = evaluate_embedding_endpoint;
      endpoint.api_key_env = evaluate_embedding_key_env;
      if (endpoint.base_url.empty()) {
        throw Error(ErrorCategory::usage,
                    "--embedder remote needs --embedding-endpoint");
      }
      embedder = std::make_unique<RemoteEmbedder>(endpoint, evaluate_embedding_model);
    } else if (evaluate_embedder != "none") {
      throw Error(ErrorCategory::usage,
                  "--embedder must be hash, remote or none");
    }

    // restored files written by other tools may omit the alphabet size
    const int alphabet_size = restored.k >= 2 ? restored.k : 94;
    const EvaluationReport report = evaluate_corpus(
        originals.documents, restored.results, restored.epsilon, alphabet_size,
        options, embedder.get(), evaluate_pass, evaluate_compare == "summary");
    for (const std::string& warning : report.warnings) {
      std::cerr << "warning: " << warning << '\n';
    }

    std::string rendered;
    if (evaluate_report == "csv") {
      rendered = reports_to_csv({report});
    } else if (evaluate_report == "json") {
      rendered = report_to_json(report) + "\n";
    } else {
      throw Error(ErrorCategory::usage, "--report must be csv or json");
    }
    write_text_output(evaluate_out, rendered);

    if (!evaluate_out.empty() && evaluate_out != "-") {
      RunManifest manifest;
      manifest.subcommand = "evaluate";
      manifest.params = {{"alpha", evaluate_alpha},
                         {"pass", evaluate_pass},
                         {"case_fold", evaluate_case_fold},
                         {"strip_punct", evaluate_strip_punct},
                         {"embedder", evaluate_embedder},
                         {"compare", evaluate_compare},
                         {"report", evaluate_report}};
      manifest.input_paths = {evaluate_in_original, evaluate_in_restored};
      manifest.output_paths = {evaluate_out};
      write_manifest(manifest, evaluate_out);
    }
    return 0;
  }

  if (sweep_cmd->parsed()) {
    Corpus corpus = load_corpus(sweep_in, load_options);
    const RestorerConfig config = sweep_flags.resolve();
    const EpsilonGrid grid = EpsilonGrid::parse(sweep_range);
    std::optional<CharAlphabet> alphabet_storage;
    const CharAlphabet& alphabet =
        resolve_alphabet(sweep_alphabet_file, alphabet_storage);
    const std::uint64_t seed = sweep_seed.value_or(fresh_seed());
    if (!sweep_seed.has_value()) {
      std::cerr << "note: seed auto-generated: " << seed << '\n';
    }

    std::unique_ptr<Embedder> embedder;
    if (sweep_embedder == "hash") {
      embedder = std::make_unique<HashedUnigramEmbedder>();
    } else if (sweep_embedder != "none") {
      throw Error(ErrorCategory::usage, "--embedder must be hash or none");
    }

    const std::vector<EvaluationReport> reports =
        sweep(corpus.documents, grid, config, sweep_alpha, seed,
              embedder.get(), alphabet);
    write_text_output(sweep_out, reports_to_csv(reports));

    if (!sweep_out.empty() && sweep_out != "-") {
      RunManifest manifest;
      manifest.subcommand = "sweep";
      manifest.params = {{"epsilon_range", sweep_range},
                         {"alpha", sweep_alpha},
                         {"seed", seed},
                         {"restorer", sweep_flags.label(config)},
                         {"embedder", sweep_embedder}};
      manifest.input_paths = {sweep_in};
      if (config.kind == RestorerKind::mock) {
        manifest.input_paths.push_back(config.dictionary_path);
      }
      manifest.output_paths = {sweep_out};
      write_manifest(manifest, sweep_out);
    }
    return 0;
  }

  if (verify_cmd->parsed()) {
    PerturbationParams params(verify_epsilon, verify_k, 0);
    const DpRatioReport report = verify_dp_ratio(params);
    std::cout.precision(15);
    std::cout << "epsilon            " << report.epsilon << '\n'
              << "k                  " << report.k << '\n'
              << "gamma              " << params.gamma() << '\n'
              << "max ratio          " << report.max_ratio << '\n'
              << "expected e^epsilon " << report.expected_ratio << '\n'
              << "relative error     " << report.relative_error << '\n'
              << "off-support ratio  " << report.off_support_ratio << '\n';
    return report.relative_error <= 1e-12 ? 0 : 1;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const Error& e) {
    std::cerr << "error[" << to_string(e.category()) << "]: " << e.what()
              << '\n';
    return category_exit_code(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error[internal]: " << e.what() << '\n';
    return 1;
  }
}
