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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "krrtext/evaluate.hpp"
#include "krrtext/mechanism.hpp"
#include "krrtext/restore.hpp"
#include "krrtext/text.hpp"
#include "krrtext/theory.hpp"

namespace py = pybind11;
using namespace krrtext;

namespace {

std::string perturb_text(const std::string& text, double epsilon,
                         std::uint64_t seed, const std::string& doc_id) {
  const CharAlphabet& alphabet = CharAlphabet::printable_ascii();
  AnnotatedDocument doc = AnnotatedDocument::from_text(doc_id, text);
  PerturbationParams params(epsilon, alphabet.k(), seed);
  return perturb_document(doc, params, alphabet).perturbed_text;
}

std::string mock_restore_text(const std::string& text,
                              const std::vector<std::string>& dictionary) {
  return MockDictionary(dictionary).restore_text(text);
}

PromptMode parse_mode(const std::string& mode) {
  if (mode == "unified") return PromptMode::unified;
  if (mode == "restore_only") return PromptMode::restore_only;
  if (mode == "summarize_only") return PromptMode::summarize_only;
  throw ParameterError("unknown prompt mode: " + mode);
}

}  // namespace

PYBIND11_MODULE(krrtext, m) {
  m.doc() = "character-level randomized-response text sanitization";

  py::register_exception<Error>(m, "KrrtextError");

  // mechanism
  m.def("gamma_from_epsilon", &gamma_from_epsilon, py::arg("epsilon"),
        py::arg("k") = 94,
        "flip probability (k-1)/(k-1+e^epsilon) of the k-RR mechanism");
  m.def("perturb_text", &perturb_text, py::arg("text"), py::arg("epsilon"),
        py::arg("seed") = 0, py::arg("doc_id") = std::string("doc"),
        "apply k-RR noise to every token of the text; deterministic in "
        "(seed, doc_id)");
  m.def(
      "verify_dp_ratio",
      [](double epsilon, int k) {
        const DpRatioReport report =
            verify_dp_ratio(PerturbationParams(epsilon, k, 0));
        py::dict result;
        result["epsilon"] = report.epsilon;
        result["k"] = report.k;
        result["max_ratio"] = report.max_ratio;
        result["expected_ratio"] = report.expected_ratio;
        result["relative_error"] = report.relative_error;
        result["off_support_ratio"] = report.off_support_ratio;
        return result;
      },
      py::arg("epsilon"), py::arg("k") = 94,
      "max Pr[M(x)=y]/Pr[M(x')=y] over all inputs and outputs vs e^epsilon");

  // text
  m.def(
      "tokenize",
      [](const std::string& text) {
        std::vector<std::pair<std::string, std::size_t>> result;
        for (const Token& token : tokenize(text)) {
          result.emplace_back(token.text, token.start_offset);
        }
        return result;
      },
      py::arg("text"), "split into maximal space-free runs: [(text, offset)]");
  m.def(
      "word_length_histogram",
      [](const std::string& text) {
        std::map<std::size_t, std::size_t> histogram;
        for (const Token& token : tokenize(text)) ++histogram[token.length()];
        return histogram;
      },
      py::arg("text"), "token count per word length");

  // theory
  m.def(
      "posterior_char",
      [](const std::vector<double>& prior, int observed_index,
         int candidate_index, double gamma) {
        return posterior_char(CharPrior(prior), observed_index,
                              candidate_index, gamma);
      },
      py::arg("prior"), py::arg("observed_index"), py::arg("candidate_index"),
      py::arg("gamma"),
      "posterior probability of the original character given the observed one");
  m.def("random_word_exact_prob", &random_word_exact_prob,
        py::arg("word_length"), py::arg("gamma"),
        "(1-gamma)^length: chance a random word survives unchanged");
  m.def("log_likelihood_ratio", &log_likelihood_ratio, py::arg("word_length"),
        py::arg("gamma"),
        "length * (ln(1-gamma) - ln gamma); crosses 0 at epsilon = ln(k-1)");
  m.def("cum_hamming_prob", &cum_hamming_prob, py::arg("ell"),
        py::arg("word_length"), py::arg("gamma"),
        "probability that at most ell characters were replaced");
  m.def(
      "baseline_T_alpha",
      [](const std::map<std::size_t, std::size_t>& histogram, double alpha,
         double gamma) { return baseline_T_alpha(histogram, alpha, gamma); },
      py::arg("histogram"), py::arg("alpha"), py::arg("gamma"),
      "chance-level reconstruction probability for a word-length histogram");

  // restoration
  m.def("mock_restore_text", &mock_restore_text, py::arg("text"),
        py::arg("dictionary"),
        "Hamming-nearest same-length dictionary restoration, token by token");
  m.def(
      "build_restoration_prompt",
      [](const std::string& perturbed_text, const std::string& mode) {
        std::vector<std::map<std::string, std::string>> messages;
        for (const ChatMessage& message :
             build_restoration_prompt(perturbed_text, parse_mode(mode))) {
          messages.push_back(
              {{"role", message.role}, {"content", message.content}});
        }
        return messages;
      },
      py::arg("perturbed_text"), py::arg("mode") = std::string("unified"),
      "chat messages for one restoration request");

  // evaluation
  m.def(
      "token_reconstructed",
      [](const std::string& original, const std::string& restored,
         double alpha) {
        MatchOptions options;
        options.alpha = alpha;
        Token restored_token{restored, 0};
        return token_reconstructed(Token{original, 0}, &restored_token,
                                   options);
      },
      py::arg("original"), py::arg("restored"), py::arg("alpha") = 0.0,
      "true when Hamming distance <= floor(alpha * len); exact match at "
      "alpha = 0");
  m.def(
      "semantic_similarity",
      [](const std::string& a, const std::string& b) {
        HashedUnigramEmbedder embedder;
        return semantic_similarity(a, b, embedder);
      },
      py::arg("text_a"), py::arg("text_b"),
      "offline unigram-count cosine similarity scaled to 0-100");

  m.attr("DEFAULT_ALPHABET_SIZE") = CharAlphabet::printable_ascii().k();
  m.attr("__version__") = "0.1.0";
}
