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

#ifndef KRRTEXT_TEXT_HPP_
#define KRRTEXT_TEXT_HPP_

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "krrtext/alphabet.hpp"

namespace krrtext {

// One word: a maximal run of non-space characters. Offsets index into the
// owning document's raw text, so rewriting token spans in place reproduces
// the original whitespace layout exactly.
struct Token {
  std::string text;
  std::size_t start_offset = 0;

  std::size_t length() const { return text.size(); }

  bool operator==(const Token&) const = default;
};

// A group of token positions forming one annotated entity (e.g. the three
// parts of a full name share one entity_id).
struct EntityAnnotation {
  std::vector<std::size_t> token_indices;  // strictly increasing
  std::string category;
  std::string entity_id;
};

struct AnnotatedDocument {
  std::string id;
  std::string raw_text;
  std::vector<Token> tokens;
  std::vector<EntityAnnotation> entities;
  // Characters inside tokens that fall outside the default alphabet
  // (tabs, non-ASCII bytes). They pass through perturbation verbatim.
  std::size_t non_alphabet_count = 0;

  // Tokenizes and counts non-alphabet characters; entities start empty.
  static AnnotatedDocument from_text(std::string id, std::string raw_text,
                                     const CharAlphabet& alphabet =
                                         CharAlphabet::printable_ascii());

  // Throws ValidationError if tokens/entities break a documented invariant.
  void validate() const;
};

// Splits text into maximal runs of non-space characters. Only 0x20
// separates; all other bytes (including tabs and non-ASCII) stay inside
// tokens and are reported via non-alphabet diagnostics.
std::vector<Token> tokenize(const std::string& raw_text);

// Rebuilds the document text from tokens plus the original whitespace, by
// overwriting each token span in raw_text with the (equal-length)
// replacement text. Throws ValidationError on length/offset mismatch.
std::string replace_token_spans(const std::string& raw_text,
                                const std::vector<Token>& replacements);

// Inverse of tokenize given the original raw text: identical to raw_text.
std::string detokenize(const std::string& raw_text,
                       const std::vector<Token>& tokens);

std::size_t count_non_alphabet_chars(const std::vector<Token>& tokens,
                                     const CharAlphabet& alphabet);

// Number of tokens of each length: the map i -> T(i).
std::map<std::size_t, std::size_t> word_length_histogram(
    const AnnotatedDocument& doc);

// Histogram over a whole corpus, summed per document.
std::map<std::size_t, std::size_t> word_length_histogram(
    const std::vector<AnnotatedDocument>& docs);

}  // namespace krrtext

#endif  // KRRTEXT_TEXT_HPP_
