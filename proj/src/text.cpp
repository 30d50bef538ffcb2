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

#include "krrtext/text.hpp"

#include <set>

#include "krrtext/errors.hpp"

namespace krrtext {

std::vector<Token> tokenize(const std::string& raw_text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  const std::size_t n = raw_text.size();
  while (i < n) {
    if (raw_text[i] == ' ') {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < n && raw_text[i] != ' ') ++i;
    tokens.push_back(Token{raw_text.substr(start, i - start), start});
  }
  return tokens;
}

std::string replace_token_spans(const std::string& raw_text,
                                const std::vector<Token>& replacements) {
  std::string result = raw_text;
  for (const Token& token : replacements) {
    if (token.start_offset + token.length() > result.size()) {
      throw ValidationError("token span exceeds document length");
    }
    result.replace(token.start_offset, token.length(), token.text);
  }
  return result;
}

std::string detokenize(const std::string& raw_text,
                       const std::vector<Token>& tokens) {
  return replace_token_spans(raw_text, tokens);
}

std::size_t count_non_alphabet_chars(const std::vector<Token>& tokens,
                                     const CharAlphabet& alphabet) {
  std::size_t count = 0;
  for (const Token& token : tokens) {
    for (char c : token.text) {
      if (!alphabet.contains(c)) ++count;
    }
  }
  return count;
}

AnnotatedDocument AnnotatedDocument::from_text(std::string id,
                                               std::string raw_text,
                                               const CharAlphabet& alphabet) {
  AnnotatedDocument doc;
  doc.id = std::move(id);
  doc.raw_text = std::move(raw_text);
  doc.tokens = tokenize(doc.raw_text);
  doc.non_alphabet_count = count_non_alphabet_chars(doc.tokens, alphabet);
  return doc;
}

void AnnotatedDocument::validate() const {
  for (const Token& token : tokens) {
    if (token.text.empty()) {
      throw ValidationError("document " + id + ": empty token");
    }
    if (token.text.find(' ') != std::string::npos) {
      throw ValidationError("document " + id + ": token contains a space");
    }
    if (token.start_offset + token.length() > raw_text.size()) {
      throw ValidationError("document " + id + ": token span out of range");
    }
    if (raw_text.compare(token.start_offset, token.length(), token.text) != 0) {
      throw ValidationError("document " + id +
                            ": token text disagrees with raw text");
    }
  }
  // Category-scoped overlap check: a token may belong to at most one entity
  // of a given category.
  std::set<std::pair<std::string, std::size_t>> claimed;
  for (const EntityAnnotation& entity : entities) {
    if (entity.token_indices.empty()) {
      throw ValidationError("document " + id + ": entity " + entity.entity_id +
                            " has no tokens");
    }
    std::size_t previous = 0;
    bool first = true;
    for (std::size_t index : entity.token_indices) {
      if (index >= tokens.size()) {
        throw ValidationError("document " + id + ": entity " +
                              entity.entity_id + " token index out of range");
      }
      if (!first && index <= previous) {
        throw ValidationError("document " + id + ": entity " +
                              entity.entity_id +
                              " token indices not strictly increasing");
      }
      if (!claimed.insert({entity.category, index}).second) {
        throw ValidationError("document " + id + ": token " +
                              std::to_string(index) +
                              " claimed twice for category " + entity.category);
      }
      previous = index;
      first = false;
    }
  }
}

std::map<std::size_t, std::size_t> word_length_histogram(
    const AnnotatedDocument& doc) {
  std::map<std::size_t, std::size_t> histogram;
  for (const Token& token : doc.tokens) ++histogram[token.length()];
  return histogram;
}

std::map<std::size_t, std::size_t> word_length_histogram(
    const std::vector<AnnotatedDocument>& docs) {
  std::map<std::size_t, std::size_t> histogram;
  for (const AnnotatedDocument& doc : docs) {
    for (const Token& token : doc.tokens) ++histogram[token.length()];
  }
  return histogram;
}

}  // namespace krrtext
