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

#include "krrtext/alphabet.hpp"

#include <fstream>

#include "krrtext/errors.hpp"

namespace krrtext {

CharAlphabet::CharAlphabet(std::string characters)
    : characters_(std::move(characters)) {
  index_.fill(-1);
  for (std::size_t i = 0; i < characters_.size(); ++i) {
    index_[static_cast<std::uint8_t>(characters_[i])] =
        static_cast<std::int16_t>(i);
  }
}

const CharAlphabet& CharAlphabet::printable_ascii() {
  static const CharAlphabet instance = [] {
    std::string chars;
    for (int c = 0x21; c <= 0x7e; ++c) chars.push_back(static_cast<char>(c));
    return CharAlphabet(std::move(chars));
  }();
  return instance;
}

CharAlphabet CharAlphabet::from_characters(std::string_view characters) {
  if (characters.size() < 2) {
    throw ParameterError("alphabet needs at least 2 characters");
  }
  std::array<bool, 256> seen{};
  for (char c : characters) {
    if (c == ' ') {
      throw ParameterError("space is the token separator and cannot be an alphabet member");
    }
    auto b = static_cast<std::uint8_t>(c);
    if (seen[b]) {
      throw ParameterError(std::string("duplicate alphabet character: '") + c + "'");
    }
    seen[b] = true;
  }
  return CharAlphabet(std::string(characters));
}

CharAlphabet CharAlphabet::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open alphabet file: " + path);
  std::string line;
  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return from_characters(line);
}

int CharAlphabet::index_of(char c) const {
  int index = index_[static_cast<std::uint8_t>(c)];
  if (index < 0) {
    throw ParameterError(std::string("character not in alphabet: code ") +
                         std::to_string(static_cast<unsigned char>(c)));
  }
  return index;
}

char CharAlphabet::char_at(int index) const {
  if (index < 0 || index >= k()) {
    throw ParameterError("alphabet index out of range: " + std::to_string(index));
  }
  return characters_[static_cast<std::size_t>(index)];
}

}  // namespace krrtext
