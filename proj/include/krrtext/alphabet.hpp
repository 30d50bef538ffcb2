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

#ifndef KRRTEXT_ALPHABET_HPP_
#define KRRTEXT_ALPHABET_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace krrtext {

// Ordered set of perturbable characters. The default is the 94 printable
// ASCII characters 0x21..0x7E; space (0x20) is the token separator and is
// never a member.
class CharAlphabet {
 public:
  // The default alphabet: '!' through '~', k = 94.
  static const CharAlphabet& printable_ascii();

  // Custom alphabet from an ordered list of distinct characters. Space is
  // rejected because it delimits tokens. Throws ParameterError.
  static CharAlphabet from_characters(std::string_view characters);

  // Loads a custom alphabet from a file holding the characters on a single
  // line (trailing newline ignored).
  static CharAlphabet from_file(const std::string& path);

  int k() const { return static_cast<int>(characters_.size()); }

  const std::string& characters() const { return characters_; }

  bool contains(char c) const {
    return index_[static_cast<std::uint8_t>(c)] >= 0;
  }

  // Index of a member character. Throws ParameterError for non-members;
  // callers on the lenient path check contains() first.
  int index_of(char c) const;

  char char_at(int index) const;

 private:
  explicit CharAlphabet(std::string characters);

  std::string characters_;
  std::array<std::int16_t, 256> index_;
};

}  // namespace krrtext

#endif  // KRRTEXT_ALPHABET_HPP_
