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

#ifndef KRRTEXT_CORPUS_HPP_
#define KRRTEXT_CORPUS_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "krrtext/text.hpp"

namespace krrtext {

// One object per line:
//   {"id": "...", "text": "...",
//    "entities": [{"start": 0, "end": 6, "category": "NAME",
//                  "entity_id": "e1"}]}
// Entity spans are character offsets, end exclusive, and are converted to
// whole-token indices on load.

struct LoadOptions {
  // Strict mode rejects spans that cross token boundaries and documents
  // containing non-alphabet characters; lenient mode clips spans to the
  // overlapping tokens and passes non-alphabet characters through, with a
  // warning either way.
  bool strict = false;
};

struct Corpus {
  std::vector<AnnotatedDocument> documents;
  std::vector<std::string> warnings;
};

Corpus load_corpus(const std::string& path, const LoadOptions& options = {});
Corpus load_corpus_stream(std::istream& in, const std::string& source_name,
                          const LoadOptions& options = {});

// Parses a single JSONL line. line_number is 1-based and used in error
// messages only.
AnnotatedDocument parse_corpus_line(const std::string& line,
                                    std::size_t line_number,
                                    const LoadOptions& options,
                                    std::vector<std::string>* warnings);

void save_corpus(const std::string& path,
                 const std::vector<AnnotatedDocument>& documents);

// Serializes one document back to its JSONL form (entity token indices are
// converted back to character spans).
std::string corpus_line(const AnnotatedDocument& doc);

}  // namespace krrtext

#endif  // KRRTEXT_CORPUS_HPP_
