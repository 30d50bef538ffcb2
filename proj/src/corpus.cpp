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

#include "krrtext/corpus.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "krrtext/errors.hpp"

namespace krrtext {

namespace {

using nlohmann::json;

// Maps a character span [start, end) to token indices. Strict mode requires
// the span to start on a token start and end on a token end; lenient mode
// takes every overlapping token.
std::vector<std::size_t> span_to_token_indices(
    const AnnotatedDocument& doc, std::size_t start, std::size_t end,
    bool strict, const std::string& category,
    std::vector<std::string>* warnings) {
  auto span_label = [&] {
    std::ostringstream os;
    os << "document " << doc.id << " span [" << start << "," << end << ") "
       << category;
    return os.str();
  };
  if (start >= end || end > doc.raw_text.size()) {
    throw ValidationError(span_label() + ": span out of range");
  }

  std::vector<std::size_t> indices;
  bool clipped = false;
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    const Token& token = doc.tokens[i];
    std::size_t token_start = token.start_offset;
    std::size_t token_end = token.start_offset + token.length();
    if (token_end <= start || token_start >= end) continue;
    indices.push_back(i);
    if (token_start < start || token_end > end) clipped = true;
  }
  if (indices.empty()) {
    throw ValidationError(span_label() + ": no overlapping tokens");
  }
  bool boundary_aligned =
      !clipped && doc.tokens[indices.front()].start_offset == start &&
      doc.tokens[indices.back()].start_offset +
              doc.tokens[indices.back()].length() ==
          end;
  if (!boundary_aligned) {
    if (strict) {
      throw ValidationError(span_label() +
                            ": span not aligned to token boundaries");
    }
    if (warnings != nullptr) {
      warnings->push_back(span_label() + ": clipped to overlapping tokens");
    }
  }
  return indices;
}

}  // namespace

AnnotatedDocument parse_corpus_line(const std::string& line,
                                    std::size_t line_number,
                                    const LoadOptions& options,
                                    std::vector<std::string>* warnings) {
  json object;
  try {
    object = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ValidationError("line " + std::to_string(line_number) +
                          ": malformed JSON: " + e.what());
  }
  if (!object.is_object() || !object.contains("id") ||
      !object.contains("text")) {
    throw ValidationError("line " + std::to_string(line_number) +
                          ": expected an object with \"id\" and \"text\"");
  }

  AnnotatedDocument doc = AnnotatedDocument::from_text(
      object.at("id").get<std::string>(), object.at("text").get<std::string>());

  if (doc.non_alphabet_count > 0) {
    std::string note = "document " + doc.id + ": " +
                       std::to_string(doc.non_alphabet_count) +
                       " non-alphabet character(s) pass through unperturbed";
    if (options.strict) {
      throw ValidationError(note + " (strict mode)");
    }
    if (warnings != nullptr) warnings->push_back(note);
  }

  std::size_t auto_entity = 0;
  for (const json& entry : object.value("entities", json::array())) {
    if (!entry.contains("start") || !entry.contains("end") ||
        !entry.contains("category")) {
      throw ValidationError("line " + std::to_string(line_number) +
                            ": entity needs start, end and category");
    }
    EntityAnnotation entity;
    entity.category = entry.at("category").get<std::string>();
    entity.entity_id = entry.contains("entity_id")
                           ? entry.at("entity_id").get<std::string>()
                           : doc.id + "#" + std::to_string(auto_entity);
    entity.token_indices = span_to_token_indices(
        doc, entry.at("start").get<std::size_t>(),
        entry.at("end").get<std::size_t>(), options.strict, entity.category,
        warnings);
    doc.entities.push_back(std::move(entity));
    ++auto_entity;
  }

  doc.validate();
  return doc;
}

Corpus load_corpus_stream(std::istream& in, const std::string& source_name,
                          const LoadOptions& options) {
  Corpus corpus;
  std::set<std::string> seen_ids;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      corpus.documents.push_back(
          parse_corpus_line(line, line_number, options, &corpus.warnings));
      // duplicate ids would alias RNG substreams and evaluation keys
      if (!seen_ids.insert(corpus.documents.back().id).second) {
        throw ValidationError("line " + std::to_string(line_number) +
                              ": duplicate document id " +
                              corpus.documents.back().id);
      }
    } catch (const ValidationError& e) {
      throw ValidationError(source_name + ": " + e.what());
    }
  }
  return corpus;
}

Corpus load_corpus(const std::string& path, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open corpus file: " + path);
  return load_corpus_stream(in, path, options);
}

std::string corpus_line(const AnnotatedDocument& doc) {
  json object;
  object["id"] = doc.id;
  object["text"] = doc.raw_text;
  json entities = json::array();
  for (const EntityAnnotation& entity : doc.entities) {
    const Token& first = doc.tokens[entity.token_indices.front()];
    const Token& last = doc.tokens[entity.token_indices.back()];
    entities.push_back({{"start", first.start_offset},
                        {"end", last.start_offset + last.length()},
                        {"category", entity.category},
                        {"entity_id", entity.entity_id}});
  }
  object["entities"] = std::move(entities);
  return object.dump();
}

void save_corpus(const std::string& path,
                 const std::vector<AnnotatedDocument>& documents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output file: " + path);
  for (const AnnotatedDocument& doc : documents) {
    out << corpus_line(doc) << '\n';
  }
  if (!out) throw IoError("failed writing corpus file: " + path);
}

}  // namespace krrtext
