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

#include <fstream>
#include <sstream>

#include <doctest.h>

#include "krrtext/corpus.hpp"
#include "krrtext/errors.hpp"
#include "krrtext/rng.hpp"

using namespace krrtext;

TEST_CASE("alphabet is the 94 printable ASCII characters") {
  const CharAlphabet& alphabet = CharAlphabet::printable_ascii();
  CHECK(alphabet.k() == 94);
  CHECK(alphabet.contains('!'));
  CHECK(alphabet.contains('~'));
  CHECK(alphabet.contains('/'));
  CHECK_FALSE(alphabet.contains(' '));
  CHECK_FALSE(alphabet.contains('\t'));
  CHECK_FALSE(alphabet.contains('\n'));
  CHECK(alphabet.index_of('!') == 0);
  CHECK(alphabet.index_of('~') == 93);
  CHECK(alphabet.char_at(alphabet.index_of('a')) == 'a');
  CHECK_THROWS_AS(alphabet.index_of(' '), ParameterError);
  CHECK_THROWS_AS(CharAlphabet::from_characters("ab a"), ParameterError);
  CHECK_THROWS_AS(CharAlphabet::from_characters("aba"), ParameterError);
}

TEST_CASE("custom alphabet loads from a file") {
  const std::string path = "test_alphabet.txt";
  {
    std::ofstream out(path, std::ios::binary);
    out << "abc123\n";
  }
  const CharAlphabet custom = CharAlphabet::from_file(path);
  CHECK(custom.k() == 6);
  CHECK(custom.contains('1'));
  CHECK_FALSE(custom.contains('z'));
  std::remove(path.c_str());
  CHECK_THROWS_AS(CharAlphabet::from_file("no_such_alphabet.txt"), IoError);
}

TEST_CASE("tokenize splits on spaces only") {
  CHECK(tokenize("").empty());

  auto two = tokenize("Please call");
  REQUIRE(two.size() == 2);
  CHECK(two[0] == Token{"Please", 0});
  CHECK(two[0].length() == 6);
  CHECK(two[1] == Token{"call", 7});
  CHECK(two[1].length() == 4);

  // punctuation stays inside the token
  auto one = tokenize("cbrr/MpondenXe");
  REQUIRE(one.size() == 1);
  CHECK(one[0].length() == 14);

  auto padded = tokenize("  a  bb ");
  REQUIRE(padded.size() == 2);
  CHECK(padded[0] == Token{"a", 2});
  CHECK(padded[1] == Token{"bb", 5});
}

TEST_CASE("detokenize round-trips arbitrary printable text") {
  Xoshiro256StarStar rng(20260101);
  const CharAlphabet& alphabet = CharAlphabet::printable_ascii();
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    const std::size_t length = rng.uniform_below(120);
    for (std::size_t i = 0; i < length; ++i) {
      // printable ASCII plus space, space-heavy to hit runs of separators
      if (rng.bernoulli(0.25)) {
        text.push_back(' ');
      } else {
        text.push_back(
            alphabet.char_at(static_cast<int>(rng.uniform_below(94))));
      }
    }
    CHECK(detokenize(text, tokenize(text)) == text);
  }
}

TEST_CASE("non-alphabet characters are preserved and counted") {
  AnnotatedDocument doc = AnnotatedDocument::from_text("d", "a\tb caf\xc3\xa9");
  // tab inside the first token, two UTF-8 bytes in the second
  CHECK(doc.tokens.size() == 2);
  CHECK(doc.non_alphabet_count == 3);
  CHECK(detokenize(doc.raw_text, doc.tokens) == doc.raw_text);
}

TEST_CASE("word length histogram") {
  auto histogram_of = [](const std::string& text) {
    return word_length_histogram(AnnotatedDocument::from_text("d", text));
  };
  CHECK(histogram_of("ab cd") == std::map<std::size_t, std::size_t>{{2, 2}});
  CHECK(histogram_of("a bb bb") ==
        std::map<std::size_t, std::size_t>{{1, 1}, {2, 2}});
  CHECK(histogram_of("Please call a doctor") ==
        std::map<std::size_t, std::size_t>{{6, 2}, {4, 1}, {1, 1}});
}

TEST_CASE("corpus loads entities as token indices") {
  std::istringstream in(
      R"({"id":"d1","text":"Harlan was seen","entities":[{"start":0,"end":6,"category":"NAME","entity_id":"n1"}]})"
      "\n");
  Corpus corpus = load_corpus_stream(in, "test", {});
  REQUIRE(corpus.documents.size() == 1);
  const AnnotatedDocument& doc = corpus.documents[0];
  CHECK(doc.tokens.size() == 3);
  REQUIRE(doc.entities.size() == 1);
  CHECK(doc.entities[0].token_indices == std::vector<std::size_t>{0});
  CHECK(doc.entities[0].category == "NAME");
}

TEST_CASE("multi-word entity covers all its tokens") {
  std::istringstream in(
      R"({"id":"d1","text":"He lives at 50 Indian Rock Road now","entities":[{"start":12,"end":31,"category":"LOCATION-STREET","entity_id":"a1"}]})"
      "\n");
  Corpus corpus = load_corpus_stream(in, "test", {});
  REQUIRE(corpus.documents.size() == 1);
  const EntityAnnotation& entity = corpus.documents[0].entities[0];
  CHECK(entity.token_indices == std::vector<std::size_t>{3, 4, 5, 6});
  CHECK(entity.entity_id == "a1");
}

TEST_CASE("malformed JSON names the line number") {
  std::istringstream in("{\"id\":\"d1\",\"text\":\"ok\"}\n{oops\n");
  CHECK_THROWS_WITH_AS(load_corpus_stream(in, "test", {}),
                       doctest::Contains("line 2"), ValidationError);
}

TEST_CASE("duplicate document ids are rejected") {
  std::istringstream in(
      "{\"id\":\"d1\",\"text\":\"one\"}\n{\"id\":\"d1\",\"text\":\"two\"}\n");
  CHECK_THROWS_WITH_AS(load_corpus_stream(in, "test", {}),
                       doctest::Contains("duplicate document id"),
                       ValidationError);
}

TEST_CASE("span starting mid-token is a strict-mode error") {
  // span starts inside "Harlan"
  const std::string line =
      R"({"id":"d1","text":"Harlan was seen","entities":[{"start":2,"end":6,"category":"NAME"}]})";

  LoadOptions strict;
  strict.strict = true;
  std::vector<std::string> warnings;
  CHECK_THROWS_AS(parse_corpus_line(line, 1, strict, &warnings),
                  ValidationError);

  // lenient mode clips to the overlapping token and warns
  AnnotatedDocument doc = parse_corpus_line(line, 1, {}, &warnings);
  REQUIRE(doc.entities.size() == 1);
  CHECK(doc.entities[0].token_indices == std::vector<std::size_t>{0});
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("clipped") != std::string::npos);
}

TEST_CASE("strict mode rejects non-alphabet characters") {
  const std::string line = R"({"id":"d1","text":"tab\there"})";
  LoadOptions strict;
  strict.strict = true;
  CHECK_THROWS_AS(parse_corpus_line(line, 1, strict, nullptr), ValidationError);
  AnnotatedDocument doc = parse_corpus_line(line, 1, {}, nullptr);
  CHECK(doc.non_alphabet_count == 1);
}

TEST_CASE("overlapping entities of one category are rejected") {
  const std::string line =
      R"({"id":"d1","text":"Ann Lee here","entities":[)"
      R"({"start":0,"end":7,"category":"NAME","entity_id":"n1"},)"
      R"({"start":4,"end":7,"category":"NAME","entity_id":"n2"}]})";
  CHECK_THROWS_AS(parse_corpus_line(line, 1, {}, nullptr), ValidationError);

  // the same span under a different category is fine
  const std::string ok =
      R"({"id":"d1","text":"Ann Lee here","entities":[)"
      R"({"start":0,"end":7,"category":"NAME","entity_id":"n1"},)"
      R"({"start":4,"end":7,"category":"ALIAS","entity_id":"n2"}]})";
  CHECK_NOTHROW(parse_corpus_line(ok, 1, {}, nullptr));
}

TEST_CASE("generated documents validate and round-trip through JSONL") {
  Xoshiro256StarStar rng(424242);
  const CharAlphabet& alphabet = CharAlphabet::printable_ascii();
  for (int trial = 0; trial < 60; ++trial) {
    std::string text;
    const int token_count = 1 + static_cast<int>(rng.uniform_below(12));
    for (int t = 0; t < token_count; ++t) {
      if (t > 0) {
        text.append(1 + rng.uniform_below(2), ' ');
      }
      const std::size_t length = 1 + rng.uniform_below(9);
      for (std::size_t i = 0; i < length; ++i) {
        text.push_back(
            alphabet.char_at(static_cast<int>(rng.uniform_below(94))));
      }
    }
    AnnotatedDocument doc =
        AnnotatedDocument::from_text("gen-" + std::to_string(trial), text);
    // annotate a random token as an entity
    if (!doc.tokens.empty() && rng.bernoulli(0.7)) {
      const std::size_t index = rng.uniform_below(doc.tokens.size());
      doc.entities.push_back(EntityAnnotation{{index}, "NAME", "e0"});
    }
    CHECK_NOTHROW(doc.validate());

    std::istringstream in(corpus_line(doc) + "\n");
    Corpus reloaded = load_corpus_stream(in, "roundtrip", {});
    REQUIRE(reloaded.documents.size() == 1);
    CHECK(reloaded.documents[0].raw_text == doc.raw_text);
    CHECK(reloaded.documents[0].tokens.size() == doc.tokens.size());
    CHECK(reloaded.documents[0].entities.size() == doc.entities.size());
  }
}
