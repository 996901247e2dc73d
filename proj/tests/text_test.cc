// Copyright 2026 The TLA-Net Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "tla/csv.h"
#include "tla/errors.h"
#include "tla/text.h"

namespace tla {
namespace {

std::string from_hex(const std::string& hex) {
  std::string out;
  for (std::size_t i = 0; i + 1 < hex.size(); i += 2)
    out.push_back(static_cast<char>(std::stoi(hex.substr(i, 2), nullptr, 16)));
  return out;
}

nlohmann::json golden() {
  std::ifstream in(std::string(TLA_TEST_DIR) + "/golden/tokenizer.json");
  REQUIRE(in);
  return nlohmann::json::parse(in);
}

// Expected tokens come from tests/oracles/tokenizer_oracle.py.
TEST_CASE("tokenizer matches the reference implementation") {
  const auto g = golden();
  for (const auto& c : g["cases"]) {
    CAPTURE(c["hex"].get<std::string>());
    CHECK(tokenize(from_hex(c["hex"])) == c["tokens"].get<std::vector<std::string>>());
  }
}

TEST_CASE("vocabulary ranking and hash match the reference") {
  const auto g = golden();
  std::vector<std::vector<std::string>> corpus;
  for (const auto& c : g["cases"]) corpus.push_back(tokenize(from_hex(c["hex"])));
  const auto& v = g["vocab"];
  Vocabulary vocab = Vocabulary::build(corpus, v["max_size"], v["min_freq"]);
  CHECK(vocab.tokens() == v["tokens"].get<std::vector<std::string>>());
  CHECK(vocab.counts() == v["counts"].get<std::vector<std::size_t>>());
  CHECK(vocab.content_hash() == v["hash"].get<std::string>());
  CHECK(Vocabulary::from_tokens(vocab.tokens()) == vocab);
}

TEST_CASE("tokenizer small cases") {
  CHECK(tokenize("").empty());
  CHECK(tokenize("She is NOT ok.") == std::vector<std::string>{"she", "is", "not", "ok"});
}

TEST_CASE("vocabulary from a tiny corpus") {
  Vocabulary v = Vocabulary::build({tokenize("a a b")}, 100);
  CHECK(v.tokens() == std::vector<std::string>{"<pad>", "<unk>", "a", "b"});
  Vocabulary p1 = Vocabulary::build({{"x", "y"}, {"z", "y"}, {"w"}}, 100);
  Vocabulary p2 = Vocabulary::build({{"w"}, {"y", "z"}, {"y", "x"}}, 100);
  CHECK(p1 == p2);
  CHECK(p1.content_hash() == p2.content_hash());
}

TEST_CASE("vocabulary lookups") {
  Vocabulary vocab = Vocabulary::build({{"b", "a", "b"}, {"c", "a", "b"}}, 10, 2);
  CHECK(vocab.tokens() == std::vector<std::string>{"<pad>", "<unk>", "b", "a"});
  CHECK(vocab.id("c") == Vocabulary::kUnk);
  CHECK(vocab.id("a") == 3);
  CHECK_THROWS_AS(vocab.token(4), DomainError);
  CHECK_THROWS_AS(Vocabulary::build({}, 1), ConfigError);
  CHECK_THROWS_AS(Vocabulary::from_tokens({"a", "b"}), ArtifactError);
  CHECK_THROWS_AS(Vocabulary::from_tokens({"<pad>", "<unk>", "x", "x"}), ArtifactError);
}

TEST_CASE("encode, pad, truncate and decode") {
  Vocabulary vocab = Vocabulary::build({{"x", "y", "z"}}, 10);
  TokenIds ids = encode_and_pad(vocab, {"x", "q", "z"}, 5);
  CHECK(ids == TokenIds{vocab.id("x"), Vocabulary::kUnk, vocab.id("z"), 0, 0});
  CHECK(decode(vocab, ids) == std::vector<std::string>{"x", "<unk>", "z"});
  CHECK(encode_and_pad(vocab, {"x", "y", "z"}, 2).size() == 2);
  CHECK(encode_and_pad(vocab, {}, 3) == TokenIds{0, 0, 0});
  CHECK_THROWS_AS(encode_and_pad(vocab, {"x"}, 0), ConfigError);
}

TEST_CASE("labels and languages") {
  CHECK(parse_label("OAG") == Label::kOag);
  CHECK(label_name(Label::kCag) == "CAG");
  CHECK_THROWS_AS(parse_label("XAG"), ValidationError);
  CHECK_THROWS_AS(label_from_index(3), DomainError);
  CHECK(language_code(Language::kBangla) == "bn");
  CHECK(parse_language("hindi") == Language::kHindi);
  CHECK_THROWS_AS(parse_language("french"), ValidationError);
}

TEST_CASE("csv parsing") {
  auto recs = parse_csv("\xEF\xBB\xBF" "a,b\r\n\"x, y\",\"say \"\"hi\"\"\"\n\n\"multi\nline\",z");
  REQUIRE(recs.size() == 3);
  CHECK(recs[0].fields == std::vector<std::string>{"a", "b"});
  CHECK(recs[1].fields == std::vector<std::string>{"x, y", "say \"hi\""});
  CHECK(recs[2].fields == std::vector<std::string>{"multi\nline", "z"});
  CHECK(recs[2].line == 4);
  CHECK_THROWS_AS(parse_csv("a,\"open\n"), ParseError);
  CHECK(csv_join({"plain", "with,comma", "q\"uote"}) == "plain,\"with,comma\",\"q\"\"uote\"");
}

TEST_CASE("dataset loading") {
  const std::string csv =
      "id,text,label\n"
      "e1,\"Hello, there\",NAG\n"
      "e2,you idiot,OAG\n"
      "e3,sure genius,CAG\n";
  DatasetSplit s = parse_trac2(csv, "dev", Language::kHindi);
  REQUIRE(s.size() == 3);
  CHECK(s.counts == ClassCounts{1, 1, 1});
  CHECK(s.examples[0].text == "Hello, there");
  CHECK(s.examples[1].language == Language::kHindi);
  s.verify_counts();

  DatasetSplit again = parse_trac2(format_trac2(s), "dev");
  CHECK(again.examples == s.examples);

  try {
    parse_trac2("id,text,label\nq1,fine,NAG\nq7,bad,ZZZ\n", "train");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("line 3") != std::string::npos);
    CHECK(msg.find("q7") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_trac2("id,text,label\nq1,fine\n", "train"), ParseError);
  CHECK_THROWS_AS(parse_trac2("id,label\n", "train"), ParseError);
  CHECK_THROWS_AS(load_trac2("/nonexistent/train.csv"), IoError);

  s.counts[0] = 5;
  CHECK_THROWS_AS(s.verify_counts(), ValidationError);
}

TEST_CASE("stratified split") {
  std::vector<LabeledExample> ex;
  for (int i = 0; i < 30; ++i)
    ex.push_back({"id" + std::to_string(i), "t", label_from_index(i % 3)});
  DatasetSplit all = DatasetSplit::from_examples("all", ex);
  auto [train, dev] = stratified_split(all, 0.8, 5);
  CHECK(train.counts == ClassCounts{8, 8, 8});
  CHECK(dev.counts == ClassCounts{2, 2, 2});
  std::set<std::string> ids;
  for (const auto& e : train.examples) ids.insert(e.id);
  for (const auto& e : dev.examples) CHECK(ids.insert(e.id).second);
  CHECK(ids.size() == 30);

  auto [train2, dev2] = stratified_split(all, 0.8, 5);
  CHECK(train2.examples == train.examples);
  CHECK_THROWS_AS(stratified_split(all, 1.0, 5), ConfigError);
  DatasetSplit tiny = DatasetSplit::from_examples("tiny", {ex[0], ex[1], ex[2], ex[3]});
  CHECK_THROWS_AS(stratified_split(tiny, 0.5, 1), DomainError);
}

}  // namespace
}  // namespace tla
