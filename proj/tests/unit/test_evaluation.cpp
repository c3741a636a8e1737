#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "charwnn/errors.hpp"
#include "charwnn/evaluation.hpp"

using namespace charwnn;

namespace {

std::vector<std::string> split(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

double round2(double v) { return std::round(v * 100.0) / 100.0; }

}  // namespace

TEST_SUITE("evaluation") {

TEST_CASE("two of three chunks correct") {
  const std::vector<std::vector<std::string>> gold = {split("B-PER O B-LOC O B-ORG")};
  const std::vector<std::vector<std::string>> pred = {split("B-PER O B-LOC O B-LOC")};
  const auto r = evaluate(gold, pred);
  CHECK(r.overall.gold == 3);
  CHECK(r.overall.predicted == 3);
  CHECK(r.overall.correct == 2);
  CHECK(round2(r.overall.precision()) == 66.67);
  CHECK(round2(r.overall.recall()) == 66.67);
  CHECK(round2(r.overall.f1()) == 66.67);
  CHECK(r.per_type.at("ORG").predicted == 0);
  CHECK(r.per_type.at("LOC").predicted == 2);
}

TEST_CASE("boundary errors are not partial credit") {
  const std::vector<std::vector<std::string>> gold = {split("B-ORG I-ORG I-ORG O")};
  const std::vector<std::vector<std::string>> pred = {split("B-ORG I-ORG O O")};
  const auto r = evaluate(gold, pred);
  CHECK(r.overall.correct == 0);
  CHECK(r.overall.f1() == 0.0);
  CHECK(r.tokens == 4);
  CHECK(r.correct_tokens == 3);
}

TEST_CASE("nothing predicted gives zero precision") {
  const std::vector<std::vector<std::string>> gold = {split("B-PER O")};
  const std::vector<std::vector<std::string>> pred = {split("O O")};
  const auto r = evaluate(gold, pred);
  CHECK(r.overall.precision() == 0.0);
  CHECK(r.overall.recall() == 0.0);
  CHECK(r.overall.f1() == 0.0);
}

TEST_CASE("length mismatch names the sentence") {
  const std::vector<std::vector<std::string>> gold = {split("O"), split("O O")};
  const std::vector<std::vector<std::string>> pred = {split("O"), split("O")};
  try {
    evaluate(gold, pred);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("sentence 1") != std::string::npos);
  }
}

TEST_CASE("perfect prediction scores 100") {
  const std::vector<std::vector<std::string>> gold = {split("B-MISC I-MISC O B-PER")};
  const auto r = evaluate(gold, gold);
  CHECK(r.overall.f1() == 100.0);
  CHECK(r.token_accuracy() == 100.0);
}

TEST_CASE("conlleval input with boundary lines") {
  std::istringstream in("a B-PER B-PER\nb I-PER I-PER\n-X- O O\nc B-LOC O\n");
  const auto r = evaluate_conlleval(in);
  CHECK(r.overall.gold == 2);
  CHECK(r.overall.predicted == 1);
  CHECK(r.overall.correct == 1);
  CHECK(r.tokens == 3);
}

TEST_CASE("agrees with the reference scorer on the fixture suite") {
  const std::filesystem::path dir = std::filesystem::path(CHARWNN_TEST_DATA) / "conlleval";
  std::ifstream ef(dir / "expected.json");
  REQUIRE(ef);
  const auto expected = nlohmann::json::parse(ef);
  REQUIRE(expected.size() >= 20);
  for (const auto& [name, e] : expected.items()) {
    CAPTURE(name);
    std::ifstream in(dir / (name + ".txt"));
    REQUIRE(in);
    const auto r = evaluate_conlleval(in);
    CHECK(r.overall.gold == e["gold"].get<std::size_t>());
    CHECK(r.overall.predicted == e["predicted"].get<std::size_t>());
    CHECK(r.overall.correct == e["correct"].get<std::size_t>());
    CHECK(r.tokens == e["tokens"].get<std::size_t>());
    CHECK(r.correct_tokens == e["correct_tokens"].get<std::size_t>());
    CHECK(round2(r.overall.precision()) == e["prf"][0].get<double>());
    CHECK(round2(r.overall.recall()) == e["prf"][1].get<double>());
    CHECK(round2(r.overall.f1()) == e["prf"][2].get<double>());
    for (const auto& [type, te] : e["types"].items()) {
      CAPTURE(type);
      REQUIRE(r.per_type.count(type) == 1);
      const auto& s = r.per_type.at(type);
      CHECK(s.gold == te["gold"].get<std::size_t>());
      CHECK(s.predicted == te["predicted"].get<std::size_t>());
      CHECK(s.correct == te["correct"].get<std::size_t>());
      CHECK(round2(s.f1()) == te["prf"][2].get<double>());
    }
  }
}

TEST_CASE("report text has conlleval's summary line") {
  const std::vector<std::vector<std::string>> gold = {split("B-PER O B-LOC O B-ORG")};
  const std::vector<std::vector<std::string>> pred = {split("B-PER O B-LOC O B-LOC")};
  const auto text = format_report(evaluate(gold, pred));
  CHECK(text.find("processed 5 tokens with 3 phrases; found: 3 phrases; correct: 2.") != std::string::npos);
  CHECK(text.find("FB1:  66.67") != std::string::npos);
  const std::pair<std::string, EvalReport> rows[] = {{"sys", evaluate(gold, pred)}};
  const auto table = report_table(rows, TableMode::Overall);
  CHECK(table.find("66.67") != std::string::npos);
}

}
