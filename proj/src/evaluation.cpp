#include "charwnn/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <set>
#include <sstream>

#include "charwnn/errors.hpp"

namespace charwnn {

double ChunkScores::precision() const {
  return predicted > 0 ? 100.0 * static_cast<double>(correct) / static_cast<double>(predicted) : 0.0;
}

double ChunkScores::recall() const {
  return gold > 0 ? 100.0 * static_cast<double>(correct) / static_cast<double>(gold) : 0.0;
}

double ChunkScores::f1() const {
  const double p = precision();
  const double r = recall();
  return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

double EvalReport::token_accuracy() const {
  return tokens > 0 ? 100.0 * static_cast<double>(correct_tokens) / static_cast<double>(tokens) : 0.0;
}

namespace {

void add_sentence(EvalReport& report, std::span<const std::string> gold, std::span<const std::string> predicted) {
  report.tokens += gold.size();
  for (std::size_t i = 0; i < gold.size(); ++i) report.correct_tokens += gold[i] == predicted[i] ? 1 : 0;
  const auto gold_spans = iob2_decode(gold);
  const auto pred_spans = iob2_decode(predicted);
  const std::set<Span> gold_set(gold_spans.begin(), gold_spans.end());
  for (const auto& s : gold_spans) {
    ++report.per_type[s.type].gold;
    ++report.overall.gold;
  }
  for (const auto& s : pred_spans) {
    auto& type = report.per_type[s.type];
    ++type.predicted;
    ++report.overall.predicted;
    if (gold_set.count(s)) {
      ++type.correct;
      ++report.overall.correct;
    }
  }
}

std::string shape_error(std::size_t index, std::size_t gold, std::size_t predicted) {
  return "sentence " + std::to_string(index) + ": gold has " + std::to_string(gold) + " tokens, prediction has " +
         std::to_string(predicted);
}

}  // namespace

EvalReport evaluate(std::span<const LabeledSentence> gold, std::span<const std::vector<std::string>> predicted) {
  if (gold.size() != predicted.size()) {
    throw DataError("gold has " + std::to_string(gold.size()) + " sentences, prediction has " +
                    std::to_string(predicted.size()));
  }
  EvalReport report;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].tags.size() != predicted[i].size()) throw DataError(shape_error(i, gold[i].tags.size(), predicted[i].size()));
    add_sentence(report, gold[i].tags, predicted[i]);
  }
  return report;
}

EvalReport evaluate(std::span<const std::vector<std::string>> gold, std::span<const std::vector<std::string>> predicted) {
  if (gold.size() != predicted.size()) {
    throw DataError("gold has " + std::to_string(gold.size()) + " sentences, prediction has " +
                    std::to_string(predicted.size()));
  }
  EvalReport report;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].size() != predicted[i].size()) throw DataError(shape_error(i, gold[i].size(), predicted[i].size()));
    add_sentence(report, gold[i], predicted[i]);
  }
  return report;
}

EvalReport evaluate_conlleval(std::istream& in, char separator) {
  EvalReport report;
  std::vector<std::string> gold;
  std::vector<std::string> predicted;
  auto flush = [&] {
    if (!gold.empty()) add_sentence(report, gold, predicted);
    gold.clear();
    predicted.clear();
  };
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    if (separator == ' ' || separator == '\t') {
      while (ls >> field) fields.push_back(field);
    } else {
      while (std::getline(ls, field, separator)) fields.push_back(field);
    }
    if (fields.empty() || fields.front() == "-X-") {
      flush();
      continue;
    }
    if (fields.size() < 3) throw DataError("expected 'token gold predicted'", line_no);
    try {
      parse_tag(fields[fields.size() - 2]);
      parse_tag(fields.back());
    } catch (const DataError& e) {
      throw DataError(e.what(), line_no);
    }
    gold.push_back(fields[fields.size() - 2]);
    predicted.push_back(fields.back());
  }
  flush();
  return report;
}

std::string format_report(const EvalReport& report) {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "processed %zu tokens with %zu phrases; found: %zu phrases; correct: %zu.\n",
                report.tokens, report.overall.gold, report.overall.predicted, report.overall.correct);
  out += buf;
  std::snprintf(buf, sizeof buf, "accuracy: %6.2f%%; precision: %6.2f%%; recall: %6.2f%%; FB1: %6.2f\n",
                report.token_accuracy(), report.overall.precision(), report.overall.recall(), report.overall.f1());
  out += buf;
  for (const auto& [type, s] : report.per_type) {
    std::snprintf(buf, sizeof buf, "%17s: precision: %6.2f%%; recall: %6.2f%%; FB1: %6.2f  %zu\n", type.c_str(),
                  s.precision(), s.recall(), s.f1(), s.predicted);
    out += buf;
  }
  return out;
}

namespace {

std::string prf(const ChunkScores& s) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%7.2f %7.2f %7.2f", s.precision(), s.recall(), s.f1());
  return buf;
}

std::string pad_right(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace

std::string report_table(std::span<const std::pair<std::string, EvalReport>> reports, TableMode mode) {
  if (reports.empty()) throw std::invalid_argument("report_table needs at least one report");
  std::ostringstream out;
  const std::string columns = "  Prec.    Rec.      F1";
  if (mode == TableMode::Overall) {
    std::size_t width = 6;
    for (const auto& [name, _] : reports) width = std::max(width, name.size());
    out << pad_right("System", width) << ' ' << columns << '\n';
    for (const auto& [name, report] : reports) out << pad_right(name, width) << ' ' << prf(report.overall) << '\n';
    return out.str();
  }

  std::set<std::string> types;
  for (const auto& [_, report] : reports) {
    for (const auto& [type, s] : report.per_type) types.insert(type);
  }
  std::size_t width = 7;
  for (const auto& t : types) width = std::max(width, t.size());
  const std::size_t group = columns.size();
  out << pad_right("Entity", width);
  for (const auto& [name, _] : reports) out << " | " << pad_right(name, group);
  out << '\n' << std::string(width, ' ');
  for (std::size_t i = 0; i < reports.size(); ++i) out << " | " << columns;
  out << '\n';
  for (const auto& type : types) {
    out << pad_right(type, width);
    for (const auto& [_, report] : reports) {
      const auto it = report.per_type.find(type);
      out << " | " << prf(it == report.per_type.end() ? ChunkScores{} : it->second);
    }
    out << '\n';
  }
  out << pad_right("Overall", width);
  for (const auto& [_, report] : reports) out << " | " << prf(report.overall);
  out << '\n';
  return out.str();
}

}  // namespace charwnn
