#include "charwnn/features.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "charwnn/errors.hpp"
#include "charwnn/utf8.hpp"

namespace charwnn {

EmbeddingTable::EmbeddingTable(Vocabulary vocabulary, std::size_t dimension)
    : vocabulary_(std::move(vocabulary)),
      dimension_(dimension),
      values_(vocabulary_.size() * dimension, 0.0) {}

std::span<double> EmbeddingTable::column(int index) {
  if (index < 0 || static_cast<std::size_t>(index) >= size()) throw std::out_of_range("embedding column");
  return {values_.data() + static_cast<std::size_t>(index) * dimension_, dimension_};
}

std::span<const double> EmbeddingTable::column(int index) const {
  if (index < 0 || static_cast<std::size_t>(index) >= size()) throw std::out_of_range("embedding column");
  return {values_.data() + static_cast<std::size_t>(index) * dimension_, dimension_};
}

std::span<double> EmbeddingTable::add(std::string_view entry) {
  const int index = vocabulary_.add(entry);
  if (values_.size() < vocabulary_.size() * dimension_) values_.resize(vocabulary_.size() * dimension_, 0.0);
  return column(index);
}

double uniform_init_range(std::size_t vocab_size, std::size_t dimension) {
  return std::sqrt(6.0 / static_cast<double>(vocab_size + dimension));
}

void init_uniform(EmbeddingTable& table, Rng& rng) {
  if (table.size() == 0 || table.dimension() == 0) {
    throw std::invalid_argument("init_uniform needs a non-empty vocabulary and positive dimension");
  }
  const double r = uniform_init_range(table.size(), table.dimension());
  for (double& v : table.values()) v = rng.symmetric(r);
}

EmbeddingTable init_uniform(Vocabulary vocabulary, std::size_t dimension, Rng& rng) {
  EmbeddingTable table(std::move(vocabulary), dimension);
  init_uniform(table, rng);
  return table;
}

EmbeddingTable init_uniform(std::size_t vocab_size, std::size_t dimension, Rng& rng) {
  Vocabulary vocabulary;
  for (std::size_t i = 0; i < vocab_size; ++i) vocabulary.add(std::to_string(i));
  return init_uniform(std::move(vocabulary), dimension, rng);
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

double parse_double(std::string_view field, std::size_t line) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(value)) {
    throw DataError("invalid number '" + std::string(field) + "'", line);
  }
  return value;
}

std::size_t parse_size(std::string_view field, std::size_t line) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw DataError("invalid integer '" + std::string(field) + "'", line);
  }
  return value;
}

}  // namespace

EmbeddingTable load_word2vec_text(std::istream& in, Rng& rng) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("missing word2vec header", 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_ws(line);
  if (header.size() != 2) throw DataError("word2vec header must be 'count dim'", 1);
  const std::size_t count = parse_size(header[0], 1);
  const std::size_t dim = parse_size(header[1], 1);
  if (dim == 0) throw DataError("word2vec dimension must be positive", 1);

  Vocabulary vocabulary;
  std::vector<double> values;
  values.reserve((count + 2) * dim);
  std::size_t line_no = 1;
  while (vocabulary.size() < count && std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto fields = split_ws(line);
    if (fields.empty()) continue;
    if (fields.size() != dim + 1) {
      throw DataError("expected " + std::to_string(dim) + " values, got " + std::to_string(fields.size() - 1),
                      line_no);
    }
    if (vocabulary.contains(fields[0])) throw DataError("duplicate word '" + std::string(fields[0]) + "'", line_no);
    vocabulary.add(fields[0]);
    for (std::size_t k = 1; k <= dim; ++k) values.push_back(parse_double(fields[k], line_no));
  }
  if (vocabulary.size() != count) {
    throw DataError("header declares " + std::to_string(count) + " words, file has " +
                    std::to_string(vocabulary.size()));
  }
  vocabulary.add_reserved();
  const double r = uniform_init_range(vocabulary.size(), dim);
  for (std::size_t k = 0; k < 2 * dim; ++k) values.push_back(rng.symmetric(r));

  EmbeddingTable table(std::move(vocabulary), dim);
  table.values() = std::move(values);
  return table;
}

void save_word2vec_text(std::ostream& out, const EmbeddingTable& table) {
  const auto& vocabulary = table.vocabulary();
  std::size_t count = 0;
  for (int i = 0; i < static_cast<int>(table.size()); ++i) count += vocabulary.is_reserved(i) ? 0 : 1;
  out << count << ' ' << table.dimension() << '\n';
  char buf[32];
  for (int i = 0; i < static_cast<int>(table.size()); ++i) {
    if (vocabulary.is_reserved(i)) continue;
    out << vocabulary.entry(i);
    for (double v : table.column(i)) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << ' ' << buf;
    }
    out << '\n';
  }
}

Capitalization capitalization_class(std::string_view surface) {
  const std::u32string chars = utf8::decode(surface);
  std::size_t upper = 0;
  std::size_t lower = 0;
  for (char32_t c : chars) {
    if (utf8::is_upper(c)) {
      ++upper;
    } else if (utf8::is_lower(c)) {
      ++lower;
    }
  }
  if (upper == 0 && lower > 0) return Capitalization::AllLower;
  if (upper > 0 && lower == 0) return Capitalization::AllUpper;
  if (!chars.empty() && utf8::is_upper(chars.front()) && upper == 1) return Capitalization::FirstUpper;
  if (upper > 0) return Capitalization::ContainsUpper;
  return Capitalization::Other;
}

std::string_view capitalization_name(Capitalization c) {
  switch (c) {
    case Capitalization::AllLower: return "all_lower";
    case Capitalization::FirstUpper: return "first_upper";
    case Capitalization::AllUpper: return "all_upper";
    case Capitalization::ContainsUpper: return "contains_upper";
    case Capitalization::Other: return "other";
  }
  return "other";
}

std::string suffix_feature(std::string_view surface, std::size_t length) {
  const std::u32string chars = utf8::decode(normalize_word(surface));
  const std::size_t n = std::min(length, chars.size());
  return utf8::encode(std::u32string_view(chars).substr(chars.size() - n));
}

Vocabulary capitalization_vocabulary() {
  auto v = Vocabulary::with_reserved();
  for (auto c : {Capitalization::AllLower, Capitalization::FirstUpper, Capitalization::AllUpper,
                 Capitalization::ContainsUpper, Capitalization::Other}) {
    v.add(capitalization_name(c));
  }
  return v;
}

Vocabulary suffix_vocabulary(std::span<const LabeledSentence> corpus, std::size_t length) {
  auto v = Vocabulary::with_reserved();
  for (const auto& sentence : corpus) {
    for (const auto& token : sentence.tokens) v.add(suffix_feature(token.surface, length));
  }
  return v;
}

}  // namespace charwnn
