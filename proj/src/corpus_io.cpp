#include "charwnn/corpus_io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>

#include "charwnn/errors.hpp"
#include "charwnn/utf8.hpp"

namespace charwnn {

std::string normalize_word(std::string_view surface) {
  std::u32string chars = utf8::decode(surface);
  for (char32_t& c : chars) {
    if (c >= U'0' && c <= U'9') {
      c = U'0';
    } else {
      c = utf8::to_lower(c);
    }
  }
  return utf8::encode(chars);
}

std::string replace_non_roman(std::string_view text, char32_t substitute) {
  std::u32string chars = utf8::decode(text);
  for (char32_t& c : chars) {
    const bool roman = c < 0x250 || (c >= 0x1E00 && c <= 0x1EFF) || (c >= 0x2000 && c <= 0x206F);
    if (!roman) c = substitute;
  }
  return utf8::encode(chars);
}

Token::Token(std::string surface_form)
    : surface(std::move(surface_form)), normalized(normalize_word(surface)) {}

LabeledSentence make_sentence(std::span<const std::string> words, std::span<const std::string> tags) {
  if (words.size() != tags.size()) throw std::invalid_argument("word and tag counts differ");
  LabeledSentence s;
  for (const auto& w : words) s.tokens.emplace_back(w);
  s.tags.assign(tags.begin(), tags.end());
  return s;
}

// --- Vocabulary -------------------------------------------------------------

Vocabulary Vocabulary::with_reserved() {
  Vocabulary v;
  v.add_reserved();
  return v;
}

Vocabulary Vocabulary::from_entries(std::vector<std::string> entries, int padding, int unknown) {
  Vocabulary v;
  const int n = static_cast<int>(entries.size());
  if (padding >= n || unknown >= n || (padding >= 0) != (unknown >= 0) ||
      (padding >= 0 && padding == unknown)) {
    throw DataError("invalid reserved vocabulary indices");
  }
  v.entries_ = std::move(entries);
  v.padding_ = padding;
  v.unknown_ = unknown;
  for (int i = 0; i < n; ++i) {
    if (v.is_reserved(i)) continue;
    if (!v.lookup_.emplace(v.entries_[static_cast<std::size_t>(i)], i).second) {
      throw DataError("duplicate vocabulary entry '" + v.entries_[static_cast<std::size_t>(i)] + "'");
    }
  }
  return v;
}

void Vocabulary::add_reserved() {
  if (has_reserved()) throw std::logic_error("vocabulary already has reserved entries");
  padding_ = static_cast<int>(entries_.size());
  entries_.emplace_back(kPaddingName);
  unknown_ = static_cast<int>(entries_.size());
  entries_.emplace_back(kUnknownName);
}

int Vocabulary::add(std::string_view entry) {
  const auto [it, inserted] = lookup_.emplace(std::string(entry), static_cast<int>(entries_.size()));
  if (inserted) entries_.emplace_back(entry);
  return it->second;
}

std::optional<int> Vocabulary::find(std::string_view entry) const {
  const auto it = lookup_.find(std::string(entry));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

int Vocabulary::index(std::string_view entry) const {
  if (auto found = find(entry)) return *found;
  if (unknown_ < 0) throw std::out_of_range("entry not in vocabulary: " + std::string(entry));
  return unknown_;
}

// --- TagSet -----------------------------------------------------------------

std::pair<char, std::string> parse_tag(std::string_view tag) {
  if (tag == "O") return {'O', {}};
  if (tag.size() > 2 && (tag[0] == 'B' || tag[0] == 'I') && tag[1] == '-') {
    return {tag[0], std::string(tag.substr(2))};
  }
  throw DataError("not an IOB2 tag: '" + std::string(tag) + "'");
}

TagSet::TagSet() : TagSet(std::vector<std::string>{"O"}) {}

TagSet::TagSet(std::vector<std::string> tags) : tags_(std::move(tags)) {
  std::set<std::string> types_with_begin;
  for (int i = 0; i < static_cast<int>(tags_.size()); ++i) {
    const auto& t = tags_[static_cast<std::size_t>(i)];
    const auto [prefix, type] = parse_tag(t);
    if (prefix == 'B') types_with_begin.insert(type);
    if (!lookup_.emplace(t, i).second) throw DataError("duplicate tag '" + t + "'");
  }
  if (!lookup_.count("O")) throw DataError("tag set lacks O");
  for (const auto& t : tags_) {
    const auto [prefix, type] = parse_tag(t);
    if (prefix == 'I' && !types_with_begin.count(type)) {
      throw DataError("tag set has I-" + type + " without B-" + type);
    }
  }
}

TagSet TagSet::from_tags(std::span<const std::string> observed) {
  std::map<std::string, std::pair<bool, bool>> types;  // type -> (has B, has I)
  for (const auto& t : observed) {
    const auto [prefix, type] = parse_tag(t);
    if (prefix == 'O') continue;
    auto& flags = types[type];
    flags.first = true;  // B-X is always included
    if (prefix == 'I') flags.second = true;
  }
  std::vector<std::string> tags{"O"};
  for (const auto& [type, flags] : types) {
    tags.push_back("B-" + type);
    if (flags.second) tags.push_back("I-" + type);
  }
  return TagSet(std::move(tags));
}

std::optional<int> TagSet::find(std::string_view tag) const {
  const auto it = lookup_.find(std::string(tag));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

int TagSet::index(std::string_view tag) const {
  if (auto found = find(tag)) return *found;
  throw DataError("tag not in tag set: '" + std::string(tag) + "'");
}

// --- CoNLL column format ----------------------------------------------------

namespace {

std::vector<std::string_view> split_fields(std::string_view line, char separator) {
  std::vector<std::string_view> fields;
  const bool whitespace = separator == ' ' || separator == '\t';
  std::size_t i = 0;
  while (i <= line.size()) {
    std::size_t j = i;
    if (whitespace) {
      while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
      if (j > i) fields.push_back(line.substr(i, j - i));
      while (j < line.size() && (line[j] == ' ' || line[j] == '\t')) ++j;
      if (j == line.size()) break;
      i = j;
    } else {
      while (j < line.size() && line[j] != separator) ++j;
      fields.push_back(line.substr(i, j - i));
      i = j + 1;
    }
  }
  return fields;
}

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](char c) { return c == ' ' || c == '\t'; });
}

}  // namespace

std::vector<LabeledSentence> read_conll(std::istream& in, const ConllOptions& options) {
  std::vector<LabeledSentence> corpus;
  LabeledSentence current;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_blank(line)) {
      if (!current.tokens.empty()) corpus.push_back(std::move(current));
      current = {};
      continue;
    }
    const auto fields = split_fields(line, options.separator);
    if (fields.size() < 2 && (options.require_tags || fields.empty())) {
      throw DataError("expected 'token" + std::string(1, options.separator) + "tag', got " +
                          std::to_string(fields.size()) + " column(s)",
                      line_no);
    }
    if (fields.front().empty()) throw DataError("empty token", line_no);
    current.tokens.emplace_back(std::string(fields.front()));
    current.tags.emplace_back(fields.size() >= 2 ? std::string(fields.back()) : std::string());
  }
  if (!current.tokens.empty()) corpus.push_back(std::move(current));
  return corpus;
}

std::vector<LabeledSentence> read_conll_file(const std::filesystem::path& path,
                                             const ConllOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return read_conll(in, options);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_conll(std::ostream& out, std::span<const LabeledSentence> corpus, char separator) {
  for (const auto& sentence : corpus) {
    for (std::size_t i = 0; i < sentence.size(); ++i) {
      out << sentence.tokens[i].surface;
      if (!sentence.tags[i].empty()) out << separator << sentence.tags[i];
      out << '\n';
    }
    out << '\n';
  }
}

// --- IOB2 -------------------------------------------------------------------

std::vector<Span> iob2_decode(std::span<const std::string> tags) {
  std::vector<Span> spans;
  std::optional<Span> open;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    const auto [prefix, type] = parse_tag(tags[i]);
    const bool continues = prefix == 'I' && open && open->type == type;
    if (continues) {
      open->end = i;
      continue;
    }
    if (open) spans.push_back(std::move(*open));
    open.reset();
    if (prefix != 'O') open = Span{type, i, i};
  }
  if (open) spans.push_back(std::move(*open));
  return spans;
}

std::vector<std::string> iob2_encode(std::span<const Span> spans, std::size_t length) {
  std::vector<std::string> tags(length, "O");
  std::vector<bool> used(length, false);
  for (const auto& s : spans) {
    if (s.start > s.end || s.end >= length) {
      throw std::invalid_argument("span out of range: " + s.type + "[" + std::to_string(s.start) +
                                  "," + std::to_string(s.end) + "]");
    }
    for (std::size_t i = s.start; i <= s.end; ++i) {
      if (used[i]) throw std::invalid_argument("overlapping spans at token " + std::to_string(i));
      used[i] = true;
      tags[i] = (i == s.start ? "B-" : "I-") + s.type;
    }
  }
  return tags;
}

// --- Vocabularies -----------------------------------------------------------

Vocabularies build_vocabularies(std::span<const LabeledSentence> corpus, const Vocabulary* pretrained) {
  Vocabularies v;
  v.words = pretrained ? *pretrained : Vocabulary::with_reserved();
  if (!v.words.has_reserved()) v.words.add_reserved();
  v.chars = Vocabulary::with_reserved();
  std::vector<std::string> observed_tags;
  for (const auto& sentence : corpus) {
    for (const auto& token : sentence.tokens) {
      v.words.add(token.normalized);
      for (char32_t c : utf8::decode(token.surface)) v.chars.add(utf8::encode(c));
    }
    observed_tags.insert(observed_tags.end(), sentence.tags.begin(), sentence.tags.end());
  }
  v.tags = TagSet::from_tags(observed_tags);
  return v;
}

std::pair<std::vector<LabeledSentence>, std::vector<LabeledSentence>> split_dev(
    std::span<const LabeledSentence> corpus, std::size_t stride) {
  if (stride == 0) throw std::invalid_argument("stride must be positive");
  std::pair<std::vector<LabeledSentence>, std::vector<LabeledSentence>> out;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    ((i + 1) % stride == 0 ? out.second : out.first).push_back(corpus[i]);
  }
  return out;
}

}  // namespace charwnn
