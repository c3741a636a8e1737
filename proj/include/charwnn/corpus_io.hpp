#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace charwnn {

// Lowercases and replaces every decimal digit by '0'. Idempotent and
// length-preserving in code points.
std::string normalize_word(std::string_view surface);

// Replaces every character outside the Latin script ranges (U+0000-U+024F,
// U+1E00-U+1EFF) and general punctuation (U+2000-U+206F) by `substitute`.
std::string replace_non_roman(std::string_view text, char32_t substitute = U'#');

struct Token {
  Token() = default;
  explicit Token(std::string surface_form);

  std::string surface;
  std::string normalized;
};

struct LabeledSentence {
  std::vector<Token> tokens;
  std::vector<std::string> tags;

  std::size_t size() const { return tokens.size(); }
};

LabeledSentence make_sentence(std::span<const std::string> words, std::span<const std::string> tags);

// A chunk [start, end] (0-based, inclusive) of the given entity type.
struct Span {
  std::string type;
  std::size_t start = 0;
  std::size_t end = 0;

  auto operator<=>(const Span&) const = default;
};

// Dense string -> index mapping with optional reserved PADDING/UNKNOWN
// entries. Reserved entries are not reachable through lookup by text, so a
// corpus word spelled like the reserved display names stays distinct.
class Vocabulary {
 public:
  static constexpr std::string_view kPaddingName = "<PAD>";
  static constexpr std::string_view kUnknownName = "<UNK>";

  Vocabulary() = default;

  // PADDING at index 0, UNKNOWN at index 1.
  static Vocabulary with_reserved();
  static Vocabulary from_entries(std::vector<std::string> entries, int padding, int unknown);

  // Appends the PADDING and UNKNOWN entries. Throws if already present.
  void add_reserved();

  int add(std::string_view entry);
  std::optional<int> find(std::string_view entry) const;
  bool contains(std::string_view entry) const { return find(entry).has_value(); }

  // Index of the entry, or UNKNOWN's index when absent.
  int index(std::string_view entry) const;

  const std::string& entry(int index) const { return entries_.at(static_cast<std::size_t>(index)); }
  const std::vector<std::string>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  int padding() const { return padding_; }
  int unknown() const { return unknown_; }
  bool has_reserved() const { return padding_ >= 0; }
  bool is_reserved(int index) const { return index == padding_ || index == unknown_; }

  bool operator==(const Vocabulary& other) const {
    return entries_ == other.entries_ && padding_ == other.padding_ && unknown_ == other.unknown_;
  }

 private:
  std::vector<std::string> entries_;
  std::unordered_map<std::string, int> lookup_;
  int padding_ = -1;
  int unknown_ = -1;
};

// Ordered set of IOB2 tags. Always contains "O"; B-X is present for every I-X.
class TagSet {
 public:
  TagSet();
  explicit TagSet(std::vector<std::string> tags);

  // Tags in canonical order: O, then for each type (sorted) B-X, I-X.
  static TagSet from_tags(std::span<const std::string> observed);

  int index(std::string_view tag) const;
  std::optional<int> find(std::string_view tag) const;
  const std::string& tag(int index) const { return tags_.at(static_cast<std::size_t>(index)); }
  const std::vector<std::string>& tags() const { return tags_; }
  std::size_t size() const { return tags_.size(); }

  bool operator==(const TagSet& other) const { return tags_ == other.tags_; }

 private:
  std::vector<std::string> tags_;
  std::unordered_map<std::string, int> lookup_;
};

// Splits "B-PER" into ('B', "PER"); "O" into ('O', ""). Throws DataError for
// anything that is not O, B-X or I-X.
std::pair<char, std::string> parse_tag(std::string_view tag);

struct ConllOptions {
  char separator = ' ';
  // When false, single-column lines are accepted and the tag is left empty.
  bool require_tags = true;
};

std::vector<LabeledSentence> read_conll(std::istream& in, const ConllOptions& options = {});
std::vector<LabeledSentence> read_conll_file(const std::filesystem::path& path,
                                             const ConllOptions& options = {});
void write_conll(std::ostream& out, std::span<const LabeledSentence> corpus, char separator = ' ');

// Maximal chunks in order of start position. I-X after O or after a chunk of
// another type starts a new chunk, as conlleval does.
std::vector<Span> iob2_decode(std::span<const std::string> tags);
std::vector<std::string> iob2_encode(std::span<const Span> spans, std::size_t length);

struct Vocabularies {
  Vocabulary words;
  Vocabulary chars;
  TagSet tags;
};

// Words are keyed by normalized form, characters by surface form.
Vocabularies build_vocabularies(std::span<const LabeledSentence> corpus,
                                const Vocabulary* pretrained = nullptr);

// Deterministic development split: every `stride`-th sentence (indices
// stride-1, 2*stride-1, ...) goes to the second half. stride 20 gives 5%.
std::pair<std::vector<LabeledSentence>, std::vector<LabeledSentence>> split_dev(
    std::span<const LabeledSentence> corpus, std::size_t stride = 20);

}  // namespace charwnn
