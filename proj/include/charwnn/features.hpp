#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "charwnn/corpus_io.hpp"
#include "charwnn/rng.hpp"

namespace charwnn {

// A d x |V| embedding matrix. Column i is the vector of vocabulary entry i;
// columns are stored contiguously, so lookup is column selection.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(Vocabulary vocabulary, std::size_t dimension);

  const Vocabulary& vocabulary() const { return vocabulary_; }
  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return vocabulary_.size(); }
  bool empty() const { return vocabulary_.size() == 0; }

  std::span<double> column(int index);
  std::span<const double> column(int index) const;
  std::span<const double> lookup(std::string_view entry) const { return column(vocabulary_.index(entry)); }

  // Adds an entry (no-op if present) and returns its column.
  std::span<double> add(std::string_view entry);

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  bool operator==(const EmbeddingTable&) const = default;

 private:
  Vocabulary vocabulary_;
  std::size_t dimension_ = 0;
  std::vector<double> values_;
};

// r = sqrt(6 / (|V| + d))
double uniform_init_range(std::size_t vocab_size, std::size_t dimension);

// Fills every value i.i.d. from U(-r, r), r = uniform_init_range(|V|, d).
void init_uniform(EmbeddingTable& table, Rng& rng);

// Table of `vocab_size` anonymous entries ("0", "1", ...) drawn as above.
EmbeddingTable init_uniform(std::size_t vocab_size, std::size_t dimension, Rng& rng);
EmbeddingTable init_uniform(Vocabulary vocabulary, std::size_t dimension, Rng& rng);

// Reads the word2vec text format ("count dim" header, then "word v1 .. vd").
// PADDING and UNKNOWN are appended after the file's entries and drawn with
// init_uniform's rule.
EmbeddingTable load_word2vec_text(std::istream& in, Rng& rng);

// Writes the non-reserved entries in word2vec text format with
// round-trip precision.
void save_word2vec_text(std::ostream& out, const EmbeddingTable& table);

enum class Capitalization { AllLower, FirstUpper, AllUpper, ContainsUpper, Other };

inline constexpr int kCapitalizationClasses = 5;

// Checked in the order all_lower, all_upper, first_upper, contains_upper.
// Words without any cased letter are "other".
Capitalization capitalization_class(std::string_view surface);
std::string_view capitalization_name(Capitalization c);

// Last min(k, length) characters of the normalized form.
std::string suffix_feature(std::string_view surface, std::size_t length);

struct HandcraftedFeatureSpec {
  bool capitalization = false;
  bool suffix = false;
  int suffix_length = 3;
  int dimension = 5;

  bool any() const { return capitalization || suffix; }
  bool operator==(const HandcraftedFeatureSpec&) const = default;
};

// PADDING, UNKNOWN and the five capitalization classes.
Vocabulary capitalization_vocabulary();
Vocabulary suffix_vocabulary(std::span<const LabeledSentence> corpus, std::size_t length);

}  // namespace charwnn
