#pragma once

#include <span>
#include <string>
#include <vector>

#include "charwnn/char_conv.hpp"
#include "charwnn/corpus_io.hpp"
#include "charwnn/features.hpp"
#include "charwnn/hyperparameters.hpp"
#include "charwnn/structured_inference.hpp"
#include "charwnn/window_scorer.hpp"

namespace charwnn {

// The full trainable set: word table, character convolution, optional
// capitalization and suffix tables, the two scoring layers and transitions.
// Tables a variant does not use are left empty.
struct Model {
  Hyperparameters hp;
  TagSet tags;
  EmbeddingTable words;
  CharConvParams chars;
  EmbeddingTable capitalization;
  EmbeddingTable suffixes;
  ScorerParams scorer;
  TransitionParams transitions;

  bool operator==(const Model&) const = default;
};

// d log-likelihood / d theta, with sparse columns for embedding tables.
struct ModelGradients {
  SparseColumns words;
  CharConvGradients chars;
  SparseColumns capitalization;
  SparseColumns suffixes;
  ScorerGradients scorer;
  TransitionGradients transitions;

  static ModelGradients zeros_like(const Model& model);
};

// Builds vocabularies from `corpus` (and `pretrained`, whose vectors are
// copied) and initializes parameters: embedding tables and layer weights
// with U(-r, r), r = sqrt(6 / (fan_in + fan_out)); biases and transitions
// with zero.
Model initialize_model(const Hyperparameters& hp, std::span<const LabeledSentence> corpus,
                       const EmbeddingTable* pretrained = nullptr);

// Gold tag indices of a labeled sentence; throws DataError for unknown tags.
std::vector<int> tag_indices(const Model& model, const LabeledSentence& sentence);

// Viterbi tag sequence for a tokenized sentence.
std::vector<std::string> tag_sentence(const Model& model, std::span<const Token> tokens);

std::vector<std::vector<std::string>> tag_corpus(const Model& model, std::span<const LabeledSentence> corpus);

}  // namespace charwnn
