#pragma once

#include <span>
#include <vector>

#include "charwnn/char_conv.hpp"
#include "charwnn/corpus_io.hpp"
#include "charwnn/matrix.hpp"

namespace charwnn {

struct Model;
struct ModelGradients;

// s = W2 tanh(W1 r + b1) + b2 over a window of k_wrd word representations.
struct ScorerParams {
  Matrix hidden_weights;  // hl_u x (k_wrd * D)
  Vector hidden_bias;     // hl_u
  Matrix output_weights;  // |T| x hl_u
  Vector output_bias;     // |T|
  int window = 5;

  bool operator==(const ScorerParams&) const = default;
};

struct ScorerGradients {
  Matrix hidden_weights;
  Vector hidden_bias;
  Matrix output_weights;
  Vector output_bias;

  static ScorerGradients zeros_like(const ScorerParams& params);
};

// Concatenates the representations centred on `position` (0-based);
// positions outside the sentence take `padding`.
Vector assemble_window(std::span<const Vector> representations, const Vector& padding, std::size_t position,
                       int window);

struct WordScore {
  Vector hidden;  // tanh(W1 r + b1)
  Vector scores;  // |T|
};

WordScore score_word(const ScorerParams& params, std::span<const double> window_input);

// Column indices of one word in every table the model uses (-1 if unused).
struct EncodedToken {
  int word = -1;
  std::vector<int> chars;
  int capitalization = -1;
  int suffix = -1;
};

EncodedToken encode_token(const Model& model, const Token& token);

// The padding word: PADDING in every table, and a single PADDING character
// for the convolution.
EncodedToken padding_token(const Model& model);

// Word representation u = [word; char-conv; capitalization; suffix].
Vector word_representation(const Model& model, const EncodedToken& token, CharConvOutput* conv = nullptr);

// Forward pass over one sentence, keeping what the backward pass needs.
// Index N of `encoded`, `conv` and `representations` is the padding word.
struct SentenceForward {
  std::vector<EncodedToken> encoded;
  std::vector<CharConvOutput> conv;
  std::vector<Vector> representations;
  std::vector<Vector> windows;
  std::vector<Vector> hidden;
  Matrix emissions;  // N x |T|

  std::size_t length() const { return emissions.rows(); }
};

SentenceForward sentence_emissions(const Model& model, std::span<const Token> tokens);

// Back-propagates d value / d emissions through both layers, the window
// assembly and every per-word table into `grads` (accumulating).
void backward_emissions(const Model& model, const SentenceForward& forward, const Matrix& d_emissions,
                        ModelGradients& grads);

}  // namespace charwnn
