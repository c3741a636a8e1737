#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "charwnn/features.hpp"
#include "charwnn/matrix.hpp"

namespace charwnn {

// Character-level convolution: character table, a cl_u x (d_chr * k_chr)
// filter matrix and its bias. `window` (k_chr) is odd.
struct CharConvParams {
  EmbeddingTable char_table;
  Matrix weights;
  Vector bias;
  int window = 5;

  std::size_t units() const { return bias.size(); }
  bool operator==(const CharConvParams&) const = default;
};

struct CharConvOutput {
  Vector embedding;          // cl_u values, max over windows
  std::vector<int> argmax;   // per unit, 0-based index of the winning window
};

struct CharConvGradients {
  Matrix weights;
  Vector bias;
  SparseColumns chars;

  static CharConvGradients zeros_like(const CharConvParams& params);
};

// Maps each character of the surface form to its column; unseen characters
// map to UNKNOWN.
std::vector<int> char_ids(const Vocabulary& chars, std::string_view surface);

// Pads (k-1)/2 PADDING characters per side, which yields exactly one window
// per character; each unit takes the max over all windows (lowest index
// wins ties). No nonlinearity.
CharConvOutput char_forward(const CharConvParams& params, std::span<const int> word);

// Accumulates the subgradient of the max into `grads`: only each unit's
// winning window receives gradient.
void char_backward(const CharConvParams& params, std::span<const int> word,
                   std::span<const double> upstream, const CharConvOutput& forward,
                   CharConvGradients& grads);

}  // namespace charwnn
