#include "charwnn/char_conv.hpp"

#include <cassert>
#include <limits>
#include <stdexcept>

#include "charwnn/utf8.hpp"

namespace charwnn {

CharConvGradients CharConvGradients::zeros_like(const CharConvParams& params) {
  return {Matrix(params.weights.rows(), params.weights.cols()), Vector(params.bias.size(), 0.0), {}};
}

std::vector<int> char_ids(const Vocabulary& chars, std::string_view surface) {
  std::vector<int> ids;
  for (char32_t c : utf8::decode(surface)) ids.push_back(chars.index(utf8::encode(c)));
  return ids;
}

namespace {

// Column id of the character at position `pos` of the padded sequence.
int padded_char(const CharConvParams& params, std::span<const int> word, long pos) {
  if (pos < 0 || pos >= static_cast<long>(word.size())) return params.char_table.vocabulary().padding();
  return word[static_cast<std::size_t>(pos)];
}

void window_input(const CharConvParams& params, std::span<const int> word, std::size_t m, Vector& z) {
  const std::size_t d = params.char_table.dimension();
  const long half = (params.window - 1) / 2;
  for (long k = 0; k < params.window; ++k) {
    const auto col = params.char_table.column(padded_char(params, word, static_cast<long>(m) - half + k));
    std::copy(col.begin(), col.end(), z.begin() + static_cast<long>(k * static_cast<long>(d)));
  }
}

}  // namespace

CharConvOutput char_forward(const CharConvParams& params, std::span<const int> word) {
  if (word.empty()) throw std::invalid_argument("char_forward: empty word");
  if (params.window % 2 == 0) throw std::invalid_argument("char_forward: window must be odd");
  const std::size_t units = params.units();
  CharConvOutput out{Vector(units, -std::numeric_limits<double>::infinity()), std::vector<int>(units, 0)};
  Vector z(params.char_table.dimension() * static_cast<std::size_t>(params.window));
  Vector pre(units);
  for (std::size_t m = 0; m < word.size(); ++m) {
    window_input(params, word, m, z);
    affine(params.weights, z, params.bias, pre);
    for (std::size_t j = 0; j < units; ++j) {
      if (pre[j] > out.embedding[j]) {
        out.embedding[j] = pre[j];
        out.argmax[j] = static_cast<int>(m);
      }
    }
  }
  return out;
}

void char_backward(const CharConvParams& params, std::span<const int> word,
                   std::span<const double> upstream, const CharConvOutput& forward,
                   CharConvGradients& grads) {
  const std::size_t units = params.units();
  assert(upstream.size() == units);
  const std::size_t d = params.char_table.dimension();
  const long half = (params.window - 1) / 2;
  Vector z(d * static_cast<std::size_t>(params.window));
  Vector dz(z.size());
  // Group units by winning window so each window input is built once.
  for (std::size_t m = 0; m < word.size(); ++m) {
    bool any = false;
    for (std::size_t j = 0; j < units; ++j) {
      if (forward.argmax[j] == static_cast<int>(m) && upstream[j] != 0.0) any = true;
    }
    if (!any) continue;
    window_input(params, word, m, z);
    std::fill(dz.begin(), dz.end(), 0.0);
    for (std::size_t j = 0; j < units; ++j) {
      if (forward.argmax[j] != static_cast<int>(m) || upstream[j] == 0.0) continue;
      const double g = upstream[j];
      grads.bias[j] += g;
      axpy(g, z, grads.weights.row(j));
      axpy(g, params.weights.row(j), dz);
    }
    for (long k = 0; k < params.window; ++k) {
      const int id = padded_char(params, word, static_cast<long>(m) - half + k);
      auto& col = grads.chars[id];
      if (col.empty()) col.assign(d, 0.0);
      const std::span<const double> part(dz.data() + k * static_cast<long>(d), d);
      axpy(1.0, part, col);
    }
  }
}

}  // namespace charwnn
