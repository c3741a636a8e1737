#include "charwnn/window_scorer.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

#include "charwnn/model.hpp"

namespace charwnn {

ScorerGradients ScorerGradients::zeros_like(const ScorerParams& params) {
  return {Matrix(params.hidden_weights.rows(), params.hidden_weights.cols()),
          Vector(params.hidden_bias.size(), 0.0),
          Matrix(params.output_weights.rows(), params.output_weights.cols()),
          Vector(params.output_bias.size(), 0.0)};
}

Vector assemble_window(std::span<const Vector> representations, const Vector& padding, std::size_t position,
                       int window) {
  if (window <= 0 || window % 2 == 0) throw std::invalid_argument("word window must be odd");
  if (position >= representations.size()) throw std::out_of_range("window position outside the sentence");
  const long half = (window - 1) / 2;
  Vector r;
  r.reserve(padding.size() * static_cast<std::size_t>(window));
  for (long k = -half; k <= half; ++k) {
    const long idx = static_cast<long>(position) + k;
    const Vector& u = (idx < 0 || idx >= static_cast<long>(representations.size()))
                          ? padding
                          : representations[static_cast<std::size_t>(idx)];
    r.insert(r.end(), u.begin(), u.end());
  }
  return r;
}

WordScore score_word(const ScorerParams& params, std::span<const double> window_input) {
  if (window_input.size() != params.hidden_weights.cols()) throw std::invalid_argument("window input size mismatch");
  WordScore out{Vector(params.hidden_bias.size()), Vector(params.output_bias.size())};
  affine(params.hidden_weights, window_input, params.hidden_bias, out.hidden);
  for (double& h : out.hidden) h = std::tanh(h);
  affine(params.output_weights, out.hidden, params.output_bias, out.scores);
  return out;
}

EncodedToken encode_token(const Model& model, const Token& token) {
  const auto& hp = model.hp;
  EncodedToken e;
  if (hp.uses_words()) e.word = model.words.vocabulary().index(token.normalized);
  if (hp.uses_chars()) e.chars = char_ids(model.chars.char_table.vocabulary(), token.surface);
  if (hp.uses_capitalization()) {
    e.capitalization = model.capitalization.vocabulary().index(capitalization_name(capitalization_class(token.surface)));
  }
  if (hp.uses_suffix()) {
    e.suffix = model.suffixes.vocabulary().index(
        suffix_feature(token.surface, static_cast<std::size_t>(hp.features.suffix_length)));
  }
  return e;
}

EncodedToken padding_token(const Model& model) {
  const auto& hp = model.hp;
  EncodedToken e;
  if (hp.uses_words()) e.word = model.words.vocabulary().padding();
  if (hp.uses_chars()) e.chars = {model.chars.char_table.vocabulary().padding()};
  if (hp.uses_capitalization()) e.capitalization = model.capitalization.vocabulary().padding();
  if (hp.uses_suffix()) e.suffix = model.suffixes.vocabulary().padding();
  return e;
}

Vector word_representation(const Model& model, const EncodedToken& token, CharConvOutput* conv) {
  Vector u;
  u.reserve(model.hp.representation_size());
  auto append = [&u](std::span<const double> part) { u.insert(u.end(), part.begin(), part.end()); };
  if (token.word >= 0) append(model.words.column(token.word));
  if (model.hp.uses_chars()) {
    CharConvOutput out = char_forward(model.chars, token.chars);
    append(out.embedding);
    if (conv) *conv = std::move(out);
  }
  if (token.capitalization >= 0) append(model.capitalization.column(token.capitalization));
  if (token.suffix >= 0) append(model.suffixes.column(token.suffix));
  return u;
}

SentenceForward sentence_emissions(const Model& model, std::span<const Token> tokens) {
  if (tokens.empty()) throw std::invalid_argument("sentence_emissions: empty sentence");
  const std::size_t n = tokens.size();
  SentenceForward f;
  f.encoded.reserve(n + 1);
  for (const auto& token : tokens) f.encoded.push_back(encode_token(model, token));
  f.encoded.push_back(padding_token(model));
  f.conv.resize(n + 1);
  f.representations.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) f.representations.push_back(word_representation(model, f.encoded[i], &f.conv[i]));

  const std::span<const Vector> words(f.representations.data(), n);
  const Vector& padding = f.representations[n];
  f.emissions = Matrix(n, model.scorer.output_bias.size());
  f.windows.reserve(n);
  f.hidden.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    f.windows.push_back(assemble_window(words, padding, i, model.scorer.window));
    WordScore s = score_word(model.scorer, f.windows.back());
    std::copy(s.scores.begin(), s.scores.end(), f.emissions.row(i).begin());
    f.hidden.push_back(std::move(s.hidden));
  }
  return f;
}

namespace {

void accumulate_column(SparseColumns& columns, int index, std::span<const double> grad) {
  auto& col = columns[index];
  if (col.empty()) col.assign(grad.size(), 0.0);
  axpy(1.0, grad, col);
}

}  // namespace

void backward_emissions(const Model& model, const SentenceForward& f, const Matrix& d_emissions,
                        ModelGradients& grads) {
  const std::size_t n = f.length();
  assert(d_emissions.rows() == n && d_emissions.cols() == model.scorer.output_bias.size());
  const auto& scorer = model.scorer;
  const std::size_t hidden_units = scorer.hidden_bias.size();
  const std::size_t rep_size = model.hp.representation_size();
  const long half = (scorer.window - 1) / 2;

  // d value / d u for each word, index n being the padding word.
  std::vector<Vector> d_reps(n + 1, Vector(rep_size, 0.0));
  Vector d_hidden(hidden_units);
  Vector d_window(scorer.hidden_weights.cols());
  for (std::size_t i = 0; i < n; ++i) {
    const auto d_scores = d_emissions.row(i);
    add_outer(grads.scorer.output_weights, d_scores, f.hidden[i]);
    axpy(1.0, d_scores, grads.scorer.output_bias);
    std::fill(d_hidden.begin(), d_hidden.end(), 0.0);
    add_transposed_product(scorer.output_weights, d_scores, d_hidden);
    for (std::size_t h = 0; h < hidden_units; ++h) d_hidden[h] *= 1.0 - f.hidden[i][h] * f.hidden[i][h];
    add_outer(grads.scorer.hidden_weights, d_hidden, f.windows[i]);
    axpy(1.0, d_hidden, grads.scorer.hidden_bias);
    std::fill(d_window.begin(), d_window.end(), 0.0);
    add_transposed_product(scorer.hidden_weights, d_hidden, d_window);
    for (long k = -half; k <= half; ++k) {
      const long idx = static_cast<long>(i) + k;
      const std::size_t target = (idx < 0 || idx >= static_cast<long>(n)) ? n : static_cast<std::size_t>(idx);
      const std::span<const double> part(d_window.data() + (k + half) * static_cast<long>(rep_size), rep_size);
      axpy(1.0, part, d_reps[target]);
    }
  }

  for (std::size_t i = 0; i <= n; ++i) {
    const EncodedToken& e = f.encoded[i];
    const std::span<const double> d_u(d_reps[i]);
    std::size_t offset = 0;
    auto take = [&](std::size_t size) {
      const auto part = d_u.subspan(offset, size);
      offset += size;
      return part;
    };
    if (e.word >= 0) accumulate_column(grads.words, e.word, take(model.words.dimension()));
    if (model.hp.uses_chars()) {
      char_backward(model.chars, e.chars, take(model.chars.units()), f.conv[i], grads.chars);
    }
    if (e.capitalization >= 0) {
      accumulate_column(grads.capitalization, e.capitalization, take(model.capitalization.dimension()));
    }
    if (e.suffix >= 0) accumulate_column(grads.suffixes, e.suffix, take(model.suffixes.dimension()));
  }
}

}  // namespace charwnn
