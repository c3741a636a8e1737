#include "charwnn/model.hpp"

#include <cmath>

#include "charwnn/errors.hpp"

namespace charwnn {

ModelGradients ModelGradients::zeros_like(const Model& model) {
  ModelGradients g;
  g.chars = CharConvGradients::zeros_like(model.chars);
  g.scorer = ScorerGradients::zeros_like(model.scorer);
  g.transitions = TransitionGradients::zeros(model.transitions.num_tags());
  return g;
}

namespace {

void init_layer(Matrix& weights, Rng& rng) {
  const double r = std::sqrt(6.0 / static_cast<double>(weights.rows() + weights.cols()));
  for (double& v : weights.data()) v = rng.symmetric(r);
}

}  // namespace

Model initialize_model(const Hyperparameters& hp, std::span<const LabeledSentence> corpus,
                       const EmbeddingTable* pretrained) {
  hp.validate();
  if (pretrained && hp.uses_words() && pretrained->dimension() != static_cast<std::size_t>(hp.word_dim)) {
    throw ConfigError("pre-trained vectors have dimension " + std::to_string(pretrained->dimension()) +
                      " but word_dim is " + std::to_string(hp.word_dim));
  }
  Rng rng(hp.seed);
  Model m;
  m.hp = hp;
  Vocabularies vocab = build_vocabularies(corpus, pretrained ? &pretrained->vocabulary() : nullptr);
  m.tags = vocab.tags;

  if (hp.uses_words()) {
    m.words = init_uniform(std::move(vocab.words), static_cast<std::size_t>(hp.word_dim), rng);
    if (pretrained) {
      for (int i = 0; i < static_cast<int>(pretrained->size()); ++i) {
        if (pretrained->vocabulary().is_reserved(i)) continue;
        const auto src = pretrained->column(i);
        const auto dst = m.words.column(m.words.vocabulary().index(pretrained->vocabulary().entry(i)));
        std::copy(src.begin(), src.end(), dst.begin());
      }
    }
  }
  if (hp.uses_chars()) {
    m.chars.window = hp.char_window;
    m.chars.char_table = init_uniform(std::move(vocab.chars), static_cast<std::size_t>(hp.char_dim), rng);
    m.chars.weights = Matrix(static_cast<std::size_t>(hp.conv_units),
                             static_cast<std::size_t>(hp.char_dim * hp.char_window));
    if (hp.conv_units > 0) init_layer(m.chars.weights, rng);
    m.chars.bias.assign(static_cast<std::size_t>(hp.conv_units), 0.0);
  }
  if (hp.uses_capitalization()) {
    m.capitalization = init_uniform(capitalization_vocabulary(), static_cast<std::size_t>(hp.features.dimension), rng);
  }
  if (hp.uses_suffix()) {
    m.suffixes = init_uniform(suffix_vocabulary(corpus, static_cast<std::size_t>(hp.features.suffix_length)),
                              static_cast<std::size_t>(hp.features.dimension), rng);
  }

  const std::size_t input = hp.representation_size() * static_cast<std::size_t>(hp.word_window);
  const std::size_t hidden = static_cast<std::size_t>(hp.hidden_units);
  const std::size_t n_tags = m.tags.size();
  m.scorer.window = hp.word_window;
  m.scorer.hidden_weights = Matrix(hidden, input);
  init_layer(m.scorer.hidden_weights, rng);
  m.scorer.hidden_bias.assign(hidden, 0.0);
  m.scorer.output_weights = Matrix(n_tags, hidden);
  init_layer(m.scorer.output_weights, rng);
  m.scorer.output_bias.assign(n_tags, 0.0);
  m.transitions = TransitionParams(n_tags);
  return m;
}

std::vector<int> tag_indices(const Model& model, const LabeledSentence& sentence) {
  std::vector<int> out;
  out.reserve(sentence.tags.size());
  for (const auto& tag : sentence.tags) out.push_back(model.tags.index(tag));
  return out;
}

std::vector<std::string> tag_sentence(const Model& model, std::span<const Token> tokens) {
  if (tokens.empty()) return {};
  const SentenceForward f = sentence_emissions(model, tokens);
  std::optional<TransitionMask> mask;
  if (model.hp.decode_mask) mask = TransitionMask::iob2(model.tags);
  const Decoded best = viterbi_decode(f.emissions, model.transitions, mask ? &*mask : nullptr);
  std::vector<std::string> tags;
  tags.reserve(best.path.size());
  for (int t : best.path) tags.push_back(model.tags.tag(t));
  return tags;
}

std::vector<std::vector<std::string>> tag_corpus(const Model& model, std::span<const LabeledSentence> corpus) {
  std::vector<std::vector<std::string>> out;
  out.reserve(corpus.size());
  for (const auto& s : corpus) out.push_back(tag_sentence(model, s.tokens));
  return out;
}

}  // namespace charwnn
