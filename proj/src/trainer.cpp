#include "charwnn/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "charwnn/errors.hpp"

namespace charwnn {

SentenceGradients compute_gradients(const Model& model, const LabeledSentence& sentence) {
  if (sentence.tokens.empty()) throw std::invalid_argument("empty sentence");
  const std::vector<int> gold = tag_indices(model, sentence);
  const SentenceForward forward = sentence_emissions(model, sentence.tokens);
  LikelihoodResult ll = log_likelihood(forward.emissions, model.transitions, gold);
  SentenceGradients out{ll.value, ModelGradients::zeros_like(model)};
  out.gradients.transitions = std::move(ll.d_transitions);
  backward_emissions(model, forward, ll.d_emissions, out.gradients);
  return out;
}

namespace {

void update_columns(EmbeddingTable& table, const SparseColumns& grads, double lr) {
  for (const auto& [index, g] : grads) axpy(lr, g, table.column(index));
}

}  // namespace

void apply_gradients(Model& model, const ModelGradients& g, double lr) {
  if (!model.hp.freeze_word_embeddings) update_columns(model.words, g.words, lr);
  update_columns(model.chars.char_table, g.chars.chars, lr);
  axpy(lr, g.chars.weights.data(), model.chars.weights.data());
  axpy(lr, g.chars.bias, model.chars.bias);
  update_columns(model.capitalization, g.capitalization, lr);
  update_columns(model.suffixes, g.suffixes, lr);
  axpy(lr, g.scorer.hidden_weights.data(), model.scorer.hidden_weights.data());
  axpy(lr, g.scorer.hidden_bias, model.scorer.hidden_bias);
  axpy(lr, g.scorer.output_weights.data(), model.scorer.output_weights.data());
  axpy(lr, g.scorer.output_bias, model.scorer.output_bias);
  axpy(lr, g.transitions.transitions.data(), model.transitions.transitions.data());
  axpy(lr, g.transitions.start, model.transitions.start);
}

double sgd_step(Model& model, const LabeledSentence& sentence, double learning_rate) {
  const SentenceGradients sg = compute_gradients(model, sentence);
  const double loss = -sg.log_likelihood;
  if (!std::isfinite(loss)) throw DivergenceError(0, 0);
  if (learning_rate != 0.0) apply_gradients(model, sg.gradients, learning_rate);
  return loss;
}

double sgd_step(Model& model, const LabeledSentence& sentence) {
  return sgd_step(model, sentence, model.hp.learning_rate);
}

// --- training loop ----------------------------------------------------------

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string TrainingReport::text() const {
  std::ostringstream out;
  out << "hyperparameters:\n";
  for (const auto& line : hp.describe()) out << "  " << line << '\n';
  for (const auto& e : epochs) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "epoch %3d  lr=%-10g loss=%-14.6f dev P=%6.2f R=%6.2f F1=%6.2f acc=%6.2f\n",
                  e.epoch, e.learning_rate, e.loss, e.dev.overall.precision(), e.dev.overall.recall(),
                  e.dev.overall.f1(), e.dev.token_accuracy());
    out << buf;
  }
  out << "best_epoch=" << best_epoch << '\n';
  return out.str();
}

std::string TrainingReport::key_values() const {
  std::ostringstream out;
  for (const auto& line : hp.describe()) out << line << '\n';
  out << "epochs_run=" << epochs.size() << '\n';
  for (const auto& e : epochs) {
    const std::string prefix = "epoch." + std::to_string(e.epoch) + ".";
    out << prefix << "learning_rate=" << format_double(e.learning_rate) << '\n';
    out << prefix << "loss=" << format_double(e.loss) << '\n';
    out << prefix << "dev_precision=" << fixed2(e.dev.overall.precision()) << '\n';
    out << prefix << "dev_recall=" << fixed2(e.dev.overall.recall()) << '\n';
    out << prefix << "dev_f1=" << fixed2(e.dev.overall.f1()) << '\n';
    out << prefix << "dev_token_accuracy=" << fixed2(e.dev.token_accuracy()) << '\n';
  }
  out << "best_epoch=" << best_epoch << '\n';
  return out.str();
}

TrainResult train(Model model, std::span<const LabeledSentence> corpus, std::span<const LabeledSentence> dev,
                  const EpochCallback& on_epoch) {
  const Hyperparameters hp = model.hp;
  TrainResult result{model, TrainingReport{hp, {}, 0}};
  if (hp.max_epochs == 0) return result;
  if (corpus.empty()) throw std::invalid_argument("empty training corpus");

  Rng order_rng(hp.seed ^ 0x9E3779B97F4A7C15ULL);
  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  double best_f1 = -1.0;
  double lr = hp.learning_rate;
  for (int epoch = 1; epoch <= hp.max_epochs; ++epoch) {
    order_rng.shuffle(order);
    EpochRecord record;
    record.epoch = epoch;
    record.learning_rate = lr;
    for (std::size_t k = 0; k < order.size(); ++k) {
      try {
        record.loss += sgd_step(model, corpus[order[k]], lr);
      } catch (const DivergenceError&) {
        throw DivergenceError(epoch, order[k]);
      }
    }
    if (!dev.empty()) record.dev = evaluate(dev, tag_corpus(model, dev));
    const double f1 = record.dev.overall.f1();
    if (dev.empty() || f1 > best_f1) {
      best_f1 = f1;
      result.model = model;
      result.report.best_epoch = epoch;
    }
    result.report.epochs.push_back(record);
    if (on_epoch) on_epoch(record);
    lr *= hp.lr_decay;
  }
  return result;
}

TrainResult train(std::span<const LabeledSentence> corpus, std::span<const LabeledSentence> dev,
                  const Hyperparameters& hp, const EmbeddingTable* pretrained, const EpochCallback& on_epoch) {
  return train(initialize_model(hp, corpus, pretrained), corpus, dev, on_epoch);
}

// --- gradient check ---------------------------------------------------------

namespace {

struct GroupView {
  std::span<double> values;
  Vector analytic;
};

Vector dense(const SparseColumns& columns, const EmbeddingTable& table) {
  Vector out(table.values().size(), 0.0);
  for (const auto& [index, g] : columns) {
    std::copy(g.begin(), g.end(), out.begin() + static_cast<long>(static_cast<std::size_t>(index) * table.dimension()));
  }
  return out;
}

GroupView view(Model& m, const ModelGradients& g, const std::string& group) {
  if (group == "word_table") return {m.words.values(), dense(g.words, m.words)};
  if (group == "char_table") return {m.chars.char_table.values(), dense(g.chars.chars, m.chars.char_table)};
  if (group == "conv_weights") return {m.chars.weights.data(), g.chars.weights.data()};
  if (group == "conv_bias") return {m.chars.bias, g.chars.bias};
  if (group == "hidden_weights") return {m.scorer.hidden_weights.data(), g.scorer.hidden_weights.data()};
  if (group == "hidden_bias") return {m.scorer.hidden_bias, g.scorer.hidden_bias};
  if (group == "output_weights") return {m.scorer.output_weights.data(), g.scorer.output_weights.data()};
  if (group == "output_bias") return {m.scorer.output_bias, g.scorer.output_bias};
  if (group == "transitions") return {m.transitions.transitions.data(), g.transitions.transitions.data()};
  if (group == "start") return {m.transitions.start, g.transitions.start};
  if (group == "capitalization_table") return {m.capitalization.values(), dense(g.capitalization, m.capitalization)};
  if (group == "suffix_table") return {m.suffixes.values(), dense(g.suffixes, m.suffixes)};
  throw std::invalid_argument("unknown parameter group '" + group + "'");
}

double log_likelihood_of(const Model& model, const LabeledSentence& sentence, const std::vector<int>& gold) {
  const SentenceForward f = sentence_emissions(model, sentence.tokens);
  return log_likelihood(f.emissions, model.transitions, gold).value;
}

}  // namespace

std::vector<std::string> parameter_groups(const Model& model) {
  std::vector<std::string> groups;
  if (model.hp.uses_words()) groups.push_back("word_table");
  if (model.hp.uses_chars()) {
    groups.insert(groups.end(), {"char_table", "conv_weights", "conv_bias"});
  }
  groups.insert(groups.end(),
                {"hidden_weights", "hidden_bias", "output_weights", "output_bias", "transitions", "start"});
  if (model.hp.uses_capitalization()) groups.push_back("capitalization_table");
  if (model.hp.uses_suffix()) groups.push_back("suffix_table");
  return groups;
}

double GradientCheckReport::worst() const {
  double w = 0.0;
  for (const auto& [_, e] : max_relative_error) w = std::max(w, e);
  return w;
}

GradientCheckReport gradient_check(const Model& model, const LabeledSentence& sentence,
                                   const GradientCheckOptions& options) {
  const std::vector<int> gold = tag_indices(model, sentence);
  const SentenceGradients analytic = compute_gradients(model, sentence);
  Model probe = model;
  GradientCheckReport report;
  for (const auto& group : parameter_groups(model)) {
    GroupView v = view(probe, analytic.gradients, group);
    if (options.corrupt_group && *options.corrupt_group == group) {
      for (double& a : v.analytic) a = -a;
    }
    double max_err = 0.0;
    double max_a = 0.0;
    double max_n = 0.0;
    for (std::size_t i = 0; i < v.values.size(); ++i) {
      const double saved = v.values[i];
      v.values[i] = saved + options.step;
      const double plus = log_likelihood_of(probe, sentence, gold);
      v.values[i] = saved - options.step;
      const double minus = log_likelihood_of(probe, sentence, gold);
      v.values[i] = saved;
      const double numeric = (plus - minus) / (2.0 * options.step);
      max_err = std::max(max_err, std::abs(numeric - v.analytic[i]));
      max_a = std::max(max_a, std::abs(v.analytic[i]));
      max_n = std::max(max_n, std::abs(numeric));
    }
    const double scale = std::max(max_a, max_n);
    report.max_abs_error[group] = max_err;
    report.max_relative_error[group] = scale > 0.0 ? max_err / scale : 0.0;
  }
  return report;
}

GradientCheckReport gradient_check(const Hyperparameters& hp, const LabeledSentence& sentence,
                                   const GradientCheckOptions& options) {
  const LabeledSentence corpus[] = {sentence};
  return gradient_check(initialize_model(hp, corpus), sentence, options);
}

}  // namespace charwnn
