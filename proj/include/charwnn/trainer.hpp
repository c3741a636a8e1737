#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "charwnn/evaluation.hpp"
#include "charwnn/model.hpp"

namespace charwnn {

struct SentenceGradients {
  double log_likelihood = 0.0;
  ModelGradients gradients;  // of the log-likelihood
};

// Full forward and backward pass for one labeled sentence.
SentenceGradients compute_gradients(const Model& model, const LabeledSentence& sentence);

// theta <- theta + learning_rate * gradient. Word columns are skipped when
// the model freezes word embeddings.
void apply_gradients(Model& model, const ModelGradients& gradients, double learning_rate);

// One SGD update on the negative log-likelihood. Returns the loss before
// the update; throws DivergenceError if it is not finite.
double sgd_step(Model& model, const LabeledSentence& sentence, double learning_rate);
double sgd_step(Model& model, const LabeledSentence& sentence);

struct EpochRecord {
  int epoch = 0;  // 1-based
  double learning_rate = 0.0;
  double loss = 0.0;  // summed over training sentences
  EvalReport dev;
};

struct TrainingReport {
  Hyperparameters hp;
  std::vector<EpochRecord> epochs;
  int best_epoch = 0;  // 0: initialization kept

  // Hyperparameter header followed by one line per epoch.
  std::string text() const;
  // Machine-readable "key=value" lines.
  std::string key_values() const;
};

struct TrainResult {
  Model model;
  TrainingReport report;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

// Per epoch: shuffle with the run seed, one sgd_step per sentence, evaluate
// on `dev`. Returns the snapshot with the best dev F1 (earliest on ties).
TrainResult train(Model model, std::span<const LabeledSentence> corpus, std::span<const LabeledSentence> dev,
                  const EpochCallback& on_epoch = {});
TrainResult train(std::span<const LabeledSentence> corpus, std::span<const LabeledSentence> dev,
                  const Hyperparameters& hp, const EmbeddingTable* pretrained = nullptr,
                  const EpochCallback& on_epoch = {});

// Parameter groups in a fixed order: word_table, char_table, conv_weights,
// conv_bias, hidden_weights, hidden_bias, output_weights, output_bias,
// transitions, start, capitalization_table, suffix_table. Groups a variant
// does not use are omitted.
std::vector<std::string> parameter_groups(const Model& model);

struct GradientCheckOptions {
  double step = 1e-5;
  // Negative control: flip the sign of this group's analytic gradient.
  std::optional<std::string> corrupt_group;
};

// Per group: max |analytic - numeric| / max(max |analytic|, max |numeric|),
// numeric gradients by central differences of the log-likelihood.
struct GradientCheckReport {
  std::map<std::string, double> max_relative_error;
  std::map<std::string, double> max_abs_error;

  double worst() const;
  bool passed(double tolerance) const { return worst() <= tolerance; }
};

GradientCheckReport gradient_check(const Model& model, const LabeledSentence& sentence,
                                   const GradientCheckOptions& options = {});
GradientCheckReport gradient_check(const Hyperparameters& hp, const LabeledSentence& sentence,
                                   const GradientCheckOptions& options = {});

}  // namespace charwnn
