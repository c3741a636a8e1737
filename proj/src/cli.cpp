#include "charwnn/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "charwnn/config.hpp"
#include "charwnn/corpus_io.hpp"
#include "charwnn/errors.hpp"
#include "charwnn/evaluation.hpp"
#include "charwnn/model_io.hpp"
#include "charwnn/trainer.hpp"
#include "charwnn/utf8.hpp"

namespace charwnn {

namespace {

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path);
  return out;
}

// --- preprocess -------------------------------------------------------------

struct PreprocessArgs {
  std::string input;
  std::string output;
  bool keep_surface = false;
  bool replace_non_roman = false;
  std::string substitute = "#";
  std::string dev_output;
  std::size_t dev_stride = 20;
};

void write_preprocessed(std::ostream& out, std::span<const LabeledSentence> corpus, const PreprocessArgs& args,
                        char32_t substitute) {
  for (const auto& sentence : corpus) {
    for (std::size_t i = 0; i < sentence.size(); ++i) {
      std::string surface = sentence.tokens[i].surface;
      if (args.replace_non_roman) surface = replace_non_roman(surface, substitute);
      if (args.keep_surface) out << surface << ' ';
      out << normalize_word(surface);
      if (!sentence.tags[i].empty()) out << ' ' << sentence.tags[i];
      out << '\n';
    }
    out << '\n';
  }
}

int cmd_preprocess(const PreprocessArgs& args, std::ostream&) {
  const std::u32string sub = utf8::decode(args.substitute);
  if (sub.size() != 1) throw ConfigError("--substitute must be a single character");
  ConllOptions options;
  options.require_tags = false;
  const auto corpus = read_conll_file(args.input, options);
  if (args.dev_output.empty()) {
    auto out = open_output(args.output);
    write_preprocessed(out, corpus, args, sub[0]);
    return kExitSuccess;
  }
  const auto [train, dev] = split_dev(corpus, args.dev_stride);
  auto out = open_output(args.output);
  write_preprocessed(out, train, args, sub[0]);
  auto dev_out = open_output(args.dev_output);
  write_preprocessed(dev_out, dev, args, sub[0]);
  return kExitSuccess;
}

// --- train ------------------------------------------------------------------

int cmd_train(const std::string& config_path, const Settings& cli_settings, std::ostream& out) {
  const Settings file = config_path.empty() ? Settings{} : read_config_file(config_path);
  const RunConfig rc = resolve_config(file, cli_settings);
  if (!rc.train) throw ConfigError("train: --train is required");
  if (!rc.model) throw ConfigError("train: --model is required");

  const auto corpus = read_conll_file(*rc.train);
  if (corpus.empty()) throw DataError(rc.train->string() + ": no sentences");
  std::vector<LabeledSentence> dev;
  if (rc.dev) dev = read_conll_file(*rc.dev);

  std::optional<EmbeddingTable> pretrained;
  if (rc.embeddings) {
    if (!rc.hp.uses_words()) throw ConfigError("--embeddings given but the charnn variant has no word table");
    std::ifstream in(*rc.embeddings);
    if (!in) throw DataError("cannot open " + rc.embeddings->string());
    Rng rng(rc.hp.seed);
    try {
      pretrained = load_word2vec_text(in, rng);
    } catch (const DataError& e) {
      throw DataError(rc.embeddings->string() + ": " + e.what());
    }
  }

  out << "hyperparameters:\n";
  for (const auto& line : rc.hp.describe()) out << "  " << line << '\n';
  out << "training sentences=" << corpus.size() << " dev sentences=" << dev.size() << '\n';
  out.flush();

  const Model initial = initialize_model(rc.hp, corpus, pretrained ? &*pretrained : nullptr);
  TrainResult result = train(initial, corpus, dev, [&out](const EpochRecord& e) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "epoch %3d  lr=%-10g loss=%-14.6f dev P=%6.2f R=%6.2f F1=%6.2f\n", e.epoch,
                  e.learning_rate, e.loss, e.dev.overall.precision(), e.dev.overall.recall(), e.dev.overall.f1());
    out << buf;
    out.flush();
  });
  out << "best_epoch=" << result.report.best_epoch << '\n';

  save_model_file(*rc.model, result.model);
  const std::filesystem::path report_path = rc.report ? *rc.report : std::filesystem::path(rc.model->string() + ".report");
  auto report = open_output(report_path.string());
  report << result.report.key_values();

  if (rc.test) {
    const auto test = read_conll_file(*rc.test);
    const EvalReport r = evaluate(test, tag_corpus(result.model, test));
    out << "test:\n" << format_report(r);
  }
  return kExitSuccess;
}

// --- tag --------------------------------------------------------------------

struct TagArgs {
  std::string model;
  std::string input;
  std::string output;
  bool with_gold = false;
  bool decode_mask = false;
};

int cmd_tag(const TagArgs& args, std::ostream& out) {
  Model model = load_model_file(args.model);
  if (args.decode_mask) model.hp.decode_mask = true;
  ConllOptions options;
  options.require_tags = args.with_gold;
  const auto corpus = read_conll_file(args.input, options);
  std::ofstream file;
  if (!args.output.empty()) file = open_output(args.output);
  std::ostream& sink = args.output.empty() ? out : file;
  for (const auto& sentence : corpus) {
    const auto predicted = tag_sentence(model, sentence.tokens);
    for (std::size_t i = 0; i < sentence.size(); ++i) {
      sink << sentence.tokens[i].surface << ' ';
      if (args.with_gold) sink << sentence.tags[i] << ' ';
      sink << predicted[i] << '\n';
    }
    sink << '\n';
  }
  return kExitSuccess;
}

// --- evaluate ---------------------------------------------------------------

struct EvaluateArgs {
  std::string gold;
  std::string predicted;
  std::string conlleval;
  bool per_type = true;
};

int cmd_evaluate(const EvaluateArgs& args, std::ostream& out) {
  EvalReport report;
  if (!args.conlleval.empty()) {
    std::ifstream in(args.conlleval);
    if (!in) throw DataError("cannot open " + args.conlleval);
    report = evaluate_conlleval(in);
  } else {
    if (args.gold.empty() || args.predicted.empty()) {
      throw ConfigError("evaluate: give a conlleval file, or both --gold and --predicted");
    }
    const auto gold = read_conll_file(args.gold);
    const auto predicted_corpus = read_conll_file(args.predicted);
    if (gold.size() != predicted_corpus.size()) {
      throw DataError("gold has " + std::to_string(gold.size()) + " sentences, predicted has " +
                      std::to_string(predicted_corpus.size()));
    }
    std::vector<std::vector<std::string>> predicted;
    for (std::size_t i = 0; i < gold.size(); ++i) {
      const auto& g = gold[i];
      const auto& p = predicted_corpus[i];
      if (g.size() != p.size()) {
        throw DataError("sentence " + std::to_string(i) + ": gold has " + std::to_string(g.size()) +
                        " tokens, predicted has " + std::to_string(p.size()));
      }
      for (std::size_t k = 0; k < g.size(); ++k) {
        if (g.tokens[k].surface != p.tokens[k].surface) {
          throw DataError("sentence " + std::to_string(i) + ", token " + std::to_string(k) + ": '" +
                          g.tokens[k].surface + "' vs '" + p.tokens[k].surface + "'");
        }
      }
      predicted.push_back(p.tags);
    }
    report = evaluate(gold, predicted);
  }
  out << format_report(report);
  if (args.per_type) {
    const std::pair<std::string, EvalReport> rows[] = {{"system", report}};
    out << '\n' << report_table(rows, TableMode::PerType);
  }
  return kExitSuccess;
}

// Adds "--flag" options bound to Settings keys, recording only given ones.
struct SettingOptions {
  std::map<std::string, std::string> values;
  std::vector<std::pair<std::string, CLI::Option*>> options;
  std::vector<std::pair<std::string, CLI::Option*>> flags;

  void add(CLI::App* app, const std::string& key, const std::string& help) {
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    options.emplace_back(key, app->add_option(flag, values[key], help));
  }
  void add_flag(CLI::App* app, const std::string& key, const std::string& help) {
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    flags.emplace_back(key, app->add_flag(flag, help));
  }
  Settings given() const {
    Settings s;
    for (const auto& [key, opt] : options) {
      if (opt->count() > 0) s[key] = values.at(key);
    }
    for (const auto& [key, opt] : flags) {
      if (opt->count() > 0) s[key] = "true";
    }
    return s;
  }
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"charwnn: named entity recognition with word and character embeddings"};
  app.require_subcommand(1);

  PreprocessArgs pre;
  auto* preprocess = app.add_subcommand("preprocess", "Normalize a column-format corpus (lowercase, digits to 0)");
  preprocess->add_option("--input", pre.input, "Input corpus")->required();
  preprocess->add_option("--output", pre.output, "Output corpus")->required();
  preprocess->add_flag("--keep-surface", pre.keep_surface, "Write 'surface normalized tag' columns");
  preprocess->add_flag("--replace-non-roman", pre.replace_non_roman,
                       "Replace characters outside the Latin script by the substitute character");
  preprocess->add_option("--substitute", pre.substitute, "Substitute for non-roman characters")
      ->capture_default_str();
  preprocess->add_option("--dev-output", pre.dev_output,
                         "Also split off every N-th sentence (see --dev-stride) into this file");
  preprocess->add_option("--dev-stride", pre.dev_stride, "Development split stride (20 = 5%)")
      ->capture_default_str();

  auto* train_cmd = app.add_subcommand("train", "Train a model");
  std::string config_path;
  SettingOptions settings;
  train_cmd->add_option("--config", config_path, "key=value config file");
  settings.add(train_cmd, "train", "Training corpus (CoNLL columns)");
  settings.add(train_cmd, "dev", "Development corpus used for model selection");
  settings.add(train_cmd, "test", "Test corpus evaluated with the selected model");
  settings.add(train_cmd, "embeddings", "Pre-trained word vectors, word2vec text format");
  settings.add(train_cmd, "model", "Output model file");
  settings.add(train_cmd, "report", "Key-value training report (default: <model>.report)");
  settings.add(train_cmd, "variant", "charwnn | wnn | charnn");
  settings.add(train_cmd, "seed", "Random seed");
  settings.add(train_cmd, "lr", "Learning rate");
  settings.add(train_cmd, "epochs", "Number of epochs");
  settings.add_flag(train_cmd, "freeze_embeddings", "Do not update word embeddings");
  settings.add_flag(train_cmd, "decode_mask", "Forbid IOB2-illegal transitions when decoding");
  settings.add(train_cmd, "lr_decay", "Per-epoch learning rate factor (1 = constant)");
  settings.add(train_cmd, "word_dim", "Word embedding size");
  settings.add(train_cmd, "word_window", "Word context window");
  settings.add(train_cmd, "char_dim", "Character embedding size");
  settings.add(train_cmd, "char_window", "Character context window");
  settings.add(train_cmd, "conv_units", "Convolutional units");
  settings.add(train_cmd, "hidden_units", "Hidden units");
  settings.add(train_cmd, "capitalization", "WNN capitalization feature (true/false)");
  settings.add(train_cmd, "suffix", "WNN suffix feature (true/false)");
  settings.add(train_cmd, "suffix_length", "Suffix length");
  settings.add(train_cmd, "feature_dim", "Capitalization/suffix embedding size");

  TagArgs tag_args;
  auto* tag_cmd = app.add_subcommand("tag", "Tag a corpus with a trained model");
  tag_cmd->add_option("--model", tag_args.model, "Model file")->required();
  tag_cmd->add_option("--input,--test", tag_args.input, "Tokenized input (first column is the token)")->required();
  tag_cmd->add_option("--output", tag_args.output, "Output file (default: stdout)");
  tag_cmd->add_flag("--with-gold", tag_args.with_gold, "Input has gold tags; write 'token gold predicted'");
  tag_cmd->add_flag("--decode-mask", tag_args.decode_mask, "Forbid IOB2-illegal transitions");

  EvaluateArgs eval_args;
  auto* eval_cmd = app.add_subcommand("evaluate", "Chunk precision/recall/F1, conlleval semantics");
  eval_cmd->add_option("conlleval", eval_args.conlleval, "File with 'token gold predicted' columns");
  eval_cmd->add_option("--gold", eval_args.gold, "Gold corpus");
  eval_cmd->add_option("--predicted", eval_args.predicted, "Predicted corpus, same tokens");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitSuccess;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*preprocess) return cmd_preprocess(pre, out);
    if (*train_cmd) return cmd_train(config_path, settings.given(), out);
    if (*tag_cmd) return cmd_tag(tag_args, out);
    if (*eval_cmd) return cmd_evaluate(eval_args, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace charwnn
