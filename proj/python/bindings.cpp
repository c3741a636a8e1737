#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "charwnn/errors.hpp"
#include "charwnn/evaluation.hpp"
#include "charwnn/model_io.hpp"
#include "charwnn/structured_inference.hpp"
#include "charwnn/trainer.hpp"

namespace py = pybind11;
using namespace charwnn;

namespace {

using Rows = std::vector<std::vector<double>>;

Matrix to_matrix(const Rows& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  Matrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw py::value_error("ragged matrix");
    std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
  }
  return m;
}

Rows to_rows(const Matrix& m) {
  Rows rows(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) rows[r].assign(m.row(r).begin(), m.row(r).end());
  return rows;
}

TransitionParams to_transitions(const Rows& transitions, const std::vector<double>& start) {
  TransitionParams p;
  p.transitions = to_matrix(transitions);
  p.start = start;
  return p;
}

std::vector<LabeledSentence> to_corpus(const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>>& data) {
  std::vector<LabeledSentence> corpus;
  corpus.reserve(data.size());
  for (const auto& [words, tags] : data) corpus.push_back(make_sentence(words, tags));
  return corpus;
}

py::dict scores_dict(const ChunkScores& s) {
  py::dict d;
  d["gold"] = s.gold;
  d["predicted"] = s.predicted;
  d["correct"] = s.correct;
  d["precision"] = s.precision();
  d["recall"] = s.recall();
  d["f1"] = s.f1();
  return d;
}

py::dict report_dict(const EvalReport& r) {
  py::dict d = scores_dict(r.overall);
  py::dict types;
  for (const auto& [type, s] : r.per_type) types[py::str(type)] = scores_dict(s);
  d["per_type"] = types;
  d["tokens"] = r.tokens;
  d["token_accuracy"] = r.token_accuracy();
  return d;
}

// Keyword overrides on top of a variant's defaults.
Hyperparameters make_hp(const std::string& variant, const py::kwargs& kwargs) {
  auto hp = Hyperparameters::defaults_for(parse_variant(variant));
  for (const auto& [key, value] : kwargs) {
    const auto k = key.cast<std::string>();
    if (k == "word_dim") hp.word_dim = value.cast<int>();
    else if (k == "word_window") hp.word_window = value.cast<int>();
    else if (k == "char_dim") hp.char_dim = value.cast<int>();
    else if (k == "char_window") hp.char_window = value.cast<int>();
    else if (k == "conv_units") hp.conv_units = value.cast<int>();
    else if (k == "hidden_units") hp.hidden_units = value.cast<int>();
    else if (k == "learning_rate") hp.learning_rate = value.cast<double>();
    else if (k == "epochs") hp.max_epochs = value.cast<int>();
    else if (k == "seed") hp.seed = value.cast<std::uint64_t>();
    else if (k == "lr_decay") hp.lr_decay = value.cast<double>();
    else if (k == "freeze_embeddings") hp.freeze_word_embeddings = value.cast<bool>();
    else if (k == "decode_mask") hp.decode_mask = value.cast<bool>();
    else if (k == "capitalization") hp.features.capitalization = value.cast<bool>();
    else if (k == "suffix") hp.features.suffix = value.cast<bool>();
    else if (k == "suffix_length") hp.features.suffix_length = value.cast<int>();
    else if (k == "feature_dim") hp.features.dimension = value.cast<int>();
    else throw py::type_error("unknown hyperparameter '" + k + "'");
  }
  hp.validate();
  return hp;
}

std::vector<Token> to_tokens(const std::vector<std::string>& words) {
  return {words.begin(), words.end()};
}

}  // namespace

PYBIND11_MODULE(_charwnn, m) {
  m.doc() = "Neural named entity recognition with word and character embeddings";

  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DivergenceError>(m, "DivergenceError", PyExc_ArithmeticError);

  m.def("normalize_word", &normalize_word, py::arg("word"));
  m.def(
      "iob2_decode",
      [](const std::vector<std::string>& tags) {
        std::vector<std::tuple<std::string, std::size_t, std::size_t>> out;
        for (const auto& s : iob2_decode(tags)) out.emplace_back(s.type, s.start, s.end);
        return out;
      },
      py::arg("tags"), "Chunks as (type, start, end) with inclusive 0-based ends.");
  m.def(
      "iob2_encode",
      [](const std::vector<std::tuple<std::string, std::size_t, std::size_t>>& spans, std::size_t length) {
        std::vector<Span> s;
        for (const auto& [type, start, end] : spans) s.push_back({type, start, end});
        return iob2_encode(s, length);
      },
      py::arg("spans"), py::arg("length"));

  m.def(
      "path_score",
      [](const Rows& emissions, const Rows& transitions, const std::vector<double>& start, const std::vector<int>& path) {
        return path_score(to_matrix(emissions), to_transitions(transitions, start), path);
      },
      py::arg("emissions"), py::arg("transitions"), py::arg("start"), py::arg("path"));
  m.def(
      "viterbi_decode",
      [](const Rows& emissions, const Rows& transitions, const std::vector<double>& start) {
        const auto d = viterbi_decode(to_matrix(emissions), to_transitions(transitions, start));
        return py::make_tuple(d.path, d.score);
      },
      py::arg("emissions"), py::arg("transitions"), py::arg("start"));
  m.def(
      "log_partition",
      [](const Rows& emissions, const Rows& transitions, const std::vector<double>& start) {
        return log_partition(to_matrix(emissions), to_transitions(transitions, start));
      },
      py::arg("emissions"), py::arg("transitions"), py::arg("start"));
  m.def(
      "log_likelihood",
      [](const Rows& emissions, const Rows& transitions, const std::vector<double>& start, const std::vector<int>& gold) {
        const auto r = log_likelihood(to_matrix(emissions), to_transitions(transitions, start), gold);
        py::dict d;
        d["value"] = r.value;
        d["d_emissions"] = to_rows(r.d_emissions);
        d["d_transitions"] = to_rows(r.d_transitions.transitions);
        d["d_start"] = r.d_transitions.start;
        return d;
      },
      py::arg("emissions"), py::arg("transitions"), py::arg("start"), py::arg("gold"));

  m.def(
      "evaluate",
      [](const std::vector<std::vector<std::string>>& gold, const std::vector<std::vector<std::string>>& predicted) {
        return report_dict(evaluate(gold, predicted));
      },
      py::arg("gold"), py::arg("predicted"));

  py::class_<Model>(m, "Model")
      .def_static("load", &load_model_file, py::arg("path"))
      .def("save", [](const Model& model, const std::filesystem::path& path) { save_model_file(path, model); },
           py::arg("path"))
      .def("tag", [](const Model& model, const std::vector<std::string>& words) {
             return tag_sentence(model, to_tokens(words));
           }, py::arg("words"))
      .def_property_readonly("tags", [](const Model& model) { return model.tags.tags(); })
      .def_property_readonly("hyperparameters", [](const Model& model) { return model.hp.describe(); })
      .def("__eq__", [](const Model& a, const Model& b) { return a == b; });

  m.def(
      "train",
      [](const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>>& corpus,
         const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>>& dev,
         const std::string& variant, const py::kwargs& kwargs) {
        const auto hp = make_hp(variant, kwargs);
        const auto train_corpus = to_corpus(corpus);
        const auto dev_corpus = to_corpus(dev);
        TrainResult result = [&] {
          py::gil_scoped_release release;
          return train(train_corpus, dev_corpus, hp);
        }();
        py::list epochs;
        for (const auto& e : result.report.epochs) {
          py::dict d;
          d["epoch"] = e.epoch;
          d["learning_rate"] = e.learning_rate;
          d["loss"] = e.loss;
          d["dev"] = report_dict(e.dev);
          epochs.append(d);
        }
        py::dict report;
        report["hyperparameters"] = hp.describe();
        report["epochs"] = epochs;
        report["best_epoch"] = result.report.best_epoch;
        return py::make_tuple(std::move(result.model), report);
      },
      py::arg("corpus"), py::arg("dev") = std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>>{},
      py::arg("variant") = "charwnn",
      "Train on (words, tags) pairs. Keyword arguments override the variant's hyperparameters.");

  m.def(
      "gradient_check",
      [](const std::vector<std::string>& words, const std::vector<std::string>& tags, const std::string& variant,
         const std::optional<std::string>& corrupt_group, const py::kwargs& kwargs) {
        GradientCheckOptions opt;
        opt.corrupt_group = corrupt_group;
        return gradient_check(make_hp(variant, kwargs), make_sentence(words, tags), opt).max_relative_error;
      },
      py::arg("words"), py::arg("tags"), py::arg("variant") = "charwnn", py::arg("corrupt_group") = py::none(),
      "Per parameter group: max relative error between analytic and central-difference gradients.");
}
