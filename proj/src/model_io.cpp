#include "charwnn/model_io.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <type_traits>

#include <json.hpp>

#include "charwnn/errors.hpp"

namespace charwnn {

using nlohmann::json;

namespace {

constexpr std::string_view kMagic = "CHARWNN-MODEL";

json hyperparameters_to_json(const Hyperparameters& hp) {
  return {
      {"variant", std::string(variant_name(hp.variant))},
      {"word_dim", hp.word_dim},
      {"word_window", hp.word_window},
      {"char_dim", hp.char_dim},
      {"char_window", hp.char_window},
      {"conv_units", hp.conv_units},
      {"hidden_units", hp.hidden_units},
      {"learning_rate", hp.learning_rate},
      {"epochs", hp.max_epochs},
      {"seed", hp.seed},
      {"capitalization", hp.features.capitalization},
      {"suffix", hp.features.suffix},
      {"suffix_length", hp.features.suffix_length},
      {"feature_dim", hp.features.dimension},
      {"freeze_embeddings", hp.freeze_word_embeddings},
      {"decode_mask", hp.decode_mask},
      {"lr_decay", hp.lr_decay},
  };
}

Hyperparameters hyperparameters_from_json(const json& j) {
  Hyperparameters hp;
  hp.variant = parse_variant(j.at("variant").get<std::string>());
  hp.word_dim = j.at("word_dim").get<int>();
  hp.word_window = j.at("word_window").get<int>();
  hp.char_dim = j.at("char_dim").get<int>();
  hp.char_window = j.at("char_window").get<int>();
  hp.conv_units = j.at("conv_units").get<int>();
  hp.hidden_units = j.at("hidden_units").get<int>();
  hp.learning_rate = j.at("learning_rate").get<double>();
  hp.max_epochs = j.at("epochs").get<int>();
  hp.seed = j.at("seed").get<std::uint64_t>();
  hp.features.capitalization = j.at("capitalization").get<bool>();
  hp.features.suffix = j.at("suffix").get<bool>();
  hp.features.suffix_length = j.at("suffix_length").get<int>();
  hp.features.dimension = j.at("feature_dim").get<int>();
  hp.freeze_word_embeddings = j.at("freeze_embeddings").get<bool>();
  hp.decode_mask = j.at("decode_mask").get<bool>();
  hp.lr_decay = j.at("lr_decay").get<double>();
  return hp;
}

json vocabulary_to_json(const Vocabulary& v) {
  return {{"entries", v.entries()}, {"padding", v.padding()}, {"unknown", v.unknown()}};
}

Vocabulary vocabulary_from_json(const json& j) {
  return Vocabulary::from_entries(j.at("entries").get<std::vector<std::string>>(), j.at("padding").get<int>(),
                                  j.at("unknown").get<int>());
}

template <typename Values>
struct Tensor {
  std::string name;
  std::size_t rows;
  std::size_t cols;
  Values* values;
};

// Tensors in payload order. Tables a variant does not use are skipped.
template <typename ModelT>
auto tensors(ModelT& m) {
  using Values = std::conditional_t<std::is_const_v<ModelT>, const std::vector<double>, std::vector<double>>;
  std::vector<Tensor<Values>> out;
  const auto& hp = m.hp;
  if (hp.uses_words()) out.push_back({"word_table", m.words.size(), m.words.dimension(), &m.words.values()});
  if (hp.uses_chars()) {
    out.push_back({"char_table", m.chars.char_table.size(), m.chars.char_table.dimension(),
                   &m.chars.char_table.values()});
    out.push_back({"conv_weights", m.chars.weights.rows(), m.chars.weights.cols(), &m.chars.weights.data()});
    out.push_back({"conv_bias", 1, m.chars.bias.size(), &m.chars.bias});
  }
  if (hp.uses_capitalization()) {
    out.push_back({"capitalization_table", m.capitalization.size(), m.capitalization.dimension(),
                   &m.capitalization.values()});
  }
  if (hp.uses_suffix()) {
    out.push_back({"suffix_table", m.suffixes.size(), m.suffixes.dimension(), &m.suffixes.values()});
  }
  out.push_back({"hidden_weights", m.scorer.hidden_weights.rows(), m.scorer.hidden_weights.cols(),
                 &m.scorer.hidden_weights.data()});
  out.push_back({"hidden_bias", 1, m.scorer.hidden_bias.size(), &m.scorer.hidden_bias});
  out.push_back({"output_weights", m.scorer.output_weights.rows(), m.scorer.output_weights.cols(),
                 &m.scorer.output_weights.data()});
  out.push_back({"output_bias", 1, m.scorer.output_bias.size(), &m.scorer.output_bias});
  out.push_back({"transitions", m.transitions.transitions.rows(), m.transitions.transitions.cols(),
                 &m.transitions.transitions.data()});
  out.push_back({"start", 1, m.transitions.start.size(), &m.transitions.start});
  return out;
}

void write_le(std::ostream& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  char bytes[8];
  for (char& b : bytes) {
    b = static_cast<char>(bits & 0xFF);
    bits >>= 8;
  }
  out.write(bytes, 8);
}

double read_le(std::istream& in) {
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char*>(bytes), 8)) throw DataError("model payload is truncated");
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) bits = (bits << 8) | bytes[i];
  return std::bit_cast<double>(bits);
}

}  // namespace

void save_model(std::ostream& out, const Model& model) {
  const Model& m = model;
  json header;
  header["hyperparameters"] = hyperparameters_to_json(m.hp);
  header["tags"] = m.tags.tags();
  json vocab = json::object();
  if (m.hp.uses_words()) vocab["words"] = vocabulary_to_json(m.words.vocabulary());
  if (m.hp.uses_chars()) vocab["chars"] = vocabulary_to_json(m.chars.char_table.vocabulary());
  if (m.hp.uses_capitalization()) vocab["capitalization"] = vocabulary_to_json(m.capitalization.vocabulary());
  if (m.hp.uses_suffix()) vocab["suffixes"] = vocabulary_to_json(m.suffixes.vocabulary());
  header["vocabularies"] = vocab;
  json list = json::array();
  for (const auto& t : tensors(m)) list.push_back({{"name", t.name}, {"rows", t.rows}, {"cols", t.cols}});
  header["tensors"] = list;

  out << kMagic << ' ' << kModelFormatVersion << '\n' << header.dump() << '\n';
  for (const auto& t : tensors(m)) {
    for (double v : *t.values) write_le(out, v);
  }
}

Model load_model(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty model file");
  const std::string prefix = std::string(kMagic) + ' ';
  if (line.rfind(prefix, 0) != 0) throw DataError("not a charwnn model file");
  int version = 0;
  try {
    version = std::stoi(line.substr(prefix.size()));
  } catch (const std::exception&) {
    throw DataError("unreadable model format version");
  }
  if (version != kModelFormatVersion) {
    throw DataError("unsupported model format version " + std::to_string(version) + " (expected " +
                    std::to_string(kModelFormatVersion) + ")");
  }
  if (!std::getline(in, line)) throw DataError("missing model header");

  Model m;
  try {
    const json header = json::parse(line);
    m.hp = hyperparameters_from_json(header.at("hyperparameters"));
    m.hp.validate();
    m.tags = TagSet(header.at("tags").get<std::vector<std::string>>());
    const auto& vocab = header.at("vocabularies");
    const auto hp = m.hp;
    const std::size_t n_tags = m.tags.size();
    const std::size_t hidden = static_cast<std::size_t>(hp.hidden_units);
    if (hp.uses_words()) {
      m.words = EmbeddingTable(vocabulary_from_json(vocab.at("words")), static_cast<std::size_t>(hp.word_dim));
    }
    if (hp.uses_chars()) {
      m.chars.window = hp.char_window;
      m.chars.char_table =
          EmbeddingTable(vocabulary_from_json(vocab.at("chars")), static_cast<std::size_t>(hp.char_dim));
      m.chars.weights = Matrix(static_cast<std::size_t>(hp.conv_units),
                               static_cast<std::size_t>(hp.char_dim * hp.char_window));
      m.chars.bias.assign(static_cast<std::size_t>(hp.conv_units), 0.0);
    }
    if (hp.uses_capitalization()) {
      m.capitalization = EmbeddingTable(vocabulary_from_json(vocab.at("capitalization")),
                                        static_cast<std::size_t>(hp.features.dimension));
    }
    if (hp.uses_suffix()) {
      m.suffixes = EmbeddingTable(vocabulary_from_json(vocab.at("suffixes")),
                                  static_cast<std::size_t>(hp.features.dimension));
    }
    m.scorer.window = hp.word_window;
    m.scorer.hidden_weights = Matrix(hidden, hp.representation_size() * static_cast<std::size_t>(hp.word_window));
    m.scorer.hidden_bias.assign(hidden, 0.0);
    m.scorer.output_weights = Matrix(n_tags, hidden);
    m.scorer.output_bias.assign(n_tags, 0.0);
    m.transitions = TransitionParams(n_tags);

    const auto expected = tensors(m);
    const auto& declared = header.at("tensors");
    if (declared.size() != expected.size()) throw DataError("model header lists an unexpected number of tensors");
    for (std::size_t i = 0; i < expected.size(); ++i) {
      const auto& d = declared[i];
      if (d.at("name").get<std::string>() != expected[i].name || d.at("rows").get<std::size_t>() != expected[i].rows ||
          d.at("cols").get<std::size_t>() != expected[i].cols) {
        throw DataError("tensor '" + expected[i].name + "' does not match the header dimensions");
      }
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed model header: ") + e.what());
  } catch (const ConfigError& e) {
    throw DataError(std::string("malformed model header: ") + e.what());
  }

  for (auto& t : tensors(m)) {
    for (double& v : *t.values) v = read_le(in);
  }
  if (in.peek() != std::char_traits<char>::eof()) throw DataError("trailing bytes after model payload");
  return m;
}

void save_model_file(const std::filesystem::path& path, const Model& model) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  save_model(out, model);
  if (!out) throw DataError("error writing " + path.string());
}

Model load_model_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return load_model(in);
}

}  // namespace charwnn
