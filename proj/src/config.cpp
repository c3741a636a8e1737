#include "charwnn/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>

#include "charwnn/errors.hpp"

namespace charwnn {

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "train",          "dev",          "test",        "embeddings",   "model",         "report",
      "variant",        "seed",         "lr",          "epochs",       "freeze_embeddings", "decode_mask",
      "lr_decay",       "word_dim",     "word_window", "char_dim",     "char_window",   "conv_units",
      "hidden_units",   "capitalization", "suffix",    "suffix_length", "feature_dim",
  };
  return keys;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool known_key(const std::string& key) {
  const auto& keys = config_keys();
  return std::find(keys.begin(), keys.end(), key) != keys.end();
}

int to_int(const std::string& key, const std::string& value) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError(key + ": expected an integer, got '" + value + "'");
  }
  return v;
}

std::uint64_t to_u64(const std::string& key, const std::string& value) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + value + "'");
  }
  return v;
}

double to_double(const std::string& key, const std::string& value) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError(key + ": expected a number, got '" + value + "'");
  }
  return v;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ConfigError(key + ": expected true or false, got '" + value + "'");
}

void apply(RunConfig& rc, const std::string& key, const std::string& value) {
  auto& hp = rc.hp;
  if (key == "train") rc.train = value;
  else if (key == "dev") rc.dev = value;
  else if (key == "test") rc.test = value;
  else if (key == "embeddings") rc.embeddings = value;
  else if (key == "model") rc.model = value;
  else if (key == "report") rc.report = value;
  else if (key == "variant") hp.variant = parse_variant(value);
  else if (key == "seed") hp.seed = to_u64(key, value);
  else if (key == "lr") hp.learning_rate = to_double(key, value);
  else if (key == "epochs") hp.max_epochs = to_int(key, value);
  else if (key == "freeze_embeddings") hp.freeze_word_embeddings = to_bool(key, value);
  else if (key == "decode_mask") hp.decode_mask = to_bool(key, value);
  else if (key == "lr_decay") hp.lr_decay = to_double(key, value);
  else if (key == "word_dim") hp.word_dim = to_int(key, value);
  else if (key == "word_window") hp.word_window = to_int(key, value);
  else if (key == "char_dim") hp.char_dim = to_int(key, value);
  else if (key == "char_window") hp.char_window = to_int(key, value);
  else if (key == "conv_units") hp.conv_units = to_int(key, value);
  else if (key == "hidden_units") hp.hidden_units = to_int(key, value);
  else if (key == "capitalization") hp.features.capitalization = to_bool(key, value);
  else if (key == "suffix") hp.features.suffix = to_bool(key, value);
  else if (key == "suffix_length") hp.features.suffix_length = to_int(key, value);
  else if (key == "feature_dim") hp.features.dimension = to_int(key, value);
  else throw ConfigError("unknown setting '" + key + "'");
}

}  // namespace

Settings parse_config(std::istream& in) {
  Settings settings;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string content = trim(line);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key = trim(std::string_view(content).substr(0, eq));
    const std::string value = trim(std::string_view(content).substr(eq + 1));
    if (!known_key(key)) throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    settings[key] = value;
  }
  return settings;
}

Settings read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_config(in);
}

RunConfig resolve_config(const Settings& file, const Settings& command_line) {
  Variant variant = Variant::CharWNN;
  if (auto it = command_line.find("variant"); it != command_line.end()) {
    variant = parse_variant(it->second);
  } else if (auto jt = file.find("variant"); jt != file.end()) {
    variant = parse_variant(jt->second);
  }
  RunConfig rc;
  rc.hp = Hyperparameters::defaults_for(variant);
  for (const auto& [key, value] : file) apply(rc, key, value);
  for (const auto& [key, value] : command_line) apply(rc, key, value);
  rc.hp.variant = variant;
  rc.hp.validate();
  return rc;
}

}  // namespace charwnn
