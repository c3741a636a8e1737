#include "charwnn/hyperparameters.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "charwnn/errors.hpp"

namespace charwnn {

std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::CharWNN: return "charwnn";
    case Variant::WNN: return "wnn";
    case Variant::CharNN: return "charnn";
  }
  return "charwnn";
}

Variant parse_variant(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "charwnn") return Variant::CharWNN;
  if (lower == "wnn") return Variant::WNN;
  if (lower == "charnn") return Variant::CharNN;
  throw ConfigError("unknown variant '" + std::string(name) + "' (expected charwnn, wnn or charnn)");
}

Hyperparameters Hyperparameters::defaults_for(Variant variant) {
  Hyperparameters hp;
  hp.variant = variant;
  switch (variant) {
    case Variant::CharWNN:
      break;
    case Variant::WNN:
      hp.features.capitalization = true;
      hp.features.suffix = true;
      break;
    case Variant::CharNN:
      hp.char_dim = 50;
      hp.conv_units = 200;
      break;
  }
  return hp;
}

std::size_t Hyperparameters::representation_size() const {
  std::size_t d = 0;
  if (uses_words()) d += static_cast<std::size_t>(word_dim);
  if (uses_chars()) d += static_cast<std::size_t>(conv_units);
  if (uses_capitalization()) d += static_cast<std::size_t>(features.dimension);
  if (uses_suffix()) d += static_cast<std::size_t>(features.dimension);
  return d;
}

void Hyperparameters::validate() const {
  auto positive = [](int v, const char* name) {
    if (v <= 0) throw ConfigError(std::string(name) + " must be positive");
  };
  auto odd = [&](int v, const char* name) {
    positive(v, name);
    if (v % 2 == 0) throw ConfigError(std::string(name) + " must be odd");
  };
  if (uses_words()) positive(word_dim, "word_dim");
  odd(word_window, "word_window");
  if (uses_chars()) {
    positive(char_dim, "char_dim");
    odd(char_window, "char_window");
    if (conv_units < 0) throw ConfigError("conv_units must be non-negative");
  }
  positive(hidden_units, "hidden_units");
  if (uses_suffix()) positive(features.suffix_length, "suffix_length");
  if (uses_capitalization() || uses_suffix()) positive(features.dimension, "feature_dim");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
  if (max_epochs < 0) throw ConfigError("epochs must be non-negative");
  if (!(lr_decay > 0.0)) throw ConfigError("lr_decay must be positive");
  if (representation_size() == 0) throw ConfigError("word representation is empty");
}

std::vector<std::string> Hyperparameters::describe() const {
  auto fmt = [](double v) {
    std::ostringstream os;
    os << v;
    return os.str();
  };
  std::vector<std::string> lines;
  lines.push_back("variant=" + std::string(variant_name(variant)));
  lines.push_back("d_wrd=" + (uses_words() ? std::to_string(word_dim) : std::string("-")));
  lines.push_back("k_wrd=" + std::to_string(word_window));
  lines.push_back("d_chr=" + (uses_chars() ? std::to_string(char_dim) : std::string("-")));
  lines.push_back("k_chr=" + (uses_chars() ? std::to_string(char_window) : std::string("-")));
  lines.push_back("cl_u=" + (uses_chars() ? std::to_string(conv_units) : std::string("-")));
  lines.push_back("hl_u=" + std::to_string(hidden_units));
  lines.push_back("learning_rate=" + fmt(learning_rate));
  lines.push_back("capitalization=" + (uses_capitalization() ? std::string("5-class") : std::string("off")));
  lines.push_back("suffix_length=" + (uses_suffix() ? std::to_string(features.suffix_length) : std::string("off")));
  lines.push_back("feature_dim=" +
                  (uses_capitalization() || uses_suffix() ? std::to_string(features.dimension) : std::string("-")));
  lines.push_back("epochs=" + std::to_string(max_epochs));
  lines.push_back("seed=" + std::to_string(seed));
  lines.push_back(std::string("freeze_embeddings=") + (freeze_word_embeddings ? "true" : "false"));
  lines.push_back(std::string("decode_mask=") + (decode_mask ? "true" : "false"));
  lines.push_back("lr_decay=" + fmt(lr_decay));
  return lines;
}

}  // namespace charwnn
