#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "charwnn/features.hpp"

namespace charwnn {

enum class Variant { CharWNN, WNN, CharNN };

std::string_view variant_name(Variant v);
Variant parse_variant(std::string_view name);  // charwnn | wnn | charnn, case-insensitive

struct Hyperparameters {
  Variant variant = Variant::CharWNN;
  int word_dim = 100;       // d_wrd
  int word_window = 5;      // k_wrd
  int char_dim = 10;        // d_chr
  int char_window = 5;      // k_chr
  int conv_units = 50;      // cl_u
  int hidden_units = 300;   // hl_u
  double learning_rate = 0.0075;
  int max_epochs = 16;
  std::uint64_t seed = 1;
  HandcraftedFeatureSpec features;  // WNN only

  bool freeze_word_embeddings = false;
  bool decode_mask = false;
  // Per-epoch multiplicative learning-rate factor; 1 disables decay.
  double lr_decay = 1.0;

  // Column of the published hyperparameter table for the variant. WNN gets
  // capitalization and suffix features switched on.
  static Hyperparameters defaults_for(Variant variant);

  bool uses_words() const { return variant != Variant::CharNN; }
  bool uses_chars() const { return variant != Variant::WNN; }
  bool uses_capitalization() const { return variant == Variant::WNN && features.capitalization; }
  bool uses_suffix() const { return variant == Variant::WNN && features.suffix; }

  // Size D of the per-word representation u_n.
  std::size_t representation_size() const;

  // Throws ConfigError on non-positive dimensions, even windows or lr <= 0.
  void validate() const;

  // "key=value" lines describing the configuration, in fixed order.
  std::vector<std::string> describe() const;

  bool operator==(const Hyperparameters&) const = default;
};

}  // namespace charwnn
