#pragma once

#include <filesystem>
#include <iosfwd>

#include "charwnn/model.hpp"

namespace charwnn {

inline constexpr int kModelFormatVersion = 1;

// Layout:
//   "CHARWNN-MODEL <version>\n"
//   one line of JSON: hyperparameters, tag set, vocabularies and the list of
//   tensors {name, rows, cols} in payload order
//   payload: each tensor's rows*cols values as little-endian IEEE-754
//   doubles, row-major. Embedding tables have one row per vocabulary entry.
void save_model(std::ostream& out, const Model& model);
Model load_model(std::istream& in);

void save_model_file(const std::filesystem::path& path, const Model& model);
Model load_model_file(const std::filesystem::path& path);

}  // namespace charwnn
