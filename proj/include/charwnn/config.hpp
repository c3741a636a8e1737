#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "charwnn/hyperparameters.hpp"

namespace charwnn {

using Settings = std::map<std::string, std::string>;

// Keys accepted in config files and, spelled with dashes, on the command line.
const std::vector<std::string>& config_keys();

// Line-oriented "key = value"; '#' starts a comment. Unknown keys and
// malformed lines are ConfigErrors naming the line.
Settings parse_config(std::istream& in);
Settings read_config_file(const std::filesystem::path& path);

struct RunConfig {
  std::optional<std::filesystem::path> train;
  std::optional<std::filesystem::path> dev;
  std::optional<std::filesystem::path> test;
  std::optional<std::filesystem::path> embeddings;
  std::optional<std::filesystem::path> model;
  std::optional<std::filesystem::path> report;
  Hyperparameters hp;
};

// Command-line settings override the config file, which overrides the
// defaults of the selected variant.
RunConfig resolve_config(const Settings& file, const Settings& command_line);

}  // namespace charwnn
