#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace charwnn {

// Malformed input data. `line` is 1-based, 0 when not applicable.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite training loss.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(int epoch, std::size_t sentence)
      : std::runtime_error("training diverged (non-finite loss) at epoch " + std::to_string(epoch) +
                           ", sentence " + std::to_string(sentence)),
        epoch_(epoch),
        sentence_(sentence) {}
  int epoch() const { return epoch_; }
  std::size_t sentence() const { return sentence_; }

 private:
  int epoch_;
  std::size_t sentence_;
};

}  // namespace charwnn
