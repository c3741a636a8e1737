#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "charwnn/corpus_io.hpp"

namespace charwnn {

// Chunk counts with conlleval's derived percentages.
struct ChunkScores {
  std::size_t gold = 0;
  std::size_t predicted = 0;
  std::size_t correct = 0;

  double precision() const;  // 100 * correct / predicted, 0 when nothing predicted
  double recall() const;     // 100 * correct / gold, 0 when no gold chunks
  double f1() const;         // 2PR / (P + R), 0 when P + R = 0
};

struct EvalReport {
  ChunkScores overall;
  std::map<std::string, ChunkScores> per_type;
  std::size_t tokens = 0;
  std::size_t correct_tokens = 0;

  double token_accuracy() const;
};

// A predicted chunk counts as correct iff type, start and end all match a
// gold chunk. Chunks come from iob2_decode.
EvalReport evaluate(std::span<const LabeledSentence> gold, std::span<const std::vector<std::string>> predicted);
EvalReport evaluate(std::span<const std::vector<std::string>> gold, std::span<const std::vector<std::string>> predicted);

// conlleval input: "token ... gold predicted" per line, blank line between
// sentences; "-X-" boundary lines are treated as blank.
EvalReport evaluate_conlleval(std::istream& in, char separator = ' ');

// conlleval-style summary text.
std::string format_report(const EvalReport& report);

enum class TableMode { Overall, PerType };

// Aligned Prec./Rec./F1 table, two decimals. Overall: one row per system.
// PerType: one row per entity type plus "Overall", one column group per system.
std::string report_table(std::span<const std::pair<std::string, EvalReport>> reports,
                         TableMode mode = TableMode::Overall);

}  // namespace charwnn
