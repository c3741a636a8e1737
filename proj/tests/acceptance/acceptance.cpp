// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <sstream>
#include <string>

#include "../support/models.hpp"
#include "../support/oracles.hpp"
#include "../support/synthetic.hpp"
#include "charwnn/cli.hpp"
#include "charwnn/evaluation.hpp"
#include "charwnn/model_io.hpp"
#include "charwnn/trainer.hpp"

using namespace charwnn;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<testing::RandomInstance> instances(std::size_t count, std::size_t max_len, std::size_t max_tags,
                                               std::uint64_t seed) {
  Rng rng(seed);
  std::vector<testing::RandomInstance> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(testing::random_instance(rng, max_len, max_tags));
  return out;
}

Outcome viterbi_exactness() {
  const auto set = instances(200, 6, 5, 2024);
  const auto t0 = Clock::now();
  std::size_t mismatches = 0;
  for (const auto& inst : set) {
    const auto d = viterbi_decode(inst.emissions, inst.transitions);
    const auto bf = testing::brute_force(inst.emissions, inst.transitions);
    if (d.path != bf.best_path || d.score != bf.best_score) ++mismatches;
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < 5.0,
          std::to_string(mismatches) + " mismatches in 200 instances, " + fmt("%.3f s", secs)};
}

Outcome partition_exactness() {
  double worst = 0.0;
  for (const auto& inst : instances(200, 6, 5, 2024)) {
    const auto bf = testing::brute_force(inst.emissions, inst.transitions);
    worst = std::max(worst, std::abs(log_partition(inst.emissions, inst.transitions) - bf.log_partition));
  }
  return {worst <= 1e-9, "max abs error " + fmt("%.3g", worst)};
}

Outcome likelihood_normalization() {
  double worst = 0.0;
  for (const auto& inst : instances(200, 4, 4, 77)) {
    double total = 0.0;
    for (const auto& p : testing::all_paths(inst.emissions.rows(), inst.transitions.num_tags())) {
      total += std::exp(log_likelihood(inst.emissions, inst.transitions, p).value);
    }
    worst = std::max(worst, std::abs(total - 1.0));
  }
  return {worst <= 1e-9, "max |sum - 1| " + fmt("%.3g", worst)};
}

Outcome gradient_check_criterion() {
  const auto s = testing::sentence("Dr Anna visited", "O B-PER O");
  const LabeledSentence corpus[] = {s};
  auto model = initialize_model(testing::small_hp(), corpus);
  testing::perturb(model, 5);
  const auto report = gradient_check(model, s);
  const std::vector<std::string> required = {"word_table", "char_table", "conv_weights", "conv_bias", "hidden_weights",
                                             "hidden_bias", "output_weights", "output_bias", "transitions", "start"};
  bool all = true;
  double worst = 0.0;
  double weakest_fault = INFINITY;
  for (const auto& g : required) {
    if (!report.max_relative_error.count(g)) return {false, "group " + g + " missing"};
    worst = std::max(worst, report.max_relative_error.at(g));
    GradientCheckOptions opt;
    opt.corrupt_group = g;
    const double fault = gradient_check(model, s, opt).max_relative_error.at(g);
    weakest_fault = std::min(weakest_fault, fault);
    all = all && fault > 0.1;
  }
  all = all && worst <= 1e-6;
  return {all, "max relative error " + fmt("%.3g", worst) + ", smallest injected-fault error " +
                   fmt("%.3g", weakest_fault)};
}

Outcome synthetic_convergence() {
  const auto corpus = testing::synthetic_corpus(50, 11);
  const auto held_out = testing::synthetic_corpus(20, 12);
  auto hp = Hyperparameters::defaults_for(Variant::CharWNN);
  hp.word_dim = 10;
  hp.hidden_units = 20;
  hp.conv_units = 10;
  hp.max_epochs = 20;
  const auto t0 = Clock::now();
  // No development set: the last epoch's parameters are kept, so the
  // held-out sentences play no part in training or model selection.
  const auto result = train(corpus, {}, hp);
  const double secs = seconds_since(t0);
  const auto train_eval = evaluate(corpus, tag_corpus(result.model, corpus));
  const auto test_eval = evaluate(held_out, tag_corpus(result.model, held_out));
  const bool ok = train_eval.token_accuracy() == 100.0 && test_eval.overall.f1() >= 95.0 && secs < 120.0;
  return {ok, "train token accuracy " + fmt("%.2f", train_eval.token_accuracy()) + ", held-out F1 " +
                  fmt("%.2f", test_eval.overall.f1()) + ", 20 epochs in " + fmt("%.2f s", secs)};
}

Outcome evaluation_parity() {
  const fs::path dir = fs::path(CHARWNN_TEST_DATA) / "conlleval";
  std::ifstream ef(dir / "expected.json");
  if (!ef) return {false, "fixtures missing"};
  const auto expected = nlohmann::json::parse(ef);
  std::size_t failures = 0;
  auto r2 = [](double v) { return std::round(v * 100.0) / 100.0; };
  for (const auto& [name, e] : expected.items()) {
    std::ifstream in(dir / (name + ".txt"));
    const auto r = evaluate_conlleval(in);
    bool ok = r.overall.gold == e["gold"].get<std::size_t>() && r.overall.predicted == e["predicted"].get<std::size_t>() &&
              r.overall.correct == e["correct"].get<std::size_t>() && r2(r.overall.precision()) == e["prf"][0].get<double>() &&
              r2(r.overall.recall()) == e["prf"][1].get<double>() && r2(r.overall.f1()) == e["prf"][2].get<double>();
    for (const auto& [type, te] : e["types"].items()) {
      const auto it = r.per_type.find(type);
      ok = ok && it != r.per_type.end() && it->second.correct == te["correct"].get<std::size_t>() &&
           it->second.gold == te["gold"].get<std::size_t>() && it->second.predicted == te["predicted"].get<std::size_t>() &&
           r2(it->second.f1()) == te["prf"][2].get<double>();
    }
    if (!ok) {
      ++failures;
      std::fprintf(stderr, "  evaluation parity: case %s differs\n", name.c_str());
    }
  }
  return {expected.size() >= 20 && failures == 0,
          std::to_string(expected.size() - failures) + "/" + std::to_string(expected.size()) + " fixture cases agree"};
}

Outcome iob2_round_trip() {
  static const char* types[] = {"PER", "LOC", "ORG", "MISC"};
  Rng rng(31337);
  std::size_t failures = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t length = rng.below(30);
    std::vector<Span> spans;
    for (std::size_t k = 0; k < length;) {
      if (rng.below(3) == 0) {
        const std::size_t len = 1 + rng.below(std::min<std::size_t>(5, length - k));
        spans.push_back({types[rng.below(4)], k, k + len - 1});
        k += len;
      } else {
        ++k;
      }
    }
    if (iob2_decode(iob2_encode(spans, length)) != spans) ++failures;
  }
  return {failures == 0, std::to_string(1000 - failures) + "/1000 span sets round-trip"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

struct TempDir {
  fs::path path = fs::temp_directory_path() / ("charwnn_acceptance_" + std::to_string(::getpid()));
  TempDir() { fs::create_directories(path); }
  ~TempDir() { fs::remove_all(path); }
};

Outcome determinism_and_persistence() {
  TempDir dir;
  const auto corpus = testing::synthetic_corpus(60, 5);
  const auto tagged_corpus = testing::synthetic_corpus(100, 6);
  auto hp = testing::small_hp();
  hp.max_epochs = 3;
  save_model_file(dir.path / "a.model", train(corpus, corpus, hp).model);
  save_model_file(dir.path / "b.model", train(corpus, corpus, hp).model);
  const bool identical = slurp(dir.path / "a.model") == slurp(dir.path / "b.model");
  const auto original = train(corpus, corpus, hp).model;
  save_model_file(dir.path / "c.model", original);
  const auto loaded = load_model_file(dir.path / "c.model");
  const bool same_tags = tag_corpus(original, tagged_corpus) == tag_corpus(loaded, tagged_corpus);
  return {identical && same_tags, std::string("model files ") + (identical ? "byte-identical" : "DIFFER") +
                                      ", tagging of 100 sentences after reload " + (same_tags ? "identical" : "DIFFERS")};
}

Outcome ablation_wiring() {
  TempDir dir;
  {
    std::ofstream out(dir.path / "train.txt");
    write_conll(out, testing::synthetic_corpus(3, 1));
  }
  auto header = [&](const std::string& variant) {
    const auto model = (dir.path / (variant + ".model")).string();
    std::ostringstream out, err;
    const int code = run_cli({"charwnn", "train", "--train", (dir.path / "train.txt").string(), "--model", model,
                              "--variant", variant, "--epochs", "0"},
                             out, err);
    return code == 0 ? slurp(model + ".report") : std::string();
  };
  auto has = [](const std::string& text, const std::string& line) { return text.find(line + "\n") != std::string::npos; };
  const auto charnn = header("charnn");
  const auto wnn = header("wnn");
  const auto charwnn = header("charwnn");
  const bool ok = has(charnn, "d_chr=50") && has(charnn, "cl_u=200") && has(charnn, "d_wrd=-") &&
                  has(wnn, "capitalization=5-class") && has(wnn, "suffix_length=3") && has(wnn, "feature_dim=5") &&
                  has(wnn, "d_chr=-") && has(charwnn, "d_wrd=100") && has(charwnn, "d_chr=10") &&
                  has(charwnn, "cl_u=50") && has(charwnn, "hl_u=300") && has(charwnn, "capitalization=off");
  return {ok, "report headers of charnn, wnn and charwnn runs"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"Viterbi exactness", viterbi_exactness},
      {"Partition exactness", partition_exactness},
      {"Likelihood normalization", likelihood_normalization},
      {"End-to-end gradient check", gradient_check_criterion},
      {"Synthetic convergence", synthetic_convergence},
      {"Evaluation parity", evaluation_parity},
      {"IOB2 round trip", iob2_round_trip},
      {"Determinism and persistence", determinism_and_persistence},
      {"Ablation wiring", ablation_wiring},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s  %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
