#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "../support/synthetic.hpp"
#include "charwnn/cli.hpp"
#include "charwnn/config.hpp"
#include "charwnn/errors.hpp"

using namespace charwnn;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("charwnn_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "charwnn");
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void write_corpus(const std::string& path, std::size_t n, std::uint64_t seed) {
  std::ofstream out(path);
  write_conll(out, charwnn::testing::synthetic_corpus(n, seed));
}

const std::vector<std::string> kSmall = {"--word-dim", "6", "--hidden-units", "8", "--conv-units", "5",
                                         "--char-dim", "4", "--epochs", "2"};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config precedence: command line over file over variant defaults") {
  std::istringstream file("variant = wnn\nlr = 0.01\nhidden_units = 77  # comment\nsuffix = false\n");
  const auto settings = parse_config(file);
  auto rc = resolve_config(settings, {{"lr", "0.02"}});
  CHECK(rc.hp.variant == Variant::WNN);
  CHECK(rc.hp.learning_rate == 0.02);
  CHECK(rc.hp.hidden_units == 77);
  CHECK(rc.hp.features.capitalization);
  CHECK_FALSE(rc.hp.features.suffix);
  CHECK(rc.hp.word_dim == 100);
  rc = resolve_config(settings, {{"variant", "charnn"}});
  CHECK(rc.hp.variant == Variant::CharNN);
  CHECK(rc.hp.char_dim == 50);
  CHECK(rc.hp.conv_units == 200);
  rc = resolve_config({}, {});
  CHECK(rc.hp.variant == Variant::CharWNN);
  CHECK(rc.hp.char_dim == 10);
  CHECK(rc.hp.conv_units == 50);
}

TEST_CASE("bad config lines") {
  std::istringstream unknown("learning_speed = 3\n");
  CHECK_THROWS_AS(parse_config(unknown), ConfigError);
  std::istringstream no_eq("\n\nlr 0.1\n");
  try {
    parse_config(no_eq);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(resolve_config({{"word_window", "4"}}, {}), ConfigError);
  CHECK_THROWS_AS(resolve_config({{"epochs", "many"}}, {}), ConfigError);
  CHECK_THROWS_AS(resolve_config({{"variant", "rnn"}}, {}), ConfigError);
}

TEST_CASE("usage errors exit with 1") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({"train", "--model", "x"}).code == kExitUsage);
  CHECK(run({"train", "--train", "x", "--model", "y", "--word-window", "4"}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitSuccess);
}

TEST_CASE("data errors exit with 2") {
  TempDir dir;
  CHECK(run({"train", "--train", dir / "missing.txt", "--model", dir / "m"}).code == kExitData);
  {
    std::ofstream bad(dir / "bad.txt");
    bad << "Anna B-PER\nlonely\n";
  }
  const auto r = run({"train", "--train", dir / "bad.txt", "--model", dir / "m"});
  CHECK(r.code == kExitData);
  CHECK(r.err.find("line 2") != std::string::npos);
  {
    std::ofstream model(dir / "v9.model");
    model << "CHARWNN-MODEL 9\n{}\n";
  }
  write_corpus(dir / "t.txt", 2, 1);
  CHECK(run({"tag", "--model", dir / "v9.model", "--input", dir / "t.txt"}).code == kExitData);
}

TEST_CASE("train, tag and evaluate end to end") {
  TempDir dir;
  write_corpus(dir / "train.txt", 30, 1);
  write_corpus(dir / "dev.txt", 10, 2);
  auto args = std::vector<std::string>{"train", "--train", dir / "train.txt", "--dev", dir / "dev.txt",
                                       "--test", dir / "dev.txt", "--model", dir / "m.bin"};
  args.insert(args.end(), kSmall.begin(), kSmall.end());
  const auto r = run(args);
  REQUIRE(r.code == kExitSuccess);
  CHECK(r.out.find("epoch   2") != std::string::npos);
  CHECK(r.out.find("test:") != std::string::npos);
  const auto report = slurp(dir / "m.bin.report");
  CHECK(report.find("hl_u=8\n") != std::string::npos);
  CHECK(report.find("best_epoch=") != std::string::npos);

  const auto tagged = run({"tag", "--model", dir / "m.bin", "--input", dir / "dev.txt", "--with-gold", "--output",
                           dir / "pred.txt"});
  REQUIRE(tagged.code == kExitSuccess);
  const auto ev = run({"evaluate", dir / "pred.txt"});
  CHECK(ev.code == kExitSuccess);
  CHECK(ev.out.find("processed") != std::string::npos);

  // Tagging untagged text from stdout.
  {
    std::ofstream plain(dir / "plain.txt");
    plain << "Dr\nAnna\nsaid\n\n";
  }
  const auto plain = run({"tag", "--model", dir / "m.bin", "--input", dir / "plain.txt"});
  CHECK(plain.code == kExitSuccess);
  CHECK(plain.out.rfind("Dr ", 0) == 0);

  // Empty input gives empty output.
  { std::ofstream empty(dir / "empty.txt"); }
  const auto none = run({"tag", "--model", dir / "m.bin", "--input", dir / "empty.txt"});
  CHECK(none.code == kExitSuccess);
  CHECK(none.out.empty());
}

TEST_CASE("same seed writes byte-identical model files") {
  TempDir dir;
  write_corpus(dir / "train.txt", 10, 1);
  for (const char* name : {"a.bin", "b.bin"}) {
    auto args = std::vector<std::string>{"train", "--train", dir / "train.txt", "--model", dir / name};
    args.insert(args.end(), kSmall.begin(), kSmall.end());
    REQUIRE(run(args).code == kExitSuccess);
  }
  CHECK(slurp(dir / "a.bin") == slurp(dir / "b.bin"));
}

TEST_CASE("variant flags select the published columns") {
  TempDir dir;
  write_corpus(dir / "train.txt", 3, 1);
  {
    std::ofstream cfg(dir / "run.cfg");
    cfg << "epochs = 0\nhidden_units = 6\n";
  }
  const auto charnn = run({"train", "--config", dir / "run.cfg", "--train", dir / "train.txt", "--model",
                           dir / "c.bin", "--variant", "charnn"});
  REQUIRE(charnn.code == kExitSuccess);
  CHECK(charnn.out.find("d_chr=50\n") != std::string::npos);
  CHECK(charnn.out.find("cl_u=200\n") != std::string::npos);
  CHECK(charnn.out.find("d_wrd=-\n") != std::string::npos);
  CHECK(charnn.out.find("hl_u=6\n") != std::string::npos);
  const auto wnn = run({"train", "--config", dir / "run.cfg", "--train", dir / "train.txt", "--model",
                        dir / "w.bin", "--variant", "wnn"});
  REQUIRE(wnn.code == kExitSuccess);
  CHECK(wnn.out.find("capitalization=5-class\n") != std::string::npos);
  CHECK(wnn.out.find("suffix_length=3\n") != std::string::npos);
  CHECK(wnn.out.find("feature_dim=5\n") != std::string::npos);
}

TEST_CASE("preprocess normalizes and splits") {
  TempDir dir;
  {
    std::ofstream in(dir / "raw.txt");
    for (int i = 0; i < 40; ++i) in << "Em O\n19" << i << " O\nМосква B-LOC\n\n";
  }
  const auto r = run({"preprocess", "--input", dir / "raw.txt", "--output", dir / "out.txt", "--keep-surface",
                      "--replace-non-roman", "--dev-output", dir / "dev.txt"});
  REQUIRE(r.code == kExitSuccess);
  const auto out = slurp(dir / "out.txt");
  CHECK(out.rfind("Em em O\n190 000 O\n###### ###### B-LOC\n\n", 0) == 0);
  const auto dev = slurp(dir / "dev.txt");
  CHECK(dev.find("1919 0000 O") != std::string::npos);
  CHECK(std::count(dev.begin(), dev.end(), '\n') == 2 * 4);
}

}

TEST_SUITE("cli") {

TEST_CASE("preprocess records normalized digits and is idempotent") {
  TempDir dir;
  {
    std::ofstream in(dir / "raw.txt");
    in << "Em O\n1984 O\nLisboa B-LOC\n\n";
  }
  REQUIRE(run({"preprocess", "--input", dir / "raw.txt", "--output", dir / "once.txt"}).code == kExitSuccess);
  CHECK(slurp(dir / "once.txt") == "em O\n0000 O\nlisboa B-LOC\n\n");
  REQUIRE(run({"preprocess", "--input", dir / "once.txt", "--output", dir / "twice.txt"}).code == kExitSuccess);
  CHECK(slurp(dir / "twice.txt") == slurp(dir / "once.txt"));
  CHECK(run({"preprocess", "--input", dir / "raw.txt", "--output", dir / "x.txt", "--substitute", "ab"}).code ==
        kExitUsage);
}

TEST_CASE("a model overfit on one sentence tags it perfectly") {
  TempDir dir;
  {
    std::ofstream in(dir / "one.txt");
    in << "Dr O\nHugo B-PER\nRocha I-PER\nvisited O\nQuito B-LOC\n\n";
  }
  REQUIRE(run({"train", "--train", dir / "one.txt", "--model", dir / "m.bin", "--epochs", "60", "--lr", "0.05",
               "--word-dim", "6", "--hidden-units", "8", "--conv-units", "5"})
              .code == kExitSuccess);
  const auto tagged = run({"tag", "--model", dir / "m.bin", "--input", dir / "one.txt", "--with-gold"});
  REQUIRE(tagged.code == kExitSuccess);
  CHECK(tagged.out == "Dr O O\nHugo B-PER B-PER\nRocha I-PER I-PER\nvisited O O\nQuito B-LOC B-LOC\n\n");
  {
    std::ofstream out(dir / "pred.txt");
    out << tagged.out;
  }
  const auto ev = run({"evaluate", dir / "pred.txt"});
  CHECK(ev.out.find("FB1: 100.00") != std::string::npos);
  const auto aligned = run({"evaluate", "--gold", dir / "one.txt", "--predicted", dir / "one.txt"});
  CHECK(aligned.code == kExitSuccess);
  CHECK(aligned.out.find("Overall |  100.00  100.00  100.00") != std::string::npos);
}

}
