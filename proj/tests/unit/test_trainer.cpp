#include <doctest.h>

#include <cmath>

#include "../support/models.hpp"
#include "../support/synthetic.hpp"
#include "charwnn/errors.hpp"
#include "charwnn/trainer.hpp"

using namespace charwnn;
using charwnn::testing::perturb;
using charwnn::testing::sentence;
using charwnn::testing::small_hp;

TEST_SUITE("trainer") {

TEST_CASE("zero learning rate leaves parameters unchanged") {
  const auto s = sentence("Dr Anna visited Lisboa", "O B-PER O B-LOC");
  const LabeledSentence corpus[] = {s};
  auto model = initialize_model(small_hp(), corpus);
  const Model before = model;
  const double loss = sgd_step(model, s, 0.0);
  CHECK(loss > 0.0);
  CHECK(model == before);
}

TEST_CASE("a single tag gives zero loss and no change from the likelihood") {
  const auto s = sentence("a b c", "O O O");
  const LabeledSentence corpus[] = {s};
  auto model = initialize_model(small_hp(), corpus);
  REQUIRE(model.tags.size() == 1);
  const Model before = model;
  CHECK(sgd_step(model, s, 0.1) == 0.0);
  CHECK(model == before);
}

TEST_CASE("gradients of every group match finite differences") {
  for (Variant v : {Variant::CharWNN, Variant::WNN, Variant::CharNN}) {
    CAPTURE(variant_name(v));
    const auto s = sentence("Dr Anna visited", "O B-PER O");
    const LabeledSentence corpus[] = {s, sentence("in Lisboa today", "O B-LOC O")};
    auto model = initialize_model(small_hp(v), corpus);
    perturb(model, 5);
    const auto report = gradient_check(model, s);
    for (const auto& [group, err] : report.max_relative_error) {
      CAPTURE(group);
      CHECK(err < 1e-6);
    }
    CHECK(report.max_relative_error.count("transitions") == 1);
    CHECK(report.max_relative_error.count("start") == 1);
  }
}

TEST_CASE("sign-flipped group is caught") {
  const auto s = sentence("Dr Anna visited", "O B-PER O");
  const LabeledSentence corpus[] = {s};
  auto model = initialize_model(small_hp(), corpus);
  perturb(model, 6);
  for (const auto& group : parameter_groups(model)) {
    CAPTURE(group);
    GradientCheckOptions opt;
    opt.corrupt_group = group;
    CHECK(gradient_check(model, s, opt).max_relative_error.at(group) > 0.1);
  }
}

TEST_CASE("parameter groups per variant") {
  const auto s = sentence("a", "B-X");
  const LabeledSentence corpus[] = {s};
  const auto charwnn = parameter_groups(initialize_model(small_hp(Variant::CharWNN), corpus));
  CHECK(charwnn == std::vector<std::string>{"word_table", "char_table", "conv_weights", "conv_bias",
                                            "hidden_weights", "hidden_bias", "output_weights", "output_bias",
                                            "transitions", "start"});
  const auto wnn = parameter_groups(initialize_model(small_hp(Variant::WNN), corpus));
  CHECK(wnn.back() == "suffix_table");
  const auto charnn = parameter_groups(initialize_model(small_hp(Variant::CharNN), corpus));
  CHECK(charnn.front() == "char_table");
}

TEST_CASE("only the sentence's embedding columns move") {
  const std::vector<LabeledSentence> corpus = {sentence("Dr Anna visited", "O B-PER O"),
                                               sentence("the market was quiet", "O O O O")};
  auto model = initialize_model(small_hp(), corpus);
  const Model before = model;
  sgd_step(model, corpus[0], 0.1);
  const auto& vocab = model.words.vocabulary();
  for (const std::string w : {"the", "market", "was", "quiet"}) {
    const auto a = model.words.lookup(w);
    const auto b = before.words.lookup(w);
    CHECK(std::equal(a.begin(), a.end(), b.begin()));
  }
  CHECK_FALSE(std::equal(model.words.lookup("anna").begin(), model.words.lookup("anna").end(),
                         before.words.lookup("anna").begin()));
  // The padding word appears in every window of a short sentence.
  const auto pa = model.words.column(vocab.padding());
  const auto pb = before.words.column(vocab.padding());
  CHECK_FALSE(std::equal(pa.begin(), pa.end(), pb.begin()));
  const auto& chars = model.chars.char_table;
  const auto q = chars.lookup("q");
  const auto q0 = before.chars.char_table.lookup("q");
  CHECK(std::equal(q.begin(), q.end(), q0.begin()));
}

TEST_CASE("frozen word embeddings stay put") {
  const std::vector<LabeledSentence> corpus = {sentence("Dr Anna visited", "O B-PER O")};
  auto hp = small_hp();
  hp.freeze_word_embeddings = true;
  auto model = initialize_model(hp, corpus);
  const Model before = model;
  sgd_step(model, corpus[0], 0.1);
  CHECK(model.words == before.words);
  CHECK_FALSE(model.scorer == before.scorer);
}

TEST_CASE("loss shrinks when overfitting one sentence") {
  const auto s = sentence("Dr Anna Silva visited Lisboa", "O B-PER I-PER O B-LOC");
  const LabeledSentence corpus[] = {s};
  auto model = initialize_model(small_hp(), corpus);
  const double first = sgd_step(model, s, 0.05);
  double last = first;
  for (int i = 0; i < 300; ++i) last = sgd_step(model, s, 0.05);
  CHECK(last >= 0.0);
  CHECK(last < 0.01 * first);
}

TEST_CASE("non-finite loss raises divergence") {
  const auto s = sentence("Dr Anna", "O B-PER");
  const LabeledSentence corpus[] = {s};
  auto model = initialize_model(small_hp(), corpus);
  model.scorer.output_bias[0] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(sgd_step(model, s, 0.1), DivergenceError);
}

TEST_CASE("zero epochs returns the initialization") {
  const auto corpus = charwnn::testing::synthetic_corpus(5, 1);
  auto hp = small_hp();
  hp.max_epochs = 0;
  const auto init = initialize_model(hp, corpus);
  const auto result = train(init, corpus, corpus);
  CHECK(result.model == init);
  CHECK(result.report.epochs.empty());
  CHECK(result.report.best_epoch == 0);
}

TEST_CASE("same seed gives the same loss trajectory") {
  const auto corpus = charwnn::testing::synthetic_corpus(20, 3);
  auto hp = small_hp();
  hp.max_epochs = 3;
  const auto a = train(corpus, corpus, hp);
  const auto b = train(corpus, corpus, hp);
  REQUIRE(a.report.epochs.size() == 3);
  for (std::size_t e = 0; e < 3; ++e) CHECK(a.report.epochs[e].loss == b.report.epochs[e].loss);
  CHECK(a.model == b.model);
  hp.seed = 43;
  const auto c = train(corpus, corpus, hp);
  CHECK(c.report.epochs[0].loss != a.report.epochs[0].loss);
}

TEST_CASE("learning rate decay is applied per epoch") {
  const auto corpus = charwnn::testing::synthetic_corpus(5, 3);
  auto hp = small_hp();
  hp.max_epochs = 3;
  hp.learning_rate = 0.01;
  hp.lr_decay = 0.5;
  const auto r = train(corpus, {}, hp);
  CHECK(r.report.epochs[0].learning_rate == 0.01);
  CHECK(r.report.epochs[2].learning_rate == 0.0025);
  CHECK(r.report.best_epoch == 3);
}

TEST_CASE("synthetic corpus is learned") {
  const auto corpus = charwnn::testing::synthetic_corpus(50, 11);
  const auto held_out = charwnn::testing::synthetic_corpus(20, 12);
  auto hp = Hyperparameters::defaults_for(Variant::CharWNN);
  hp.word_dim = 10;
  hp.hidden_units = 20;
  hp.conv_units = 10;
  hp.max_epochs = 20;
  const auto result = train(corpus, {}, hp);  // no dev set: last epoch is kept
  const auto train_eval = evaluate(corpus, tag_corpus(result.model, corpus));
  const auto test_eval = evaluate(held_out, tag_corpus(result.model, held_out));
  CHECK(train_eval.token_accuracy() == 100.0);
  CHECK(test_eval.overall.f1() >= 95.0);
}

TEST_CASE("report lists hyperparameters and epochs") {
  const auto corpus = charwnn::testing::synthetic_corpus(5, 3);
  auto hp = small_hp();
  hp.max_epochs = 2;
  const auto r = train(corpus, corpus, hp);
  const auto kv = r.report.key_values();
  CHECK(kv.find("variant=charwnn\n") != std::string::npos);
  CHECK(kv.find("epochs_run=2\n") != std::string::npos);
  CHECK(kv.find("epoch.2.dev_f1=") != std::string::npos);
  CHECK(r.report.text().find("cl_u=4") != std::string::npos);
}

}
