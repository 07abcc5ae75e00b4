#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "kner/conllu.hpp"
#include "kner/crf.hpp"
#include "kner/error.hpp"
#include "kner/evaluate.hpp"
#include "kner/formats.hpp"

#include "../crf_corpus.hpp"
#include "../oracles.hpp"
#include "../support.hpp"

using namespace kner;

namespace {

CrfInstance words(std::vector<std::string> ws) {
  CrfInstance inst;
  for (auto& w : ws) inst.tokens.push_back({std::move(w), "", ""});
  return inst;
}

CrfInstance labeled(std::vector<std::string> ws, std::vector<std::string> ls) {
  CrfInstance inst = words(std::move(ws));
  inst.labels = std::move(ls);
  return inst;
}

std::vector<NeTag> tags_of(const std::vector<std::string>& labels) {
  std::vector<NeTag> out;
  for (const auto& s : labels) {
    auto t = NeTag::parse(s);
    REQUIRE(t.has_value());
    out.push_back(*t);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Templates

TEST_CASE("built-in templates have the advertised shape") {
  FeatureTemplate t = FeatureTemplate::word_context();
  REQUIRE(t.unigram.size() == 5);
  REQUIRE(t.bigram.size() == 4);
  for (int o = -2; o <= 2; ++o) {
    const auto& pat = t.unigram[static_cast<std::size_t>(o + 2)];
    REQUIRE(pat.atoms.size() == 1);
    CHECK(pat.atoms[0].column == FeatureTemplate::Column::Word);
    CHECK(pat.atoms[0].offset == o);
  }
  for (int o = -2; o <= 1; ++o) {
    const auto& pat = t.bigram[static_cast<std::size_t>(o + 2)];
    REQUIRE(pat.atoms.size() == 2);
    CHECK(pat.atoms[0].offset == o);
    CHECK(pat.atoms[1].offset == o + 1);
  }

  FeatureTemplate tp = FeatureTemplate::word_pos_context(true, true);
  CHECK(tp.unigram.size() == 15);
  CHECK(tp.bigram.size() == 4);
  CHECK(tp.unigram[5].atoms[0].column == FeatureTemplate::Column::Upos);
  CHECK(tp.unigram[10].atoms[0].column == FeatureTemplate::Column::Xpos);

  FeatureTemplate tu = FeatureTemplate::word_pos_context(true, false);
  CHECK(tu.unigram.size() == 10);
}

TEST_CASE("template text round trips") {
  for (const FeatureTemplate& t :
       {FeatureTemplate::word_context(),
        FeatureTemplate::word_pos_context(true, false),
        FeatureTemplate::word_pos_context(true, true)}) {
    CHECK(FeatureTemplate::parse(t.to_string()) == t);
  }
}

TEST_CASE("shipped template files match the built-ins") {
  auto read = [](const std::string& name) {
    std::ifstream in(testutil::template_path(name));
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
  CHECK(FeatureTemplate::parse(read("word.tpl")) ==
        FeatureTemplate::word_context());
  CHECK(FeatureTemplate::parse(read("word_pos.tpl")) ==
        FeatureTemplate::word_pos_context(true, true));
}

TEST_CASE("template parser accepts crlf and several patterns per line") {
  FeatureTemplate t =
      FeatureTemplate::parse("# Unigram\r\nw[0] u[1]\r\n\r\n# Bigram\r\nw[0]/x[-1]\r\n");
  REQUIRE(t.unigram.size() == 2);
  CHECK(t.unigram[1].atoms[0].column == FeatureTemplate::Column::Upos);
  CHECK(t.unigram[1].atoms[0].offset == 1);
  REQUIRE(t.bigram.size() == 1);
  REQUIRE(t.bigram[0].atoms.size() == 2);
  CHECK(t.bigram[0].atoms[1].column == FeatureTemplate::Column::Xpos);
  CHECK(t.bigram[0].atoms[1].offset == -1);
}

TEST_CASE("template parse errors") {
  CHECK_THROWS_WITH_AS(FeatureTemplate::parse("# Unigram\nq[0]\n"),
                       "bad template atom 'q[0]'", Error);
  CHECK_THROWS_WITH_AS(FeatureTemplate::parse("# Unigram\nw[zz]\n"),
                       "bad template atom 'w[zz]'", Error);
  CHECK_THROWS_WITH_AS(FeatureTemplate::parse("# Unigram\nw[0\n"),
                       "bad template atom 'w[0'", Error);
  CHECK_THROWS_WITH_AS(FeatureTemplate::parse("w[0]\n"),
                       "template pattern before a section header", Error);
  CHECK_THROWS_WITH_AS(FeatureTemplate::parse("# Unigram\n# Bigram\n"),
                       "template has no patterns", Error);
  try {
    FeatureTemplate::parse("junk\n");
    FAIL("expected parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
  }
}

// ---------------------------------------------------------------------------
// Feature extraction

TEST_CASE("extraction expands the word window with sentinels") {
  CrfInstance inst = words({"a", "b", "c"});
  FeatureTemplate t = FeatureTemplate::word_context();

  auto at0 = extract_features(inst, 0, t);
  std::vector<std::string> want0 = {
      "u0:__BOS2__", "u1:__BOS1__",    "u2:a",    "u3:b", "u4:c",
      "b0:__BOS2__/__BOS1__", "b1:__BOS1__/a", "b2:a/b", "b3:b/c"};
  CHECK(at0 == want0);

  auto at2 = extract_features(inst, 2, t);
  std::vector<std::string> want2 = {
      "u0:a", "u1:b", "u2:c", "u3:__EOS1__", "u4:__EOS2__",
      "b0:a/b", "b1:b/c", "b2:c/__EOS1__", "b3:__EOS1__/__EOS2__"};
  CHECK(at2 == want2);
}

TEST_CASE("pos patterns are skipped when the corpus has no pos") {
  FeatureTemplate t = FeatureTemplate::word_pos_context(true, true);
  CrfInstance bare = words({"a", "b"});
  auto fs = extract_features(bare, 0, t);
  // 5 word unigrams + 4 word bigrams, nothing else.
  CHECK(fs.size() == 9);
  for (const std::string& f : fs) {
    CAPTURE(f);
    CHECK(f.find("u5:") == std::string::npos);
  }

  CrfInstance tagged = bare;
  tagged.tokens[0].upos = "NOUN";
  // upos present somewhere: upos patterns apply, keeping their pattern ids;
  // a token without the column expands to '_'.
  auto fs2 = extract_features(tagged, 1, t);
  REQUIRE(fs2.size() == 14);
  CHECK(fs2[5] == "u5:__BOS1__");
  CHECK(fs2[6] == "u6:NOUN");
  CHECK(fs2[7] == "u7:_");
}

TEST_CASE("instances convert from morpheme and eojeol sentences") {
  std::ifstream in(testutil::data_path("figure2.conllu"));
  REQUIRE(in.good());
  ConlluOptions options;
  options.mode = ConlluMode::Figure2Compat;
  auto morph = parse_conllu(in, options);
  REQUIRE(morph.size() == 1);
  CrfInstance mi = to_instance(morph[0]);
  REQUIRE(mi.tokens.size() == 21);
  CHECK(mi.tokens[0].word == "프랑스");
  CHECK(mi.tokens[0].upos == "PROPN");
  CHECK(mi.tokens[0].xpos == "NNP");
  CHECK(mi.labels[0] == "B-LOC");
  CHECK(mi.labels[1] == "O");
  CHECK(mi.has_upos());
  CHECK(mi.has_xpos());

  std::ifstream ein(testutil::data_path("figure2_eoj.tsv"));
  REQUIRE(ein.good());
  auto eoj = parse_eojeol(ein);
  REQUIRE(eoj.size() == 1);
  CrfInstance ei = to_instance(eoj[0]);
  REQUIRE(ei.tokens.size() == 12);
  CHECK(ei.tokens[0].word == "프랑스의");
  CHECK(ei.labels[0] == "B-LOC");
  CHECK_FALSE(ei.has_upos());
  CHECK_FALSE(ei.has_xpos());
}

// ---------------------------------------------------------------------------
// Model construction

TEST_CASE("alphabet keeps O first, then first-seen order") {
  std::vector<CrfInstance> corpus = {
      labeled({"a", "b"}, {"B-LOC", "I-LOC"}),
      labeled({"c"}, {"B-PER"}),
  };
  CrfModel m = CrfModel::build(corpus, FeatureTemplate::word_context());
  CHECK(m.labels() == std::vector<std::string>{"O", "B-LOC", "I-LOC", "B-PER"});
  CHECK(m.label_id("O") == 0);
  CHECK(m.label_id("B-PER") == 3);
  CHECK_FALSE(m.label_id("B-ORG").has_value());
}

TEST_CASE("weight layout: bias block plus per-feature blocks") {
  std::vector<CrfInstance> corpus = {labeled({"a"}, {"B-LOC"})};
  CrfModel m = CrfModel::build(corpus, FeatureTemplate::word_context());
  // Labels O and B-LOC; one position, so 5 unigram features, no bigrams.
  CHECK(m.label_count() == 2);
  CHECK(m.feature_count() == 5);
  CHECK(m.weights().size() == 2 * 2 + 5 * 2);
  for (double w : m.weights()) CHECK(w == 0.0);
}

TEST_CASE("build rejects unlabeled instances") {
  std::vector<CrfInstance> corpus = {words({"a"})};
  CHECK_THROWS_WITH_AS(
      (void)CrfModel::build(corpus, FeatureTemplate::word_context()),
      "training instance without labels", Error);
}

TEST_CASE("pairwise score needs an interior position") {
  std::vector<CrfInstance> corpus = {labeled({"a", "b"}, {"O", "O"})};
  CrfModel m = CrfModel::build(corpus, FeatureTemplate::word_context());
  CHECK_THROWS_WITH_AS((void)m.pairwise_score(corpus[0], 0, 0, 0),
                       "pairwise score needs 1 <= pos < n", Error);
  CHECK_THROWS_WITH_AS((void)m.pairwise_score(corpus[0], 2, 0, 0),
                       "pairwise score needs 1 <= pos < n", Error);
}

// ---------------------------------------------------------------------------
// Exact inference against brute force

TEST_CASE("zero weights give log partition n * ln K") {
  std::vector<CrfInstance> corpus = {
      labeled({"a", "b", "c", "d", "e"}, {"O", "B-LOC", "I-LOC", "O", "O"})};
  CrfModel m = CrfModel::build(corpus, FeatureTemplate::word_context());
  const double lnK = std::log(3.0);
  for (std::size_t n = 1; n <= 5; ++n) {
    CrfInstance inst = words({"a", "b", "c", "d", "e"});
    inst.tokens.resize(n);
    CHECK(log_partition(m, inst) ==
          doctest::Approx(static_cast<double>(n) * lnK).epsilon(1e-12));
  }
}

TEST_CASE("forward, marginals and viterbi agree with enumeration") {
  const std::vector<std::vector<std::string>> label_sets = {
      {"O", "B-LOC"},
      {"O", "B-LOC", "I-LOC"},
      {"O", "B-LOC", "I-LOC", "B-PER"},
  };
  std::mt19937_64 rng(20240817);
  std::size_t checked = 0;
  for (int round = 0; round < 40; ++round) {
    const auto& labels = label_sets[rng() % label_sets.size()];
    FeatureTemplate tmpl = (rng() % 2) ? FeatureTemplate::word_context()
                                       : FeatureTemplate::word_pos_context(true, true);
    CrfModel model = oracle::random_model(rng, labels, tmpl);
    for (std::size_t n = 1; n <= 5; ++n) {
      CrfInstance inst = oracle::random_instance(rng, n, labels);
      inst.labels.clear();
      oracle::BruteForce ref = oracle::enumerate(model, inst);

      double logz = log_partition(model, inst);
      CHECK(std::abs(logz - ref.log_z) <=
            1e-9 * std::max(1.0, std::abs(ref.log_z)));

      auto marg = marginals(model, inst);
      REQUIRE(marg.size() == n);
      for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t y = 0; y < labels.size(); ++y) {
          CHECK(std::abs(marg[i][y] - ref.marginals[i][y]) <= 1e-9);
          row += marg[i][y];
        }
        CHECK(row == doctest::Approx(1.0).epsilon(1e-9));
      }

      auto path = decode(model, inst);
      REQUIRE(path.size() == n);
      double path_score = 0.0;
      std::vector<std::size_t> ids;
      for (std::size_t i = 0; i < n; ++i) {
        auto id = model.label_id(path[i]);
        REQUIRE(id.has_value());
        ids.push_back(*id);
        path_score += model.unigram_score(inst, i, *id);
        if (i) path_score += model.pairwise_score(inst, i, ids[i - 1], ids[i]);
      }
      CHECK(std::abs(path_score - ref.best_score) <=
            1e-9 * std::max(1.0, std::abs(ref.best_score)));
      ++checked;
    }
  }
  CHECK(checked == 200);
}

TEST_CASE("gold score equals logZ minus nll") {
  std::mt19937_64 rng(7);
  std::vector<std::string> labels = {"O", "B-LOC", "I-LOC"};
  CrfModel model =
      oracle::random_model(rng, labels, FeatureTemplate::word_context());
  for (int round = 0; round < 20; ++round) {
    CrfInstance inst =
        oracle::random_instance(rng, 1 + rng() % 5, model.labels());
    double nll = sentence_nll(model, inst);
    CHECK(nll >= -1e-12);  // a probability never exceeds 1
    double direct = 0.0;
    std::vector<std::size_t> ids;
    for (std::size_t i = 0; i < inst.tokens.size(); ++i) {
      ids.push_back(*model.label_id(inst.labels[i]));
      direct += model.unigram_score(inst, i, ids[i]);
      if (i) direct += model.pairwise_score(inst, i, ids[i - 1], ids[i]);
    }
    CHECK(log_partition(model, inst) - direct == doctest::Approx(nll).epsilon(1e-9));
  }
}

// ---------------------------------------------------------------------------
// Gradients

TEST_CASE("analytic gradient matches finite differences") {
  std::mt19937_64 rng(20240818);
  const std::vector<std::vector<std::string>> label_sets = {
      {"O", "B-LOC"},
      {"O", "B-LOC", "I-LOC"},
  };
  for (int round = 0; round < 50; ++round) {
    const auto& labels = label_sets[rng() % label_sets.size()];
    CrfModel model = oracle::random_model(
        rng, labels, FeatureTemplate::word_context(), 2, 3);
    std::vector<CrfInstance> batch;
    std::size_t bs = 1 + rng() % 3;
    for (std::size_t b = 0; b < bs; ++b) {
      batch.push_back(
          oracle::random_instance(rng, 1 + rng() % 4, model.labels(), 4));
    }
    double l2 = (round % 2) ? 0.1 : 0.0;

    LossGrad lg = log_likelihood_and_gradient(model, batch, l2);
    std::vector<double> fd = oracle::fd_gradient(model, batch, l2, 1e-5);
    REQUIRE(lg.gradient.size() == fd.size());
    double worst = 0.0;
    for (std::size_t d = 0; d < fd.size(); ++d) {
      double err =
          std::abs(lg.gradient[d] - fd[d]) / std::max(1.0, std::abs(fd[d]));
      worst = std::max(worst, err);
    }
    CAPTURE(round);
    CHECK(worst <= 1e-4);
  }
}

TEST_CASE("l2 term adds exactly half lambda w squared") {
  std::mt19937_64 rng(99);
  std::vector<std::string> labels = {"O", "B-LOC"};
  CrfModel model =
      oracle::random_model(rng, labels, FeatureTemplate::word_context());
  std::vector<CrfInstance> batch = {
      oracle::random_instance(rng, 3, model.labels())};
  LossGrad plain = log_likelihood_and_gradient(model, batch, 0.0);
  LossGrad reg = log_likelihood_and_gradient(model, batch, 0.5);
  double sq = 0.0;
  for (double w : model.weights()) sq += w * w;
  CHECK(reg.loss == doctest::Approx(plain.loss + 0.25 * sq).epsilon(1e-12));
  for (std::size_t d = 0; d < plain.gradient.size(); ++d) {
    CHECK(reg.gradient[d] ==
          doctest::Approx(plain.gradient[d] + 0.5 * model.weights()[d])
              .epsilon(1e-9));
  }
}

TEST_CASE("batch loss is the sum of sentence nlls plus the penalty") {
  std::mt19937_64 rng(100);
  std::vector<std::string> labels = {"O", "B-PER"};
  CrfModel model =
      oracle::random_model(rng, labels, FeatureTemplate::word_context());
  std::vector<CrfInstance> batch;
  for (int i = 0; i < 3; ++i) {
    batch.push_back(oracle::random_instance(rng, 2 + i, model.labels()));
  }
  double expect = 0.0;
  for (const auto& inst : batch) expect += sentence_nll(model, inst);
  CHECK(log_likelihood_and_gradient(model, batch, 0.0).loss ==
        doctest::Approx(expect).epsilon(1e-12));
}

// ---------------------------------------------------------------------------
// Training

TEST_CASE("training memorizes a word-determined corpus") {
  auto corpus = crfcorpus::make_corpus(50, 4242);
  TrainConfig config;
  CrfModel model = train(corpus, FeatureTemplate::word_context(), config);

  CHECK(model.summary().sentences == 50);
  CHECK(model.summary().epoch_loss.size() == 50);
  CHECK(model.summary().loss_nonincreasing);
  const auto& losses = model.summary().epoch_loss;
  for (std::size_t i = 1; i < losses.size(); ++i) {
    CHECK(losses[i] <= losses[i - 1] + 1e-9 * std::max(1.0, std::abs(losses[i - 1])));
  }

  Evaluator ev;
  for (const auto& inst : corpus) {
    auto pred = decode(model, inst);
    ev.add(tags_of(inst.labels), tags_of(pred));
  }
  EvalReport rep = ev.report();
  CHECK(rep.overall.f1() >= 99.0);
  CHECK(rep.token_accuracy() >= 99.0);
}

TEST_CASE("same seed trains to bit-identical bytes") {
  auto corpus = crfcorpus::make_corpus(12, 7);
  TrainConfig config;
  config.epochs = 5;
  config.batch_size = 4;
  auto dump = [&](const CrfModel& m) {
    std::ostringstream out;
    m.save(out);
    return out.str();
  };
  CrfModel a = train(corpus, FeatureTemplate::word_context(), config);
  CrfModel b = train(corpus, FeatureTemplate::word_context(), config);
  CHECK(dump(a) == dump(b));

  TrainConfig other = config;
  other.shuffle_seed = 2;
  CrfModel c = train(corpus, FeatureTemplate::word_context(), other);
  CHECK(dump(a) != dump(c));
}

TEST_CASE("zero epochs leaves the weights at zero") {
  auto corpus = crfcorpus::make_corpus(4, 1);
  TrainConfig config;
  config.epochs = 0;
  CrfModel m = train(corpus, FeatureTemplate::word_context(), config);
  for (double w : m.weights()) CHECK(w == 0.0);
  CHECK(m.summary().epoch_loss.empty());
}

TEST_CASE("training configuration is validated") {
  auto corpus = crfcorpus::make_corpus(2, 1);
  TrainConfig bad;
  bad.batch_size = 0;
  CHECK_THROWS_WITH_AS(
      (void)train(corpus, FeatureTemplate::word_context(), bad),
      "bad training configuration", Error);
  bad = TrainConfig{};
  bad.epochs = -1;
  CHECK_THROWS_WITH_AS(
      (void)train(corpus, FeatureTemplate::word_context(), bad),
      "bad training configuration", Error);
  CHECK_THROWS_WITH_AS(
      (void)train({}, FeatureTemplate::word_context(), TrainConfig{}),
      "empty training corpus", Error);
  std::vector<CrfInstance> with_empty = {labeled({}, {})};
  CHECK_THROWS_WITH_AS(
      (void)train(with_empty, FeatureTemplate::word_context(), TrainConfig{}),
      "empty instance", Error);
}

// ---------------------------------------------------------------------------
// Serialization

TEST_CASE("save and load round trip exactly") {
  auto corpus = crfcorpus::make_corpus(10, 3);
  TrainConfig config;
  config.epochs = 3;
  CrfModel m = train(corpus, FeatureTemplate::word_context(), config);

  std::ostringstream out;
  m.save(out);
  std::istringstream in(out.str());
  CrfModel back = CrfModel::load(in);

  CHECK(back.labels() == m.labels());
  CHECK(back.feature_template() == m.feature_template());
  CHECK(back.feature_count() == m.feature_count());
  CHECK(back.weights() == m.weights());
  CHECK(back.config().epochs == 3);
  CHECK(back.summary().epoch_loss == m.summary().epoch_loss);

  std::ostringstream again;
  back.save(again);
  CHECK(again.str() == out.str());

  CrfInstance probe = words({"seoul", "the", "new", "york"});
  CHECK(decode(back, probe) == decode(m, probe));
}

TEST_CASE("model files survive the filesystem helpers") {
  auto corpus = crfcorpus::make_corpus(4, 9);
  TrainConfig config;
  config.epochs = 2;
  CrfModel m = train(corpus, FeatureTemplate::word_context(), config);
  std::string path = testutil::scratch_path("model.json");
  save_model(m, path);
  CrfModel back = load_model(path);
  CHECK(back.weights() == m.weights());
  CHECK_THROWS_AS((void)load_model(testutil::scratch_path("missing.json")),
                  Error);
}

TEST_CASE("load rejects malformed model files") {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return CrfModel::load(in);
  };
  try {
    parse("not json");
    FAIL("expected parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
    CHECK(std::string(e.what()).find("model file is not valid JSON") == 0);
  }
  CHECK_THROWS_WITH_AS(
      parse(R"({"format":"other","version":1})"), "not a kner-crf model file",
      Error);
  CHECK_THROWS_WITH_AS(
      parse(R"({"format":"kner-crf","version":2})"),
      "unsupported model version 2", Error);
  CHECK_THROWS_WITH_AS(
      parse(R"({"format":"kner-crf","version":1,"labels":[],"template":"","features":[],"weights":[]})"),
      "model has no labels", Error);
  CHECK_THROWS_WITH_AS(
      parse(R"({"format":"kner-crf","version":1,"labels":["O"],)"
            R"("template":"# Unigram\nw[0]\n","features":["z0:x"],"weights":[0]})"),
      "corrupt feature entry 'z0:x'", Error);
  CHECK_THROWS_WITH_AS(
      parse(R"({"format":"kner-crf","version":1,"labels":["O"],)"
            R"("template":"# Unigram\nw[0]\n","features":["u0:x"],"weights":[0]})"),
      "weight vector does not match feature table", Error);
}

// ---------------------------------------------------------------------------
// Constrained decoding

TEST_CASE("constrained decode always yields a valid sequence") {
  std::mt19937_64 rng(20240819);
  std::vector<std::string> bio_labels = {"O", "B-LOC", "I-LOC", "B-PER",
                                         "I-PER"};
  for (int round = 0; round < 30; ++round) {
    CrfModel model = oracle::random_model(rng, bio_labels,
                                          FeatureTemplate::word_context());
    CrfInstance inst = oracle::random_instance(rng, 1 + rng() % 6, bio_labels);
    inst.labels.clear();
    DecodeOptions options;
    options.constrain = true;
    options.scheme = Scheme::BIO;
    auto path = decode(model, inst, options);
    std::vector<NeTag> tags;
    for (const auto& s : path) tags.push_back(*NeTag::parse(s));
    CHECK(validate_sequence(tags, Scheme::BIO).empty());
  }

  std::vector<std::string> bioes_labels = {"O",     "B-LOC", "I-LOC",
                                           "E-LOC", "S-LOC", "S-PER"};
  for (int round = 0; round < 30; ++round) {
    CrfModel model = oracle::random_model(rng, bioes_labels,
                                          FeatureTemplate::word_context());
    CrfInstance inst =
        oracle::random_instance(rng, 1 + rng() % 6, bioes_labels);
    inst.labels.clear();
    DecodeOptions options;
    options.constrain = true;
    options.scheme = Scheme::BIOES;
    auto path = decode(model, inst, options);
    std::vector<NeTag> tags;
    for (const auto& s : path) tags.push_back(*NeTag::parse(s));
    CHECK(validate_sequence(tags, Scheme::BIOES).empty());
  }
}

TEST_CASE("constraint actually changes an adversarial model") {
  std::vector<CrfInstance> corpus = {
      labeled({"a", "b"}, {"B-LOC", "I-LOC"}),
      labeled({"c"}, {"O"}),
  };
  // Unigram-only template so every block past the bias is K wide.
  FeatureTemplate tmpl;
  tmpl.unigram = {{{{FeatureTemplate::Column::Word, 0}}}};
  CrfModel m = CrfModel::build(corpus, tmpl);
  // Push every position hard towards I-LOC.
  std::size_t iloc = *m.label_id("I-LOC");
  const std::size_t K = m.label_count();
  for (std::size_t off = K * K; off + K <= m.weights().size(); off += K) {
    m.weights()[off + iloc] += 5.0;
  }
  CrfInstance probe = words({"a", "b", "c"});
  auto wild = decode(m, probe);
  CHECK(wild == std::vector<std::string>{"I-LOC", "I-LOC", "I-LOC"});

  DecodeOptions options;
  options.constrain = true;
  auto tamed = decode(m, probe, options);
  std::vector<NeTag> tags;
  for (const auto& s : tamed) tags.push_back(*NeTag::parse(s));
  CHECK(validate_sequence(tags, Scheme::BIO).empty());
  // The span itself survives, it just opens legally now.
  CHECK(tamed == std::vector<std::string>{"B-LOC", "I-LOC", "I-LOC"});
}

TEST_CASE("constrained decode needs NE-shaped labels") {
  std::vector<CrfInstance> corpus = {labeled({"a"}, {"FOO"})};
  CrfModel m = CrfModel::build(corpus, FeatureTemplate::word_context());
  DecodeOptions options;
  options.constrain = true;
  CHECK_THROWS_WITH_AS((void)decode(m, words({"a"}), options),
                       "label 'FOO' is not an NE tag; cannot constrain", Error);
}

TEST_CASE("an alphabet with no legal start has no admissible path") {
  // Hand-written model whose only label is I-LOC.
  std::string text =
      R"({"format":"kner-crf","version":1,"labels":["I-LOC"],)"
      R"("template":"# Unigram\nw[0]\n","features":[],"weights":[0.0]})";
  std::istringstream in(text);
  CrfModel m = CrfModel::load(in);
  DecodeOptions options;
  options.constrain = true;
  CHECK_THROWS_WITH_AS((void)decode(m, words({"a"}), options),
                       "no admissible label path", Error);
}

// ---------------------------------------------------------------------------
// Degenerate inputs

TEST_CASE("empty instances are rejected or trivial") {
  auto corpus = crfcorpus::make_corpus(2, 1);
  CrfModel m = train(corpus, FeatureTemplate::word_context(), TrainConfig{});
  CrfInstance empty;
  CHECK(decode(m, empty).empty());
  CHECK_THROWS_WITH_AS((void)log_partition(m, empty), "empty instance", Error);
  CHECK_THROWS_WITH_AS((void)marginals(m, empty), "empty instance", Error);
  CHECK_THROWS_WITH_AS((void)sentence_nll(m, empty), "empty instance", Error);
}

TEST_CASE("unknown words decode with the transition structure alone") {
  auto corpus = crfcorpus::make_corpus(30, 5);
  CrfModel m = train(corpus, FeatureTemplate::word_context(), TrainConfig{});
  auto path = decode(m, words({"zzz", "qqq"}));
  REQUIRE(path.size() == 2);
  for (const auto& s : path) CHECK(m.label_id(s).has_value());
}
