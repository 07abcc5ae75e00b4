// kner -- morpheme-level Korean NER corpus toolkit
//
// Linear-chain CRF over token sequences, built from scratch: log-space
// forward/backward and Viterbi, string-interned features, mini-batch SGD
// with L2. Two feature families:
//
//   unigram  f(y_i, obs)          one weight per (pattern expansion, label)
//   bigram   f(y_{i-1}, y_i, obs) one weight per (expansion, label pair)
//
// plus an always-on transition bias per label pair. Observation patterns
// come from a template in two sections, e.g. the default word template:
//
//   # Unigram
//   w[-2]  w[-1]  w[0]  w[1]  w[2]
//   # Bigram
//   w[-2]/w[-1]  w[-1]/w[0]  w[0]/w[1]  w[1]/w[2]
//
// Offsets past either end expand to __BOS1__/__BOS2__/__EOS1__/__EOS2__.
#ifndef KNER_CRF_HPP_
#define KNER_CRF_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "kner/conllu.hpp"
#include "kner/formats.hpp"
#include "kner/tagset.hpp"

namespace kner {

struct CrfToken {
  std::string word;
  std::string upos;  // empty when the corpus has no POS column
  std::string xpos;
};

struct CrfInstance {
  std::vector<CrfToken> tokens;
  std::vector<std::string> labels;  // empty when only decoding

  bool has_upos() const;
  bool has_xpos() const;
};

CrfInstance to_instance(const MorphSentence& s);
CrfInstance to_instance(const EojeolSentence& s);

// ---------------------------------------------------------------------------
// Feature templates

struct FeatureTemplate {
  enum class Column : std::uint8_t { Word, Upos, Xpos };
  struct Atom {
    Column column = Column::Word;
    int offset = 0;
    bool operator==(const Atom&) const = default;
  };
  struct Pattern {
    std::vector<Atom> atoms;
    bool operator==(const Pattern&) const = default;
  };

  std::vector<Pattern> unigram;
  std::vector<Pattern> bigram;

  // The +-2 word window above.
  static FeatureTemplate word_context();
  // word_context plus single-position POS unigrams over the same window.
  static FeatureTemplate word_pos_context(bool upos, bool xpos);

  // Parses the "# Unigram" / "# Bigram" section format shown above.
  // Atoms are w[k], u[k], x[k]; compounds join with '/'.
  // Throws Error(Parse) on unknown syntax.
  static FeatureTemplate parse(const std::string& text);
  std::string to_string() const;

  bool operator==(const FeatureTemplate&) const = default;
};

// Expansions of every applicable pattern at one position, deterministic
// order (unigram section first, then bigram), each prefixed with its
// pattern id ("u0:", "b2:", ...). Patterns that reference a POS column the
// instance does not carry are skipped.
std::vector<std::string> extract_features(const CrfInstance& instance,
                                          std::size_t pos,
                                          const FeatureTemplate& tmpl);

// ---------------------------------------------------------------------------
// Model

struct TrainConfig {
  double l2_strength = 1e-4;
  int epochs = 50;
  double learning_rate = 0.5;
  std::uint64_t shuffle_seed = 1;
  int batch_size = 8;
};

struct TrainSummary {
  std::size_t sentences = 0;
  std::vector<double> epoch_loss;  // full objective after each epoch
  bool loss_nonincreasing = true;
};

class CrfModel {
 public:
  // Alphabet ("O" first, then first-seen order) and feature dictionary are
  // collected from the corpus; weights start at zero.
  static CrfModel build(std::span<const CrfInstance> corpus,
                        const FeatureTemplate& tmpl);

  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t label_count() const { return labels_.size(); }
  std::optional<std::size_t> label_id(std::string_view label) const;
  const FeatureTemplate& feature_template() const { return template_; }
  std::size_t feature_count() const { return feature_order_.size(); }

  std::vector<double>& weights() { return weights_; }
  const std::vector<double>& weights() const { return weights_; }

  // Diagnostic scoring path, one feature lookup at a time. The DP routines
  // below go through a cached lattice but must agree with these exactly.
  double unigram_score(const CrfInstance& inst, std::size_t pos,
                       std::size_t label) const;
  // Score of the transition into pos (pos >= 1): bias + bigram features.
  double pairwise_score(const CrfInstance& inst, std::size_t pos,
                        std::size_t prev, std::size_t cur) const;

  const TrainConfig& config() const { return config_; }
  const TrainSummary& summary() const { return summary_; }

  // Versioned JSON, byte-identical for identical models.
  void save(std::ostream& out) const;
  static CrfModel load(std::istream& in);

 private:
  friend struct CrfOps;
  CrfModel() = default;

  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> label_ids_;
  FeatureTemplate template_;
  // feature string -> start offset of its weight block; unigram blocks hold
  // K weights, bigram blocks K*K. Offsets [0, K*K) are the transition bias.
  std::unordered_map<std::string, std::size_t> feature_offsets_;
  std::vector<std::string> feature_order_;
  std::vector<double> weights_;
  TrainConfig config_;
  TrainSummary summary_;
};

// ---------------------------------------------------------------------------
// Inference and training

// Negative log-likelihood of the instance's own labels. No L2 term, so
// exp(-nll) is a probability.
double sentence_nll(const CrfModel& model, const CrfInstance& inst);

double log_partition(const CrfModel& model, const CrfInstance& inst);

// Per-position label marginals, rows sum to 1.
std::vector<std::vector<double>> marginals(const CrfModel& model,
                                           const CrfInstance& inst);

struct DecodeOptions {
  // Forbid label bigrams that are invalid under the scheme (and invalid
  // start/end labels). Off by default; training usually learns this.
  bool constrain = false;
  Scheme scheme = Scheme::BIO;
};

std::vector<std::string> decode(const CrfModel& model, const CrfInstance& inst,
                                const DecodeOptions& options = {});

struct LossGrad {
  double loss = 0.0;
  std::vector<double> gradient;
};

// Sum of sentence NLLs over the batch plus (l2/2)||w||^2, with the matching
// gradient. l2 applies to the full weight vector including the bias block.
LossGrad log_likelihood_and_gradient(const CrfModel& model,
                                     std::span<const CrfInstance> batch,
                                     double l2);

// Mini-batch SGD: deterministic shuffling from config.shuffle_seed, L2
// scaled per batch, sequential accumulation. Identical corpus + config
// gives bit-identical weights.
CrfModel train(std::span<const CrfInstance> corpus, const FeatureTemplate& tmpl,
               const TrainConfig& config);

void save_model(const CrfModel& model, const std::string& path);
CrfModel load_model(const std::string& path);

}  // namespace kner

#endif  // KNER_CRF_HPP_
