// kner -- morpheme-level Korean NER corpus toolkit
//
// Entity-level precision / recall / F1 in the conlleval tradition: entities
// are extracted tolerantly from gold and prediction alike and an entity is
// correct only when label and both boundaries match exactly.
#ifndef KNER_EVALUATE_HPP_
#define KNER_EVALUATE_HPP_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "kner/conllu.hpp"
#include "kner/formats.hpp"
#include "kner/tagset.hpp"

namespace kner {

struct LabelCounts {
  std::size_t gold = 0;     // entities in the reference
  std::size_t pred = 0;     // entities retrieved
  std::size_t correct = 0;  // exact matches

  // 0/0 counts as 0 throughout.
  double precision() const;
  double recall() const;
  double f1() const;
};

struct EvalReport {
  LabelCounts overall;
  std::map<std::string, LabelCounts> per_label;
  std::size_t token_total = 0;
  std::size_t token_correct = 0;
  std::size_t sentences = 0;
  // Pairs dropped before scoring (back-conversion failures).
  std::size_t excluded_sentences = 0;

  double token_accuracy() const;
  std::string to_text() const;  // conlleval-style layout
  std::string to_json() const;
};

// Incremental scorer; evaluate() below is the one-shot wrapper.
class Evaluator {
 public:
  // Throws Error(Mismatch) when the pair disagrees on length.
  void add(std::span<const NeTag> gold, std::span<const NeTag> pred);
  void add_excluded(std::size_t count = 1);
  EvalReport report() const;

 private:
  EvalReport report_;
};

// Per-sentence tag rows of each format, ready for scoring. Syllable
// sentences contribute their space-free rows.
std::vector<NeTag> tag_row(const MorphSentence& s);
std::vector<NeTag> tag_row(const EojeolSentence& s);
std::vector<NeTag> tag_row(const SyllableSentence& s);

using TagRows = std::vector<std::vector<NeTag>>;

// Throws Error(Mismatch) on sentence-count or token-count disagreement.
EvalReport evaluate(const TagRows& gold, const TagRows& pred);

enum class BackTarget { Eojeol, Syllable };

// Scores morpheme-level predictions against gold kept in its original
// format: each prediction is converted back first, sentences whose back-
// conversion fails are excluded (and counted in the report), the rest are
// scored in the gold format.
EvalReport evaluate_cross_format(const std::vector<EojeolSentence>& gold,
                                 const std::vector<MorphSentence>& pred);
EvalReport evaluate_cross_format(const std::vector<SyllableSentence>& gold,
                                 const std::vector<MorphSentence>& pred);

}  // namespace kner

#endif  // KNER_EVALUATE_HPP_
