// kner -- morpheme-level Korean NER corpus toolkit
//
// Corpus summaries over morpheme-level annotations: which postposition
// follows each entity class, and how many entities each label has.
#ifndef KNER_STATS_HPP_
#define KNER_STATS_HPP_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "kner/conllu.hpp"

namespace kner {

struct PostposDistribution {
  // label -> follower XPOS -> percentage of that label's spans. Followers
  // that are not postpositions, and spans with no following morpheme,
  // bucket under "NONE". J* postposition classes stay distinct.
  std::map<std::string, std::map<std::string, double>> rows;
  // label -> number of spans (the denominators).
  std::map<std::string, std::size_t> support;

  std::string to_text() const;
  std::string to_json() const;   // carries denominator metadata
  std::string to_plot_tsv() const;  // label<TAB>follower<TAB>percent
};

// Accumulates over a streamed corpus.
class StatsAccumulator {
 public:
  // Throws Error(InvalidArg) when a token has no XPOS annotation.
  void add(const MorphSentence& sentence);
  PostposDistribution postpos() const;
  std::map<std::string, std::size_t> label_inventory() const;
  std::size_t sentences() const { return sentences_; }

 private:
  std::map<std::string, std::map<std::string, std::size_t>> counts_;
  std::map<std::string, std::size_t> spans_;
  std::size_t sentences_ = 0;
};

PostposDistribution postpos_distribution(std::span<const MorphSentence> corpus);

// Entity counts per label over per-sentence tag rows; works for any format.
std::map<std::string, std::size_t> label_inventory(
    std::span<const std::vector<NeTag>> rows);

std::string label_inventory_json(const std::map<std::string, std::size_t>& inv);
std::string label_inventory_text(const std::map<std::string, std::size_t>& inv);

}  // namespace kner

#endif  // KNER_STATS_HPP_
