// kner -- morpheme-level Korean NER corpus toolkit
#include "kner/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "kner/convert.hpp"

namespace kner {

double LabelCounts::precision() const {
  return pred ? 100.0 * static_cast<double>(correct) / static_cast<double>(pred)
              : 0.0;
}

double LabelCounts::recall() const {
  return gold ? 100.0 * static_cast<double>(correct) / static_cast<double>(gold)
              : 0.0;
}

double LabelCounts::f1() const {
  double p = precision(), r = recall();
  return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

double EvalReport::token_accuracy() const {
  return token_total ? 100.0 * static_cast<double>(token_correct) /
                           static_cast<double>(token_total)
                     : 0.0;
}

std::string EvalReport::to_text() const {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "processed %zu tokens with %zu phrases; found: %zu phrases;"
                " correct: %zu.\n",
                token_total, overall.gold, overall.pred, overall.correct);
  out += buf;
  std::snprintf(buf, sizeof(buf),
                "accuracy: %6.2f%%; precision: %6.2f%%; recall: %6.2f%%;"
                " FB1: %6.2f\n",
                token_accuracy(), overall.precision(), overall.recall(),
                overall.f1());
  out += buf;
  for (const auto& [label, c] : per_label) {
    std::snprintf(buf, sizeof(buf),
                  "%17s: precision: %6.2f%%; recall: %6.2f%%; FB1: %6.2f  %zu\n",
                  label.c_str(), c.precision(), c.recall(), c.f1(), c.pred);
    out += buf;
  }
  if (excluded_sentences) {
    std::snprintf(buf, sizeof(buf), "excluded sentences: %zu\n",
                  excluded_sentences);
    out += buf;
  }
  return out;
}

std::string EvalReport::to_json() const {
  const auto round2 = [](double v) {
    return std::round(v * 100.0) / 100.0;
  };
  const auto counts_json = [&](const LabelCounts& c) {
    return nlohmann::json{{"gold", c.gold},
                          {"pred", c.pred},
                          {"correct", c.correct},
                          {"precision", round2(c.precision())},
                          {"recall", round2(c.recall())},
                          {"f1", round2(c.f1())}};
  };
  nlohmann::json per;
  per = nlohmann::json::array();
  for (const auto& [label, c] : per_label) {
    nlohmann::json item = counts_json(c);
    item["label"] = label;
    per.push_back(item);
  }
  nlohmann::json j{{"overall", counts_json(overall)},
                   {"token_accuracy", round2(token_accuracy())},
                   {"token_total", token_total},
                   {"token_correct", token_correct},
                   {"per_label", per},
                   {"sentences", sentences},
                   {"excluded_sentences", excluded_sentences}};
  return j.dump(2);
}

void Evaluator::add(std::span<const NeTag> gold, std::span<const NeTag> pred) {
  if (gold.size() != pred.size()) {
    throw mismatch_error("token count mismatch in sentence " +
                         std::to_string(report_.sentences + 1) + ": gold " +
                         std::to_string(gold.size()) + ", pred " +
                         std::to_string(pred.size()));
  }
  ++report_.sentences;
  report_.token_total += gold.size();
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] == pred[i]) ++report_.token_correct;
  }

  std::vector<EntitySpan> g = extract_entities(gold);
  std::vector<EntitySpan> p = extract_entities(pred);
  for (const EntitySpan& e : g) {
    ++report_.overall.gold;
    ++report_.per_label[e.label].gold;
  }
  for (const EntitySpan& e : p) {
    ++report_.overall.pred;
    ++report_.per_label[e.label].pred;
  }
  // Both lists come out in start order, so matches line up in one sweep.
  std::size_t gi = 0;
  for (const EntitySpan& e : p) {
    while (gi < g.size() && g[gi] < e) ++gi;
    if (gi < g.size() && g[gi] == e) {
      ++report_.overall.correct;
      ++report_.per_label[e.label].correct;
      ++gi;
    }
  }
}

void Evaluator::add_excluded(std::size_t count) {
  report_.excluded_sentences += count;
}

EvalReport Evaluator::report() const { return report_; }

std::vector<NeTag> tag_row(const MorphSentence& s) { return s.ne_tags(); }
std::vector<NeTag> tag_row(const EojeolSentence& s) { return s.tags(); }
std::vector<NeTag> tag_row(const SyllableSentence& s) { return s.content_tags(); }

EvalReport evaluate(const TagRows& gold, const TagRows& pred) {
  if (gold.size() != pred.size()) {
    throw mismatch_error("sentence count mismatch: gold " +
                         std::to_string(gold.size()) + ", pred " +
                         std::to_string(pred.size()));
  }
  Evaluator ev;
  for (std::size_t i = 0; i < gold.size(); ++i) ev.add(gold[i], pred[i]);
  return ev.report();
}

namespace {

template <typename GoldSentence, typename BackConvert>
EvalReport cross_format(const std::vector<GoldSentence>& gold,
                        const std::vector<MorphSentence>& pred,
                        BackConvert back) {
  if (gold.size() != pred.size()) {
    throw mismatch_error("sentence count mismatch: gold " +
                         std::to_string(gold.size()) + ", pred " +
                         std::to_string(pred.size()));
  }
  Evaluator ev;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    GoldSentence converted;
    try {
      converted = back(pred[i]);
    } catch (const Error&) {
      ev.add_excluded();
      continue;
    }
    ev.add(tag_row(gold[i]), tag_row(converted));
  }
  return ev.report();
}

}  // namespace

EvalReport evaluate_cross_format(const std::vector<EojeolSentence>& gold,
                                 const std::vector<MorphSentence>& pred) {
  return cross_format(gold, pred,
                      [](const MorphSentence& m) { return morph2eoj(m); });
}

EvalReport evaluate_cross_format(const std::vector<SyllableSentence>& gold,
                                 const std::vector<MorphSentence>& pred) {
  return cross_format(gold, pred,
                      [](const MorphSentence& m) { return morph2syl(m); });
}

}  // namespace kner
