// kner -- morpheme-level Korean NER corpus toolkit
#include "kner/stats.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace kner {

std::string PostposDistribution::to_text() const {
  std::string out = "label  spans  follower distribution (% of spans)\n";
  char buf[128];
  for (const auto& [label, buckets] : rows) {
    std::snprintf(buf, sizeof(buf), "%-5s %6zu  ", label.c_str(),
                  support.at(label));
    out += buf;
    bool first = true;
    for (const auto& [follower, pct] : buckets) {
      std::snprintf(buf, sizeof(buf), "%s%s %.2f", first ? "" : "  ",
                    follower.c_str(), pct);
      out += buf;
      first = false;
    }
    out += '\n';
  }
  return out;
}

std::string PostposDistribution::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& [label, buckets] : rows) {
    nlohmann::json buckets_json = nlohmann::json::object();
    for (const auto& [follower, pct] : buckets) {
      buckets_json[follower] = std::round(pct * 100.0) / 100.0;
    }
    rows_json.push_back({{"label", label},
                         {"spans", support.at(label)},
                         {"followers", buckets_json}});
  }
  nlohmann::json j{{"denominator", "spans"}, {"unit", "percent"},
                   {"rows", rows_json}};
  return j.dump(2);
}

std::string PostposDistribution::to_plot_tsv() const {
  std::string out;
  char buf[128];
  for (const auto& [label, buckets] : rows) {
    for (const auto& [follower, pct] : buckets) {
      std::snprintf(buf, sizeof(buf), "%s\t%s\t%.2f\n", label.c_str(),
                    follower.c_str(), pct);
      out += buf;
    }
  }
  return out;
}

void StatsAccumulator::add(const MorphSentence& sentence) {
  std::vector<const MorphToken*> flat;
  flat.reserve(sentence.token_count());
  for (const EojeolSpan& e : sentence.eojeols) {
    for (const MorphToken& t : e.tokens) {
      if (t.xpos.empty()) {
        throw Error(ErrorKind::InvalidArg,
                    "token " + std::to_string(t.id) +
                        " has no XPOS annotation; refusing to count");
      }
      flat.push_back(&t);
    }
  }
  ++sentences_;

  std::vector<NeTag> tags = sentence.ne_tags();
  for (const EntitySpan& span : extract_entities(tags)) {
    ++spans_[span.label];
    std::string bucket = "NONE";
    if (span.end + 1 < flat.size()) {
      const std::string& xpos = flat[span.end + 1]->xpos;
      if (is_postposition_xpos(xpos)) bucket = xpos;
    }
    ++counts_[span.label][bucket];
  }
}

PostposDistribution StatsAccumulator::postpos() const {
  PostposDistribution out;
  out.support = spans_;
  for (const auto& [label, buckets] : counts_) {
    double denom = static_cast<double>(spans_.at(label));
    for (const auto& [follower, n] : buckets) {
      out.rows[label][follower] = 100.0 * static_cast<double>(n) / denom;
    }
  }
  return out;
}

std::map<std::string, std::size_t> StatsAccumulator::label_inventory() const {
  return spans_;
}

PostposDistribution postpos_distribution(std::span<const MorphSentence> corpus) {
  StatsAccumulator acc;
  for (const MorphSentence& s : corpus) acc.add(s);
  return acc.postpos();
}

std::map<std::string, std::size_t> label_inventory(
    std::span<const std::vector<NeTag>> rows) {
  std::map<std::string, std::size_t> out;
  for (const std::vector<NeTag>& tags : rows) {
    for (const EntitySpan& span : extract_entities(tags)) ++out[span.label];
  }
  return out;
}

std::string label_inventory_json(const std::map<std::string, std::size_t>& inv) {
  nlohmann::json j = nlohmann::json::object();
  std::size_t total = 0;
  for (const auto& [label, n] : inv) {
    j[label] = n;
    total += n;
  }
  return nlohmann::json{{"labels", j}, {"total", total}}.dump(2);
}

std::string label_inventory_text(const std::map<std::string, std::size_t>& inv) {
  std::string out;
  char buf[64];
  std::size_t total = 0;
  for (const auto& [label, n] : inv) {
    std::snprintf(buf, sizeof(buf), "%-5s %zu\n", label.c_str(), n);
    out += buf;
    total += n;
  }
  std::snprintf(buf, sizeof(buf), "total %zu\n", total);
  out += buf;
  return out;
}

}  // namespace kner
