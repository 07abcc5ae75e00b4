// kner -- morpheme-level Korean NER corpus toolkit
#include "kner/crf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include <json.hpp>

namespace kner {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::string_view kModelFormat = "kner-crf";
constexpr int kModelVersion = 1;

std::string_view boundary_word(long p, long n) {
  if (p == -1) return "__BOS1__";
  if (p < -1) return "__BOS2__";
  if (p == n) return "__EOS1__";
  return "__EOS2__";
}

std::string_view atom_value(const CrfInstance& inst, std::size_t pos,
                            const FeatureTemplate::Atom& atom) {
  long p = static_cast<long>(pos) + atom.offset;
  long n = static_cast<long>(inst.tokens.size());
  if (p < 0 || p >= n) return boundary_word(p, n);
  const CrfToken& t = inst.tokens[static_cast<std::size_t>(p)];
  switch (atom.column) {
    case FeatureTemplate::Column::Word:
      return t.word;
    case FeatureTemplate::Column::Upos:
      return t.upos.empty() ? std::string_view("_") : std::string_view(t.upos);
    case FeatureTemplate::Column::Xpos:
      return t.xpos.empty() ? std::string_view("_") : std::string_view(t.xpos);
  }
  return "_";
}

bool pattern_applies(const FeatureTemplate::Pattern& pat,
                     const CrfInstance& inst) {
  for (const FeatureTemplate::Atom& a : pat.atoms) {
    if (a.column == FeatureTemplate::Column::Upos && !inst.has_upos()) {
      return false;
    }
    if (a.column == FeatureTemplate::Column::Xpos && !inst.has_xpos()) {
      return false;
    }
  }
  return true;
}

std::string expand(const CrfInstance& inst, std::size_t pos,
                   const FeatureTemplate::Pattern& pat, char section,
                   std::size_t pattern_idx) {
  std::string out;
  out += section;
  out += std::to_string(pattern_idx);
  out += ':';
  for (std::size_t i = 0; i < pat.atoms.size(); ++i) {
    if (i) out += '/';
    out += atom_value(inst, pos, pat.atoms[i]);
  }
  return out;
}

void extract_split(const CrfInstance& inst, std::size_t pos,
                   const FeatureTemplate& tmpl, std::vector<std::string>* uni,
                   std::vector<std::string>* big) {
  if (uni) {
    for (std::size_t i = 0; i < tmpl.unigram.size(); ++i) {
      if (!pattern_applies(tmpl.unigram[i], inst)) continue;
      uni->push_back(expand(inst, pos, tmpl.unigram[i], 'u', i));
    }
  }
  if (big) {
    for (std::size_t i = 0; i < tmpl.bigram.size(); ++i) {
      if (!pattern_applies(tmpl.bigram[i], inst)) continue;
      big->push_back(expand(inst, pos, tmpl.bigram[i], 'b', i));
    }
  }
}

double logsumexp(std::span<const double> xs) {
  double m = kNegInf;
  for (double x : xs) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace

bool CrfInstance::has_upos() const {
  return std::any_of(tokens.begin(), tokens.end(),
                     [](const CrfToken& t) { return !t.upos.empty(); });
}

bool CrfInstance::has_xpos() const {
  return std::any_of(tokens.begin(), tokens.end(),
                     [](const CrfToken& t) { return !t.xpos.empty(); });
}

CrfInstance to_instance(const MorphSentence& s) {
  CrfInstance inst;
  inst.tokens.reserve(s.token_count());
  inst.labels.reserve(s.token_count());
  for (const EojeolSpan& e : s.eojeols) {
    for (const MorphToken& t : e.tokens) {
      inst.tokens.push_back({t.form,
                             t.upos ? std::string(to_string(*t.upos)) : "",
                             t.xpos});
      inst.labels.push_back(t.ne.to_string());
    }
  }
  return inst;
}

CrfInstance to_instance(const EojeolSentence& s) {
  CrfInstance inst;
  inst.tokens.reserve(s.rows.size());
  inst.labels.reserve(s.rows.size());
  for (const EojeolRow& r : s.rows) {
    inst.tokens.push_back({r.surface, "", ""});
    inst.labels.push_back(r.tag.to_string());
  }
  return inst;
}

// ---------------------------------------------------------------------------
// Templates

FeatureTemplate FeatureTemplate::word_context() {
  FeatureTemplate t;
  for (int o = -2; o <= 2; ++o) {
    t.unigram.push_back({{{Column::Word, o}}});
  }
  for (int o = -2; o <= 1; ++o) {
    t.bigram.push_back({{{Column::Word, o}, {Column::Word, o + 1}}});
  }
  return t;
}

FeatureTemplate FeatureTemplate::word_pos_context(bool upos, bool xpos) {
  FeatureTemplate t = word_context();
  for (int o = -2; o <= 2; ++o) {
    if (upos) t.unigram.push_back({{{Column::Upos, o}}});
  }
  for (int o = -2; o <= 2; ++o) {
    if (xpos) t.unigram.push_back({{{Column::Xpos, o}}});
  }
  return t;
}

namespace {

FeatureTemplate::Atom parse_atom(const std::string& text) {
  FeatureTemplate::Atom atom;
  if (text.size() < 4 || text[1] != '[' || text.back() != ']') {
    throw parse_error("bad template atom '" + text + "'");
  }
  switch (text[0]) {
    case 'w': atom.column = FeatureTemplate::Column::Word; break;
    case 'u': atom.column = FeatureTemplate::Column::Upos; break;
    case 'x': atom.column = FeatureTemplate::Column::Xpos; break;
    default: throw parse_error("bad template atom '" + text + "'");
  }
  std::string num = text.substr(2, text.size() - 3);
  try {
    std::size_t used = 0;
    atom.offset = std::stoi(num, &used);
    if (used != num.size()) throw std::invalid_argument(num);
  } catch (const std::exception&) {
    throw parse_error("bad template atom '" + text + "'");
  }
  return atom;
}

std::string atom_text(const FeatureTemplate::Atom& atom) {
  char col = 'w';
  if (atom.column == FeatureTemplate::Column::Upos) col = 'u';
  if (atom.column == FeatureTemplate::Column::Xpos) col = 'x';
  return std::string(1, col) + "[" + std::to_string(atom.offset) + "]";
}

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

FeatureTemplate FeatureTemplate::parse(const std::string& text) {
  FeatureTemplate tmpl;
  std::vector<Pattern>* section = nullptr;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream words(line);
    std::string word;
    if (!(words >> word)) continue;
    if (word[0] == '#') {
      std::string rest = lowercase(line);
      if (rest.find("unigram") != std::string::npos) {
        section = &tmpl.unigram;
      } else if (rest.find("bigram") != std::string::npos) {
        section = &tmpl.bigram;
      }
      continue;
    }
    if (!section) {
      throw parse_error("template pattern before a section header");
    }
    do {
      Pattern pat;
      std::size_t start = 0;
      while (true) {
        std::size_t slash = word.find('/', start);
        std::string atom = slash == std::string::npos
                               ? word.substr(start)
                               : word.substr(start, slash - start);
        pat.atoms.push_back(parse_atom(atom));
        if (slash == std::string::npos) break;
        start = slash + 1;
      }
      section->push_back(std::move(pat));
    } while (words >> word);
  }
  if (tmpl.unigram.empty() && tmpl.bigram.empty()) {
    throw parse_error("template has no patterns");
  }
  return tmpl;
}

std::string FeatureTemplate::to_string() const {
  std::string out = "# Unigram\n";
  for (const Pattern& p : unigram) {
    for (std::size_t i = 0; i < p.atoms.size(); ++i) {
      if (i) out += '/';
      out += atom_text(p.atoms[i]);
    }
    out += '\n';
  }
  out += "\n# Bigram\n";
  for (const Pattern& p : bigram) {
    for (std::size_t i = 0; i < p.atoms.size(); ++i) {
      if (i) out += '/';
      out += atom_text(p.atoms[i]);
    }
    out += '\n';
  }
  return out;
}

std::vector<std::string> extract_features(const CrfInstance& instance,
                                          std::size_t pos,
                                          const FeatureTemplate& tmpl) {
  std::vector<std::string> uni, big;
  extract_split(instance, pos, tmpl, &uni, &big);
  uni.insert(uni.end(), std::make_move_iterator(big.begin()),
             std::make_move_iterator(big.end()));
  return uni;
}

// ---------------------------------------------------------------------------
// Model internals

struct CrfOps {
  // Interned feature offsets of one instance; what the DP runs on.
  struct Feats {
    std::size_t n = 0;
    std::vector<std::vector<std::size_t>> uni;  // per position
    std::vector<std::vector<std::size_t>> big;  // per position, [0] unused
    std::vector<std::size_t> gold;              // label ids, empty if unlabeled
  };

  // Scores of one instance under the current weights.
  struct Scores {
    std::size_t n = 0, K = 0;
    std::vector<double> uni;   // n*K
    std::vector<double> pair;  // n*K*K, position 0 unused

    double u(std::size_t i, std::size_t y) const { return uni[i * K + y]; }
    double p(std::size_t i, std::size_t yp, std::size_t y) const {
      return pair[(i * K + yp) * K + y];
    }
  };

  static CrfModel make() { return CrfModel(); }

  static Feats featurize(const CrfModel& m, const CrfInstance& inst,
                         bool want_gold) {
    Feats f;
    f.n = inst.tokens.size();
    f.uni.resize(f.n);
    f.big.resize(f.n);
    std::vector<std::string> uni, big;
    for (std::size_t i = 0; i < f.n; ++i) {
      uni.clear();
      big.clear();
      extract_split(inst, i, m.template_, &uni, i ? &big : nullptr);
      for (const std::string& s : uni) {
        auto it = m.feature_offsets_.find(s);
        if (it != m.feature_offsets_.end()) f.uni[i].push_back(it->second);
      }
      for (const std::string& s : big) {
        auto it = m.feature_offsets_.find(s);
        if (it != m.feature_offsets_.end()) f.big[i].push_back(it->second);
      }
    }
    if (want_gold) {
      if (inst.labels.size() != f.n) {
        throw Error(ErrorKind::InvalidArg,
                    "instance labels do not match its tokens");
      }
      f.gold.reserve(f.n);
      for (const std::string& label : inst.labels) {
        auto id = m.label_id(label);
        if (!id) {
          throw Error(ErrorKind::InvalidArg,
                      "label '" + label + "' not in model alphabet");
        }
        f.gold.push_back(*id);
      }
    }
    return f;
  }

  static Scores score(const CrfModel& m, const Feats& f) {
    const std::size_t K = m.labels_.size();
    const std::vector<double>& w = m.weights_;
    Scores s;
    s.n = f.n;
    s.K = K;
    s.uni.assign(f.n * K, 0.0);
    s.pair.assign(f.n * K * K, 0.0);
    for (std::size_t i = 0; i < f.n; ++i) {
      for (std::size_t off : f.uni[i]) {
        for (std::size_t y = 0; y < K; ++y) s.uni[i * K + y] += w[off + y];
      }
      if (i == 0) continue;
      // transition bias block sits at offset 0
      for (std::size_t yp = 0; yp < K; ++yp) {
        for (std::size_t y = 0; y < K; ++y) {
          s.pair[(i * K + yp) * K + y] = w[yp * K + y];
        }
      }
      for (std::size_t off : f.big[i]) {
        for (std::size_t yp = 0; yp < K; ++yp) {
          for (std::size_t y = 0; y < K; ++y) {
            s.pair[(i * K + yp) * K + y] += w[off + yp * K + y];
          }
        }
      }
    }
    return s;
  }

  // alpha[i*K+y] = log sum of scores of prefixes ending in y at i.
  static std::vector<double> forward(const Scores& s) {
    const std::size_t n = s.n, K = s.K;
    std::vector<double> alpha(n * K, kNegInf);
    for (std::size_t y = 0; y < K; ++y) alpha[y] = s.u(0, y);
    std::vector<double> acc(K);
    for (std::size_t i = 1; i < n; ++i) {
      for (std::size_t y = 0; y < K; ++y) {
        for (std::size_t yp = 0; yp < K; ++yp) {
          acc[yp] = alpha[(i - 1) * K + yp] + s.p(i, yp, y);
        }
        alpha[i * K + y] = s.u(i, y) + logsumexp(acc);
      }
    }
    return alpha;
  }

  static std::vector<double> backward(const Scores& s) {
    const std::size_t n = s.n, K = s.K;
    std::vector<double> beta(n * K, 0.0);
    std::vector<double> acc(K);
    for (std::size_t i = n - 1; i > 0; --i) {
      for (std::size_t yp = 0; yp < K; ++yp) {
        for (std::size_t y = 0; y < K; ++y) {
          acc[y] = s.p(i, yp, y) + s.u(i, y) + beta[i * K + y];
        }
        beta[(i - 1) * K + yp] = logsumexp(acc);
      }
    }
    return beta;
  }

  static double partition(const Scores& s) {
    std::vector<double> alpha = forward(s);
    return logsumexp(
        std::span(alpha).subspan((s.n - 1) * s.K, s.K));
  }

  static double gold_score(const Scores& s, const std::vector<std::size_t>& y) {
    double total = s.u(0, y[0]);
    for (std::size_t i = 1; i < s.n; ++i) {
      total += s.p(i, y[i - 1], y[i]) + s.u(i, y[i]);
    }
    return total;
  }

  // Adds d(nll)/d(w) for one instance into grad.
  static double nll_grad(const CrfModel& m, const Feats& f,
                         std::vector<double>* grad) {
    const std::size_t K = m.labels_.size(), n = f.n;
    Scores s = score(m, f);
    std::vector<double> alpha = forward(s);
    std::vector<double> beta = backward(s);
    double logz = logsumexp(std::span(alpha).subspan((n - 1) * K, K));
    double nll = logz - gold_score(s, f.gold);
    if (!grad) return nll;
    std::vector<double>& g = *grad;

    // empirical counts
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t off : f.uni[i]) g[off + f.gold[i]] -= 1.0;
      if (i == 0) continue;
      std::size_t cell = f.gold[i - 1] * K + f.gold[i];
      g[cell] -= 1.0;
      for (std::size_t off : f.big[i]) g[off + cell] -= 1.0;
    }

    // model expectations
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t y = 0; y < K; ++y) {
        double gamma = std::exp(alpha[i * K + y] + beta[i * K + y] - logz);
        for (std::size_t off : f.uni[i]) g[off + y] += gamma;
      }
      if (i == 0) continue;
      for (std::size_t yp = 0; yp < K; ++yp) {
        for (std::size_t y = 0; y < K; ++y) {
          double xi = std::exp(alpha[(i - 1) * K + yp] + s.p(i, yp, y) +
                               s.u(i, y) + beta[i * K + y] - logz);
          std::size_t cell = yp * K + y;
          g[cell] += xi;
          for (std::size_t off : f.big[i]) g[off + cell] += xi;
        }
      }
    }
    return nll;
  }

  // Transition legality masks for constrained decoding.
  struct Constraint {
    std::vector<char> start, end;       // K
    std::vector<char> pair;             // K*K
  };

  static Constraint constraint_for(const CrfModel& m, Scheme scheme) {
    const std::size_t K = m.labels_.size();
    std::vector<NeTag> tags;
    tags.reserve(K);
    for (const std::string& label : m.labels_) {
      auto t = NeTag::parse(label);
      if (!t) {
        throw Error(ErrorKind::InvalidArg,
                    "label '" + label + "' is not an NE tag; cannot constrain");
      }
      tags.push_back(*t);
    }
    Constraint c;
    c.start.assign(K, 1);
    c.end.assign(K, 1);
    c.pair.assign(K * K, 1);
    for (std::size_t y = 0; y < K; ++y) {
      const NeTag& t = tags[y];
      bool continuation = t.position == NePosition::Inside ||
                          t.position == NePosition::End;
      if (continuation) c.start[y] = 0;
      if (scheme == Scheme::BIO) {
        if (t.position == NePosition::End || t.position == NePosition::Single) {
          c.start[y] = 0;
          c.end[y] = 0;
          for (std::size_t yp = 0; yp < K; ++yp) c.pair[yp * K + y] = 0;
        }
      } else if (t.position == NePosition::Begin ||
                 t.position == NePosition::Inside) {
        c.end[y] = 0;  // BIOES spans must close
      }
    }
    for (std::size_t yp = 0; yp < K; ++yp) {
      for (std::size_t y = 0; y < K; ++y) {
        const NeTag& prev = tags[yp];
        const NeTag& cur = tags[y];
        bool open = prev.position == NePosition::Begin ||
                    prev.position == NePosition::Inside;
        bool continuation = cur.position == NePosition::Inside ||
                            cur.position == NePosition::End;
        if (continuation && (!open || prev.label != cur.label)) {
          c.pair[yp * K + y] = 0;
        }
        if (scheme == Scheme::BIOES && open &&
            (!continuation || prev.label != cur.label)) {
          c.pair[yp * K + y] = 0;
        }
      }
    }
    return c;
  }

  static std::vector<std::size_t> viterbi(const Scores& s,
                                          const Constraint* c) {
    const std::size_t n = s.n, K = s.K;
    std::vector<double> delta(n * K, kNegInf);
    std::vector<std::size_t> bp(n * K, 0);
    for (std::size_t y = 0; y < K; ++y) {
      if (c && !c->start[y]) continue;
      delta[y] = s.u(0, y);
    }
    for (std::size_t i = 1; i < n; ++i) {
      for (std::size_t y = 0; y < K; ++y) {
        double best = kNegInf;
        std::size_t arg = 0;
        for (std::size_t yp = 0; yp < K; ++yp) {
          if (c && !c->pair[yp * K + y]) continue;
          double v = delta[(i - 1) * K + yp] + s.p(i, yp, y);
          if (v > best) {
            best = v;
            arg = yp;
          }
        }
        if (best != kNegInf) {
          delta[i * K + y] = best + s.u(i, y);
          bp[i * K + y] = arg;
        }
      }
    }
    double best = kNegInf;
    std::size_t arg = 0;
    for (std::size_t y = 0; y < K; ++y) {
      if (c && !c->end[y]) continue;
      double v = delta[(n - 1) * K + y];
      if (v > best) {
        best = v;
        arg = y;
      }
    }
    if (best == kNegInf) {
      throw Error(ErrorKind::Internal, "no admissible label path");
    }
    std::vector<std::size_t> path(n);
    path[n - 1] = arg;
    for (std::size_t i = n - 1; i > 0; --i) {
      path[i - 1] = bp[i * K + path[i]];
    }
    return path;
  }

  static void set_config(CrfModel& m, const TrainConfig& c) { m.config_ = c; }
  static void set_summary(CrfModel& m, TrainSummary s) {
    m.summary_ = std::move(s);
  }
  static void set_template(CrfModel& m, FeatureTemplate t) {
    m.template_ = std::move(t);
  }
  static void intern_label(CrfModel& m, const std::string& label) {
    if (!m.label_ids_.contains(label)) {
      m.label_ids_[label] = m.labels_.size();
      m.labels_.push_back(label);
    }
  }
  static void intern_feature(CrfModel& m, const std::string& s,
                             std::size_t block) {
    if (!m.feature_offsets_.contains(s)) {
      std::size_t off = m.weights_.size();
      m.feature_offsets_[s] = off;
      m.feature_order_.push_back(s);
      m.weights_.resize(off + block, 0.0);
    }
  }
};

CrfModel CrfModel::build(std::span<const CrfInstance> corpus,
                         const FeatureTemplate& tmpl) {
  CrfModel m;
  m.template_ = tmpl;
  CrfOps::intern_label(m, "O");
  for (const CrfInstance& inst : corpus) {
    if (inst.labels.size() != inst.tokens.size()) {
      throw Error(ErrorKind::InvalidArg, "training instance without labels");
    }
    for (const std::string& label : inst.labels) CrfOps::intern_label(m, label);
  }
  const std::size_t K = m.labels_.size();
  m.weights_.assign(K * K, 0.0);  // transition bias block
  std::vector<std::string> uni, big;
  for (const CrfInstance& inst : corpus) {
    for (std::size_t i = 0; i < inst.tokens.size(); ++i) {
      uni.clear();
      big.clear();
      extract_split(inst, i, tmpl, &uni, i ? &big : nullptr);
      for (const std::string& s : uni) CrfOps::intern_feature(m, s, K);
      for (const std::string& s : big) CrfOps::intern_feature(m, s, K * K);
    }
  }
  return m;
}

std::optional<std::size_t> CrfModel::label_id(std::string_view label) const {
  auto it = label_ids_.find(std::string(label));
  return it == label_ids_.end() ? std::nullopt
                                : std::optional<std::size_t>(it->second);
}

double CrfModel::unigram_score(const CrfInstance& inst, std::size_t pos,
                               std::size_t label) const {
  std::vector<std::string> uni;
  extract_split(inst, pos, template_, &uni, nullptr);
  double total = 0.0;
  for (const std::string& s : uni) {
    auto it = feature_offsets_.find(s);
    if (it != feature_offsets_.end()) total += weights_[it->second + label];
  }
  return total;
}

double CrfModel::pairwise_score(const CrfInstance& inst, std::size_t pos,
                                std::size_t prev, std::size_t cur) const {
  if (pos == 0 || pos >= inst.tokens.size()) {
    throw Error(ErrorKind::InvalidArg, "pairwise score needs 1 <= pos < n");
  }
  const std::size_t K = labels_.size();
  double total = weights_[prev * K + cur];
  std::vector<std::string> big;
  extract_split(inst, pos, template_, nullptr, &big);
  for (const std::string& s : big) {
    auto it = feature_offsets_.find(s);
    if (it != feature_offsets_.end()) {
      total += weights_[it->second + prev * K + cur];
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// Inference

double sentence_nll(const CrfModel& model, const CrfInstance& inst) {
  if (inst.tokens.empty()) {
    throw Error(ErrorKind::InvalidArg, "empty instance");
  }
  CrfOps::Feats f = CrfOps::featurize(model, inst, true);
  return CrfOps::nll_grad(model, f, nullptr);
}

double log_partition(const CrfModel& model, const CrfInstance& inst) {
  if (inst.tokens.empty()) {
    throw Error(ErrorKind::InvalidArg, "empty instance");
  }
  CrfOps::Feats f = CrfOps::featurize(model, inst, false);
  return CrfOps::partition(CrfOps::score(model, f));
}

std::vector<std::vector<double>> marginals(const CrfModel& model,
                                           const CrfInstance& inst) {
  if (inst.tokens.empty()) {
    throw Error(ErrorKind::InvalidArg, "empty instance");
  }
  CrfOps::Feats f = CrfOps::featurize(model, inst, false);
  CrfOps::Scores s = CrfOps::score(model, f);
  std::vector<double> alpha = CrfOps::forward(s);
  std::vector<double> beta = CrfOps::backward(s);
  const std::size_t n = s.n, K = s.K;
  double logz = logsumexp(std::span(alpha).subspan((n - 1) * K, K));
  std::vector<std::vector<double>> out(n, std::vector<double>(K));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t y = 0; y < K; ++y) {
      out[i][y] = std::exp(alpha[i * K + y] + beta[i * K + y] - logz);
    }
  }
  return out;
}

std::vector<std::string> decode(const CrfModel& model, const CrfInstance& inst,
                                const DecodeOptions& options) {
  if (inst.tokens.empty()) return {};
  CrfOps::Feats f = CrfOps::featurize(model, inst, false);
  CrfOps::Scores s = CrfOps::score(model, f);
  std::optional<CrfOps::Constraint> c;
  if (options.constrain) {
    c = CrfOps::constraint_for(model, options.scheme);
  }
  std::vector<std::size_t> path =
      CrfOps::viterbi(s, c ? &*c : nullptr);
  std::vector<std::string> out;
  out.reserve(path.size());
  for (std::size_t y : path) out.push_back(model.labels()[y]);
  return out;
}

LossGrad log_likelihood_and_gradient(const CrfModel& model,
                                     std::span<const CrfInstance> batch,
                                     double l2) {
  LossGrad lg;
  lg.gradient.assign(model.weights().size(), 0.0);
  for (const CrfInstance& inst : batch) {
    if (inst.tokens.empty()) {
      throw Error(ErrorKind::InvalidArg, "empty instance");
    }
    CrfOps::Feats f = CrfOps::featurize(model, inst, true);
    lg.loss += CrfOps::nll_grad(model, f, &lg.gradient);
  }
  const std::vector<double>& w = model.weights();
  double sq = 0.0;
  for (std::size_t d = 0; d < w.size(); ++d) {
    sq += w[d] * w[d];
    lg.gradient[d] += l2 * w[d];
  }
  lg.loss += 0.5 * l2 * sq;
  return lg;
}

// ---------------------------------------------------------------------------
// Training

CrfModel train(std::span<const CrfInstance> corpus, const FeatureTemplate& tmpl,
               const TrainConfig& config) {
  if (corpus.empty()) {
    throw Error(ErrorKind::InvalidArg, "empty training corpus");
  }
  if (config.batch_size < 1 || config.epochs < 0) {
    throw Error(ErrorKind::InvalidArg, "bad training configuration");
  }
  CrfModel model = CrfModel::build(corpus, tmpl);
  CrfOps::set_config(model, config);
  const std::size_t N = corpus.size();

  std::vector<CrfOps::Feats> feats;
  feats.reserve(N);
  for (const CrfInstance& inst : corpus) {
    if (inst.tokens.empty()) {
      throw Error(ErrorKind::InvalidArg, "empty instance");
    }
    feats.push_back(CrfOps::featurize(model, inst, true));
  }

  std::mt19937_64 rng(config.shuffle_seed);
  std::vector<std::size_t> order(N);
  for (std::size_t i = 0; i < N; ++i) order[i] = i;

  TrainSummary summary;
  summary.sentences = N;
  std::vector<double> grad;
  const std::size_t B = static_cast<std::size_t>(config.batch_size);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    // Fisher-Yates with the raw engine keeps the permutation reproducible
    // across standard libraries.
    for (std::size_t i = N - 1; i > 0; --i) {
      std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
      std::swap(order[i], order[j]);
    }
    for (std::size_t start = 0; start < N; start += B) {
      std::size_t end = std::min(start + B, N);
      std::size_t bs = end - start;
      grad.assign(model.weights().size(), 0.0);
      for (std::size_t k = start; k < end; ++k) {
        CrfOps::nll_grad(model, feats[order[k]], &grad);
      }
      double lam = config.l2_strength * static_cast<double>(bs) /
                   static_cast<double>(N);
      std::vector<double>& w = model.weights();
      double step = config.learning_rate / static_cast<double>(bs);
      for (std::size_t d = 0; d < w.size(); ++d) {
        w[d] -= step * (grad[d] + lam * w[d]);
      }
    }
    // Track the full objective so regressions in the optimizer show up.
    double loss = 0.0;
    for (const CrfOps::Feats& f : feats) {
      loss += CrfOps::nll_grad(model, f, nullptr);
    }
    double sq = 0.0;
    for (double v : model.weights()) sq += v * v;
    loss += 0.5 * config.l2_strength * sq;
    if (!summary.epoch_loss.empty()) {
      double prev = summary.epoch_loss.back();
      if (loss > prev + 1e-9 * std::max(1.0, std::abs(prev))) {
        summary.loss_nonincreasing = false;
      }
    }
    summary.epoch_loss.push_back(loss);
  }
  CrfOps::set_summary(model, std::move(summary));
  return model;
}

// ---------------------------------------------------------------------------
// Serialization

void CrfModel::save(std::ostream& out) const {
  nlohmann::ordered_json j;
  j["format"] = kModelFormat;
  j["version"] = kModelVersion;
  j["labels"] = labels_;
  j["template"] = template_.to_string();
  j["features"] = feature_order_;
  j["weights"] = weights_;
  j["config"] = {{"l2_strength", config_.l2_strength},
                 {"epochs", config_.epochs},
                 {"learning_rate", config_.learning_rate},
                 {"shuffle_seed", config_.shuffle_seed},
                 {"batch_size", config_.batch_size}};
  j["stats"] = {{"sentences", summary_.sentences},
                {"epoch_loss", summary_.epoch_loss},
                {"loss_nonincreasing", summary_.loss_nonincreasing}};
  out << j.dump(1) << '\n';
}

CrfModel CrfModel::load(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != kModelFormat) {
      throw parse_error("not a kner-crf model file");
    }
    if (j.at("version").get<int>() != kModelVersion) {
      throw parse_error("unsupported model version " +
                        j.at("version").dump());
    }
    CrfModel m;
    m.labels_ = j.at("labels").get<std::vector<std::string>>();
    if (m.labels_.empty()) throw parse_error("model has no labels");
    for (std::size_t i = 0; i < m.labels_.size(); ++i) {
      m.label_ids_[m.labels_[i]] = i;
    }
    m.template_ = FeatureTemplate::parse(j.at("template").get<std::string>());
    m.feature_order_ = j.at("features").get<std::vector<std::string>>();
    const std::size_t K = m.labels_.size();
    std::size_t off = K * K;
    for (const std::string& s : m.feature_order_) {
      if (s.empty() || (s[0] != 'u' && s[0] != 'b')) {
        throw parse_error("corrupt feature entry '" + s + "'");
      }
      m.feature_offsets_[s] = off;
      off += s[0] == 'u' ? K : K * K;
    }
    m.weights_ = j.at("weights").get<std::vector<double>>();
    if (m.weights_.size() != off) {
      throw parse_error("weight vector does not match feature table");
    }
    if (auto it = j.find("config"); it != j.end()) {
      m.config_.l2_strength = it->value("l2_strength", m.config_.l2_strength);
      m.config_.epochs = it->value("epochs", m.config_.epochs);
      m.config_.learning_rate =
          it->value("learning_rate", m.config_.learning_rate);
      m.config_.shuffle_seed =
          it->value("shuffle_seed", m.config_.shuffle_seed);
      m.config_.batch_size = it->value("batch_size", m.config_.batch_size);
    }
    if (auto it = j.find("stats"); it != j.end()) {
      m.summary_.sentences = it->value("sentences", std::size_t{0});
      m.summary_.epoch_loss =
          it->value("epoch_loss", std::vector<double>{});
      m.summary_.loss_nonincreasing = it->value("loss_nonincreasing", true);
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("malformed model file: ") + e.what());
  }
}

void save_model(const CrfModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write model file '" + path + "'");
  model.save(out);
  if (!out) throw io_error("failed writing model file '" + path + "'");
}

CrfModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot read model file '" + path + "'");
  return CrfModel::load(in);
}

}  // namespace kner
