// kner -- morpheme-level Korean NER corpus toolkit
#include "kner/tagset.hpp"

#include <algorithm>
#include <array>
#include <istream>

namespace kner {
namespace {

constexpr std::array<std::string_view, kUposCount> kUposNames = {
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X"};

// Sejong morphological tagset.
constexpr std::array<std::string_view, 46> kSejong = {
    // nominals
    "NNG", "NNP", "NNB", "NR", "NP",
    // predicates
    "VV", "VA", "VX", "VCP", "VCN",
    // modifiers
    "MM", "MAG", "MAJ",
    // interjection
    "IC",
    // postpositions
    "JKS", "JKC", "JKG", "JKO", "JKB", "JKV", "JKQ", "JX", "JC",
    // endings
    "EP", "EF", "EC", "ETN", "ETM",
    // affixes and roots
    "XPN", "XSN", "XSV", "XSA", "XSB", "XR",
    // symbols
    "SF", "SP", "SS", "SE", "SO", "SW",
    // others
    "SL", "SH", "SN", "NF", "NV", "NA"};

constexpr std::array<std::string_view, 14> kDefaultLabels = {
    "AFW", "ANM", "CVL", "DAT", "EVT", "FLD", "LOC",
    "MAT", "NUM", "ORG", "PER", "PLT", "TIM", "TRM"};

std::vector<std::string> read_symbol_lines(std::istream& in) {
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    out.push_back(line);
  }
  return out;
}

}  // namespace

std::string_view to_string(Upos upos) {
  return kUposNames[static_cast<std::size_t>(upos)];
}

std::optional<Upos> upos_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kUposNames.size(); ++i) {
    if (kUposNames[i] == s) return static_cast<Upos>(i);
  }
  return std::nullopt;
}

const XposInventory& XposInventory::sejong() {
  static const XposInventory inv = [] {
    XposInventory v;
    v.symbols_.assign(kSejong.begin(), kSejong.end());
    return v;
  }();
  return inv;
}

XposInventory XposInventory::from_symbols(std::vector<std::string> symbols) {
  XposInventory v;
  v.symbols_ = std::move(symbols);
  return v;
}

XposInventory XposInventory::load(std::istream& in) {
  return from_symbols(read_symbol_lines(in));
}

bool XposInventory::contains(std::string_view symbol) const {
  return std::find(symbols_.begin(), symbols_.end(), symbol) != symbols_.end();
}

bool is_postposition_xpos(std::string_view xpos) {
  return !xpos.empty() && xpos[0] == 'J';
}

LabelSet LabelSet::default_set() {
  static const LabelSet ls = [] {
    LabelSet v;
    v.labels_.assign(kDefaultLabels.begin(), kDefaultLabels.end());
    return v;
  }();
  return ls;
}

LabelSet LabelSet::from_labels(std::vector<std::string> labels) {
  LabelSet v;
  v.labels_ = std::move(labels);
  return v;
}

LabelSet LabelSet::load(std::istream& in) {
  return from_labels(read_symbol_lines(in));
}

bool LabelSet::contains(std::string_view label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

std::string_view to_string(Scheme scheme) {
  return scheme == Scheme::BIO ? "bio" : "bioes";
}

std::optional<Scheme> scheme_from_string(std::string_view s) {
  if (s == "bio" || s == "BIO") return Scheme::BIO;
  if (s == "bioes" || s == "BIOES") return Scheme::BIOES;
  return std::nullopt;
}

NeTag NeTag::make(NePosition pos, std::string label) {
  NeTag t;
  t.position = pos;
  if (pos != NePosition::Outside) t.label = std::move(label);
  return t;
}

std::string NeTag::to_string() const {
  switch (position) {
    case NePosition::Outside: return "O";
    case NePosition::Begin: return "B-" + label;
    case NePosition::Inside: return "I-" + label;
    case NePosition::End: return "E-" + label;
    case NePosition::Single: return "S-" + label;
  }
  return "O";
}

std::optional<NeTag> NeTag::parse(std::string_view s) {
  if (s == "O") return outside();
  if (s.size() < 3 || s[1] != '-') return std::nullopt;
  NePosition pos;
  switch (s[0]) {
    case 'B': pos = NePosition::Begin; break;
    case 'I': pos = NePosition::Inside; break;
    case 'E': pos = NePosition::End; break;
    case 'S': pos = NePosition::Single; break;
    default: return std::nullopt;
  }
  return make(pos, std::string(s.substr(2)));
}

std::vector<TagViolation> validate_sequence(std::span<const NeTag> tags,
                                            Scheme scheme) {
  std::vector<TagViolation> out;
  if (scheme == Scheme::BIO) {
    // Valid iff the sequence parses as (O | B-X I-X*)*.
    const NeTag* prev = nullptr;
    for (std::size_t i = 0; i < tags.size(); ++i) {
      const NeTag& t = tags[i];
      switch (t.position) {
        case NePosition::End:
          out.push_back({i, "E not allowed in BIO scheme"});
          break;
        case NePosition::Single:
          out.push_back({i, "S not allowed in BIO scheme"});
          break;
        case NePosition::Inside: {
          bool open = prev && (prev->position == NePosition::Begin ||
                               prev->position == NePosition::Inside);
          if (!open) {
            out.push_back({i, "I without matching B"});
          } else if (prev->label != t.label) {
            out.push_back({i, "I label mismatch"});
          }
          break;
        }
        default:
          break;
      }
      prev = &t;
    }
    return out;
  }

  // BIOES: valid iff the sequence parses as (O | S-X | B-X I-X* E-X)*.
  bool open = false;
  std::string open_label;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    const NeTag& t = tags[i];
    switch (t.position) {
      case NePosition::Outside:
        if (open) out.push_back({i, "unclosed span before O"});
        open = false;
        break;
      case NePosition::Begin:
        if (open) out.push_back({i, "unclosed span before B"});
        open = true;
        open_label = t.label;
        break;
      case NePosition::Inside:
        if (!open) {
          out.push_back({i, "I without matching B"});
        } else if (open_label != t.label) {
          out.push_back({i, "I label mismatch"});
        }
        open = true;
        open_label = t.label;
        break;
      case NePosition::End:
        if (!open) {
          out.push_back({i, "E without matching B"});
        } else if (open_label != t.label) {
          out.push_back({i, "E label mismatch"});
        }
        open = false;
        break;
      case NePosition::Single:
        if (open) out.push_back({i, "unclosed span before S"});
        open = false;
        break;
    }
  }
  if (open && !tags.empty()) {
    out.push_back({tags.size() - 1, "unclosed span at end"});
  }
  return out;
}

namespace {

void require_valid(std::span<const NeTag> tags, Scheme scheme) {
  auto violations = validate_sequence(tags, scheme);
  if (!violations.empty()) {
    const TagViolation& v = violations.front();
    throw validation_error("invalid tag sequence at index " +
                           std::to_string(v.index) + ": " + v.message);
  }
}

}  // namespace

std::vector<NeTag> bio_to_bioes(std::span<const NeTag> tags) {
  require_valid(tags, Scheme::BIO);
  std::vector<NeTag> out;
  out.reserve(tags.size());
  for (std::size_t i = 0; i < tags.size(); ++i) {
    const NeTag& t = tags[i];
    bool continues = i + 1 < tags.size() &&
                     tags[i + 1].position == NePosition::Inside &&
                     tags[i + 1].label == t.label;
    switch (t.position) {
      case NePosition::Begin:
        out.push_back(NeTag::make(
            continues ? NePosition::Begin : NePosition::Single, t.label));
        break;
      case NePosition::Inside:
        out.push_back(NeTag::make(
            continues ? NePosition::Inside : NePosition::End, t.label));
        break;
      default:
        out.push_back(NeTag::outside());
        break;
    }
  }
  return out;
}

std::vector<NeTag> bioes_to_bio(std::span<const NeTag> tags) {
  require_valid(tags, Scheme::BIOES);
  std::vector<NeTag> out;
  out.reserve(tags.size());
  for (const NeTag& t : tags) {
    switch (t.position) {
      case NePosition::Begin:
      case NePosition::Single:
        out.push_back(NeTag::make(NePosition::Begin, t.label));
        break;
      case NePosition::Inside:
      case NePosition::End:
        out.push_back(NeTag::make(NePosition::Inside, t.label));
        break;
      default:
        out.push_back(NeTag::outside());
        break;
    }
  }
  return out;
}

std::vector<EntitySpan> extract_entities(std::span<const NeTag> tags) {
  std::vector<EntitySpan> out;
  bool open = false;
  EntitySpan cur;
  const auto close = [&](std::size_t end) {
    if (open) {
      cur.end = end;
      out.push_back(cur);
      open = false;
    }
  };
  for (std::size_t i = 0; i < tags.size(); ++i) {
    const NeTag& t = tags[i];
    switch (t.position) {
      case NePosition::Outside:
        close(i - 1);
        break;
      case NePosition::Begin:
        close(i - 1);
        open = true;
        cur = {i, i, t.label};
        break;
      case NePosition::Single:
        close(i - 1);
        out.push_back({i, i, t.label});
        break;
      case NePosition::Inside:
        if (open && cur.label == t.label) {
          cur.end = i;
        } else {
          // implicit start, conlleval-style
          close(i - 1);
          open = true;
          cur = {i, i, t.label};
        }
        break;
      case NePosition::End:
        if (open && cur.label == t.label) {
          cur.end = i;
          out.push_back(cur);
          open = false;
        } else {
          close(i - 1);
          out.push_back({i, i, t.label});
        }
        break;
    }
  }
  if (open) {
    out.push_back(cur);
  }
  return out;
}

std::vector<EntitySpan> extract_entities_strict(std::span<const NeTag> tags,
                                                Scheme scheme) {
  require_valid(tags, scheme);
  return extract_entities(tags);
}

}  // namespace kner
