// kner -- morpheme-level Korean NER corpus toolkit
#include "kner/convert.hpp"

#include <algorithm>
#include <cassert>

#include "kner/hangul.hpp"

namespace kner {
namespace {

std::string strip_spaces(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c != ' ' && c != '\t') out += c;
  }
  return out;
}

// Flat token index of the first token of each eojeol, plus the total.
std::vector<std::size_t> token_offsets(const MorphSentence& morph) {
  std::vector<std::size_t> offsets;
  offsets.reserve(morph.eojeols.size() + 1);
  std::size_t n = 0;
  for (const EojeolSpan& e : morph.eojeols) {
    offsets.push_back(n);
    n += e.tokens.size();
  }
  offsets.push_back(n);
  return offsets;
}

// Content-stream character offset of the first character of each eojeol.
std::vector<std::size_t> char_offsets(const MorphSentence& morph) {
  std::vector<std::size_t> offsets;
  offsets.reserve(morph.eojeols.size() + 1);
  std::size_t n = 0;
  for (const EojeolSpan& e : morph.eojeols) {
    offsets.push_back(n);
    n += codepoint_count(e.surface);
  }
  offsets.push_back(n);
  return offsets;
}

}  // namespace

ExclusionPolicy ExclusionPolicy::standard() {
  ExclusionPolicy p;
  p.tiers = {
      {Upos::ADP, Upos::PUNCT, Upos::PART, Upos::DET, Upos::VERB},
      {Upos::ADP, Upos::PUNCT, Upos::PART, Upos::DET},
      {Upos::ADP, Upos::PUNCT},
      {},
  };
  return p;
}

void ExclusionPolicy::check() const {
  if (tiers.empty() || !tiers.back().empty()) {
    throw Error(ErrorKind::InvalidArg, "exclusion tiers must end with an empty set");
  }
  for (std::size_t i = 1; i < tiers.size(); ++i) {
    bool subset = std::includes(tiers[i - 1].begin(), tiers[i - 1].end(),
                                tiers[i].begin(), tiers[i].end());
    if (!subset || tiers[i].size() >= tiers[i - 1].size()) {
      throw Error(ErrorKind::InvalidArg,
                  "exclusion tiers must strictly shrink");
    }
  }
}

std::optional<std::vector<TokenCharSpan>> align_tokens_to_surface(
    const EojeolSpan& eojeol) {
  std::u32string surface = to_u32(eojeol.surface);

  // First try the characters as written.
  {
    std::vector<TokenCharSpan> spans;
    std::size_t pos = 0;
    bool ok = true;
    for (const MorphToken& t : eojeol.tokens) {
      std::u32string form = to_u32(t.form);
      if (surface.compare(pos, form.size(), form) == 0) {
        spans.push_back({pos, pos + form.size()});
        pos += form.size();
      } else {
        ok = false;
        break;
      }
    }
    if (ok && pos == surface.size()) return spans;
  }

  // Contracted surface: retry on the jamo decomposition, remembering which
  // syllable each jamo came from.
  std::u32string surf_jamo;
  std::vector<std::size_t> owner;  // jamo index -> syllable index
  for (std::size_t i = 0; i < surface.size(); ++i) {
    std::u32string piece;
    append_jamo(surface[i], &piece);
    surf_jamo += piece;
    owner.insert(owner.end(), piece.size(), i);
  }

  std::vector<TokenCharSpan> spans;
  std::size_t pos = 0;
  for (const MorphToken& t : eojeol.tokens) {
    std::u32string fj = to_jamo(to_u32(t.form));
    if (fj.empty() || surf_jamo.compare(pos, fj.size(), fj) != 0) {
      return std::nullopt;
    }
    spans.push_back({owner[pos], owner[pos + fj.size() - 1] + 1});
    pos += fj.size();
  }
  if (pos != surf_jamo.size()) return std::nullopt;
  return spans;
}

MorphSentence eoj2morph(const EojeolSentence& ner, const MorphSentence& morph,
                        const ExclusionPolicy& policy, ConvertTrace* trace) {
  policy.check();
  if (ner.rows.size() != morph.eojeols.size()) {
    throw align_error("eojeol count mismatch: ner has " +
                      std::to_string(ner.rows.size()) + ", morph has " +
                      std::to_string(morph.eojeols.size()));
  }
  for (std::size_t i = 0; i < ner.rows.size(); ++i) {
    if (strip_spaces(ner.rows[i].surface) !=
        strip_spaces(morph.eojeols[i].surface)) {
      throw align_error("surface mismatch at eojeol " + std::to_string(i + 1) +
                        ": '" + ner.rows[i].surface + "' vs '" +
                        morph.eojeols[i].surface + "'");
    }
    for (const MorphToken& t : morph.eojeols[i].tokens) {
      if (!t.upos) {
        throw align_error("token " + std::to_string(t.id) + " lacks UPOS");
      }
    }
  }

  MorphSentence out = morph;
  std::vector<std::size_t> offsets = token_offsets(morph);
  std::size_t total = offsets.back();
  std::vector<NeTag> tags(total, NeTag::outside());
  if (trace) trace->tokens.assign(total, TokenTrace{});

  std::vector<NeTag> eojeol_tags = ner.tags();
  for (const EntitySpan& inst : extract_entities(eojeol_tags)) {
    std::vector<bool> carrier(total, false);
    std::size_t first_tok = total, last_tok = 0;

    for (std::size_t e = inst.begin; e <= inst.end; ++e) {
      const std::vector<MorphToken>& toks = morph.eojeols[e].tokens;
      int tier = -1;
      std::size_t lead = toks.size();
      for (std::size_t ti = 0; ti < policy.tiers.size() && tier < 0; ++ti) {
        for (std::size_t k = 0; k < toks.size(); ++k) {
          if (!policy.tiers[ti].contains(*toks[k].upos)) {
            tier = static_cast<int>(ti);
            lead = k;
            break;
          }
        }
      }
      assert(tier >= 0);  // the empty last tier always matches
      const std::set<Upos>& excluded = policy.tiers[static_cast<std::size_t>(tier)];
      for (std::size_t k = lead;
           k < toks.size() && !excluded.contains(*toks[k].upos); ++k) {
        std::size_t flat = offsets[e] + k;
        carrier[flat] = true;
        first_tok = std::min(first_tok, flat);
        last_tok = std::max(last_tok, flat);
        if (trace) trace->tokens[flat] = {TokenDecision::Carrier, tier};
      }
    }

    // Entity membership runs from the first carrier to the last; untagged
    // morphemes caught in between belong to the same entity.
    for (std::size_t t = first_tok; t <= last_tok; ++t) {
      tags[t] = NeTag::make(
          t == first_tok ? NePosition::Begin : NePosition::Inside, inst.label);
      if (trace && !carrier[t]) {
        trace->tokens[t] = {TokenDecision::GapAbsorbed, -1};
      }
    }
  }

  out.set_ne_tags(tags);
  return out;
}

EojeolSentence morph2eoj(const MorphSentence& morph) {
  std::vector<std::size_t> offsets = token_offsets(morph);
  const auto eojeol_of = [&](std::size_t flat) {
    std::size_t e = 0;
    while (offsets[e + 1] <= flat) ++e;
    return e;
  };

  EojeolSentence out;
  out.rows.reserve(morph.eojeols.size());
  for (std::size_t e = 0; e < morph.eojeols.size(); ++e) {
    out.rows.push_back(
        {static_cast<int>(e) + 1, morph.eojeols[e].surface, NeTag::outside()});
  }

  std::vector<NeTag> tags = morph.ne_tags();
  std::vector<bool> claimed(morph.eojeols.size(), false);
  for (const EntitySpan& inst : extract_entities(tags)) {
    std::size_t e_first = eojeol_of(inst.begin);
    std::size_t e_last = eojeol_of(inst.end);
    for (std::size_t e = e_first; e <= e_last; ++e) {
      if (claimed[e]) {
        throw granularity_error("two entities share eojeol " +
                                std::to_string(e + 1));
      }
      claimed[e] = true;
      out.rows[e].tag = NeTag::make(
          e == e_first ? NePosition::Begin : NePosition::Inside, inst.label);
    }
  }
  return out;
}

namespace {

// Content-stream character coverage of an entity instance over morph tokens.
// Whole eojeols inside the instance need no alignment; partially covered
// eojeols must align so the member morphemes' characters can be picked out.
std::vector<bool> instance_coverage(const MorphSentence& morph,
                                    const std::vector<std::size_t>& tok_offsets,
                                    const std::vector<std::size_t>& chr_offsets,
                                    const EntitySpan& inst) {
  std::vector<bool> covered(chr_offsets.back(), false);
  for (std::size_t e = 0; e < morph.eojeols.size(); ++e) {
    std::size_t lo = tok_offsets[e], hi = tok_offsets[e + 1];
    if (hi <= inst.begin || lo > inst.end) continue;
    bool whole = inst.begin <= lo && inst.end + 1 >= hi;
    if (whole) {
      for (std::size_t c = chr_offsets[e]; c < chr_offsets[e + 1]; ++c) {
        covered[c] = true;
      }
      continue;
    }
    auto spans = align_tokens_to_surface(morph.eojeols[e]);
    if (!spans) {
      throw align_error("cannot align contraction in eojeol " +
                        std::to_string(e + 1) + " ('" +
                        morph.eojeols[e].surface + "')");
    }
    for (std::size_t t = lo; t < hi; ++t) {
      if (t < inst.begin || t > inst.end) continue;
      const TokenCharSpan& s = (*spans)[t - lo];
      for (std::size_t c = s.begin; c < s.end; ++c) {
        covered[chr_offsets[e] + c] = true;
      }
    }
  }
  return covered;
}

}  // namespace

SyllableSentence morph2syl(const MorphSentence& morph) {
  std::vector<std::size_t> tok_offsets = token_offsets(morph);
  std::vector<std::size_t> chr_offsets = char_offsets(morph);

  std::vector<NeTag> char_tags(chr_offsets.back(), NeTag::outside());
  std::vector<NeTag> tags = morph.ne_tags();
  for (const EntitySpan& inst : extract_entities(tags)) {
    std::vector<bool> covered =
        instance_coverage(morph, tok_offsets, chr_offsets, inst);
    bool first = true;
    for (std::size_t c = 0; c < covered.size(); ++c) {
      if (!covered[c]) continue;
      char_tags[c] = NeTag::make(
          first ? NePosition::Begin : NePosition::Inside, inst.label);
      first = false;
    }
  }

  SyllableSentence out;
  int index = 1;
  for (std::size_t e = 0; e < morph.eojeols.size(); ++e) {
    std::u32string surface = to_u32(morph.eojeols[e].surface);
    for (std::size_t c = 0; c < surface.size(); ++c) {
      out.rows.push_back(
          {index++, to_utf8(surface[c]), char_tags[chr_offsets[e] + c]});
    }
    if (e + 1 < morph.eojeols.size() && morph.eojeols[e].space_after()) {
      out.rows.push_back({index++, " ", NeTag::outside()});
    }
  }
  return out;
}

MorphSentence syl2morph(const SyllableSentence& ner, const MorphSentence& morph) {
  std::vector<std::size_t> tok_offsets = token_offsets(morph);
  std::vector<std::size_t> chr_offsets = char_offsets(morph);

  // The two sides must describe the same character stream.
  std::u32string content = to_u32(ner.content_text());
  std::u32string stream;
  for (const EojeolSpan& e : morph.eojeols) stream += to_u32(e.surface);
  if (content != stream) {
    std::size_t k = 0;
    while (k < content.size() && k < stream.size() && content[k] == stream[k]) {
      ++k;
    }
    throw align_error("character stream mismatch at offset " +
                      std::to_string(k));
  }

  // Space rows, when annotated at all, must fall exactly on the eojeol
  // boundaries the morph side declares (SpaceAfter=No boundaries have none).
  bool has_spaces =
      std::any_of(ner.rows.begin(), ner.rows.end(),
                  [](const SyllableRow& r) { return r.is_space(); });
  if (has_spaces) {
    std::vector<std::size_t> actual;
    std::size_t content_pos = 0;
    for (const SyllableRow& r : ner.rows) {
      if (r.is_space()) {
        actual.push_back(content_pos);
      } else {
        ++content_pos;
      }
    }
    std::vector<std::size_t> expected;
    for (std::size_t e = 0; e + 1 < morph.eojeols.size(); ++e) {
      if (morph.eojeols[e].space_after()) {
        expected.push_back(chr_offsets[e + 1]);
      }
    }
    if (actual != expected) {
      std::size_t k = 0;
      while (k < actual.size() && k < expected.size() &&
             actual[k] == expected[k]) {
        ++k;
      }
      std::size_t at = k < actual.size() ? actual[k]
                       : k < expected.size() ? expected[k]
                                             : content.size();
      throw align_error("eojeol boundary mismatch at offset " +
                        std::to_string(at));
    }
  }

  std::vector<NeTag> content_tags = ner.content_tags();
  std::vector<NeTag> tags(tok_offsets.back(), NeTag::outside());

  for (const EntitySpan& inst : extract_entities(content_tags)) {
    // inst is a span of content characters here.
    std::size_t a = inst.begin, b = inst.end + 1;
    std::vector<std::size_t> members;
    for (std::size_t e = 0; e < morph.eojeols.size(); ++e) {
      std::size_t s = chr_offsets[e], t = chr_offsets[e + 1];
      if (t <= a || s >= b) continue;
      if (a <= s && b >= t) {
        for (std::size_t k = tok_offsets[e]; k < tok_offsets[e + 1]; ++k) {
          members.push_back(k);
        }
        continue;
      }
      auto spans = align_tokens_to_surface(morph.eojeols[e]);
      if (!spans) {
        throw align_error("cannot align contraction in eojeol " +
                          std::to_string(e + 1) + " ('" +
                          morph.eojeols[e].surface + "')");
      }
      for (std::size_t k = 0; k < spans->size(); ++k) {
        std::size_t gb = s + (*spans)[k].begin, ge = s + (*spans)[k].end;
        if (gb >= a && ge <= b) {
          members.push_back(tok_offsets[e] + k);
        } else if (gb < b && ge > a) {
          throw align_error("entity boundary splits morpheme " +
                            std::to_string(tok_offsets[e] + k + 1) +
                            " in eojeol " + std::to_string(e + 1));
        }
      }
    }
    assert(!members.empty());
    for (std::size_t i = 0; i < members.size(); ++i) {
      assert(i == 0 || members[i] == members[i - 1] + 1);
      tags[members[i]] = NeTag::make(
          i == 0 ? NePosition::Begin : NePosition::Inside, inst.label);
    }
  }

  MorphSentence out = morph;
  out.set_ne_tags(tags);
  return out;
}

}  // namespace kner
