// kner -- morpheme-level Korean NER corpus toolkit
//
// Projection of word-level and character-level NE annotations onto morpheme
// rows, and the exact inverse mappings back.
//
// eojeol -> morpheme. Within a tagged eojeol the tag may only land on
// morphemes that carry content. Eligibility is decided by an exclusion
// ladder over UPOS: first try to place the tag on a morpheme that is not an
// adposition, punctuation, particle, determiner or verb; if the eojeol has
// no such morpheme, re-admit verbs; then particles and determiners; the
// excluded set keeps shrinking until something qualifies. The tag lands on
// the leftmost eligible morpheme and extends right while morphemes stay
// eligible. Untagged morphemes strictly between two tagged stretches of the
// same entity (a genitive particle inside a long name, say) are absorbed
// into it.
//
// syllable -> morpheme. A morpheme is tagged when its characters sit inside
// the entity's character span. Contracted surfaces (세계적인 from 세계+적+
// 이+ㄴ) are aligned by decomposing syllables into jamo; eojeols whose
// contraction does not decompose cleanly are flagged, not guessed at.
//
// Both inverses reproduce their input exactly on every sentence the forward
// direction accepted.
#ifndef KNER_CONVERT_HPP_
#define KNER_CONVERT_HPP_

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kner/conllu.hpp"
#include "kner/formats.hpp"
#include "kner/tagset.hpp"

namespace kner {

// The shrinking sets of UPOS tags barred from carrying an NE tag. Tier 0 is
// tried first; each later tier must be a strict subset; the last tier must
// be empty so that a carrier always exists.
struct ExclusionPolicy {
  std::vector<std::set<Upos>> tiers;

  static ExclusionPolicy standard();
  // Throws Error(InvalidArg) unless tiers strictly shrink to an empty set.
  void check() const;
};

// Why each morpheme ended up tagged or not; one entry per token.
enum class TokenDecision : std::uint8_t {
  Outside,      // not part of any entity
  Carrier,      // eligible morpheme the tag landed on
  GapAbsorbed,  // untagged morpheme pulled in between two carriers
};

struct TokenTrace {
  TokenDecision decision = TokenDecision::Outside;
  int tier = -1;  // exclusion tier the carrier was found at, -1 otherwise
};

struct ConvertTrace {
  std::vector<TokenTrace> tokens;
};

// Eojeol-level tags onto the morpheme rows of the same sentence.
// Requires matching surfaces and UPOS on every morpheme.
// Throws Error(Align) when the two sides disagree.
MorphSentence eoj2morph(const EojeolSentence& ner, const MorphSentence& morph,
                        const ExclusionPolicy& policy = ExclusionPolicy::standard(),
                        ConvertTrace* trace = nullptr);

// Character-level tags onto the morpheme rows. Requires equal character
// streams (spaces aside). Throws Error(Align) on stream mismatch, on eojeol
// boundaries that contradict the morph side, and on contractions that
// cannot be aligned where the entity boundary falls inside the eojeol.
MorphSentence syl2morph(const SyllableSentence& ner, const MorphSentence& morph);

// Inverse mappings. morph2eoj throws Error(Granularity) when two entities
// meet inside one eojeol, which a word-level tag cannot express. morph2syl
// throws Error(Align) for the same contractions syl2morph would reject.
EojeolSentence morph2eoj(const MorphSentence& morph);
SyllableSentence morph2syl(const MorphSentence& morph);

// Character span of each morpheme inside its eojeol's surface, in code
// points, half-open. Greedy longest-prefix match on the raw characters
// first, then on the jamo decomposition. nullopt when neither works.
struct TokenCharSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};
std::optional<std::vector<TokenCharSpan>> align_tokens_to_surface(
    const EojeolSpan& eojeol);

}  // namespace kner

#endif  // KNER_CONVERT_HPP_
