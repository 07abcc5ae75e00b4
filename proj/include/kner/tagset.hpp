// kner -- morpheme-level Korean NER corpus toolkit
//
// Label inventories and the BIO / BIOES tag algebra shared by every format.
#ifndef KNER_TAGSET_HPP_
#define KNER_TAGSET_HPP_

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kner/error.hpp"

namespace kner {

// ---------------------------------------------------------------------------
// Part-of-speech inventories

// Universal POS, closed 17-symbol set.
enum class Upos : std::uint8_t {
  ADJ, ADP, ADV, AUX, CCONJ, DET, INTJ, NOUN, NUM,
  PART, PRON, PROPN, PUNCT, SCONJ, SYM, VERB, X,
};
inline constexpr std::size_t kUposCount = 17;

std::string_view to_string(Upos upos);
std::optional<Upos> upos_from_string(std::string_view s);

// Language-specific POS symbols (Sejong tagset by default, 46 symbols).
// Kept configurable because treebanks disagree on the periphery of the set.
class XposInventory {
 public:
  static const XposInventory& sejong();
  static XposInventory from_symbols(std::vector<std::string> symbols);
  static XposInventory load(std::istream& in);

  bool contains(std::string_view symbol) const;
  const std::vector<std::string>& symbols() const { return symbols_; }
  std::size_t size() const { return symbols_.size(); }

 private:
  std::vector<std::string> symbols_;
};

// Sejong postposition classes all start with J (JKS, JKG, JX, JC, ...).
bool is_postposition_xpos(std::string_view xpos);

// ---------------------------------------------------------------------------
// NE labels

// Closed set of entity labels. The default is the 14-class inventory
// (AFW ANM CVL DAT EVT FLD LOC MAT NUM ORG PER PLT TIM TRM); alternative
// sets load from a plain one-label-per-line file.
class LabelSet {
 public:
  LabelSet() = default;
  static LabelSet default_set();
  static LabelSet from_labels(std::vector<std::string> labels);
  static LabelSet load(std::istream& in);

  bool contains(std::string_view label) const;
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t size() const { return labels_.size(); }

 private:
  std::vector<std::string> labels_;
};

// ---------------------------------------------------------------------------
// Tags

enum class NePosition : std::uint8_t { Outside, Begin, Inside, End, Single };

enum class Scheme : std::uint8_t { BIO, BIOES };

std::string_view to_string(Scheme scheme);
std::optional<Scheme> scheme_from_string(std::string_view s);

// One token-level tag: O, or position + label ("B-LOC").
struct NeTag {
  NePosition position = NePosition::Outside;
  std::string label;  // empty iff Outside

  bool is_outside() const { return position == NePosition::Outside; }

  static NeTag outside() { return {}; }
  static NeTag make(NePosition pos, std::string label);

  std::string to_string() const;
  // Accepts "O" and "<P>-<label>" with P in {B,I,E,S}. Returns nullopt on
  // anything else; label membership is checked by the caller against its
  // LabelSet.
  static std::optional<NeTag> parse(std::string_view s);

  bool operator==(const NeTag&) const = default;
};

// ---------------------------------------------------------------------------
// Sequence operations

struct TagViolation {
  std::size_t index = 0;
  std::string message;
  bool operator==(const TagViolation&) const = default;
};

// Checks well-formedness under the given scheme. Violations come back as
// data; an empty vector means the sequence is valid.
std::vector<TagViolation> validate_sequence(std::span<const NeTag> tags, Scheme scheme);

// Scheme conversions. Both directions throw Error(Validation) when the input
// is not well-formed under its scheme; on valid input they are exact inverses
// and preserve the entity set.
std::vector<NeTag> bio_to_bioes(std::span<const NeTag> tags);
std::vector<NeTag> bioes_to_bio(std::span<const NeTag> tags);

// Entity span over token indices, [begin, end] inclusive.
struct EntitySpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::string label;
  auto operator<=>(const EntitySpan&) const = default;
};

// Tolerant extraction in the conlleval tradition: an I or E with no open
// span (or with a different label) starts a new entity. Predictions are
// frequently ill-formed; scoring them must not depend on repairing them
// first. Works on BIO and BIOES input alike.
std::vector<EntitySpan> extract_entities(std::span<const NeTag> tags);

// Strict variant: throws Error(Validation) describing the first violation.
std::vector<EntitySpan> extract_entities_strict(std::span<const NeTag> tags,
                                                Scheme scheme);

}  // namespace kner

#endif  // KNER_TAGSET_HPP_
