// kner -- morpheme-level Korean NER corpus toolkit
//
// Morpheme-level sentences in CoNLL-U form: one row per morpheme, one range
// line per multi-morpheme eojeol. Two serialization modes:
//
//   Canonical      strict 10-column CoNLL-U; the NE tag travels in MISC as
//                  "NE=B-LOC". Survives third-party CoNLL-U tooling.
//   Figure2Compat  compact 7-column layout (ID FORM LEMMA UPOS XPOS NE MISC)
//                  with the NE tag as its own column.
//
// Within one mode, parse and write round-trip byte-for-byte.
#ifndef KNER_CONLLU_HPP_
#define KNER_CONLLU_HPP_

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kner/tagset.hpp"

namespace kner {

struct MorphToken {
  int id = 0;  // 1-based position in the sentence
  std::string form;
  std::string lemma;
  std::optional<Upos> upos;  // nullopt = '_'
  std::string xpos;          // empty = '_'
  NeTag ne;
  std::vector<std::string> misc;  // "key=value" items, never contains NE=
};

// One eojeol: a single morpheme, or a start..end range of morphemes that
// share a surface form.
struct EojeolSpan {
  int start_id = 0;
  int end_id = 0;
  std::string surface;
  std::vector<std::string> misc;  // MISC of the range line (multiword only)
  std::vector<MorphToken> tokens;

  bool multiword() const { return end_id > start_id; }
  // False iff SpaceAfter=No is present on the range line (multiword) or on
  // the sole token (single).
  bool space_after() const;
};

struct MorphSentence {
  std::string sent_id;
  std::string text;
  // All comment lines verbatim, in order, including the sent_id/text lines.
  // The writer re-emits them untouched; if empty, it synthesizes comments
  // from sent_id and text.
  std::vector<std::string> comments;
  std::vector<EojeolSpan> eojeols;

  std::size_t token_count() const;
  const MorphToken& token(std::size_t flat_index) const;  // 0-based
  MorphToken& token(std::size_t flat_index);

  std::vector<NeTag> ne_tags() const;
  void set_ne_tags(std::span<const NeTag> tags);

  // Surface text rebuilt from eojeol surfaces and SpaceAfter.
  std::string reconstructed_text() const;
};

enum class ConlluMode { Canonical, Figure2Compat };

std::string_view to_string(ConlluMode mode);
std::optional<ConlluMode> conllu_mode_from_string(std::string_view s);

struct ConlluOptions {
  ConlluMode mode = ConlluMode::Canonical;
  LabelSet labels = LabelSet::default_set();
  XposInventory xpos = XposInventory::sejong();
  // Check "# text" against the reconstructed surface when present.
  bool validate_text = true;
  // When set, reject sentences whose NE sequence violates the scheme.
  // Off by default: ill-formed predictions must stay readable for scoring.
  std::optional<Scheme> enforce_scheme;
};

// Pull parser; sentences come out one at a time so corpora stream.
class ConlluReader {
 public:
  ConlluReader(std::istream& in, ConlluOptions options = {});
  // nullopt at end of input. Throws Error(Parse/Structure/Vocab) with the
  // offending line number on malformed input.
  std::optional<MorphSentence> next();

 private:
  std::istream& in_;
  ConlluOptions options_;
  std::size_t line_no_ = 0;
  bool eof_ = false;
};

std::vector<MorphSentence> parse_conllu(std::istream& in, ConlluOptions options = {});
std::vector<MorphSentence> parse_conllu(const std::string& text, ConlluOptions options = {});

// Checks the structural invariants (ids contiguous from 1, spans well formed,
// non-empty forms). Throws Error(Structure) naming the violated invariant.
void check_structure(const MorphSentence& sentence);

// Serialization refuses structurally broken sentences via check_structure.
void write_conllu(std::ostream& out, const MorphSentence& sentence, ConlluMode mode);
std::string write_conllu(std::span<const MorphSentence> sentences, ConlluMode mode);

}  // namespace kner

#endif  // KNER_CONLLU_HPP_
