// kner -- morpheme-level Korean NER corpus toolkit
//
// The two surface-level annotation formats this toolkit converts from and
// back to:
//
//   eojeol    one whitespace word per row:  "1<TAB>프랑스의<TAB>B-LOC"
//   syllable  one character per row:        "1<TAB>프<TAB>B-LOC"
//
// Sentences are blank-line separated. Syllable corpora may carry rows for
// the spaces between eojeols; space rows are boundary markers, never tagged,
// and entity continuity is judged on the stream with the spaces removed.
#ifndef KNER_FORMATS_HPP_
#define KNER_FORMATS_HPP_

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kner/tagset.hpp"

namespace kner {

struct EojeolRow {
  int index = 0;  // 1-based
  std::string surface;
  NeTag tag;
};

struct EojeolSentence {
  std::vector<EojeolRow> rows;
  std::vector<NeTag> tags() const;
};

struct SyllableRow {
  int index = 0;  // 1-based, space rows included
  std::string syllable;  // exactly one code point
  NeTag tag;
  bool is_space() const { return syllable == " "; }
};

struct SyllableSentence {
  std::vector<SyllableRow> rows;
  // Tags of the non-space rows, in order.
  std::vector<NeTag> content_tags() const;
  // Concatenated non-space syllables.
  std::string content_text() const;
};

struct TsvOptions {
  LabelSet labels = LabelSet::default_set();
};

class EojeolReader {
 public:
  EojeolReader(std::istream& in, TsvOptions options = {});
  std::optional<EojeolSentence> next();

 private:
  std::istream& in_;
  TsvOptions options_;
  std::size_t line_no_ = 0;
  bool eof_ = false;
};

class SyllableReader {
 public:
  SyllableReader(std::istream& in, TsvOptions options = {});
  std::optional<SyllableSentence> next();

 private:
  std::istream& in_;
  TsvOptions options_;
  std::size_t line_no_ = 0;
  bool eof_ = false;
};

std::vector<EojeolSentence> parse_eojeol(std::istream& in, TsvOptions options = {});
std::vector<EojeolSentence> parse_eojeol(const std::string& text, TsvOptions options = {});
std::vector<SyllableSentence> parse_syllable(std::istream& in, TsvOptions options = {});
std::vector<SyllableSentence> parse_syllable(const std::string& text, TsvOptions options = {});

void write_eojeol(std::ostream& out, const EojeolSentence& sentence);
std::string write_eojeol(std::span<const EojeolSentence> sentences);
void write_syllable(std::ostream& out, const SyllableSentence& sentence);
std::string write_syllable(std::span<const SyllableSentence> sentences);

}  // namespace kner

#endif  // KNER_FORMATS_HPP_
