// kner -- morpheme-level Korean NER corpus toolkit
#include "kner/formats.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "kner/hangul.hpp"

namespace kner {
namespace {

bool parse_index(const std::string& s, int* out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && ptr == s.data() + s.size() && *out > 0;
}

// Splits a TSV row into exactly three columns.
bool split3(const std::string& line, std::string out[3]) {
  std::size_t t1 = line.find('\t');
  if (t1 == std::string::npos) return false;
  std::size_t t2 = line.find('\t', t1 + 1);
  if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos) {
    return false;
  }
  out[0] = line.substr(0, t1);
  out[1] = line.substr(t1 + 1, t2 - t1 - 1);
  out[2] = line.substr(t2 + 1);
  return true;
}

NeTag parse_row_tag(const std::string& field, std::string_view outside_alias,
                    const LabelSet& labels, std::size_t line) {
  if (field == "O" || field == outside_alias) return NeTag::outside();
  auto tag = NeTag::parse(field);
  if (!tag) throw vocab_error("unknown NE tag '" + field + "'", line);
  if (!labels.contains(tag->label)) {
    throw vocab_error("unknown NE label '" + tag->label + "'", line);
  }
  return *tag;
}

// Shared sentence-framing loop for both TSV formats.
template <typename Row, typename ParseRow>
std::optional<std::vector<Row>> next_block(std::istream& in, std::size_t* line_no,
                                           bool* eof, ParseRow parse_row) {
  if (*eof) return std::nullopt;
  std::vector<Row> rows;
  std::string line;
  while (true) {
    if (!std::getline(in, line)) {
      *eof = true;
      break;
    }
    ++*line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      if (rows.empty()) continue;
      break;
    }
    rows.push_back(parse_row(line, *line_no));
    if (rows.back().index != static_cast<int>(rows.size())) {
      throw structure_error("row index out of sequence: expected " +
                                std::to_string(rows.size()),
                            *line_no);
    }
  }
  if (rows.empty()) return std::nullopt;
  return rows;
}

}  // namespace

std::vector<NeTag> EojeolSentence::tags() const {
  std::vector<NeTag> out;
  out.reserve(rows.size());
  for (const EojeolRow& r : rows) out.push_back(r.tag);
  return out;
}

std::vector<NeTag> SyllableSentence::content_tags() const {
  std::vector<NeTag> out;
  out.reserve(rows.size());
  for (const SyllableRow& r : rows) {
    if (!r.is_space()) out.push_back(r.tag);
  }
  return out;
}

std::string SyllableSentence::content_text() const {
  std::string out;
  for (const SyllableRow& r : rows) {
    if (!r.is_space()) out += r.syllable;
  }
  return out;
}

EojeolReader::EojeolReader(std::istream& in, TsvOptions options)
    : in_(in), options_(std::move(options)) {}

std::optional<EojeolSentence> EojeolReader::next() {
  auto rows = next_block<EojeolRow>(
      in_, &line_no_, &eof_, [this](const std::string& line, std::size_t ln) {
        std::string cols[3];
        if (!split3(line, cols)) {
          throw parse_error("expected 3 tab-separated columns", ln);
        }
        EojeolRow row;
        if (!parse_index(cols[0], &row.index)) {
          throw parse_error("malformed index '" + cols[0] + "'", ln);
        }
        if (cols[1].empty()) throw parse_error("empty eojeol surface", ln);
        row.surface = cols[1];
        row.tag = parse_row_tag(cols[2], "-", options_.labels, ln);
        return row;
      });
  if (!rows) return std::nullopt;
  return EojeolSentence{std::move(*rows)};
}

SyllableReader::SyllableReader(std::istream& in, TsvOptions options)
    : in_(in), options_(std::move(options)) {}

std::optional<SyllableSentence> SyllableReader::next() {
  auto rows = next_block<SyllableRow>(
      in_, &line_no_, &eof_, [this](const std::string& line, std::size_t ln) {
        std::string cols[3];
        if (!split3(line, cols)) {
          throw parse_error("expected 3 tab-separated columns", ln);
        }
        SyllableRow row;
        if (!parse_index(cols[0], &row.index)) {
          throw parse_error("malformed index '" + cols[0] + "'", ln);
        }
        if (codepoint_count(cols[1]) != 1) {
          throw structure_error("syllable cell must hold one character", ln);
        }
        row.syllable = cols[1];
        row.tag = parse_row_tag(cols[2], "_", options_.labels, ln);
        if (row.is_space() && !row.tag.is_outside()) {
          throw structure_error("space row must not carry a tag", ln);
        }
        return row;
      });
  if (!rows) return std::nullopt;
  return SyllableSentence{std::move(*rows)};
}

std::vector<EojeolSentence> parse_eojeol(std::istream& in, TsvOptions options) {
  EojeolReader reader(in, std::move(options));
  std::vector<EojeolSentence> out;
  while (auto s = reader.next()) out.push_back(std::move(*s));
  return out;
}

std::vector<EojeolSentence> parse_eojeol(const std::string& text,
                                         TsvOptions options) {
  std::istringstream in(text);
  return parse_eojeol(in, std::move(options));
}

std::vector<SyllableSentence> parse_syllable(std::istream& in,
                                             TsvOptions options) {
  SyllableReader reader(in, std::move(options));
  std::vector<SyllableSentence> out;
  while (auto s = reader.next()) out.push_back(std::move(*s));
  return out;
}

std::vector<SyllableSentence> parse_syllable(const std::string& text,
                                             TsvOptions options) {
  std::istringstream in(text);
  return parse_syllable(in, std::move(options));
}

void write_eojeol(std::ostream& out, const EojeolSentence& sentence) {
  for (const EojeolRow& r : sentence.rows) {
    out << r.index << '\t' << r.surface << '\t' << r.tag.to_string() << '\n';
  }
  out << '\n';
}

std::string write_eojeol(std::span<const EojeolSentence> sentences) {
  std::ostringstream out;
  for (const EojeolSentence& s : sentences) write_eojeol(out, s);
  return out.str();
}

void write_syllable(std::ostream& out, const SyllableSentence& sentence) {
  for (const SyllableRow& r : sentence.rows) {
    out << r.index << '\t' << r.syllable << '\t' << r.tag.to_string() << '\n';
  }
  out << '\n';
}

std::string write_syllable(std::span<const SyllableSentence> sentences) {
  std::ostringstream out;
  for (const SyllableSentence& s : sentences) write_syllable(out, s);
  return out.str();
}

}  // namespace kner
