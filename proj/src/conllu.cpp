// kner -- morpheme-level Korean NER corpus toolkit
#include "kner/conllu.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

namespace kner {
namespace {

constexpr std::string_view kSentIdPrefix = "# sent_id = ";
constexpr std::string_view kTextPrefix = "# text = ";
constexpr std::string_view kSpaceAfterNo = "SpaceAfter=No";

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> cols;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      cols.push_back(line.substr(start));
      break;
    }
    cols.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return cols;
}

bool parse_int(std::string_view s, int* out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && ptr == s.data() + s.size() && *out > 0;
}

std::vector<std::string> parse_misc(const std::string& field, std::size_t line) {
  std::vector<std::string> items;
  if (field == "_") return items;
  std::size_t start = 0;
  while (true) {
    std::size_t bar = field.find('|', start);
    std::string item = bar == std::string::npos ? field.substr(start)
                                                : field.substr(start, bar - start);
    if (item.empty()) throw parse_error("empty MISC item", line);
    items.push_back(std::move(item));
    if (bar == std::string::npos) break;
    start = bar + 1;
  }
  return items;
}

NeTag parse_ne_field(const std::string& field, const LabelSet& labels,
                     std::size_t line) {
  if (field == "_" || field == "O") return NeTag::outside();
  auto tag = NeTag::parse(field);
  if (!tag) throw vocab_error("unknown NE tag '" + field + "'", line);
  if (!labels.contains(tag->label)) {
    throw vocab_error("unknown NE label '" + tag->label + "'", line);
  }
  return *tag;
}

std::string join_misc(const std::vector<std::string>& items) {
  if (items.empty()) return "_";
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += '|';
    out += items[i];
  }
  return out;
}

bool has_space_after_no(const std::vector<std::string>& misc) {
  return std::find(misc.begin(), misc.end(), kSpaceAfterNo) != misc.end();
}

}  // namespace

bool EojeolSpan::space_after() const {
  const std::vector<std::string>& misc_items =
      multiword() ? misc : tokens.front().misc;
  return !has_space_after_no(misc_items);
}

std::size_t MorphSentence::token_count() const {
  std::size_t n = 0;
  for (const EojeolSpan& e : eojeols) n += e.tokens.size();
  return n;
}

const MorphToken& MorphSentence::token(std::size_t flat_index) const {
  for (const EojeolSpan& e : eojeols) {
    if (flat_index < e.tokens.size()) return e.tokens[flat_index];
    flat_index -= e.tokens.size();
  }
  throw Error(ErrorKind::InvalidArg, "token index out of range");
}

MorphToken& MorphSentence::token(std::size_t flat_index) {
  return const_cast<MorphToken&>(
      static_cast<const MorphSentence*>(this)->token(flat_index));
}

std::vector<NeTag> MorphSentence::ne_tags() const {
  std::vector<NeTag> out;
  out.reserve(token_count());
  for (const EojeolSpan& e : eojeols) {
    for (const MorphToken& t : e.tokens) out.push_back(t.ne);
  }
  return out;
}

void MorphSentence::set_ne_tags(std::span<const NeTag> tags) {
  if (tags.size() != token_count()) {
    throw Error(ErrorKind::InvalidArg, "tag count does not match token count");
  }
  std::size_t i = 0;
  for (EojeolSpan& e : eojeols) {
    for (MorphToken& t : e.tokens) t.ne = tags[i++];
  }
}

std::string MorphSentence::reconstructed_text() const {
  std::string out;
  for (std::size_t i = 0; i < eojeols.size(); ++i) {
    out += eojeols[i].surface;
    if (i + 1 < eojeols.size() && eojeols[i].space_after()) out += ' ';
  }
  return out;
}

std::string_view to_string(ConlluMode mode) {
  return mode == ConlluMode::Canonical ? "canonical" : "figure2-compat";
}

std::optional<ConlluMode> conllu_mode_from_string(std::string_view s) {
  if (s == "canonical") return ConlluMode::Canonical;
  if (s == "figure2-compat" || s == "compat") return ConlluMode::Figure2Compat;
  return std::nullopt;
}

ConlluReader::ConlluReader(std::istream& in, ConlluOptions options)
    : in_(in), options_(std::move(options)) {}

std::optional<MorphSentence> ConlluReader::next() {
  if (eof_) return std::nullopt;

  MorphSentence sent;
  bool saw_token = false;
  int expected_id = 1;
  std::optional<EojeolSpan> pending;
  int pending_next = 0;
  std::size_t first_line = 0;

  const std::size_t expected_cols =
      options_.mode == ConlluMode::Canonical ? 10 : 7;

  std::string line;
  while (true) {
    if (!std::getline(in_, line)) {
      eof_ = true;
      break;
    }
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();

    if (line.empty()) {
      if (!saw_token && sent.comments.empty()) continue;  // stray blank
      break;
    }
    if (first_line == 0) first_line = line_no_;

    if (line[0] == '#') {
      if (saw_token) {
        throw parse_error("comment after first token row", line_no_);
      }
      sent.comments.push_back(line);
      if (line.starts_with(kSentIdPrefix)) {
        sent.sent_id = line.substr(kSentIdPrefix.size());
      } else if (line.starts_with(kTextPrefix)) {
        sent.text = line.substr(kTextPrefix.size());
      }
      continue;
    }

    std::vector<std::string> cols = split_tabs(line);
    if (cols.size() != expected_cols) {
      throw parse_error("expected " + std::to_string(expected_cols) +
                            " columns, got " + std::to_string(cols.size()),
                        line_no_);
    }
    for (const std::string& c : cols) {
      if (c.empty()) throw parse_error("empty column", line_no_);
    }
    saw_token = true;

    const std::string& id_field = cols[0];
    const std::size_t misc_col = expected_cols - 1;
    std::size_t dash = id_field.find('-');

    if (dash != std::string::npos) {
      // range line introducing a multi-morpheme eojeol
      int start = 0, end = 0;
      if (!parse_int(std::string_view(id_field).substr(0, dash), &start) ||
          !parse_int(std::string_view(id_field).substr(dash + 1), &end)) {
        throw parse_error("malformed id range '" + id_field + "'", line_no_);
      }
      if (pending) {
        throw structure_error("range opens inside range " +
                                  std::to_string(pending->start_id) + "-" +
                                  std::to_string(pending->end_id),
                              line_no_);
      }
      if (end <= start) {
        throw structure_error("range end must exceed start", line_no_);
      }
      if (start != expected_id) {
        throw structure_error("range start out of sequence: expected " +
                                  std::to_string(expected_id),
                              line_no_);
      }
      for (std::size_t c = 2; c < misc_col; ++c) {
        if (cols[c] != "_") {
          throw structure_error("range line may only carry FORM and MISC",
                                line_no_);
        }
      }
      EojeolSpan span;
      span.start_id = start;
      span.end_id = end;
      span.surface = cols[1];
      span.misc = parse_misc(cols[misc_col], line_no_);
      pending = std::move(span);
      pending_next = start;
      continue;
    }

    int id = 0;
    if (!parse_int(id_field, &id)) {
      throw parse_error("malformed id '" + id_field + "'", line_no_);
    }

    MorphToken tok;
    tok.id = id;
    tok.form = cols[1];
    tok.lemma = cols[2];
    if (tok.form == "_") throw structure_error("empty form", line_no_);
    if (tok.lemma == "_") throw structure_error("empty lemma", line_no_);

    if (cols[3] != "_") {
      auto upos = upos_from_string(cols[3]);
      if (!upos) throw vocab_error("unknown UPOS tag '" + cols[3] + "'", line_no_);
      tok.upos = *upos;
    }
    if (cols[4] != "_") {
      if (!options_.xpos.contains(cols[4])) {
        throw vocab_error("unknown XPOS tag '" + cols[4] + "'", line_no_);
      }
      tok.xpos = cols[4];
    }

    if (options_.mode == ConlluMode::Canonical) {
      for (std::size_t c = 5; c <= 8; ++c) {
        if (cols[c] != "_") {
          throw parse_error("columns FEATS/HEAD/DEPREL/DEPS must be '_'",
                            line_no_);
        }
      }
      tok.misc = parse_misc(cols[misc_col], line_no_);
      bool saw_ne = false;
      for (auto it = tok.misc.begin(); it != tok.misc.end();) {
        if (it->starts_with("NE=")) {
          if (saw_ne) throw parse_error("duplicate NE item in MISC", line_no_);
          saw_ne = true;
          tok.ne = parse_ne_field(it->substr(3), options_.labels, line_no_);
          it = tok.misc.erase(it);
        } else {
          ++it;
        }
      }
    } else {
      tok.ne = parse_ne_field(cols[5], options_.labels, line_no_);
      tok.misc = parse_misc(cols[misc_col], line_no_);
    }

    if (pending) {
      if (id != pending_next) {
        throw structure_error("id out of sequence inside range: expected " +
                                  std::to_string(pending_next),
                              line_no_);
      }
      pending->tokens.push_back(std::move(tok));
      ++pending_next;
      if (id == pending->end_id) {
        expected_id = id + 1;
        sent.eojeols.push_back(std::move(*pending));
        pending.reset();
      }
    } else {
      if (id != expected_id) {
        throw structure_error("token id out of sequence: expected " +
                                  std::to_string(expected_id),
                              line_no_);
      }
      EojeolSpan span;
      span.start_id = id;
      span.end_id = id;
      span.surface = tok.form;
      span.tokens.push_back(std::move(tok));
      sent.eojeols.push_back(std::move(span));
      expected_id = id + 1;
    }
  }

  if (!saw_token && sent.comments.empty()) return std::nullopt;
  if (pending) {
    throw structure_error("unterminated range " +
                              std::to_string(pending->start_id) + "-" +
                              std::to_string(pending->end_id),
                          line_no_);
  }
  if (!saw_token) {
    throw structure_error("sentence has no token rows", first_line);
  }
  if (options_.validate_text && !sent.text.empty()) {
    if (sent.reconstructed_text() != sent.text) {
      throw structure_error("text comment does not match eojeol surfaces",
                            first_line);
    }
  }
  if (options_.enforce_scheme) {
    auto tags = sent.ne_tags();
    auto violations = validate_sequence(tags, *options_.enforce_scheme);
    if (!violations.empty()) {
      throw validation_error("NE sequence invalid at token " +
                             std::to_string(violations.front().index + 1) +
                             ": " + violations.front().message);
    }
  }
  return sent;
}

std::vector<MorphSentence> parse_conllu(std::istream& in, ConlluOptions options) {
  ConlluReader reader(in, std::move(options));
  std::vector<MorphSentence> out;
  while (auto sent = reader.next()) out.push_back(std::move(*sent));
  return out;
}

std::vector<MorphSentence> parse_conllu(const std::string& text,
                                        ConlluOptions options) {
  std::istringstream in(text);
  return parse_conllu(in, std::move(options));
}

void check_structure(const MorphSentence& sentence) {
  if (sentence.eojeols.empty()) {
    throw structure_error("sentence has no token rows");
  }
  int expected = 1;
  for (const EojeolSpan& e : sentence.eojeols) {
    if (e.start_id != expected) {
      throw structure_error("eojeol ids out of sequence at " +
                            std::to_string(e.start_id));
    }
    if (e.end_id < e.start_id) {
      throw structure_error("eojeol range end before start");
    }
    if (static_cast<int>(e.tokens.size()) != e.end_id - e.start_id + 1) {
      throw structure_error("eojeol " + std::to_string(e.start_id) + "-" +
                            std::to_string(e.end_id) +
                            " does not match its token count");
    }
    if (e.surface.empty()) {
      throw structure_error("empty surface at eojeol " +
                            std::to_string(e.start_id));
    }
    int id = e.start_id;
    for (const MorphToken& t : e.tokens) {
      if (t.id != id) {
        throw structure_error("token id " + std::to_string(t.id) +
                              " does not match its eojeol");
      }
      if (t.form.empty()) {
        throw structure_error("empty form at token " + std::to_string(t.id));
      }
      if (t.lemma.empty()) {
        throw structure_error("empty lemma at token " + std::to_string(t.id));
      }
      ++id;
    }
    expected = e.end_id + 1;
  }
  if (!sentence.text.empty() &&
      sentence.reconstructed_text() != sentence.text) {
    throw structure_error("text does not match eojeol surfaces");
  }
}

namespace {

void write_token(std::ostream& out, const MorphToken& t, ConlluMode mode) {
  out << t.id << '\t' << t.form << '\t' << t.lemma << '\t'
      << (t.upos ? to_string(*t.upos) : "_") << '\t'
      << (t.xpos.empty() ? "_" : t.xpos);
  if (mode == ConlluMode::Canonical) {
    out << "\t_\t_\t_\t_\t";
    if (t.ne.is_outside()) {
      out << join_misc(t.misc);
    } else {
      std::vector<std::string> items;
      items.reserve(t.misc.size() + 1);
      items.push_back("NE=" + t.ne.to_string());
      items.insert(items.end(), t.misc.begin(), t.misc.end());
      out << join_misc(items);
    }
  } else {
    out << '\t' << (t.ne.is_outside() ? "_" : t.ne.to_string()) << '\t'
        << join_misc(t.misc);
  }
  out << '\n';
}

}  // namespace

void write_conllu(std::ostream& out, const MorphSentence& sentence,
                  ConlluMode mode) {
  check_structure(sentence);
  if (!sentence.comments.empty()) {
    for (const std::string& c : sentence.comments) out << c << '\n';
  } else {
    if (!sentence.sent_id.empty()) {
      out << kSentIdPrefix << sentence.sent_id << '\n';
    }
    if (!sentence.text.empty()) out << kTextPrefix << sentence.text << '\n';
  }
  for (const EojeolSpan& e : sentence.eojeols) {
    if (e.multiword()) {
      out << e.start_id << '-' << e.end_id << '\t' << e.surface;
      if (mode == ConlluMode::Canonical) {
        out << "\t_\t_\t_\t_\t_\t_\t_\t" << join_misc(e.misc);
      } else {
        out << "\t_\t_\t_\t_\t" << join_misc(e.misc);
      }
      out << '\n';
    }
    for (const MorphToken& t : e.tokens) write_token(out, t, mode);
  }
  out << '\n';
}

std::string write_conllu(std::span<const MorphSentence> sentences,
                         ConlluMode mode) {
  std::ostringstream out;
  for (const MorphSentence& s : sentences) write_conllu(out, s, mode);
  return out.str();
}

}  // namespace kner
