#include <doctest.h>

#include <sstream>

#include "kner/conllu.hpp"
#include "support.hpp"

using namespace kner;
using testutil::data_path;
using testutil::read_file;

namespace {

ConlluOptions compat_options() {
  ConlluOptions opt;
  opt.mode = ConlluMode::Figure2Compat;
  return opt;
}

ConlluOptions lax_text(ConlluMode mode = ConlluMode::Canonical) {
  ConlluOptions opt;
  opt.mode = mode;
  opt.validate_text = false;
  return opt;
}

MorphSentence parse_one(const std::string& text, ConlluOptions opt = {}) {
  auto sentences = parse_conllu(text, std::move(opt));
  REQUIRE(sentences.size() == 1);
  return sentences[0];
}

void expect_error(const std::string& text, ErrorKind kind,
                  const std::string& needle, ConlluOptions opt = {}) {
  try {
    parse_conllu(text, std::move(opt));
    FAIL_CHECK("no error for: " << text << " (wanted '" << needle << "')");
  } catch (const Error& e) {
    CHECK(e.kind() == kind);
    std::string what = e.what();
    CHECK_MESSAGE(what.find(needle) != std::string::npos,
                  "message '" << what << "' lacks '" << needle << "'");
  }
}

const char* kTiny =
    "# sent_id = t1\n"
    "# text = 서울에\n"
    "1-2\t서울에\t_\t_\t_\t_\t_\t_\t_\t_\n"
    "1\t서울\t서울\tPROPN\tNNP\t_\t_\t_\t_\tNE=B-LOC\n"
    "2\t에\t에\tADP\tJKB\t_\t_\t_\t_\t_\n\n";

}  // namespace

TEST_CASE("figure-2 fixture parses in compact mode") {
  std::string text = read_file(data_path("figure2.conllu"));
  MorphSentence s = parse_one(text, compat_options());

  CHECK(s.sent_id == "BTAA0001-00000012");
  CHECK(s.text ==
        "프랑스의 세계적인 의상 디자이너 엠마누엘 웅가로가 실내 장식용 직물 "
        "디자이너로 나섰다.");
  CHECK(s.eojeols.size() == 12);
  CHECK(s.token_count() == 21);

  CHECK(s.token(0).form == "프랑스");
  CHECK(s.token(0).ne.to_string() == "B-LOC");
  CHECK(s.token(8).ne.to_string() == "B-PER");
  CHECK(s.token(9).ne.to_string() == "I-PER");
  for (std::size_t i = 0; i < 21; ++i) {
    if (i != 0 && i != 8 && i != 9) CHECK(s.token(i).ne.is_outside());
  }

  CHECK(s.token(5).form == "ㄴ");
  CHECK(s.token(5).lemma == "은");
  CHECK(s.token(5).upos == Upos::PART);
  CHECK(s.token(5).xpos == "ETM");

  const EojeolSpan& last_word = s.eojeols[10];
  CHECK(last_word.surface == "나섰다");
  CHECK(last_word.multiword());
  CHECK(!last_word.space_after());
  CHECK(s.eojeols[11].surface == ".");
  CHECK(s.reconstructed_text() == s.text);
}

TEST_CASE("both modes round trip the figure-2 sentence byte for byte") {
  std::string compact = read_file(data_path("figure2.conllu"));
  std::string canonical = read_file(data_path("figure2_canonical.conllu"));

  MorphSentence from_compact = parse_one(compact, compat_options());
  MorphSentence from_canonical = parse_one(canonical);

  CHECK(write_conllu({&from_compact, 1}, ConlluMode::Figure2Compat) == compact);
  CHECK(write_conllu({&from_canonical, 1}, ConlluMode::Canonical) == canonical);

  // cross-mode: the two files describe the same sentence
  CHECK(write_conllu({&from_compact, 1}, ConlluMode::Canonical) == canonical);
  CHECK(write_conllu({&from_canonical, 1}, ConlluMode::Figure2Compat) == compact);
}

TEST_CASE("canonical round trip of a small sentence") {
  MorphSentence s = parse_one(kTiny);
  CHECK(s.eojeols.size() == 1);
  CHECK(s.eojeols[0].multiword());
  CHECK(s.token(0).ne.to_string() == "B-LOC");
  CHECK(s.token(0).misc.empty());  // NE= is folded into the tag
  CHECK(write_conllu({&s, 1}, ConlluMode::Canonical) == kTiny);
}

TEST_CASE("ne tag placement in canonical misc") {
  // NE= may sit anywhere in MISC on input; the writer puts it first.
  std::string text =
      "1\t서울\t서울\tPROPN\tNNP\t_\t_\t_\t_\tSpaceAfter=No|NE=B-LOC\n\n";
  ConlluOptions opt;
  opt.validate_text = false;
  MorphSentence s = parse_one(text, opt);
  CHECK(s.token(0).ne.to_string() == "B-LOC");
  REQUIRE(s.token(0).misc.size() == 1);
  CHECK(s.token(0).misc[0] == "SpaceAfter=No");
  CHECK(!s.eojeols[0].space_after());

  std::ostringstream out;
  write_conllu(out, s, ConlluMode::Canonical);
  CHECK(out.str().find("NE=B-LOC|SpaceAfter=No") != std::string::npos);
}

TEST_CASE("comments survive verbatim, or are synthesized") {
  std::string text =
      "# sent_id = c1\n"
      "# text = 가\n"
      "# source = somewhere  \n"
      "1\t가\t가\tVERB\tVV\t_\t_\t_\t_\t_\n\n";
  MorphSentence s = parse_one(text);
  REQUIRE(s.comments.size() == 3);
  CHECK(s.comments[2] == "# source = somewhere  ");
  CHECK(write_conllu({&s, 1}, ConlluMode::Canonical) == text);

  MorphSentence built;
  built.sent_id = "x9";
  built.text = "가";
  EojeolSpan e;
  e.start_id = e.end_id = 1;
  e.surface = "가";
  MorphToken t;
  t.id = 1;
  t.form = t.lemma = "가";
  t.upos = Upos::VERB;
  t.xpos = "VV";
  e.tokens.push_back(t);
  built.eojeols.push_back(e);
  std::string written = write_conllu({&built, 1}, ConlluMode::Canonical);
  CHECK(written ==
        "# sent_id = x9\n# text = 가\n1\t가\t가\tVERB\tVV\t_\t_\t_\t_\t_\n\n");
}

TEST_CASE("streaming reader yields sentences one at a time") {
  std::string two = std::string(kTiny) + kTiny;
  std::istringstream in(two);
  ConlluReader reader(in);
  CHECK(reader.next());
  CHECK(reader.next());
  CHECK(!reader.next());
  CHECK(!reader.next());
}

TEST_CASE("structural errors carry line numbers") {
  expect_error("1\t가\t가\tVERB\tVV\t_\t_\t_\t_\t_\n"
               "3\t다\t다\tVERB\tVV\t_\t_\t_\t_\t_\n\n",
               ErrorKind::Structure, "token id out of sequence: expected 2",
               lax_text());

  expect_error("2\t가\t가\tVERB\tVV\t_\t_\t_\t_\t_\n\n", ErrorKind::Structure,
               "token id out of sequence: expected 1",
               lax_text());

  expect_error("1-3\t가나\t_\t_\t_\t_\t_\t_\t_\t_\n"
               "1\t가\t가\tVERB\tVV\t_\t_\t_\t_\t_\n"
               "2\t나\t나\tVERB\tVV\t_\t_\t_\t_\t_\n\n",
               ErrorKind::Structure, "unterminated range",
               lax_text());

  expect_error("1-1\t가\t_\t_\t_\t_\t_\t_\t_\t_\n"
               "1\t가\t가\tVERB\tVV\t_\t_\t_\t_\t_\n\n",
               ErrorKind::Structure, "range end must exceed start",
               lax_text());

  expect_error("1-2\t가나\t_\t_\t_\t_\t_\t_\t_\t_\n"
               "1\t가\t가\tVERB\tVV\t_\t_\t_\t_\t_\n"
               "1-2\t나다\t_\t_\t_\t_\t_\t_\t_\t_\n"
               "2\t나\t나\tVERB\tVV\t_\t_\t_\t_\t_\n\n",
               ErrorKind::Structure, "range opens inside range",
               lax_text());

  expect_error("# text = 가 나\n1\t가\t가\tVERB\tVV\t_\t_\t_\t_\t_\n\n",
               ErrorKind::Structure, "text comment does not match");

  expect_error("# only a comment\n\n", ErrorKind::Structure,
               "sentence has no token rows");

  expect_error("1\t가\t가\tVERB\tVV\t_\t_\t_\t_\t_\n# late comment\n\n",
               ErrorKind::Parse, "comment after first token row",
               lax_text());
}

TEST_CASE("column and vocabulary errors") {
  expect_error("1\t가\t가\tVERB\tVV\t_\t_\t_\t_\n\n", ErrorKind::Parse,
               "10", lax_text());

  // canonical dependency columns must stay empty
  expect_error("1\t가\t가\tVERB\tVV\t_\t2\tdep\t_\t_\n\n", ErrorKind::Parse,
               "must be '_'", lax_text());

  expect_error("1\t_\t가\tVERB\tVV\t_\t_\t_\t_\t_\n\n", ErrorKind::Structure,
               "empty form", lax_text());
  expect_error("1\t가\t_\tVERB\tVV\t_\t_\t_\t_\t_\n\n", ErrorKind::Structure,
               "empty lemma", lax_text());

  expect_error("1\t가\t가\tVERBX\tVV\t_\t_\t_\t_\t_\n\n", ErrorKind::Vocab,
               "VERBX", lax_text());
  expect_error("1\t가\t가\tVERB\tQQ\t_\t_\t_\t_\t_\n\n", ErrorKind::Vocab,
               "QQ", lax_text());
  expect_error("1\t가\t가\tVERB\tVV\t_\t_\t_\t_\tNE=B-FOO\n\n", ErrorKind::Vocab,
               "FOO", lax_text());
  expect_error("1\t가\t가\tVERB\tVV\t_\t_\t_\t_\tNE=B-LOC|NE=B-PER\n\n",
               ErrorKind::Parse, "NE", lax_text());

  // compact mode wants exactly 7 columns
  expect_error("1\t가\t가\tVERB\tVV\t_\t_\t_\t_\t_\n\n", ErrorKind::Parse, "7",
               lax_text(ConlluMode::Figure2Compat));
}

TEST_CASE("range lines only carry form and misc") {
  expect_error("1-2\t가나\t가나\t_\t_\t_\t_\t_\t_\t_\n"
               "1\t가\t가\tVERB\tVV\t_\t_\t_\t_\t_\n"
               "2\t나\t나\tVERB\tVV\t_\t_\t_\t_\t_\n\n",
               ErrorKind::Structure, "range", lax_text());
}

TEST_CASE("scheme enforcement is opt-in") {
  std::string bad =
      "1\t가\t가\tVERB\tVV\t_\t_\t_\t_\tNE=I-LOC\n\n";
  ConlluOptions lax;
  lax.validate_text = false;
  CHECK(parse_one(bad, lax).token(0).ne.to_string() == "I-LOC");

  ConlluOptions strict;
  strict.validate_text = false;
  strict.enforce_scheme = Scheme::BIO;
  expect_error(bad, ErrorKind::Validation, "I without matching B", strict);
}

TEST_CASE("sentence helpers") {
  MorphSentence s = parse_one(kTiny);
  CHECK(s.ne_tags() ==
        std::vector<NeTag>{*NeTag::parse("B-LOC"), NeTag::outside()});

  s.set_ne_tags(std::vector<NeTag>{NeTag::outside(), *NeTag::parse("B-PER")});
  CHECK(s.token(0).ne.is_outside());
  CHECK(s.token(1).ne.to_string() == "B-PER");

  CHECK_THROWS_AS(s.set_ne_tags(std::vector<NeTag>{NeTag::outside()}), Error);
}

TEST_CASE("write_conllu rejects broken structure") {
  MorphSentence s = parse_one(kTiny);
  s.eojeols[0].tokens[1].id = 7;
  std::ostringstream out;
  CHECK_THROWS_AS(write_conllu(out, s, ConlluMode::Canonical), Error);
}
