// kner -- morpheme-level Korean NER corpus toolkit
#include "kner/hangul.hpp"

#include <array>

namespace kner {
namespace {

constexpr char32_t kSyllableBase = 0xAC00;
constexpr char32_t kSyllableEnd = 0xD7A3;

// Leading consonants, vowels and trailing consonants of a precomposed
// syllable, expressed as compatibility jamo (the block a bare ㄴ token in a
// corpus actually uses).
constexpr std::array<char32_t, 19> kLeads = {
    U'ㄱ', U'ㄲ', U'ㄴ', U'ㄷ', U'ㄸ', U'ㄹ', U'ㅁ', U'ㅂ', U'ㅃ', U'ㅅ',
    U'ㅆ', U'ㅇ', U'ㅈ', U'ㅉ', U'ㅊ', U'ㅋ', U'ㅌ', U'ㅍ', U'ㅎ'};
constexpr std::array<char32_t, 21> kVowels = {
    U'ㅏ', U'ㅐ', U'ㅑ', U'ㅒ', U'ㅓ', U'ㅔ', U'ㅕ', U'ㅖ', U'ㅗ', U'ㅘ', U'ㅙ',
    U'ㅚ', U'ㅛ', U'ㅜ', U'ㅝ', U'ㅞ', U'ㅟ', U'ㅠ', U'ㅡ', U'ㅢ', U'ㅣ'};
constexpr std::array<char32_t, 28> kTails = {
    0,      U'ㄱ', U'ㄲ', U'ㄳ', U'ㄴ', U'ㄵ', U'ㄶ', U'ㄷ', U'ㄹ', U'ㄺ',
    U'ㄻ', U'ㄼ', U'ㄽ', U'ㄾ', U'ㄿ', U'ㅀ', U'ㅁ', U'ㅂ', U'ㅄ', U'ㅅ',
    U'ㅆ', U'ㅇ', U'ㅈ', U'ㅊ', U'ㅋ', U'ㅌ', U'ㅍ', U'ㅎ'};

// Compound jamo split into their simple parts so contractions that merge a
// morpheme into a trailing cluster (살 + ㅁ -> 삶) still align.
struct Split {
  char32_t cp;
  char32_t a;
  char32_t b;
};
constexpr std::array<Split, 18> kSplits = {{
    {U'ㄳ', U'ㄱ', U'ㅅ'}, {U'ㄵ', U'ㄴ', U'ㅈ'}, {U'ㄶ', U'ㄴ', U'ㅎ'},
    {U'ㄺ', U'ㄹ', U'ㄱ'}, {U'ㄻ', U'ㄹ', U'ㅁ'}, {U'ㄼ', U'ㄹ', U'ㅂ'},
    {U'ㄽ', U'ㄹ', U'ㅅ'}, {U'ㄾ', U'ㄹ', U'ㅌ'}, {U'ㄿ', U'ㄹ', U'ㅍ'},
    {U'ㅀ', U'ㄹ', U'ㅎ'}, {U'ㅄ', U'ㅂ', U'ㅅ'}, {U'ㅘ', U'ㅗ', U'ㅏ'},
    {U'ㅙ', U'ㅗ', U'ㅐ'}, {U'ㅚ', U'ㅗ', U'ㅣ'}, {U'ㅝ', U'ㅜ', U'ㅓ'},
    {U'ㅞ', U'ㅜ', U'ㅔ'}, {U'ㅟ', U'ㅜ', U'ㅣ'}, {U'ㅢ', U'ㅡ', U'ㅣ'},
}};

void append_simple(char32_t jamo, std::u32string* out) {
  for (const Split& s : kSplits) {
    if (s.cp == jamo) {
      out->push_back(s.a);
      out->push_back(s.b);
      return;
    }
  }
  out->push_back(jamo);
}

}  // namespace

std::u32string to_u32(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  std::size_t i = 0;
  const auto byte = [&](std::size_t k) {
    return static_cast<unsigned char>(utf8[k]);
  };
  while (i < utf8.size()) {
    unsigned char b0 = byte(i);
    std::size_t need = 0;
    char32_t cp = 0;
    if (b0 < 0x80) {
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      need = 1;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      need = 2;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      need = 3;
      cp = b0 & 0x07;
    } else {
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    bool ok = i + need < utf8.size();
    for (std::size_t k = 1; ok && k <= need; ++k) {
      if ((byte(i + k) & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (byte(i + k) & 0x3F);
    }
    if (!ok) {
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += need + 1;
  }
  return out;
}

std::string to_utf8(char32_t cp) {
  std::string out;
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
  return out;
}

std::string to_utf8(std::u32string_view cps) {
  std::string out;
  out.reserve(cps.size() * 3);
  for (char32_t cp : cps) out += to_utf8(cp);
  return out;
}

std::size_t codepoint_count(std::string_view utf8) {
  std::size_t n = 0;
  for (char c : utf8) {
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
  }
  return n;
}

bool is_hangul_syllable(char32_t cp) {
  return cp >= kSyllableBase && cp <= kSyllableEnd;
}

bool is_compat_jamo(char32_t cp) { return cp >= 0x3131 && cp <= 0x318E; }

void append_jamo(char32_t cp, std::u32string* out) {
  if (is_hangul_syllable(cp)) {
    char32_t idx = cp - kSyllableBase;
    append_simple(kLeads[idx / (21 * 28)], out);
    append_simple(kVowels[(idx / 28) % 21], out);
    char32_t tail = kTails[idx % 28];
    if (tail) append_simple(tail, out);
    return;
  }
  if (is_compat_jamo(cp)) {
    append_simple(cp, out);
    return;
  }
  out->push_back(cp);
}

std::u32string to_jamo(std::u32string_view cps) {
  std::u32string out;
  out.reserve(cps.size() * 3);
  for (char32_t cp : cps) append_jamo(cp, &out);
  return out;
}

}  // namespace kner
