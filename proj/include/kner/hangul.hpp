// kner -- morpheme-level Korean NER corpus toolkit
//
// UTF-8 code point handling plus Hangul syllable decomposition into
// compatibility jamo.  Decomposition is what lets us line up canonical
// morpheme forms (이 + ㄴ) with their contracted surface (인).
#ifndef KNER_HANGUL_HPP_
#define KNER_HANGUL_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace kner {

// Decodes UTF-8 into code points. Malformed bytes are passed through as
// U+FFFD so corpus tools never crash on dirty input.
std::u32string to_u32(std::string_view utf8);
std::string to_utf8(std::u32string_view cps);
std::string to_utf8(char32_t cp);

// Number of code points in a UTF-8 string.
std::size_t codepoint_count(std::string_view utf8);

bool is_hangul_syllable(char32_t cp);   // U+AC00..U+D7A3
bool is_compat_jamo(char32_t cp);       // U+3131..U+318E

// Expands one code point into compatibility jamo. A precomposed syllable
// yields its L/V/T parts; compound parts (ㄺ, ㅘ, ...) are further split so
// 삶 and 살+ㅁ produce the same sequence. Non-syllable code points map to
// themselves.
void append_jamo(char32_t cp, std::u32string* out);
std::u32string to_jamo(std::u32string_view cps);

}  // namespace kner

#endif  // KNER_HANGUL_HPP_
