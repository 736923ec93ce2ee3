#include "stylo/text.hpp"

#include <unicode/uchar.h>

#include "stylo/unicode.hpp"

namespace stylo::text {

bool is_apostrophe(char32_t cp) { return cp == U'\'' || cp == U'’'; }

namespace {

bool is_mark(char32_t cp) {
  if (cp < 0x300) return false;
  const auto mask = U_GET_GC_MASK(static_cast<UChar32>(cp));
  return (mask & U_GC_M_MASK) != 0;
}

}  // namespace

bool is_word_char(char32_t cp) { return unicode::is_letter(cp) || is_mark(cp); }

std::vector<WordSpan> word_spans(std::string_view s) {
  std::vector<WordSpan> out;
  std::size_t pos = 0;
  bool in_word = false;
  std::size_t begin = 0;
  // Byte offset just after the last letter, so a trailing apostrophe is not
  // swallowed into the word.
  std::size_t last_letter_end = 0;
  while (pos < s.size()) {
    const std::size_t at = pos;
    const char32_t cp = unicode::next(s, pos);
    const bool letter = unicode::is_letter(cp);
    if (in_word) {
      if (letter || is_mark(cp)) {
        last_letter_end = pos;
        continue;
      }
      if (is_apostrophe(cp) && at == last_letter_end && pos < s.size()) {
        std::size_t peek = pos;
        if (unicode::is_letter(unicode::next(s, peek))) continue;
      }
      out.push_back({begin, last_letter_end});
      in_word = false;
    }
    if (!in_word && letter) {
      in_word = true;
      begin = at;
      last_letter_end = pos;
    }
  }
  if (in_word) out.push_back({begin, last_letter_end});
  return out;
}

std::size_t count_words(std::string_view s) { return word_spans(s).size(); }

std::vector<std::string> words(std::string_view s) {
  std::vector<std::string> out;
  for (const auto& w : word_spans(s)) out.push_back(unicode::fold(s.substr(w.begin, w.end - w.begin)));
  return out;
}

std::vector<std::string_view> paragraphs(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t para_begin = std::string_view::npos;
  std::size_t para_end = 0;
  std::size_t line_begin = 0;
  while (line_begin <= s.size()) {
    std::size_t line_end = s.find('\n', line_begin);
    if (line_end == std::string_view::npos) line_end = s.size();
    const std::string_view line = s.substr(line_begin, line_end - line_begin);
    const bool blank = line.find_first_not_of(" \t\r\f\v") == std::string_view::npos;
    if (blank) {
      if (para_begin != std::string_view::npos) {
        out.push_back(s.substr(para_begin, para_end - para_begin));
        para_begin = std::string_view::npos;
      }
    } else {
      if (para_begin == std::string_view::npos) para_begin = line_begin;
      para_end = line_end;
    }
    if (line_end == s.size()) break;
    line_begin = line_end + 1;
  }
  if (para_begin != std::string_view::npos) out.push_back(s.substr(para_begin, para_end - para_begin));
  return out;
}

}  // namespace stylo::text
