#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace stylo::text {

/// A word is a maximal run of Unicode letters (combining marks attached to a
/// letter stay in the run); an apostrophe between two letters joins them.
/// Everything else is a separator.
struct WordSpan {
  std::size_t begin;  // byte offsets into the source
  std::size_t end;
};

std::vector<WordSpan> word_spans(std::string_view s);
std::size_t count_words(std::string_view s);
/// Case-folded words in order.
std::vector<std::string> words(std::string_view s);

bool is_apostrophe(char32_t cp);
bool is_word_char(char32_t cp);

/// Splits on blank lines (one or more lines holding only whitespace).
std::vector<std::string_view> paragraphs(std::string_view s);

}  // namespace stylo::text
