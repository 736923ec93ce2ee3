#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace stylo::unicode {

/// Byte offset of the first malformed UTF-8 sequence, if any.
std::optional<std::size_t> find_invalid_utf8(std::string_view bytes);

/// Decodes the code point starting at `pos` and advances `pos`. Input must
/// be valid UTF-8.
char32_t next(std::string_view s, std::size_t& pos);
void append(std::string& out, char32_t cp);
std::u32string to_u32(std::string_view s);
std::string to_utf8(std::u32string_view s);

bool is_letter(char32_t cp);
bool is_digit(char32_t cp);
bool is_space(char32_t cp);
/// Unicode simple case folding.
char32_t fold(char32_t cp);
std::string fold(std::string_view s);

}  // namespace stylo::unicode
