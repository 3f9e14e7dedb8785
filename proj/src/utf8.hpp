#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace imgplag::utf8 {

constexpr char32_t kInvalid = 0xFFFD;

// Decodes one code point starting at `pos` and advances it. Malformed or
// truncated sequences yield kInvalid and consume a single byte.
char32_t decode(std::string_view s, std::size_t& pos);

void append(std::string& out, char32_t cp);

// Letters of the Latin, Greek and Cyrillic blocks plus ASCII digits.
bool is_word_char(char32_t cp);
bool is_digit(char32_t cp);
char32_t to_lower(char32_t cp);
bool is_upper(char32_t cp);

std::string lower(std::string_view s);

}  // namespace imgplag::utf8
