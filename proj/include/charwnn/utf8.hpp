#pragma once

#include <string>
#include <string_view>

namespace charwnn::utf8 {

// Decodes UTF-8; malformed bytes become U+FFFD.
std::u32string decode(std::string_view text);
std::string encode(std::u32string_view text);
std::string encode(char32_t c);

// Simple one-to-one case mapping for Latin, Greek and Cyrillic letters.
char32_t to_lower(char32_t c);
char32_t to_upper(char32_t c);
bool is_upper(char32_t c);
bool is_lower(char32_t c);

}  // namespace charwnn::utf8
