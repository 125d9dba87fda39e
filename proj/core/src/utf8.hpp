#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace revpred::utf8 {

inline constexpr char32_t kReplacement = 0xFFFD;

/// Copies `in`, replacing every invalid or truncated sequence (overlong forms,
/// surrogates, code points above U+10FFFF) with U+FFFD.
std::string sanitize(std::string_view in);

/// Decodes one code point at `pos` and advances past it. The input must be
/// valid UTF-8 (e.g. the output of sanitize); invalid bytes decode as U+FFFD.
char32_t next(std::string_view s, std::size_t& pos);

void append(std::string& out, char32_t cp);

/// Simple (one-to-one) case folding for ASCII, Latin-1, Latin Extended-A,
/// Greek and Cyrillic capitals. Everything else maps to itself.
char32_t fold_case(char32_t cp);

/// ASCII punctuation/symbols plus the common Unicode punctuation blocks.
bool is_punctuation(char32_t cp);

/// ASCII whitespace and the Unicode space separators.
bool is_space(char32_t cp);

bool is_ascii_space(char c);

}  // namespace revpred::utf8
