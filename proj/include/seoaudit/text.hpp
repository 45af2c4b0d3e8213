#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace seoaudit {

std::string to_lower_ascii(std::string_view s);

// Collapses runs of whitespace (ASCII and U+00A0) to one space and trims.
std::string collapse_whitespace(std::string_view s);

std::vector<std::string> whitespace_tokens(std::string_view s);

std::size_t count_whitespace_tokens(std::string_view s);

// Lowercased word tokens: maximal runs of ASCII alphanumerics or non-ASCII
// bytes. Punctuation separates tokens.
std::vector<std::string> word_tokens(std::string_view s);

// Replaces invalid UTF-8 sequences with U+FFFD.
std::string sanitize_utf8(std::string_view bytes);

// Decodes UTF-8 into Unicode scalar values (input is sanitized first).
std::u32string utf8_to_scalars(std::string_view s);

void append_utf8(std::string& out, char32_t cp);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Splits on sentence terminators (. ? !) followed by whitespace. Each
// sentence keeps its terminator; surrounding whitespace is trimmed.
std::vector<std::string> split_sentences(std::string_view text);

// Fixed-point rendering, e.g. format_percent(0.9978, 2) == "99.78%".
std::string format_fixed(double value, int decimals);
std::string format_percent(double fraction, int decimals);

}  // namespace seoaudit
