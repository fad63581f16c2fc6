#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace nf::text {

// Collapses runs of whitespace to single spaces and trims both ends.
std::string collapse_whitespace(std::string_view s);

// ASCII-only lowering; non-ASCII bytes pass through untouched.
std::string to_lower_ascii(std::string_view s);

// Unicode NFC normalization (UTF-8 in, UTF-8 out). Input that is not valid
// UTF-8 is returned unchanged.
std::string nfc(std::string_view s);

// Canonical form used for content hashing and leak checks:
// NFC, ASCII-lowercase, whitespace-collapsed.
std::string canonical(std::string_view s);

// Canonical form for answer matching: canonical() plus terminal punctuation
// stripped (trailing . , ; : ! ?).
std::string normalize_answer(std::string_view s);

// Whitespace-delimited tokens.
std::vector<std::string> split_words(std::string_view s);

bool starts_with_icase(std::string_view s, std::string_view prefix);

}  // namespace nf::text
