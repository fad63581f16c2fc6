#pragma once

#include <string>
#include <string_view>

namespace nf {

// Hex-encoded SHA-256 of the input bytes.
std::string sha256_hex(std::string_view data);

// First 16 hex chars of sha256; used for stable short identifiers.
std::string short_digest(std::string_view data);

}  // namespace nf
