#pragma once

#include <string>
#include <string_view>

namespace frex {

// Matching key for lemmas and surfaces: Unicode case fold followed by NFC.
// Invalid UTF-8 sequences are replaced with U+FFFD.
std::string normalize_key(std::string_view text);

}  // namespace frex
