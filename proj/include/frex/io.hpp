#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace frex {

inline constexpr std::string_view kVersion = "0.3.0";

// Writes content to a sibling temp file, then renames it over path so
// readers never observe a partial file.
void write_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(std::string_view bytes);

}  // namespace frex
