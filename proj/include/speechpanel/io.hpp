#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace speechpanel {

std::string read_text_file(const std::filesystem::path& path);

// Writes to a sibling temporary and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// Hex SHA-256 of the file's bytes.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(std::string_view bytes);

}  // namespace speechpanel
