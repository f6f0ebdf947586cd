#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace tba {

/// Whole file as bytes. Throws ParseError when it cannot be read.
std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file, then renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

}  // namespace tba
