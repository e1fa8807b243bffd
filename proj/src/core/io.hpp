#pragma once

#include <filesystem>
#include <string>

namespace ostrovsky::detail {

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

}  // namespace ostrovsky::detail
