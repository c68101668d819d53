#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace sawsle {

/// Writes `contents` to a temporary sibling and renames it over `path`, so
/// readers never observe a partially written file. Throws
/// std::runtime_error on I/O failure.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

/// 17 significant digits; "inf"/"-inf"/"nan" for non-finite values.
std::string format_double(double v);

}  // namespace sawsle
