#pragma once

#include <filesystem>
#include <string_view>

namespace qclust::io {

/// Writes via a temp file in the same directory and renames into place, so
/// interrupted runs never leave truncated artifacts.
void atomic_write(const std::filesystem::path& path, std::string_view content);

}  // namespace qclust::io
