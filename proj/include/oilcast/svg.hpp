#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace oilcast {

/// Escapes &, <, >, " for use in SVG text and attributes.
std::string xml_escape(std::string_view text);

/// Writes `content` to `path` via a temporary file and rename, creating parent
/// directories as needed. Throws Error if unwritable.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Reads a whole file as bytes. Throws Error if it cannot be opened.
std::string read_file(const std::filesystem::path& path);

}  // namespace oilcast
