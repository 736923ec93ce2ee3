#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace stylo::io {

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

enum class WriteOutcome { written, unchanged };

/// Writes an output artifact. An existing file with identical bytes is left
/// alone; an existing file with different bytes is an error unless `force`.
WriteOutcome write_artifact(const std::filesystem::path& path, std::string_view content,
                            bool force);

/// Shortest round-trip decimal representation ("%.17g" trimmed), stable
/// across runs so artifacts compare byte-for-byte.
std::string format_double(double v);

std::string csv_escape(std::string_view field);
std::string csv_row(const std::vector<std::string>& fields);

/// Minimal RFC-4180 reader (quoted fields, doubled quotes).
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

}  // namespace stylo::io
