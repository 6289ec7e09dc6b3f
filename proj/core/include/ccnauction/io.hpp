#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace ccn {

// Writes content to a sibling temporary file, then renames it into place, so
// readers never observe a partially written result.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

// Comma-separated numeric table with a mandatory header row. Values render
// with 12 significant digits for byte-stable reruns.
std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows);

std::string format_number(double v);

}  // namespace ccn
