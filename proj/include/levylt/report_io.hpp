#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace levylt {

/// Decimal form with 17 significant digits; parses back to the same double.
std::string format_double(double value);

/// Writes text to path, creating parent directories. Throws on I/O failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// CSV with a header row; every cell is formatted with format_double.
std::string numeric_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

}  // namespace levylt
