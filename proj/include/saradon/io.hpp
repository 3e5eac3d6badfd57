#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace saradon {

/// Shortest decimal string that round-trips the double; '.' separator regardless of locale.
std::string format_double(double v);

/// Locale-independent parse of a full token. Throws Error(parse).
double parse_double(std::string_view s);

/// Minimal CSV table: one header row, comma separated, no quoting.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    /// Column index by name; throws Error(parse) when absent.
    std::size_t column(std::string_view name) const;
    std::string to_string() const;
};

/// Throws Error(parse) with the line number of the first malformed row.
CsvTable parse_csv(const std::string& text);
CsvTable read_csv(const std::filesystem::path& path);

/// Writes via a sibling temp file and rename, so a failed write leaves no partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

}  // namespace saradon
