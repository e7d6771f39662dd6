#pragma once

// Comma-separated numeric tables with a header row; '.' decimal separator.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dpc/model.hpp"

namespace dpc {

struct Table {
  std::vector<std::string> header;
  Matrix values;  // rows = individuals, columns = variables
};

/// Throws Error(kIo) if the file cannot be read and Error(kParse) for a
/// missing header, ragged rows or non-numeric cells.
Table read_csv(const std::filesystem::path& path);
Table parse_csv(std::string_view text);

std::string write_csv(const Table& table);

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double value);

/// Throws Error(kIo) on failure.
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace dpc
