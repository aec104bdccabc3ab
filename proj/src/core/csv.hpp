#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "error.hpp"

namespace floss {

enum class ColumnType { kReal, kInt, kText };

struct Column {
    std::string name;
    ColumnType type;
};

using Schema = std::vector<Column>;
using CsvValue = std::variant<double, std::int64_t, std::string>;
using CsvRow = std::vector<CsvValue>;

// RFC-4180-style: header row mandatory, fields quoted only when they contain
// a comma, quote, or newline. Reals use 17 significant digits so doubles
// round-trip exactly.
void write_csv(const Schema& schema, const std::vector<CsvRow>& rows,
               const std::filesystem::path& path);

// Validates the header and each field against the schema; mismatches raise
// FormatError with the 1-based row number (header is row 1).
std::vector<CsvRow> read_csv(const std::filesystem::path& path, const Schema& schema);

std::string format_real(double value);

} // namespace floss
