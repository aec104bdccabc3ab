#include "csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace floss {

std::string format_real(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

namespace {

bool needs_quoting(const std::string& field) {
    return field.find_first_of(",\"\n\r") != std::string::npos;
}

std::string quoted(const std::string& field) {
    std::string out = "\"";
    for (const char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string render(const CsvValue& value) {
    if (const auto* d = std::get_if<double>(&value)) return format_real(*d);
    if (const auto* i = std::get_if<std::int64_t>(&value)) return std::to_string(*i);
    const auto& s = std::get<std::string>(value);
    return needs_quoting(s) ? quoted(s) : s;
}

[[noreturn]] void bad_row(const std::filesystem::path& path, std::size_t row,
                          const std::string& what) {
    throw FormatError(path.string() + ": row " + std::to_string(row) + ": " + what);
}

// Splits one logical CSV record starting at `pos`; handles quoted fields with
// embedded separators and doubled quotes. Returns false at end of input.
bool next_record(const std::string& data, std::size_t& pos,
                 std::vector<std::string>& fields) {
    fields.clear();
    if (pos >= data.size()) return false;
    std::string field;
    bool in_quotes = false;
    while (pos < data.size()) {
        const char c = data[pos];
        if (in_quotes) {
            if (c == '"') {
                if (pos + 1 < data.size() && data[pos + 1] == '"') {
                    field += '"';
                    ++pos;
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
            ++pos;
        } else if (c == '"' && field.empty()) {
            in_quotes = true;
            ++pos;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
            ++pos;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && pos + 1 < data.size() && data[pos + 1] == '\n') ++pos;
            ++pos;
            fields.push_back(std::move(field));
            return true;
        } else {
            field += c;
            ++pos;
        }
    }
    fields.push_back(std::move(field));
    return true;
}

CsvValue parse_field(const std::string& field, ColumnType type,
                     const std::filesystem::path& path, std::size_t row,
                     const std::string& column) {
    switch (type) {
        case ColumnType::kReal: {
            errno = 0;
            char* end = nullptr;
            const double v = std::strtod(field.c_str(), &end);
            if (field.empty() || end != field.c_str() + field.size() || errno == ERANGE) {
                bad_row(path, row, "column '" + column + "': '" + field +
                                       "' is not a real number");
            }
            return v;
        }
        case ColumnType::kInt: {
            errno = 0;
            char* end = nullptr;
            const long long v = std::strtoll(field.c_str(), &end, 10);
            if (field.empty() || end != field.c_str() + field.size() || errno == ERANGE) {
                bad_row(path, row,
                        "column '" + column + "': '" + field + "' is not an integer");
            }
            return static_cast<std::int64_t>(v);
        }
        case ColumnType::kText:
            return field;
    }
    bad_row(path, row, "unknown column type");
}

} // namespace

void write_csv(const Schema& schema, const std::vector<CsvRow>& rows,
               const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    for (std::size_t c = 0; c < schema.size(); ++c) {
        out << (c ? "," : "") << schema[c].name;
    }
    out << "\n";
    for (const auto& row : rows) {
        if (row.size() != schema.size()) {
            throw ArgumentError(path.string() + ": row has " +
                                std::to_string(row.size()) + " fields, schema has " +
                                std::to_string(schema.size()));
        }
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << (c ? "," : "") << render(row[c]);
        }
        out << "\n";
    }
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

std::vector<CsvRow> read_csv(const std::filesystem::path& path, const Schema& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string() + " for reading");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string data = buf.str();

    std::size_t pos = 0;
    std::vector<std::string> fields;
    if (!next_record(data, pos, fields)) {
        bad_row(path, 1, "missing header");
    }
    if (fields.size() != schema.size()) {
        bad_row(path, 1, "header has " + std::to_string(fields.size()) +
                             " columns, expected " + std::to_string(schema.size()));
    }
    for (std::size_t c = 0; c < schema.size(); ++c) {
        if (fields[c] != schema[c].name) {
            bad_row(path, 1, "header column " + std::to_string(c + 1) + " is '" +
                                 fields[c] + "', expected '" + schema[c].name + "'");
        }
    }

    std::vector<CsvRow> rows;
    std::size_t row_no = 1;
    while (next_record(data, pos, fields)) {
        ++row_no;
        if (fields.size() == 1 && fields[0].empty()) continue; // trailing blank line
        if (fields.size() != schema.size()) {
            bad_row(path, row_no, "expected " + std::to_string(schema.size()) +
                                      " fields, got " + std::to_string(fields.size()));
        }
        CsvRow row;
        row.reserve(schema.size());
        for (std::size_t c = 0; c < schema.size(); ++c) {
            row.push_back(parse_field(fields[c], schema[c].type, path, row_no,
                                      schema[c].name));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace floss
