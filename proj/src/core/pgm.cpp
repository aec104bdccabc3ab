#include "pgm.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace floss {

namespace {

[[noreturn]] void malformed(const std::filesystem::path& path, std::size_t offset,
                            const std::string& what) {
    throw FormatError(path.string() + ": " + what + " at byte " +
                      std::to_string(offset));
}

// PNM header tokenizer: skips whitespace and '#' comments, returns the next
// token and advances `pos`.
std::string next_token(const std::string& data, std::size_t& pos,
                       const std::filesystem::path& path) {
    while (pos < data.size()) {
        const char c = data[pos];
        if (c == '#') {
            while (pos < data.size() && data[pos] != '\n') ++pos;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            ++pos;
        } else {
            break;
        }
    }
    if (pos >= data.size()) {
        malformed(path, pos, "unexpected end of header");
    }
    const std::size_t start = pos;
    while (pos < data.size() &&
           !std::isspace(static_cast<unsigned char>(data[pos])) && data[pos] != '#') {
        ++pos;
    }
    return data.substr(start, pos - start);
}

int parse_header_int(const std::string& token, std::size_t token_end,
                     const std::filesystem::path& path, const char* name) {
    std::size_t used = 0;
    int value = 0;
    try {
        value = std::stoi(token, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != token.size() || value < 0) {
        malformed(path, token_end - token.size(),
                  std::string("invalid ") + name + " '" + token + "'");
    }
    return value;
}

} // namespace

PgmImage read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string() + " for reading");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string data = buf.str();

    std::size_t pos = 0;
    const std::string magic = next_token(data, pos, path);
    if (magic != "P5") {
        if (magic.size() == 2 && magic[0] == 'P' && magic[1] >= '1' && magic[1] <= '6') {
            throw UnsupportedFormatError(path.string() + ": " + magic +
                                         " is not supported, only binary P5");
        }
        malformed(path, pos - magic.size(), "bad magic '" + magic + "'");
    }
    const std::string w_tok = next_token(data, pos, path);
    const int width = parse_header_int(w_tok, pos, path, "width");
    const std::string h_tok = next_token(data, pos, path);
    const int height = parse_header_int(h_tok, pos, path, "height");
    const std::string m_tok = next_token(data, pos, path);
    const int maxval = parse_header_int(m_tok, pos, path, "maxval");
    if (width < 1 || height < 1) {
        malformed(path, pos, "degenerate size " + std::to_string(width) + "x" +
                                 std::to_string(height));
    }
    if (maxval != 255) {
        throw UnsupportedFormatError(path.string() + ": maxval " +
                                     std::to_string(maxval) + " is not supported");
    }
    if (pos >= data.size() ||
        !std::isspace(static_cast<unsigned char>(data[pos]))) {
        malformed(path, pos, "missing whitespace after maxval");
    }
    ++pos; // exactly one whitespace byte separates header and payload

    const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (data.size() - pos < n) {
        malformed(path, data.size(), "truncated payload (" +
                                         std::to_string(data.size() - pos) + " of " +
                                         std::to_string(n) + " bytes)");
    }
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) {
        values[i] = static_cast<unsigned char>(data[pos + i]) / 255.0;
    }
    return PgmImage{SaliencyMap(width, height, std::move(values)), maxval};
}

BinaryMap read_binary_pgm(const std::filesystem::path& path) {
    const PgmImage img = read_pgm(path);
    std::vector<std::uint8_t> values(img.map.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        // v/255 >= 128/255, i.e. source byte >= 128.
        values[i] = img.map[i] >= 128.0 / 255.0 ? 1 : 0;
    }
    return BinaryMap(img.map.width(), img.map.height(), std::move(values));
}

void write_pgm(const SaliencyMap& map, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << "P5\n" << map.width() << " " << map.height() << "\n255\n";
    std::vector<char> payload(map.size());
    for (std::size_t i = 0; i < map.size(); ++i) {
        payload[i] = static_cast<char>(
            static_cast<unsigned char>(std::llround(map[i] * 255.0)));
    }
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

} // namespace floss
