#pragma once

#include <filesystem>

#include "map.hpp"

namespace floss {

struct PgmImage {
    SaliencyMap map;
    int maxval;
};

// Binary P5 with maxval 255 only; header comments tolerated. Malformed input
// raises FormatError with the byte offset, P2/other maxvals raise
// UnsupportedFormatError. Values scale to [0,1] by v/maxval.
PgmImage read_pgm(const std::filesystem::path& path);

// GT ingest rule: byte >= 128 maps to 1.
BinaryMap read_binary_pgm(const std::filesystem::path& path);

// Header is exactly "P5\n<w> <h>\n255\n"; values round to v*255, ties away
// from zero.
void write_pgm(const SaliencyMap& map, const std::filesystem::path& path);

} // namespace floss
