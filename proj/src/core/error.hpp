#pragma once

#include <stdexcept>
#include <string>

namespace floss {

// Error taxonomy shared by the whole library. The C API maps each type
// onto one fl_status code, so new categories need a matching enum entry.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Shapes disagree (map vs map, weights vs feature channels).
class DimensionError : public Error {
public:
    using Error::Error;
};

// A value lies outside its documented domain (posterior outside [0,1],
// threshold outside [0,1], beta2 <= 0).
class DomainError : public Error {
public:
    using Error::Error;
};

// A structurally invalid argument (empty threshold set, empty dataset,
// unmatched prediction stems).
class ArgumentError : public Error {
public:
    using Error::Error;
};

// Relaxed F fell to <= eps, so -log(F) has no finite value.
class SaturationError : public Error {
public:
    using Error::Error;
};

// Training produced a non-finite loss or parameter.
class DivergenceError : public Error {
public:
    using Error::Error;
};

// A synthesis configuration that cannot produce valid geometry.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Malformed file contents (bad PGM header, CSV schema mismatch).
class FormatError : public Error {
public:
    using Error::Error;
};

// Well-formed but unsupported file contents (ASCII PGM, maxval != 255).
class UnsupportedFormatError : public Error {
public:
    using Error::Error;
};

// Filesystem failures, always carrying the path.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace floss
