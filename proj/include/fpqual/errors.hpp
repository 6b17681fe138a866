#pragma once

#include <stdexcept>
#include <string>

namespace fpqual {

/// Malformed or unsupported input file (bad PGM header, 16-bit PNG, ...).
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid tool configuration; raised before any image is touched.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Undefined statistic on the given score data (empty class, zero spread,
/// unattainable operating point, ...).
class EvalError : public std::runtime_error {
public:
    explicit EvalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fpqual
