#pragma once

#include <cstdio>
#include <string>

namespace fpqual {

/// Canonical number formatting for every CSV/str output ("%.9g"): enough
/// digits to round-trip scores, byte-stable across runs.
inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace fpqual
