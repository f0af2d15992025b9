#pragma once

#include <cstdio>
#include <string>

namespace ftw {

/// Nine significant digits; negative zero prints as 0.
inline std::string format_number(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", value == 0.0 ? 0.0 : value);
    return buf;
}

}  // namespace ftw
