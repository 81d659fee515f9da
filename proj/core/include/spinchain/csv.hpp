#pragma once

#include <cstdio>
#include <string>

namespace spinchain::csv {

// Shortest round-trippable decimal form; keeps every CSV byte-reproducible.
inline std::string g17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace spinchain::csv
