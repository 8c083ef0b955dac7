// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otsim Authors

#include "otsim/units.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "otsim/error.hpp"

namespace otsim {

double parse_si(std::string_view text) {
    if (text.empty()) fail(ErrorCode::Parse, "empty number");
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr == first) fail(ErrorCode::Parse, "bad number '" + std::string(text) + "'");
    if (ptr != last) {
        if (ptr + 1 != last) fail(ErrorCode::Parse, "bad number '" + std::string(text) + "'");
        double scale = 1.0;
        switch (*ptr) {
            case 'f': scale = 1e-15; break;
            case 'p': scale = 1e-12; break;
            case 'n': scale = 1e-9; break;
            case 'u': scale = 1e-6; break;
            case 'm': scale = 1e-3; break;
            case 'k': scale = 1e3; break;
            case 'M': scale = 1e6; break;
            case 'G': scale = 1e9; break;
            default: fail(ErrorCode::Parse, "unknown suffix in '" + std::string(text) + "'");
        }
        value *= scale;
    }
    if (!std::isfinite(value)) fail(ErrorCode::Parse, "non-finite number '" + std::string(text) + "'");
    return value;
}

std::string format_full(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace otsim
