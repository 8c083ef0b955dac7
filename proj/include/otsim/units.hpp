// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otsim Authors

#pragma once

#include <string>
#include <string_view>

namespace otsim {

// All physical quantities are SI base units stored as double.
using Volts = double;
using Amperes = double;
using Ohms = double;
using Siemens = double;
using Farads = double;
using Seconds = double;
using Hertz = double;
using Joules = double;
using Meters = double;

// Parses a number with an optional engineering suffix:
// f p n u m k M G (case sensitive, so "m" is milli and "M" is mega).
// Trailing unit letters after the suffix ("5kOhm", "100pF") are rejected.
double parse_si(std::string_view text);

// Shortest round-trippable decimal representation.
std::string format_full(double v);

}  // namespace otsim
