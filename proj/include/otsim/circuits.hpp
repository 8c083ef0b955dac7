// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otsim Authors

#pragma once

#include "otsim/netlist_io.hpp"

namespace otsim {

/// Measurement circuit: VIN -> R_d -> node "a"; C_p from "a" to ground;
/// OTS from "a" to "s"; R_s from "s" to ground. The spike observable is
/// v(s) = R_s * i_ots.
struct OscillatorValues {
    Ohms r_d = 9.1e3;
    Ohms r_s = 100.0;
    Farads c_p = 1e-9;
};

CircuitFile build_oscillator(const OtsParams& p, const SourceSpec& vin, const OscillatorValues& v = {});

// Spike threshold halfway between zero and the turn-on current peak seen
// through a sense resistor r_sense.
Volts sense_threshold(const OtsParams& p, Ohms r_sense);

}  // namespace otsim
