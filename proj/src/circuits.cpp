// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otsim Authors

#include "otsim/circuits.hpp"

#include "otsim/error.hpp"

namespace otsim {

CircuitFile build_oscillator(const OtsParams& p, const SourceSpec& vin, const OscillatorValues& v) {
    p.validate();
    require(v.r_d > 0.0 && v.r_s > 0.0 && v.c_p > 0.0, "oscillator component values must be > 0");
    CircuitFile cf;
    auto& n = cf.net;
    const NodeIndex in = n.node("in");
    const NodeIndex a = n.node("a");
    const NodeIndex s = n.node("s");
    n.add_source("VIN", in, kGround, vin);
    n.add_resistor("RD", in, a, v.r_d);
    n.add_capacitor("CP", a, kGround, v.c_p);
    n.add_ots("X1", a, s, p);
    n.add_resistor("RS", s, kGround, v.r_s);
    cf.inputs = {"VIN"};
    Probe pr;
    pr.name = "spike";
    pr.pos = s;
    pr.threshold = sense_threshold(p, v.r_s);
    cf.probes.push_back(pr);
    cf.header_comments = {"OTS relaxation oscillator", "spikes observed across the sense resistor RS"};
    return cf;
}

Volts sense_threshold(const OtsParams& p, Ohms r_sense) {
    require(r_sense > 0.0, "sense resistance must be > 0");
    return 0.5 * (p.v_th - p.v_hold) * r_sense / (p.r_on + r_sense);
}

}  // namespace otsim
