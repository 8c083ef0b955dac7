// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otsim Authors

#include "otsim/gates.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "otsim/circuits.hpp"
#include "otsim/error.hpp"
#include "otsim/parallel.hpp"
#include "otsim/spikes.hpp"

namespace otsim {

namespace {

struct GateInfo {
    GateKind kind;
    const char* name;
    std::size_t inputs;
    std::size_t outputs;
};

constexpr GateInfo kInfo[] = {
    {GateKind::And, "and", 2, 1},          {GateKind::Or, "or", 2, 1},
    {GateKind::Nor, "nor", 2, 1},          {GateKind::Nand, "nand", 2, 1},
    {GateKind::Xor, "xor", 2, 1},          {GateKind::HalfAdder, "half_adder", 2, 2},
    {GateKind::FullAdder, "full_adder", 3, 2}, {GateKind::DcaapCascade, "dcaap", 3, 2},
};

const GateInfo& info(GateKind k) {
    for (const auto& i : kInfo)
        if (i.kind == k) return i;
    fail(ErrorCode::InvalidArgument, "unknown gate kind");
}

// Restored logic levels and the hold stage between cascaded gates.
constexpr Volts kRail = 5.0;
constexpr Farads kHoldC = 1e-9;
constexpr Ohms kHoldR = 10e3;

// Adds parts under a name prefix so subcircuits can share one netlist.
class Builder {
public:
    Builder(CircuitFile& cf, std::string prefix) : cf_(cf), prefix_(std::move(prefix)) {}

    NodeIndex n(const std::string& name) { return cf_.net.node(prefix_ + name); }
    std::string e(const std::string& name) const { return prefix_ + name; }
    Netlist& net() { return cf_.net; }

private:
    CircuitFile& cf_;
    std::string prefix_;
};

struct Stage {
    Probe probe;
    Seconds tau = 0.0;
};

Probe make_probe(NodeIndex pos, NodeIndex neg, Volts thr, bool rectify = false) {
    Probe p;
    p.pos = pos;
    p.neg = neg;
    p.threshold = thr;
    p.rectify = rectify;
    return p;
}

// Resistive average of the two inputs on C1; the sense resistor R3 carries
// the OTS current. One high input gives v_high/2 < v_th.
Stage and_stage(Builder b, NodeIndex in1, NodeIndex in2, const OtsParams& p, Ohms r_in = 0.9e3,
                Ohms r_sense = 5e3, Farads c = 100e-12) {
    const NodeIndex a = b.n("A");
    const NodeIndex s = b.n("S");
    b.net().add_resistor(b.e("R1"), in1, a, r_in);
    b.net().add_resistor(b.e("R2"), in2, a, r_in);
    b.net().add_capacitor(b.e("C1"), a, kGround, c);
    b.net().add_ots(b.e("OTS"), a, s, p);
    b.net().add_resistor(b.e("R3"), s, kGround, r_sense);
    return {make_probe(s, kGround, sense_threshold(p, r_sense)), 0.5 * r_in * c};
}

// AND with a series diode per input: a single high input charges C1 to
// v_high - v_f while the low input's diode blocks.
Stage or_stage(Builder b, NodeIndex in1, NodeIndex in2, const OtsParams& p) {
    const Ohms r_in = 0.9e3;
    const Ohms r_sense = 5e3;
    const Farads c = 100e-12;
    const NodeIndex a = b.n("A");
    const NodeIndex y1 = b.n("Y1");
    const NodeIndex y2 = b.n("Y2");
    const NodeIndex s = b.n("S");
    b.net().add_diode(b.e("D1"), in1, y1);
    b.net().add_diode(b.e("D2"), in2, y2);
    b.net().add_resistor(b.e("R1"), y1, a, r_in);
    b.net().add_resistor(b.e("R2"), y2, a, r_in);
    b.net().add_capacitor(b.e("C1"), a, kGround, c);
    b.net().add_ots(b.e("OTS"), a, s, p);
    b.net().add_resistor(b.e("R3"), s, kGround, r_sense);
    return {make_probe(s, kGround, sense_threshold(p, r_sense)), r_in * c};
}

// Differential XOR: in1 charges X through R1+R4, in2 charges B through R2
// (R3 bleeds B). The OTS sits between X and B, so it sees v1 - v2 in either
// polarity. C2 across the device stores the firing charge; Rs senses it.
Stage xor_stage(Builder b, NodeIndex in1, NodeIndex in2, const OtsParams& p) {
    const Ohms r1 = 1e3, r2 = 1e3, r3 = 50e3, r4 = 10e3, rs = 1e3;
    const Farads c1 = 1e-9, c2 = 100e-12;
    const NodeIndex a = b.n("A");
    const NodeIndex x = b.n("X");
    const NodeIndex s = b.n("S");
    const NodeIndex bb = b.n("B");
    b.net().add_resistor(b.e("R1"), in1, a, r1);
    b.net().add_resistor(b.e("R4"), a, x, r4);
    b.net().add_capacitor(b.e("C2"), x, bb, c2);
    b.net().add_ots(b.e("OTS"), x, s, p);
    b.net().add_resistor(b.e("RS"), s, bb, rs);
    b.net().add_resistor(b.e("R2"), in2, bb, r2);
    b.net().add_resistor(b.e("R3"), bb, kGround, r3);
    b.net().add_capacitor(b.e("C1"), bb, kGround, c1);
    const Seconds tau = std::max((r1 + r4 + r2) * c2, c1 * r2 * r3 / (r2 + r3));
    return {make_probe(s, bb, sense_threshold(p, rs), true), tau};
}

// Comparator buffer: spike comparator(s) -> diode -> RC hold -> level
// comparator at half rail. Output is a 0/kRail level driven through 50 Ohm.
NodeIndex restore(Builder b, const Probe& in, const std::string& out_name) {
    auto& net = b.net();
    const NodeIndex hold = b.n("H");
    auto spike_comparator = [&](const std::string& tag, NodeIndex pos, NodeIndex neg) {
        const NodeIndex ref = b.n("REF" + tag);
        const NodeIndex o = b.n("O" + tag);
        net.add_source(b.e("VT" + tag), ref, neg, DcSource{in.threshold});
        net.add_comparator(b.e("CS" + tag), pos, ref, o);
        net.add_diode(b.e("DH" + tag), o, hold);
    };
    spike_comparator("P", in.pos, in.neg);
    if (in.rectify) spike_comparator("N", in.neg, in.pos);
    net.add_capacitor(b.e("CH"), hold, kGround, kHoldC);
    net.add_resistor(b.e("RH"), hold, kGround, kHoldR);
    const NodeIndex half = b.n("HALF");
    net.add_source(b.e("VHALF"), half, kGround, DcSource{kRail / 2});
    const NodeIndex out = net.node(out_name);
    net.add_comparator(b.e("CL"), hold, half, out);
    return out;
}

NodeIndex input(CircuitFile& cf, const std::string& src, const std::string& node) {
    const NodeIndex n = cf.net.node(node);
    cf.net.add_source(src, n, kGround, DcSource{0.0});
    cf.inputs.push_back(src);
    return n;
}

void add_probe(CircuitFile& cf, Probe p, const std::string& name, DecodeMode mode = DecodeMode::SpikeCount) {
    p.name = name;
    p.mode = mode;
    cf.probes.push_back(std::move(p));
}

}  // namespace

std::string_view gate_name(GateKind k) { return info(k).name; }

std::optional<GateKind> parse_gate_kind(std::string_view name) {
    for (const auto& i : kInfo)
        if (name == i.name) return i.kind;
    if (name == "halfadder") return GateKind::HalfAdder;
    if (name == "fulladder") return GateKind::FullAdder;
    return std::nullopt;
}

std::size_t input_arity(GateKind k) { return info(k).inputs; }
std::size_t output_arity(GateKind k) { return info(k).outputs; }

std::vector<int> expected_outputs(GateKind k, const std::vector<int>& in) {
    require(in.size() == input_arity(k), "expected " + std::to_string(input_arity(k)) + " inputs for " +
                                             std::string(gate_name(k)));
    for (int v : in) require(v == 0 || v == 1, "input bits must be 0 or 1");
    switch (k) {
        case GateKind::And: return {in[0] & in[1]};
        case GateKind::Or: return {in[0] | in[1]};
        case GateKind::Nor: return {1 - (in[0] | in[1])};
        case GateKind::Nand: return {1 - (in[0] & in[1])};
        case GateKind::Xor: return {in[0] ^ in[1]};
        case GateKind::HalfAdder: return {in[0] ^ in[1], in[0] & in[1]};
        case GateKind::FullAdder: {
            const int s = in[0] + in[1] + in[2];
            return {s & 1, s >> 1};
        }
        case GateKind::DcaapCascade: {
            const int y1 = in[0] ^ in[1];
            return {y1, y1 ^ in[2]};
        }
    }
    return {};
}

void LogicEncoding::validate() const {
    require(v_high > 0.0 && std::isfinite(v_high), "v_high must be > 0");
    require(v_low == 0.0, "v_low is fixed at 0 V");
    require(bit_width > 0.0, "bit_width must be > 0");
    require(settle >= 0.0, "settle must be >= 0");
}

GateTemplate build_gate(GateKind kind, const OtsParams& p, const GateOptions& opt) {
    p.validate();
    GateTemplate g{kind, {}, 0.0};
    CircuitFile& cf = g.circuit;
    auto& net = cf.net;
    auto& notes = cf.header_comments;
    notes.push_back(std::string(gate_name(kind)) + " gate template");

    switch (kind) {
        case GateKind::And: {
            const NodeIndex i1 = input(cf, "S1", "s1");
            const NodeIndex i2 = input(cf, "S2", "s2");
            const Stage st = and_stage(Builder(cf, ""), i1, i2, p);
            add_probe(cf, st.probe, "y");
            g.max_time_constant = st.tau;
            notes.push_back("R1/R2 average s1,s2 onto A: v(A) = (s1+s2)/2, only 1,1 reaches v_th");
            notes.push_back("on-current (v(A)-v_hold)/(R3+r_on) < i_hold, so the OTS pulses");
            break;
        }
        case GateKind::Or: {
            const NodeIndex i1 = input(cf, "S1", "s1");
            const NodeIndex i2 = input(cf, "S2", "s2");
            const Stage st = or_stage(Builder(cf, ""), i1, i2, p);
            add_probe(cf, st.probe, "y");
            g.max_time_constant = st.tau;
            notes.push_back("input diodes block the low side: any high input gives v(A) = v_high - v_f");
            break;
        }
        case GateKind::Nor: {
            const Ohms r_in = 0.9e3, r3 = 0.9e3, r4 = 5e3;
            const Farads c = 100e-12;
            const NodeIndex i1 = input(cf, "S1", "s1");
            const NodeIndex i2 = input(cf, "S2", "s2");
            const NodeIndex dd = net.node("vdd");
            const NodeIndex b = net.node("B");
            const NodeIndex t = net.node("T");
            const NodeIndex s = net.node("S");
            net.add_source("VDD", dd, kGround, DcSource{kRail});
            net.add_resistor("R1", i1, b, r_in);
            net.add_resistor("R2", i2, b, r_in);
            net.add_capacitor("C1", b, kGround, c);
            net.add_resistor("R3", dd, t, r3);
            net.add_capacitor("C2", t, kGround, c);
            net.add_ots("OTS", t, s, p);
            net.add_resistor("R4", s, b, r4);
            add_probe(cf, make_probe(s, b, sense_threshold(p, r4)), "y");
            g.max_time_constant = std::max(r3 * c, 0.5 * r_in * c);
            notes.push_back("OTS between the V_dd-charged node T and the input average B:");
            notes.push_back("v(T) - v(B) = V_dd - (s1+s2)/2 reaches v_th only for 0,0");
            break;
        }
        case GateKind::Nand: {
            const Ohms r_in = 0.9e3, r3 = 0.9e3, r4 = 5e3;
            const Farads c = 100e-12;
            const NodeIndex i1 = input(cf, "S1", "s1");
            const NodeIndex i2 = input(cf, "S2", "s2");
            const NodeIndex dd = net.node("vdd");
            const NodeIndex b = net.node("B");
            const NodeIndex y1 = net.node("Y1");
            const NodeIndex y2 = net.node("Y2");
            const NodeIndex s = net.node("S");
            net.add_source("VDD", dd, kGround, DcSource{kRail});
            net.add_resistor("R4", dd, b, r4);
            net.add_capacitor("C1", b, kGround, c);
            net.add_diode("D1", b, y1);
            net.add_diode("D2", b, y2);
            net.add_resistor("R1", y1, i1, r_in);
            net.add_resistor("R2", y2, i2, r_in);
            net.add_ots("OTS", dd, s, p);
            net.add_resistor("R3", s, b, r3);
            net.add_capacitor("C2", dd, b, c);
            add_probe(cf, make_probe(s, b, sense_threshold(p, r3)), "y");
            g.max_time_constant = 2.0 * c * r4 * r_in / (r4 + r_in);
            notes.push_back("diode AND on B (pulled up by R4): any low input clamps B near v_f,");
            notes.push_back("so V_dd - v(B) exceeds v_th unless both inputs are high");
            break;
        }
        case GateKind::Xor: {
            const NodeIndex i1 = input(cf, "S1", "s1");
            const NodeIndex i2 = input(cf, "S2", "s2");
            const Stage st = xor_stage(Builder(cf, ""), i1, i2, p);
            add_probe(cf, st.probe, "y");
            g.max_time_constant = st.tau;
            notes.push_back("OTS between X (follows s1) and B (follows s2 * R3/(R2+R3)):");
            notes.push_back("|v(X) - v(B)| ~ v_high only when the inputs differ; probe is |I| * RS");
            break;
        }
        case GateKind::HalfAdder: {
            const NodeIndex a = input(cf, "A", "a");
            const NodeIndex bb = input(cf, "B", "b");
            // carry: AND with 3k inputs, 500 pF, 200 Ohm sense
            const Stage carry = and_stage(Builder(cf, "c_"), a, bb, p, 3e3, 200.0, opt.half_adder_c3);
            // sum: XOR with the device between X and Y, C1 across it
            const Ohms r = 1e3;
            const NodeIndex x = net.node("s_X");
            const NodeIndex y = net.node("s_Y");
            const NodeIndex s = net.node("s_S");
            net.add_resistor("s_R3", a, x, r);
            net.add_capacitor("s_C1", x, y, 1e-9);
            net.add_ots("s_OTS", x, s, p);
            net.add_resistor("s_R5", s, y, r);
            net.add_resistor("s_R4", bb, y, r);
            net.add_capacitor("s_C2", y, kGround, opt.half_adder_c2);
            add_probe(cf, make_probe(s, y, sense_threshold(p, r), true), "sum");
            add_probe(cf, carry.probe, "carry");
            g.max_time_constant = std::max({carry.tau, 2.0 * r * 1e-9, r * opt.half_adder_c2});
            notes.push_back("carry: AND (R1,R2 = 3k, C3, R6 = 200 Ohm sense)");
            notes.push_back("sum: XOR, OTS across X-Y; C2 to ground slows Y so 1,1 stays below v_th");
            break;
        }
        case GateKind::FullAdder: {
            const NodeIndex a = input(cf, "A", "a");
            const NodeIndex bb = input(cf, "B", "b");
            const NodeIndex cin = input(cf, "CIN", "cin");
            const Stage x1 = xor_stage(Builder(cf, "x1_"), a, bb, p);
            const NodeIndex y1 = restore(Builder(cf, "r1_"), x1.probe, "y1");
            const Stage x2 = xor_stage(Builder(cf, "x2_"), y1, cin, p);
            const Stage a1 = and_stage(Builder(cf, "a1_"), a, bb, p);
            const NodeIndex c1 = restore(Builder(cf, "r2_"), a1.probe, "c1");
            const Stage a2 = and_stage(Builder(cf, "a2_"), y1, cin, p);
            const NodeIndex c2 = restore(Builder(cf, "r3_"), a2.probe, "c2");
            const Stage o = or_stage(Builder(cf, "o_"), c1, c2, p);
            add_probe(cf, x2.probe, "sum");
            add_probe(cf, o.probe, "cout");
            g.max_time_constant = std::max({x1.tau, x2.tau, a1.tau, a2.tau, o.tau, kHoldR * kHoldC});
            notes.push_back("sum = (a xor b) xor cin, cout = (a and b) or ((a xor b) and cin)");
            notes.push_back("stage outputs y1, c1, c2 restored to 0/5 V by comparator buffers");
            break;
        }
        case GateKind::DcaapCascade: {
            const NodeIndex e1 = input(cf, "EX1", "ex1");
            const NodeIndex e2 = input(cf, "EX2", "ex2");
            const NodeIndex inh = input(cf, "INH", "inh");
            const Stage x1 = xor_stage(Builder(cf, "x1_"), e1, e2, p);
            const NodeIndex y1 = restore(Builder(cf, "r1_"), x1.probe, "y1");
            const Stage x2 = xor_stage(Builder(cf, "x2_"), y1, inh, p);
            add_probe(cf, make_probe(y1, kGround, kRail / 2), "y_xor1", DecodeMode::MeanLevel);
            add_probe(cf, x2.probe, "y_xor2");
            g.max_time_constant = std::max({x1.tau, x2.tau, kHoldR * kHoldC});
            notes.push_back("two-stage XOR: y1 = ex1 xor ex2 restored to 0/5 V, y2 = y1 xor inh");
            break;
        }
    }
    cf.meta.emplace_back("gate", std::string(gate_name(kind)));
    cf.meta.emplace_back("tau_max", format_full(g.max_time_constant));
    net.validate();
    return g;
}

int decode_output(const Trace& tr, const Probe& probe, const LogicEncoding& enc, std::size_t* spikes_out) {
    const Seconds t0 = enc.settle;
    const Seconds t1 = enc.settle + enc.bit_width;
    require(enc.bit_width > 0.0, "decode window is empty");
    require(t1 <= tr.duration() + 0.5 * tr.dt, "decode window ends after the trace");
    const auto sig = probe.signal(tr);
    if (probe.mode == DecodeMode::SpikeCount) {
        const auto st = extract_spikes(std::span<const double>(sig), tr.dt, probe.threshold, 2.0 * tr.dt);
        const std::size_t n = count_in(st, t0, t1);
        if (spikes_out) *spikes_out = n;
        return n >= 1 ? 1 : 0;
    }
    const auto k0 = static_cast<std::size_t>(std::ceil(t0 / tr.dt - 1e-9));
    const auto k1 = std::min(static_cast<std::size_t>(std::floor(t1 / tr.dt + 1e-9)), tr.samples - 1);
    require(k1 >= k0, "decode window is empty");
    double sum = 0.0;
    for (std::size_t k = k0; k <= k1; ++k) sum += sig[k];
    if (spikes_out) *spikes_out = 0;
    return sum / static_cast<double>(k1 - k0 + 1) > probe.threshold ? 1 : 0;
}

GateRun run_gate(const GateTemplate& g, const std::vector<int>& inputs, const LogicEncoding& enc,
                 const GateSimSettings& sim) {
    enc.validate();
    const auto& cf = g.circuit;
    require(inputs.size() == cf.inputs.size(), "expected " + std::to_string(cf.inputs.size()) + " inputs, got " +
                                                   std::to_string(inputs.size()));
    require(enc.settle >= 5.0 * g.max_time_constant * (1.0 - 1e-9),
            "settle must be at least 5x the largest circuit time constant (" +
                format_full(5.0 * g.max_time_constant) + " s)");
    Netlist net = cf.net;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        require(inputs[i] == 0 || inputs[i] == 1, "input bits must be 0 or 1");
        net.element(cf.inputs[i]).as<VoltageSource>().spec = DcSource{inputs[i] ? enc.v_high : enc.v_low};
    }
    TransientOptions opt;
    opt.dt = sim.dt;
    opt.max_newton_iterations = sim.max_newton_iterations;
    opt.residual_tol = sim.residual_tol;
    GateRun run;
    run.trace = transient(net, enc.settle + enc.bit_width, opt);
    for (const auto& p : cf.probes) {
        std::size_t n = 0;
        run.outputs.push_back(decode_output(run.trace, p, enc, &n));
        run.spikes.push_back(n);
    }
    return run;
}

std::vector<int> evaluate(GateKind kind, const std::vector<int>& inputs, const LogicEncoding& enc,
                          const OtsParams& p, const GateSimSettings& sim) {
    require(inputs.size() == input_arity(kind), "expected " + std::to_string(input_arity(kind)) + " inputs for " +
                                                    std::string(gate_name(kind)));
    return run_gate(build_gate(kind, p, sim.gate), inputs, enc, sim).outputs;
}

bool TruthTable::all_match() const {
    return std::all_of(rows.begin(), rows.end(), [](const TruthRow& r) { return r.measured == r.expected; });
}

std::string TruthTable::to_json() const {
    nlohmann::ordered_json j;
    j["kind"] = gate_name(kind);
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json row;
        row["in"] = r.in;
        row["expected"] = r.expected;
        row["measured"] = r.measured;
        row["spikes"] = r.spikes;
        j["rows"].push_back(row);
    }
    return j.dump(2);
}

TruthTable truth_table(GateKind kind, const LogicEncoding& enc, const OtsParams& p, const GateSimSettings& sim,
                       unsigned jobs) {
    const GateTemplate g = build_gate(kind, p, sim.gate);
    const std::size_t arity = input_arity(kind);
    const std::size_t n = std::size_t{1} << arity;
    TruthTable tt{kind, std::vector<TruthRow>(n), 0.0};
    std::vector<Amperes> residuals(n, 0.0);
    parallel_for(n, jobs, [&](std::size_t r) {
        TruthRow& row = tt.rows[r];
        for (std::size_t i = 0; i < arity; ++i) row.in.push_back(static_cast<int>((r >> (arity - 1 - i)) & 1U));
        row.expected = expected_outputs(kind, row.in);
        GateRun run = run_gate(g, row.in, enc, sim);
        row.measured = std::move(run.outputs);
        row.spikes = std::move(run.spikes);
        residuals[r] = run.trace.max_residual;
    });
    tt.max_residual = *std::max_element(residuals.begin(), residuals.end());
    return tt;
}

}  // namespace otsim
