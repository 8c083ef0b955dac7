// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otsim Authors

#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "otsim/circuits.hpp"
#include "otsim/error.hpp"
#include "otsim/simulator.hpp"
#include "otsim/spikes.hpp"

using namespace otsim;
using Catch::Approx;

namespace {

Netlist rc_circuit() {
    Netlist n;
    const auto in = n.node("in");
    const auto out = n.node("out");
    n.add_source("V1", in, kGround, DcSource{1.0});
    n.add_resistor("R1", in, out, 1e3);
    n.add_capacitor("C1", out, kGround, 1e-9);
    return n;
}

// Closed-form period of the relaxation oscillator: charge from v_reset to
// v_th through R_d, wait tau_on, discharge through the on-device until the
// current falls to i_hold, wait tau_off.
double oscillator_period(const OtsParams& p, double vin, const OscillatorValues& o) {
    const double tc = o.r_d * o.c_p;
    const double v_start = vin - (vin - p.v_th) * std::exp(-p.tau_on / tc);
    const double r_path = p.r_on + o.r_s;
    const double td = o.c_p * o.r_d * r_path / (o.r_d + r_path);
    const double v_eq = (vin / o.r_d + p.v_hold / r_path) / (1.0 / o.r_d + 1.0 / r_path);
    const double v_cross = p.v_hold + p.i_hold * r_path;
    const double t_dis = td * std::log((v_start - v_eq) / (v_cross - v_eq));
    const double v_reset = v_eq + (v_cross - v_eq) * std::exp(-p.tau_off / td);
    return tc * std::log((vin - v_reset) / (vin - p.v_th)) + p.tau_on + t_dis + p.tau_off;
}

std::vector<double> spikes_of(const CircuitFile& cf, const Trace& tr) {
    const auto& pr = cf.probes.front();
    return extract_spikes(std::span<const double>(pr.signal(tr)), tr.dt, pr.threshold, 2.0 * tr.dt).spike_times;
}

}  // namespace

TEST_CASE("RC step response matches the exponential", "[simulator]") {
    const Netlist n = rc_circuit();
    TransientOptions opt;
    opt.dt = 10e-9;
    const Trace tr = transient(n, 5e-6, opt);
    const auto& v = tr.voltage(*n.find_node("out"));
    REQUIRE(tr.samples == 501);
    const double expected = 1.0 - std::exp(-1.0);  // t = 1 us = RC
    CHECK(v[100] == Approx(expected).epsilon(0.01));
    CHECK(v.front() == Approx(0.0).margin(1e-5));
    CHECK(v.back() == Approx(1.0 - std::exp(-5.0)).epsilon(0.01));
    CHECK(tr.max_residual < 1e-9);
}

TEST_CASE("backward Euler error is first order", "[simulator][property]") {
    const Netlist n = rc_circuit();
    auto error_at_1us = [&](double dt) {
        TransientOptions opt;
        opt.dt = dt;
        const Trace tr = transient(n, 1e-6, opt);
        return std::abs(tr.voltage(*n.find_node("out")).back() - (1.0 - std::exp(-1.0)));
    };
    // The discrete recurrence v_N = 1 - (1 + h/tau)^-N gives a ratio of
    // 1.995856 for h = 10 ns and 5 ns, slightly under 2 from the O(h^2) term.
    const double e1 = error_at_1us(10e-9);
    const double e2 = error_at_1us(5e-9);
    CHECK(e1 / e2 == Approx(1.995856).epsilon(1e-4));
}

TEST_CASE("resistive divider holds half the supply", "[simulator]") {
    Netlist n;
    const auto top = n.node("top");
    const auto mid = n.node("mid");
    n.add_source("V1", top, kGround, DcSource{5.0});
    n.add_resistor("R1", top, mid, 2.2e3);
    n.add_resistor("R2", mid, kGround, 2.2e3);
    const Trace tr = transient(n, 1e-6);
    for (double v : tr.voltage(mid)) CHECK(v == Approx(2.5).epsilon(1e-12));
}

TEST_CASE("singular systems name the offending node", "[simulator]") {
    SECTION("node held only by blocking diodes") {
        Netlist n;
        const auto in = n.node("in");
        const auto mid = n.node("island");
        n.add_source("V1", in, kGround, DcSource{0.0});
        n.add_diode("D1", in, mid);
        n.add_diode("D2", mid, kGround);
        try {
            transient(n, 1e-6);
            FAIL("expected a singular-matrix error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::Singular);
            CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("island"));
        }
    }
    SECTION("parallel voltage sources") {
        Netlist n;
        const auto a = n.node("a");
        n.add_source("V1", a, kGround, DcSource{1.0});
        n.add_source("V2", a, kGround, DcSource{2.0});
        n.add_resistor("R1", a, kGround, 1e3);
        CHECK_THROWS_MATCHES(transient(n, 1e-6), Error,
                             Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring("singular")));
    }
}

TEST_CASE("segment cycling reports the timestep", "[simulator]") {
    // Comparator driving its own inverting input has no consistent segment.
    Netlist n;
    const auto ref = n.node("ref");
    const auto out = n.node("out");
    n.add_source("VREF", ref, kGround, DcSource{2.5});
    n.add_comparator("U1", ref, out, out);
    n.add_resistor("RL", out, kGround, 1e3);
    try {
        transient(n, 1e-6);
        FAIL("expected a convergence error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Convergence);
        CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("timestep 0"));
    }
}

TEST_CASE("timestep precondition against switching delays", "[simulator]") {
    OtsParams p;
    const auto cf = build_oscillator(p, DcSource{10.0});
    TransientOptions opt;
    opt.dt = 0.6 * p.tau_on;
    CHECK_THROWS_AS(transient(cf.net, 10e-6, opt), Error);
    opt.check_timestep = false;
    CHECK_NOTHROW(transient(cf.net, 10e-6, opt));
}

TEST_CASE("floating subcircuit is rejected before solving", "[simulator]") {
    Netlist n;
    const auto a = n.node("a");
    const auto b = n.node("b");
    const auto c = n.node("c");
    n.add_source("V1", a, kGround, DcSource{1.0});
    n.add_resistor("R1", a, kGround, 1e3);
    n.add_resistor("R2", b, c, 1e3);
    CHECK_THROWS_MATCHES(transient(n, 1e-6), Error,
                         Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring("'b'")));
}

TEST_CASE("oscillator period matches the closed-form oracle", "[simulator][oscillator]") {
    OtsParams p;
    const OscillatorValues vals;
    for (double vin : {5.0, 10.0, 20.0}) {
        CAPTURE(vin);
        const auto cf = build_oscillator(p, DcSource{vin}, vals);
        const Trace tr = transient(cf.net, 200e-6);
        const auto t = spikes_of(cf, tr);
        REQUIRE(t.size() >= 10);
        const double period = (t.back() - t[1]) / static_cast<double>(t.size() - 2);
        const double oracle = oscillator_period(p, vin, vals);
        CHECK(period == Approx(oracle).epsilon(0.15));
        CHECK(std::abs(static_cast<double>(t.size()) - 200e-6 / oracle) <= 1.0);
        CHECK(tr.max_residual < 1e-9);
    }
}

TEST_CASE("oscillator oracle values are frozen", "[simulator][oscillator]") {
    // Guards the test oracle itself against accidental edits.
    OtsParams p;
    CHECK(oscillator_period(p, 10.0, {}) == Approx(2.33365e-6).epsilon(1e-4));
    CHECK(oscillator_period(p, 5.0, {}) == Approx(5.82263e-6).epsilon(1e-4));
}

TEST_CASE("oscillator below onset stays silent", "[simulator][oscillator]") {
    OtsParams p;
    const auto cf = build_oscillator(p, DcSource{0.9 * p.v_th});
    const Trace tr = transient(cf.net, 50e-6);
    CHECK(spikes_of(cf, tr).empty());
}

TEST_CASE("firing rate rises with bias", "[simulator][oscillator]") {
    OtsParams p;
    double prev = 0.0;
    for (double vin : {4.0, 6.0, 8.0, 12.0, 16.0}) {
        const auto cf = build_oscillator(p, DcSource{vin});
        const Trace tr = transient(cf.net, 200e-6);
        SpikeTrain st;
        st.spike_times = spikes_of(cf, tr);
        const double rate = interval_rate(st);
        CHECK(rate > prev);
        prev = rate;
    }
}

TEST_CASE("transient is bit-deterministic", "[simulator][property]") {
    OtsParams p;
    const auto cf = build_oscillator(p, DcSource{12.0});
    const Trace a = transient(cf.net, 50e-6);
    const Trace b = transient(cf.net, 50e-6);
    CHECK(a.node_voltages == b.node_voltages);
    CHECK(a.branch_currents == b.branch_currents);
}

TEST_CASE("dynamic I-V trajectory", "[simulator][iv]") {
    OtsParams p;
    const auto cf = build_oscillator(p, DcSource{0.0});
    const auto src = *cf.net.find_element("VIN");
    const auto dev = *cf.net.find_element("X1");

    SECTION("sub-threshold ramp is the leakage line") {
        const auto iv = dynamic_iv(cf.net, src, TriangleSource{0.8 * p.v_th, 20e-6, 20e-6}, dev);
        for (const auto& pt : iv) CHECK(pt.i == Approx(p.g_off * pt.v).margin(1e-15));
        CHECK_FALSE(has_snapback(iv));
    }
    SECTION("ramp to twice threshold snaps back") {
        const auto iv = dynamic_iv(cf.net, src, TriangleSource{2.0 * p.v_th, 20e-6, 20e-6}, dev);
        CHECK(has_snapback(iv));
    }
    SECTION("negative ramp mirrors the positive one") {
        const auto pos = dynamic_iv(cf.net, src, TriangleSource{2.0 * p.v_th, 20e-6, 20e-6}, dev);
        const auto neg = dynamic_iv(cf.net, src, TriangleSource{-2.0 * p.v_th, 20e-6, 20e-6}, dev);
        REQUIRE(pos.size() == neg.size());
        for (std::size_t k = 0; k < pos.size(); ++k) {
            CHECK(neg[k].v == Approx(-pos[k].v).margin(1e-12));
            CHECK(neg[k].i == Approx(-pos[k].i).margin(1e-15));
        }
    }
}

TEST_CASE("has_snapback on synthetic trajectories", "[simulator][iv]") {
    const std::vector<IvPoint> mono = {{0.0, 0.0}, {1.0, 1e-3}, {2.0, 2e-3}};
    const std::vector<IvPoint> snap = {{0.0, 0.0}, {3.0, 1e-6}, {1.5, 5e-3}};
    CHECK_FALSE(has_snapback(mono));
    CHECK(has_snapback(snap));
}

TEST_CASE("comparator output stays within its rails", "[simulator][property]") {
    Netlist n;
    const auto in = n.node("in");
    const auto ref = n.node("ref");
    const auto out = n.node("out");
    n.add_source("VIN", in, kGround, TriangleSource{10.0, 5e-6, 5e-6});
    n.add_source("VREF", ref, kGround, DcSource{5.0});
    n.add_comparator("U1", in, ref, out);
    n.add_resistor("RL", out, kGround, 1e3);
    n.add_diode("D1", out, kGround);
    const Trace tr = transient(n, 10e-6);
    for (double v : tr.voltage(out)) {
        CHECK(v >= -1e-12);
        CHECK(v <= 5.0 + 1e-12);
    }
    CHECK(tr.max_residual < 1e-9);
}

TEST_CASE("trace CSV has the documented header", "[simulator]") {
    OtsParams p;
    const auto cf = build_oscillator(p, DcSource{10.0});
    const Trace tr = transient(cf.net, 1e-6);
    const auto path = std::filesystem::temp_directory_path() / "otsim_trace_test.csv";
    write_trace_csv(tr, path.string());
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,in,a,s,I(X1)");
    std::size_t rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    CHECK(rows == tr.samples);
    std::filesystem::remove(path);
}
