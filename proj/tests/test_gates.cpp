// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otsim Authors

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <map>

#include <json.hpp>

#include "otsim/error.hpp"
#include "otsim/gates.hpp"

using namespace otsim;

namespace {

std::map<std::string, int> count_parts(const Netlist& n, const std::string& prefix = "") {
    std::map<std::string, int> c;
    for (const auto& e : n.elements())
        if (e.name.rfind(prefix, 0) == 0) ++c[element_letter(e)];
    return c;
}

std::vector<std::vector<int>> measured(const TruthTable& tt) {
    std::vector<std::vector<int>> out;
    for (const auto& r : tt.rows) out.push_back(r.measured);
    return out;
}

const OtsParams kParams{};
const LogicEncoding kEnc{};

}  // namespace

TEST_CASE("template part lists", "[gates]") {
    SECTION("AND: one OTS, three resistors, one capacitor") {
        const auto c = count_parts(build_gate(GateKind::And, kParams).circuit.net);
        CHECK(c.at("OTS") == 1);
        CHECK(c.at("R") == 3);
        CHECK(c.at("C") == 1);
        CHECK(c.count("D") == 0);
    }
    SECTION("NAND: 5 V supply and two input diodes") {
        const auto& net = build_gate(GateKind::Nand, kParams).circuit.net;
        const auto& vdd = net.element("VDD").as<VoltageSource>().spec;
        CHECK(std::get<DcSource>(vdd).value == 5.0);
        CHECK(count_parts(net).at("D") == 2);
    }
    SECTION("full adder: two XOR, two AND, one OR and comparator buffers") {
        const auto& net = build_gate(GateKind::FullAdder, kParams).circuit.net;
        CHECK(count_parts(net, "x1_").at("OTS") == 1);
        CHECK(count_parts(net, "x2_").at("OTS") == 1);
        CHECK(count_parts(net, "a1_").at("OTS") == 1);
        CHECK(count_parts(net, "a2_").at("OTS") == 1);
        CHECK(count_parts(net, "o_").at("OTS") == 1);
        CHECK(count_parts(net, "o_").at("D") == 2);
        CHECK(count_parts(net).at("OTS") == 5);
        CHECK(count_parts(net).at("CMP") >= 3);
    }
    SECTION("half adder capacitors follow the options") {
        GateOptions opt;
        opt.half_adder_c2 = 220e-12;
        const auto& net = build_gate(GateKind::HalfAdder, kParams, opt).circuit.net;
        CHECK(net.element("s_C2").as<Capacitor>().farads == 220e-12);
        CHECK(net.element("c_C1").as<Capacitor>().farads == 500e-12);
    }
}

TEST_CASE("gate names and arity", "[gates]") {
    for (auto k : kAllGates) CHECK(parse_gate_kind(gate_name(k)) == k);
    CHECK_FALSE(parse_gate_kind("xnor").has_value());
    CHECK(input_arity(GateKind::DcaapCascade) == 3);
    CHECK(output_arity(GateKind::HalfAdder) == 2);
    CHECK_THROWS_AS(expected_outputs(GateKind::And, {1}), Error);
}

TEST_CASE("single evaluations", "[gates]") {
    CHECK(evaluate(GateKind::And, {1, 1}, kEnc, kParams) == std::vector<int>{1});
    CHECK(evaluate(GateKind::And, {0, 1}, kEnc, kParams) == std::vector<int>{0});
    CHECK(evaluate(GateKind::Xor, {1, 0}, kEnc, kParams) == std::vector<int>{1});
    CHECK(evaluate(GateKind::Xor, {1, 1}, kEnc, kParams) == std::vector<int>{0});
    CHECK(evaluate(GateKind::Nand, {0, 0}, kEnc, kParams) == std::vector<int>{1});
    CHECK_THROWS_AS(evaluate(GateKind::Xor, {1}, kEnc, kParams), Error);
}

TEST_CASE("every truth table matches its Boolean definition", "[gates]") {
    for (auto k : kAllGates) {
        CAPTURE(gate_name(k));
        const auto tt = truth_table(k, kEnc, kParams);
        CHECK(tt.rows.size() == (std::size_t{1} << input_arity(k)));
        CHECK(tt.all_match());
        CHECK(tt.max_residual < 1e-9);
    }
}

TEST_CASE("dCaAP cascade rows", "[gates][dcaap]") {
    const auto tt = truth_table(GateKind::DcaapCascade, kEnc, kParams);
    auto row = [&](int a, int b, int c) { return tt.rows.at(static_cast<std::size_t>(a * 4 + b * 2 + c)).measured; };
    CHECK(row(1, 1, 0) == std::vector<int>{0, 0});
    CHECK(row(1, 0, 1) == std::vector<int>{1, 0});
    CHECK(row(0, 1, 1) == std::vector<int>{1, 0});
    CHECK(row(0, 0, 0) == std::vector<int>{0, 0});
    for (const auto& r : tt.rows) {
        const int y1 = r.in[0] ^ r.in[1];
        CHECK(r.measured == std::vector<int>{y1, y1 ^ r.in[2]});
    }
}

TEST_CASE("two-input gates are symmetric in their inputs", "[gates][property]") {
    for (auto k : {GateKind::And, GateKind::Or, GateKind::Nand, GateKind::Nor, GateKind::Xor}) {
        CAPTURE(gate_name(k));
        CHECK(evaluate(k, {0, 1}, kEnc, kParams) == evaluate(k, {1, 0}, kEnc, kParams));
    }
}

TEST_CASE("De Morgan consistency of decoded bits", "[gates][property]") {
    auto inverted = [](std::vector<std::vector<int>> rows) {
        for (auto& r : rows)
            for (int& b : r) b = 1 - b;
        return rows;
    };
    CHECK(measured(truth_table(GateKind::Nand, kEnc, kParams)) ==
          inverted(measured(truth_table(GateKind::And, kEnc, kParams))));
    CHECK(measured(truth_table(GateKind::Nor, kEnc, kParams)) ==
          inverted(measured(truth_table(GateKind::Or, kEnc, kParams))));
}

TEST_CASE("XOR with one input held high inverts the other", "[gates][property]") {
    for (int x : {0, 1}) {
        CHECK(evaluate(GateKind::Xor, {1, x}, kEnc, kParams) == std::vector<int>{1 - x});
        CHECK(evaluate(GateKind::Xor, {x, 1}, kEnc, kParams) == std::vector<int>{1 - x});
    }
}

TEST_CASE("XOR from four NAND evaluations matches the native XOR", "[gates][property]") {
    const auto native = truth_table(GateKind::Xor, kEnc, kParams);
    auto nand = [](int a, int b) { return evaluate(GateKind::Nand, {a, b}, kEnc, kParams).at(0); };
    for (const auto& r : native.rows) {
        const int a = r.in[0], b = r.in[1];
        const int m = nand(a, b);
        CHECK(nand(nand(a, m), nand(b, m)) == r.measured.at(0));
    }
}

TEST_CASE("truth tables tolerate +/-10% logic amplitude", "[gates][property]") {
    for (double scale : {0.9, 1.1}) {
        LogicEncoding enc;
        enc.v_high *= scale;
        for (auto k : kAllGates) {
            CAPTURE(scale, gate_name(k));
            CHECK(truth_table(k, enc, kParams).all_match());
        }
    }
}

TEST_CASE("row parallelism does not change results", "[gates][property]") {
    const auto one = truth_table(GateKind::FullAdder, kEnc, kParams, {}, 1);
    const auto four = truth_table(GateKind::FullAdder, kEnc, kParams, {}, 4);
    CHECK(one.to_json() == four.to_json());
    CHECK(one.max_residual == four.max_residual);
}

TEST_CASE("truth table JSON layout", "[gates]") {
    const auto tt = truth_table(GateKind::Xor, kEnc, kParams);
    const auto j = nlohmann::json::parse(tt.to_json());
    CHECK(j["kind"] == "xor");
    REQUIRE(j["rows"].size() == 4);
    CHECK(j["rows"][1]["in"] == nlohmann::json::array({0, 1}));
    CHECK(j["rows"][1]["expected"] == nlohmann::json::array({1}));
    CHECK(j["rows"][1]["spikes"][0].get<int>() >= 1);
}

TEST_CASE("decode_output on synthetic traces", "[gates]") {
    Trace tr;
    tr.dt = 1e-6;
    tr.samples = 101;
    tr.node_names = {"0", "y"};
    tr.node_voltages = {{}, std::vector<double>(101, 0.0)};
    Probe spikes;
    spikes.pos = 1;
    spikes.threshold = 0.5;
    CHECK(decode_output(tr, spikes, kEnc) == 0);

    Probe level = spikes;
    level.mode = DecodeMode::MeanLevel;
    level.threshold = 2.5;
    tr.node_voltages[1].assign(101, 5.0);
    CHECK(decode_output(tr, level, kEnc) == 1);

    LogicEncoding late = kEnc;
    late.settle = 80e-6;
    CHECK_THROWS_AS(decode_output(tr, level, late), Error);
    LogicEncoding empty = kEnc;
    empty.bit_width = 0.0;
    CHECK_THROWS_AS(decode_output(tr, level, empty), Error);
}

TEST_CASE("settle guard rejects short lead-in", "[gates]") {
    LogicEncoding enc;
    enc.settle = 10e-6;  // restorer hold constant is 10 us
    CHECK_THROWS_AS(evaluate(GateKind::FullAdder, {1, 0, 1}, enc, kParams), Error);
}
