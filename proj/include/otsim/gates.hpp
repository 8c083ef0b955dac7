// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otsim Authors

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "otsim/netlist_io.hpp"
#include "otsim/simulator.hpp"

namespace otsim {

enum class GateKind { And, Or, Nor, Nand, Xor, HalfAdder, FullAdder, DcaapCascade };

inline constexpr GateKind kAllGates[] = {GateKind::And,       GateKind::Or,        GateKind::Nor,
                                         GateKind::Nand,      GateKind::Xor,       GateKind::HalfAdder,
                                         GateKind::FullAdder, GateKind::DcaapCascade};

std::string_view gate_name(GateKind k);
std::optional<GateKind> parse_gate_kind(std::string_view name);
std::size_t input_arity(GateKind k);
std::size_t output_arity(GateKind k);
// Boolean reference for a row; inputs are ordered as the template inputs.
std::vector<int> expected_outputs(GateKind k, const std::vector<int>& inputs);

struct LogicEncoding {
    Volts v_high = 5.0;
    Volts v_low = 0.0;
    Seconds bit_width = 50e-6;  // decode window length
    Seconds settle = 50e-6;     // lead-in before the decode window

    void validate() const;
};

// Parts the half-adder caption leaves ambiguous.
struct GateOptions {
    Farads half_adder_c2 = 100e-12;
    Farads half_adder_c3 = 500e-12;
};

/// Netlist plus labeled inputs (voltage sources) and output probes.
struct GateTemplate {
    GateKind kind;
    CircuitFile circuit;
    Seconds max_time_constant = 0.0;
};

GateTemplate build_gate(GateKind kind, const OtsParams& p, const GateOptions& opt = {});

// Decodes one output over [enc.settle, enc.settle + enc.bit_width].
// Throws InvalidArgument when the window is empty or outside the trace.
int decode_output(const Trace& tr, const Probe& probe, const LogicEncoding& enc,
                  std::size_t* spikes_out = nullptr);

struct GateRun {
    std::vector<int> outputs;
    std::vector<std::size_t> spikes;
    Trace trace;
};

struct GateSimSettings {
    Seconds dt = 50e-9;
    int max_newton_iterations = 8;
    Amperes residual_tol = 1e-9;
    GateOptions gate;
};

GateRun run_gate(const GateTemplate& g, const std::vector<int>& inputs, const LogicEncoding& enc,
                 const GateSimSettings& sim = {});

std::vector<int> evaluate(GateKind kind, const std::vector<int>& inputs, const LogicEncoding& enc,
                          const OtsParams& p, const GateSimSettings& sim = {});

struct TruthRow {
    std::vector<int> in;
    std::vector<int> expected;
    std::vector<int> measured;
    std::vector<std::size_t> spikes;
};

struct TruthTable {
    GateKind kind;
    std::vector<TruthRow> rows;
    Amperes max_residual = 0.0;

    [[nodiscard]] bool all_match() const;
    [[nodiscard]] std::string to_json() const;
};

// Rows are simulated independently (fresh state) and may run on `jobs`
// threads; the result does not depend on `jobs`.
TruthTable truth_table(GateKind kind, const LogicEncoding& enc, const OtsParams& p,
                       const GateSimSettings& sim = {}, unsigned jobs = 1);

}  // namespace otsim
