// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otsim Authors

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "otsim/simulator.hpp"

namespace otsim {

enum class EdgeMethod { Xor, Sobel3x3 };
enum class EnergySource { Simulated, Cited, Scaled };

struct EnergyRow {
    std::string label;
    Joules energy_per_op = 0.0;
    std::uint64_t op_count = 0;
    Joules total = 0.0;  // energy_per_op * op_count
    EdgeMethod method = EdgeMethod::Xor;
    EnergySource source = EnergySource::Cited;
};

struct EnergyReport {
    std::vector<EnergyRow> rows;
    std::vector<std::string> notes;

    [[nodiscard]] std::string to_json() const;
    [[nodiscard]] std::string to_text() const;
};

struct ScalingLaw {
    double exponent = 1.6;
    Meters reference_size = 6e-6;
    Joules reference_energy = 467e-12;

    void validate() const;
};

// Plain trapezoid integral of v*i for one recorded element over [t0, t1].
Joules integrate_power(const Trace& tr, std::size_t element, Seconds t0, Seconds t1);

// As integrate_power, but requires exactly one current spike (a maximal run
// with |i| >= current_threshold) inside the bounds.
Joules spike_energy(const Trace& tr, std::size_t element, Seconds t0, Seconds t1,
                    Amperes current_threshold = 100e-6);

std::uint64_t xor_op_count(std::uint64_t width, std::uint64_t height);
std::uint64_t sobel_op_count(std::uint64_t width, std::uint64_t height);

Joules scale_energy(const ScalingLaw& law, Meters d_target);

EnergyRow make_row(std::string label, Joules per_op, std::uint64_t ops, EdgeMethod m, EnergySource s);

// Cited processor figures plus the experimental OTS-XOR row.
EnergyReport table1_report(std::uint64_t width, std::uint64_t height);

// table1_report plus the projected row at d_target and notes on the
// inconsistent printed cells of the published table.
EnergyReport scaled_report(std::uint64_t width, std::uint64_t height, Meters d_target, double exponent);

}  // namespace otsim
