// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otsim Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "otsim/device.hpp"
#include "otsim/gates.hpp"
#include "otsim/image.hpp"

namespace otsim {

enum class ShiftDir { Horizontal, Vertical };

// Each pixel takes its left (Horizontal) or upper (Vertical) neighbor; the
// first column/row is replicated.
BinaryImage shift(const BinaryImage& img, ShiftDir dir);

BinaryImage xor_images(const BinaryImage& a, const BinaryImage& b);
BinaryImage or_images(const BinaryImage& a, const BinaryImage& b);

// Pure software edge map: (img ^ shift_h) | (img ^ shift_v).
BinaryImage reference_edges(const BinaryImage& img);

struct StreamSettings {
    Seconds pulse_width = 5e-6;
    Seconds clock_period = 10e-6;
    Seconds edge_time = 10e-9;
    Seconds dt = 50e-9;
    std::size_t spike_count_threshold = 1;
    std::size_t segment_size = 4096;  // clock periods per independent simulation
    unsigned jobs = 1;
    int max_newton_iterations = 8;
    Amperes residual_tol = 1e-9;
};

struct StreamResult {
    std::vector<std::uint8_t> bits;
    std::vector<std::size_t> spike_counts;
    Amperes max_residual = 0.0;
};

// Drives the XOR template with two synchronized return-to-zero pulse trains
// and thresholds the spike count of each clock period.
StreamResult xor_stream_circuit(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b,
                                const LogicEncoding& enc, const OtsParams& p,
                                const StreamSettings& s = {});

struct EdgeResult {
    BinaryImage edges;
    BinaryImage horizontal;
    BinaryImage vertical;
    Amperes max_residual = 0.0;
};

EdgeResult detect_edges(const BinaryImage& img, const LogicEncoding& enc, const OtsParams& p,
                        const StreamSettings& s = {});

// Pixel coordinates (x, y) where the two maps differ.
std::vector<std::pair<std::size_t, std::size_t>> mismatches(const BinaryImage& a, const BinaryImage& b);
std::string mismatch_report_json(const std::vector<std::pair<std::size_t, std::size_t>>& mm,
                                 std::size_t total);

struct GradientSample {
    double delta_c = 0.0;
    Hertz rate = 0.0;
    Amperes max_residual = 0.0;
};

struct GradientSettings {
    Seconds window = 200e-6;
    Seconds dt = 10e-9;
    int max_newton_iterations = 8;
    Amperes residual_tol = 1e-9;
};

// Drives the XOR inputs with DC levels v_high * c / 255 and measures the
// output firing rate over the window.
GradientSample gradient_rate(int c_a, int c_b, const LogicEncoding& enc, const OtsParams& p,
                             const GradientSettings& s = {});

struct LinearFit {
    double slope = 0.0;  // hertz per contrast unit
    double floor = 0.0;  // contrast units, -intercept/slope clamped to >= 0
    double intercept = 0.0;
    double r2 = 0.0;
};

// Least squares over the nonzero-rate samples; needs three of them with at
// least two distinct contrasts.
LinearFit fit_linear(const std::vector<GradientSample>& samples);

}  // namespace otsim
