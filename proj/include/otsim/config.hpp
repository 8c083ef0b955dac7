// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otsim Authors

#pragma once

#include <string>
#include <vector>

#include "otsim/device.hpp"
#include "otsim/edge.hpp"
#include "otsim/gates.hpp"

namespace otsim {

/// Everything a CLI run can tune. Loaded from a flat `key = value` file;
/// unknown keys are rejected.
struct RunConfig {
    OtsParams ots = default_params();
    Seconds dt = 10e-9;        // device-level runs (iv, oscillate)
    Seconds logic_dt = 50e-9;  // gates and edge streams
    int max_newton_iterations = 8;
    Amperes residual_tol = 1e-9;
    LogicEncoding encoding;
    GateOptions gate;
    int binarize_threshold = 128;
    bool otsu = false;
    std::size_t spike_count_threshold = 1;
    std::size_t segment_size = 4096;
    unsigned jobs = 1;
    double exponent = 1.6;
    Seconds gradient_window = 200e-6;
    Seconds gradient_dt = 10e-9;

    void set(const std::string& key, const std::string& value);
    void load_text(const std::string& text);
    void load_file(const std::string& path);
    void validate() const;

    [[nodiscard]] static const std::vector<std::string>& keys();
    [[nodiscard]] GateSimSettings gate_settings() const;
    [[nodiscard]] StreamSettings stream_settings() const;
    [[nodiscard]] GradientSettings gradient_settings() const;
    [[nodiscard]] TransientOptions transient_options() const;
};

}  // namespace otsim
