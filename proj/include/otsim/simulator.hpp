// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otsim Authors

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "otsim/netlist.hpp"

namespace otsim {

struct TransientOptions {
    Seconds dt = 10e-9;
    // Segment re-selections allowed per timestep before giving up.
    int max_newton_iterations = 8;
    Amperes residual_tol = 1e-9;
    // Nodes to sample; empty samples every node.
    std::vector<NodeIndex> record_nodes;
    // Elements whose branch current is sampled; empty samples every OTS.
    std::vector<std::size_t> record_currents;
    // Skip the dt <= tau/2 precondition (used by tests probing the solver).
    bool check_timestep = true;
};

/// Sampled transient result. Sample k is at time k * dt.
struct Trace {
    Seconds dt = 0.0;
    std::size_t samples = 0;
    std::vector<std::string> node_names;          // indexed by node
    std::vector<std::vector<Volts>> node_voltages;  // [node][sample], empty when unrecorded
    std::vector<std::size_t> current_elements;
    std::vector<std::string> current_names;
    std::vector<std::vector<Amperes>> branch_currents;  // [i][sample], element current_elements[i]
    std::vector<std::pair<NodeIndex, NodeIndex>> current_terminals;
    Amperes max_residual = 0.0;
    std::size_t total_iterations = 0;

    [[nodiscard]] Seconds time(std::size_t k) const { return dt * static_cast<double>(k); }
    [[nodiscard]] Seconds duration() const { return samples == 0 ? 0.0 : time(samples - 1); }
    [[nodiscard]] const std::vector<Volts>& voltage(NodeIndex n) const;
    // v(a) - v(b), ground reads as zero.
    [[nodiscard]] std::vector<Volts> differential(NodeIndex a, NodeIndex b) const;
    [[nodiscard]] std::size_t current_slot(std::size_t element) const;
};

// Fixed-step backward-Euler transient with piecewise-linear Newton solves.
// Throws Convergence (with the step index) or Singular (naming the node).
Trace transient(const Netlist& net, Seconds t_stop, const TransientOptions& opt = {});

// Writes `t,<nodes...>,<branches...>` with full precision.
void write_trace_csv(const Trace& tr, const std::string& path);

struct IvPoint {
    Volts v;
    Amperes i;
};

// Drives the source at `source_index` with a Triangle ramp and returns the
// sampled device trajectory of the OTS at `ots_index`.
std::vector<IvPoint> dynamic_iv(Netlist net, std::size_t source_index, const TriangleSource& ramp,
                                std::size_t ots_index, const TransientOptions& opt = {});

// True when some consecutive pair has di > 0 and dv < 0.
bool has_snapback(std::span<const IvPoint> iv);

}  // namespace otsim
