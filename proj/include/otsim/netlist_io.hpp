// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otsim Authors

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "otsim/netlist.hpp"
#include "otsim/simulator.hpp"

namespace otsim {

enum class DecodeMode { SpikeCount, MeanLevel };

/// A named observable: v(pos) - v(neg), optionally rectified.
/// For SpikeCount the threshold is the spike detection level; for MeanLevel
/// it is the decision level for the windowed mean.
struct Probe {
    std::string name;
    NodeIndex pos = kGround;
    NodeIndex neg = kGround;
    bool rectify = false;
    DecodeMode mode = DecodeMode::SpikeCount;
    double threshold = 0.5;

    [[nodiscard]] std::vector<double> signal(const Trace& tr) const;
};

/// Netlist plus harness annotations, as stored in circuits/*.net.
///
/// Element lines:
///   R <name> <n+> <n-> <ohms>
///   C <name> <n+> <n-> <farads> [ic=<volts>]
///   V <name> <n+> <n-> dc <v> | pwl <t v>... | pulse <vlo> <vhi> <delay> <width> <period> [repeat]
///                        | tri <vpeak> <trise> <tfall>
///   D <name> <anode> <cathode> [vf=] [vz=] [rs=]
///   OTS <name> <n+> <n-> [vth= vhold= ron= goff= ihold= ton= toff=]
///   CMP <name> <v+> <v-> <out> [high=] [low=] [rout=]
/// Directives:
///   .input <source-name>
///   .probe <name> <n+> <n-> spikes|level <threshold> [abs]
///   .meta <key> <value...>
/// `#` starts a comment; values accept SI suffixes.
struct CircuitFile {
    Netlist net;
    std::vector<std::string> inputs;
    std::vector<Probe> probes;
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> header_comments;  // emitted verbatim on write
};

// Unspecified OTS parameters come from `defaults`. Parse errors carry the
// 1-based line number.
CircuitFile parse_circuit(const std::string& text, const OtsParams& defaults = {});
CircuitFile load_circuit(const std::string& path, const OtsParams& defaults = {});

// OTS parameters equal to `defaults` are omitted from the element line.
std::string format_circuit(const CircuitFile& cf, const OtsParams& defaults = {});
void save_circuit(const CircuitFile& cf, const std::string& path, const OtsParams& defaults = {});

}  // namespace otsim
