// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otsim Authors

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "otsim/device.hpp"
#include "otsim/units.hpp"

namespace otsim {

using NodeIndex = std::size_t;
inline constexpr NodeIndex kGround = 0;

// ---------------------------------------------------------------------------
// Source waveforms
// ---------------------------------------------------------------------------

struct DcSource {
    Volts value = 0.0;
};

struct PwlSource {
    std::vector<std::pair<Seconds, Volts>> points;  // strictly increasing times
};

// repeat == 0 repeats forever.
struct PulseSource {
    Volts v_low = 0.0;
    Volts v_high = 1.0;
    Seconds delay = 0.0;
    Seconds width = 1e-6;
    Seconds period = 2e-6;
    std::size_t repeat = 0;
};

// 0 -> v_peak over t_rise, back to 0 over t_fall, then 0.
struct TriangleSource {
    Volts v_peak = 1.0;
    Seconds t_rise = 1e-3;
    Seconds t_fall = 1e-3;
};

using SourceSpec = std::variant<DcSource, PwlSource, PulseSource, TriangleSource>;

Volts source_value(const SourceSpec& s, Seconds t);
void validate_source(const SourceSpec& s);

// ---------------------------------------------------------------------------
// Elements
// ---------------------------------------------------------------------------

struct Resistor {
    Ohms ohms = 1.0;
};

struct Capacitor {
    Farads farads = 1e-12;
    Volts initial = 0.0;
};

struct VoltageSource {
    SourceSpec spec = DcSource{};
};

// Piecewise-linear zener: off in (-v_z, v_f), slope 1/r_series outside.
struct Diode {
    Volts v_f = 0.7;
    Volts v_z = 15.0;
    Ohms r_series = 1.0;
};

struct Ots {
    OtsParams params;
};

// Ideal two-level comparator driving its output node (referenced to ground)
// through r_out. Terminals are (v_plus, v_minus, out).
struct Comparator {
    Volts v_out_high = 5.0;
    Volts v_out_low = 0.0;
    Ohms r_out = 50.0;
};

using ElementKind = std::variant<Resistor, Capacitor, VoltageSource, Diode, Ots, Comparator>;

struct Element {
    std::string name;
    ElementKind kind;
    std::vector<NodeIndex> nodes;  // two terminals, three for Comparator

    template <class T>
    [[nodiscard]] bool is() const { return std::holds_alternative<T>(kind); }
    template <class T>
    [[nodiscard]] const T& as() const { return std::get<T>(kind); }
    template <class T>
    [[nodiscard]] T& as() { return std::get<T>(kind); }
};

const char* element_letter(const Element& e);

// ---------------------------------------------------------------------------
// Netlist
// ---------------------------------------------------------------------------

/// Circuit graph. Node 0 is ground and is always named "0".
class Netlist {
public:
    Netlist();

    // Returns the existing index when the name is already known. "0", "gnd"
    // and "GND" all alias ground.
    NodeIndex node(const std::string& name);
    [[nodiscard]] std::optional<NodeIndex> find_node(const std::string& name) const;
    [[nodiscard]] const std::string& node_name(NodeIndex n) const { return node_names_.at(n); }
    [[nodiscard]] std::size_t node_count() const { return node_names_.size(); }
    [[nodiscard]] const std::vector<std::string>& node_names() const { return node_names_; }

    std::size_t add(Element e);
    std::size_t add_resistor(const std::string& name, NodeIndex a, NodeIndex b, Ohms r);
    std::size_t add_capacitor(const std::string& name, NodeIndex a, NodeIndex b, Farads c, Volts ic = 0.0);
    std::size_t add_source(const std::string& name, NodeIndex pos, NodeIndex neg, SourceSpec spec);
    std::size_t add_diode(const std::string& name, NodeIndex anode, NodeIndex cathode, Diode d = {});
    std::size_t add_ots(const std::string& name, NodeIndex a, NodeIndex b, const OtsParams& p);
    std::size_t add_comparator(const std::string& name, NodeIndex vp, NodeIndex vm, NodeIndex out,
                               Comparator c = {});

    [[nodiscard]] const std::vector<Element>& elements() const { return elements_; }
    [[nodiscard]] std::vector<Element>& elements() { return elements_; }
    [[nodiscard]] std::optional<std::size_t> find_element(const std::string& name) const;
    [[nodiscard]] const Element& element(const std::string& name) const;
    Element& element(const std::string& name);

    // Checks element values, terminal indices, unique names and that every
    // node is reachable from ground. Throws InvalidArgument.
    void validate() const;

    // Overwrites every Ots element's parameters.
    void set_ots_params(const OtsParams& p);

private:
    std::vector<std::string> node_names_;
    std::vector<Element> elements_;
};

}  // namespace otsim
