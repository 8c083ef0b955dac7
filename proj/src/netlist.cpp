// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otsim Authors

#include "otsim/netlist.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

#include "otsim/error.hpp"

namespace otsim {

// ---------------------------------------------------------------------------
// Sources
// ---------------------------------------------------------------------------

namespace {

struct SourceEval {
    Seconds t;
    Volts operator()(const DcSource& s) const { return s.value; }
    Volts operator()(const PwlSource& s) const {
        const auto& pts = s.points;
        if (pts.empty()) return 0.0;
        if (t <= pts.front().first) return pts.front().second;
        if (t >= pts.back().first) return pts.back().second;
        auto hi = std::upper_bound(pts.begin(), pts.end(), t,
                                   [](Seconds v, const auto& p) { return v < p.first; });
        auto lo = hi - 1;
        const double f = (t - lo->first) / (hi->first - lo->first);
        return lo->second + f * (hi->second - lo->second);
    }
    Volts operator()(const PulseSource& s) const {
        if (t < s.delay) return s.v_low;
        const double rel = t - s.delay;
        const double k = std::floor(rel / s.period);
        if (s.repeat != 0 && k >= static_cast<double>(s.repeat)) return s.v_low;
        const double phase = rel - k * s.period;
        return phase < s.width ? s.v_high : s.v_low;
    }
    Volts operator()(const TriangleSource& s) const {
        if (t <= 0.0) return 0.0;
        if (t < s.t_rise) return s.v_peak * t / s.t_rise;
        const double down = t - s.t_rise;
        if (down < s.t_fall) return s.v_peak * (1.0 - down / s.t_fall);
        return 0.0;
    }
};

struct SourceCheck {
    void operator()(const DcSource& s) const { require(std::isfinite(s.value), "DC value must be finite"); }
    void operator()(const PwlSource& s) const {
        require(!s.points.empty(), "PWL source needs at least one point");
        for (std::size_t i = 1; i < s.points.size(); ++i)
            require(s.points[i].first > s.points[i - 1].first, "PWL times must be strictly increasing");
    }
    void operator()(const PulseSource& s) const {
        require(s.width > 0.0 && s.period > 0.0, "pulse width and period must be > 0");
        require(s.width < s.period, "pulse width must be shorter than its period");
        require(s.delay >= 0.0, "pulse delay must be >= 0");
    }
    void operator()(const TriangleSource& s) const {
        require(s.t_rise > 0.0 && s.t_fall > 0.0, "triangle rise/fall must be > 0");
    }
};

}  // namespace

Volts source_value(const SourceSpec& s, Seconds t) { return std::visit(SourceEval{t}, s); }

void validate_source(const SourceSpec& s) { std::visit(SourceCheck{}, s); }

const char* element_letter(const Element& e) {
    switch (e.kind.index()) {
        case 0: return "R";
        case 1: return "C";
        case 2: return "V";
        case 3: return "D";
        case 4: return "OTS";
        default: return "CMP";
    }
}

// ---------------------------------------------------------------------------
// Netlist
// ---------------------------------------------------------------------------

Netlist::Netlist() : node_names_{"0"} {}

NodeIndex Netlist::node(const std::string& name) {
    if (auto n = find_node(name)) return *n;
    require(!name.empty(), "empty node name");
    node_names_.push_back(name);
    return node_names_.size() - 1;
}

std::optional<NodeIndex> Netlist::find_node(const std::string& name) const {
    if (name == "0" || name == "gnd" || name == "GND") return kGround;
    for (std::size_t i = 1; i < node_names_.size(); ++i)
        if (node_names_[i] == name) return i;
    return std::nullopt;
}

std::size_t Netlist::add(Element e) {
    elements_.push_back(std::move(e));
    return elements_.size() - 1;
}

std::size_t Netlist::add_resistor(const std::string& name, NodeIndex a, NodeIndex b, Ohms r) {
    return add({name, Resistor{r}, {a, b}});
}

std::size_t Netlist::add_capacitor(const std::string& name, NodeIndex a, NodeIndex b, Farads c, Volts ic) {
    return add({name, Capacitor{c, ic}, {a, b}});
}

std::size_t Netlist::add_source(const std::string& name, NodeIndex pos, NodeIndex neg, SourceSpec spec) {
    return add({name, VoltageSource{std::move(spec)}, {pos, neg}});
}

std::size_t Netlist::add_diode(const std::string& name, NodeIndex anode, NodeIndex cathode, Diode d) {
    return add({name, d, {anode, cathode}});
}

std::size_t Netlist::add_ots(const std::string& name, NodeIndex a, NodeIndex b, const OtsParams& p) {
    return add({name, Ots{p}, {a, b}});
}

std::size_t Netlist::add_comparator(const std::string& name, NodeIndex vp, NodeIndex vm, NodeIndex out,
                                    Comparator c) {
    return add({name, c, {vp, vm, out}});
}

std::optional<std::size_t> Netlist::find_element(const std::string& name) const {
    for (std::size_t i = 0; i < elements_.size(); ++i)
        if (elements_[i].name == name) return i;
    return std::nullopt;
}

const Element& Netlist::element(const std::string& name) const {
    auto i = find_element(name);
    if (!i) fail(ErrorCode::InvalidArgument, "no element named '" + name + "'");
    return elements_[*i];
}

Element& Netlist::element(const std::string& name) {
    auto i = find_element(name);
    if (!i) fail(ErrorCode::InvalidArgument, "no element named '" + name + "'");
    return elements_[*i];
}

void Netlist::set_ots_params(const OtsParams& p) {
    for (auto& e : elements_)
        if (e.is<Ots>()) e.as<Ots>().params = p;
}

namespace {

struct ValueCheck {
    const std::string& name;
    void operator()(const Resistor& r) const { require(r.ohms > 0.0, name + ": resistance must be > 0"); }
    void operator()(const Capacitor& c) const { require(c.farads > 0.0, name + ": capacitance must be > 0"); }
    void operator()(const VoltageSource& v) const { validate_source(v.spec); }
    void operator()(const Diode& d) const {
        require(d.v_f > 0.0 && d.v_z > 0.0, name + ": diode v_f and v_z must be > 0");
        require(d.r_series > 0.0, name + ": diode r_series must be > 0");
    }
    void operator()(const Ots& o) const { o.params.validate(); }
    void operator()(const Comparator& c) const {
        require(c.v_out_high > c.v_out_low, name + ": comparator needs v_out_high > v_out_low");
        require(c.r_out > 0.0, name + ": comparator r_out must be > 0");
    }
};

}  // namespace

void Netlist::validate() const {
    const std::size_t n = node_names_.size();
    std::set<std::string> names;
    std::vector<std::vector<NodeIndex>> adj(n);
    for (const auto& e : elements_) {
        require(!e.name.empty(), "element without a name");
        require(names.insert(e.name).second, "duplicate element name '" + e.name + "'");
        const std::size_t want = e.is<Comparator>() ? 3 : 2;
        require(e.nodes.size() == want, e.name + ": wrong terminal count");
        for (NodeIndex t : e.nodes) require(t < n, e.name + ": terminal references unknown node");
        std::visit(ValueCheck{e.name}, e.kind);
        for (std::size_t i = 0; i < e.nodes.size(); ++i)
            for (std::size_t j = 0; j < e.nodes.size(); ++j)
                if (i != j) adj[e.nodes[i]].push_back(e.nodes[j]);
        // A comparator output is driven against ground.
        if (e.is<Comparator>()) {
            adj[e.nodes[2]].push_back(kGround);
            adj[kGround].push_back(e.nodes[2]);
        }
    }
    std::vector<bool> seen(n, false);
    std::queue<NodeIndex> q;
    q.push(kGround);
    seen[kGround] = true;
    while (!q.empty()) {
        NodeIndex u = q.front();
        q.pop();
        for (NodeIndex v : adj[u])
            if (!seen[v]) {
                seen[v] = true;
                q.push(v);
            }
    }
    for (std::size_t i = 0; i < n; ++i)
        require(seen[i], "node '" + node_names_[i] + "' is floating (not connected to ground)");
}

}  // namespace otsim
