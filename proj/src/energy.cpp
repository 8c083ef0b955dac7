// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otsim Authors

#include "otsim/energy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "otsim/error.hpp"

namespace otsim {

namespace {

const char* method_name(EdgeMethod m) { return m == EdgeMethod::Xor ? "xor" : "sobel3x3"; }

const char* source_name(EnergySource s) {
    switch (s) {
        case EnergySource::Simulated: return "simulated";
        case EnergySource::Cited: return "cited";
        case EnergySource::Scaled: return "scaled";
    }
    return "";
}

// Sample index range covering [t0, t1].
std::pair<std::size_t, std::size_t> sample_range(const Trace& tr, Seconds t0, Seconds t1) {
    require(t0 >= 0.0 && t1 > t0, "integration bounds must satisfy 0 <= t0 < t1");
    require(t1 <= tr.duration() + 0.5 * tr.dt, "integration bounds exceed the trace");
    const auto k0 = static_cast<std::size_t>(std::llround(t0 / tr.dt));
    const auto k1 = std::min(static_cast<std::size_t>(std::llround(t1 / tr.dt)), tr.samples - 1);
    require(k1 > k0, "integration interval shorter than one timestep");
    return {k0, k1};
}

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

}  // namespace

void ScalingLaw::validate() const {
    require(exponent >= 1.6 && exponent <= 2.1, "scaling exponent must lie in [1.6, 2.1]");
    require(reference_size > 0.0, "reference size must be > 0");
    require(reference_energy > 0.0, "reference energy must be > 0");
}

Joules integrate_power(const Trace& tr, std::size_t element, Seconds t0, Seconds t1) {
    const std::size_t slot = tr.current_slot(element);
    const auto [k0, k1] = sample_range(tr, t0, t1);
    const auto [a, b] = tr.current_terminals[slot];
    const auto v = tr.differential(a, b);
    const auto& i = tr.branch_currents[slot];
    Joules e = 0.0;
    for (std::size_t k = k0; k < k1; ++k) e += 0.5 * tr.dt * (v[k] * i[k] + v[k + 1] * i[k + 1]);
    return e;
}

Joules spike_energy(const Trace& tr, std::size_t element, Seconds t0, Seconds t1, Amperes current_threshold) {
    require(current_threshold > 0.0, "spike current threshold must be > 0");
    const std::size_t slot = tr.current_slot(element);
    const auto [k0, k1] = sample_range(tr, t0, t1);
    const auto& i = tr.branch_currents[slot];
    std::size_t spikes = 0;
    bool inside = false;
    for (std::size_t k = k0; k <= k1; ++k) {
        const bool above = std::abs(i[k]) >= current_threshold;
        if (above && !inside) ++spikes;
        inside = above;
    }
    if (spikes != 1)
        fail(ErrorCode::InvalidArgument, "integration bounds contain " + std::to_string(spikes) +
                                             " spikes, expected exactly one");
    return integrate_power(tr, element, t0, t1);
}

std::uint64_t xor_op_count(std::uint64_t width, std::uint64_t height) {
    require(width >= 1 && height >= 1, "image dimensions must be >= 1");
    return width * height * 2;
}

std::uint64_t sobel_op_count(std::uint64_t width, std::uint64_t height) {
    require(width >= 1 && height >= 1, "image dimensions must be >= 1");
    return width * height * 9 * 2;
}

Joules scale_energy(const ScalingLaw& law, Meters d_target) {
    law.validate();
    require(d_target > 0.0, "target feature size must be > 0");
    return law.reference_energy * std::pow(d_target / law.reference_size, law.exponent);
}

EnergyRow make_row(std::string label, Joules per_op, std::uint64_t ops, EdgeMethod m, EnergySource s) {
    require(ops > 0, "op count must be > 0");
    require(per_op >= 0.0, "energy per op must be >= 0");
    return {std::move(label), per_op, ops, per_op * static_cast<double>(ops), m, s};
}

EnergyReport table1_report(std::uint64_t width, std::uint64_t height) {
    const auto sobel = sobel_op_count(width, height);
    const auto xr = xor_op_count(width, height);
    EnergyReport r;
    r.rows.push_back(make_row("NVIDIA K20", 290e-12, sobel, EdgeMethod::Sobel3x3, EnergySource::Cited));
    r.rows.push_back(make_row("NVIDIA V100", 75e-12, sobel, EdgeMethod::Sobel3x3, EnergySource::Cited));
    r.rows.push_back(make_row("NVIDIA H100", 20e-12, sobel, EdgeMethod::Sobel3x3, EnergySource::Cited));
    r.rows.push_back(make_row("Intel Xeon E5-2650", 2071e-12, sobel, EdgeMethod::Sobel3x3, EnergySource::Cited));
    r.rows.push_back(make_row("OTS XOR (6 um)", 467e-12, xr, EdgeMethod::Xor, EnergySource::Cited));
    return r;
}

EnergyReport scaled_report(std::uint64_t width, std::uint64_t height, Meters d_target, double exponent) {
    EnergyReport r = table1_report(width, height);
    ScalingLaw law;
    law.exponent = exponent;
    const Joules e = scale_energy(law, d_target);
    const auto xr = xor_op_count(width, height);
    char label[64];
    std::snprintf(label, sizeof label, "OTS XOR scaled (%g nm)", d_target * 1e9);
    r.rows.push_back(make_row(label, e, xr, EdgeMethod::Xor, EnergySource::Scaled));

    const double printed_per_op = 0.356e-12;
    const double printed_total = 0.0032e-6;
    const double text_total = 3.2e-9;
    r.notes.push_back("scaled row: 467 pJ x (" + fixed(d_target * 1e9, 0) + " nm / 6 um)^" + fixed(exponent, 2) +
                      " = " + fixed(e * 1e12, 4) + " pJ/op");
    r.notes.push_back("published scaled cell prints " + fixed(printed_per_op * 1e12, 3) + " pJ/op and " +
                      fixed(printed_total * 1e6, 4) + " uJ total; these disagree with each other");
    r.notes.push_back(fixed(printed_per_op * 1e12, 3) + " pJ x " + std::to_string(xr) + " ops = " +
                      fixed(printed_per_op * static_cast<double>(xr) * 1e6, 3) + " uJ");
    r.notes.push_back("the quoted " + fixed(text_total * 1e9, 1) + " nJ total matches neither derivation");
    return r;
}

std::string EnergyReport::to_json() const {
    nlohmann::ordered_json j;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
        nlohmann::ordered_json o;
        o["label"] = row.label;
        o["energy_per_op_pj"] = row.energy_per_op * 1e12;
        o["op_count"] = row.op_count;
        o["total_uj"] = row.total * 1e6;
        o["method"] = method_name(row.method);
        o["source"] = source_name(row.source);
        j["rows"].push_back(o);
    }
    j["notes"] = notes;
    return j.dump(2);
}

std::string EnergyReport::to_text() const {
    const char* head[] = {"Device", "Method", "Energy/op (pJ)", "Operations", "Total (uJ)", "Source"};
    std::vector<std::array<std::string, 6>> cells;
    for (const auto& row : rows) {
        const double pj = row.energy_per_op * 1e12;
        cells.push_back({row.label, method_name(row.method), fixed(pj, pj < 1.0 ? 4 : 0),
                         std::to_string(row.op_count), fixed(row.total * 1e6, row.total < 1e-6 ? 4 : 0),
                         source_name(row.source)});
    }
    std::array<std::size_t, 6> w{};
    for (std::size_t c = 0; c < 6; ++c) {
        w[c] = std::string(head[c]).size();
        for (const auto& r : cells) w[c] = std::max(w[c], r[c].size());
    }
    std::ostringstream os;
    auto line = [&](const std::array<std::string, 6>& r) {
        for (std::size_t c = 0; c < 6; ++c) {
            const bool right = c >= 2 && c <= 4;
            const std::string pad(w[c] - r[c].size(), ' ');
            os << (right ? pad + r[c] : r[c] + pad) << (c + 1 < 6 ? "  " : "\n");
        }
    };
    line({head[0], head[1], head[2], head[3], head[4], head[5]});
    std::size_t total_w = 10;
    for (auto x : w) total_w += x;
    os << std::string(total_w, '-') << '\n';
    for (const auto& r : cells) line(r);
    for (const auto& n : notes) os << "note: " << n << '\n';
    return os.str();
}

}  // namespace otsim
