// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otsim Authors

#include "otsim/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "otsim/energy.hpp"
#include "otsim/error.hpp"

namespace otsim {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double integer(const std::string& key, const std::string& value, double lo) {
    const double v = parse_si(value);
    if (v != std::floor(v) || v < lo || v > 1e9)
        fail(ErrorCode::InvalidArgument, key + " must be an integer >= " + format_full(lo));
    return v;
}

bool boolean(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    fail(ErrorCode::InvalidArgument, key + " must be true or false");
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> t;
        auto num = [&](const char* key, auto member) {
            t[key] = [member](RunConfig& c, const std::string&, const std::string& v) { member(c) = parse_si(v); };
        };
        num("ots.v_th", [](RunConfig& c) -> double& { return c.ots.v_th; });
        num("ots.v_hold", [](RunConfig& c) -> double& { return c.ots.v_hold; });
        num("ots.r_on", [](RunConfig& c) -> double& { return c.ots.r_on; });
        num("ots.g_off", [](RunConfig& c) -> double& { return c.ots.g_off; });
        num("ots.i_hold", [](RunConfig& c) -> double& { return c.ots.i_hold; });
        num("ots.tau_on", [](RunConfig& c) -> double& { return c.ots.tau_on; });
        num("ots.tau_off", [](RunConfig& c) -> double& { return c.ots.tau_off; });
        num("solver.dt", [](RunConfig& c) -> double& { return c.dt; });
        num("solver.logic_dt", [](RunConfig& c) -> double& { return c.logic_dt; });
        num("solver.residual_tol", [](RunConfig& c) -> double& { return c.residual_tol; });
        num("encoding.v_high", [](RunConfig& c) -> double& { return c.encoding.v_high; });
        num("encoding.bit_width", [](RunConfig& c) -> double& { return c.encoding.bit_width; });
        num("encoding.settle", [](RunConfig& c) -> double& { return c.encoding.settle; });
        num("energy.exponent", [](RunConfig& c) -> double& { return c.exponent; });
        num("halfadder.c2", [](RunConfig& c) -> double& { return c.gate.half_adder_c2; });
        num("halfadder.c3", [](RunConfig& c) -> double& { return c.gate.half_adder_c3; });
        num("gradient.window", [](RunConfig& c) -> double& { return c.gradient_window; });
        num("gradient.dt", [](RunConfig& c) -> double& { return c.gradient_dt; });
        t["solver.max_newton_iterations"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            c.max_newton_iterations = static_cast<int>(integer(k, v, 1));
        };
        t["pipeline.threshold"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            c.binarize_threshold = static_cast<int>(integer(k, v, 0));
        };
        t["pipeline.otsu"] = [](RunConfig& c, const std::string& k, const std::string& v) { c.otsu = boolean(k, v); };
        t["pipeline.spike_count_threshold"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            c.spike_count_threshold = static_cast<std::size_t>(integer(k, v, 1));
        };
        t["pipeline.segment_size"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            c.segment_size = static_cast<std::size_t>(integer(k, v, 1));
        };
        t["pipeline.jobs"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            c.jobs = static_cast<unsigned>(integer(k, v, 1));
        };
        return t;
    }();
    return table;
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
    const auto it = setters().find(key);
    if (it == setters().end()) fail(ErrorCode::InvalidArgument, "unknown config key '" + key + "'");
    it->second(*this, key, value);
}

void RunConfig::load_text(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    std::size_t no = 0;
    while (std::getline(is, line)) {
        ++no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        try {
            if (eq == std::string::npos) fail(ErrorCode::Parse, "expected key = value");
            set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const Error& e) {
            fail(ErrorCode::Parse, "line " + std::to_string(no) + ": " + e.what());
        }
    }
    validate();
}

void RunConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::Io, "cannot open config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        load_text(ss.str());
    } catch (const Error& e) {
        fail(e.code(), path + ": " + e.what());
    }
}

void RunConfig::validate() const {
    ots.validate();
    encoding.validate();
    require(dt > 0.0 && logic_dt > 0.0 && gradient_dt > 0.0, "timesteps must be > 0");
    require(residual_tol > 0.0, "residual tolerance must be > 0");
    require(max_newton_iterations >= 1, "max_newton_iterations must be >= 1");
    require(binarize_threshold >= 0 && binarize_threshold <= 255, "pipeline.threshold must be in [0, 255]");
    require(gate.half_adder_c2 > 0.0 && gate.half_adder_c3 > 0.0, "half adder capacitors must be > 0");
    require(gradient_window > 0.0, "gradient window must be > 0");
    ScalingLaw law;
    law.exponent = exponent;
    law.validate();
}

const std::vector<std::string>& RunConfig::keys() {
    static const std::vector<std::string> k = [] {
        std::vector<std::string> out;
        for (const auto& [name, _] : setters()) out.push_back(name);
        return out;
    }();
    return k;
}

GateSimSettings RunConfig::gate_settings() const {
    return {logic_dt, max_newton_iterations, residual_tol, gate};
}

StreamSettings RunConfig::stream_settings() const {
    StreamSettings s;
    s.dt = logic_dt;
    s.spike_count_threshold = spike_count_threshold;
    s.segment_size = segment_size;
    s.jobs = jobs;
    s.max_newton_iterations = max_newton_iterations;
    s.residual_tol = residual_tol;
    return s;
}

GradientSettings RunConfig::gradient_settings() const {
    return {gradient_window, gradient_dt, max_newton_iterations, residual_tol};
}

TransientOptions RunConfig::transient_options() const {
    TransientOptions o;
    o.dt = dt;
    o.max_newton_iterations = max_newton_iterations;
    o.residual_tol = residual_tol;
    return o;
}

}  // namespace otsim
