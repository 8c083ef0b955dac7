// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otsim Authors

#include "otsim_c.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "otsim/circuits.hpp"
#include "otsim/config.hpp"
#include "otsim/edge.hpp"
#include "otsim/energy.hpp"
#include "otsim/error.hpp"
#include "otsim/gates.hpp"
#include "otsim/image.hpp"
#include "otsim/parallel.hpp"
#include "otsim/spikes.hpp"

struct ots_config {
    otsim::RunConfig cfg;
};

struct ots_circuit {
    otsim::CircuitFile cf;
};

struct ots_trace {
    otsim::Trace tr;
};

namespace {

thread_local std::string g_last_error;

ots_status to_status(otsim::ErrorCode c) {
    using otsim::ErrorCode;
    switch (c) {
        case ErrorCode::InvalidArgument: return OTS_ERR_INVALID_ARGUMENT;
        case ErrorCode::Parse: return OTS_ERR_PARSE;
        case ErrorCode::Io: return OTS_ERR_IO;
        case ErrorCode::ImageHeader: return OTS_ERR_IMAGE_HEADER;
        case ErrorCode::ImageTruncated: return OTS_ERR_IMAGE_TRUNCATED;
        case ErrorCode::ImageMaxval: return OTS_ERR_IMAGE_MAXVAL;
        case ErrorCode::Convergence: return OTS_ERR_CONVERGENCE;
        case ErrorCode::Singular: return OTS_ERR_SINGULAR;
        case ErrorCode::NonFinite: return OTS_ERR_NON_FINITE;
        case ErrorCode::CheckFailed: return OTS_ERR_CHECK_FAILED;
    }
    return OTS_ERR_INTERNAL;
}

template <class F>
ots_status guarded(F&& f) {
    try {
        f();
        return OTS_OK;
    } catch (const otsim::Error& e) {
        g_last_error = e.what();
        return to_status(e.code());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return OTS_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return OTS_ERR_INTERNAL;
    }
}

void need(const void* p, const char* what) {
    if (p == nullptr) otsim::fail(otsim::ErrorCode::InvalidArgument, std::string(what) + " is NULL");
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) otsim::fail(otsim::ErrorCode::Io, "cannot write '" + path + "'");
    out << text;
    if (!out) otsim::fail(otsim::ErrorCode::Io, "write failed for '" + path + "'");
}

otsim::GateKind gate_kind(const char* name) {
    need(name, "gate kind");
    auto k = otsim::parse_gate_kind(name);
    if (!k) otsim::fail(otsim::ErrorCode::InvalidArgument, std::string("unknown gate kind '") + name + "'");
    return *k;
}

otsim::SpikeTrain oscillator_spikes(const otsim::RunConfig& c, double vin, double duration, otsim::Trace* keep) {
    const auto cf = otsim::build_oscillator(c.ots, otsim::DcSource{vin});
    const auto tr = otsim::transient(cf.net, duration, c.transient_options());
    const auto& probe = cf.probes.front();
    auto st = otsim::extract_spikes(std::span<const double>(probe.signal(tr)), tr.dt, probe.threshold, 2.0 * tr.dt);
    if (keep) *keep = tr;
    return st;
}

}  // namespace

extern "C" {

const char* ots_version(void) { return "0.1.0"; }

const char* ots_last_error(void) { return g_last_error.c_str(); }

const char* ots_status_name(ots_status s) {
    switch (s) {
        case OTS_OK: return "ok";
        case OTS_ERR_INVALID_ARGUMENT: return "invalid argument";
        case OTS_ERR_PARSE: return "parse error";
        case OTS_ERR_IO: return "i/o error";
        case OTS_ERR_IMAGE_HEADER: return "malformed image header";
        case OTS_ERR_IMAGE_TRUNCATED: return "truncated image";
        case OTS_ERR_IMAGE_MAXVAL: return "unsupported image maxval";
        case OTS_ERR_CONVERGENCE: return "convergence failure";
        case OTS_ERR_SINGULAR: return "singular circuit";
        case OTS_ERR_NON_FINITE: return "non-finite solution";
        case OTS_ERR_CHECK_FAILED: return "check failed";
        case OTS_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

void ots_string_free(char* s) { std::free(s); }

ots_status ots_parse_si(const char* text, double* value) {
    return guarded([&] {
        need(text, "text");
        need(value, "value");
        *value = otsim::parse_si(text);
    });
}

ots_status ots_config_create(ots_config** out) {
    return guarded([&] {
        need(out, "out");
        *out = new ots_config{};
    });
}

void ots_config_destroy(ots_config* cfg) { delete cfg; }

ots_status ots_config_set(ots_config* cfg, const char* key, const char* value) {
    return guarded([&] {
        need(cfg, "config");
        need(key, "key");
        need(value, "value");
        otsim::RunConfig next = cfg->cfg;
        next.set(key, value);
        next.validate();
        cfg->cfg = next;
    });
}

ots_status ots_config_load(ots_config* cfg, const char* path) {
    return guarded([&] {
        need(cfg, "config");
        need(path, "path");
        otsim::RunConfig next = cfg->cfg;
        next.load_file(path);
        cfg->cfg = next;
    });
}

ots_status ots_circuit_load(const ots_config* cfg, const char* path, ots_circuit** out) {
    return guarded([&] {
        need(cfg, "config");
        need(path, "path");
        need(out, "out");
        *out = new ots_circuit{otsim::load_circuit(path, cfg->cfg.ots)};
    });
}

ots_status ots_circuit_parse(const ots_config* cfg, const char* text, ots_circuit** out) {
    return guarded([&] {
        need(cfg, "config");
        need(text, "text");
        need(out, "out");
        *out = new ots_circuit{otsim::parse_circuit(text, cfg->cfg.ots)};
    });
}

ots_status ots_circuit_gate(const ots_config* cfg, const char* kind, ots_circuit** out) {
    return guarded([&] {
        need(cfg, "config");
        need(out, "out");
        *out = new ots_circuit{otsim::build_gate(gate_kind(kind), cfg->cfg.ots, cfg->cfg.gate).circuit};
    });
}

ots_status ots_circuit_oscillator(const ots_config* cfg, double vin, ots_circuit** out) {
    return guarded([&] {
        need(cfg, "config");
        need(out, "out");
        *out = new ots_circuit{otsim::build_oscillator(cfg->cfg.ots, otsim::DcSource{vin})};
    });
}

void ots_circuit_destroy(ots_circuit* c) { delete c; }

size_t ots_circuit_node_count(const ots_circuit* c) { return c ? c->cf.net.node_count() : 0; }

size_t ots_circuit_element_count(const ots_circuit* c) { return c ? c->cf.net.elements().size() : 0; }

ots_status ots_circuit_format(const ots_config* cfg, const ots_circuit* c, char** text) {
    return guarded([&] {
        need(cfg, "config");
        need(c, "circuit");
        need(text, "text");
        *text = dup_string(otsim::format_circuit(c->cf, cfg->cfg.ots));
    });
}

ots_status ots_transient(const ots_config* cfg, const ots_circuit* c, double t_stop, ots_trace** out) {
    return guarded([&] {
        need(cfg, "config");
        need(c, "circuit");
        need(out, "out");
        *out = new ots_trace{otsim::transient(c->cf.net, t_stop, cfg->cfg.transient_options())};
    });
}

void ots_trace_destroy(ots_trace* t) { delete t; }

size_t ots_trace_samples(const ots_trace* t) { return t ? t->tr.samples : 0; }

double ots_trace_dt(const ots_trace* t) { return t ? t->tr.dt : 0.0; }

double ots_trace_max_residual(const ots_trace* t) { return t ? t->tr.max_residual : 0.0; }

ots_status ots_trace_voltage(const ots_trace* t, const char* node, const double** data, size_t* n) {
    return guarded([&] {
        need(t, "trace");
        need(node, "node");
        need(data, "data");
        need(n, "n");
        const auto& names = t->tr.node_names;
        for (std::size_t i = 1; i < names.size(); ++i)
            if (names[i] == node) {
                const auto& v = t->tr.voltage(i);
                *data = v.data();
                *n = v.size();
                return;
            }
        otsim::fail(otsim::ErrorCode::InvalidArgument, std::string("no node named '") + node + "'");
    });
}

ots_status ots_trace_write_csv(const ots_trace* t, const char* path) {
    return guarded([&] {
        need(t, "trace");
        need(path, "path");
        otsim::write_trace_csv(t->tr, path);
    });
}

ots_status ots_cmd_iv(const ots_config* cfg, const char* netlist_path, double peak, double rise,
                      const char* out_csv, int* snapback) {
    return guarded([&] {
        need(cfg, "config");
        need(out_csv, "output path");
        const auto& c = cfg->cfg;
        otsim::CircuitFile cf = netlist_path ? otsim::load_circuit(netlist_path, c.ots)
                                             : otsim::build_oscillator(c.ots, otsim::DcSource{0.0});
        std::size_t src = SIZE_MAX, dev = SIZE_MAX;
        const auto& els = cf.net.elements();
        for (std::size_t i = 0; i < els.size(); ++i) {
            if (els[i].is<otsim::VoltageSource>() && src == SIZE_MAX) src = i;
            if (els[i].is<otsim::Ots>() && dev == SIZE_MAX) dev = i;
        }
        if (!cf.inputs.empty()) src = *cf.net.find_element(cf.inputs.front());
        otsim::require(src != SIZE_MAX, "netlist has no voltage source to ramp");
        otsim::require(dev != SIZE_MAX, "netlist has no OTS");
        const auto iv = otsim::dynamic_iv(cf.net, src, otsim::TriangleSource{peak, rise, rise}, dev,
                                          c.transient_options());
        std::ostringstream os;
        os << "v,i\n";
        for (const auto& p : iv) os << otsim::format_full(p.v) << ',' << otsim::format_full(p.i) << '\n';
        write_text(out_csv, os.str());
        if (snapback) *snapback = otsim::has_snapback(iv) ? 1 : 0;
    });
}

ots_status ots_cmd_oscillate(const ots_config* cfg, double vin, double duration, const char* out_csv,
                             size_t* spikes, double* rate_hz) {
    return guarded([&] {
        need(cfg, "config");
        otsim::Trace tr;
        const auto st = oscillator_spikes(cfg->cfg, vin, duration, out_csv ? &tr : nullptr);
        if (out_csv) otsim::write_trace_csv(tr, out_csv);
        if (spikes) *spikes = st.spike_times.size();
        if (rate_hz) *rate_hz = otsim::interval_rate(st);
    });
}

ots_status ots_cmd_oscillate_sweep(const ots_config* cfg, double v0, double v1, size_t steps, double duration,
                                   const char* out_csv, int* strictly_increasing) {
    return guarded([&] {
        need(cfg, "config");
        need(out_csv, "output path");
        otsim::require(steps >= 2, "sweep needs at least 2 steps");
        otsim::require(v1 > v0, "sweep needs v1 > v0");
        std::ostringstream os;
        os << "v_in,rate_hz\n";
        bool inc = true;
        double prev = -1.0;
        for (std::size_t k = 0; k < steps; ++k) {
            const double v = v0 + (v1 - v0) * static_cast<double>(k) / static_cast<double>(steps - 1);
            const double r = otsim::interval_rate(oscillator_spikes(cfg->cfg, v, duration, nullptr));
            if (k > 0 && !(r > prev)) inc = false;
            prev = r;
            os << otsim::format_full(v) << ',' << otsim::format_full(r) << '\n';
        }
        write_text(out_csv, os.str());
        if (strictly_increasing) *strictly_increasing = inc ? 1 : 0;
    });
}

ots_status ots_cmd_gate_table(const ots_config* cfg, const char* kind, char** json, int* all_match) {
    return guarded([&] {
        need(cfg, "config");
        const auto& c = cfg->cfg;
        const auto tt = otsim::truth_table(gate_kind(kind), c.encoding, c.ots, c.gate_settings(), c.jobs);
        if (json) *json = dup_string(tt.to_json());
        if (all_match) *all_match = tt.all_match() ? 1 : 0;
    });
}

ots_status ots_cmd_gate_eval(const ots_config* cfg, const char* kind, const int* inputs, size_t n_inputs,
                             const char* waveform_csv, char** json, int* match) {
    return guarded([&] {
        need(cfg, "config");
        need(inputs, "inputs");
        const auto& c = cfg->cfg;
        const auto k = gate_kind(kind);
        const std::vector<int> in(inputs, inputs + n_inputs);
        const auto expected = otsim::expected_outputs(k, in);
        const auto run = otsim::run_gate(otsim::build_gate(k, c.ots, c.gate), in, c.encoding, c.gate_settings());
        if (waveform_csv) otsim::write_trace_csv(run.trace, waveform_csv);
        otsim::TruthTable tt{k, {{in, expected, run.outputs, run.spikes}}, run.trace.max_residual};
        if (json) *json = dup_string(tt.to_json());
        if (match) *match = tt.all_match() ? 1 : 0;
    });
}

ots_status ots_cmd_edge(const ots_config* cfg, const char* in_path, const char* out_pgm, int oracle_check,
                        const char* report_json, size_t* mismatches, size_t* pixels) {
    return guarded([&] {
        need(cfg, "config");
        need(in_path, "input path");
        need(out_pgm, "output path");
        const auto& c = cfg->cfg;
        const auto gray = otsim::as_gray(otsim::load_image(in_path));
        const int thr = c.otsu ? otsim::otsu_threshold(gray) : c.binarize_threshold;
        const auto bin = otsim::binarize(gray, thr);
        const auto res = otsim::detect_edges(bin, c.encoding, c.ots, c.stream_settings());
        otsim::save_pgm(otsim::to_pgm_levels(res.edges), out_pgm);
        const std::size_t total = bin.bits.size();
        std::size_t bad = 0;
        if (oracle_check) {
            const auto mm = otsim::mismatches(res.edges, otsim::reference_edges(bin));
            bad = mm.size();
            if (report_json) write_text(report_json, otsim::mismatch_report_json(mm, total) + "\n");
        }
        if (mismatches) *mismatches = bad;
        if (pixels) *pixels = total;
    });
}

ots_status ots_cmd_gradient(const ots_config* cfg, const int* delta_c, size_t n, const char* out_csv, int fit,
                            double* slope, double* floor_c, double* r2) {
    return guarded([&] {
        need(cfg, "config");
        need(delta_c, "delta_c");
        need(out_csv, "output path");
        otsim::require(n >= 1, "gradient sweep is empty");
        const auto& c = cfg->cfg;
        std::vector<otsim::GradientSample> samples(n);
        const auto gs = c.gradient_settings();
        otsim::parallel_for(n, c.jobs, [&](std::size_t i) {
            samples[i] = otsim::gradient_rate(delta_c[i], 0, c.encoding, c.ots, gs);
        });
        std::ostringstream os;
        os << "delta_c,rate_hz\n";
        for (const auto& s : samples) os << otsim::format_full(s.delta_c) << ',' << otsim::format_full(s.rate) << '\n';
        if (fit) {
            const auto f = otsim::fit_linear(samples);
            os << "# slope_hz_per_unit," << otsim::format_full(f.slope) << '\n';
            os << "# floor," << otsim::format_full(f.floor) << '\n';
            os << "# r2," << otsim::format_full(f.r2) << '\n';
            if (slope) *slope = f.slope;
            if (floor_c) *floor_c = f.floor;
            if (r2) *r2 = f.r2;
        }
        write_text(out_csv, os.str());
    });
}

ots_status ots_cmd_energy(const ots_config* cfg, uint64_t width, uint64_t height, double node_m, char** text,
                          char** json) {
    return guarded([&] {
        need(cfg, "config");
        const auto r = otsim::scaled_report(width, height, node_m, cfg->cfg.exponent);
        if (text) *text = dup_string(r.to_text());
        if (json) *json = dup_string(r.to_json() + "\n");
    });
}

ots_status ots_seed_circuits(const ots_config* cfg, const char* dir) {
    return guarded([&] {
        need(cfg, "config");
        need(dir, "dir");
        const auto& c = cfg->cfg;
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) otsim::fail(otsim::ErrorCode::Io, std::string("cannot create '") + dir + "': " + ec.message());
        const std::filesystem::path base(dir);
        for (auto k : otsim::kAllGates)
            otsim::save_circuit(otsim::build_gate(k, c.ots, c.gate).circuit,
                                (base / (std::string(otsim::gate_name(k)) + ".net")).string(), c.ots);
        otsim::save_circuit(otsim::build_oscillator(c.ots, otsim::DcSource{10.0}),
                            (base / "oscillator.net").string(), c.ots);
    });
}

}  // extern "C"
