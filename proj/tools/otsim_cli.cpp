// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otsim Authors

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "otsim_c.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheck = 1;
constexpr int kExitInput = 2;

struct Failure {
    int code;
    std::string message;
};

void check(ots_status s) {
    if (s == OTS_OK) return;
    throw Failure{s == OTS_ERR_CHECK_FAILED ? kExitCheck : kExitInput,
                  std::string(ots_status_name(s)) + ": " + ots_last_error()};
}

double si(const std::string& text, const char* flag) {
    double v = 0.0;
    if (ots_parse_si(text.c_str(), &v) != OTS_OK)
        throw Failure{kExitInput, std::string(flag) + ": " + ots_last_error()};
    return v;
}

struct CString {
    char* p = nullptr;
    ~CString() { ots_string_free(p); }
};

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw Failure{kExitInput, "cannot write '" + path + "'"};
}

std::vector<int> parse_bits(const std::string& s) {
    std::vector<int> bits;
    for (char c : s) {
        if (c == '0' || c == '1') bits.push_back(c - '0');
        else if (c != ',' && c != ' ') throw Failure{kExitInput, "--inputs: expected bits like 101 or 1,0,1"};
    }
    return bits;
}

std::vector<int> parse_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw Failure{kExitInput, "--sweep: bad contrast value '" + item + "'"};
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"otsim: ovonic threshold switch circuit simulator"};
    app.require_subcommand(0, 1);

    std::string config_path, seed_dir;
    std::vector<std::string> overrides;
    unsigned jobs = 0;
    app.add_option("--config", config_path, "key = value run configuration file");
    app.add_option("--set", overrides, "override a config key (key=value), repeatable");
    app.add_option("--jobs", jobs, "worker threads for rows and segments");
    app.add_option("--seed-circuits", seed_dir, "write every built-in circuit template to DIR and exit");

    auto* iv = app.add_subcommand("iv", "triangle-ramp I-V sweep of a single OTS");
    std::string iv_netlist, iv_peak = "6", iv_rise = "100u", iv_out;
    bool iv_default = false;
    auto* iv_net_opt = iv->add_option("--netlist", iv_netlist, "circuit file with one source and one OTS");
    iv->add_flag("--default", iv_default, "use the built-in oscillator circuit")->excludes(iv_net_opt);
    iv->add_option("--peak", iv_peak, "ramp peak voltage");
    iv->add_option("--rise", iv_rise, "ramp rise (and fall) time");
    iv->add_option("--out", iv_out, "output CSV (v,i)")->required();

    auto* osc = app.add_subcommand("oscillate", "self-oscillation of the measurement circuit");
    std::string osc_vin = "10", osc_duration = "200u", osc_out, osc_sweep;
    osc->add_option("--vin", osc_vin, "DC bias");
    osc->add_option("--duration", osc_duration, "simulated time");
    osc->add_option("--out", osc_out, "trace CSV, or rate CSV with --sweep");
    osc->add_option("--sweep", osc_sweep, "v0:v1:steps rate sweep");

    auto* gate = app.add_subcommand("gate", "evaluate a logic circuit template");
    std::string gate_kind, gate_inputs, gate_json, gate_wave;
    bool gate_table = false;
    gate->add_option("--kind", gate_kind, "and|or|nor|nand|xor|half_adder|full_adder|dcaap")->required();
    auto* table_opt = gate->add_flag("--table", gate_table, "all input combinations");
    gate->add_option("--inputs", gate_inputs, "one input row, e.g. 10")->excludes(table_opt);
    gate->add_option("--json", gate_json, "write the truth table JSON here (default stdout)");
    gate->add_option("--waveforms", gate_wave, "waveform CSV for an --inputs run");

    auto* edge = app.add_subcommand("edge", "XOR-circuit edge detection on a P5/P6 image");
    std::string edge_in, edge_out, edge_report;
    int edge_threshold = -1;
    bool edge_oracle = false, edge_otsu = false;
    edge->add_option("--in", edge_in, "input image")->required();
    edge->add_option("--out", edge_out, "edge map (P5)")->required();
    edge->add_option("--threshold", edge_threshold, "binarization threshold 0..255")->check(CLI::Range(0, 255));
    edge->add_flag("--otsu", edge_otsu, "pick the binarization threshold by Otsu's method");
    edge->add_flag("--oracle-check", edge_oracle, "compare against the software reference");
    edge->add_option("--report", edge_report, "mismatch report JSON (with --oracle-check)");

    auto* grad = app.add_subcommand("gradient", "firing rate versus contrast difference");
    std::string grad_sweep = "0,16,32,48,64,80,96,112,128,144,160,176,192,208,224,240,255", grad_out;
    bool grad_fit = false;
    grad->add_option("--sweep", grad_sweep, "comma-separated contrast differences");
    grad->add_option("--out", grad_out, "output CSV (delta_c,rate_hz)")->required();
    grad->add_flag("--fit", grad_fit, "append the linear fit");

    auto* energy = app.add_subcommand("energy", "energy per image comparison");
    std::uint64_t en_w = 512, en_h = 512;
    std::string en_node = "16n", en_exp, en_json;
    energy->add_option("--width", en_w, "image width")->check(CLI::PositiveNumber);
    energy->add_option("--height", en_h, "image height")->check(CLI::PositiveNumber);
    energy->add_option("--node", en_node, "target feature size (m), e.g. 16n");
    energy->add_option("--exponent", en_exp, "scaling exponent n");
    energy->add_option("--json", en_json, "write the report as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    ots_config* raw = nullptr;
    if (ots_config_create(&raw) != OTS_OK) {
        std::cerr << "error: " << ots_last_error() << '\n';
        return kExitInput;
    }
    std::unique_ptr<ots_config, decltype(&ots_config_destroy)> cfg(raw, ots_config_destroy);

    try {
        // Precedence: flags > config file > defaults.
        if (!config_path.empty()) check(ots_config_load(cfg.get(), config_path.c_str()));
        for (const auto& kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw Failure{kExitInput, "--set expects key=value, got '" + kv + "'"};
            check(ots_config_set(cfg.get(), kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()));
        }
        if (jobs != 0) check(ots_config_set(cfg.get(), "pipeline.jobs", std::to_string(jobs).c_str()));

        if (!seed_dir.empty()) {
            check(ots_seed_circuits(cfg.get(), seed_dir.c_str()));
            std::cout << "wrote circuit templates to " << seed_dir << '\n';
            return kExitOk;
        }

        if (iv->parsed()) {
            int snap = 0;
            check(ots_cmd_iv(cfg.get(), iv_netlist.empty() ? nullptr : iv_netlist.c_str(), si(iv_peak, "--peak"),
                             si(iv_rise, "--rise"), iv_out.c_str(), &snap));
            std::cout << "snap-back: " << (snap ? "yes" : "no") << '\n';
        } else if (osc->parsed()) {
            const double duration = si(osc_duration, "--duration");
            if (!osc_sweep.empty()) {
                if (osc_out.empty()) throw Failure{kExitInput, "--sweep needs --out"};
                double v0 = 0, v1 = 0;
                unsigned long steps = 0;
                char a[64] = {}, b[64] = {};
                if (std::sscanf(osc_sweep.c_str(), "%63[^:]:%63[^:]:%lu", a, b, &steps) != 3)
                    throw Failure{kExitInput, "--sweep expects v0:v1:steps"};
                v0 = si(a, "--sweep");
                v1 = si(b, "--sweep");
                int inc = 0;
                check(ots_cmd_oscillate_sweep(cfg.get(), v0, v1, steps, duration, osc_out.c_str(), &inc));
                std::cout << "rate strictly increasing: " << (inc ? "yes" : "no") << '\n';
            } else {
                std::size_t spikes = 0;
                double rate = 0.0;
                check(ots_cmd_oscillate(cfg.get(), si(osc_vin, "--vin"), duration,
                                        osc_out.empty() ? nullptr : osc_out.c_str(), &spikes, &rate));
                std::cout << "spikes: " << spikes << "\nrate_hz: " << rate << '\n';
            }
        } else if (gate->parsed()) {
            if (!gate_table && gate_inputs.empty()) throw Failure{kExitInput, "gate needs --table or --inputs"};
            CString json;
            int ok = 0;
            if (gate_table) {
                check(ots_cmd_gate_table(cfg.get(), gate_kind.c_str(), &json.p, &ok));
            } else {
                const auto bits = parse_bits(gate_inputs);
                check(ots_cmd_gate_eval(cfg.get(), gate_kind.c_str(), bits.data(), bits.size(),
                                        gate_wave.empty() ? nullptr : gate_wave.c_str(), &json.p, &ok));
            }
            if (gate_json.empty()) std::cout << json.p << '\n';
            else write_file(gate_json, std::string(json.p) + "\n");
            if (!ok) {
                std::cerr << "measured outputs differ from the truth table\n";
                return kExitCheck;
            }
        } else if (edge->parsed()) {
            if (edge_threshold >= 0)
                check(ots_config_set(cfg.get(), "pipeline.threshold", std::to_string(edge_threshold).c_str()));
            if (edge_otsu) check(ots_config_set(cfg.get(), "pipeline.otsu", "true"));
            std::size_t bad = 0, pixels = 0;
            check(ots_cmd_edge(cfg.get(), edge_in.c_str(), edge_out.c_str(), edge_oracle ? 1 : 0,
                               edge_report.empty() ? nullptr : edge_report.c_str(), &bad, &pixels));
            std::cout << "pixels: " << pixels << '\n';
            if (edge_oracle) {
                std::cout << "mismatches: " << bad << '\n';
                if (bad != 0) return kExitCheck;
            }
        } else if (grad->parsed()) {
            const auto list = parse_list(grad_sweep);
            double slope = 0, floor_c = 0, r2 = 0;
            check(ots_cmd_gradient(cfg.get(), list.data(), list.size(), grad_out.c_str(), grad_fit ? 1 : 0, &slope,
                                   &floor_c, &r2));
            if (grad_fit)
                std::cout << "slope_hz_per_unit: " << slope << "\nfloor: " << floor_c << "\nr2: " << r2 << '\n';
        } else if (energy->parsed()) {
            if (!en_exp.empty()) check(ots_config_set(cfg.get(), "energy.exponent", en_exp.c_str()));
            CString text, json;
            check(ots_cmd_energy(cfg.get(), en_w, en_h, si(en_node, "--node"), &text.p,
                                 en_json.empty() ? nullptr : &json.p));
            std::cout << text.p;
            if (!en_json.empty()) write_file(en_json, json.p);
        } else {
            std::cout << app.help();
            return kExitInput;
        }
    } catch (const Failure& f) {
        std::cerr << "error: " << f.message << '\n';
        return f.code;
    }
    return kExitOk;
}
