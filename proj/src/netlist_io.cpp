// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otsim Authors

#include "otsim/netlist_io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "otsim/error.hpp"

namespace otsim {

std::vector<double> Probe::signal(const Trace& tr) const {
    auto s = tr.differential(pos, neg);
    if (rectify)
        for (double& v : s) v = std::abs(v);
    return s;
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

class LineParser {
public:
    LineParser(std::size_t line_no, std::vector<std::string> toks) : line_(line_no), toks_(std::move(toks)) {}

    [[noreturn]] void error(const std::string& msg) const {
        fail(ErrorCode::Parse, "line " + std::to_string(line_) + ": " + msg);
    }

    [[nodiscard]] std::size_t size() const { return toks_.size(); }
    [[nodiscard]] const std::string& at(std::size_t i) const {
        if (i >= toks_.size()) error("missing field " + std::to_string(i + 1));
        return toks_[i];
    }

    double number(std::size_t i) const {
        try {
            return parse_si(at(i));
        } catch (const Error& e) {
            error(e.what());
        }
    }

    void min_fields(std::size_t n) const {
        if (toks_.size() < n) error("expected at least " + std::to_string(n) + " fields");
    }

    // key=value options from field `first` onward.
    std::map<std::string, double> options(std::size_t first, std::initializer_list<const char*> allowed) const {
        std::map<std::string, double> out;
        for (std::size_t i = first; i < toks_.size(); ++i) {
            const auto eq = toks_[i].find('=');
            if (eq == std::string::npos) error("expected key=value, got '" + toks_[i] + "'");
            const std::string key = toks_[i].substr(0, eq);
            bool ok = false;
            for (const char* a : allowed) ok = ok || key == a;
            if (!ok) error("unknown option '" + key + "'");
            try {
                out[key] = parse_si(toks_[i].substr(eq + 1));
            } catch (const Error& e) {
                error(e.what());
            }
        }
        return out;
    }

private:
    std::size_t line_;
    std::vector<std::string> toks_;
};

SourceSpec parse_source(const LineParser& lp) {
    const std::string& kind = lp.at(4);
    if (kind == "dc") {
        if (lp.size() != 6) lp.error("dc source takes one value");
        return DcSource{lp.number(5)};
    }
    if (kind == "pwl") {
        if (lp.size() < 7 || (lp.size() - 5) % 2 != 0) lp.error("pwl source takes time/value pairs");
        PwlSource s;
        for (std::size_t i = 5; i < lp.size(); i += 2) s.points.emplace_back(lp.number(i), lp.number(i + 1));
        return s;
    }
    if (kind == "pulse") {
        if (lp.size() != 10 && lp.size() != 11) lp.error("pulse source takes vlo vhi delay width period [repeat]");
        PulseSource s{lp.number(5), lp.number(6), lp.number(7), lp.number(8), lp.number(9), 0};
        if (lp.size() == 11) {
            const double r = lp.number(10);
            if (r < 0.0 || r != std::floor(r)) lp.error("pulse repeat must be a non-negative integer");
            s.repeat = static_cast<std::size_t>(r);
        }
        return s;
    }
    if (kind == "tri") {
        if (lp.size() != 8) lp.error("tri source takes vpeak trise tfall");
        return TriangleSource{lp.number(5), lp.number(6), lp.number(7)};
    }
    lp.error("unknown source kind '" + kind + "'");
}

std::string format_source(const SourceSpec& spec) {
    std::ostringstream os;
    if (const auto* d = std::get_if<DcSource>(&spec)) {
        os << "dc " << format_full(d->value);
    } else if (const auto* p = std::get_if<PwlSource>(&spec)) {
        os << "pwl";
        for (const auto& [t, v] : p->points) os << ' ' << format_full(t) << ' ' << format_full(v);
    } else if (const auto* u = std::get_if<PulseSource>(&spec)) {
        os << "pulse " << format_full(u->v_low) << ' ' << format_full(u->v_high) << ' ' << format_full(u->delay)
           << ' ' << format_full(u->width) << ' ' << format_full(u->period);
        if (u->repeat != 0) os << ' ' << u->repeat;
    } else {
        const auto& t = std::get<TriangleSource>(spec);
        os << "tri " << format_full(t.v_peak) << ' ' << format_full(t.t_rise) << ' ' << format_full(t.t_fall);
    }
    return os.str();
}

void parse_line(CircuitFile& cf, const LineParser& lp, const OtsParams& defaults) {
    auto& net = cf.net;
    const std::string& kw = lp.at(0);
    auto add = [&](Element e) {
        if (net.find_element(e.name)) lp.error("duplicate element name '" + e.name + "'");
        net.add(std::move(e));
    };
    if (kw == "R" || kw == "C") {
        lp.min_fields(5);
        Element e{lp.at(1), Resistor{}, {net.node(lp.at(2)), net.node(lp.at(3))}};
        if (kw == "R") {
            if (lp.size() != 5) lp.error("resistor takes one value");
            e.kind = Resistor{lp.number(4)};
        } else {
            const auto opt = lp.options(5, {"ic"});
            e.kind = Capacitor{lp.number(4), opt.count("ic") ? opt.at("ic") : 0.0};
        }
        add(std::move(e));
    } else if (kw == "V") {
        lp.min_fields(6);
        add(Element{lp.at(1), VoltageSource{parse_source(lp)}, {net.node(lp.at(2)), net.node(lp.at(3))}});
    } else if (kw == "D") {
        lp.min_fields(4);
        Diode d;
        for (const auto& [k, v] : lp.options(4, {"vf", "vz", "rs"})) {
            if (k == "vf") d.v_f = v;
            else if (k == "vz") d.v_z = v;
            else d.r_series = v;
        }
        add(Element{lp.at(1), d, {net.node(lp.at(2)), net.node(lp.at(3))}});
    } else if (kw == "OTS") {
        lp.min_fields(4);
        OtsParams p = defaults;
        for (const auto& [k, v] : lp.options(4, {"vth", "vhold", "ron", "goff", "ihold", "ton", "toff"})) {
            if (k == "vth") p.v_th = v;
            else if (k == "vhold") p.v_hold = v;
            else if (k == "ron") p.r_on = v;
            else if (k == "goff") p.g_off = v;
            else if (k == "ihold") p.i_hold = v;
            else if (k == "ton") p.tau_on = v;
            else p.tau_off = v;
        }
        add(Element{lp.at(1), Ots{p}, {net.node(lp.at(2)), net.node(lp.at(3))}});
    } else if (kw == "CMP") {
        lp.min_fields(5);
        Comparator c;
        for (const auto& [k, v] : lp.options(5, {"high", "low", "rout"})) {
            if (k == "high") c.v_out_high = v;
            else if (k == "low") c.v_out_low = v;
            else c.r_out = v;
        }
        add(Element{lp.at(1), c, {net.node(lp.at(2)), net.node(lp.at(3)), net.node(lp.at(4))}});
    } else if (kw == ".input") {
        if (lp.size() != 2) lp.error(".input takes one source name");
        cf.inputs.push_back(lp.at(1));
    } else if (kw == ".probe") {
        if (lp.size() != 6 && lp.size() != 7) lp.error(".probe takes name n+ n- spikes|level threshold [abs]");
        Probe p;
        p.name = lp.at(1);
        p.pos = net.node(lp.at(2));
        p.neg = net.node(lp.at(3));
        if (lp.at(4) == "spikes") p.mode = DecodeMode::SpikeCount;
        else if (lp.at(4) == "level") p.mode = DecodeMode::MeanLevel;
        else lp.error("probe mode must be 'spikes' or 'level'");
        p.threshold = lp.number(5);
        if (lp.size() == 7) {
            if (lp.at(6) != "abs") lp.error("unexpected probe flag '" + lp.at(6) + "'");
            p.rectify = true;
        }
        cf.probes.push_back(p);
    } else if (kw == ".meta") {
        lp.min_fields(3);
        std::string value = lp.at(2);
        for (std::size_t i = 3; i < lp.size(); ++i) value += " " + lp.at(i);
        cf.meta.emplace_back(lp.at(1), value);
    } else {
        lp.error("unknown statement '" + kw + "'");
    }
}

}  // namespace

CircuitFile parse_circuit(const std::string& text, const OtsParams& defaults) {
    CircuitFile cf;
    std::istringstream is(text);
    std::string line;
    std::size_t line_no = 0;
    bool in_header = true;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto hash = line.find('#');
        if (in_header && hash != std::string::npos && line.find_first_not_of(" \t") == hash) {
            std::string c = line.substr(hash + 1);
            if (!c.empty() && c.front() == ' ') c.erase(0, 1);
            cf.header_comments.push_back(c);
            continue;
        }
        auto toks = split_ws(hash == std::string::npos ? line : line.substr(0, hash));
        if (toks.empty()) continue;
        in_header = false;
        parse_line(cf, LineParser(line_no, std::move(toks)), defaults);
    }
    for (const auto& in : cf.inputs) {
        const auto idx = cf.net.find_element(in);
        if (!idx || !cf.net.elements()[*idx].is<VoltageSource>())
            fail(ErrorCode::Parse, ".input '" + in + "' does not name a voltage source");
    }
    try {
        cf.net.validate();
    } catch (const Error& e) {
        fail(ErrorCode::Parse, e.what());
    }
    return cf;
}

CircuitFile load_circuit(const std::string& path, const OtsParams& defaults) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::Io, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_circuit(ss.str(), defaults);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::Parse) fail(ErrorCode::Parse, path + ": " + e.what());
        throw;
    }
}

std::string format_circuit(const CircuitFile& cf, const OtsParams& defaults) {
    std::ostringstream os;
    for (const auto& c : cf.header_comments) os << "# " << c << '\n';
    if (!cf.header_comments.empty()) os << '\n';
    const auto& net = cf.net;
    auto nn = [&](NodeIndex n) { return net.node_name(n); };
    for (const auto& e : net.elements()) {
        os << element_letter(e) << ' ' << e.name;
        for (NodeIndex n : e.nodes) os << ' ' << nn(n);
        switch (e.kind.index()) {
            case 0: os << ' ' << format_full(e.as<Resistor>().ohms); break;
            case 1: {
                const auto& c = e.as<Capacitor>();
                os << ' ' << format_full(c.farads);
                if (c.initial != 0.0) os << " ic=" << format_full(c.initial);
                break;
            }
            case 2: os << ' ' << format_source(e.as<VoltageSource>().spec); break;
            case 3: {
                const auto& d = e.as<Diode>();
                const Diode def;
                if (d.v_f != def.v_f) os << " vf=" << format_full(d.v_f);
                if (d.v_z != def.v_z) os << " vz=" << format_full(d.v_z);
                if (d.r_series != def.r_series) os << " rs=" << format_full(d.r_series);
                break;
            }
            case 4: {
                const auto& p = e.as<Ots>().params;
                auto opt = [&](const char* key, double v, double d) {
                    if (v != d) os << ' ' << key << '=' << format_full(v);
                };
                opt("vth", p.v_th, defaults.v_th);
                opt("vhold", p.v_hold, defaults.v_hold);
                opt("ron", p.r_on, defaults.r_on);
                opt("goff", p.g_off, defaults.g_off);
                opt("ihold", p.i_hold, defaults.i_hold);
                opt("ton", p.tau_on, defaults.tau_on);
                opt("toff", p.tau_off, defaults.tau_off);
                break;
            }
            default: {
                const auto& c = e.as<Comparator>();
                const Comparator def;
                if (c.v_out_high != def.v_out_high) os << " high=" << format_full(c.v_out_high);
                if (c.v_out_low != def.v_out_low) os << " low=" << format_full(c.v_out_low);
                if (c.r_out != def.r_out) os << " rout=" << format_full(c.r_out);
                break;
            }
        }
        os << '\n';
    }
    if (!cf.inputs.empty() || !cf.probes.empty() || !cf.meta.empty()) os << '\n';
    for (const auto& in : cf.inputs) os << ".input " << in << '\n';
    for (const auto& p : cf.probes) {
        os << ".probe " << p.name << ' ' << nn(p.pos) << ' ' << nn(p.neg) << ' '
           << (p.mode == DecodeMode::SpikeCount ? "spikes" : "level") << ' ' << format_full(p.threshold);
        if (p.rectify) os << " abs";
        os << '\n';
    }
    for (const auto& [k, v] : cf.meta) os << ".meta " << k << ' ' << v << '\n';
    return os.str();
}

void save_circuit(const CircuitFile& cf, const std::string& path, const OtsParams& defaults) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::Io, "cannot write '" + path + "'");
    out << format_circuit(cf, defaults);
    if (!out) fail(ErrorCode::Io, "write failed for '" + path + "'");
}

}  // namespace otsim
