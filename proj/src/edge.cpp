// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otsim Authors

#include "otsim/edge.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include <json.hpp>

#include "otsim/error.hpp"
#include "otsim/parallel.hpp"
#include "otsim/spikes.hpp"

namespace otsim {

BinaryImage shift(const BinaryImage& img, ShiftDir dir) {
    require(img.bits.size() == img.width * img.height, "image data size mismatch");
    if (dir == ShiftDir::Horizontal) require(img.width >= 2, "horizontal shift needs width >= 2");
    else require(img.height >= 2, "vertical shift needs height >= 2");
    BinaryImage out = img;
    for (std::size_t y = 0; y < img.height; ++y)
        for (std::size_t x = 0; x < img.width; ++x) {
            if (dir == ShiftDir::Horizontal) out.at(x, y) = img.at(x == 0 ? 0 : x - 1, y);
            else out.at(x, y) = img.at(x, y == 0 ? 0 : y - 1);
        }
    return out;
}

namespace {

template <class Op>
BinaryImage combine(const BinaryImage& a, const BinaryImage& b, Op op) {
    require(a.width == b.width && a.height == b.height, "image sizes differ");
    BinaryImage out = a;
    for (std::size_t i = 0; i < out.bits.size(); ++i) out.bits[i] = op(a.bits[i], b.bits[i]) ? 1 : 0;
    return out;
}

// Return-to-zero pulse per set bit, one clock period per bit.
PwlSource pulse_train(const std::vector<std::uint8_t>& bits, std::size_t first, std::size_t count, Volts vh,
                      const StreamSettings& s) {
    PwlSource src;
    src.points.emplace_back(0.0, 0.0);
    for (std::size_t k = 0; k < count; ++k) {
        if (!bits[first + k]) continue;
        const Seconds t0 = static_cast<double>(k) * s.clock_period;
        if (src.points.back().first < t0) src.points.emplace_back(t0, 0.0);
        src.points.emplace_back(t0 + s.edge_time, vh);
        src.points.emplace_back(t0 + s.pulse_width, vh);
        src.points.emplace_back(t0 + s.pulse_width + s.edge_time, 0.0);
    }
    return src;
}

}  // namespace

BinaryImage xor_images(const BinaryImage& a, const BinaryImage& b) {
    return combine(a, b, [](auto x, auto y) { return x != y; });
}

BinaryImage or_images(const BinaryImage& a, const BinaryImage& b) {
    return combine(a, b, [](auto x, auto y) { return x || y; });
}

BinaryImage reference_edges(const BinaryImage& img) {
    return or_images(xor_images(img, shift(img, ShiftDir::Horizontal)),
                     xor_images(img, shift(img, ShiftDir::Vertical)));
}

StreamResult xor_stream_circuit(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b,
                                const LogicEncoding& enc, const OtsParams& p, const StreamSettings& s) {
    require(a.size() == b.size(), "bit streams differ in length");
    require(s.pulse_width > 0.0 && s.pulse_width + s.edge_time < s.clock_period,
            "pulse width must be shorter than the clock period");
    require(s.edge_time > 0.0, "edge time must be > 0");
    require(s.segment_size >= 1, "segment size must be >= 1");
    require(s.spike_count_threshold >= 1, "spike count threshold must be >= 1");
    enc.validate();

    const GateTemplate xor_gate = build_gate(GateKind::Xor, p);
    const Probe& probe = xor_gate.circuit.probes.front();
    const std::size_t n = a.size();
    const std::size_t segments = (n + s.segment_size - 1) / s.segment_size;

    StreamResult res;
    res.bits.assign(n, 0);
    res.spike_counts.assign(n, 0);
    std::vector<Amperes> residuals(segments, 0.0);

    parallel_for(segments, s.jobs, [&](std::size_t seg) {
        const std::size_t first = seg * s.segment_size;
        const std::size_t count = std::min(s.segment_size, n - first);
        Netlist net = xor_gate.circuit.net;
        net.element(xor_gate.circuit.inputs[0]).as<VoltageSource>().spec = pulse_train(a, first, count, enc.v_high, s);
        net.element(xor_gate.circuit.inputs[1]).as<VoltageSource>().spec = pulse_train(b, first, count, enc.v_high, s);
        TransientOptions opt;
        opt.dt = s.dt;
        opt.max_newton_iterations = s.max_newton_iterations;
        opt.residual_tol = s.residual_tol;
        opt.record_nodes = {probe.pos, probe.neg};
        const Trace tr = transient(net, static_cast<double>(count) * s.clock_period, opt);
        const auto sig = probe.signal(tr);
        const auto st = extract_spikes(std::span<const double>(sig), tr.dt, probe.threshold, 2.0 * tr.dt);
        for (std::size_t k = 0; k < count; ++k) {
            const Seconds t0 = static_cast<double>(k) * s.clock_period;
            const std::size_t c = count_in(st, t0, t0 + s.clock_period);
            res.spike_counts[first + k] = c;
            res.bits[first + k] = c >= s.spike_count_threshold ? 1 : 0;
        }
        residuals[seg] = tr.max_residual;
    });
    for (Amperes r : residuals) res.max_residual = std::max(res.max_residual, r);
    return res;
}

EdgeResult detect_edges(const BinaryImage& img, const LogicEncoding& enc, const OtsParams& p,
                        const StreamSettings& s) {
    require(img.width >= 2 && img.height >= 2, "edge detection needs an image of at least 2x2");
    const BinaryImage sh = shift(img, ShiftDir::Horizontal);
    const BinaryImage sv = shift(img, ShiftDir::Vertical);
    const StreamResult h = xor_stream_circuit(img.bits, sh.bits, enc, p, s);
    const StreamResult v = xor_stream_circuit(img.bits, sv.bits, enc, p, s);
    EdgeResult r;
    r.horizontal = BinaryImage{img.width, img.height, h.bits};
    r.vertical = BinaryImage{img.width, img.height, v.bits};
    r.edges = or_images(r.horizontal, r.vertical);
    r.max_residual = std::max(h.max_residual, v.max_residual);
    return r;
}

std::vector<std::pair<std::size_t, std::size_t>> mismatches(const BinaryImage& a, const BinaryImage& b) {
    require(a.width == b.width && a.height == b.height, "image sizes differ");
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t y = 0; y < a.height; ++y)
        for (std::size_t x = 0; x < a.width; ++x)
            if (a.at(x, y) != b.at(x, y)) out.emplace_back(x, y);
    return out;
}

std::string mismatch_report_json(const std::vector<std::pair<std::size_t, std::size_t>>& mm, std::size_t total) {
    nlohmann::ordered_json j;
    j["total"] = total;
    j["mismatches"] = nlohmann::ordered_json::array();
    for (const auto& [x, y] : mm) j["mismatches"].push_back({x, y});
    return j.dump(2);
}

GradientSample gradient_rate(int c_a, int c_b, const LogicEncoding& enc, const OtsParams& p,
                             const GradientSettings& s) {
    require(c_a >= 0 && c_a <= 255 && c_b >= 0 && c_b <= 255, "contrast values must be in [0, 255]");
    require(s.window > 0.0, "gradient window must be > 0");
    enc.validate();
    const GateTemplate xor_gate = build_gate(GateKind::Xor, p);
    const Probe& probe = xor_gate.circuit.probes.front();
    Netlist net = xor_gate.circuit.net;
    net.element(xor_gate.circuit.inputs[0]).as<VoltageSource>().spec = DcSource{enc.v_high * c_a / 255.0};
    net.element(xor_gate.circuit.inputs[1]).as<VoltageSource>().spec = DcSource{enc.v_high * c_b / 255.0};
    TransientOptions opt;
    opt.dt = s.dt;
    opt.max_newton_iterations = s.max_newton_iterations;
    opt.residual_tol = s.residual_tol;
    opt.record_nodes = {probe.pos, probe.neg};
    const Trace tr = transient(net, s.window, opt);
    const auto sig = probe.signal(tr);
    const auto st = extract_spikes(std::span<const double>(sig), tr.dt, probe.threshold, 2.0 * tr.dt);
    return {static_cast<double>(std::abs(c_a - c_b)), static_cast<double>(st.spike_times.size()) / s.window,
            tr.max_residual};
}

LinearFit fit_linear(const std::vector<GradientSample>& samples) {
    std::vector<GradientSample> pts;
    for (const auto& smp : samples)
        if (smp.rate > 0.0) pts.push_back(smp);
    if (pts.empty()) fail(ErrorCode::InvalidArgument, "all rates are zero; nothing to fit");
    require(pts.size() >= 3, "linear fit needs at least 3 samples with nonzero rate");
    const double n = static_cast<double>(pts.size());
    double mx = 0.0, my = 0.0;
    for (const auto& q : pts) {
        mx += q.delta_c;
        my += q.rate;
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& q : pts) {
        sxx += (q.delta_c - mx) * (q.delta_c - mx);
        sxy += (q.delta_c - mx) * (q.rate - my);
        syy += (q.rate - my) * (q.rate - my);
    }
    require(sxx > 0.0, "linear fit needs at least two distinct contrast values");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.floor = f.slope != 0.0 ? std::max(0.0, -f.intercept / f.slope) : 0.0;
    double ss_res = 0.0;
    for (const auto& q : pts) {
        const double e = q.rate - (f.intercept + f.slope * q.delta_c);
        ss_res += e * e;
    }
    f.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    return f;
}

}  // namespace otsim
