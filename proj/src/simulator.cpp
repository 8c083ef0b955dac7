// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otsim Authors

#include "otsim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>

#include "otsim/error.hpp"

namespace otsim {

namespace {

// Segment codes for the piecewise-linear elements.
enum Seg : std::uint8_t {
    kSegOff = 0,       // diode blocking / OTS on-state dead band / comparator low
    kSegPos = 1,       // diode forward / OTS on, v > v_hold / comparator high
    kSegNeg = 2,       // diode breakdown / OTS on, v < -v_hold
    kSegOtsOff = 3,    // OTS off-state leakage
};

// Dense LU with partial pivoting, row-major.
class DenseLu {
public:
    void factor(std::vector<double> a, std::size_t n) {
        n_ = n;
        lu_ = std::move(a);
        perm_.resize(n);
        failed_col_.reset();
        for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t piv = k;
            double best = std::abs(lu_[k * n + k]);
            for (std::size_t r = k + 1; r < n; ++r) {
                const double v = std::abs(lu_[r * n + k]);
                if (v > best) {
                    best = v;
                    piv = r;
                }
            }
            if (best < 1e-300 || !std::isfinite(best)) {
                failed_col_ = k;
                return;
            }
            if (piv != k) {
                for (std::size_t c = 0; c < n; ++c) std::swap(lu_[k * n + c], lu_[piv * n + c]);
                std::swap(perm_[k], perm_[piv]);
            }
            const double inv = 1.0 / lu_[k * n + k];
            for (std::size_t r = k + 1; r < n; ++r) {
                double& f = lu_[r * n + k];
                if (f == 0.0) continue;
                f *= inv;
                const double* src = &lu_[k * n];
                double* dst = &lu_[r * n];
                for (std::size_t c = k + 1; c < n; ++c) dst[c] -= f * src[c];
            }
        }
    }

    [[nodiscard]] std::optional<std::size_t> failed_column() const { return failed_col_; }

    void solve(const std::vector<double>& b, std::vector<double>& x) const {
        const std::size_t n = n_;
        x.resize(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
        for (std::size_t i = 0; i < n; ++i) {
            double s = x[i];
            const double* row = &lu_[i * n];
            for (std::size_t c = 0; c < i; ++c) s -= row[c] * x[c];
            x[i] = s;
        }
        for (std::size_t i = n; i-- > 0;) {
            double s = x[i];
            const double* row = &lu_[i * n];
            for (std::size_t c = i + 1; c < n; ++c) s -= row[c] * x[c];
            x[i] = s / row[i];
        }
    }

private:
    std::size_t n_ = 0;
    std::vector<double> lu_;
    std::vector<std::size_t> perm_;
    std::optional<std::size_t> failed_col_;
};

class Engine {
public:
    Engine(const Netlist& net, const TransientOptions& opt) : net_(net), opt_(opt) {
        nodes_ = net.node_count();
        for (std::size_t i = 0; i < net.elements().size(); ++i) {
            const auto& e = net.elements()[i];
            if (e.is<VoltageSource>()) {
                branch_of_.push_back(sources_.size());
                sources_.push_back(i);
            } else {
                branch_of_.push_back(SIZE_MAX);
            }
            if (e.is<Capacitor>()) cap_prev_.push_back(e.as<Capacitor>().initial);
            else cap_prev_.push_back(0.0);
            ots_state_.emplace_back();
        }
        size_ = (nodes_ - 1) + sources_.size();
        seg_.assign(net.elements().size(), kSegOff);
        x_.assign(size_, 0.0);
    }

    [[nodiscard]] std::size_t size() const { return size_; }

    double v(NodeIndex n) const { return n == kGround ? 0.0 : x_[n - 1]; }

    Volts across(const Element& e) const { return v(e.nodes[0]) - v(e.nodes[1]); }

    void set_time(Seconds t) {
        src_val_.resize(sources_.size());
        for (std::size_t k = 0; k < sources_.size(); ++k)
            src_val_[k] = source_value(net_.elements()[sources_[k]].as<VoltageSource>().spec, t);
    }

    // Solves the nodal system at the current time with capacitor companion
    // step h. Returns the number of segment re-selections used.
    int solve(Seconds h, std::size_t step_index) {
        select_segments();
        for (int iter = 0;; ++iter) {
            assemble_and_solve(h);
            if (!select_segments()) return iter;
            if (iter >= opt_.max_newton_iterations)
                fail(ErrorCode::Convergence, "no consistent piecewise-linear segment set at timestep " +
                                                 std::to_string(step_index) + " after " +
                                                 std::to_string(iter + 1) + " solves");
        }
    }

    Amperes element_current(std::size_t idx, Seconds h) const {
        const auto& e = net_.elements()[idx];
        const Volts vd = across(e);
        switch (e.kind.index()) {
            case 0: return vd / e.as<Resistor>().ohms;
            case 1: return e.as<Capacitor>().farads / h * (vd - cap_prev_[idx]);
            case 2: return x_[(nodes_ - 1) + branch_of_[idx]];
            case 3: {
                const auto& d = e.as<Diode>();
                if (vd > d.v_f) return (vd - d.v_f) / d.r_series;
                if (vd < -d.v_z) return (vd + d.v_z) / d.r_series;
                return 0.0;
            }
            case 4: return ots_current(e.as<Ots>().params, ots_state_[idx], vd);
            default: {
                const auto& c = e.as<Comparator>();
                const Volts level = v(e.nodes[0]) > v(e.nodes[1]) ? c.v_out_high : c.v_out_low;
                return (v(e.nodes[2]) - level) / c.r_out;
            }
        }
    }

    // Largest KCL imbalance over non-ground nodes, true element laws.
    Amperes residual(Seconds h) const {
        std::vector<double> sum(nodes_, 0.0);
        for (std::size_t i = 0; i < net_.elements().size(); ++i) {
            const auto& e = net_.elements()[i];
            const double cur = element_current(i, h);
            if (e.is<Comparator>()) {
                sum[e.nodes[2]] += cur;
            } else {
                sum[e.nodes[0]] += cur;
                sum[e.nodes[1]] -= cur;
            }
        }
        double worst = 0.0;
        for (std::size_t n = 1; n < nodes_; ++n) worst = std::max(worst, std::abs(sum[n]));
        return worst;
    }

    void commit(Seconds h) {
        for (std::size_t i = 0; i < net_.elements().size(); ++i) {
            const auto& e = net_.elements()[i];
            if (e.is<Capacitor>()) cap_prev_[i] = across(e);
            else if (e.is<Ots>()) ots_state_[i] = ots_step(e.as<Ots>().params, ots_state_[i], across(e), h);
        }
    }

    void commit_initial() {
        for (std::size_t i = 0; i < net_.elements().size(); ++i) {
            const auto& e = net_.elements()[i];
            if (e.is<Capacitor>()) cap_prev_[i] = across(e);
        }
    }

private:
    // Picks each nonlinear element's segment from the present solution.
    // Returns true when anything changed.
    bool select_segments() {
        bool changed = false;
        for (std::size_t i = 0; i < net_.elements().size(); ++i) {
            const auto& e = net_.elements()[i];
            std::uint8_t s = kSegOff;
            if (e.is<Diode>()) {
                const auto& d = e.as<Diode>();
                const Volts vd = across(e);
                s = vd > d.v_f ? kSegPos : (vd < -d.v_z ? kSegNeg : kSegOff);
            } else if (e.is<Ots>()) {
                const auto& p = e.as<Ots>().params;
                const Volts vd = across(e);
                if (ots_state_[i].phase == OtsPhase::Off) s = kSegOtsOff;
                else s = vd > p.v_hold ? kSegPos : (vd < -p.v_hold ? kSegNeg : kSegOff);
            } else if (e.is<Comparator>()) {
                s = v(e.nodes[0]) > v(e.nodes[1]) ? kSegPos : kSegOff;
            } else {
                continue;
            }
            if (s != seg_[i]) {
                seg_[i] = s;
                changed = true;
            }
        }
        return changed;
    }

    void stamp_g(std::vector<double>& a, NodeIndex p, NodeIndex q, double g) const {
        const std::size_t n = size_;
        if (p != kGround) a[(p - 1) * n + (p - 1)] += g;
        if (q != kGround) a[(q - 1) * n + (q - 1)] += g;
        if (p != kGround && q != kGround) {
            a[(p - 1) * n + (q - 1)] -= g;
            a[(q - 1) * n + (p - 1)] -= g;
        }
    }

    // Branch current p->q of the form g*(vp-vq) + i0.
    void stamp_i0(std::vector<double>& b, NodeIndex p, NodeIndex q, double i0) const {
        if (p != kGround) b[p - 1] -= i0;
        if (q != kGround) b[q - 1] += i0;
    }

    void assemble_and_solve(Seconds h) {
        const std::size_t n = size_;
        rhs_.assign(n, 0.0);
        const bool reuse = cached_ && h == cached_h_ && seg_ == cached_seg_;
        if (!reuse) mat_.assign(n * n, 0.0);

        for (std::size_t i = 0; i < net_.elements().size(); ++i) {
            const auto& e = net_.elements()[i];
            const NodeIndex p = e.nodes[0];
            const NodeIndex q = e.nodes[1];
            switch (e.kind.index()) {
                case 0:
                    if (!reuse) stamp_g(mat_, p, q, 1.0 / e.as<Resistor>().ohms);
                    break;
                case 1: {
                    const double g = e.as<Capacitor>().farads / h;
                    if (!reuse) stamp_g(mat_, p, q, g);
                    stamp_i0(rhs_, p, q, -g * cap_prev_[i]);
                    break;
                }
                case 2: {
                    const std::size_t k = (nodes_ - 1) + branch_of_[i];
                    if (!reuse) {
                        if (p != kGround) {
                            mat_[(p - 1) * n + k] += 1.0;
                            mat_[k * n + (p - 1)] += 1.0;
                        }
                        if (q != kGround) {
                            mat_[(q - 1) * n + k] -= 1.0;
                            mat_[k * n + (q - 1)] -= 1.0;
                        }
                    }
                    rhs_[k] = src_val_[branch_of_[i]];
                    break;
                }
                case 3: {
                    const auto& d = e.as<Diode>();
                    const double g = 1.0 / d.r_series;
                    if (seg_[i] == kSegPos) {
                        if (!reuse) stamp_g(mat_, p, q, g);
                        stamp_i0(rhs_, p, q, -d.v_f * g);
                    } else if (seg_[i] == kSegNeg) {
                        if (!reuse) stamp_g(mat_, p, q, g);
                        stamp_i0(rhs_, p, q, d.v_z * g);
                    }
                    break;
                }
                case 4: {
                    const auto& o = e.as<Ots>().params;
                    if (seg_[i] == kSegOtsOff) {
                        if (!reuse) stamp_g(mat_, p, q, o.g_off);
                    } else if (seg_[i] == kSegPos) {
                        if (!reuse) stamp_g(mat_, p, q, 1.0 / o.r_on);
                        stamp_i0(rhs_, p, q, -o.v_hold / o.r_on);
                    } else if (seg_[i] == kSegNeg) {
                        if (!reuse) stamp_g(mat_, p, q, 1.0 / o.r_on);
                        stamp_i0(rhs_, p, q, o.v_hold / o.r_on);
                    }
                    break;
                }
                default: {
                    const auto& c = e.as<Comparator>();
                    const NodeIndex out = e.nodes[2];
                    const double g = 1.0 / c.r_out;
                    const Volts level = seg_[i] == kSegPos ? c.v_out_high : c.v_out_low;
                    if (!reuse) stamp_g(mat_, out, kGround, g);
                    stamp_i0(rhs_, out, kGround, -level * g);
                    break;
                }
            }
        }

        if (!reuse) {
            lu_.factor(mat_, n);
            if (auto col = lu_.failed_column()) {
                cached_ = false;
                std::string what = *col < nodes_ - 1
                                       ? "node '" + net_.node_name(*col + 1) + "'"
                                       : "source '" + net_.elements()[sources_[*col - (nodes_ - 1)]].name + "'";
                fail(ErrorCode::Singular, "singular system matrix at " + what +
                                              " (floating node or source loop)");
            }
            cached_ = true;
            cached_h_ = h;
            cached_seg_ = seg_;
        }
        lu_.solve(rhs_, x_);
        for (double val : x_)
            if (!std::isfinite(val)) fail(ErrorCode::NonFinite, "non-finite solution (solver divergence)");
    }

    const Netlist& net_;
    const TransientOptions& opt_;
    std::size_t nodes_ = 0;
    std::size_t size_ = 0;
    std::vector<std::size_t> sources_;
    std::vector<std::size_t> branch_of_;
    std::vector<double> cap_prev_;
    std::vector<OtsState> ots_state_;
    std::vector<std::uint8_t> seg_;
    std::vector<double> src_val_;
    std::vector<double> x_;
    std::vector<double> mat_;
    std::vector<double> rhs_;
    DenseLu lu_;
    bool cached_ = false;
    Seconds cached_h_ = 0.0;
    std::vector<std::uint8_t> cached_seg_;
};

void check_timestep(const Netlist& net, Seconds dt) {
    for (const auto& e : net.elements()) {
        if (!e.is<Ots>()) continue;
        const auto& p = e.as<Ots>().params;
        for (Seconds tau : {p.tau_on, p.tau_off})
            if (tau > 0.0 && dt > tau / 2.0 * (1.0 + 1e-9))
                fail(ErrorCode::InvalidArgument, "dt " + format_full(dt) + " s exceeds half the switching delay of " +
                                                     e.name + " (" + format_full(tau) + " s)");
    }
}

}  // namespace

const std::vector<Volts>& Trace::voltage(NodeIndex n) const {
    require(n < node_voltages.size(), "node index out of range");
    require(n == kGround || !node_voltages[n].empty(), "node '" + node_names[n] + "' was not recorded");
    return node_voltages[n];
}

std::vector<Volts> Trace::differential(NodeIndex a, NodeIndex b) const {
    std::vector<Volts> out(samples, 0.0);
    if (a != kGround) {
        const auto& va = voltage(a);
        for (std::size_t k = 0; k < samples; ++k) out[k] = va[k];
    }
    if (b != kGround) {
        const auto& vb = voltage(b);
        for (std::size_t k = 0; k < samples; ++k) out[k] -= vb[k];
    }
    return out;
}

std::size_t Trace::current_slot(std::size_t element) const {
    for (std::size_t i = 0; i < current_elements.size(); ++i)
        if (current_elements[i] == element) return i;
    fail(ErrorCode::InvalidArgument, "element current was not recorded");
}

Trace transient(const Netlist& net, Seconds t_stop, const TransientOptions& opt) {
    net.validate();
    require(opt.dt > 0.0 && std::isfinite(opt.dt), "dt must be > 0");
    require(t_stop >= opt.dt, "t_stop must be >= dt");
    require(opt.max_newton_iterations >= 1, "max_newton_iterations must be >= 1");
    if (opt.check_timestep) check_timestep(net, opt.dt);

    const std::size_t steps = static_cast<std::size_t>(std::llround(t_stop / opt.dt));
    Trace tr;
    tr.dt = opt.dt;
    tr.samples = steps + 1;
    tr.node_names = net.node_names();
    tr.node_voltages.resize(net.node_count());

    std::vector<NodeIndex> rec_nodes = opt.record_nodes;
    if (rec_nodes.empty())
        for (NodeIndex n = 1; n < net.node_count(); ++n) rec_nodes.push_back(n);
    for (NodeIndex n : rec_nodes) {
        require(n < net.node_count(), "recorded node out of range");
        if (n != kGround) tr.node_voltages[n].reserve(tr.samples);
    }

    tr.current_elements = opt.record_currents;
    if (tr.current_elements.empty())
        for (std::size_t i = 0; i < net.elements().size(); ++i)
            if (net.elements()[i].is<Ots>()) tr.current_elements.push_back(i);
    for (std::size_t idx : tr.current_elements) {
        require(idx < net.elements().size(), "recorded element out of range");
        const auto& e = net.elements()[idx];
        tr.current_names.push_back("I(" + e.name + ")");
        tr.current_terminals.emplace_back(e.is<Comparator>() ? e.nodes[2] : e.nodes[0],
                                          e.is<Comparator>() ? kGround : e.nodes[1]);
    }
    tr.branch_currents.assign(tr.current_elements.size(), {});
    for (auto& s : tr.branch_currents) s.reserve(tr.samples);

    Engine eng(net, opt);
    auto record = [&](Seconds h) {
        for (NodeIndex n : rec_nodes)
            if (n != kGround) tr.node_voltages[n].push_back(eng.v(n));
        for (std::size_t i = 0; i < tr.current_elements.size(); ++i)
            tr.branch_currents[i].push_back(eng.element_current(tr.current_elements[i], h));
    };
    auto check_residual = [&](Seconds h, std::size_t k) {
        const Amperes r = eng.residual(h);
        tr.max_residual = std::max(tr.max_residual, r);
        if (!(r < opt.residual_tol))
            fail(ErrorCode::Convergence, "KCL residual " + format_full(r) + " A at timestep " + std::to_string(k));
    };

    // t = 0: capacitors pinned near their initial voltage by a tiny companion step.
    const Seconds h0 = opt.dt * 1e-6;
    eng.set_time(0.0);
    tr.total_iterations += static_cast<std::size_t>(eng.solve(h0, 0)) + 1;
    check_residual(h0, 0);
    record(h0);
    eng.commit_initial();

    for (std::size_t k = 1; k <= steps; ++k) {
        eng.set_time(static_cast<double>(k) * opt.dt);
        tr.total_iterations += static_cast<std::size_t>(eng.solve(opt.dt, k)) + 1;
        check_residual(opt.dt, k);
        record(opt.dt);
        eng.commit(opt.dt);
    }
    return tr;
}

void write_trace_csv(const Trace& tr, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::Io, "cannot write '" + path + "'");
    std::vector<NodeIndex> cols;
    out << "t";
    for (NodeIndex n = 1; n < tr.node_voltages.size(); ++n)
        if (!tr.node_voltages[n].empty()) {
            cols.push_back(n);
            out << ',' << tr.node_names[n];
        }
    for (const auto& name : tr.current_names) out << ',' << name;
    out << '\n';
    for (std::size_t k = 0; k < tr.samples; ++k) {
        out << format_full(tr.time(k));
        for (NodeIndex n : cols) out << ',' << format_full(tr.node_voltages[n][k]);
        for (const auto& s : tr.branch_currents) out << ',' << format_full(s[k]);
        out << '\n';
    }
    if (!out) fail(ErrorCode::Io, "write failed for '" + path + "'");
}

std::vector<IvPoint> dynamic_iv(Netlist net, std::size_t source_index, const TriangleSource& ramp,
                                std::size_t ots_index, const TransientOptions& opt) {
    require(source_index < net.elements().size() && net.elements()[source_index].is<VoltageSource>(),
            "dynamic_iv: source index does not name a voltage source");
    require(ots_index < net.elements().size() && net.elements()[ots_index].is<Ots>(),
            "dynamic_iv: ots index does not name an OTS");
    const auto ots_count = std::count_if(net.elements().begin(), net.elements().end(),
                                         [](const Element& e) { return e.is<Ots>(); });
    require(ots_count == 1, "dynamic_iv: netlist must contain exactly one OTS");
    net.elements()[source_index].as<VoltageSource>().spec = ramp;

    TransientOptions o = opt;
    const auto& dev = net.elements()[ots_index];
    o.record_nodes = {dev.nodes[0], dev.nodes[1]};
    o.record_currents = {ots_index};
    const Trace tr = transient(net, ramp.t_rise + ramp.t_fall, o);
    const auto vd = tr.differential(dev.nodes[0], dev.nodes[1]);
    std::vector<IvPoint> out(tr.samples);
    for (std::size_t k = 0; k < tr.samples; ++k) out[k] = {vd[k], tr.branch_currents[0][k]};
    return out;
}

bool has_snapback(std::span<const IvPoint> iv) {
    for (std::size_t k = 1; k < iv.size(); ++k)
        if (iv[k].i - iv[k - 1].i > 0.0 && iv[k].v - iv[k - 1].v < 0.0) return true;
    return false;
}

}  // namespace otsim
