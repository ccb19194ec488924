#include "ringwave/transient.hpp"
#include "ringwave/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <memory>
#include <ostream>
#include <sstream>

namespace ringwave {

using constants::two_pi;

const std::vector<double>& TimeSeries::voltage(int node) const {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i] == node) return voltages[i];
    }
    throw TopologyError("node " + std::to_string(node) + " was not recorded");
}

namespace {

// Mutable solution state carried from step to step.
struct State {
    Eigen::VectorXd x;              // node voltages then inductor currents
    std::vector<double> cap_i;      // per capacitor element
    std::vector<double> var_i;      // per varactor element
    std::vector<double> var_q;      // per varactor element, charge at the last step
    Eigen::VectorXd var_v;          // per varactor element, voltage at the last step
};

// Factorised system for one step length.
struct Level {
    double h = 0.0;
    double k = 2.0;  // 2 for trapezoidal, 1 for a backward-Euler step
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
    Eigen::MatrixXd w;  // A^-1 U
    Eigen::MatrixXd s;  // U^T A^-1 U
};

class Integrator {
public:
    Integrator(const CircuitNetwork& net, double dt, const TransientOptions& opt)
        : net_(net), opt_(opt), dt_(dt), n_(net.node_count()), m_(net.inductor_count()) {
        for (std::size_t i = 0; i < net.elements.size(); ++i) {
            const auto& e = net.elements[i];
            if (e.kind == ElementKind::capacitor) caps_.push_back(i);
            if (e.kind == ElementKind::varactor) vars_.push_back(i);
            if (e.kind == ElementKind::inductor) inds_.push_back(i);
        }
        levels_.resize(2 * (opt.max_dt_halvings + 1));
    }

    State initial_state() const {
        State st;
        st.x = Eigen::VectorXd::Zero(n_ + m_);
        for (const auto& [node, v] : opt_.initial_voltages) {
            if (node < 0 || node >= n_) throw TopologyError("initial voltage on a missing node");
            st.x(node) = v;
        }
        st.cap_i.assign(caps_.size(), 0.0);
        st.var_i.assign(vars_.size(), 0.0);
        st.var_v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(vars_.size()));
        st.var_q.resize(vars_.size());
        for (std::size_t k = 0; k < vars_.size(); ++k) {
            const auto& e = net_.elements[vars_[k]];
            st.var_v(k) = volt(st.x, e.a) - volt(st.x, e.b);
            st.var_q[k] = extended_charge(st.var_v(k), e.varactor);
        }
        return st;
    }

    /// Backward Euler instead of trapezoidal steps. Used for the first step
    /// from a non-rest initial state, where the stored capacitor currents are
    /// not consistent with the node voltages.
    void set_euler(bool on) { euler_ = on; }

    /// Advances st from t to t + dt_ / 2^level, subdividing on Newton failure.
    void advance(State& st, double t, int level) {
        const double h = dt_ / std::ldexp(1.0, level);
        State trial = st;
        if (try_step(trial, t, level)) {
            st = std::move(trial);
            return;
        }
        if (level >= opt_.max_dt_halvings) {
            std::ostringstream msg;
            msg << "transient_run: Newton did not converge at t = " << t << " s after "
                << opt_.max_dt_halvings << " step halvings";
            throw NumericError(msg.str(), last_residual_);
        }
        advance(st, t, level + 1);
        advance(st, t + 0.5 * h, level + 1);
    }

private:
    static double volt(const Eigen::VectorXd& x, int node) { return node == kGround ? 0.0 : x(node); }

    static double lin_cap(const Element& e) { return extended_capacitance(0.0, e.varactor); }

    const Level& level(int l) {
        Level& lv = levels_[euler_ ? l + opt_.max_dt_halvings + 1 : l];
        if (lv.h > 0.0) return lv;
        lv.h = dt_ / std::ldexp(1.0, l);
        lv.k = euler_ ? 1.0 : 2.0;
        const int dim = n_ + m_;
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
        auto stamp = [&](int p, int q, double g) {
            if (p != kGround) a(p, p) += g;
            if (q != kGround) a(q, q) += g;
            if (p != kGround && q != kGround) {
                a(p, q) -= g;
                a(q, p) -= g;
            }
        };
        for (int i = 0; i < n_; ++i) a(i, i) += opt_.gmin;
        int li = 0;
        for (const auto& e : net_.elements) {
            switch (e.kind) {
            case ElementKind::resistor:
                stamp(e.a, e.b, 1.0 / e.value);
                break;
            case ElementKind::capacitor:
                stamp(e.a, e.b, lv.k * e.value / lv.h);
                break;
            case ElementKind::varactor:
                stamp(e.a, e.b, lv.k * lin_cap(e) / lv.h);
                break;
            case ElementKind::source:
                stamp(e.a, e.b, 1.0 / e.r_series);
                break;
            case ElementKind::inductor: {
                const int r = n_ + li++;
                if (e.a != kGround) {
                    a(r, e.a) += 1.0;
                    a(e.a, r) += 1.0;
                }
                if (e.b != kGround) {
                    a(r, e.b) -= 1.0;
                    a(e.b, r) -= 1.0;
                }
                a(r, r) = -(e.r_series + lv.k * e.value / lv.h);
                break;
            }
            }
        }
        lv.lu.compute(a);
        const auto k = static_cast<Eigen::Index>(vars_.size());
        Eigen::MatrixXd u = Eigen::MatrixXd::Zero(dim, k);
        for (Eigen::Index j = 0; j < k; ++j) {
            const auto& e = net_.elements[vars_[j]];
            if (e.a != kGround) u(e.a, j) = 1.0;
            if (e.b != kGround) u(e.b, j) = -1.0;
        }
        lv.w = lv.lu.solve(u);
        lv.s = u.transpose() * lv.w;
        return lv;
    }

    bool try_step(State& st, double t, int l) {
        const Level& lv = level(l);
        const double h = lv.h;
        const double kf = lv.k;
        const bool trap = !euler_;
        const double t_next = t + h;
        const int dim = n_ + m_;
        Eigen::VectorXd b = Eigen::VectorXd::Zero(dim);
        auto inject = [&](int p, int q, double j) {
            if (p != kGround) b(p) += j;
            if (q != kGround) b(q) -= j;
        };

        for (std::size_t k = 0; k < caps_.size(); ++k) {
            const auto& e = net_.elements[caps_[k]];
            const double g = kf * e.value / h;
            inject(e.a, e.b, g * (volt(st.x, e.a) - volt(st.x, e.b)) + (trap ? st.cap_i[k] : 0.0));
        }
        for (std::size_t k = 0; k < vars_.size(); ++k) {
            const auto& e = net_.elements[vars_[k]];
            // History of the full charge; the linear part of the present step
            // sits in the matrix and the remainder in g(v) below.
            inject(e.a, e.b, kf / h * st.var_q[k] + (trap ? st.var_i[k] : 0.0));
        }
        int li = 0;
        for (const auto& e : net_.elements) {
            if (e.kind == ElementKind::source) {
                const double emf = e.amplitude * std::sin(two_pi * e.freq * t_next + e.phase);
                inject(e.a, e.b, emf / e.r_series);
            } else if (e.kind == ElementKind::inductor) {
                const double i_old = st.x(n_ + li);
                const double v_old = volt(st.x, e.a) - volt(st.x, e.b);
                b(n_ + li) = trap ? -v_old + (e.r_series - 2.0 * e.value / h) * i_old : -e.value / h * i_old;
                ++li;
            }
        }

        const Eigen::VectorXd z = lv.lu.solve(b);
        const auto k = static_cast<Eigen::Index>(vars_.size());
        Eigen::VectorXd v = st.var_v;
        Eigen::VectorXd g = Eigen::VectorXd::Zero(k);
        if (k > 0) {
            Eigen::VectorXd y(k);
            for (Eigen::Index j = 0; j < k; ++j) {
                const auto& e = net_.elements[vars_[j]];
                y(j) = volt(z, e.a) - volt(z, e.b);
            }
            auto nonlinear = [&](Eigen::VectorXd& gv, Eigen::VectorXd& dg) {
                for (Eigen::Index j = 0; j < k; ++j) {
                    const auto& var = net_.elements[vars_[j]].varactor;
                    const double c_lin = extended_capacitance(0.0, var);
                    gv(j) = kf / h * (extended_charge(v(j), var) - c_lin * v(j));
                    dg(j) = kf / h * (extended_capacitance(v(j), var) - c_lin);
                }
            };
            Eigen::VectorXd dg(k);
            bool converged = false;
            for (int it = 0; it < opt_.newton_max_iter; ++it) {
                nonlinear(g, dg);
                const Eigen::VectorXd f = v - y + lv.s * g;
                Eigen::MatrixXd jac = lv.s * dg.asDiagonal();
                jac.diagonal().array() += 1.0;
                const Eigen::VectorXd dv = jac.partialPivLu().solve(-f);
                if (!dv.allFinite()) break;
                v += dv;
                bool small = true;
                for (Eigen::Index j = 0; j < k; ++j) {
                    if (std::abs(dv(j)) > opt_.newton_rel_tol * (std::abs(v(j)) + 1e-6)) small = false;
                }
                if (small) {
                    converged = true;
                    break;
                }
            }
            if (!converged) {
                nonlinear(g, dg);
                const Eigen::VectorXd f = v - y + lv.s * g;
                last_residual_.assign(f.data(), f.data() + k);
                return false;
            }
            nonlinear(g, dg);
        }
        const Eigen::VectorXd x_new = k > 0 ? Eigen::VectorXd(z - lv.w * g) : z;

        for (std::size_t j = 0; j < caps_.size(); ++j) {
            const auto& e = net_.elements[caps_[j]];
            const double g_c = kf * e.value / h;
            const double dv = (volt(x_new, e.a) - volt(x_new, e.b)) - (volt(st.x, e.a) - volt(st.x, e.b));
            st.cap_i[j] = g_c * dv - (trap ? st.cap_i[j] : 0.0);
        }
        for (Eigen::Index j = 0; j < k; ++j) {
            const auto& e = net_.elements[vars_[j]];
            const double vj = volt(x_new, e.a) - volt(x_new, e.b);
            const double q = extended_charge(vj, e.varactor);
            st.var_i[j] = kf / h * (q - st.var_q[j]) - (trap ? st.var_i[j] : 0.0);
            st.var_q[j] = q;
            st.var_v(j) = vj;
        }
        st.x = x_new;
        return true;
    }

    const CircuitNetwork& net_;
    const TransientOptions& opt_;
    double dt_;
    int n_;
    int m_;
    std::vector<std::size_t> caps_, vars_, inds_;
    std::vector<Level> levels_;
    std::vector<double> last_residual_;
    bool euler_ = false;
};

}  // namespace

TimeSeries transient_run(const CircuitNetwork& net, double t_end, double dt, const TransientOptions& options) {
    net.validate(true);
    if (!(dt > 0.0) || !(t_end > 0.0)) throw DomainError("transient_run: dt and t_end must be > 0");
    if (options.max_dt_halvings < 0) throw DomainError("transient_run: max_dt_halvings must be >= 0");
    if (!options.relax_preconditions) {
        for (const auto& e : net.elements) {
            if (e.kind != ElementKind::source || e.freq <= 0.0 || e.amplitude == 0.0) continue;
            if (dt > (1.0 + 1e-9) / (64.0 * e.freq)) {
                throw DomainError("transient_run: dt must be <= 1/(64 f) of every source");
            }
            if (t_end < (200.0 - 1e-9) / e.freq) {
                throw DomainError("transient_run: run must span at least 200 source periods");
            }
        }
    }

    TimeSeries ts;
    ts.dt = dt;
    if (options.record_nodes.empty()) {
        for (int i = 0; i < net.node_count(); ++i) ts.nodes.push_back(i);
    } else {
        ts.nodes = options.record_nodes;
    }
    for (int node : ts.nodes) {
        if (node < 0 || node >= net.node_count()) throw TopologyError("transient_run: record node out of range");
        ts.names.push_back(net.node_names[node]);
    }
    const auto steps = static_cast<long long>(std::llround(t_end / dt));
    const long long first = std::max(0LL, static_cast<long long>(std::ceil(options.record_from / dt - 1e-9)));
    const std::size_t reserve = static_cast<std::size_t>(std::max(0LL, steps + 1 - first));
    ts.voltages.assign(ts.nodes.size(), {});
    for (auto& v : ts.voltages) v.reserve(reserve);
    const int m = net.inductor_count();
    if (options.record_inductor_currents) {
        ts.inductor_currents.assign(m, {});
        for (auto& v : ts.inductor_currents) v.reserve(reserve);
    }
    ts.t_start = static_cast<double>(first) * dt;

    Integrator integ(net, dt, options);
    State st = integ.initial_state();
    const int n = net.node_count();
    auto record = [&]() {
        for (std::size_t c = 0; c < ts.nodes.size(); ++c) ts.voltages[c].push_back(st.x(ts.nodes[c]));
        if (options.record_inductor_currents) {
            for (int j = 0; j < m; ++j) ts.inductor_currents[j].push_back(st.x(n + j));
        }
    };
    if (first == 0) record();
    for (long long s = 0; s < steps; ++s) {
        if (s == 0 && !options.initial_voltages.empty()) {
            // One short backward-Euler substep makes the capacitor currents
            // consistent; the rest of the first step is trapezoidal.
            const int l = options.max_dt_halvings;
            const int sub = 1 << l;
            integ.set_euler(true);
            integ.advance(st, 0.0, l);
            integ.set_euler(false);
            for (int i = 1; i < sub; ++i) integ.advance(st, i * dt / sub, l);
        } else {
            integ.advance(st, static_cast<double>(s) * dt, 0);
        }
        if (s + 1 >= first) record();
    }
    return ts;
}

void write_csv(const TimeSeries& ts, std::ostream& out) {
    out << "time";
    for (const auto& name : ts.names) out << ',' << name;
    out << '\n';
    char buf[32];
    for (std::size_t i = 0; i < ts.samples(); ++i) {
        std::snprintf(buf, sizeof buf, "%.9e", ts.t_start + static_cast<double>(i) * ts.dt);
        out << buf;
        for (const auto& channel : ts.voltages) {
            std::snprintf(buf, sizeof buf, "%.9e", channel[i]);
            out << ',' << buf;
        }
        out << '\n';
    }
}

}  // namespace ringwave
