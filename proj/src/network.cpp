#include "ringwave/network.hpp"
#include "ringwave/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ringwave {

using constants::pi;
using constants::two_pi;

int CircuitNetwork::add_node(std::string name) {
    node_names.push_back(std::move(name));
    return node_count() - 1;
}

int CircuitNetwork::node(std::string_view name) const {
    for (int i = 0; i < node_count(); ++i) {
        if (node_names[i] == name) return i;
    }
    throw TopologyError("no node named '" + std::string(name) + "'");
}

const NetworkPort& CircuitNetwork::port(std::string_view name) const {
    for (const auto& p : ports) {
        if (p.name == name) return p;
    }
    throw TopologyError("no port named '" + std::string(name) + "'");
}

void CircuitNetwork::add_resistor(int a, int b, double r, std::string name) {
    Element e;
    e.kind = ElementKind::resistor;
    e.a = a;
    e.b = b;
    e.value = r;
    e.name = std::move(name);
    elements.push_back(std::move(e));
}

void CircuitNetwork::add_capacitor(int a, int b, double c, std::string name) {
    Element e;
    e.kind = ElementKind::capacitor;
    e.a = a;
    e.b = b;
    e.value = c;
    e.name = std::move(name);
    elements.push_back(std::move(e));
}

void CircuitNetwork::add_inductor(int a, int b, double l, double r_series, std::string name) {
    Element e;
    e.kind = ElementKind::inductor;
    e.a = a;
    e.b = b;
    e.value = l;
    e.r_series = r_series;
    e.name = std::move(name);
    elements.push_back(std::move(e));
}

void CircuitNetwork::add_varactor(int a, int b, const Varactor& var, std::string name) {
    Element e;
    e.kind = ElementKind::varactor;
    e.a = a;
    e.b = b;
    e.varactor = var;
    e.name = std::move(name);
    elements.push_back(std::move(e));
}

void CircuitNetwork::add_source(int a, int b, double amplitude, double freq, double r_series,
                                double phase, std::string name) {
    Element e;
    e.kind = ElementKind::source;
    e.a = a;
    e.b = b;
    e.amplitude = amplitude;
    e.freq = freq;
    e.r_series = r_series;
    e.phase = phase;
    e.name = std::move(name);
    elements.push_back(std::move(e));
}

int CircuitNetwork::inductor_count() const {
    return static_cast<int>(std::count_if(elements.begin(), elements.end(),
                                          [](const Element& e) { return e.kind == ElementKind::inductor; }));
}

bool CircuitNetwork::has_nonlinear() const {
    return std::any_of(elements.begin(), elements.end(),
                       [](const Element& e) { return e.kind == ElementKind::varactor; });
}

void CircuitNetwork::validate(bool require_dc_path) const {
    const int n = node_count();
    if (n == 0) throw TopologyError("network has no nodes");
    for (const auto& e : elements) {
        if (e.a < kGround || e.a >= n || e.b < kGround || e.b >= n) {
            throw TopologyError("element '" + e.name + "' references a missing node");
        }
        if (e.a == e.b) throw TopologyError("element '" + e.name + "' is shorted on itself");
        switch (e.kind) {
        case ElementKind::resistor:
            if (!(e.value > 0.0)) throw TopologyError("resistor '" + e.name + "' must be > 0");
            break;
        case ElementKind::capacitor:
            if (!(e.value >= 0.0)) throw TopologyError("capacitor '" + e.name + "' must be >= 0");
            break;
        case ElementKind::inductor:
            if (!(e.value > 0.0) || !(e.r_series >= 0.0)) {
                throw TopologyError("inductor '" + e.name + "' needs L > 0 and R >= 0");
            }
            break;
        case ElementKind::varactor:
            e.varactor.validate();
            break;
        case ElementKind::source:
            if (!(e.r_series > 0.0)) throw TopologyError("source '" + e.name + "' needs a series resistance > 0");
            if (!std::isfinite(e.amplitude) || !(e.freq >= 0.0)) {
                throw TopologyError("source '" + e.name + "' has invalid amplitude or frequency");
            }
            break;
        }
    }
    for (const auto& p : ports) {
        if (p.node < 0 || p.node >= n) throw TopologyError("port '" + p.name + "' references a missing node");
    }
    if (!require_dc_path) return;

    // Union-find over DC-conducting elements; index n stands for ground.
    std::vector<int> parent(n + 1);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto idx = [&](int node) { return node == kGround ? n : node; };
    for (const auto& e : elements) {
        if (e.kind == ElementKind::capacitor || e.kind == ElementKind::varactor) continue;
        parent[find(idx(e.a))] = find(idx(e.b));
    }
    for (int i = 0; i < n; ++i) {
        if (find(i) != find(n)) {
            throw TopologyError("node '" + node_names[i] + "' has no DC path to ground");
        }
    }
}

CircuitNetwork build_nrr_network(const RingSpec& ring, const PortPair& ports, DriveMode mode,
                                 const NetworkOptions& options) {
    ring.validate();
    if (options.segments_per_half_cell < 1) throw TopologyError("need at least one segment per half cell");
    if (options.include_ports) {
        ports.doubler.validate();
        ports.divider.validate();
    }

    CircuitNetwork net;
    const int stations = ring.station_count();
    const int k = options.segments_per_half_cell;
    const LineSpec& line = ring.cell.line;
    const double seg_len = 0.5 * ring.cell.d / k;
    const double l_seg = line.inductance_per_m() * seg_len;
    const double c_seg = line.capacitance_per_m() * seg_len;
    const double r_seg = options.lossless ? 0.0 : 2.0 * line.alpha * line.z0 * seg_len;

    std::vector<int> station_node(stations);
    for (int s = 0; s < stations; ++s) station_node[s] = net.add_node("st" + std::to_string(s));

    std::vector<double> shunt_c(stations, 0.0);
    for (int s = 0; s < stations; ++s) {
        int prev = station_node[s];
        for (int j = 1; j <= k; ++j) {
            int next;
            if (j < k) {
                next = net.add_node("st" + std::to_string(s) + "." + std::to_string(j));
                shunt_c.push_back(0.0);
            } else {
                next = station_node[(s + 1) % stations];
            }
            net.add_inductor(prev, next, l_seg, r_seg, "Lline" + std::to_string(s) + "." + std::to_string(j));
            shunt_c[prev] += 0.5 * c_seg;
            shunt_c[next] += 0.5 * c_seg;
            prev = next;
        }
    }
    for (int i = 0; i < static_cast<int>(shunt_c.size()); ++i) {
        if (shunt_c[i] > 0.0) net.add_capacitor(i, kGround, shunt_c[i], "Cline" + std::to_string(i));
    }

    const Varactor& var = ring.cell.varactor;
    for (int n = 1; n <= ring.n_cells; ++n) {
        int node = station_node[2 * n - 1];
        if (var.r_s > 0.0 && !options.lossless) {
            const int junction = net.add_node("j" + std::to_string(n));
            net.add_resistor(node, junction, var.r_s, "Rs" + std::to_string(n));
            node = junction;
        }
        if (options.linear_varactors) {
            net.add_capacitor(node, kGround, capacitance(0.0, var), "Cv" + std::to_string(n));
        } else {
            net.add_varactor(node, kGround, var, "D" + std::to_string(n));
        }
    }
    if (!options.include_ports) return net;

    auto loss = [&](const PortNetwork& p, double l) { return options.lossless ? 0.0 : p.inductor_resistance(l); };

    // Port M: ring - L1 - C1 - port_M.
    const PortNetwork& pm = ports.doubler;
    const int m_mid = net.add_node("port_M.mid");
    const int m_port = net.add_node("port_M");
    net.add_inductor(station_node[ring.node_m], m_mid, pm.l1, loss(pm, pm.l1), "L1");
    net.add_capacitor(m_mid, m_port, pm.c1, "C1");
    if (pm.has_return_branch()) {
        const int r_mid = net.add_node("return_M");
        net.add_capacitor(station_node[ring.node_m], r_mid, pm.return_series_c(), "Cr");
        net.add_inductor(r_mid, kGround, pm.return_l, loss(pm, pm.return_l), "Lr");
        net.add_capacitor(r_mid, kGround, pm.return_tank_c(), "Ct");
    }

    // Port D: ring - L2 - port_D, L3 from port_D to ground.
    const PortNetwork& pd = ports.divider;
    const int d_port = net.add_node("port_D");
    net.add_inductor(station_node[ring.node_d], d_port, pd.l2, loss(pd, pd.l2), "L2");
    net.add_inductor(d_port, kGround, pd.l3, loss(pd, pd.l3), "L3");

    const bool drive_m = mode == DriveMode::divider;
    const int in_node = drive_m ? m_port : d_port;
    const int out_node = drive_m ? d_port : m_port;
    const double z_in = drive_m ? pm.z_ref : pd.z_ref;
    const double z_out = drive_m ? pd.z_ref : pm.z_ref;
    const double r_source = options.source_resistance > 0.0 ? options.source_resistance : z_in;
    net.add_source(in_node, kGround, options.source_amplitude, options.source_freq, r_source, 0.0, "Vin");
    net.add_resistor(out_node, kGround, z_out, "Rload");

    net.ports = {{"in", in_node, z_in}, {"out", out_node, z_out},
                 {"M", m_port, pm.z_ref}, {"D", d_port, pd.z_ref}};
    return net;
}

std::vector<cplx> ac_solve(const CircuitNetwork& net, double f, int inject_node) {
    net.validate(false);
    if (!(f > 0.0)) throw DomainError("ac_solve: f must be > 0");
    const int n = net.node_count();
    const double w = two_pi * f;
    Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(n, n);
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);

    auto stamp = [&](int a, int b, cplx adm) {
        if (a != kGround) y(a, a) += adm;
        if (b != kGround) y(b, b) += adm;
        if (a != kGround && b != kGround) {
            y(a, b) -= adm;
            y(b, a) -= adm;
        }
    };
    for (const auto& e : net.elements) {
        switch (e.kind) {
        case ElementKind::resistor:
            stamp(e.a, e.b, 1.0 / e.value);
            break;
        case ElementKind::capacitor:
            stamp(e.a, e.b, cplx{0.0, w * e.value});
            break;
        case ElementKind::varactor:
            stamp(e.a, e.b, cplx{0.0, w * capacitance(0.0, e.varactor)});
            break;
        case ElementKind::inductor:
            stamp(e.a, e.b, 1.0 / cplx{e.r_series, w * e.value});
            break;
        case ElementKind::source: {
            stamp(e.a, e.b, 1.0 / e.r_series);
            if (std::abs(e.freq - f) <= 1e-9 * f) {
                // A sin(wt + phase) = Re{A e^{j(phase - pi/2)} e^{jwt}}
                const cplx emf = std::polar(e.amplitude, e.phase - 0.5 * pi);
                if (e.a != kGround) rhs(e.a) += emf / e.r_series;
                if (e.b != kGround) rhs(e.b) -= emf / e.r_series;
            }
            break;
        }
        }
    }
    if (inject_node != kGround) {
        if (inject_node < 0 || inject_node >= n) throw TopologyError("ac_solve: injection node out of range");
        rhs(inject_node) += 1.0;
    }
    const Eigen::VectorXcd v = y.fullPivLu().solve(rhs);
    return {v.data(), v.data() + n};
}

cplx ac_impedance(const CircuitNetwork& net, double f, int node) {
    CircuitNetwork quiet = net;
    for (auto& e : quiet.elements) {
        if (e.kind == ElementKind::source) e.amplitude = 0.0;
    }
    return ac_solve(quiet, f, node).at(node);
}

double stored_energy(const CircuitNetwork& net, const std::vector<double>& node_v,
                     const std::vector<double>& inductor_i) {
    auto volt = [&](int node) { return node == kGround ? 0.0 : node_v.at(node); };
    double energy = 0.0;
    std::size_t li = 0;
    for (const auto& e : net.elements) {
        const double v = volt(e.a) - volt(e.b);
        switch (e.kind) {
        case ElementKind::capacitor:
            energy += 0.5 * e.value * v * v;
            break;
        case ElementKind::inductor: {
            const double i = inductor_i.at(li++);
            energy += 0.5 * e.value * i * i;
            break;
        }
        case ElementKind::varactor: {
            // W = integral of u C(u) du, composite Simpson.
            constexpr int kSteps = 128;
            const double h = v / kSteps;
            double acc = 0.0;
            for (int s = 0; s <= kSteps; ++s) {
                const double u = s * h;
                const double wgt = (s == 0 || s == kSteps) ? 1.0 : (s % 2 ? 4.0 : 2.0);
                acc += wgt * u * extended_capacitance(u, e.varactor);
            }
            energy += acc * h / 3.0;
            break;
        }
        default:
            break;
        }
    }
    return energy;
}

}  // namespace ringwave
