#include "iqpsim/iqp.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "iqpsim/rng.hpp"

namespace iqpsim {

double XProgram::theta() const {
    return std::numbers::pi * double(theta_num) / double(theta_den);
}

BipartiteGraph bipartite_graph(const XProgram& p) {
    BipartiteGraph g;
    g.n_a = p.n_a;
    g.n_g = p.n_g;
    for (int h = 0; h < p.n_g; ++h)
        for (int j = 0; j < p.n_a; ++j)
            if (p.bit(h, j)) g.edges.emplace_back(h, j);
    return g;
}

XProgram random_xprogram(int ng_lo, int ng_hi, int na_lo, int na_hi, double density,
                         std::uint64_t rng_seed) {
    if (ng_lo > ng_hi || na_lo > na_hi || ng_lo < 0 || na_lo < 0)
        throw std::invalid_argument("random_xprogram: empty dimension range");
    if (density < 0.0 || density > 1.0)
        throw std::invalid_argument("random_xprogram: density must be in [0,1]");
    RandomSource rng(rng_seed);
    const int ng = int(rng.uniform_int(std::uint64_t(ng_lo), std::uint64_t(ng_hi)));
    const int na = int(rng.uniform_int(std::uint64_t(na_lo), std::uint64_t(na_hi)));
    XProgram p(ng, na);
    for (int h = 0; h < ng; ++h)
        for (int j = 0; j < na; ++j)
            if (rng.bernoulli(density)) p.set_bit(h, j, 1);
    return p;
}

Circuit compile_mbqc(const XProgram& p) {
    if (!p.theta_is_pi_over_8())
        throw std::invalid_argument(
            "compile_mbqc: only theta = pi/8 is supported (got pi*" +
            std::to_string(p.theta_num) + "/" + std::to_string(p.theta_den) + ")");

    const std::uint32_t n = std::uint32_t(p.n_a + p.n_g);
    const auto gate_qubit = [&](int h) { return std::uint32_t(p.n_a + h); };
    Circuit c(n);

    for (std::uint32_t q = 0; q < n; ++q) c.push(Gate::single(GateKind::H, q));
    for (int h = 0; h < p.n_g; ++h)
        for (int j = 0; j < p.n_a; ++j)
            if (p.bit(h, j)) c.push(Gate::cz(gate_qubit(h), std::uint32_t(j)));
    // Measurement of each gate qubit in the rotated basis: H X T H, applied
    // in circuit order H, T, X, H.
    for (int h = 0; h < p.n_g; ++h) {
        c.push(Gate::single(GateKind::H, gate_qubit(h)));
        c.push(Gate::single(GateKind::T, gate_qubit(h)));
        c.push(Gate::single(GateKind::X, gate_qubit(h)));
        c.push(Gate::single(GateKind::H, gate_qubit(h)));
    }
    for (int j = 0; j < p.n_a; ++j) c.push(Gate::single(GateKind::H, std::uint32_t(j)));

    // Corrections replay the edge pattern with the gate qubits as controls;
    // equivalent to classical post-processing, so they sit in the tail.
    c.mark_tail();
    for (int h = 0; h < p.n_g; ++h)
        for (int j = 0; j < p.n_a; ++j)
            if (p.bit(h, j)) c.push_tail(Gate::cx(gate_qubit(h), std::uint32_t(j)));
    return c;
}

double direct_probability(const XProgram& p, const Outcome& x, int max_qubits) {
    if (p.n_a > max_qubits)
        throw std::invalid_argument("direct_probability: qubit cap exceeded");
    if (int(x.size()) != p.n_a)
        throw std::invalid_argument("direct_probability: outcome length must be n_a");

    const std::size_t dim = std::size_t(1) << p.n_a;
    std::vector<std::complex<double>> state(dim, 0.0), next(dim);
    state[0] = 1.0;
    const double ct = std::cos(p.theta());
    const std::complex<double> ist(0.0, std::sin(p.theta()));

    for (int h = 0; h < p.n_g; ++h) {
        std::size_t mask = 0;
        for (int j = 0; j < p.n_a; ++j)
            if (p.bit(h, j)) mask |= std::size_t(1) << j;
        for (std::size_t i = 0; i < dim; ++i)
            next[i] = ct * state[i] + ist * state[i ^ mask];
        state.swap(next);
    }

    std::size_t index = 0;
    for (std::size_t j = 0; j < x.size(); ++j)
        if (x.bits[j]) index |= std::size_t(1) << j;
    return std::norm(state[index]);
}

std::string to_text(const XProgram& p) {
    std::ostringstream os;
    os << p.n_g << ' ' << p.n_a << ' ' << p.theta_num << '/' << p.theta_den << "\n";
    for (int h = 0; h < p.n_g; ++h) {
        for (int j = 0; j < p.n_a; ++j) os << int(p.bit(h, j));
        os << "\n";
    }
    return os.str();
}

XProgram xprogram_from_text(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line))
        throw std::invalid_argument("x-program text: missing header");
    std::istringstream header(line);
    int ng = 0, na = 0, num = 0, den = 0;
    char slash = 0;
    header >> ng >> na >> num >> slash >> den;
    if (header.fail() || slash != '/' || ng < 0 || na < 0 || den == 0)
        throw std::invalid_argument("x-program text: bad header: " + line);
    XProgram p(ng, na);
    p.theta_num = num;
    p.theta_den = den;
    for (int h = 0; h < ng; ++h) {
        if (!std::getline(is, line) || int(line.size()) < na)
            throw std::invalid_argument("x-program text: missing row " + std::to_string(h));
        for (int j = 0; j < na; ++j) {
            if (line[j] == '1')
                p.set_bit(h, j, 1);
            else if (line[j] != '0')
                throw std::invalid_argument("x-program text: bad row: " + line);
        }
    }
    return p;
}

}  // namespace iqpsim
