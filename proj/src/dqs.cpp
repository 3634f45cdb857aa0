#include "iqpsim/dqs.hpp"

#include <sstream>
#include <stdexcept>

#include "iqpsim/rng.hpp"

namespace iqpsim {

std::vector<LatticeEdge> lattice_edges(int nx, int ny) {
    std::vector<LatticeEdge> edges;
    auto qubit = [&](int col, int row) { return row * nx + col; };
    for (int step = 1; step <= 2; ++step)
        for (int row = 0; row < ny; ++row)
            for (int col = (step == 1) ? 0 : 1; col + 1 < nx; col += 2)
                edges.push_back(LatticeEdge{qubit(col, row), qubit(col + 1, row),
                                            LatticeEdge::Orientation::horizontal, step});
    for (int step = 3; step <= 4; ++step)
        for (int row = (step == 3) ? 0 : 1; row + 1 < ny; row += 2)
            for (int col = 0; col < nx; ++col)
                edges.push_back(LatticeEdge{qubit(col, row), qubit(col, row + 1),
                                            LatticeEdge::Orientation::vertical, step});
    return edges;
}

DqsInstance random_instance(int nx, int ny, std::uint64_t rng_seed) {
    if (nx < 1 || ny < 1)
        throw std::invalid_argument("random_instance: dimensions must be >= 1");
    DqsInstance inst(nx, ny);
    RandomSource rng(rng_seed);
    for (auto& bit : inst.tau) bit = rng.bit() ? 1 : 0;
    return inst;
}

Circuit compile_dqs(const DqsInstance& instance) {
    const int n = instance.n_qubits();
    if (int(instance.tau.size()) != n)
        throw std::invalid_argument("compile_dqs: tau length must be nx*ny");
    Circuit c{std::uint32_t(n)};
    for (int q = 0; q < n; ++q) c.push(Gate::single(GateKind::H, std::uint32_t(q)));
    for (const LatticeEdge& e : lattice_edges(instance.nx, instance.ny))
        c.push(Gate::cz(std::uint32_t(e.a), std::uint32_t(e.b)));
    for (int q = 0; q < n; ++q)
        if (instance.tau[q]) c.push(Gate::single(GateKind::T, std::uint32_t(q)));
    for (int q = 0; q < n; ++q) c.push(Gate::single(GateKind::H, std::uint32_t(q)));
    return c;
}

std::string to_text(const DqsInstance& instance) {
    std::ostringstream os;
    os << instance.nx << ' ' << instance.ny << "\n";
    for (auto bit : instance.tau) os << int(bit);
    os << "\n";
    return os.str();
}

DqsInstance dqs_from_text(const std::string& text) {
    std::istringstream is(text);
    int nx = 0, ny = 0;
    is >> nx >> ny;
    std::string bits;
    is >> bits;
    if (is.fail() || nx < 1 || ny < 1)
        throw std::invalid_argument("dqs text: bad header");
    if (int(bits.size()) != nx * ny)
        throw std::invalid_argument("dqs text: tau length must be nx*ny");
    DqsInstance inst(nx, ny);
    for (int i = 0; i < nx * ny; ++i) {
        if (bits[i] == '1')
            inst.tau[i] = 1;
        else if (bits[i] != '0')
            throw std::invalid_argument("dqs text: tau must be binary");
    }
    return inst;
}

}  // namespace iqpsim
