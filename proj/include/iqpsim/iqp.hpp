#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "iqpsim/circuit.hpp"

namespace iqpsim {

// An X-program: binary matrix Q (n_g rows of length n_a) plus the action
// angle, stored as the exact rational theta = pi * num / den. Row h applies
// exp(i theta X...X) on the application qubits where Q[h][j] = 1.
struct XProgram {
    int n_g = 0;
    int n_a = 0;
    std::vector<std::uint8_t> q;  // row-major n_g x n_a
    int theta_num = 1;
    int theta_den = 8;

    XProgram() = default;
    XProgram(int ng, int na) : n_g(ng), n_a(na), q(std::size_t(ng) * na, 0) {}

    std::uint8_t bit(int h, int j) const { return q[std::size_t(h) * n_a + j]; }
    void set_bit(int h, int j, std::uint8_t v) { q[std::size_t(h) * n_a + j] = v; }
    double theta() const;
    bool theta_is_pi_over_8() const { return theta_num * 8 == theta_den * 1; }
};

// Bipartite view of Q: gate vertex h is joined to application vertex j when
// Q[h][j] = 1.
struct BipartiteGraph {
    int n_a = 0;
    int n_g = 0;
    std::vector<std::pair<int, int>> edges;  // (gate h, application j)
};

BipartiteGraph bipartite_graph(const XProgram& p);

// Uniform dimensions from the inclusive ranges, i.i.d. Bernoulli(density)
// entries, theta = pi/8. Deterministic per seed.
XProgram random_xprogram(int ng_lo, int ng_hi, int na_lo, int na_hi, double density,
                         std::uint64_t rng_seed);

// Compiles the MBQC realization of the program onto n_a + n_g qubits
// (application qubits 0..n_a-1, gate qubits after):
//   H on all; CZ per graph edge; H,T,X,H on each gate qubit; H on each
//   application qubit; then a noiseless tail of CX corrections (gate qubit
//   controls) replaying the edge pattern. Only theta = pi/8 is accepted.
Circuit compile_mbqc(const XProgram& p);

// Direct evaluation of the X-program distribution: expands each
// exp(i theta X-product) as cos(theta) I + i sin(theta) X-product over a
// dense 2^{n_a} state. Independent of all circuit machinery; the oracle for
// the MBQC compilation. x ranges over application qubits only.
double direct_probability(const XProgram& p, const Outcome& x, int max_qubits = 20);

// Text format: "NG NA NUM/DEN" header (theta = pi * NUM / DEN), then n_g
// rows of bits.
std::string to_text(const XProgram& p);
XProgram xprogram_from_text(const std::string& text);

}  // namespace iqpsim
