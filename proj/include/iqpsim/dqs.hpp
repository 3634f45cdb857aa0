#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "iqpsim/circuit.hpp"

namespace iqpsim {

// One lattice instance: nx columns, ny rows, and the random phase string
// tau (row-major: qubit index = row * nx + col). tau_i = 1 marks a pi/4
// initial phase, realized as a T gate.
struct DqsInstance {
    int nx = 0;
    int ny = 0;
    std::vector<std::uint8_t> tau;

    DqsInstance() = default;
    DqsInstance(int nx_, int ny_) : nx(nx_), ny(ny_), tau(std::size_t(nx_) * ny_, 0) {}

    int n_qubits() const { return nx * ny; }
    int qubit(int col, int row) const { return row * nx + col; }
};

struct LatticeEdge {
    int a = 0;
    int b = 0;
    enum class Orientation : std::uint8_t { horizontal, vertical } orientation;
    int schedule_step = 0;  // 1..4
};

// All grid edges with the entangling schedule:
//   step 1: even columns to their right neighbours
//   step 2: odd columns to their right neighbours
//   step 3: even rows to their down neighbours
//   step 4: odd rows to their down neighbours
// (0-based parity; edges within a step in row-major order). Every CZ layer
// commutes, so any consistent assignment yields identical distributions.
std::vector<LatticeEdge> lattice_edges(int nx, int ny);

// Uniform tau, deterministic per seed.
DqsInstance random_instance(int nx, int ny, std::uint64_t rng_seed);

// Perfect circuit: H on every qubit, CZ per edge in schedule order, T on
// every qubit with tau_i = 1, final H on every qubit (X-basis measurement
// as Z-basis after H). No correction tail.
Circuit compile_dqs(const DqsInstance& instance);

// Text format: "NX NY" then the tau bit string.
std::string to_text(const DqsInstance& instance);
DqsInstance dqs_from_text(const std::string& text);

}  // namespace iqpsim
