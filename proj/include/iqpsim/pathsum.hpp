#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "iqpsim/circuit.hpp"

namespace iqpsim {

// Phase-exact Clifford amplitude kernel.
//
// The state after a prefix of Clifford gates is kept as a path sum
//
//   2^{-h/2} * i^{gamma} * sum_{u in F_2^h} i^{phi(u)} |f(u)>
//
// with one binary path variable per Hadamard, phi a Z4-valued quadratic form
// (linear part d, pair part M), and f an affine map giving each qubit's bit.
// Diagonal and permutation gates update (phi, f) in place; the requested
// outcome imposes affine constraints which are eliminated by substitution.
// The remaining unconstrained quadratic Gauss sum is evaluated in
// O(free_vars^3 / 64) word operations, yielding the exact amplitude as
// omega^k * 2^{-m/2} with omega = e^{i pi/4}.
//
// T gates contribute no phase at build time. Each one is recorded as a
// "tap": the affine form of its qubit at that point. evaluate(selector)
// computes the amplitude of the circuit with every T replaced by I
// (selector bit 0) or Z (bit 1), so a single kernel serves all 2^t
// specializations of the diagonal T expansion.
class AmplitudeKernel {
  public:
    // Builds the kernel for <x| C |0^n>. The circuit may contain T gates;
    // they become taps. Throws std::invalid_argument on an invalid circuit
    // or an outcome of the wrong length.
    AmplitudeKernel(const Circuit& c, const Outcome& x);

    std::size_t t_count() const { return tap_consts_.size(); }

    // False when the outcome is unreachable for every selector; evaluate()
    // then returns exactly 0.
    bool feasible() const { return feasible_; }

    // selector points at t_count() bits (may be null when t_count() == 0).
    // Not thread-safe: evaluation reuses an internal workspace.
    std::complex<double> evaluate(const std::uint8_t* selector);
    std::complex<double> evaluate(const std::vector<std::uint8_t>& selector);

    // Convenience for t_count() <= 64: bit i of `selector` drives tap i.
    std::complex<double> evaluate_mask(std::uint64_t selector);

  private:
    struct PhaseState {
        std::vector<std::uint64_t> d0, d1;  // Z4 linear part, bit planes
        std::vector<std::uint64_t> rows;    // symmetric pair matrix, h x W
        std::vector<std::uint64_t> active;
        int gamma4 = 0;
    };

    void add_masked(PhaseState& ps, int value, const std::uint64_t* mask);
    void toggle_pairs_within(PhaseState& ps, const std::uint64_t* mask);
    void add_two_xy(PhaseState& ps, const std::uint64_t* a, const std::uint64_t* b);
    void substitute(PhaseState& ps, int var, int c, const std::uint64_t* expr);
    std::complex<double> gauss_sum(PhaseState& ps);

    int h_ = 0;       // total path variables
    int words_ = 1;   // words per variable mask
    bool feasible_ = true;
    PhaseState base_;
    PhaseState work_;
    std::vector<std::uint64_t> tap_masks_;  // t x words_
    std::vector<std::uint8_t> tap_consts_;
    std::vector<std::uint64_t> scratch_;    // row buffer for gauss_sum
};

// Exact amplitude <x| C |0^n> of a Clifford-only circuit. Throws
// std::invalid_argument when the circuit contains a T gate.
std::complex<double> clifford_amplitude(const Circuit& c, const Outcome& x);

}  // namespace iqpsim
