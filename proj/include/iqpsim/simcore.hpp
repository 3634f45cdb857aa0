#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "iqpsim/circuit.hpp"
#include "iqpsim/pathsum.hpp"

namespace iqpsim {

// Diagonal T expansion: T = alpha*I + beta*Z with
//   alpha = (1 + e^{i pi/4}) / 2,  |alpha| = cos(pi/8)
//   beta  = (1 - e^{i pi/4}) / 2,  |beta|  = sin(pi/8)
// so the 1-norm of the 2^t expansion weights is (cos pi/8 + sin pi/8)^t
// = 2^{0.38586 t}, strictly below 2^{t/2}.
std::complex<double> t_expansion_alpha();
std::complex<double> t_expansion_beta();

// Product of alpha/beta over the selector bits.
std::complex<double> expansion_weight(const std::vector<std::uint8_t>& selector);

// (cos pi/8 + sin pi/8)^t, the total 1-norm of the expansion weights.
double expansion_weight_norm1(std::size_t t);

// Exact amplitude <x|U|0^n> by summing all 2^t selector branches, each a
// Clifford amplitude. Polynomial in qubits, exponential in t; throws when
// t_count(c) exceeds max_t.
std::complex<double> exact_t_sum_amplitude(const Circuit& c, const Outcome& x,
                                           std::size_t max_t = 22);

double exact_t_sum_probability(const Circuit& c, const Outcome& x, std::size_t max_t = 22);

struct EstimatorConfig {
    std::uint64_t samples_k = 1;
    std::uint64_t rng_seed = 0;
};

// Sampling budget giving a single-call standard deviation well under one:
// 4 * ||w||_1^2, capped at 1e5.
std::uint64_t default_samples_k(std::size_t t);

// Unbiased Monte-Carlo estimate of |<x|U|0^n>|^2. Two independent amplitude
// estimates are formed by importance-sampling selector strings with
// P(bit = 1) = sin(pi/8) / (cos(pi/8) + sin(pi/8)) per T gate, and their
// product Re(A1 * conj(A2)) removes the squaring bias. Estimates may fall
// below 0 or exceed 1 for small k; the expectation is exact. Cost is
// 2k Clifford evaluations regardless of t. Clifford circuits short-circuit
// to the exact probability with zero variance.
double sparse_estimate_probability(const Circuit& c, const Outcome& x,
                                   const EstimatorConfig& cfg);

}  // namespace iqpsim
