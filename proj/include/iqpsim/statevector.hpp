#pragma once

#include <complex>
#include <vector>

#include "iqpsim/circuit.hpp"

namespace iqpsim {

// Dense brute-force engine. Exact up to double rounding; used as the
// reference oracle for every other engine.
class Statevector {
  public:
    explicit Statevector(std::uint32_t n_qubits);

    std::uint32_t n_qubits() const { return n_; }
    const std::vector<std::complex<double>>& amplitudes() const { return amp_; }

    void apply(const Gate& g);
    void apply(const Circuit& c);

    std::complex<double> amplitude(const Outcome& x) const;
    double probability(const Outcome& x) const;

  private:
    std::uint32_t n_;
    std::vector<std::complex<double>> amp_;
};

// <x| U(circuit) |0^n> by dense evolution. Throws std::invalid_argument when
// n_qubits exceeds the cap.
std::complex<double> statevector_amplitude(const Circuit& c, const Outcome& x,
                                           std::uint32_t max_qubits = 24);

double statevector_probability(const Circuit& c, const Outcome& x,
                               std::uint32_t max_qubits = 24);

}  // namespace iqpsim
