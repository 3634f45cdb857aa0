#include "iqpsim/statevector.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace iqpsim {

namespace {
const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;
const std::complex<double> kI(0.0, 1.0);
}  // namespace

Statevector::Statevector(std::uint32_t n_qubits)
    : n_(n_qubits), amp_(std::size_t(1) << n_qubits) {
    amp_[0] = 1.0;
}

void Statevector::apply(const Gate& g) {
    const std::size_t dim = amp_.size();
    const std::size_t bit0 = std::size_t(1) << g.q0;
    switch (g.kind) {
        case GateKind::H:
            for (std::size_t i = 0; i < dim; ++i) {
                if (i & bit0) continue;
                auto a = amp_[i], b = amp_[i | bit0];
                amp_[i] = (a + b) * kInvSqrt2;
                amp_[i | bit0] = (a - b) * kInvSqrt2;
            }
            break;
        case GateKind::S:
            for (std::size_t i = 0; i < dim; ++i)
                if (i & bit0) amp_[i] *= kI;
            break;
        case GateKind::T: {
            const std::complex<double> phase =
                std::polar(1.0, std::numbers::pi / 4.0);
            for (std::size_t i = 0; i < dim; ++i)
                if (i & bit0) amp_[i] *= phase;
            break;
        }
        case GateKind::X:
            for (std::size_t i = 0; i < dim; ++i)
                if (!(i & bit0)) std::swap(amp_[i], amp_[i | bit0]);
            break;
        case GateKind::Y:
            for (std::size_t i = 0; i < dim; ++i) {
                if (i & bit0) continue;
                auto a = amp_[i], b = amp_[i | bit0];
                amp_[i] = -kI * b;
                amp_[i | bit0] = kI * a;
            }
            break;
        case GateKind::Z:
            for (std::size_t i = 0; i < dim; ++i)
                if (i & bit0) amp_[i] = -amp_[i];
            break;
        case GateKind::CZ: {
            const std::size_t bit1 = std::size_t(1) << g.q1;
            for (std::size_t i = 0; i < dim; ++i)
                if ((i & bit0) && (i & bit1)) amp_[i] = -amp_[i];
            break;
        }
        case GateKind::CX: {
            const std::size_t bit1 = std::size_t(1) << g.q1;  // target
            for (std::size_t i = 0; i < dim; ++i)
                if ((i & bit0) && !(i & bit1)) std::swap(amp_[i], amp_[i | bit1]);
            break;
        }
    }
}

void Statevector::apply(const Circuit& c) {
    for (const Gate& g : c.gates) apply(g);
}

std::complex<double> Statevector::amplitude(const Outcome& x) const {
    if (x.size() != n_)
        throw std::invalid_argument("outcome length does not match qubit count");
    std::size_t index = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x.bits[i]) index |= std::size_t(1) << i;
    return amp_[index];
}

double Statevector::probability(const Outcome& x) const {
    return std::norm(amplitude(x));
}

std::complex<double> statevector_amplitude(const Circuit& c, const Outcome& x,
                                           std::uint32_t max_qubits) {
    if (c.n_qubits > max_qubits)
        throw std::invalid_argument("statevector_amplitude: qubit cap exceeded (" +
                                    std::to_string(c.n_qubits) + " > " +
                                    std::to_string(max_qubits) + ")");
    Statevector sv(c.n_qubits);
    sv.apply(c);
    return sv.amplitude(x);
}

double statevector_probability(const Circuit& c, const Outcome& x,
                               std::uint32_t max_qubits) {
    return std::norm(statevector_amplitude(c, x, max_qubits));
}

}  // namespace iqpsim
