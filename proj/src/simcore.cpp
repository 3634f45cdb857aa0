#include "iqpsim/simcore.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "iqpsim/rng.hpp"

namespace iqpsim {

namespace {
const double kPi8 = std::numbers::pi / 8.0;
}

std::complex<double> t_expansion_alpha() {
    return (std::complex<double>(1.0, 0.0) + std::polar(1.0, 2.0 * kPi8)) * 0.5;
}

std::complex<double> t_expansion_beta() {
    return (std::complex<double>(1.0, 0.0) - std::polar(1.0, 2.0 * kPi8)) * 0.5;
}

std::complex<double> expansion_weight(const std::vector<std::uint8_t>& selector) {
    const auto a = t_expansion_alpha();
    const auto b = t_expansion_beta();
    std::complex<double> w(1.0, 0.0);
    for (std::uint8_t bit : selector) w *= bit ? b : a;
    return w;
}

double expansion_weight_norm1(std::size_t t) {
    return std::pow(std::cos(kPi8) + std::sin(kPi8), double(t));
}

std::complex<double> exact_t_sum_amplitude(const Circuit& c, const Outcome& x,
                                           std::size_t max_t) {
    const std::size_t t = t_count(c);
    if (t > max_t)
        throw std::invalid_argument("exact_t_sum_amplitude: T-count cap exceeded (" +
                                    std::to_string(t) + " > " + std::to_string(max_t) + ")");
    AmplitudeKernel kernel(c, x);
    if (!kernel.feasible()) return {0.0, 0.0};
    if (t == 0) return kernel.evaluate(nullptr);

    // Weight depends only on the selector popcount.
    const auto a = t_expansion_alpha();
    const auto b = t_expansion_beta();
    std::vector<std::complex<double>> w_by_pop(t + 1);
    for (std::size_t p = 0; p <= t; ++p)
        w_by_pop[p] = std::pow(a, double(t - p)) * std::pow(b, double(p));

    std::complex<double> sum(0.0, 0.0);
    for (std::uint64_t s = 0; s < (std::uint64_t(1) << t); ++s)
        sum += w_by_pop[std::size_t(std::popcount(s))] * kernel.evaluate_mask(s);
    return sum;
}

double exact_t_sum_probability(const Circuit& c, const Outcome& x, std::size_t max_t) {
    return std::norm(exact_t_sum_amplitude(c, x, max_t));
}

std::uint64_t default_samples_k(std::size_t t) {
    const double norm1 = expansion_weight_norm1(t);
    const double k = std::ceil(4.0 * norm1 * norm1);
    return std::uint64_t(std::min(k, 1e5));
}

double sparse_estimate_probability(const Circuit& c, const Outcome& x,
                                   const EstimatorConfig& cfg) {
    if (cfg.samples_k < 1)
        throw std::invalid_argument("sparse_estimate_probability: samples_k must be >= 1");
    AmplitudeKernel kernel(c, x);
    if (!kernel.feasible()) return 0.0;
    const std::size_t t = kernel.t_count();
    if (t == 0) return std::norm(kernel.evaluate(nullptr));

    const double norm1 = expansion_weight_norm1(t);
    const double p_one = std::sin(kPi8) / (std::cos(kPi8) + std::sin(kPi8));
    // phase(alpha) = e^{i pi/8}, phase(beta) = e^{-i 3 pi/8}
    const std::complex<double> phase0 = std::polar(1.0, kPi8);
    const std::complex<double> phase1 = std::polar(1.0, -3.0 * kPi8);

    RandomSource rng(cfg.rng_seed);
    std::vector<std::uint8_t> selector(t);

    auto amplitude_estimate = [&]() {
        std::complex<double> acc(0.0, 0.0);
        for (std::uint64_t i = 0; i < cfg.samples_k; ++i) {
            std::complex<double> phase(1.0, 0.0);
            for (std::size_t j = 0; j < t; ++j) {
                selector[j] = rng.bernoulli(p_one) ? 1 : 0;
                phase *= selector[j] ? phase1 : phase0;
            }
            acc += phase * kernel.evaluate(selector.data());
        }
        return acc * (norm1 / double(cfg.samples_k));
    };

    const std::complex<double> a1 = amplitude_estimate();
    const std::complex<double> a2 = amplitude_estimate();
    return (a1 * std::conj(a2)).real();
}

}  // namespace iqpsim
