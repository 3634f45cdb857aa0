#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "iqpsim/circuit.hpp"
#include "iqpsim/merit.hpp"
#include "iqpsim/simcore.hpp"
#include "iqpsim/statevector.hpp"

using namespace iqpsim;

namespace {

const double kPi8 = std::numbers::pi / 8.0;

Circuit random_mixed(std::mt19937_64& rng, std::uint32_t n, int gates, int t_budget) {
    Circuit c(n);
    for (int i = 0; i < gates; ++i) {
        GateKind kind = static_cast<GateKind>(rng() % 8);
        if (kind == GateKind::T && t_budget == 0) kind = GateKind::S;
        if (kind == GateKind::T) --t_budget;
        std::uint32_t q0 = rng() % n, q1 = q0;
        if (is_two_qubit(kind)) {
            if (n < 2) kind = GateKind::H;
            else
                while (q1 == q0) q1 = rng() % n;
        }
        c.push(Gate{kind, q0, q1});
    }
    return c;
}

}  // namespace

TEST_CASE("expansion constants") {
    CHECK(std::abs(std::abs(t_expansion_alpha()) - std::cos(kPi8)) < 1e-15);
    CHECK(std::abs(std::abs(t_expansion_beta()) - std::sin(kPi8)) < 1e-15);
    // alpha + beta = 1 and alpha - beta = e^{i pi/4}: T = alpha I + beta Z
    CHECK(std::abs(t_expansion_alpha() + t_expansion_beta() -
                   std::complex<double>(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(t_expansion_alpha() - t_expansion_beta() - std::polar(1.0, 2 * kPi8)) <
          1e-15);
}

TEST_CASE("expansion weights") {
    CHECK(std::abs(expansion_weight({0, 0, 0, 0}) - std::pow(t_expansion_alpha(), 4.0)) <
          1e-15);
    CHECK(std::abs(expansion_weight({1}) - t_expansion_beta()) < 1e-15);
    CHECK(std::abs(std::abs(expansion_weight({1})) - 0.3826834323650898) < 1e-12);
}

TEST_CASE("weight 1-norm matches brute-force enumeration") {
    // independent oracle: sum |weight| over all 16 selectors at t = 4
    double brute = 0.0;
    for (int s = 0; s < 16; ++s) {
        std::vector<std::uint8_t> sel(4);
        for (int j = 0; j < 4; ++j) sel[j] = (s >> j) & 1;
        brute += std::abs(expansion_weight(sel));
    }
    CHECK(brute == doctest::Approx(2.914213562373095).epsilon(1e-12));
    CHECK(expansion_weight_norm1(4) == doctest::Approx(brute).epsilon(1e-12));
    // growth rate stays below 2^{t/2}
    CHECK(expansion_weight_norm1(10) < std::pow(2.0, 5.0));
}

TEST_CASE("exact expansion equals the Clifford engine at t = 0") {
    Circuit c(2);
    c.push(Gate::single(GateKind::H, 0));
    c.push(Gate::single(GateKind::H, 1));
    c.push(Gate::cz(0, 1));
    Outcome x = Outcome::from_value(2, 0b11);
    CHECK(std::abs(exact_t_sum_amplitude(c, x) - std::complex<double>(-0.5, 0.0)) < 1e-12);
}

TEST_CASE("single-qubit analytic T case") {
    Circuit c(1);
    c.push(Gate::single(GateKind::H, 0));
    c.push(Gate::single(GateKind::T, 0));
    c.push(Gate::single(GateKind::H, 0));
    Outcome x = Outcome::from_value(1, 0);
    auto a = exact_t_sum_amplitude(c, x);
    CHECK(std::abs(a - t_expansion_alpha()) < 1e-12);
    CHECK(std::norm(a) == doctest::Approx(0.8535533905932737).epsilon(1e-12));
}

TEST_CASE("two-qubit T case against the dense oracle") {
    Circuit c(2);
    c.push(Gate::single(GateKind::H, 0));
    c.push(Gate::single(GateKind::H, 1));
    c.push(Gate::cz(0, 1));
    c.push(Gate::single(GateKind::T, 0));
    c.push(Gate::single(GateKind::H, 0));
    c.push(Gate::single(GateKind::H, 1));
    Outcome x = Outcome::from_value(2, 0);
    auto a = exact_t_sum_amplitude(c, x);
    CHECK(std::abs(a - statevector_amplitude(c, x)) < 1e-9);
    CHECK(std::abs(a - std::complex<double>(0.5, 0.0)) < 1e-12);
}

TEST_CASE("exact expansion matches the dense oracle on random circuits") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 60; ++trial) {
        const std::uint32_t n = 1 + rng() % 8;
        Circuit c = random_mixed(rng, n, 10 + int(rng() % 40), 6);
        Outcome x = Outcome::from_value(n, rng() & ((std::uint64_t(1) << n) - 1));
        CHECK(std::abs(exact_t_sum_amplitude(c, x) - statevector_amplitude(c, x)) < 1e-9);
    }
}

TEST_CASE("probability normalization under the exact engine") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 8; ++trial) {
        const std::uint32_t n = 2 + rng() % 4;
        Circuit c = random_mixed(rng, n, 20, 4);
        double total = 0.0;
        for (std::uint64_t v = 0; v < (std::uint64_t(1) << n); ++v)
            total += exact_t_sum_probability(c, Outcome::from_value(n, v));
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("t-count cap is enforced") {
    Circuit c(1);
    for (int i = 0; i < 25; ++i) c.push(Gate::single(GateKind::T, 0));
    CHECK_THROWS_AS(exact_t_sum_amplitude(c, Outcome(1)), std::invalid_argument);
    CHECK_NOTHROW(exact_t_sum_amplitude(c, Outcome(1), 25));
}

TEST_CASE("default sampling budget") {
    CHECK(default_samples_k(0) == 4);
    CHECK(default_samples_k(10) ==
          std::uint64_t(std::ceil(4.0 * std::pow(expansion_weight_norm1(10), 2.0))));
    CHECK(default_samples_k(40) == 100000);  // cap
}

TEST_CASE("sparse estimator is exact and deterministic on Clifford circuits") {
    Circuit c(2);
    c.push(Gate::single(GateKind::H, 0));
    c.push(Gate::single(GateKind::H, 1));
    c.push(Gate::cz(0, 1));
    Outcome x = Outcome::from_value(2, 0b11);
    EstimatorConfig cfg{50, 123};
    CHECK(sparse_estimate_probability(c, x, cfg) == doctest::Approx(0.25).epsilon(1e-12));
    cfg.rng_seed = 999;  // zero variance: seed is irrelevant
    CHECK(sparse_estimate_probability(c, x, cfg) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("sparse estimator is seed deterministic") {
    Circuit c(1);
    c.push(Gate::single(GateKind::H, 0));
    c.push(Gate::single(GateKind::T, 0));
    c.push(Gate::single(GateKind::H, 0));
    Outcome x = Outcome::from_value(1, 0);
    EstimatorConfig cfg{10, 42};
    const double first = sparse_estimate_probability(c, x, cfg);
    CHECK(sparse_estimate_probability(c, x, cfg) == first);
    cfg.rng_seed = 43;
    CHECK(sparse_estimate_probability(c, x, cfg) != first);
}

TEST_CASE("sparse estimator converges to the exact value") {
    Circuit c(1);
    c.push(Gate::single(GateKind::H, 0));
    c.push(Gate::single(GateKind::T, 0));
    c.push(Gate::single(GateKind::H, 0));
    Outcome x = Outcome::from_value(1, 0);

    const int reps = 2000;
    std::vector<double> estimates(reps);
    for (int r = 0; r < reps; ++r)
        estimates[r] =
            sparse_estimate_probability(c, x, EstimatorConfig{10, std::uint64_t(r)});
    const double m = mean(estimates);
    const double se = sample_std(estimates) / std::sqrt(double(reps));
    CHECK(std::abs(m - 0.8535533905932737) < 4.0 * se);
}

TEST_CASE("sparse estimator rejects a zero sample budget") {
    Circuit c(1);
    c.push(Gate::single(GateKind::H, 0));
    CHECK_THROWS_AS(sparse_estimate_probability(c, Outcome(1), EstimatorConfig{0, 1}),
                    std::invalid_argument);
}
