#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "iqpsim/circuit.hpp"
#include "iqpsim/pathsum.hpp"
#include "iqpsim/statevector.hpp"

using namespace iqpsim;

namespace {

Circuit random_clifford(std::mt19937_64& rng, std::uint32_t n, int gates) {
    static const GateKind kinds[] = {GateKind::H, GateKind::S,  GateKind::X, GateKind::Y,
                                     GateKind::Z, GateKind::CZ, GateKind::CX};
    Circuit c(n);
    for (int i = 0; i < gates; ++i) {
        GateKind kind = kinds[rng() % 7];
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

TEST_CASE("clifford amplitude basics") {
    Circuit h(1);
    h.push(Gate::single(GateKind::H, 0));
    CHECK(std::abs(clifford_amplitude(h, Outcome::from_value(1, 0)) -
                   std::complex<double>(1.0 / std::numbers::sqrt2, 0.0)) < 1e-12);

    Circuit graph(2);
    graph.push(Gate::single(GateKind::H, 0));
    graph.push(Gate::single(GateKind::H, 1));
    graph.push(Gate::cz(0, 1));
    CHECK(std::abs(clifford_amplitude(graph, Outcome::from_value(2, 0b11)) -
                   std::complex<double>(-0.5, 0.0)) < 1e-12);
}

TEST_CASE("clifford amplitude tracks eighth-root phases") {
    // HSH|0> = e^{i pi/4}/sqrt2 |0> + ...
    Circuit c(1);
    c.push(Gate::single(GateKind::H, 0));
    c.push(Gate::single(GateKind::S, 0));
    c.push(Gate::single(GateKind::H, 0));
    auto a = clifford_amplitude(c, Outcome::from_value(1, 0));
    CHECK(std::abs(a - std::complex<double>(0.5, 0.5)) < 1e-12);
}

TEST_CASE("unreachable outcomes give exactly zero") {
    Circuit c(1);
    c.push(Gate::single(GateKind::X, 0));
    CHECK(clifford_amplitude(c, Outcome::from_value(1, 0)) == std::complex<double>(0.0));
}

TEST_CASE("clifford amplitude rejects T gates") {
    Circuit c(1);
    c.push(Gate::single(GateKind::T, 0));
    CHECK_THROWS_AS(clifford_amplitude(c, Outcome::from_value(1, 0)),
                    std::invalid_argument);
}

TEST_CASE("clifford engine matches the dense oracle") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 120; ++trial) {
        const std::uint32_t n = 1 + rng() % 10;
        Circuit c = random_clifford(rng, n, 10 + int(rng() % 50));
        Outcome x = Outcome::from_value(n, rng() & ((std::uint64_t(1) << n) - 1));
        auto fast = clifford_amplitude(c, x);
        auto dense = statevector_amplitude(c, x);
        CHECK(std::abs(fast - dense) < 1e-9);
    }
}

TEST_CASE("kernel evaluates T selector branches") {
    // HTH with T -> I gives HH = identity; with T -> Z gives HZH = X.
    Circuit c(1);
    c.push(Gate::single(GateKind::H, 0));
    c.push(Gate::single(GateKind::T, 0));
    c.push(Gate::single(GateKind::H, 0));
    AmplitudeKernel kernel(c, Outcome::from_value(1, 0));
    REQUIRE(kernel.t_count() == 1);
    CHECK(std::abs(kernel.evaluate_mask(0) - std::complex<double>(1.0, 0.0)) < 1e-12);
    CHECK(std::abs(kernel.evaluate_mask(1)) < 1e-12);
}
