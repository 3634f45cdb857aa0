#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "iqpsim/iqp.hpp"
#include "iqpsim/simcore.hpp"
#include "iqpsim/statevector.hpp"

using namespace iqpsim;

namespace {

// The running example: Q = [[1,0,1],[0,1,1]], theta = pi/8.
XProgram example_program() {
    XProgram p(2, 3);
    p.set_bit(0, 0, 1);
    p.set_bit(0, 2, 1);
    p.set_bit(1, 1, 1);
    p.set_bit(1, 2, 1);
    return p;
}

const double kCos4 = 0.7285533905932737;  // cos^4(pi/8)
const double kSin4 = 0.0214466094067263;  // sin^4(pi/8)

}  // namespace

TEST_CASE("random_xprogram is deterministic and bounded") {
    XProgram a = random_xprogram(5, 15, 5, 12, 0.5, 77);
    XProgram b = random_xprogram(5, 15, 5, 12, 0.5, 77);
    CHECK(a.n_g == b.n_g);
    CHECK(a.n_a == b.n_a);
    CHECK(a.q == b.q);
    CHECK(a.n_g >= 5);
    CHECK(a.n_g <= 15);
    CHECK(a.n_a >= 5);
    CHECK(a.n_a <= 12);
    CHECK(a.theta_is_pi_over_8());

    XProgram c = random_xprogram(5, 15, 5, 12, 0.5, 78);
    CHECK((c.n_g != a.n_g || c.n_a != a.n_a || c.q != a.q));
}

TEST_CASE("random_xprogram density") {
    XProgram zero = random_xprogram(4, 4, 4, 4, 0.0, 3);
    for (auto bit : zero.q) CHECK(bit == 0);

    long ones = 0, total = 0;
    for (int seed = 0; seed < 10000; ++seed) {
        XProgram p = random_xprogram(10, 10, 10, 10, 0.5, std::uint64_t(seed));
        for (auto bit : p.q) ones += bit;
        total += long(p.q.size());
    }
    const double density = double(ones) / double(total);
    CHECK(std::abs(density - 0.5) < 0.02);
}

TEST_CASE("random_xprogram rejects bad arguments") {
    CHECK_THROWS_AS(random_xprogram(5, 4, 1, 2, 0.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(random_xprogram(1, 2, 1, 2, 1.5, 1), std::invalid_argument);
}

TEST_CASE("bipartite graph edges") {
    BipartiteGraph g = bipartite_graph(example_program());
    REQUIRE(g.edges.size() == 4);
    CHECK(g.edges[0] == std::pair<int, int>(0, 0));
    CHECK(g.edges[1] == std::pair<int, int>(0, 2));
    CHECK(g.edges[2] == std::pair<int, int>(1, 1));
    CHECK(g.edges[3] == std::pair<int, int>(1, 2));

    XProgram empty(2, 3);
    CHECK(bipartite_graph(empty).edges.empty());

    XProgram identity(3, 3);
    for (int i = 0; i < 3; ++i) identity.set_bit(i, i, 1);
    CHECK(bipartite_graph(identity).edges.size() == 3);
}

TEST_CASE("compile_mbqc structure of the running example") {
    Circuit c = compile_mbqc(example_program());
    CHECK(c.n_qubits == 5);
    CHECK(t_count(c) == 2);
    CHECK(validate(c).empty());

    int cz = 0, cx = 0, h = 0, x = 0;
    for (const Gate& g : c.gates) {
        if (g.kind == GateKind::CZ) ++cz;
        if (g.kind == GateKind::CX) ++cx;
        if (g.kind == GateKind::H) ++h;
        if (g.kind == GateKind::X) ++x;
    }
    CHECK(cz == 4);
    CHECK(cx == 4);
    CHECK(h == 5 + 2 * 2 + 3);  // preparation + per-gate-qubit pair + application
    CHECK(x == 2);

    // corrections form the noiseless tail and replay the edge pattern with
    // gate-qubit controls
    CHECK(c.noiseless_tail_start == c.gates.size() - 4);
    for (std::size_t i = c.noiseless_tail_start; i < c.gates.size(); ++i) {
        CHECK(c.gates[i].kind == GateKind::CX);
        CHECK(c.gates[i].q0 >= 3);  // control is a gate qubit
        CHECK(c.gates[i].q1 < 3);
    }
}

TEST_CASE("compile_mbqc with no gate qubits is the identity") {
    XProgram p(0, 3);
    Circuit c = compile_mbqc(p);
    CHECK(c.n_qubits == 3);
    CHECK(t_count(c) == 0);
    CHECK(statevector_probability(c, Outcome(3)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("compile_mbqc t-count equals the program row count") {
    for (int seed = 0; seed < 20; ++seed) {
        XProgram p = random_xprogram(0, 6, 1, 6, 0.5, std::uint64_t(seed));
        CHECK(t_count(compile_mbqc(p)) == std::size_t(p.n_g));
    }
}

TEST_CASE("compile_mbqc rejects other angles") {
    XProgram p = example_program();
    p.theta_num = 1;
    p.theta_den = 4;
    CHECK_THROWS_AS(compile_mbqc(p), std::invalid_argument);
}

TEST_CASE("direct probability of the running example") {
    XProgram p = example_program();
    CHECK(direct_probability(p, Outcome::from_string("000")) ==
          doctest::Approx(kCos4).epsilon(1e-9));
    CHECK(direct_probability(p, Outcome::from_string("110")) ==
          doctest::Approx(kSin4).epsilon(1e-9));
}

TEST_CASE("direct probability at theta = 0 is concentrated on zero") {
    XProgram p = example_program();
    p.theta_num = 0;
    p.theta_den = 8;
    CHECK(direct_probability(p, Outcome(3)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("direct probabilities normalize") {
    for (int seed = 0; seed < 10; ++seed) {
        XProgram p = random_xprogram(1, 5, 1, 6, 0.5, std::uint64_t(seed));
        double total = 0.0;
        for (std::uint64_t v = 0; v < (std::uint64_t(1) << p.n_a); ++v)
            total += direct_probability(p, Outcome::from_value(std::size_t(p.n_a), v));
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("MBQC marginal over gate qubits reproduces the direct distribution") {
    for (int seed = 0; seed < 20; ++seed) {
        XProgram p = random_xprogram(0, 4, 1, 6, 0.5, std::uint64_t(seed));
        if (p.n_a + p.n_g > 10) continue;
        Circuit c = compile_mbqc(p);
        Statevector sv(c.n_qubits);
        sv.apply(c);
        const std::size_t na = std::size_t(p.n_a), ng = std::size_t(p.n_g);
        for (std::uint64_t x = 0; x < (std::uint64_t(1) << na); ++x) {
            double marginal = 0.0;
            for (std::uint64_t g = 0; g < (std::uint64_t(1) << ng); ++g)
                marginal += sv.probability(
                    Outcome::from_value(na + ng, x | (g << na)));
            const double direct = direct_probability(p, Outcome::from_value(na, x));
            CHECK(std::abs(marginal - direct) < 1e-9);
        }
    }
}

TEST_CASE("joint outcome probabilities agree between engines") {
    XProgram p = example_program();
    Circuit c = compile_mbqc(p);
    Outcome joint(5);
    const double exact = exact_t_sum_probability(c, joint);
    CHECK(exact == doctest::Approx(statevector_probability(c, joint)).epsilon(1e-9));
}

TEST_CASE("x-program text round trip") {
    XProgram p = example_program();
    XProgram back = xprogram_from_text(to_text(p));
    CHECK(back.n_g == p.n_g);
    CHECK(back.n_a == p.n_a);
    CHECK(back.q == p.q);
    CHECK(back.theta_num == p.theta_num);
    CHECK(back.theta_den == p.theta_den);
    CHECK(to_text(p) == "2 3 1/8\n101\n011\n");
    CHECK_THROWS_AS(xprogram_from_text("junk header"), std::invalid_argument);
    CHECK_THROWS_AS(xprogram_from_text("1 3 1/8\n10"), std::invalid_argument);
}
