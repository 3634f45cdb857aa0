#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "doctest.h"
#include "iqpsim/dqs.hpp"
#include "iqpsim/nqit.hpp"
#include "iqpsim/merit.hpp"
#include "iqpsim/simcore.hpp"

using namespace iqpsim;

TEST_CASE("profile defaults and presets") {
    NoiseProfile p = nqit_noise();
    CHECK(p.prob_two_qubit_single == 5.5e-5);
    CHECK(p.prob_two_qubit_zz == 6e-5);
    CHECK(p.prob_single_qubit == 1.5e-6);
    CHECK(p.prob_measurement == 5e-4);
    CHECK(p.prob_preparation == 2e-4);
    CHECK(p.rate_dephasing == 7.2e-3);
    CHECK(p.rate_depolarising == 9e-3);

    NoiseProfile reported = nqit_reported_noise();
    CHECK(reported.rate_depolarising == 9e-4);
    CHECK(reported.prob_two_qubit_single == 5.5e-4);
    CHECK(reported.rate_dephasing == 7.2e-3);

    TimingProfile t;
    CHECK(t.t_in_trap_op == 0.5e-3);
    CHECK(t.t_linking == 1.5);
    CHECK(t.t_preparation == 1.25e-3);
    CHECK(t.t_measurement == 2.25e-3);
}

TEST_CASE("scale_profile variants") {
    const NoiseProfile p = nqit_noise();

    SUBCASE("factor one is the identity") {
        NoiseProfile same = scale_profile(p, NoiseChannelGroup::all, 1.0);
        CHECK(same.rate_dephasing == p.rate_dephasing);
        CHECK(same.prob_measurement == p.prob_measurement);
    }
    SUBCASE("group scaling") {
        NoiseProfile g = gate_only(p);
        CHECK(g.rate_dephasing == 0.0);
        CHECK(g.rate_depolarising == 0.0);
        CHECK(g.prob_measurement == p.prob_measurement);

        NoiseProfile t = time_only(p);
        CHECK(t.prob_measurement == 0.0);
        CHECK(t.prob_preparation == 0.0);
        CHECK(t.prob_single_qubit == 0.0);
        CHECK(t.prob_two_qubit_single == 0.0);
        CHECK(t.prob_two_qubit_zz == 0.0);
        CHECK(t.rate_dephasing == p.rate_dephasing);

        NoiseProfile deph = dephasing_only(p);
        CHECK(deph.rate_dephasing == p.rate_dephasing);
        CHECK(deph.rate_depolarising == 0.0);
        CHECK(deph.prob_measurement == 0.0);

        NoiseProfile depol = depolarising_only(p);
        CHECK(depol.rate_depolarising == p.rate_depolarising);
        CHECK(depol.rate_dephasing == 0.0);
    }
    SUBCASE("named presets") {
        CHECK(with_repetition_code(p).rate_dephasing == 2.3e-4);
        CHECK(with_repetition_code(p).rate_depolarising == p.rate_depolarising);
        NoiseProfile quarter = with_dephasing_fraction(p, 0.25);
        CHECK(quarter.rate_dephasing == doctest::Approx(1.8e-3).epsilon(1e-12));
        CHECK(quarter.rate_depolarising == p.rate_depolarising);
        CHECK(quarter.prob_measurement == p.prob_measurement);
        CHECK(without_dephasing(p).rate_dephasing == 0.0);
    }
    SUBCASE("negative factors are rejected") {
        CHECK_THROWS_AS(scale_profile(p, NoiseChannelGroup::dephasing, -1.0),
                        std::invalid_argument);
    }
}

TEST_CASE("poisson event counts") {
    RandomSource rng(2024);
    SUBCASE("zero duration never fires") {
        for (int i = 0; i < 1000; ++i)
            CHECK(sample_event_count(0.0, 7.2e-3, rng) == 0);
    }
    SUBCASE("link-wait mean") {
        const int n = 200000;
        double sum = 0.0;
        for (int i = 0; i < n; ++i)
            sum += double(sample_event_count(1.5, 7.2e-3, rng));
        const double lambda = 1.5 * 7.2e-3;  // 0.0108
        const double se = std::sqrt(lambda / n);
        CHECK(std::abs(sum / n - lambda) < 3.0 * se);
    }
    SUBCASE("moments at lambda = 2") {
        const int n = 100000;
        double sum = 0.0, sumsq = 0.0;
        for (int i = 0; i < n; ++i) {
            const double k = double(sample_event_count(1.0, 2.0, rng));
            sum += k;
            sumsq += k * k;
        }
        const double m = sum / n;
        const double var = sumsq / n - m * m;
        CHECK(std::abs(m - 2.0) < 3.0 * std::sqrt(2.0 / n));
        // Var(s^2) ~ (mu4 - sigma^4)/n with mu4 = lambda(1 + 3 lambda) + ...
        CHECK(std::abs(var - 2.0) < 0.06);
    }
    SUBCASE("negative arguments are rejected") {
        CHECK_THROWS_AS(sample_event_count(-1.0, 1.0, rng), std::invalid_argument);
    }
}

TEST_CASE("time-based noise") {
    RandomSource rng(55);
    SUBCASE("zero rates produce no gates") {
        for (int i = 0; i < 100; ++i)
            CHECK(time_based_noise(20, 1.5, zero_noise(), rng).empty());
    }
    SUBCASE("dephasing parity matches (1 - e^{-2 lambda}) / 2") {
        NoiseProfile deph = dephasing_only(nqit_noise());
        const double duration = 100.0;  // lambda = 0.72, parity formula matters
        const double lambda = duration * deph.rate_dephasing;
        const double expected = (1.0 - std::exp(-2.0 * lambda)) / 2.0;
        const int n = 20000;
        int fired = 0;
        for (int i = 0; i < n; ++i)
            fired += time_based_noise(1, duration, deph, rng).empty() ? 0 : 1;
        const double p_hat = double(fired) / n;
        CHECK(std::abs(p_hat - expected) < 3.0 * std::sqrt(expected * (1 - expected) / n));
    }
    SUBCASE("depolarising count matches its mean") {
        NoiseProfile depol = depolarising_only(nqit_noise());
        const int n = 20000;
        long total = 0;
        for (int i = 0; i < n; ++i)
            total += long(time_based_noise(20, 1.5, depol, rng).size());
        const double lambda = 20 * 1.5 * depol.rate_depolarising;  // 0.27 per call
        const double se = std::sqrt(lambda / n);
        CHECK(std::abs(double(total) / n - lambda) < 3.0 * se);
    }
    SUBCASE("only Pauli gates are injected") {
        NoiseProfile p = nqit_noise();
        for (int i = 0; i < 200; ++i)
            for (const Gate& g : time_based_noise(5, 2.0, p, rng)) {
                const bool pauli = g.kind == GateKind::X || g.kind == GateKind::Y ||
                                   g.kind == GateKind::Z;
                CHECK(pauli);
            }
    }
}

TEST_CASE("operation noise") {
    RandomSource rng(56);
    SUBCASE("zero probabilities are silent") {
        for (int i = 0; i < 100; ++i) {
            CHECK(operation_noise(OperationKind::preparation, {0}, zero_noise(), rng)
                      .empty());
            CHECK(operation_noise(OperationKind::two_qubit, {0, 1}, zero_noise(), rng)
                      .empty());
        }
    }
    SUBCASE("preparation frequency") {
        NoiseProfile p = nqit_noise();
        const int n = 1000000;
        int fired = 0;
        for (int i = 0; i < n; ++i)
            fired +=
                operation_noise(OperationKind::preparation, {0}, p, rng).empty() ? 0 : 1;
        const double target = p.prob_preparation;  // 2e-4
        CHECK(std::abs(double(fired) / n - target) < 3.0 * std::sqrt(target / n));
    }
    SUBCASE("correlated ZZ frequency") {
        NoiseProfile p = nqit_noise();
        p.prob_two_qubit_single = 0.0;  // isolate the ZZ branch
        const int n = 2000000;
        int fired = 0;
        for (int i = 0; i < n; ++i) {
            auto gates = operation_noise(OperationKind::two_qubit, {0, 1}, p, rng);
            if (!gates.empty()) {
                REQUIRE(gates.size() == 2);
                CHECK(gates[0].kind == GateKind::Z);
                CHECK(gates[1].kind == GateKind::Z);
                ++fired;
            }
        }
        const double target = p.prob_two_qubit_zz;  // 6e-5
        CHECK(std::abs(double(fired) / n - target) < 3.0 * std::sqrt(target / n));
    }
    SUBCASE("arity is checked") {
        NoiseProfile p = nqit_noise();
        CHECK_THROWS_AS(operation_noise(OperationKind::two_qubit, {0}, p, rng),
                        std::invalid_argument);
        CHECK_THROWS_AS(operation_noise(OperationKind::preparation, {0, 1}, p, rng),
                        std::invalid_argument);
    }
}

TEST_CASE("noisy lattice builder") {
    const DqsInstance inst = random_instance(4, 5, 7);
    const TimingProfile timing;

    SUBCASE("zero noise reproduces the perfect compile gate-for-gate") {
        for (TimeAccounting acc : {TimeAccounting::per_gate, TimeAccounting::four_step}) {
            Circuit noisy = build_noisy_dqs(inst, zero_noise(), timing, 3, acc);
            CHECK(noisy == compile_dqs(inst));
        }
    }
    SUBCASE("seed determinism") {
        Circuit a = build_noisy_dqs(inst, nqit_noise(), timing, 11,
                                    TimeAccounting::four_step);
        Circuit b = build_noisy_dqs(inst, nqit_noise(), timing, 11,
                                    TimeAccounting::four_step);
        CHECK(a == b);
        Circuit c = build_noisy_dqs(inst, nqit_noise(), timing, 12,
                                    TimeAccounting::four_step);
        CHECK(!(c == a));
    }
    SUBCASE("injected gates are Paulis and leave the T count alone") {
        Circuit noisy = build_noisy_dqs(inst, nqit_noise(), timing, 13,
                                        TimeAccounting::four_step);
        CHECK(t_count(noisy) == t_count(compile_dqs(inst)));
        std::size_t popcount = 0;
        for (auto bit : inst.tau) popcount += bit;
        CHECK(t_count(noisy) == popcount);
    }
    SUBCASE("per-gate accounting injects the expected time-noise volume") {
        // time-only profile: every extra gate is a time-based Pauli
        const NoiseProfile profile = time_only(nqit_noise());
        std::size_t popcount = 0;
        for (auto bit : inst.tau) popcount += bit;
        const double calls = double(31 + popcount + 20);
        const double lambda_z = timing.t_in_trap_op * profile.rate_dephasing;
        const double p_z = (1.0 - std::exp(-2.0 * lambda_z)) / 2.0;
        const double lambda_d = timing.t_in_trap_op * profile.rate_depolarising;
        const double per_circuit = calls * 20.0 * (p_z + lambda_d);

        const std::size_t base_gates = compile_dqs(inst).gates.size();
        const int n = 20000;
        long extra = 0;
        for (int seed = 0; seed < n; ++seed)
            extra += long(build_noisy_dqs(inst, profile, timing, std::uint64_t(seed),
                                          TimeAccounting::per_gate)
                              .gates.size() -
                          base_gates);
        const double se = std::sqrt(per_circuit / n);  // Poisson-dominated
        CHECK(std::abs(double(extra) / n - per_circuit) < 3.0 * se);
    }
}

TEST_CASE("restricted programs") {
    SUBCASE("determinism and shape") {
        const ArchitectureParams arch = ArchitectureParams::chain(12, 8);
        RestrictedProgram a = random_restricted_program(arch, 0.5, 4);
        RestrictedProgram b = random_restricted_program(arch, 0.5, 4);
        CHECK(a.home == b.home);
        CHECK(a.away == b.away);
        CHECK(a.n_traps == 12);
        CHECK(a.home.size() == 11);
        CHECK(a.home.front().size() == 8);
        CHECK(a.n_app() == 96);
    }
    SUBCASE("zero connection probability leaves no active gate qubit") {
        const ArchitectureParams arch = ArchitectureParams::chain(5, 3);
        RestrictedProgram p = random_restricted_program(arch, 0.0, 9);
        CHECK(p.active_gate_count() == 0);
        CHECK(p.n_measured() == p.n_app());
        Circuit c = build_restricted_mbqc(p);
        CHECK(t_count(c) == 0);
        CHECK(c.n_qubits == std::uint32_t(p.n_app()));
    }
    SUBCASE("connection density") {
        const ArchitectureParams arch = ArchitectureParams::chain(10, 8);
        long ones = 0, total = 0;
        for (int seed = 0; seed < 2000; ++seed) {
            RestrictedProgram p = random_restricted_program(arch, 0.5, std::uint64_t(seed));
            for (const auto& row : p.home)
                for (auto bit : row) {
                    ones += bit;
                    ++total;
                }
            for (const auto& row : p.away)
                for (auto bit : row) {
                    ones += bit;
                    ++total;
                }
        }
        CHECK(std::abs(double(ones) / double(total) - 0.5) <
              3.0 * std::sqrt(0.25 / double(total)));
    }
    SUBCASE("non-chain layouts are rejected") {
        ArchitectureParams grid;  // 5x4 by default
        CHECK_THROWS_AS(random_restricted_program(grid, 0.5, 1), std::invalid_argument);
    }
}

TEST_CASE("restricted MBQC builder") {
    const ArchitectureParams arch = ArchitectureParams::chain(4, 2);
    const RestrictedProgram prog = random_restricted_program(arch, 0.5, 21);
    const TimingProfile timing;

    SUBCASE("zero noise equals the perfect build") {
        Circuit noisy = build_noisy_restricted_mbqc(prog, zero_noise(), timing, 5);
        CHECK(noisy == build_restricted_mbqc(prog));
    }
    SUBCASE("t count equals the active gate-qubit count") {
        CHECK(t_count(build_restricted_mbqc(prog)) ==
              std::size_t(prog.active_gate_count()));
        CHECK(build_restricted_mbqc(prog).n_qubits ==
              std::uint32_t(prog.n_measured()));
    }
    SUBCASE("corrections sit in the noiseless tail") {
        Circuit c = build_restricted_mbqc(prog);
        for (std::size_t i = c.noiseless_tail_start; i < c.gates.size(); ++i)
            CHECK(c.gates[i].kind == GateKind::CX);
    }
    SUBCASE("seed determinism") {
        Circuit a = build_noisy_restricted_mbqc(prog, nqit_noise(), timing, 31);
        Circuit b = build_noisy_restricted_mbqc(prog, nqit_noise(), timing, 31);
        CHECK(a == b);
    }
    SUBCASE("link waits dominate the injected dephasing") {
        const NoiseProfile deph = dephasing_only(nqit_noise());
        const int n_qubits = prog.n_measured();
        // every time_based_noise call in the builder, by duration
        std::vector<double> durations;
        int cz_count = 0;
        for (const auto& row : prog.home)
            for (auto bit : row) cz_count += bit;
        for (const auto& row : prog.away)
            for (auto bit : row) cz_count += bit;
        for (int i = 0; i < cz_count; ++i) durations.push_back(timing.t_in_trap_op);
        durations.push_back(timing.t_linking + timing.t_measurement);
        durations.push_back(timing.t_linking + timing.t_measurement);
        for (int i = 0; i < 4; ++i) durations.push_back(timing.t_in_trap_op);

        double expected_z_per_qubit = 0.0;
        for (double d : durations)
            expected_z_per_qubit +=
                (1.0 - std::exp(-2.0 * d * deph.rate_dephasing)) / 2.0;
        // link waits alone account for ~0.0216 events per qubit
        CHECK(expected_z_per_qubit ==
              doctest::Approx(2 * (1.5 + 2.25e-3) * 7.2e-3).epsilon(0.02));

        const std::size_t base = build_restricted_mbqc(prog).gates.size();
        const int n = 20000;
        long extra = 0;
        for (int seed = 0; seed < n; ++seed)
            extra += long(
                build_noisy_restricted_mbqc(prog, deph, timing, std::uint64_t(seed))
                    .gates.size() -
                base);
        const double expected = expected_z_per_qubit * n_qubits;
        const double se = std::sqrt(expected / n);
        CHECK(std::abs(double(extra) / n - expected) < 3.0 * se);
    }
}

TEST_CASE("noise scaling is monotone in output corruption") {
    // fixed instance and outcome; mean |noisy - perfect| must not decrease
    // as every channel scales up
    const DqsInstance inst = random_instance(2, 3, 17);
    const Circuit perfect = compile_dqs(inst);
    const Outcome x = Outcome::from_value(6, 0b010110);
    const double p_perfect = exact_t_sum_probability(perfect, x);
    const TimingProfile timing;

    const int builds = 300;
    double means[3] = {0, 0, 0};
    double stderrs[3] = {0, 0, 0};
    const double factors[3] = {0.0, 0.5, 1.0};
    for (int f = 0; f < 3; ++f) {
        NoiseProfile profile =
            scale_profile(nqit_noise(), NoiseChannelGroup::all, factors[f]);
        std::vector<double> diffs(builds);
        for (int b = 0; b < builds; ++b) {
            Circuit noisy = build_noisy_dqs(inst, profile, timing,
                                            derive_seed(99, std::uint64_t(f),
                                                        std::uint64_t(b)),
                                            TimeAccounting::four_step);
            diffs[std::size_t(b)] =
                std::abs(exact_t_sum_probability(noisy, x) - p_perfect);
        }
        means[f] = mean(diffs);
        stderrs[f] = sample_std(diffs) / std::sqrt(double(builds));
    }
    CHECK(means[1] - means[0] > -3.0 * std::hypot(stderrs[0], stderrs[1]));
    CHECK(means[2] - means[1] > -3.0 * std::hypot(stderrs[1], stderrs[2]));
    CHECK(means[2] - means[0] > 3.0 * std::hypot(stderrs[0], stderrs[2]));
}

TEST_CASE("device profile files") {
    SUBCASE("text round trip") {
        DeviceProfile p;
        p.noise = nqit_reported_noise();
        p.timing.t_linking = 2.0;
        DeviceProfile back = parse_device_profile(device_profile_text(p));
        CHECK(back.noise.rate_depolarising == p.noise.rate_depolarising);
        CHECK(back.noise.prob_two_qubit_single == p.noise.prob_two_qubit_single);
        CHECK(back.timing.t_linking == 2.0);
    }
    SUBCASE("defaults survive an empty file") {
        DeviceProfile p = parse_device_profile("# comment only\n");
        CHECK(p.noise.rate_dephasing == 7.2e-3);
        CHECK(p.timing.t_linking == 1.5);
    }
    SUBCASE("unknown keys are errors") {
        CHECK_THROWS_AS(parse_device_profile("ProbTeleport = 0.1\n"),
                        std::invalid_argument);
    }
    SUBCASE("malformed values are errors") {
        CHECK_THROWS_AS(parse_device_profile("ProbDephasing = fast\n"),
                        std::invalid_argument);
        CHECK_THROWS_AS(parse_device_profile("ProbDephasing 0.1\n"),
                        std::invalid_argument);
        CHECK_THROWS_AS(parse_device_profile("ProbMeasurement = 1.5\n"),
                        std::invalid_argument);
    }
}

TEST_CASE("restricted program text round trip") {
    const ArchitectureParams arch = ArchitectureParams::chain(4, 3);
    RestrictedProgram prog = random_restricted_program(arch, 0.5, 77);
    RestrictedProgram back = restricted_from_text(to_text(prog));
    CHECK(back.n_traps == prog.n_traps);
    CHECK(back.app_per_trap == prog.app_per_trap);
    CHECK(back.home == prog.home);
    CHECK(back.away == prog.away);
    CHECK_THROWS_AS(restricted_from_text("TRAPS 3 APP 2\n10;0"), std::invalid_argument);
}

TEST_CASE("reachable outcomes carry probability mass") {
    const ArchitectureParams arch = ArchitectureParams::chain(4, 2);
    RandomSource rng(123);
    int nonzero = 0, total = 0;
    for (int seed = 0; seed < 20; ++seed) {
        RestrictedProgram prog =
            random_restricted_program(arch, 0.5, std::uint64_t(seed));
        Circuit c = build_restricted_mbqc(prog);
        Outcome x = random_reachable_outcome(prog, rng);
        REQUIRE(x.size() == c.n_qubits);
        if (exact_t_sum_probability(c, x) > 1e-12) ++nonzero;
        ++total;
    }
    // in-support outcomes can still vanish by phase cancellation, but most
    // carry weight; uniform outcomes over all strings almost never do
    CHECK(nonzero >= total / 2);
}
