#include "iqpsim/nqit.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace iqpsim {

NoiseProfile nqit_noise() { return NoiseProfile{}; }

NoiseProfile nqit_reported_noise() {
    NoiseProfile p;
    p.rate_depolarising = 9e-4;
    p.prob_two_qubit_single = 5.5e-4;
    return p;
}

NoiseProfile nqit_experiment_noise() {
    NoiseProfile p;
    p.rate_depolarising = 9e-4;
    return p;
}

NoiseProfile zero_noise() {
    NoiseProfile p;
    p.prob_two_qubit_single = 0.0;
    p.prob_two_qubit_zz = 0.0;
    p.prob_single_qubit = 0.0;
    p.prob_measurement = 0.0;
    p.prob_preparation = 0.0;
    p.rate_dephasing = 0.0;
    p.rate_depolarising = 0.0;
    return p;
}

std::vector<std::string> validate_profile(const NoiseProfile& p) {
    std::vector<std::string> violations;
    auto prob = [&](double v, const char* name) {
        if (!(v >= 0.0 && v <= 1.0))
            violations.push_back(std::string(name) + " must be in [0,1]");
    };
    prob(p.prob_two_qubit_single, "ProbTwoQubitOperationSingleQubit");
    prob(p.prob_two_qubit_zz, "ProbTwoQubitOperationTwoQubit");
    prob(p.prob_single_qubit, "ProbSingleQubitOperation");
    prob(p.prob_measurement, "ProbMeasurement");
    prob(p.prob_preparation, "ProbPreparation");
    if (!(p.rate_dephasing >= 0.0)) violations.push_back("ProbDephasing must be >= 0");
    if (!(p.rate_depolarising >= 0.0)) violations.push_back("ProbDepolarising must be >= 0");
    return violations;
}

std::uint64_t sample_event_count(double duration, double rate, RandomSource& rng) {
    if (duration < 0.0 || rate < 0.0)
        throw std::invalid_argument("sample_event_count: negative duration or rate");
    return rng.poisson(duration * rate);
}

namespace {

GateKind random_pauli_kind(RandomSource& rng) {
    switch (rng.uniform_int(0, 2)) {
        case 0: return GateKind::X;
        case 1: return GateKind::Y;
        default: return GateKind::Z;
    }
}

}  // namespace

std::vector<Gate> time_based_noise(std::uint32_t n_qubits, double duration,
                                   const NoiseProfile& profile, RandomSource& rng) {
    std::vector<Gate> gates;
    for (std::uint32_t q = 0; q < n_qubits; ++q) {
        // Z events compose; only an odd count is observable.
        const std::uint64_t z_events =
            sample_event_count(duration, profile.rate_dephasing, rng);
        if (z_events & 1) gates.push_back(Gate::single(GateKind::Z, q));
        const std::uint64_t pauli_events =
            sample_event_count(duration, profile.rate_depolarising, rng);
        for (std::uint64_t e = 0; e < pauli_events; ++e)
            gates.push_back(Gate::single(random_pauli_kind(rng), q));
    }
    return gates;
}

std::vector<Gate> operation_noise(OperationKind kind,
                                  const std::vector<std::uint32_t>& targets,
                                  const NoiseProfile& profile, RandomSource& rng) {
    const std::size_t want = kind == OperationKind::two_qubit ? 2 : 1;
    if (targets.size() != want)
        throw std::invalid_argument("operation_noise: arity mismatch");

    std::vector<Gate> gates;
    switch (kind) {
        case OperationKind::preparation:
            if (rng.bernoulli(profile.prob_preparation))
                gates.push_back(Gate::single(GateKind::X, targets[0]));
            break;
        case OperationKind::measurement:
            if (rng.bernoulli(profile.prob_measurement))
                gates.push_back(Gate::single(GateKind::X, targets[0]));
            break;
        case OperationKind::single_qubit:
            if (rng.bernoulli(profile.prob_single_qubit))
                gates.push_back(Gate::single(random_pauli_kind(rng), targets[0]));
            break;
        case OperationKind::two_qubit:
            for (std::uint32_t q : targets)
                if (rng.bernoulli(profile.prob_two_qubit_single))
                    gates.push_back(Gate::single(random_pauli_kind(rng), q));
            if (rng.bernoulli(profile.prob_two_qubit_zz)) {
                gates.push_back(Gate::single(GateKind::Z, targets[0]));
                gates.push_back(Gate::single(GateKind::Z, targets[1]));
            }
            break;
    }
    return gates;
}

namespace {

void append(Circuit& c, const std::vector<Gate>& gates) {
    for (const Gate& g : gates) c.push(g);
}

}  // namespace

Circuit build_noisy_dqs(const DqsInstance& instance, const NoiseProfile& noise,
                        const TimingProfile& timing, std::uint64_t rng_seed,
                        TimeAccounting accounting) {
    RandomSource rng(rng_seed);
    const std::uint32_t n = std::uint32_t(instance.n_qubits());
    Circuit c(n);

    for (std::uint32_t q = 0; q < n; ++q) {
        c.push(Gate::single(GateKind::H, q));
        append(c, operation_noise(OperationKind::preparation, {q}, noise, rng));
    }

    const auto edges = lattice_edges(instance.nx, instance.ny);
    if (accounting == TimeAccounting::per_gate) {
        for (const LatticeEdge& e : edges) {
            c.push(Gate::cz(std::uint32_t(e.a), std::uint32_t(e.b)));
            append(c, operation_noise(OperationKind::two_qubit,
                                      {std::uint32_t(e.a), std::uint32_t(e.b)}, noise, rng));
            append(c, time_based_noise(n, timing.t_in_trap_op, noise, rng));
        }
    } else {
        // Entangling CZs are inter-trap operations; within one schedule step
        // they run in parallel, so each step charges a single linking wait.
        std::size_t next = 0;
        for (int step = 1; step <= 4; ++step) {
            while (next < edges.size() && edges[next].schedule_step == step) {
                const LatticeEdge& e = edges[next++];
                c.push(Gate::cz(std::uint32_t(e.a), std::uint32_t(e.b)));
                append(c, operation_noise(OperationKind::two_qubit,
                                          {std::uint32_t(e.a), std::uint32_t(e.b)}, noise,
                                          rng));
            }
            append(c, time_based_noise(n, timing.t_linking, noise, rng));
        }
    }

    for (std::uint32_t q = 0; q < n; ++q) {
        if (!instance.tau[q]) continue;
        c.push(Gate::single(GateKind::T, q));
        append(c, operation_noise(OperationKind::single_qubit, {q}, noise, rng));
        if (accounting == TimeAccounting::per_gate)
            append(c, time_based_noise(n, timing.t_in_trap_op, noise, rng));
    }
    if (accounting == TimeAccounting::four_step)
        append(c, time_based_noise(n, timing.t_in_trap_op, noise, rng));

    for (std::uint32_t q = 0; q < n; ++q) {
        c.push(Gate::single(GateKind::H, q));
        append(c, operation_noise(OperationKind::single_qubit, {q}, noise, rng));
        if (accounting == TimeAccounting::per_gate)
            append(c, time_based_noise(n, timing.t_in_trap_op, noise, rng));
    }
    if (accounting == TimeAccounting::four_step)
        append(c, time_based_noise(n, timing.t_in_trap_op, noise, rng));

    for (std::uint32_t q = 0; q < n; ++q)
        append(c, operation_noise(OperationKind::measurement, {q}, noise, rng));

    return c;
}

bool RestrictedProgram::gate_active(int i) const {
    for (std::uint8_t b : home[i])
        if (b) return true;
    for (std::uint8_t b : away[i])
        if (b) return true;
    return false;
}

int RestrictedProgram::active_gate_count() const {
    int count = 0;
    for (int i = 0; i + 1 < n_traps; ++i)
        if (gate_active(i)) ++count;
    return count;
}

RestrictedProgram random_restricted_program(const ArchitectureParams& arch,
                                            double connection_prob,
                                            std::uint64_t rng_seed) {
    if (!arch.is_chain())
        throw std::invalid_argument(
            "random_restricted_program: architecture must be a 1-D trap chain");
    if (arch.app_qubits_per_trap() < 1)
        throw std::invalid_argument(
            "random_restricted_program: need at least 3 available qubits per trap");
    if (connection_prob < 0.0 || connection_prob > 1.0)
        throw std::invalid_argument("random_restricted_program: probability out of range");

    RestrictedProgram prog;
    prog.n_traps = arch.n_traps;
    prog.app_per_trap = arch.app_qubits_per_trap();
    RandomSource rng(rng_seed);
    for (int i = 0; i + 1 < prog.n_traps; ++i) {
        std::vector<std::uint8_t> h(prog.app_per_trap), a(prog.app_per_trap);
        for (auto& bit : h) bit = rng.bernoulli(connection_prob) ? 1 : 0;
        for (auto& bit : a) bit = rng.bernoulli(connection_prob) ? 1 : 0;
        prog.home.push_back(std::move(h));
        prog.away.push_back(std::move(a));
    }
    return prog;
}

Outcome random_reachable_outcome(const RestrictedProgram& prog, RandomSource& rng) {
    Outcome x(std::size_t(prog.n_measured()));
    // application part: XOR of a uniformly chosen subset of the row masks
    for (int i = 0; i + 1 < prog.n_traps; ++i) {
        if (!prog.gate_active(i) || !rng.bit()) continue;
        for (int s = 0; s < prog.app_per_trap; ++s) {
            x.bits[std::size_t(i * prog.app_per_trap + s)] ^= prog.home[i][s];
            x.bits[std::size_t((i + 1) * prog.app_per_trap + s)] ^= prog.away[i][s];
        }
    }
    // gate-qubit part: unconstrained
    for (int g = prog.n_app(); g < prog.n_measured(); ++g)
        x.bits[std::size_t(g)] = rng.bit() ? 1 : 0;
    return x;
}

namespace {

// Circuit indices for a restricted program: application qubits trap-major,
// then the active gate qubits in trap order.
struct RestrictedLayout {
    std::vector<int> gate_index;  // -1 for inactive
    int n_app = 0;
    int n_total = 0;

    explicit RestrictedLayout(const RestrictedProgram& prog) {
        n_app = prog.n_app();
        gate_index.assign(std::size_t(std::max(prog.n_traps - 1, 0)), -1);
        int next = n_app;
        for (int i = 0; i + 1 < prog.n_traps; ++i)
            if (prog.gate_active(i)) gate_index[i] = next++;
        n_total = next;
    }

    std::uint32_t app(int trap, int slot, int per_trap) const {
        return std::uint32_t(trap * per_trap + slot);
    }
};

}  // namespace

Circuit build_restricted_mbqc(const RestrictedProgram& prog) {
    return build_noisy_restricted_mbqc(prog, zero_noise(), TimingProfile{}, 0);
}

Circuit build_noisy_restricted_mbqc(const RestrictedProgram& prog,
                                    const NoiseProfile& noise,
                                    const TimingProfile& timing,
                                    std::uint64_t rng_seed) {
    if (int(prog.home.size()) != std::max(prog.n_traps - 1, 0) ||
        prog.away.size() != prog.home.size())
        throw std::invalid_argument("restricted program: wrong string count");
    for (std::size_t i = 0; i < prog.home.size(); ++i)
        if (int(prog.home[i].size()) != prog.app_per_trap ||
            int(prog.away[i].size()) != prog.app_per_trap)
            throw std::invalid_argument("restricted program: wrong string length");

    RandomSource rng(rng_seed);
    const RestrictedLayout layout(prog);
    const std::uint32_t n = std::uint32_t(layout.n_total);
    Circuit c(n);

    for (std::uint32_t q = 0; q < n; ++q) {
        c.push(Gate::single(GateKind::H, q));
        append(c, operation_noise(OperationKind::preparation, {q}, noise, rng));
    }

    // Home-trap entangling layer.
    for (int i = 0; i + 1 < prog.n_traps; ++i) {
        if (layout.gate_index[i] < 0) continue;
        const std::uint32_t g = std::uint32_t(layout.gate_index[i]);
        for (int s = 0; s < prog.app_per_trap; ++s) {
            if (!prog.home[i][s]) continue;
            const std::uint32_t q = layout.app(i, s, prog.app_per_trap);
            c.push(Gate::cz(g, q));
            append(c, operation_noise(OperationKind::two_qubit, {g, q}, noise, rng));
            append(c, time_based_noise(n, timing.t_in_trap_op, noise, rng));
        }
    }

    // Gate qubits hop to their neighbouring trap in two rounds (even trap
    // positions, then odd). The hop is a relabeling, not a gate; each round
    // costs one linking operation plus the Bell measurement.
    append(c, time_based_noise(n, timing.t_linking + timing.t_measurement, noise, rng));
    append(c, time_based_noise(n, timing.t_linking + timing.t_measurement, noise, rng));

    // Away-trap entangling layer.
    for (int i = 0; i + 1 < prog.n_traps; ++i) {
        if (layout.gate_index[i] < 0) continue;
        const std::uint32_t g = std::uint32_t(layout.gate_index[i]);
        for (int s = 0; s < prog.app_per_trap; ++s) {
            if (!prog.away[i][s]) continue;
            const std::uint32_t q = layout.app(i + 1, s, prog.app_per_trap);
            c.push(Gate::cz(g, q));
            append(c, operation_noise(OperationKind::two_qubit, {g, q}, noise, rng));
            append(c, time_based_noise(n, timing.t_in_trap_op, noise, rng));
        }
    }

    // Rotated-basis measurement of the gate qubits: H, T, X layers (the
    // closing H is part of the global layer below). One wait per layer; the
    // gates within a layer act on distinct qubits.
    for (GateKind kind : {GateKind::H, GateKind::T, GateKind::X}) {
        for (int i = 0; i + 1 < prog.n_traps; ++i) {
            if (layout.gate_index[i] < 0) continue;
            const std::uint32_t g = std::uint32_t(layout.gate_index[i]);
            c.push(Gate::single(kind, g));
            append(c, operation_noise(OperationKind::single_qubit, {g}, noise, rng));
        }
        append(c, time_based_noise(n, timing.t_in_trap_op, noise, rng));
    }

    for (std::uint32_t q = 0; q < n; ++q) {
        c.push(Gate::single(GateKind::H, q));
        append(c, operation_noise(OperationKind::single_qubit, {q}, noise, rng));
    }
    append(c, time_based_noise(n, timing.t_in_trap_op, noise, rng));

    // Corrections are classical post-processing: no noise of any kind.
    c.mark_tail();
    for (int i = 0; i + 1 < prog.n_traps; ++i) {
        if (layout.gate_index[i] < 0) continue;
        const std::uint32_t g = std::uint32_t(layout.gate_index[i]);
        for (int s = 0; s < prog.app_per_trap; ++s)
            if (prog.home[i][s])
                c.push_tail(Gate::cx(g, layout.app(i, s, prog.app_per_trap)));
    }
    for (int i = 0; i + 1 < prog.n_traps; ++i) {
        if (layout.gate_index[i] < 0) continue;
        const std::uint32_t g = std::uint32_t(layout.gate_index[i]);
        for (int s = 0; s < prog.app_per_trap; ++s)
            if (prog.away[i][s])
                c.push_tail(Gate::cx(g, layout.app(i + 1, s, prog.app_per_trap)));
    }

    // Readout errors flip the already-corrected bits, so they land after
    // the tail. Trap-major order: a trap's application qubits, then the
    // gate qubit that hopped into it.
    for (int trap = 0; trap < prog.n_traps; ++trap) {
        for (int s = 0; s < prog.app_per_trap; ++s) {
            const std::uint32_t q = layout.app(trap, s, prog.app_per_trap);
            for (const Gate& g :
                 operation_noise(OperationKind::measurement, {q}, noise, rng))
                c.push_tail(g);
        }
        if (trap >= 1 && layout.gate_index[trap - 1] >= 0) {
            const std::uint32_t g = std::uint32_t(layout.gate_index[trap - 1]);
            for (const Gate& gate :
                 operation_noise(OperationKind::measurement, {g}, noise, rng))
                c.push_tail(gate);
        }
    }
    return c;
}

NoiseProfile scale_profile(const NoiseProfile& profile, NoiseChannelGroup group,
                           double factor) {
    if (factor < 0.0)
        throw std::invalid_argument("scale_profile: factor must be nonnegative");
    NoiseProfile p = profile;
    switch (group) {
        case NoiseChannelGroup::time_based:
            p.rate_dephasing *= factor;
            p.rate_depolarising *= factor;
            break;
        case NoiseChannelGroup::operation_based:
            p.prob_two_qubit_single *= factor;
            p.prob_two_qubit_zz *= factor;
            p.prob_single_qubit *= factor;
            p.prob_measurement *= factor;
            p.prob_preparation *= factor;
            break;
        case NoiseChannelGroup::dephasing:
            p.rate_dephasing *= factor;
            break;
        case NoiseChannelGroup::depolarising:
            p.rate_depolarising *= factor;
            break;
        case NoiseChannelGroup::two_qubit_single:
            p.prob_two_qubit_single *= factor;
            break;
        case NoiseChannelGroup::two_qubit_zz:
            p.prob_two_qubit_zz *= factor;
            break;
        case NoiseChannelGroup::single_qubit:
            p.prob_single_qubit *= factor;
            break;
        case NoiseChannelGroup::measurement:
            p.prob_measurement *= factor;
            break;
        case NoiseChannelGroup::preparation:
            p.prob_preparation *= factor;
            break;
        case NoiseChannelGroup::all:
            p = scale_profile(p, NoiseChannelGroup::time_based, factor);
            p = scale_profile(p, NoiseChannelGroup::operation_based, factor);
            break;
    }
    auto violations = validate_profile(p);
    if (!violations.empty())
        throw std::invalid_argument("scale_profile: " + violations.front());
    return p;
}

NoiseProfile gate_only(const NoiseProfile& p) {
    return scale_profile(p, NoiseChannelGroup::time_based, 0.0);
}

NoiseProfile time_only(const NoiseProfile& p) {
    return scale_profile(p, NoiseChannelGroup::operation_based, 0.0);
}

NoiseProfile dephasing_only(const NoiseProfile& p) {
    return scale_profile(time_only(p), NoiseChannelGroup::depolarising, 0.0);
}

NoiseProfile depolarising_only(const NoiseProfile& p) {
    return scale_profile(time_only(p), NoiseChannelGroup::dephasing, 0.0);
}

NoiseProfile without_dephasing(const NoiseProfile& p) {
    return scale_profile(p, NoiseChannelGroup::dephasing, 0.0);
}

NoiseProfile with_repetition_code(const NoiseProfile& p) {
    NoiseProfile out = p;
    out.rate_dephasing = kRepetitionCodeDephasingRate;
    return out;
}

NoiseProfile with_dephasing_fraction(const NoiseProfile& p, double fraction) {
    return scale_profile(p, NoiseChannelGroup::dephasing, fraction);
}

namespace {

double* field_for_key(DeviceProfile& p, const std::string& key) {
    if (key == "TimeInTrapOperation") return &p.timing.t_in_trap_op;
    if (key == "TimeLinkingOperation") return &p.timing.t_linking;
    if (key == "TimePreparation") return &p.timing.t_preparation;
    if (key == "TimeMeasurement") return &p.timing.t_measurement;
    if (key == "ProbTwoQubitOperationSingleQubit") return &p.noise.prob_two_qubit_single;
    if (key == "ProbTwoQubitOperationTwoQubit") return &p.noise.prob_two_qubit_zz;
    if (key == "ProbSingleQubitOperation") return &p.noise.prob_single_qubit;
    if (key == "ProbMeasurement") return &p.noise.prob_measurement;
    if (key == "ProbPreparation") return &p.noise.prob_preparation;
    if (key == "ProbDephasing") return &p.noise.rate_dephasing;
    if (key == "ProbDepolarising") return &p.noise.rate_depolarising;
    return nullptr;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

DeviceProfile parse_device_profile(const std::string& text) {
    DeviceProfile p;
    std::istringstream is(text);
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("profile line " + std::to_string(line_no) +
                                        ": expected KEY = VALUE");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        double* field = field_for_key(p, key);
        if (!field)
            throw std::invalid_argument("profile line " + std::to_string(line_no) +
                                        ": unknown key '" + key + "'");
        try {
            std::size_t used = 0;
            *field = std::stod(value, &used);
            if (used != value.size()) throw std::invalid_argument(value);
        } catch (const std::exception&) {
            throw std::invalid_argument("profile line " + std::to_string(line_no) +
                                        ": bad value '" + value + "'");
        }
    }
    auto violations = validate_profile(p.noise);
    if (!violations.empty())
        throw std::invalid_argument("profile: " + violations.front());
    return p;
}

DeviceProfile load_device_profile(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open profile file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_device_profile(buffer.str());
}

std::string device_profile_text(const DeviceProfile& p) {
    std::ostringstream os;
    os.precision(17);
    os << "TimeInTrapOperation = " << p.timing.t_in_trap_op << "\n"
       << "TimeLinkingOperation = " << p.timing.t_linking << "\n"
       << "TimePreparation = " << p.timing.t_preparation << "\n"
       << "TimeMeasurement = " << p.timing.t_measurement << "\n"
       << "ProbTwoQubitOperationSingleQubit = " << p.noise.prob_two_qubit_single << "\n"
       << "ProbTwoQubitOperationTwoQubit = " << p.noise.prob_two_qubit_zz << "\n"
       << "ProbSingleQubitOperation = " << p.noise.prob_single_qubit << "\n"
       << "ProbMeasurement = " << p.noise.prob_measurement << "\n"
       << "ProbPreparation = " << p.noise.prob_preparation << "\n"
       << "ProbDephasing = " << p.noise.rate_dephasing << "\n"
       << "ProbDepolarising = " << p.noise.rate_depolarising << "\n";
    return os.str();
}

std::string to_text(const RestrictedProgram& prog) {
    std::ostringstream os;
    os << "TRAPS " << prog.n_traps << " APP " << prog.app_per_trap << "\n";
    for (std::size_t i = 0; i < prog.home.size(); ++i) {
        for (auto b : prog.home[i]) os << int(b);
        os << ';';
        for (auto b : prog.away[i]) os << int(b);
        os << "\n";
    }
    return os.str();
}

RestrictedProgram restricted_from_text(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line))
        throw std::invalid_argument("restricted program text: missing header");
    std::istringstream header(line);
    std::string kw_traps, kw_app;
    int traps = 0, app = 0;
    header >> kw_traps >> traps >> kw_app >> app;
    if (header.fail() || kw_traps != "TRAPS" || kw_app != "APP" || traps < 1 || app < 0)
        throw std::invalid_argument("restricted program text: bad header: " + line);

    RestrictedProgram prog;
    prog.n_traps = traps;
    prog.app_per_trap = app;
    for (int i = 0; i + 1 < traps; ++i) {
        if (!std::getline(is, line))
            throw std::invalid_argument("restricted program text: missing line " +
                                        std::to_string(i));
        const auto semi = line.find(';');
        if (semi == std::string::npos || int(semi) != app ||
            int(line.size()) < 2 * app + 1)
            throw std::invalid_argument("restricted program text: bad line: " + line);
        std::vector<std::uint8_t> h(app), a(app);
        for (int s = 0; s < app; ++s) {
            h[s] = line[s] == '1';
            a[s] = line[semi + 1 + s] == '1';
        }
        prog.home.push_back(std::move(h));
        prog.away.push_back(std::move(a));
    }
    return prog;
}

}  // namespace iqpsim
