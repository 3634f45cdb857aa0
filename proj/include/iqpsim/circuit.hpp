#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace iqpsim {

// Gate set shared by every generator and engine. All kinds are Clifford
// except T; the engines track the T count explicitly. CX only appears in
// correction tails but is a first-class gate.
enum class GateKind : std::uint8_t { H, S, T, X, Y, Z, CZ, CX };

inline bool is_two_qubit(GateKind k) { return k == GateKind::CZ || k == GateKind::CX; }
const char* gate_name(GateKind k);

struct Gate {
    GateKind kind;
    std::uint32_t q0;
    std::uint32_t q1;  // ignored for single-qubit kinds

    static Gate single(GateKind k, std::uint32_t q) { return Gate{k, q, 0}; }
    static Gate cz(std::uint32_t a, std::uint32_t b) { return Gate{GateKind::CZ, a, b}; }
    static Gate cx(std::uint32_t control, std::uint32_t target) {
        return Gate{GateKind::CX, control, target};
    }
};

bool operator==(const Gate& a, const Gate& b);

// Ordered gate list over n_qubits. Gates at index >= noiseless_tail_start
// are post-processing corrections and never receive injected noise.
struct Circuit {
    std::uint32_t n_qubits = 0;
    std::vector<Gate> gates;
    std::size_t noiseless_tail_start = 0;

    Circuit() = default;
    explicit Circuit(std::uint32_t n) : n_qubits(n), noiseless_tail_start(0) {}

    // Appends a physical gate; while no tail has begun, the tail marker
    // tracks the end of the gate list (a circuit without corrections has
    // noiseless_tail_start == gates.size()).
    void push(const Gate& g) {
        const bool no_tail_yet = noiseless_tail_start == gates.size();
        gates.push_back(g);
        if (no_tail_yet) noiseless_tail_start = gates.size();
    }
    void mark_tail() { noiseless_tail_start = gates.size(); }
    // Appends a correction gate after mark_tail().
    void push_tail(const Gate& g) { gates.push_back(g); }
    bool has_tail() const { return noiseless_tail_start < gates.size(); }
};

bool operator==(const Circuit& a, const Circuit& b);

// Measured bit string, little-endian: bits[i] is qubit i.
struct Outcome {
    std::vector<std::uint8_t> bits;

    Outcome() = default;
    explicit Outcome(std::size_t n) : bits(n, 0) {}

    std::size_t size() const { return bits.size(); }
    // Convenience for tests: low bits of `value` in qubit order.
    static Outcome from_value(std::size_t n, std::uint64_t value);
    std::string to_string() const;
    static Outcome from_string(const std::string& s);
};

bool operator==(const Outcome& a, const Outcome& b);

// Returns every invariant violation; empty means the circuit is valid.
std::vector<std::string> validate(const Circuit& c);

std::size_t t_count(const Circuit& c);

// Gates of `a` followed by gates of `b`. Throws std::invalid_argument on a
// qubit-count mismatch or when appending a nonempty circuit after a's
// noiseless tail has begun.
Circuit concatenate(const Circuit& a, const Circuit& b);

// Line-oriented text format:
//   QUBITS <n> / TAIL <k>
//   <KIND> <q0> [<q1>]
std::string to_text(const Circuit& c);
Circuit circuit_from_text(const std::string& text);

}  // namespace iqpsim
