#include "iqpsim/circuit.hpp"

#include <sstream>
#include <stdexcept>

namespace iqpsim {

const char* gate_name(GateKind k) {
    switch (k) {
        case GateKind::H: return "H";
        case GateKind::S: return "S";
        case GateKind::T: return "T";
        case GateKind::X: return "X";
        case GateKind::Y: return "Y";
        case GateKind::Z: return "Z";
        case GateKind::CZ: return "CZ";
        case GateKind::CX: return "CX";
    }
    return "?";
}

bool operator==(const Gate& a, const Gate& b) {
    if (a.kind != b.kind || a.q0 != b.q0) return false;
    return !is_two_qubit(a.kind) || a.q1 == b.q1;
}

bool operator==(const Circuit& a, const Circuit& b) {
    return a.n_qubits == b.n_qubits && a.noiseless_tail_start == b.noiseless_tail_start &&
           a.gates == b.gates;
}

bool operator==(const Outcome& a, const Outcome& b) { return a.bits == b.bits; }

Outcome Outcome::from_value(std::size_t n, std::uint64_t value) {
    Outcome x(n);
    for (std::size_t i = 0; i < n && i < 64; ++i) x.bits[i] = (value >> i) & 1u;
    return x;
}

std::string Outcome::to_string() const {
    std::string s(bits.size(), '0');
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) s[i] = '1';
    return s;
}

Outcome Outcome::from_string(const std::string& s) {
    Outcome x(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '1')
            x.bits[i] = 1;
        else if (s[i] != '0')
            throw std::invalid_argument("outcome string must be binary: " + s);
    }
    return x;
}

std::vector<std::string> validate(const Circuit& c) {
    std::vector<std::string> violations;
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
        const Gate& g = c.gates[i];
        std::string where = "gate " + std::to_string(i) + " (" + gate_name(g.kind) + ")";
        if (g.q0 >= c.n_qubits)
            violations.push_back(where + ": target out of range");
        if (is_two_qubit(g.kind)) {
            if (g.q1 >= c.n_qubits)
                violations.push_back(where + ": second target out of range");
            if (g.q0 == g.q1)
                violations.push_back(where + ": duplicate targets");
        }
    }
    if (c.noiseless_tail_start > c.gates.size())
        violations.push_back("tail index out of range");
    return violations;
}

std::size_t t_count(const Circuit& c) {
    std::size_t t = 0;
    for (const Gate& g : c.gates)
        if (g.kind == GateKind::T) ++t;
    return t;
}

Circuit concatenate(const Circuit& a, const Circuit& b) {
    if (a.n_qubits != b.n_qubits)
        throw std::invalid_argument("concatenate: qubit-count mismatch");
    if (a.has_tail() && !b.gates.empty())
        throw std::invalid_argument("concatenate: cannot append after a noiseless tail");
    Circuit out(a.n_qubits);
    out.gates = a.gates;
    out.gates.insert(out.gates.end(), b.gates.begin(), b.gates.end());
    out.noiseless_tail_start = a.gates.size() + b.noiseless_tail_start;
    return out;
}

std::string to_text(const Circuit& c) {
    std::ostringstream os;
    os << "QUBITS " << c.n_qubits << " / TAIL " << c.noiseless_tail_start << "\n";
    for (const Gate& g : c.gates) {
        os << gate_name(g.kind) << ' ' << g.q0;
        if (is_two_qubit(g.kind)) os << ' ' << g.q1;
        os << "\n";
    }
    return os.str();
}

namespace {

GateKind kind_from_name(const std::string& name) {
    if (name == "H") return GateKind::H;
    if (name == "S") return GateKind::S;
    if (name == "T") return GateKind::T;
    if (name == "X") return GateKind::X;
    if (name == "Y") return GateKind::Y;
    if (name == "Z") return GateKind::Z;
    if (name == "CZ") return GateKind::CZ;
    if (name == "CX") return GateKind::CX;
    throw std::invalid_argument("unknown gate kind: " + name);
}

}  // namespace

Circuit circuit_from_text(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line))
        throw std::invalid_argument("circuit text: missing header");
    std::istringstream header(line);
    std::string kw_qubits, slash, kw_tail;
    std::uint32_t n = 0;
    std::size_t tail = 0;
    header >> kw_qubits >> n >> slash >> kw_tail >> tail;
    if (kw_qubits != "QUBITS" || slash != "/" || kw_tail != "TAIL" || header.fail())
        throw std::invalid_argument("circuit text: bad header: " + line);

    Circuit c(n);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string name;
        ls >> name;
        GateKind kind = kind_from_name(name);
        std::uint32_t q0 = 0, q1 = 0;
        ls >> q0;
        if (is_two_qubit(kind)) ls >> q1;
        if (ls.fail())
            throw std::invalid_argument("circuit text: bad gate line: " + line);
        c.push(Gate{kind, q0, q1});
    }
    c.noiseless_tail_start = tail;
    auto violations = validate(c);
    if (!violations.empty())
        throw std::invalid_argument("circuit text: " + violations.front());
    return c;
}

}  // namespace iqpsim
