#include "iqpsim/pathsum.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <numbers>
#include <stdexcept>

namespace iqpsim {

namespace {

inline void xor_into(std::uint64_t* dst, const std::uint64_t* src, int words) {
    for (int w = 0; w < words; ++w) dst[w] ^= src[w];
}

inline bool is_zero(const std::uint64_t* v, int words) {
    for (int w = 0; w < words; ++w)
        if (v[w]) return false;
    return true;
}

inline bool get_bit(const std::uint64_t* v, int i) {
    return (v[i >> 6] >> (i & 63)) & 1u;
}

inline void flip_bit(std::uint64_t* v, int i) { v[i >> 6] ^= std::uint64_t(1) << (i & 63); }

inline void clear_bit(std::uint64_t* v, int i) { v[i >> 6] &= ~(std::uint64_t(1) << (i & 63)); }

inline int lowest_bit(const std::uint64_t* v, int words) {
    for (int w = 0; w < words; ++w)
        if (v[w]) return w * 64 + std::countr_zero(v[w]);
    return -1;
}

// Calls fn(i) for every set bit of v.
template <typename Fn>
inline void for_bits(const std::uint64_t* v, int words, Fn fn) {
    for (int w = 0; w < words; ++w) {
        std::uint64_t bits = v[w];
        while (bits) {
            fn(w * 64 + std::countr_zero(bits));
            bits &= bits - 1;
        }
    }
}

// e/2 power of two with e possibly odd or negative.
inline double half_pow2(int e) {
    if ((e & 1) == 0) return std::ldexp(1.0, e / 2);
    int f = (e - 1) / 2;
    return std::numbers::sqrt2 * std::ldexp(1.0, f);
}

inline std::complex<double> omega_pow(int k) {
    static const std::complex<double> table[8] = {
        {1.0, 0.0},
        {std::numbers::sqrt2 / 2.0, std::numbers::sqrt2 / 2.0},
        {0.0, 1.0},
        {-std::numbers::sqrt2 / 2.0, std::numbers::sqrt2 / 2.0},
        {-1.0, 0.0},
        {-std::numbers::sqrt2 / 2.0, -std::numbers::sqrt2 / 2.0},
        {0.0, -1.0},
        {std::numbers::sqrt2 / 2.0, -std::numbers::sqrt2 / 2.0},
    };
    return table[((k % 8) + 8) % 8];
}

}  // namespace

// Adds `value` (mod 4) to every d entry selected by `mask`, word-parallel
// over the two bit planes.
void AmplitudeKernel::add_masked(PhaseState& ps, int value, const std::uint64_t* mask) {
    value &= 3;
    if (value == 0) return;
    for (int w = 0; w < words_; ++w) {
        std::uint64_t m = mask[w];
        if (!m) continue;
        std::uint64_t carry = (value & 1) ? (ps.d0[w] & m) : 0;
        if (value & 1) ps.d0[w] ^= m;
        if (value & 2) ps.d1[w] ^= m;
        ps.d1[w] ^= carry;
    }
}

// phi += 2 * sum_{j<l in mask} u_j u_l
void AmplitudeKernel::toggle_pairs_within(PhaseState& ps, const std::uint64_t* mask) {
    for_bits(mask, words_, [&](int j) {
        std::uint64_t* row = &ps.rows[std::size_t(j) * words_];
        xor_into(row, mask, words_);
        clear_bit(row, j);
    });
}

// phi += 2 * XOR(a) * XOR(b); a and b may overlap.
void AmplitudeKernel::add_two_xy(PhaseState& ps, const std::uint64_t* a,
                                 const std::uint64_t* b) {
    for_bits(a, words_, [&](int j) {
        std::uint64_t* row = &ps.rows[std::size_t(j) * words_];
        xor_into(row, b, words_);
        clear_bit(row, j);
    });
    for_bits(b, words_, [&](int j) {
        std::uint64_t* row = &ps.rows[std::size_t(j) * words_];
        xor_into(row, a, words_);
        clear_bit(row, j);
    });
    for (int w = 0; w < words_; ++w) ps.d1[w] ^= a[w] & b[w];  // diagonal u^2 = u
}

// Rewrites the form under u_var := c XOR (XOR of expr), then removes var.
// expr must not contain var and may only reference active variables.
void AmplitudeKernel::substitute(PhaseState& ps, int var, int c,
                                 const std::uint64_t* expr) {
    const int d_var = int(get_bit(ps.d0.data(), var)) + 2 * int(get_bit(ps.d1.data(), var));
    std::vector<std::uint64_t> coupled(ps.rows.begin() + std::size_t(var) * words_,
                                       ps.rows.begin() + std::size_t(var + 1) * words_);

    // d_var * (c ^ XOR(expr))
    if (d_var & 1) {
        ps.gamma4 += d_var * c;
        add_masked(ps, d_var, expr);
        toggle_pairs_within(ps, expr);
        if (c)
            for (int w = 0; w < words_; ++w) ps.d1[w] ^= expr[w];
    } else if (d_var == 2) {
        ps.gamma4 += 2 * c;
        for (int w = 0; w < words_; ++w) ps.d1[w] ^= expr[w];
    }

    // 2 * (c ^ XOR(expr)) * XOR(coupled)
    if (c)
        for (int w = 0; w < words_; ++w) ps.d1[w] ^= coupled[w];
    add_two_xy(ps, expr, coupled.data());

    // erase var
    for_bits(coupled.data(), words_, [&](int l) { clear_bit(&ps.rows[std::size_t(l) * words_], var); });
    std::memset(&ps.rows[std::size_t(var) * words_], 0, std::size_t(words_) * 8);
    clear_bit(ps.d0.data(), var);
    clear_bit(ps.d1.data(), var);
    clear_bit(ps.active.data(), var);
}

AmplitudeKernel::AmplitudeKernel(const Circuit& c, const Outcome& x) {
    {
        auto violations = validate(c);
        if (!violations.empty())
            throw std::invalid_argument("AmplitudeKernel: " + violations.front());
    }
    if (x.size() != c.n_qubits)
        throw std::invalid_argument("AmplitudeKernel: outcome length mismatch");

    for (const Gate& g : c.gates)
        if (g.kind == GateKind::H) ++h_;
    words_ = (h_ + 64) / 64;  // at least one word

    base_.d0.assign(words_, 0);
    base_.d1.assign(words_, 0);
    base_.rows.assign(std::size_t(h_) * words_, 0);
    base_.active.assign(words_, 0);
    base_.gamma4 = 0;

    const std::size_t n = c.n_qubits;
    std::vector<std::uint64_t> form(n * words_, 0);  // qubit bit = const ^ XOR(mask)
    std::vector<std::uint8_t> form_const(n, 0);
    std::vector<std::uint64_t> unit(words_, 0);

    int next_var = 0;
    auto apply_z = [&](std::uint32_t q) {
        base_.gamma4 += 2 * form_const[q];
        for (int w = 0; w < words_; ++w) base_.d1[w] ^= form[q * words_ + w];
    };

    for (const Gate& g : c.gates) {
        const std::uint64_t* fq = &form[g.q0 * std::size_t(words_)];
        switch (g.kind) {
            case GateKind::H: {
                const int w = next_var++;
                flip_bit(base_.active.data(), w);
                if (form_const[g.q0]) flip_bit(base_.d1.data(), w);
                std::fill(unit.begin(), unit.end(), 0);
                flip_bit(unit.data(), w);
                add_two_xy(base_, unit.data(), fq);
                std::copy(unit.begin(), unit.end(), form.begin() + g.q0 * std::size_t(words_));
                form_const[g.q0] = 0;
                break;
            }
            case GateKind::X:
                form_const[g.q0] ^= 1;
                break;
            case GateKind::Z:
                apply_z(g.q0);
                break;
            case GateKind::Y:
                base_.gamma4 += 1;
                apply_z(g.q0);
                form_const[g.q0] ^= 1;
                break;
            case GateKind::S: {
                const int cb = form_const[g.q0];
                base_.gamma4 += cb;
                add_masked(base_, 1 + 2 * cb, fq);
                toggle_pairs_within(base_, fq);
                break;
            }
            case GateKind::T: {
                tap_masks_.insert(tap_masks_.end(), fq, fq + words_);
                tap_consts_.push_back(form_const[g.q0]);
                break;
            }
            case GateKind::CZ: {
                const std::uint64_t* fp = &form[g.q1 * std::size_t(words_)];
                const int cp = form_const[g.q0], cq = form_const[g.q1];
                base_.gamma4 += 2 * (cp & cq);
                if (cp)
                    for (int w = 0; w < words_; ++w) base_.d1[w] ^= fp[w];
                if (cq)
                    for (int w = 0; w < words_; ++w) base_.d1[w] ^= fq[w];
                add_two_xy(base_, fq, fp);
                break;
            }
            case GateKind::CX: {
                std::uint64_t* ft = &form[g.q1 * std::size_t(words_)];
                xor_into(ft, fq, words_);
                form_const[g.q1] ^= form_const[g.q0];
                break;
            }
        }
    }

    // Output constraints: XOR(form_q) = x_q ^ const_q for every qubit.
    // Reduced row echelon form over the path variables.
    struct Row {
        std::vector<std::uint64_t> mask;
        int pivot;
        std::uint8_t rhs;
    };
    std::vector<Row> rows;
    std::vector<int> pivot_row(std::size_t(h_ ? h_ : 1), -1);

    auto reduce = [&](std::uint64_t* mask, std::uint8_t& rhs) {
        for (int w = 0; w < words_; ++w) {
            std::uint64_t bits = mask[w];
            while (bits) {
                int b = w * 64 + std::countr_zero(bits);
                int r = pivot_row[b];
                if (r >= 0) {
                    xor_into(mask, rows[r].mask.data(), words_);
                    rhs ^= rows[r].rhs;
                    bits = mask[w];  // pivot bit cleared; free bits may toggle
                    bits &= ~((std::uint64_t(1) << (b & 63)) - 1);
                    bits &= ~(std::uint64_t(1) << (b & 63));
                } else {
                    bits &= bits - 1;
                }
            }
        }
    };

    std::vector<std::uint64_t> eq(words_);
    for (std::size_t q = 0; q < n; ++q) {
        std::copy(form.begin() + q * words_, form.begin() + (q + 1) * words_, eq.begin());
        std::uint8_t rhs = std::uint8_t(x.bits[q] ^ form_const[q]);
        reduce(eq.data(), rhs);
        if (is_zero(eq.data(), words_)) {
            if (rhs) {
                feasible_ = false;
                return;
            }
            continue;
        }
        int p = lowest_bit(eq.data(), words_);
        for (Row& r : rows)
            if (get_bit(r.mask.data(), p)) {
                xor_into(r.mask.data(), eq.data(), words_);
                r.rhs ^= rhs;
            }
        pivot_row[p] = int(rows.size());
        rows.push_back(Row{std::vector<std::uint64_t>(eq.begin(), eq.end()), p, rhs});
    }

    // Rewrite T taps over free variables only.
    const std::size_t t = tap_consts_.size();
    for (std::size_t i = 0; i < t; ++i) {
        std::uint64_t* mask = &tap_masks_[i * words_];
        std::uint8_t cb = tap_consts_[i];
        reduce(mask, cb);
        tap_consts_[i] = cb;
    }

    // Substitute pivots into the phase; pivot expressions reference free
    // variables only, so the order is immaterial.
    for (const Row& r : rows) {
        std::copy(r.mask.begin(), r.mask.end(), eq.begin());
        clear_bit(eq.data(), r.pivot);
        substitute(base_, r.pivot, r.rhs, eq.data());
    }

    base_.gamma4 = ((base_.gamma4 % 4) + 4) % 4;
    work_ = base_;
    scratch_.assign(words_, 0);
}

std::complex<double> AmplitudeKernel::evaluate(const std::vector<std::uint8_t>& selector) {
    if (selector.size() != tap_consts_.size())
        throw std::invalid_argument("evaluate: selector length must equal the T count");
    return evaluate(selector.data());
}

std::complex<double> AmplitudeKernel::evaluate_mask(std::uint64_t selector) {
    const std::size_t t = tap_consts_.size();
    if (t > 64) throw std::invalid_argument("evaluate_mask: more than 64 T gates");
    std::uint8_t bits[64];
    for (std::size_t i = 0; i < t; ++i) bits[i] = (selector >> i) & 1u;
    return evaluate(t ? bits : nullptr);
}

std::complex<double> AmplitudeKernel::evaluate(const std::uint8_t* selector) {
    if (!feasible_) return {0.0, 0.0};

    std::copy(base_.d0.begin(), base_.d0.end(), work_.d0.begin());
    std::copy(base_.d1.begin(), base_.d1.end(), work_.d1.begin());
    std::copy(base_.rows.begin(), base_.rows.end(), work_.rows.begin());
    std::copy(base_.active.begin(), base_.active.end(), work_.active.begin());
    work_.gamma4 = base_.gamma4;

    const std::size_t t = tap_consts_.size();
    for (std::size_t i = 0; i < t; ++i) {
        if (!selector[i]) continue;  // T -> I branch
        const std::uint64_t* mask = &tap_masks_[i * words_];
        for (int w = 0; w < words_; ++w) work_.d1[w] ^= mask[w];
        work_.gamma4 += 2 * tap_consts_[i];
    }

    return gauss_sum(work_);
}

std::complex<double> AmplitudeKernel::gauss_sum(PhaseState& ps) {
    int p2 = 0;
    int w8 = 0;

    for (;;) {
        int j = lowest_bit(ps.active.data(), words_);
        if (j < 0) break;
        std::uint64_t* row = &ps.rows[std::size_t(j) * words_];
        const int dj = int(get_bit(ps.d0.data(), j)) + 2 * int(get_bit(ps.d1.data(), j));

        if (is_zero(row, words_)) {
            if (dj == 2) return {0.0, 0.0};  // 1 + i^2 = 0
            if (dj == 0) {
                p2 += 2;
            } else {
                p2 += 1;
                w8 += (dj == 1) ? 1 : 7;
            }
            clear_bit(ps.active.data(), j);
            clear_bit(ps.d0.data(), j);
            clear_bit(ps.d1.data(), j);
            continue;
        }

        std::copy(row, row + words_, scratch_.begin());
        std::uint64_t* L = scratch_.data();

        // drop variable j from the form
        for_bits(L, words_, [&](int l) { clear_bit(&ps.rows[std::size_t(l) * words_], j); });
        std::memset(row, 0, std::size_t(words_) * 8);
        clear_bit(ps.active.data(), j);
        clear_bit(ps.d0.data(), j);
        clear_bit(ps.d1.data(), j);

        if (dj & 1) {
            // sum over u_j gives sqrt2 * omega^{+-1} times a phase linear in
            // the parity of the coupled variables
            p2 += 1;
            w8 += (dj == 1) ? 1 : 7;
            add_masked(ps, (dj == 1) ? 3 : 1, L);
            toggle_pairs_within(ps, L);
        } else {
            // sum over u_j forces the coupled parity; factor 2
            p2 += 2;
            const int c0 = (dj == 2) ? 1 : 0;
            const int piv = lowest_bit(L, words_);
            clear_bit(L, piv);
            substitute(ps, piv, c0, L);
        }
    }

    w8 += 2 * ps.gamma4;  // substitutions inside the loop add to gamma4
    ps.gamma4 = 0;
    return omega_pow(w8) * half_pow2(p2 - h_);
}

std::complex<double> clifford_amplitude(const Circuit& c, const Outcome& x) {
    if (t_count(c) != 0)
        throw std::invalid_argument("clifford_amplitude: circuit contains T gates");
    AmplitudeKernel kernel(c, x);
    return kernel.evaluate(nullptr);
}

}  // namespace iqpsim
