#pragma once

// Deliberately naive reference implementations used as test oracles. They
// rely only on ring operations in F_q[T] and brute-force search, never on
// the library's tables, descent or folding.

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "ffh/poly.hpp"

namespace oracle {

using ffh::FieldParams;
using ffh::PolyFq;

// Monic polynomials of degree n, counting through coefficient vectors with
// the constant term varying slowest.
inline std::vector<PolyFq> monics(FieldParams F, int n) {
    const std::uint32_t q = F.q();
    std::vector<std::int64_t> c(static_cast<std::size_t>(n) + 1, 0);
    c[static_cast<std::size_t>(n)] = 1;
    std::vector<PolyFq> out;
    while (true) {
        out.emplace_back(F, std::span<const std::int64_t>(c.data(), c.size()));
        int i = n - 1;
        while (i >= 0 && c[static_cast<std::size_t>(i)] == q - 1) c[static_cast<std::size_t>(i--)] = 0;
        if (i < 0) break;
        ++c[static_cast<std::size_t>(i)];
    }
    return out;
}

inline bool divides(const PolyFq& d, const PolyFq& f) { return ffh::rem(f, d).is_zero(); }

inline bool irreducible(const PolyFq& f) {
    for (int d = 1; 2 * d <= f.degree(); ++d)
        for (const auto& h : monics(f.field(), d))
            if (divides(h, f)) return false;
    return f.degree() >= 1;
}

// Trial division in increasing degree: every divisor found first is irreducible.
inline std::vector<std::pair<PolyFq, int>> factor(PolyFq f) {
    std::vector<std::pair<PolyFq, int>> out;
    f = f.monic();
    for (int d = 1; 2 * d <= f.degree(); ++d) {
        for (const auto& h : monics(f.field(), d)) {
            int e = 0;
            while (f.degree() >= d && divides(h, f)) {
                f = ffh::quot(f, h);
                ++e;
            }
            if (e) out.emplace_back(h, e);
        }
    }
    if (f.degree() >= 1) out.emplace_back(f, 1);
    return out;
}

// Euler criterion in the residue field F_q[T]/(Q) for irreducible monic Q.
inline int euler(const PolyFq& A, const PolyFq& Q) {
    const PolyFq r = ffh::rem(A, Q);
    if (r.is_zero()) return 0;
    std::uint64_t order = 1;
    for (int i = 0; i < Q.degree(); ++i) order *= Q.q();
    const PolyFq v = ffh::pow_mod(r, (order - 1) / 2, Q);
    return v.is_one() ? 1 : -1;
}

inline int jacobi(const PolyFq& A, const PolyFq& B) {
    if (B.degree() == 0) return 1;
    int s = 1;
    for (const auto& [Q, e] : factor(B)) {
        const int v = euler(A, Q);
        if (v == 0) return 0;
        if (e % 2) s *= v;
    }
    return s;
}

// c_n = sum over monic f of degree n of (P/f), by direct double loop.
inline std::vector<std::int64_t> coefficients(const PolyFq& P, int top) {
    std::vector<std::int64_t> c;
    for (int n = 0; n <= top; ++n) {
        std::int64_t s = 0;
        for (const auto& f : monics(P.field(), n)) s += jacobi(P, f);
        c.push_back(s);
    }
    return c;
}

inline int von_mangoldt(const PolyFq& f) {
    if (f.degree() < 1) return 0;
    auto fs = factor(f);
    return fs.size() == 1 ? fs[0].first.degree() : 0;
}

// P_X(1/2) from the defining sum over all monic f with deg f <= X.
inline double p_x(const PolyFq& P, int X) {
    double s = 0.0;
    const double q = P.q();
    for (int n = 1; n <= X; ++n)
        for (const auto& f : monics(P.field(), n)) {
            const int lam = oracle::von_mangoldt(f);
            if (lam) s += lam * jacobi(P, f) / (std::pow(q, 0.5 * n) * n);
        }
    return std::exp(s);
}

}  // namespace oracle
