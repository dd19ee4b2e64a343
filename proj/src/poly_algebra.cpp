#include "ffh/poly_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace ffh {

std::uint64_t checked_power(std::uint64_t q, int n) {
    std::uint64_t r = 1;
    for (int i = 0; i < n; ++i) {
        if (r > std::numeric_limits<std::uint64_t>::max() / q)
            throw ValidationError("q^" + std::to_string(n) + " overflows 64 bits");
        r *= q;
    }
    return r;
}

// --- MonicIndexer ----------------------------------------------------------

MonicIndexer::MonicIndexer(FieldParams field, int max_degree) : field_(field), max_degree_(max_degree) {
    if (max_degree < 0) throw ValidationError("negative degree bound");
    offsets_.resize(static_cast<std::size_t>(max_degree) + 2);
    offsets_[0] = 0;
    std::uint64_t block = 1;
    for (int n = 0; n <= max_degree; ++n) {
        offsets_[static_cast<std::size_t>(n) + 1] = offsets_[static_cast<std::size_t>(n)] + block;
        if (n < max_degree) block = checked_power(field.q(), n + 1);
    }
    if (offsets_.back() > std::numeric_limits<std::uint32_t>::max())
        throw ValidationError("monic index over degree <= " + std::to_string(max_degree) + " is too large");
}

std::size_t MonicIndexer::index_of(const PolyFq& f) const {
    if (!f.is_monic()) throw ValidationError("index_of expects a monic polynomial, got " + to_human(f));
    const int n = f.degree();
    if (n > max_degree_) throw ValidationError("degree " + std::to_string(n) + " exceeds table bound");
    std::size_t code = 0;
    for (int i = n - 1; i >= 0; --i) code = code * field_.q() + f.coeff(i);
    return offset(n) + code;
}

int MonicIndexer::degree_at(std::size_t index) const noexcept {
    auto it = std::upper_bound(offsets_.begin(), offsets_.end(), index);
    return static_cast<int>(it - offsets_.begin()) - 1;
}

PolyFq MonicIndexer::poly_at(std::size_t index) const {
    const int n = degree_at(index);
    std::size_t code = index - offset(n);
    PolyFq::Storage c(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i < n; ++i) {
        c[static_cast<std::size_t>(i)] = static_cast<Residue>(code % field_.q());
        code /= field_.q();
    }
    c[static_cast<std::size_t>(n)] = 1;
    return PolyFq::from_residues(field_, std::move(c));
}

// --- Irreducibility --------------------------------------------------------

namespace {

std::vector<int> prime_divisors(int n) {
    std::vector<int> out;
    for (int p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            out.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

}  // namespace

bool is_irreducible(const PolyFq& f) {
    if (f.is_constant()) throw ValidationError("irreducibility test needs degree >= 1");
    if (!f.is_monic()) throw ValidationError("irreducibility test expects a monic polynomial, got " + to_human(f));
    const int n = f.degree();
    if (n == 1) return true;
    const auto& F = f.field();
    const PolyFq t = PolyFq::monomial(F, 1);
    // Cheap rejection: a root in F_q means a linear factor.
    for (Residue a = 0; a < F.q(); ++a)
        if (f.evaluate(a) == 0) return false;
    // frob[i] = T^(q^i) mod f for i = 0..n.
    std::vector<PolyFq> frob;
    frob.reserve(static_cast<std::size_t>(n) + 1);
    frob.push_back(rem(t, f));
    for (int i = 1; i <= n; ++i) frob.push_back(frobenius_mod(frob.back(), f));
    if (!(frob[static_cast<std::size_t>(n)] == rem(t, f))) return false;
    for (int p : prime_divisors(n)) {
        const PolyFq g = gcd(frob[static_cast<std::size_t>(n / p)] - t, f);
        if (!g.is_one()) return false;
    }
    return true;
}

// --- Enumeration -----------------------------------------------------------

void for_each_monic(FieldParams field, int n, const std::function<void(const PolyFq&)>& fn) {
    if (n < 0) throw ValidationError("negative degree");
    PolyFq::Storage c(static_cast<std::size_t>(n) + 1, 0);
    c[static_cast<std::size_t>(n)] = 1;
    const Residue q = field.q();
    while (true) {
        fn(PolyFq::from_residues(field, c));
        // Odometer with c_{n-1} varying fastest, giving lexicographic order
        // on (c_0, ..., c_{n-1}).
        int i = n - 1;
        while (i >= 0 && c[static_cast<std::size_t>(i)] == q - 1) {
            c[static_cast<std::size_t>(i)] = 0;
            --i;
        }
        if (i < 0) return;
        ++c[static_cast<std::size_t>(i)];
    }
}

std::vector<PolyFq> enumerate_monic(FieldParams field, int n) {
    std::vector<PolyFq> out;
    out.reserve(checked_power(field.q(), n));
    for_each_monic(field, n, [&](const PolyFq& f) { out.push_back(f); });
    return out;
}

namespace {

// Sieve over the monic polynomials of degree n: mark every product a*b
// with a irreducible of degree <= n/2.
std::vector<PolyFq> sieve_irreducible(FieldParams field, int n) {
    const std::uint64_t q = field.q();
    const std::uint64_t total = checked_power(q, n);
    std::vector<std::uint8_t> composite(total, 0);
    auto code_of = [&](const PolyFq& f) {
        std::uint64_t code = 0;
        for (int i = n - 1; i >= 0; --i) code = code * q + f.coeff(i);
        return code;
    };
    for (int d = 1; 2 * d <= n; ++d) {
        const auto small = enumerate_irreducible(field, d);
        for_each_monic(field, n - d, [&](const PolyFq& b) {
            for (const auto& a : small) composite[code_of(a * b)] = 1;
        });
    }
    std::vector<PolyFq> out;
    for_each_monic(field, n, [&](const PolyFq& f) {
        if (!composite[code_of(f)]) out.push_back(f);
    });
    return out;
}

}  // namespace

std::vector<PolyFq> enumerate_irreducible(FieldParams field, int n) {
    if (n < 1) throw ValidationError("irreducible enumeration needs degree >= 1");
    // The sieve needs q^n bytes; beyond that filter with Rabin's test.
    constexpr std::uint64_t kSieveLimit = std::uint64_t{1} << 27;
    const double approx = std::pow(static_cast<double>(field.q()), n);
    if (n > 1 && approx <= static_cast<double>(kSieveLimit)) return sieve_irreducible(field, n);
    std::vector<PolyFq> out;
    for_each_monic(field, n, [&](const PolyFq& f) {
        if (is_irreducible(f)) out.push_back(f);
    });
    return out;
}

std::uint64_t count_irreducible(std::uint64_t q, int n) {
    if (n < 1) throw ValidationError("irreducible count needs degree >= 1");
    auto mobius = [](int m) {
        int result = 1;
        for (int p = 2; p * p <= m; ++p) {
            if (m % p == 0) {
                m /= p;
                if (m % p == 0) return 0;
                result = -result;
            }
        }
        if (m > 1) result = -result;
        return result;
    };
    // Signed accumulation in 128 bits: the negative terms never exceed the
    // leading q^n term.
    __int128 sum = 0;
    for (int d = 1; d <= n; ++d) {
        if (n % d != 0) continue;
        int mu = mobius(d);
        if (mu != 0) sum += static_cast<__int128>(mu) * checked_power(q, n / d);
    }
    return static_cast<std::uint64_t>(sum / n);
}

// --- Factorization ---------------------------------------------------------

PolyFq Factorization::product(FieldParams field) const {
    PolyFq r = PolyFq::constant(field, unit);
    for (const auto& [p, m] : factors) r = r * pow(p, static_cast<unsigned>(m));
    return r;
}

namespace {

using FactorList = std::vector<std::pair<PolyFq, int>>;

// f(T) = h(T^p) over a prime field means f = h^p.
PolyFq pth_root(const PolyFq& f) {
    const int p = static_cast<int>(f.q());
    PolyFq::Storage c(static_cast<std::size_t>(f.degree() / p) + 1, 0);
    for (int i = 0; i <= f.degree(); i += p) c[static_cast<std::size_t>(i / p)] = f.coeff(i);
    return PolyFq::from_residues(f.field(), std::move(c));
}

// Square-free decomposition of a monic f: list of (square-free part, multiplicity).
FactorList squarefree_decomposition(const PolyFq& f) {
    FactorList out;
    if (f.degree() < 1) return out;
    const int p = static_cast<int>(f.q());
    PolyFq d = f.derivative();
    if (d.is_zero()) {
        for (auto& [h, m] : squarefree_decomposition(pth_root(f))) out.emplace_back(h, m * p);
        return out;
    }
    PolyFq c = gcd(f, d);
    PolyFq w = quot(f, c);
    int i = 1;
    while (!w.is_one()) {
        PolyFq y = gcd(w, c);
        PolyFq z = quot(w, y);
        if (!z.is_one()) out.emplace_back(z.monic(), i);
        ++i;
        w = y;
        c = quot(c, y);
    }
    if (!c.is_one()) {
        for (auto& [h, m] : squarefree_decomposition(pth_root(c.monic()))) out.emplace_back(h, m * p);
    }
    return out;
}

// Distinct-degree split of a square-free monic f: (product of all degree-d factors, d).
std::vector<std::pair<PolyFq, int>> distinct_degree(PolyFq f) {
    std::vector<std::pair<PolyFq, int>> out;
    const auto& F = f.field();
    const PolyFq t = PolyFq::monomial(F, 1);
    PolyFq h = rem(t, f);
    for (int d = 1; 2 * d <= f.degree(); ++d) {
        h = frobenius_mod(h, f);
        PolyFq g = gcd(h - t, f);
        if (!g.is_one()) {
            out.emplace_back(g, d);
            f = quot(f, g);
            h = rem(h, f);
        }
    }
    if (f.degree() >= 1) out.emplace_back(f, f.degree());
    return out;
}

// h^((q^d - 1)/2) mod f, using (q^d - 1)/2 = ((q - 1)/2)(1 + q + ... + q^(d-1)).
PolyFq half_order_power(const PolyFq& h, int d, const PolyFq& f) {
    PolyFq a = pow_mod(h, (h.q() - 1) / 2, f);
    PolyFq result = a;
    for (int i = 1; i < d; ++i) {
        a = frobenius_mod(a, f);
        result = mul_mod(result, a, f);
    }
    return result;
}

// Equal-degree split of a square-free f whose irreducible factors all
// have degree d. Trial polynomials are taken in a fixed order, so the
// result is deterministic.
void equal_degree(const PolyFq& f, int d, std::vector<PolyFq>& out) {
    if (f.degree() == d) {
        out.push_back(f);
        return;
    }
    const auto& F = f.field();
    const PolyFq one = PolyFq::constant(F, 1);
    for (int e = 1; e < f.degree(); ++e) {
        bool split = false;
        for_each_monic(F, e, [&](const PolyFq& h) {
            if (split) return;
            PolyFq g = gcd(h, f);
            if (g.degree() < 1 || g.degree() >= f.degree()) {
                g = gcd(half_order_power(h, d, f) - one, f);
            }
            if (g.degree() >= 1 && g.degree() < f.degree()) {
                equal_degree(g, d, out);
                equal_degree(quot(f, g), d, out);
                split = true;
            }
        });
        if (split) return;
    }
    throw ComputationError("equal-degree splitting failed for " + to_human(f));
}

}  // namespace

Factorization factorize(const PolyFq& f) {
    if (f.is_constant()) throw ValidationError("factorize needs a nonconstant polynomial");
    Factorization result;
    result.unit = f.leading();
    const PolyFq m = f.monic();
    std::map<PolyFq, int> acc;
    for (const auto& [part, mult] : squarefree_decomposition(m)) {
        for (const auto& [block, d] : distinct_degree(part)) {
            std::vector<PolyFq> irr;
            equal_degree(block, d, irr);
            for (auto& p : irr) acc[p.monic()] += mult;
        }
    }
    result.factors.assign(acc.begin(), acc.end());
    return result;
}

// --- FactorTable -----------------------------------------------------------

FactorTable::FactorTable(FieldParams field, int max_degree) : indexer_(field, max_degree) {
    constexpr auto kUnset = std::numeric_limits<std::uint32_t>::max();
    const std::size_t n = indexer_.size();
    spf_.assign(n, kUnset);
    cofactor_.assign(n, 0);
    irreducibles_.resize(static_cast<std::size_t>(max_degree) + 1);
    spf_[0] = 0;
    for (int d = 1; d <= max_degree; ++d) {
        for (std::size_t idx = indexer_.offset(d); idx < indexer_.offset(d + 1); ++idx) {
            if (spf_[idx] != kUnset) continue;
            spf_[idx] = static_cast<std::uint32_t>(idx);
            cofactor_[idx] = 0;
            irreducibles_[static_cast<std::size_t>(d)].push_back(static_cast<std::uint32_t>(idx));
        }
        // Every irreducible of degree d is now known; mark its multiples whose
        // other factors all have degree >= d (smaller ones were marked earlier).
        for (auto a_idx : irreducibles_[static_cast<std::size_t>(d)]) {
            const PolyFq a = indexer_.poly_at(a_idx);
            for (std::size_t h_idx = 1; h_idx < indexer_.offset(max_degree - d + 1); ++h_idx) {
                const auto s = spf_[h_idx];
                if (s != kUnset && indexer_.degree_at(s) < d) continue;
                const std::size_t prod = indexer_.index_of(a * indexer_.poly_at(h_idx));
                if (spf_[prod] == kUnset) {
                    spf_[prod] = a_idx;
                    cofactor_[prod] = static_cast<std::uint32_t>(h_idx);
                }
            }
        }
    }
}

Factorization FactorTable::factorize(const PolyFq& f) const {
    if (f.is_constant()) throw ValidationError("factorize needs a nonconstant polynomial");
    Factorization result;
    std::size_t idx = indexer_.index_of(f);
    std::map<std::uint32_t, int> counts;
    while (idx != 0) {
        ++counts[spf_[idx]];
        idx = cofactor_[idx];
    }
    for (auto& [p, m] : counts) result.factors.emplace_back(indexer_.poly_at(p), m);
    std::sort(result.factors.begin(), result.factors.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return result;
}

// --- Arithmetic functions --------------------------------------------------

int von_mangoldt(const PolyFq& f) {
    if (!f.is_monic()) throw ValidationError("von_mangoldt expects a monic polynomial");
    if (f.degree() == 0) return 0;
    const auto fac = factorize(f);
    return fac.factors.size() == 1 ? fac.factors.front().first.degree() : 0;
}

SquarefreeSplit squarefree_split(const PolyFq& l) {
    if (!l.is_monic()) throw ValidationError("squarefree_split expects a monic polynomial");
    const auto& F = l.field();
    SquarefreeSplit out{PolyFq::constant(F, 1), PolyFq::constant(F, 1)};
    if (l.degree() == 0) return out;
    for (const auto& [p, m] : factorize(l).factors) {
        if (m % 2) out.squarefree = out.squarefree * p;
        if (m / 2) out.square_root = out.square_root * pow(p, static_cast<unsigned>(m / 2));
    }
    return out;
}

bool is_square(const PolyFq& f) {
    if (f.is_zero()) return true;
    if (f.field().legendre(f.leading()) != 1) return false;
    if (f.degree() == 0) return true;
    for (const auto& [p, m] : factorize(f).factors)
        if (m % 2) return false;
    return true;
}

}  // namespace ffh
