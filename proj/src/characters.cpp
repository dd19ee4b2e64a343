#include "ffh/characters.hpp"

#include <algorithm>
#include <random>

namespace ffh {

namespace {

// Working copy of a polynomial for the in-place descent. Residues are
// kept in [0, q); deg == -1 marks zero.
struct Work {
    PolyFq::Storage c;
    int deg = -1;

    void trim() {
        while (deg >= 0 && c[static_cast<std::size_t>(deg)] == 0) --deg;
    }
};

Work to_work(const PolyFq& f) {
    Work w;
    w.c.assign(f.coeffs().begin(), f.coeffs().end());
    w.deg = f.degree();
    return w;
}

// a <- a mod b for monic b.
void reduce_mod_monic(Work& a, const Work& b, std::uint32_t q) {
    const int db = b.deg;
    for (int i = a.deg; i >= db; --i) {
        const std::uint64_t c = a.c[static_cast<std::size_t>(i)];
        if (c == 0) continue;
        const std::uint64_t neg = q - c;
        for (int j = 0; j < db; ++j) {
            auto& x = a.c[static_cast<std::size_t>(i - db + j)];
            x = static_cast<Residue>((x + neg * b.c[static_cast<std::size_t>(j)]) % q);
        }
        a.c[static_cast<std::size_t>(i)] = 0;
    }
    a.deg = std::min(a.deg, db - 1);
    a.trim();
}

}  // namespace

SymbolValue residue_symbol(const PolyFq& a_in, const PolyFq& b_in) {
    if (!(a_in.field() == b_in.field())) throw ValidationError("residue symbol over different fields");
    if (b_in.is_constant()) throw ValidationError("residue symbol needs a modulus of degree >= 1");
    if (!b_in.is_monic()) throw ValidationError("residue symbol needs a monic modulus, got " + to_human(b_in));
    const auto& F = a_in.field();
    const std::uint32_t q = F.q();
    Work a = to_work(a_in);
    Work b = to_work(b_in);
    int result = 1;
    while (true) {
        reduce_mod_monic(a, b, q);
        if (a.deg < 0) return SymbolValue::Zero;
        const Residue lead = a.c[static_cast<std::size_t>(a.deg)];
        if (lead != 1) {
            if (b.deg % 2 == 1) result *= F.legendre(lead);
            const Residue inv = F.inv(lead);
            for (int i = 0; i <= a.deg; ++i)
                a.c[static_cast<std::size_t>(i)] = F.mul(a.c[static_cast<std::size_t>(i)], inv);
        }
        if (a.deg == 0) return symbol_from_int(result);
        std::swap(a, b);
    }
}

Conductor::Conductor(PolyFq p) : p_(std::move(p)) {
    if (!p_.is_monic()) throw ValidationError("conductor must be monic: " + to_human(p_));
    if (p_.degree() % 2 != 1) throw ValidationError("conductor must have odd degree 2g+1: " + to_human(p_));
    if (!is_irreducible(p_)) throw ValidationError("conductor must be irreducible: " + to_human(p_));
}

SymbolValue chi(const Conductor& conductor, const PolyFq& f) {
    if (!f.is_monic()) throw ValidationError("chi_P expects a monic argument, got " + to_human(f));
    if (f.degree() == 0) return SymbolValue::Plus;
    return residue_symbol(conductor.poly(), f);
}

CharTable::CharTable(const Conductor& conductor, int max_degree, std::shared_ptr<const FactorTable> factors)
    : conductor_(conductor), max_degree_(max_degree), factors_(std::move(factors)) {
    if (!factors_) throw ValidationError("character table needs a factor table");
    if (!(factors_->field() == conductor.field())) throw ValidationError("factor table over a different field");
    if (max_degree_ > factors_->max_degree())
        throw ValidationError("character table degree exceeds factor table degree");
    values_.assign(factors_->indexer().size(), 0);
    const auto& idx = factors_->indexer();
    for (int d = 1; d <= max_degree_; ++d)
        for (auto i : factors_->irreducibles(d))
            values_[i] = static_cast<std::int8_t>(to_int(residue_symbol(conductor_.poly(), idx.poly_at(i))));
}

SymbolValue CharTable::eval_index(std::size_t index) const {
    int v = 1;
    while (index != 0) {
        const auto p = factors_->smallest_factor(index);
        int s;
        if (factors_->indexer().degree_at(p) <= max_degree_)
            s = values_[p];
        else
            s = to_int(residue_symbol(conductor_.poly(), factors_->indexer().poly_at(p)));
        if (s == 0) return SymbolValue::Zero;
        v *= s;
        index = factors_->cofactor(index);
    }
    return symbol_from_int(v);
}

SymbolValue CharTable::eval(const PolyFq& f) const {
    if (!f.is_monic()) throw ValidationError("chi_P expects a monic argument, got " + to_human(f));
    if (f.degree() > factors_->max_degree()) return chi(conductor_, f);
    return eval_index(factors_->indexer().index_of(f));
}

std::size_t CharTable::self_test(std::size_t samples, std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    const auto& idx = factors_->indexer();
    std::uniform_int_distribution<std::size_t> pick(0, idx.size() - 1);
    std::size_t bad = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        const PolyFq f = idx.poly_at(pick(rng));
        if (eval(f) != chi(conductor_, f)) ++bad;
    }
    return bad;
}

CharTable build_char_table(const Conductor& conductor, int max_degree, std::shared_ptr<const FactorTable> factors) {
    if (!factors) factors = std::make_shared<const FactorTable>(conductor.field(), max_degree);
    return CharTable(conductor, max_degree, std::move(factors));
}

}  // namespace ffh
