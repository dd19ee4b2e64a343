#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "ffh/poly.hpp"
#include "ffh/poly_algebra.hpp"

namespace ffh {

/// Value of a quadratic residue symbol; Zero iff the arguments share a
/// nonconstant factor.
enum class SymbolValue : std::int8_t { Minus = -1, Zero = 0, Plus = 1 };

constexpr int to_int(SymbolValue s) noexcept { return static_cast<int>(s); }
constexpr SymbolValue symbol_from_int(int v) noexcept {
    return v > 0 ? SymbolValue::Plus : (v < 0 ? SymbolValue::Minus : SymbolValue::Zero);
}
constexpr SymbolValue operator*(SymbolValue a, SymbolValue b) noexcept {
    return symbol_from_int(to_int(a) * to_int(b));
}

/// The Jacobi-style residue symbol (A/B) for monic B of degree >= 1.
///
/// Computed by Euclidean descent: reduce A mod B, pull out the leading
/// unit c with (c/B) = legendre(c)^deg(B), then swap by reciprocity. For
/// q = 1 (mod 4) the reciprocity sign is always +1.
SymbolValue residue_symbol(const PolyFq& a, const PolyFq& b);

/// A validated conductor: monic irreducible P of odd degree 2g+1.
class Conductor {
public:
    explicit Conductor(PolyFq p);

    const PolyFq& poly() const noexcept { return p_; }
    const FieldParams& field() const noexcept { return p_.field(); }
    int genus() const noexcept { return (p_.degree() - 1) / 2; }
    int degree() const noexcept { return p_.degree(); }

    friend bool operator==(const Conductor&, const Conductor&) = default;

private:
    PolyFq p_;
};

/// chi_P(f) = (P/f) for monic f; chi_P(1) = +1.
SymbolValue chi(const Conductor& conductor, const PolyFq& f);

/// chi_P tabulated on every monic irreducible of degree <= max_degree.
///
/// Composite arguments are evaluated multiplicatively through the shared
/// factor table; factors beyond the tabulated degree fall back to a direct
/// symbol computation.
class CharTable {
public:
    CharTable(const Conductor& conductor, int max_degree, std::shared_ptr<const FactorTable> factors);

    const Conductor& conductor() const noexcept { return conductor_; }
    int max_degree() const noexcept { return max_degree_; }
    const FactorTable& factors() const noexcept { return *factors_; }

    /// Symbol of the irreducible with the given monic index.
    SymbolValue prime_value(std::uint32_t index) const noexcept { return static_cast<SymbolValue>(values_[index]); }
    /// chi_P(f) for monic f with deg f <= factors().max_degree().
    SymbolValue eval(const PolyFq& f) const;
    SymbolValue eval_index(std::size_t index) const;

    /// Compares `eval` with `residue_symbol` on `samples` pseudo-random monic
    /// f; returns the number of disagreements.
    std::size_t self_test(std::size_t samples, std::uint64_t seed) const;

private:
    Conductor conductor_;
    int max_degree_;
    std::shared_ptr<const FactorTable> factors_;
    std::vector<std::int8_t> values_;  // indexed like the factor table; 0 for non-irreducibles
};

CharTable build_char_table(const Conductor& conductor, int max_degree,
                           std::shared_ptr<const FactorTable> factors = nullptr);

}  // namespace ffh
