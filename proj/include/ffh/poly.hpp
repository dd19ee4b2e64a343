#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "ffh/field.hpp"

namespace ffh {

/// Dense polynomial over F_q, coefficients stored lowest degree first.
///
/// The representation is canonical: all residues lie in [0, q) and the
/// leading coefficient is nonzero, so structural equality is equality in
/// F_q[T]. The zero polynomial has no coefficients and reports
/// `kZeroDegree`; callers must test `is_zero()` rather than compare degrees.
class PolyFq {
public:
    using Storage = boost::container::small_vector<Residue, 24>;
    static constexpr int kZeroDegree = -1;

    explicit PolyFq(FieldParams field) : field_(field) {}
    /// Builds from arbitrary integers (reduced mod q, trailing zeros trimmed).
    PolyFq(FieldParams field, std::span<const std::int64_t> low_first);
    PolyFq(FieldParams field, std::initializer_list<std::int64_t> low_first)
        : PolyFq(field, std::span<const std::int64_t>(low_first.begin(), low_first.size())) {}

    static PolyFq constant(FieldParams field, Residue c);
    static PolyFq monomial(FieldParams field, int degree, Residue c = 1);
    static PolyFq from_residues(FieldParams field, Storage coeffs);

    const FieldParams& field() const noexcept { return field_; }
    std::uint32_t q() const noexcept { return field_.q(); }

    int degree() const noexcept {
        return coeffs_.empty() ? kZeroDegree : static_cast<int>(coeffs_.size()) - 1;
    }
    bool is_zero() const noexcept { return coeffs_.empty(); }
    bool is_constant() const noexcept { return coeffs_.size() <= 1; }
    bool is_one() const noexcept { return coeffs_.size() == 1 && coeffs_[0] == 1; }
    bool is_monic() const noexcept { return !coeffs_.empty() && coeffs_.back() == 1; }

    Residue coeff(int i) const noexcept {
        return i >= 0 && i < static_cast<int>(coeffs_.size()) ? coeffs_[i] : 0;
    }
    Residue leading() const noexcept { return coeffs_.empty() ? 0 : coeffs_.back(); }
    std::span<const Residue> coeffs() const noexcept { return {coeffs_.data(), coeffs_.size()}; }

    PolyFq monic() const;
    PolyFq scaled(Residue c) const;
    PolyFq derivative() const;
    Residue evaluate(Residue x) const noexcept;

    PolyFq& operator+=(const PolyFq& rhs);
    PolyFq& operator-=(const PolyFq& rhs);
    friend PolyFq operator+(PolyFq lhs, const PolyFq& rhs) { return lhs += rhs; }
    friend PolyFq operator-(PolyFq lhs, const PolyFq& rhs) { return lhs -= rhs; }
    friend PolyFq operator*(const PolyFq& lhs, const PolyFq& rhs);

    friend bool operator==(const PolyFq& a, const PolyFq& b) noexcept {
        return a.field_ == b.field_ && std::equal(a.coeffs_.begin(), a.coeffs_.end(),
                                                  b.coeffs_.begin(), b.coeffs_.end());
    }
    /// Total order: by degree, then coefficients from the top down.
    friend std::strong_ordering operator<=>(const PolyFq& a, const PolyFq& b) noexcept;

private:
    void trim() noexcept {
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    }
    void require_same_field(const PolyFq& other) const;

    FieldParams field_;
    Storage coeffs_;
};

struct DivMod {
    PolyFq quotient;
    PolyFq remainder;
};

DivMod divmod(const PolyFq& a, const PolyFq& b);
PolyFq rem(const PolyFq& a, const PolyFq& b);
PolyFq quot(const PolyFq& a, const PolyFq& b);
/// Monic gcd; gcd(0, 0) is the zero polynomial.
PolyFq gcd(const PolyFq& a, const PolyFq& b);
PolyFq mul_mod(const PolyFq& a, const PolyFq& b, const PolyFq& modulus);
PolyFq pow_mod(const PolyFq& base, std::uint64_t e, const PolyFq& modulus);
/// a^q mod modulus, i.e. one application of Frobenius in F_q[T]/(modulus).
PolyFq frobenius_mod(const PolyFq& a, const PolyFq& modulus);
PolyFq pow(const PolyFq& base, unsigned e);

/// "T^3+2T+1"; zero prints as "0".
std::string to_human(const PolyFq& f);
/// "poly:q5:1,2,0,1" (constant term first).
std::string to_compact(const PolyFq& f);
/// Accepts either text form. The human form needs `field`; the compact
/// form carries q and must agree with `field` when both are present.
PolyFq parse_poly(std::string_view text, std::optional<FieldParams> field = std::nullopt);

}  // namespace ffh
