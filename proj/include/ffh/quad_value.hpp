#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace ffh {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// "p/q" with an explicit denominator, e.g. "2/1".
std::string rational_to_string(const Rational& r);
Rational parse_rational(std::string_view text);
double rational_to_double(const Rational& r);

/// Exact element a + b * q^(-1/2) with rational a, b.
///
/// Closed under +, -, * using (q^(-1/2))^2 = 1/q. Equality is
/// componentwise, which is exact because q^(-1/2) is irrational.
class QuadValue {
public:
    explicit QuadValue(std::uint32_t q) : q_(q) {}
    QuadValue(std::uint32_t q, Rational a, Rational b) : q_(q), a_(std::move(a)), b_(std::move(b)) {}

    static QuadValue integer(std::uint32_t q, std::int64_t v) { return QuadValue(q, Rational(v), Rational(0)); }
    /// c * q^(-n/2) for integer c and n >= 0.
    static QuadValue scaled_power(std::uint32_t q, const BigInt& c, int n);

    std::uint32_t q() const noexcept { return q_; }
    const Rational& rational_part() const noexcept { return a_; }
    const Rational& surd_part() const noexcept { return b_; }

    QuadValue& operator+=(const QuadValue& rhs);
    QuadValue& operator-=(const QuadValue& rhs);
    QuadValue& operator*=(const QuadValue& rhs);
    QuadValue& operator/=(const Rational& rhs);
    friend QuadValue operator+(QuadValue a, const QuadValue& b) { return a += b; }
    friend QuadValue operator-(QuadValue a, const QuadValue& b) { return a -= b; }
    friend QuadValue operator*(QuadValue a, const QuadValue& b) { return a *= b; }
    friend QuadValue operator/(QuadValue a, const Rational& b) { return a /= b; }
    friend bool operator==(const QuadValue& x, const QuadValue& y) {
        return x.q_ == y.q_ && x.a_ == y.a_ && x.b_ == y.b_;
    }

    QuadValue pow(unsigned k) const;
    double to_double() const;

    /// Readable form, e.g. "2 + 3·5^{-1/2}".
    std::string pretty() const;

private:
    void require_same(const QuadValue& rhs) const;

    std::uint32_t q_;
    Rational a_{0};
    Rational b_{0};
};

}  // namespace ffh
