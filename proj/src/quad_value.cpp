#include "ffh/quad_value.hpp"

#include <cmath>

#include "ffh/field.hpp"

namespace ffh {

std::string rational_to_string(const Rational& r) {
    return boost::multiprecision::numerator(r).str() + '/' + boost::multiprecision::denominator(r).str();
}

Rational parse_rational(std::string_view text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string_view::npos) return Rational(BigInt(std::string(text)));
        BigInt num(std::string(text.substr(0, slash)));
        BigInt den(std::string(text.substr(slash + 1)));
        if (den == 0) throw ValidationError("zero denominator in '" + std::string(text) + "'");
        return Rational(num, den);
    } catch (const std::runtime_error&) {
        throw ValidationError("bad rational '" + std::string(text) + "'");
    }
}

double rational_to_double(const Rational& r) {
    // Exact to the last ulp via the multiprecision conversion.
    return r.convert_to<double>();
}

QuadValue QuadValue::scaled_power(std::uint32_t q, const BigInt& c, int n) {
    BigInt den = boost::multiprecision::pow(BigInt(q), static_cast<unsigned>(n / 2));
    Rational v(c, den);
    return n % 2 == 0 ? QuadValue(q, v, 0) : QuadValue(q, 0, v);
}

void QuadValue::require_same(const QuadValue& rhs) const {
    if (q_ != rhs.q_) throw ValidationError("QuadValue arithmetic across different q");
}

QuadValue& QuadValue::operator+=(const QuadValue& rhs) {
    require_same(rhs);
    a_ += rhs.a_;
    b_ += rhs.b_;
    return *this;
}

QuadValue& QuadValue::operator-=(const QuadValue& rhs) {
    require_same(rhs);
    a_ -= rhs.a_;
    b_ -= rhs.b_;
    return *this;
}

QuadValue& QuadValue::operator*=(const QuadValue& rhs) {
    require_same(rhs);
    Rational a = a_ * rhs.a_ + b_ * rhs.b_ / Rational(q_);
    Rational b = a_ * rhs.b_ + b_ * rhs.a_;
    a_ = std::move(a);
    b_ = std::move(b);
    return *this;
}

QuadValue& QuadValue::operator/=(const Rational& rhs) {
    if (rhs == 0) throw ComputationError("QuadValue division by zero");
    a_ /= rhs;
    b_ /= rhs;
    return *this;
}

QuadValue QuadValue::pow(unsigned k) const {
    QuadValue result = integer(q_, 1);
    QuadValue base = *this;
    while (k > 0) {
        if (k & 1u) result *= base;
        k >>= 1;
        if (k > 0) base *= base;
    }
    return result;
}

double QuadValue::to_double() const {
    return rational_to_double(a_) + rational_to_double(b_) / std::sqrt(static_cast<double>(q_));
}

std::string QuadValue::pretty() const {
    auto show = [](const Rational& r) {
        if (boost::multiprecision::denominator(r) == 1) return boost::multiprecision::numerator(r).str();
        return r.str();
    };
    const std::string surd = "·" + std::to_string(q_) + "^{-1/2}";
    if (b_ == 0) return show(a_);
    std::string out;
    if (a_ != 0) {
        out = show(a_);
        out += b_ < 0 ? " - " : " + ";
        out += show(b_ < 0 ? Rational(-b_) : b_);
    } else {
        out = show(b_);
    }
    return out + surd;
}

}  // namespace ffh
