#include "ffh/predictions.hpp"

#include <cmath>

#include "ffh/field.hpp"
#include "ffh/hybrid.hpp"
#include "ffh/poly_algebra.hpp"
#include "ffh/special.hpp"

namespace ffh {

namespace {

void require_q(std::uint32_t q) { FieldParams check(q); }

bool is_integer(double k) { return std::floor(k) == k && std::abs(k) < 1e6; }

// Generalized binom(k + j - 1, j) in floating point.
double rising(double k, int j) {
    double r = 1.0;
    for (int i = 0; i < j; ++i) r *= (k + i) / (i + 1);
    return r;
}

// log of the degree-n factor of A_k in the d_k series form.
double log_factor_series(double k, double x) {
    double s = 0.0, xp = 1.0;
    for (int j = 1; j < 10000; ++j) {
        xp *= x;
        const double t = rising(k, 2 * j) * xp;
        s += t;
        if (t == 0.0 && k <= 0) break;  // terminating series for negative integer k
        if (std::abs(t) < 1e-18 * std::max(1.0, std::abs(s)) && j > 2) break;
    }
    return 0.5 * k * (k + 1) * std::log1p(-x) + std::log1p(s);
}

// Same factor from the half-sum form. With y^2 = x:
// [(1-y)^-k + (1+y)^-k]/2 = (1-x)^(-k/2) cosh(k atanh y).
double log_factor_halfsum(double k, double x) {
    const double y = std::sqrt(x);
    const double sh = std::sinh(0.5 * k * std::atanh(y));
    return 0.5 * k * (k + 1) * std::log1p(-x) - 0.5 * k * std::log1p(-x) + std::log1p(2.0 * sh * sh);
}

}  // namespace

Rational zeta_A_exact(std::uint32_t q, int s) {
    require_q(q);
    if (s <= 1) throw ValidationError("zeta_A needs s > 1 (pole at s = 1)");
    const BigInt qp = boost::multiprecision::pow(BigInt(q), static_cast<unsigned>(s - 1));
    return Rational(qp, qp - 1);
}

double zeta_A(std::uint32_t q, double s) {
    require_q(q);
    if (!(s > 1.0)) throw ValidationError("zeta_A needs s > 1 (pole at s = 1)");
    return -1.0 / std::expm1((1.0 - s) * std::log(static_cast<double>(q)));
}

double mertens_product(std::uint32_t q, int X) {
    require_q(q);
    if (X < 1) throw ValidationError("mertens_product needs X >= 1");
    double log_p = 0.0;
    for (int n = 1; n <= X; ++n)
        log_p -= static_cast<double>(count_irreducible(q, n)) * std::log1p(-std::pow(static_cast<double>(q), -n));
    return std::exp(log_p);
}

BigInt d_k_primepower(int k, int j) {
    if (k < 1 || j < 0) throw ValidationError("d_k needs k >= 1 and j >= 0");
    BigInt r = 1;
    for (int i = 1; i <= k - 1; ++i) r = r * (j + i) / i;
    return r;
}

PredictionReport a_k(double k, std::uint32_t q, int D) {
    require_q(q);
    if (D < 1) throw ValidationError("A_k truncation degree must be positive");
    const bool integral = is_integer(k);
    double log_series = 0.0, log_half = 0.0;
    auto degree_terms = [&](int n, double& series, double& half) {
        const double x = std::pow(static_cast<double>(q), -n);
        const double count = static_cast<double>(count_irreducible(q, n));
        half = count * log_factor_halfsum(k, x);
        series = integral ? count * log_factor_series(k, x) : half;
    };
    for (int n = 1; n <= D; ++n) {
        double s, h;
        degree_terms(n, s, h);
        log_series += s;
        log_half += h;
    }
    double next_series, next_half;
    degree_terms(D + 1, next_series, next_half);
    // Degree-n contributions shrink like q^-n: a doubled geometric tail from the first dropped degree.
    const double log_tail = 2.0 * std::abs(next_half) * q / (q - 1.0);
    PredictionReport r;
    r.kind = "A_k";
    r.q = q;
    r.k = k;
    r.value = std::exp(log_series);
    r.cross_check = std::exp(log_half);
    r.tail_bound = r.value * std::expm1(log_tail);
    if (std::abs(r.value - r.cross_check) > 1e-12 * std::abs(r.value))
        throw ComputationError("A_k forms disagree: " + std::to_string(r.value) + " vs " + std::to_string(r.cross_check));
    return r;
}

BigInt factorial(int n) {
    if (n < 0) throw ValidationError("factorial of a negative integer");
    BigInt r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

BigInt barnes_g(int n) {
    if (n < 1) throw ValidationError("barnes_g is implemented for positive integers only");
    BigInt g = 1, fact = 1;  // G(m), (m-1)!
    for (int m = 1; m < n; ++m) {
        g *= fact;  // G(m+1) = Gamma(m) G(m)
        fact *= m;
    }
    return g;
}

double rmt_factor(int k) {
    if (k < 0) throw ValidationError("rmt_factor needs k >= 0");
    const BigInt gk = barnes_g(k + 1);
    const Rational ratio(gk * gk * factorial(k), barnes_g(2 * k + 1) * factorial(2 * k));
    return std::sqrt(rational_to_double(ratio));
}

PredictionReport predicted_moment(int k, std::uint32_t q, int g, int D) {
    if (k < 0 || g < 1) throw ValidationError("predicted_moment needs k >= 0 and g >= 1");
    auto a = a_k(k, q, D);
    const double e = 0.5 * k * (k + 1);
    PredictionReport r{"moment", q, g, static_cast<double>(k), 0, 0.0, 0.0, 0.0};
    const double scale = std::pow(2.0, -0.5 * k) * rmt_factor(k) * std::pow(2.0 * g, e);
    r.value = scale * a.value;
    r.tail_bound = scale * a.tail_bound;
    return r;
}

PredictionReport predicted_euler_moment(double k, std::uint32_t q, int X, int D) {
    if (X < 1) throw ValidationError("predicted_euler_moment needs X >= 1");
    auto a = a_k(k, q, D);
    const double e = 0.5 * k * (k + 1);
    PredictionReport r{"euler_moment", q, 0, k, X, 0.0, 0.0, 0.0};
    const double scale = std::pow(2.0, -0.5 * k) * std::pow(std::exp(kEulerGamma) * X, e);
    r.value = scale * a.value;
    r.tail_bound = std::pow(static_cast<double>(q), -0.5 * X) * std::pow(static_cast<double>(X), e - 1.0) +
                   scale * a.tail_bound;
    return r;
}

PredictionReport limiting_euler_moment(double k, std::uint32_t q, int X) {
    require_q(q);
    if (X < 0) throw ValidationError("X must be non-negative");
    double log_v = 0.0;
    for (int d = 1; d <= X; ++d) {
        const double x = std::pow(static_cast<double>(q), -0.5 * d);
        double plus = 0.0, minus = 0.0;  // log P_X contributions of one prime with chi = +1 / -1
        double xp = 1.0;
        for (int i = 1; i * d <= X; ++i) {
            xp *= x;
            plus += xp / i;
            minus += (i % 2 ? -xp : xp) / i;
        }
        const double mean = 0.5 * (std::exp(k * plus) + std::exp(k * minus));
        log_v += static_cast<double>(count_irreducible(q, d)) * std::log(mean);
    }
    return {"euler_moment_limit", q, 0, k, X, std::exp(log_v), 0.0, 0.0};
}

PredictionReport predicted_twisted(const PolyFq& l, int g) {
    if (!l.is_monic()) throw ValidationError("twist must be monic: " + to_human(l));
    if (l.degree() > g)
        throw ValidationError("twist degree " + std::to_string(l.degree()) + " exceeds g = " + std::to_string(g));
    const auto split = squarefree_split(l);
    const int d1 = split.squarefree.degree();
    const std::uint32_t q = l.field().q();
    PredictionReport r{"twisted", q, g, 1.0, 0, 0.0, 0.0, 0.0};
    r.value = (g - d1 + 1) * std::pow(static_cast<double>(q), -0.5 * d1);
    r.tail_bound = std::pow(static_cast<double>(q), -0.5 * g) * (l.degree() + g);
    return r;
}

PredictionReport predicted_zx_moment(int k, std::uint32_t q, int g, int X) {
    require_q(q);
    if (k < 0 || g < 1 || X < 1) throw ValidationError("predicted_zx_moment needs k >= 0, g >= 1, X >= 1");
    const double base = 2.0 * g / (std::exp(kEulerGamma) * X);
    return {"zx_moment", q, g, static_cast<double>(k), X, rmt_factor(k) * std::pow(base, 0.5 * k * (k + 1)), 0.0, 0.0};
}

PredictionReport predicted_L_over_P(std::uint32_t q, int g, int X) {
    require_q(q);
    if (g < 1 || X < 1) throw ValidationError("predicted_L_over_P needs g >= 1 and X >= 1");
    const double v = 2.0 * g / (std::exp(kEulerGamma) * X);
    return {"L_over_P", q, g, 1.0, X, v, static_cast<double>(g) / (static_cast<double>(X) * X), 0.0};
}

}  // namespace ffh
