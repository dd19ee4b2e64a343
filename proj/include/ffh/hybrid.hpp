#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "ffh/characters.hpp"
#include "ffh/lfunction.hpp"
#include "ffh/quad_value.hpp"
#include "ffh/special.hpp"

namespace ffh {

// ---------------------------------------------------------------------------
// Truncated Euler product
// ---------------------------------------------------------------------------

/// log P_X(1/2, chi_P) exactly:
///   sum over irreducible Q and i >= 1 with i deg Q <= X of chi(Q)^i / (i q^(i deg Q / 2)).
/// Needs table.max_degree() >= X.
QuadValue p_x_exponent(const CharTable& table, int X);
double p_x(const CharTable& table, int X);
/// P_X at a real point s, using compensated summation.
double p_x_at(const CharTable& table, int X, double s);
/// Convenience form that builds its own tables.
double p_x(const Conductor& conductor, int X);

// ---------------------------------------------------------------------------
// The coefficients alpha_k
// ---------------------------------------------------------------------------

/// alpha_k on X-smooth monic polynomials, defined through
///   prod_{deg Q <= X/2} (1 - chi(Q) u^deg Q)^(-k)
///   * prod_{X/2 < deg Q <= X} (1 + k chi(Q) u^deg Q + k^2/2 chi(Q)^2 u^(2 deg Q)).
class AlphaCoeffs {
public:
    AlphaCoeffs(Rational k, int X);

    const Rational& k() const noexcept { return k_; }
    int X() const noexcept { return X_; }

    /// alpha_k(Q^j) for an irreducible Q of the given degree.
    Rational prime_power(int degree, int j) const;
    /// alpha_k(f) by multiplicativity over the factorization of monic f.
    Rational operator()(const PolyFq& monic) const;

private:
    Rational k_;
    int X_;
};

/// Generalized binomial (k)_j / j! = binom(k + j - 1, j); d_k(Q^j) for integer k >= 1.
Rational rising_binomial(const Rational& k, int j);

/// P*_{k,X} at s = 1/2: sum of alpha_k(f) chi_P(f) |f|^(-1/2) over X-smooth f
/// with deg f <= cutoff. Needs table.max_degree() >= min(X, cutoff).
double p_star(double k, const CharTable& table, int X, int cutoff);
/// The same sum with the paper's length parameter: cutoff floor(theta * g),
/// theta in (0, 3/2].
double p_star_theta(double k, const CharTable& table, int X, double theta = 1.0);
/// The untruncated generating product for the same coefficients at s = 1/2.
double p_star_product(double k, const CharTable& table, int X);

// ---------------------------------------------------------------------------
// Z_X by the quotient and by the zeros
// ---------------------------------------------------------------------------

enum class BumpShape {
    Standard,  // exp(-1/(1-s^2))
    Skewed,    // exp(-1/(1-s^2)) * (1 + s/2)
};

/// Mass-one smooth weight u(x) supported on [q, q^(1+1/X)].
///
/// The integrals needed for Z_X are taken in t in [0, 1] with
/// x = q^(1+t/X), where the pulled back density is w(t) = u(x) x log(q) / X.
class BumpWeight {
public:
    BumpWeight(std::uint32_t q, int X, BumpShape shape = BumpShape::Standard);

    std::uint32_t q() const noexcept { return q_; }
    int X() const noexcept { return X_; }
    BumpShape shape() const noexcept { return shape_; }
    double lower() const noexcept { return a_; }
    double upper() const noexcept { return b_; }
    double normalization() const noexcept { return norm_; }

    double u(double x) const;
    double density(double t) const;
    /// int u(x) dx over the support, computed independently of the normalization.
    double mass() const;

    /// int_0^1 w(t) Ci(angle (X + t)) dt, i.e. int u(x) Ci(gamma X log x) dx
    /// for the ordinate gamma = angle / log q.
    Quadrature ci_transform(double angle, double abs_tol) const;

private:
    double shape_value(double s) const;

    std::uint32_t q_;
    int X_;
    BumpShape shape_;
    double a_, b_, norm_;
};

struct ZeroRouteOptions {
    /// Target relative accuracy of Z_X: bounds the estimated truncation
    /// tail and the accumulated quadrature error.
    double tol = 1e-6;
    int window = 8;
    int max_terms = 20000;
};

struct ZeroRouteResult {
    double value = 0.0;
    double log_value = 0.0;
    int terms = 0;              // periodic copies j = 0..terms-1 summed
    double tail_estimate = 0.0; // estimated relative effect of the dropped copies
    double quadrature_error = 0.0;
};

/// Z_X(1/2) from the zero angles:
///   exp(2 sum_n sum_{j>=0} [C(theta_n + 2 pi j) + C(2 pi - theta_n + 2 pi j)]),
/// C(phi) = int u(x) Ci((phi / log q) X log x) dx. A zero at theta = 0 gives 0.
/// The j-sum stops once J times the largest |term| over the trailing window
/// drops below tol/2; ComputationError if that never happens within max_terms.
ZeroRouteResult z_zeros(const std::vector<double>& angles, const BumpWeight& bump,
                        const ZeroRouteOptions& options = {});

double z_quotient(const QuadValue& central, double p_x);

struct HybridRecord {
    PolyFq conductor;
    int X = 0;
    QuadValue p_x_exponent;
    double p_x = 0.0;
    double z_quotient = 0.0;
    double z_zeros = std::numeric_limits<double>::quiet_NaN();
    double hybrid_defect = std::numeric_limits<double>::quiet_NaN();

    bool has_zero_route() const noexcept { return z_zeros == z_zeros; }
    friend bool operator==(const HybridRecord& a, const HybridRecord& b);
};

/// |z_zeros / z_quotient - 1|, with 0 when both vanish.
double hybrid_defect(double z_zeros, double z_quotient);

/// Builds the record; the zero route is evaluated only when `bump` is given
/// and the L-record carries angles.
HybridRecord compute_hybrid(const CharTable& table, const LRecord& record, int X, const BumpWeight* bump = nullptr,
                            const ZeroRouteOptions& options = {});

}  // namespace ffh
