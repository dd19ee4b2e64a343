#pragma once

#include <functional>

namespace ffh {

inline constexpr double kEulerGamma = 0.577215664901532860606512090082;

/// Ci(x) = gamma + log x + int_0^x (cos t - 1)/t dt, extended evenly to
/// x < 0. Power series for |x| <= 8, continued fraction for E1(ix) beyond
/// (Ci(x) = -Re E1(ix)). Returns -inf at 0.
double cos_integral(double x);

struct Quadrature {
    double value = 0.0;
    double error = 0.0;  // sum of |coarse - refined| over accepted panels
    long evaluations = 0;
};

/// Adaptive Gauss-Legendre on [a, b]: each panel is compared against its two
/// halves and bisected until they agree to max(abs_tol, rel_tol * |estimate|),
/// the absolute target being split between the halves.
/// Throws ComputationError when max_depth is exhausted.
Quadrature integrate(const std::function<double(double)>& f, double a, double b, double rel_tol, double abs_tol,
                     int max_depth = 40);

}  // namespace ffh
