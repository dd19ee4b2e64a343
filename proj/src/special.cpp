#include "ffh/special.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <limits>

#include "ffh/field.hpp"

namespace ffh {

double cos_integral(double x) {
    x = std::abs(x);
    if (x == 0.0) return -std::numeric_limits<double>::infinity();
    if (x <= 8.0) {
        // sum_{k>=1} (-1)^k x^{2k} / (2k (2k)!)
        const double x2 = x * x;
        double term = 1.0, sum = 0.0;
        for (int k = 1; k < 200; ++k) {
            term *= -x2 / ((2.0 * k - 1.0) * (2.0 * k));
            const double add = term / (2.0 * k);
            sum += add;
            if (std::abs(add) < 1e-17 * std::max(1.0, std::abs(sum))) break;
        }
        return kEulerGamma + std::log(x) + sum;
    }
    // Modified Lentz on E1(ix) = e^{-ix} / (1 + ix - 1/(3 + ix - 4/(5 + ix - ...))).
    using C = std::complex<double>;
    constexpr double tiny = 1e-300;
    C b(1.0, x);
    C c = 1.0 / tiny;
    C d = 1.0 / b;
    C h = d;
    for (int i = 2; i < 100000; ++i) {
        const double a = -static_cast<double>(i - 1) * (i - 1);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        const C del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) return -(h * C(std::cos(x), -std::sin(x))).real();
    }
    throw ComputationError("cosine integral continued fraction did not converge");
}

namespace {

constexpr int kOrder = 15;

struct Rule {
    std::array<double, kOrder> nodes{}, weights{};
};

const Rule& rule() {
    static const Rule r = [] {
        Rule out;
        for (int i = 0; i < kOrder; ++i) {
            double z = std::cos(M_PI * (i + 0.75) / (kOrder + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = 0.0;
                for (int j = 0; j < kOrder; ++j) {
                    const double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
                }
                dp = kOrder * (z * p0 - p1) / (z * z - 1.0);
                const double dz = p0 / dp;
                z -= dz;
                if (std::abs(dz) < 1e-16) break;
            }
            out.nodes[static_cast<std::size_t>(i)] = z;
            out.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * dp * dp);
        }
        return out;
    }();
    return r;
}

double panel(const std::function<double(double)>& f, double a, double b, long& evals) {
    const auto& r = rule();
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < kOrder; ++i)
        s += r.weights[static_cast<std::size_t>(i)] * f(mid + half * r.nodes[static_cast<std::size_t>(i)]);
    evals += kOrder;
    return s * half;
}

void refine(const std::function<double(double)>& f, double a, double b, double whole, double target, int depth,
            Quadrature& out) {
    const double m = 0.5 * (a + b);
    const double left = panel(f, a, m, out.evaluations);
    const double right = panel(f, m, b, out.evaluations);
    const double diff = std::abs(left + right - whole);
    if (diff <= target || (b - a) < 1e-15 * std::max(1.0, std::abs(a))) {
        out.value += left + right;
        out.error += diff;
        return;
    }
    if (depth <= 0) throw ComputationError("adaptive quadrature exceeded its depth limit");
    refine(f, a, m, left, 0.5 * target, depth - 1, out);
    refine(f, m, b, right, 0.5 * target, depth - 1, out);
}

}  // namespace

Quadrature integrate(const std::function<double(double)>& f, double a, double b, double rel_tol, double abs_tol,
                     int max_depth) {
    if (!(a <= b)) throw ValidationError("integration interval must satisfy a <= b");
    Quadrature out;
    if (a == b) return out;
    const double whole = panel(f, a, b, out.evaluations);
    const double target = std::max(abs_tol, rel_tol * std::abs(whole));
    refine(f, a, b, whole, target, max_depth, out);
    return out;
}

}  // namespace ffh
