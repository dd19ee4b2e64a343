#include "ffh/hybrid.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>

namespace ffh {

namespace {

void require_degree(const CharTable& table, int needed) {
    if (table.max_degree() < needed)
        throw ValidationError("character table covers degree " + std::to_string(table.max_degree()) + ", need " +
                              std::to_string(needed));
}

// Neumaier's compensated sum.
struct CompensatedSum {
    double sum = 0.0, carry = 0.0;
    void add(double v) {
        const double t = sum + v;
        carry += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + carry; }
};

// Per degree d: number of irreducibles with chi = +1 and chi = -1.
struct SignCounts {
    std::vector<std::int64_t> plus, minus;
};

SignCounts sign_counts(const CharTable& table, int max_degree) {
    SignCounts out;
    out.plus.assign(static_cast<std::size_t>(max_degree) + 1, 0);
    out.minus.assign(static_cast<std::size_t>(max_degree) + 1, 0);
    for (int d = 1; d <= max_degree; ++d)
        for (auto idx : table.factors().irreducibles(d)) {
            const int eps = to_int(table.prime_value(idx));
            if (eps > 0) ++out.plus[static_cast<std::size_t>(d)];
            if (eps < 0) ++out.minus[static_cast<std::size_t>(d)];
        }
    return out;
}

}  // namespace

QuadValue p_x_exponent(const CharTable& table, int X) {
    if (X < 0) throw ValidationError("X must be non-negative");
    require_degree(table, X);
    const std::uint32_t q = table.conductor().field().q();
    const auto counts = sign_counts(table, X);
    QuadValue acc(q);
    for (int d = 1; d <= X; ++d) {
        const auto p = counts.plus[static_cast<std::size_t>(d)], m = counts.minus[static_cast<std::size_t>(d)];
        for (int i = 1; i * d <= X; ++i) {
            // sum over Q of chi(Q)^i
            const std::int64_t s = i % 2 == 0 ? p + m : p - m;
            if (s != 0) acc += QuadValue::scaled_power(q, BigInt(s), i * d) / Rational(i);
        }
    }
    return acc;
}

double p_x(const CharTable& table, int X) { return std::exp(p_x_exponent(table, X).to_double()); }

double p_x_at(const CharTable& table, int X, double s) {
    if (X < 0) throw ValidationError("X must be non-negative");
    require_degree(table, X);
    const double q = table.conductor().field().q();
    const auto counts = sign_counts(table, X);
    CompensatedSum acc;
    for (int d = 1; d <= X; ++d) {
        const auto p = counts.plus[static_cast<std::size_t>(d)], m = counts.minus[static_cast<std::size_t>(d)];
        for (int i = 1; i * d <= X; ++i) {
            const std::int64_t c = i % 2 == 0 ? p + m : p - m;
            acc.add(static_cast<double>(c) / i * std::pow(q, -s * i * d));
        }
    }
    return std::exp(acc.value());
}

double p_x(const Conductor& conductor, int X) {
    const int top = std::max(X, 1);
    auto factors = std::make_shared<const FactorTable>(conductor.field(), top);
    return p_x(CharTable(conductor, top, factors), X);
}

// --- alpha_k ----------------------------------------------------------------

Rational rising_binomial(const Rational& k, int j) {
    if (j < 0) throw ValidationError("negative exponent");
    Rational r(1);
    for (int i = 0; i < j; ++i) r *= (k + i) / Rational(i + 1);
    return r;
}

AlphaCoeffs::AlphaCoeffs(Rational k, int X) : k_(std::move(k)), X_(X) {
    if (X < 0) throw ValidationError("X must be non-negative");
}

Rational AlphaCoeffs::prime_power(int degree, int j) const {
    if (degree < 1) throw ValidationError("prime degree must be positive");
    if (j == 0) return Rational(1);
    if (degree > X_) return Rational(0);
    if (2 * degree <= X_) return rising_binomial(k_, j);
    if (j == 1) return k_;
    if (j == 2) return k_ * k_ / 2;
    return Rational(0);
}

Rational AlphaCoeffs::operator()(const PolyFq& monic) const {
    if (!monic.is_monic()) throw ValidationError("alpha_k expects a monic argument, got " + to_human(monic));
    if (monic.degree() == 0) return Rational(1);
    Rational r(1);
    for (const auto& [factor, mult] : factorize(monic).factors) {
        r *= prime_power(factor.degree(), mult);
        if (r == 0) break;
    }
    return r;
}

double p_star(double k, const CharTable& table, int X, int cutoff) {
    if (X < 0 || cutoff < 0) throw ValidationError("X and the degree cutoff must be non-negative");
    const int top = std::min(X, cutoff);
    require_degree(table, top);
    std::vector<double> series(static_cast<std::size_t>(cutoff) + 1, 0.0);
    series[0] = 1.0;
    std::vector<double> factor;
    for (int d = 1; d <= top; ++d) {
        // Local factor sum_j alpha(Q^j) eps^j u^(jd), truncated at the cutoff.
        std::vector<double> plus_factor(static_cast<std::size_t>(cutoff / d) + 1, 0.0);
        plus_factor[0] = 1.0;
        for (int j = 1; j * d <= cutoff; ++j) {
            double a;
            if (2 * d <= X) {
                a = 1.0;
                for (int i = 0; i < j; ++i) a *= (k + i) / (i + 1);
            } else {
                a = j == 1 ? k : (j == 2 ? k * k / 2 : 0.0);
            }
            plus_factor[static_cast<std::size_t>(j)] = a;
        }
        for (auto idx : table.factors().irreducibles(d)) {
            const int eps = to_int(table.prime_value(idx));
            if (eps == 0) continue;
            for (int n = cutoff; n >= d; --n) {
                double add = 0.0;
                for (int j = 1; j * d <= n; ++j) {
                    const double c = plus_factor[static_cast<std::size_t>(j)];
                    add += (eps < 0 && j % 2 ? -c : c) * series[static_cast<std::size_t>(n - j * d)];
                }
                series[static_cast<std::size_t>(n)] += add;
            }
        }
    }
    const double r = 1.0 / std::sqrt(static_cast<double>(table.conductor().field().q()));
    CompensatedSum acc;
    double w = 1.0;
    for (double c : series) {
        acc.add(c * w);
        w *= r;
    }
    return acc.value();
}

double p_star_theta(double k, const CharTable& table, int X, double theta) {
    if (!(theta > 0.0 && theta <= 1.5)) throw ValidationError("theta must lie in (0, 3/2]");
    return p_star(k, table, X, static_cast<int>(std::floor(theta * table.conductor().genus())));
}

double p_star_product(double k, const CharTable& table, int X) {
    if (X < 0) throw ValidationError("X must be non-negative");
    require_degree(table, X);
    const double q = table.conductor().field().q();
    CompensatedSum log_acc;
    for (int d = 1; d <= X; ++d) {
        const double x = std::pow(q, -0.5 * d);
        for (auto idx : table.factors().irreducibles(d)) {
            const int eps = to_int(table.prime_value(idx));
            if (eps == 0) continue;
            if (2 * d <= X)
                log_acc.add(-k * std::log1p(-eps * x));
            else
                log_acc.add(std::log1p(k * eps * x + 0.5 * k * k * x * x));
        }
    }
    return std::exp(log_acc.value());
}

// --- Bump weight and the zero route -------------------------------------------

BumpWeight::BumpWeight(std::uint32_t q, int X, BumpShape shape) : q_(q), X_(X), shape_(shape) {
    if (X < 1) throw ValidationError("the bump weight needs X >= 1");
    if (q < 2) throw ValidationError("bad q for the bump weight");
    a_ = q;
    b_ = std::pow(static_cast<double>(q), 1.0 + 1.0 / X);
    const auto mass = integrate([this](double s) { return shape_value(s); }, -1.0, 1.0, 1e-15, 1e-17);
    norm_ = 0.5 * (b_ - a_) * mass.value;
}

double BumpWeight::shape_value(double s) const {
    if (s <= -1.0 || s >= 1.0) return 0.0;
    const double v = std::exp(-1.0 / (1.0 - s * s));
    return shape_ == BumpShape::Skewed ? v * (1.0 + 0.5 * s) : v;
}

double BumpWeight::u(double x) const { return shape_value(2.0 * (x - a_) / (b_ - a_) - 1.0) / norm_; }

double BumpWeight::density(double t) const {
    const double lq = std::log(static_cast<double>(q_));
    const double x = std::exp(lq * (1.0 + t / X_));
    return u(x) * x * lq / X_;
}

double BumpWeight::mass() const {
    return integrate([this](double x) { return u(x); }, a_, b_, 1e-15, 1e-17).value;
}

Quadrature BumpWeight::ci_transform(double angle, double abs_tol) const {
    return integrate([this, angle](double t) { return density(t) * cos_integral(angle * (X_ + t)); }, 0.0, 1.0,
                     0.0, abs_tol);
}

ZeroRouteResult z_zeros(const std::vector<double>& angles, const BumpWeight& bump, const ZeroRouteOptions& options) {
    if (!(options.tol > 0.0) || options.window < 1) throw ValidationError("bad zero-route options");
    ZeroRouteResult out;
    if (angles.empty()) {
        out.value = 1.0;
        return out;
    }
    for (double a : angles) {
        if (!(a >= 0.0 && a <= std::numbers::pi + 1e-12)) throw ValidationError("zero angles must lie in [0, pi]");
        if (a == 0.0) {
            // L vanishes at the centre.
            out.log_value = -std::numeric_limits<double>::infinity();
            return out;
        }
    }
    const double two_pi = 2.0 * std::numbers::pi;
    const double abs_tol = options.tol / (512.0 * static_cast<double>(angles.size()));
    CompensatedSum acc;
    std::deque<double> recent;
    for (int j = 0; j < options.max_terms; ++j) {
        CompensatedSum term;
        for (double theta : angles) {
            for (double phi : {theta + two_pi * j, two_pi - theta + two_pi * j}) {
                const auto r = bump.ci_transform(phi, abs_tol);
                term.add(r.value);
                out.quadrature_error += 2.0 * r.error;
            }
        }
        acc.add(term.value());
        recent.push_back(std::abs(term.value()));
        if (static_cast<int>(recent.size()) > options.window) recent.pop_front();
        if (j + 1 >= options.window) {
            const double window_max = *std::max_element(recent.begin(), recent.end());
            const double tail = 2.0 * (j + 1) * window_max;
            if (tail < 0.5 * options.tol) {
                out.terms = j + 1;
                out.tail_estimate = tail;
                out.log_value = 2.0 * acc.value();
                out.value = std::exp(out.log_value);
                return out;
            }
        }
    }
    throw ComputationError("zero-route truncation did not meet tol " + std::to_string(options.tol) + " within " +
                           std::to_string(options.max_terms) + " periodic copies");
}

double z_quotient(const QuadValue& central, double p_x) { return central.to_double() / p_x; }

double hybrid_defect(double z_zeros, double z_quotient) {
    if (z_zeros == 0.0 && z_quotient == 0.0) return 0.0;
    return std::abs(z_zeros / z_quotient - 1.0);
}

bool operator==(const HybridRecord& a, const HybridRecord& b) {
    auto same = [](double x, double y) { return (std::isnan(x) && std::isnan(y)) || x == y; };
    return a.conductor == b.conductor && a.X == b.X && a.p_x_exponent == b.p_x_exponent && a.p_x == b.p_x &&
           a.z_quotient == b.z_quotient && same(a.z_zeros, b.z_zeros) && same(a.hybrid_defect, b.hybrid_defect);
}

HybridRecord compute_hybrid(const CharTable& table, const LRecord& record, int X, const BumpWeight* bump,
                            const ZeroRouteOptions& options) {
    if (!(table.conductor().poly() == record.conductor))
        throw ValidationError("character table and L-record disagree on the conductor");
    auto exponent = p_x_exponent(table, X);
    const double px = std::exp(exponent.to_double());
    HybridRecord h{record.conductor, X, std::move(exponent), px, z_quotient(record.central, px)};
    if (bump && !record.angles.empty()) {
        if (bump->X() != X || bump->q() != table.conductor().field().q())
            throw ValidationError("bump weight built for different (q, X)");
        h.z_zeros = z_zeros(record.angles, *bump, options).value;
        h.hybrid_defect = hybrid_defect(h.z_zeros, h.z_quotient);
    }
    return h;
}

}  // namespace ffh
