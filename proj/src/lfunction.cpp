#include "ffh/lfunction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

namespace ffh {

std::vector<std::int64_t> l_coefficients(const CharTable& table, int max_n) {
    if (max_n < 0) throw ValidationError("negative coefficient bound");
    if (table.max_degree() < max_n)
        throw ValidationError("character table covers degree " + std::to_string(table.max_degree()) +
                              ", need " + std::to_string(max_n));
    std::vector<std::int64_t> series(static_cast<std::size_t>(max_n) + 1, 0);
    series[0] = 1;
    for (int d = 1; d <= max_n; ++d) {
        for (auto idx : table.factors().irreducibles(d)) {
            const int eps = to_int(table.prime_value(idx));
            if (eps == 0) continue;
            // Multiply by 1/(1 - eps u^d).
            for (int n = d; n <= max_n; ++n)
                series[static_cast<std::size_t>(n)] += eps * series[static_cast<std::size_t>(n - d)];
        }
    }
    return series;
}

std::vector<std::int64_t> l_coefficients(const Conductor& conductor) {
    const int top = 2 * conductor.genus();
    auto factors = std::make_shared<const FactorTable>(conductor.field(), std::max(top, 1));
    return l_coefficients(CharTable(conductor, top, factors), top);
}

QuadValue central_from_coefficients(const std::vector<std::int64_t>& coeffs, std::uint32_t q) {
    QuadValue acc(q);
    for (std::size_t n = 0; n < coeffs.size(); ++n)
        acc += QuadValue::scaled_power(q, BigInt(coeffs[n]), static_cast<int>(n));
    return acc;
}

QuadValue central_from_approx_fe(const std::vector<std::int64_t>& coeffs, std::uint32_t q, int genus) {
    if (coeffs.size() < static_cast<std::size_t>(genus) + 1)
        throw ValidationError("approximate functional equation needs c_0..c_g");
    QuadValue acc(q);
    for (int n = 0; n <= genus; ++n) {
        const auto term = QuadValue::scaled_power(q, BigInt(coeffs[static_cast<std::size_t>(n)]), n);
        acc += term;
        if (n <= genus - 1) acc += term;
    }
    return acc;
}

CentralValue central_value(const std::vector<std::int64_t>& coeffs, std::uint32_t q, int genus) {
    QuadValue approx = central_from_approx_fe(coeffs, q, genus);
    if (coeffs.size() != static_cast<std::size_t>(2 * genus + 1)) return {approx, approx};
    QuadValue full = central_from_coefficients(coeffs, q);
    if (!(full == approx))
        throw ComputationError("central value mismatch: polynomial form " + full.pretty() +
                               " vs approximate functional equation " + approx.pretty());
    return {std::move(full), std::move(approx)};
}

// --- Zeros -----------------------------------------------------------------

namespace {

using RPoly = std::vector<Rational>;  // lowest degree first, trimmed

void rtrim(RPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

int rdeg(const RPoly& p) { return static_cast<int>(p.size()) - 1; }

RPoly rderiv(const RPoly& p) {
    RPoly d;
    for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<long>(i));
    rtrim(d);
    return d;
}

void rdivmod(const RPoly& a, const RPoly& b, RPoly& quotient, RPoly& remainder) {
    remainder = a;
    quotient.assign(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Rational(0));
    const int db = rdeg(b);
    for (int i = rdeg(remainder); i >= db; --i) {
        if (remainder[static_cast<std::size_t>(i)] == 0) continue;
        Rational c = remainder[static_cast<std::size_t>(i)] / b.back();
        quotient[static_cast<std::size_t>(i - db)] = c;
        for (int j = 0; j <= db; ++j) remainder[static_cast<std::size_t>(i - db + j)] -= c * b[static_cast<std::size_t>(j)];
    }
    remainder.resize(static_cast<std::size_t>(std::max(db, 0)));
    rtrim(remainder);
    rtrim(quotient);
}

RPoly rquot(const RPoly& a, const RPoly& b) {
    RPoly qt, r;
    rdivmod(a, b, qt, r);
    return qt;
}

RPoly rmonic(RPoly p) {
    Rational lead = p.back();
    for (auto& c : p) c /= lead;
    return p;
}

RPoly rgcd(RPoly a, RPoly b) {
    while (!b.empty()) {
        RPoly qt, r;
        rdivmod(a, b, qt, r);
        a = std::move(b);
        b = std::move(r);
    }
    return a.empty() ? a : rmonic(a);
}

RPoly rsub(RPoly a, const RPoly& b) {
    if (b.size() > a.size()) a.resize(b.size(), Rational(0));
    for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    rtrim(a);
    return a;
}

// Yun's square-free decomposition over Q: (factor, multiplicity) pairs.
std::vector<std::pair<RPoly, int>> yun(const RPoly& f) {
    std::vector<std::pair<RPoly, int>> out;
    if (rdeg(f) < 1) return out;
    RPoly fp = rderiv(f);
    RPoly a = rgcd(f, fp);
    RPoly b = rquot(f, a);
    RPoly c = rquot(fp, a);
    RPoly d = rsub(c, rderiv(b));
    int i = 1;
    while (rdeg(b) >= 1) {
        a = rgcd(b, d);
        b = rquot(b, a);
        c = rquot(d, a);
        d = rsub(c, rderiv(b));
        if (rdeg(a) >= 1) out.emplace_back(a, i);
        ++i;
    }
    return out;
}

using cplx = std::complex<double>;

struct Eval {
    cplx value, derivative;
    double scale;  // sum |p_n| |z|^n, for the relative residual
};

Eval horner(const std::vector<double>& p, cplx z) {
    cplx v = 0, dv = 0;
    double s = 0, az = std::abs(z);
    for (auto it = p.rbegin(); it != p.rend(); ++it) {
        dv = dv * z + v;
        v = v * z + *it;
        s = s * az + std::abs(*it);
    }
    return {v, dv, s};
}

std::vector<cplx> solve_squarefree(const RPoly& factor, std::uint32_t q) {
    // Work in z = sqrt(q) u: coefficient of z^n is r_n q^(-n/2).
    const int n = rdeg(factor);
    std::vector<double> p(static_cast<std::size_t>(n) + 1);
    const double rq = std::sqrt(static_cast<double>(q));
    for (int i = 0; i <= n; ++i)
        p[static_cast<std::size_t>(i)] = rational_to_double(factor[static_cast<std::size_t>(i)]) / std::pow(rq, i);
    const double lead = p.back();
    for (auto& c : p) c /= lead;
    std::vector<cplx> roots;
    if (n == 1) {
        roots.emplace_back(-p[0], 0.0);
    } else {
        Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
        for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
        for (int i = 0; i < n; ++i) companion(i, n - 1) = -p[static_cast<std::size_t>(i)];
        Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
        if (solver.info() != Eigen::Success) throw ComputationError("companion eigenvalue solver failed");
        for (int i = 0; i < n; ++i) roots.push_back(solver.eigenvalues()[i]);
    }
    constexpr double kResidualTol = 1e-10;
    for (auto& z : roots) {
        const bool real_root = z.imag() == 0.0;
        auto e = horner(p, z);
        if (e.derivative != cplx(0)) z -= e.value / e.derivative;
        e = horner(p, z);
        for (int extra = 0; extra < 20 && std::abs(e.value) > kResidualTol * e.scale; ++extra) {
            if (e.derivative == cplx(0)) break;
            z -= e.value / e.derivative;
            e = horner(p, z);
        }
        if (std::abs(e.value) > kResidualTol * e.scale)
            throw ComputationError("root polishing did not reach the residual tolerance");
        if (real_root) z.imag(0.0);
    }
    return roots;
}

}  // namespace

ZeroSet l_zeros(const std::vector<std::int64_t>& coeffs, std::uint32_t q) {
    RPoly f;
    for (auto c : coeffs) f.emplace_back(c);
    rtrim(f);
    ZeroSet zs;
    if (rdeg(f) < 1) return zs;
    for (const auto& [factor, mult] : yun(f)) {
        const auto roots = solve_squarefree(factor, q);
        for (int m = 0; m < mult; ++m) zs.normalized_roots.insert(zs.normalized_roots.end(), roots.begin(), roots.end());
    }
    constexpr double kRealTol = 1e-9;
    int upper = 0, lower = 0, at_zero = 0, at_pi = 0;
    for (const auto& z : zs.normalized_roots) {
        zs.rh_defect = std::max(zs.rh_defect, std::abs(std::abs(z) - 1.0));
        if (z.imag() > kRealTol) {
            ++upper;
            zs.angles.push_back(std::arg(z));
        } else if (z.imag() < -kRealTol) {
            ++lower;
        } else if (z.real() > 0) {
            ++at_zero;
        } else {
            ++at_pi;
        }
    }
    zs.real_roots = at_zero + at_pi;
    if (upper != lower || at_zero % 2 || at_pi % 2)
        throw ComputationError("roots do not pair into conjugate angles");
    zs.angles.insert(zs.angles.end(), static_cast<std::size_t>(at_zero / 2), 0.0);
    zs.angles.insert(zs.angles.end(), static_cast<std::size_t>(at_pi / 2), std::numbers::pi);
    std::sort(zs.angles.begin(), zs.angles.end());
    return zs;
}

std::vector<int> functional_equation_violations(const std::vector<std::int64_t>& coeffs, std::uint32_t q) {
    std::vector<int> bad;
    if (coeffs.size() % 2 == 0) throw ValidationError("functional equation check needs 2g+1 coefficients");
    const int g = static_cast<int>(coeffs.size() - 1) / 2;
    for (int n = 0; n <= g; ++n) {
        BigInt lhs = coeffs[static_cast<std::size_t>(2 * g - n)];
        BigInt rhs = BigInt(coeffs[static_cast<std::size_t>(n)]) * boost::multiprecision::pow(BigInt(q), static_cast<unsigned>(g - n));
        if (lhs != rhs) bad.push_back(n);
    }
    return bad;
}

bool operator==(const LRecord& a, const LRecord& b) {
    const bool defects = (std::isnan(a.rh_defect) && std::isnan(b.rh_defect)) || a.rh_defect == b.rh_defect;
    return a.conductor == b.conductor && a.genus == b.genus && a.coeffs == b.coeffs && a.central == b.central &&
           a.angles == b.angles && defects;
}

LRecord compute_lrecord(const CharTable& table, LMode mode) {
    const auto& cond = table.conductor();
    const int g = cond.genus();
    const std::uint32_t q = cond.field().q();
    const int top = mode == LMode::Full ? 2 * g : g;
    auto coeffs = l_coefficients(table, top);
    auto cv = central_value(coeffs, q, g);
    LRecord rec{cond.poly(), g, std::move(coeffs), std::move(cv.approx_fe_form), {},
                std::numeric_limits<double>::quiet_NaN()};
    if (mode == LMode::Full) {
        auto zs = l_zeros(rec.coeffs, q);
        if (zs.angles.size() != static_cast<std::size_t>(g))
            throw ComputationError("expected " + std::to_string(g) + " zero angles for " + to_human(cond.poly()));
        rec.angles = std::move(zs.angles);
        rec.rh_defect = zs.rh_defect;
    }
    return rec;
}

LRecord compute_lrecord(const Conductor& conductor) {
    const int top = std::max(2 * conductor.genus(), 1);
    auto factors = std::make_shared<const FactorTable>(conductor.field(), top);
    return compute_lrecord(CharTable(conductor, 2 * conductor.genus(), factors), LMode::Full);
}

}  // namespace ffh
