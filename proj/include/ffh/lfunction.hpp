#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <vector>

#include "ffh/characters.hpp"
#include "ffh/quad_value.hpp"

namespace ffh {

/// Coefficients c_0..c_{max_n} of L(u, chi_P) = sum_n c_n u^n, with
/// c_n = sum over monic f of degree n of chi_P(f).
///
/// Computed by folding the Euler product prod_Q (1 - chi_P(Q) u^deg Q)^-1
/// over the tabulated irreducibles; needs table.max_degree() >= max_n.
std::vector<std::int64_t> l_coefficients(const CharTable& table, int max_n);
/// All 2g+1 coefficients, building the tables internally.
std::vector<std::int64_t> l_coefficients(const Conductor& conductor);

/// sum_n c_n q^(-n/2) over the given coefficients.
QuadValue central_from_coefficients(const std::vector<std::int64_t>& coeffs, std::uint32_t q);
/// The two-sum approximate functional equation: sum_{n<=g} + sum_{n<=g-1}.
QuadValue central_from_approx_fe(const std::vector<std::int64_t>& coeffs, std::uint32_t q, int genus);

struct CentralValue {
    QuadValue polynomial_form;
    QuadValue approx_fe_form;
};

/// Both evaluations of L(1/2, chi_P). With all 2g+1 coefficients present
/// the two must be equal exactly, otherwise ComputationError is thrown.
/// With only c_0..c_g (central-only mode) the polynomial form is not
/// available and mirrors the approximate form.
CentralValue central_value(const std::vector<std::int64_t>& coeffs, std::uint32_t q, int genus);

struct ZeroSet {
    /// One angle per conjugate pair, sorted ascending; a root u sits at
    /// q^(-1/2) e^(+-i theta).
    std::vector<double> angles;
    /// max over roots of | |u| sqrt(q) - 1 |.
    double rh_defect = 0.0;
    /// Roots on the real axis (theta = 0 or pi), counted with multiplicity.
    int real_roots = 0;
    /// All 2g roots in the normalized variable z = sqrt(q) u.
    std::vector<std::complex<double>> normalized_roots;
};

/// Roots of sum c_n u^n. Repeated roots are separated exactly first (Yun
/// square-free decomposition over Q); each square-free factor is solved by
/// companion-matrix eigenvalues plus Newton polishing to a relative
/// residual of 1e-10. Throws ComputationError on non-convergence.
ZeroSet l_zeros(const std::vector<std::int64_t>& coeffs, std::uint32_t q);

/// Indices n <= g where c_{2g-n} != q^(g-n) c_n.
std::vector<int> functional_equation_violations(const std::vector<std::int64_t>& coeffs, std::uint32_t q);

/// Per-conductor bundle; one row of the sweep cache.
struct LRecord {
    PolyFq conductor;
    int genus = 0;
    /// c_0..c_{2g} in full mode, c_0..c_g in central-only mode.
    std::vector<std::int64_t> coeffs;
    QuadValue central;
    /// Empty in central-only mode.
    std::vector<double> angles;
    /// NaN in central-only mode.
    double rh_defect = std::numeric_limits<double>::quiet_NaN();

    bool complete() const noexcept { return coeffs.size() == static_cast<std::size_t>(2 * genus + 1); }
    /// Field-wise equality; two NaN defects compare equal.
    friend bool operator==(const LRecord& a, const LRecord& b);
};

enum class LMode { Full, CentralOnly };

/// Builds the record from a character table covering degree 2g (full) or
/// g (central-only).
LRecord compute_lrecord(const CharTable& table, LMode mode);
LRecord compute_lrecord(const Conductor& conductor);

}  // namespace ffh
