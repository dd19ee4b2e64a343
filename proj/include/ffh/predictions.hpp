#pragma once

#include <cstdint>
#include <string>

#include "ffh/poly.hpp"
#include "ffh/quad_value.hpp"

namespace ffh {

/// A closed-form prediction. `tail_bound` is 0 for exact values; for
/// truncated Euler products it bounds the dropped factors, for asymptotic
/// statements it is the stated error envelope with unit constant.
struct PredictionReport {
    std::string kind;
    std::uint32_t q = 0;
    int g = 0;
    double k = 0.0;
    int X = 0;
    double value = 0.0;
    double tail_bound = 0.0;
    /// Independent evaluation where one exists (e.g. the second A_k form).
    double cross_check = 0.0;
};

/// zeta_A(s) = 1/(1 - q^(1-s)); exact for integer s >= 2.
Rational zeta_A_exact(std::uint32_t q, int s);
double zeta_A(std::uint32_t q, double s);

/// prod over irreducibles of degree <= X of (1 - 1/|Q|)^(-1).
double mertens_product(std::uint32_t q, int X);

/// d_k(Q^j) = binom(j + k - 1, k - 1) for k >= 1.
BigInt d_k_primepower(int k, int j);

/// The arithmetic factor A_k over irreducibles of degree <= D, evaluated
/// both as the d_k series product and as the half-sum product
/// (1 - x)^(k(k+1)/2) [(1 - y)^-k + (1 + y)^-k] / 2 with y = |Q|^(-1/2).
/// Integer k uses both and throws ComputationError if they differ by more
/// than 1e-12 relative; non-integer k uses the half-sum form only.
PredictionReport a_k(double k, std::uint32_t q, int D = 12);

BigInt barnes_g(int n);
BigInt factorial(int n);
/// G(k+1) sqrt(Gamma(k+1)) / sqrt(G(2k+1) Gamma(2k+1)) for integer k >= 0.
double rmt_factor(int k);

/// 2^(-k/2) A_k rmt_factor(k) (2g)^(k(k+1)/2).
PredictionReport predicted_moment(int k, std::uint32_t q, int g, int D = 12);
/// 2^(-k/2) A_k (e^gamma X)^(k(k+1)/2), tail_bound = q^(-X/2) X^(k(k+1)/2 - 1).
PredictionReport predicted_euler_moment(double k, std::uint32_t q, int X, int D = 12);
/// The g -> infinity average of P_X^k for fixed X when chi(Q) = +-1 are
/// independent and equally likely: prod_Q [E_+ + E_-] / 2 over deg Q <= X.
PredictionReport limiting_euler_moment(double k, std::uint32_t q, int X);
/// |l_1|^(-1/2) (g - deg l_1 + 1) with l = l_1 l_2^2, l_1 square-free.
PredictionReport predicted_twisted(const PolyFq& l, int g);
/// rmt_factor(k) (2g / (e^gamma X))^(k(k+1)/2).
PredictionReport predicted_zx_moment(int k, std::uint32_t q, int g, int X);
/// 2g / (e^gamma X).
PredictionReport predicted_L_over_P(std::uint32_t q, int g, int X);

}  // namespace ffh
