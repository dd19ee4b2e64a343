#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "ffh/poly.hpp"

namespace ffh {

// ---------------------------------------------------------------------------
// Indexing of monic polynomials
// ---------------------------------------------------------------------------

/// Dense index over all monic polynomials of degree <= max_degree.
///
/// Index 0 is the polynomial 1; monic polynomials of degree n occupy the
/// block starting at (q^n - 1)/(q - 1), ordered by the base-q number whose
/// digits are the non-leading coefficients (constant term least
/// significant). This is a storage layout only; the public enumeration
/// order is lexicographic, see `enumerate_monic`.
class MonicIndexer {
public:
    MonicIndexer(FieldParams field, int max_degree);

    const FieldParams& field() const noexcept { return field_; }
    int max_degree() const noexcept { return max_degree_; }
    std::size_t size() const noexcept { return offsets_.back(); }
    std::size_t offset(int degree) const noexcept { return offsets_[static_cast<std::size_t>(degree)]; }
    std::size_t count(int degree) const noexcept { return offset(degree + 1) - offset(degree); }

    std::size_t index_of(const PolyFq& monic) const;
    PolyFq poly_at(std::size_t index) const;
    int degree_at(std::size_t index) const noexcept;

private:
    FieldParams field_;
    int max_degree_;
    std::vector<std::size_t> offsets_;  // max_degree + 2 entries
};

/// q^n, throwing when it does not fit in 64 bits.
std::uint64_t checked_power(std::uint64_t q, int n);

// ---------------------------------------------------------------------------
// Irreducibility, enumeration and counting
// ---------------------------------------------------------------------------

/// Rabin's test: f of degree n is irreducible iff T^(q^n) = T (mod f) and
/// gcd(T^(q^(n/p)) - T, f) = 1 for every prime p | n.
bool is_irreducible(const PolyFq& f);

/// Calls `fn` on every monic polynomial of degree n in lexicographic order
/// of the coefficient vector (c_0, c_1, ..., c_{n-1}).
void for_each_monic(FieldParams field, int n, const std::function<void(const PolyFq&)>& fn);
std::vector<PolyFq> enumerate_monic(FieldParams field, int n);

/// All monic irreducibles of degree n, in the same lexicographic order.
std::vector<PolyFq> enumerate_irreducible(FieldParams field, int n);

/// Exact number of monic irreducibles of degree n, (1/n) sum_{d|n} mu(d) q^(n/d).
std::uint64_t count_irreducible(std::uint64_t q, int n);

// ---------------------------------------------------------------------------
// Factorization
// ---------------------------------------------------------------------------

struct Factorization {
    Residue unit = 1;
    /// Distinct monic irreducible factors with multiplicities, sorted by
    /// the PolyFq total order.
    std::vector<std::pair<PolyFq, int>> factors;

    PolyFq product(FieldParams field) const;
};

/// Complete factorization of a nonzero, nonconstant polynomial
/// (square-free split, distinct-degree split, deterministic equal-degree
/// splitting).
Factorization factorize(const PolyFq& f);

/// Smallest-prime-factor table over all monic polynomials of degree <= D.
///
/// Built once per (q, D) and read-only afterwards. For each monic f the
/// table stores the index of an irreducible factor of least degree and the
/// index of the cofactor, so factorization is a walk down the chain.
class FactorTable {
public:
    FactorTable(FieldParams field, int max_degree);

    const MonicIndexer& indexer() const noexcept { return indexer_; }
    const FieldParams& field() const noexcept { return indexer_.field(); }
    int max_degree() const noexcept { return indexer_.max_degree(); }

    bool is_irreducible_at(std::size_t index) const noexcept { return index != 0 && spf_[index] == index; }
    std::uint32_t smallest_factor(std::size_t index) const noexcept { return spf_[index]; }
    std::uint32_t cofactor(std::size_t index) const noexcept { return cofactor_[index]; }
    /// Indices of the monic irreducibles of exactly this degree, in index order.
    const std::vector<std::uint32_t>& irreducibles(int degree) const {
        return irreducibles_[static_cast<std::size_t>(degree)];
    }

    /// Factorization of a monic f with deg f <= max_degree.
    Factorization factorize(const PolyFq& monic) const;

private:
    MonicIndexer indexer_;
    std::vector<std::uint32_t> spf_;
    std::vector<std::uint32_t> cofactor_;
    std::vector<std::vector<std::uint32_t>> irreducibles_;
};

// ---------------------------------------------------------------------------
// Arithmetic functions
// ---------------------------------------------------------------------------

/// deg P if f = P^i for a monic irreducible P, else 0 (and 0 for f = 1).
int von_mangoldt(const PolyFq& monic);

struct SquarefreeSplit {
    PolyFq squarefree;  // l1
    PolyFq square_root;  // l2, with l = l1 * l2^2
};

SquarefreeSplit squarefree_split(const PolyFq& monic);

/// True iff f is (c times) the square of a polynomial.
bool is_square(const PolyFq& monic);

}  // namespace ffh
