#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ffh {

/// Raised for malformed user input or violated preconditions (CLI exit 2).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a computation fails a self-check (CLI exit 1).
class ComputationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Residue = std::uint32_t;

/// The prime field F_q with q an odd prime, q = 1 (mod 4), q >= 5.
///
/// Elements are residues in [0, q). The upper bound on q keeps every
/// product of two residues inside 64 bits with room to spare.
class FieldParams {
public:
    static constexpr std::uint32_t kMaxModulus = 1u << 16;

    explicit FieldParams(std::uint32_t q);

    std::uint32_t q() const noexcept { return q_; }

    Residue reduce(std::int64_t x) const noexcept {
        auto r = x % static_cast<std::int64_t>(q_);
        return static_cast<Residue>(r < 0 ? r + q_ : r);
    }
    Residue add(Residue a, Residue b) const noexcept {
        Residue s = a + b;
        return s >= q_ ? s - q_ : s;
    }
    Residue sub(Residue a, Residue b) const noexcept { return a >= b ? a - b : a + q_ - b; }
    Residue neg(Residue a) const noexcept { return a == 0 ? 0 : q_ - a; }
    Residue mul(Residue a, Residue b) const noexcept {
        return static_cast<Residue>((static_cast<std::uint64_t>(a) * b) % q_);
    }
    Residue pow(Residue a, std::uint64_t e) const noexcept;
    /// Multiplicative inverse; a must be nonzero.
    Residue inv(Residue a) const;
    /// Legendre symbol (a/q) in {-1, 0, 1}.
    int legendre(Residue a) const noexcept;

    friend bool operator==(const FieldParams&, const FieldParams&) = default;

private:
    std::uint32_t q_;
};

bool is_prime(std::uint64_t n) noexcept;

}  // namespace ffh
