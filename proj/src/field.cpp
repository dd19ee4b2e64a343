#include "ffh/field.hpp"

namespace ffh {

bool is_prime(std::uint64_t n) noexcept {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

FieldParams::FieldParams(std::uint32_t q) : q_(q) {
    if (q < 5 || q >= kMaxModulus || !is_prime(q) || q % 4 != 1)
        throw ValidationError("field size q=" + std::to_string(q) +
                              " must be a prime with q = 1 (mod 4), 5 <= q < 65536");
}

Residue FieldParams::pow(Residue a, std::uint64_t e) const noexcept {
    Residue result = 1 % q_;
    Residue base = a % q_;
    while (e > 0) {
        if (e & 1u) result = mul(result, base);
        base = mul(base, base);
        e >>= 1;
    }
    return result;
}

Residue FieldParams::inv(Residue a) const {
    if (a % q_ == 0) throw ComputationError("inverse of zero in F_q");
    return pow(a, q_ - 2);
}

int FieldParams::legendre(Residue a) const noexcept {
    a %= q_;
    if (a == 0) return 0;
    return pow(a, (q_ - 1) / 2) == 1 ? 1 : -1;
}

}  // namespace ffh
