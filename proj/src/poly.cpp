#include "ffh/poly.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace ffh {

PolyFq::PolyFq(FieldParams field, std::span<const std::int64_t> low_first) : field_(field) {
    coeffs_.reserve(low_first.size());
    for (auto c : low_first) coeffs_.push_back(field_.reduce(c));
    trim();
}

PolyFq PolyFq::constant(FieldParams field, Residue c) {
    PolyFq p(field);
    c %= field.q();
    if (c != 0) p.coeffs_.push_back(c);
    return p;
}

PolyFq PolyFq::monomial(FieldParams field, int degree, Residue c) {
    PolyFq p(field);
    c %= field.q();
    if (c == 0) return p;
    p.coeffs_.assign(static_cast<std::size_t>(degree) + 1, 0);
    p.coeffs_.back() = c;
    return p;
}

PolyFq PolyFq::from_residues(FieldParams field, Storage coeffs) {
    PolyFq p(field);
    p.coeffs_ = std::move(coeffs);
    for (auto& c : p.coeffs_) c %= field.q();
    p.trim();
    return p;
}

void PolyFq::require_same_field(const PolyFq& other) const {
    if (!(field_ == other.field_))
        throw ValidationError("polynomials over different fields (q=" + std::to_string(q()) +
                              " vs q=" + std::to_string(other.q()) + ")");
}

PolyFq PolyFq::monic() const {
    if (is_zero()) throw ValidationError("the zero polynomial has no monic associate");
    return scaled(field_.inv(leading()));
}

PolyFq PolyFq::scaled(Residue c) const {
    PolyFq r(*this);
    for (auto& x : r.coeffs_) x = field_.mul(x, c);
    r.trim();
    return r;
}

PolyFq PolyFq::derivative() const {
    PolyFq r(field_);
    if (coeffs_.size() <= 1) return r;
    r.coeffs_.resize(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i)
        r.coeffs_[i - 1] = field_.mul(coeffs_[i], static_cast<Residue>(i % field_.q()));
    r.trim();
    return r;
}

Residue PolyFq::evaluate(Residue x) const noexcept {
    Residue acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
        acc = field_.add(field_.mul(acc, x), *it);
    return acc;
}

PolyFq& PolyFq::operator+=(const PolyFq& rhs) {
    require_same_field(rhs);
    if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), 0);
    for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i)
        coeffs_[i] = field_.add(coeffs_[i], rhs.coeffs_[i]);
    trim();
    return *this;
}

PolyFq& PolyFq::operator-=(const PolyFq& rhs) {
    require_same_field(rhs);
    if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), 0);
    for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i)
        coeffs_[i] = field_.sub(coeffs_[i], rhs.coeffs_[i]);
    trim();
    return *this;
}

PolyFq operator*(const PolyFq& lhs, const PolyFq& rhs) {
    lhs.require_same_field(rhs);
    PolyFq r(lhs.field_);
    if (lhs.is_zero() || rhs.is_zero()) return r;
    const std::uint64_t q = lhs.q();
    const std::size_t n = lhs.coeffs_.size() + rhs.coeffs_.size() - 1;
    boost::container::small_vector<std::uint64_t, 48> acc(n, 0);
    for (std::size_t i = 0; i < lhs.coeffs_.size(); ++i) {
        if (lhs.coeffs_[i] == 0) continue;
        for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j)
            acc[i + j] += static_cast<std::uint64_t>(lhs.coeffs_[i]) * rhs.coeffs_[j];
    }
    r.coeffs_.resize(n);
    for (std::size_t k = 0; k < n; ++k) r.coeffs_[k] = static_cast<Residue>(acc[k] % q);
    r.trim();
    return r;
}

std::strong_ordering operator<=>(const PolyFq& a, const PolyFq& b) noexcept {
    if (auto c = a.q() <=> b.q(); c != 0) return c;
    if (auto c = a.degree() <=> b.degree(); c != 0) return c;
    for (int i = a.degree(); i >= 0; --i)
        if (auto c = a.coeffs_[i] <=> b.coeffs_[i]; c != 0) return c;
    return std::strong_ordering::equal;
}

DivMod divmod(const PolyFq& a, const PolyFq& b) {
    if (!(a.field() == b.field())) throw ValidationError("polynomials over different fields");
    if (b.is_zero()) throw ValidationError("division by the zero polynomial");
    const auto& F = a.field();
    if (a.degree() < b.degree()) return {PolyFq(F), a};
    const int db = b.degree();
    const Residue inv_lead = F.inv(b.leading());
    PolyFq::Storage r(a.coeffs().begin(), a.coeffs().end());
    PolyFq::Storage qc(static_cast<std::size_t>(a.degree() - db) + 1, 0);
    auto bc = b.coeffs();
    for (int i = a.degree(); i >= db; --i) {
        Residue c = r[i];
        if (c == 0) continue;
        c = F.mul(c, inv_lead);
        qc[i - db] = c;
        for (int j = 0; j <= db; ++j) r[i - db + j] = F.sub(r[i - db + j], F.mul(c, bc[j]));
    }
    r.resize(static_cast<std::size_t>(db));
    return {PolyFq::from_residues(F, std::move(qc)), PolyFq::from_residues(F, std::move(r))};
}

PolyFq rem(const PolyFq& a, const PolyFq& b) { return divmod(a, b).remainder; }
PolyFq quot(const PolyFq& a, const PolyFq& b) { return divmod(a, b).quotient; }

PolyFq gcd(const PolyFq& a, const PolyFq& b) {
    PolyFq x = a, y = b;
    while (!y.is_zero()) {
        PolyFq r = rem(x, y);
        x = std::move(y);
        y = std::move(r);
    }
    return x.is_zero() ? x : x.monic();
}

PolyFq mul_mod(const PolyFq& a, const PolyFq& b, const PolyFq& modulus) {
    return rem(a * b, modulus);
}

PolyFq pow_mod(const PolyFq& base, std::uint64_t e, const PolyFq& modulus) {
    PolyFq result = rem(PolyFq::constant(base.field(), 1), modulus);
    PolyFq b = rem(base, modulus);
    while (e > 0) {
        if (e & 1u) result = mul_mod(result, b, modulus);
        e >>= 1;
        if (e > 0) b = mul_mod(b, b, modulus);
    }
    return result;
}

PolyFq frobenius_mod(const PolyFq& a, const PolyFq& modulus) {
    return pow_mod(a, a.q(), modulus);
}

PolyFq pow(const PolyFq& base, unsigned e) {
    PolyFq result = PolyFq::constant(base.field(), 1);
    PolyFq b = base;
    while (e > 0) {
        if (e & 1u) result = result * b;
        e >>= 1;
        if (e > 0) b = b * b;
    }
    return result;
}

std::string to_human(const PolyFq& f) {
    if (f.is_zero()) return "0";
    std::string out;
    for (int i = f.degree(); i >= 0; --i) {
        Residue c = f.coeff(i);
        if (c == 0) continue;
        if (!out.empty()) out += '+';
        if (c != 1 || i == 0) out += std::to_string(c);
        if (i >= 1) out += 'T';
        if (i >= 2) out += '^' + std::to_string(i);
    }
    return out;
}

std::string to_compact(const PolyFq& f) {
    std::string out = "poly:q" + std::to_string(f.q()) + ':';
    if (f.is_zero()) return out + '0';
    for (int i = 0; i <= f.degree(); ++i) {
        if (i) out += ',';
        out += std::to_string(f.coeff(i));
    }
    return out;
}

namespace {

std::int64_t parse_uint(std::string_view s, std::string_view whole) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || v < 0)
        throw ValidationError("bad integer '" + std::string(s) + "' in polynomial '" +
                              std::string(whole) + "'");
    return v;
}

PolyFq parse_compact(std::string_view text, std::optional<FieldParams> field) {
    auto rest = text.substr(5);  // after "poly:"
    if (rest.empty() || rest[0] != 'q') throw ValidationError("bad compact polynomial '" + std::string(text) + "'");
    auto colon = rest.find(':');
    if (colon == std::string_view::npos)
        throw ValidationError("bad compact polynomial '" + std::string(text) + "'");
    FieldParams F(static_cast<std::uint32_t>(parse_uint(rest.substr(1, colon - 1), text)));
    if (field && !(*field == F))
        throw ValidationError("polynomial '" + std::string(text) + "' is over q=" +
                              std::to_string(F.q()) + ", expected q=" + std::to_string(field->q()));
    std::vector<std::int64_t> coeffs;
    auto body = rest.substr(colon + 1);
    if (body.empty()) throw ValidationError("empty coefficient list in '" + std::string(text) + "'");
    std::size_t pos = 0;
    while (pos <= body.size()) {
        auto comma = body.find(',', pos);
        auto tok = body.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
        auto v = parse_uint(tok, text);
        if (v >= F.q()) throw ValidationError("coefficient out of range in '" + std::string(text) + "'");
        coeffs.push_back(v);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    if (coeffs.size() > 1 && coeffs.back() == 0)
        throw ValidationError("non-canonical compact polynomial (trailing zero) '" + std::string(text) + "'");
    return PolyFq(F, coeffs);
}

PolyFq parse_human(std::string_view text, FieldParams F) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) throw ValidationError("empty polynomial");
    std::vector<std::int64_t> coeffs;
    auto add_term = [&](int deg, std::int64_t c) {
        if (coeffs.size() <= static_cast<std::size_t>(deg)) coeffs.resize(static_cast<std::size_t>(deg) + 1, 0);
        coeffs[static_cast<std::size_t>(deg)] = F.reduce(coeffs[static_cast<std::size_t>(deg)] + c);
    };
    std::size_t i = 0;
    bool first = true;
    while (i < s.size()) {
        int sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            sign = s[i] == '-' ? -1 : 1;
            ++i;
        } else if (!first) {
            throw ValidationError("expected '+' or '-' in polynomial '" + std::string(text) + "'");
        }
        first = false;
        std::size_t j = i;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        std::int64_t c = 1;
        bool has_coeff = j > i;
        if (has_coeff) c = F.reduce(parse_uint(std::string_view(s).substr(i, j - i), text));
        i = j;
        if (i < s.size() && s[i] == '*') {
            if (!has_coeff) throw ValidationError("dangling '*' in polynomial '" + std::string(text) + "'");
            ++i;
            if (i >= s.size() || s[i] != 'T')
                throw ValidationError("expected T after '*' in polynomial '" + std::string(text) + "'");
        }
        int deg = 0;
        if (i < s.size() && s[i] == 'T') {
            ++i;
            deg = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                std::size_t k = i;
                while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
                if (k == i) throw ValidationError("missing exponent in polynomial '" + std::string(text) + "'");
                auto e = parse_uint(std::string_view(s).substr(i, k - i), text);
                if (e > 4096) throw ValidationError("exponent too large in '" + std::string(text) + "'");
                deg = static_cast<int>(e);
                i = k;
            }
        } else if (!has_coeff) {
            throw ValidationError("unexpected character in polynomial '" + std::string(text) + "'");
        }
        add_term(deg, sign * c);
    }
    return PolyFq(F, coeffs);
}

}  // namespace

PolyFq parse_poly(std::string_view text, std::optional<FieldParams> field) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.starts_with("poly:")) return parse_compact(text, field);
    if (!field) throw ValidationError("human-form polynomial '" + std::string(text) + "' needs a field size q");
    return parse_human(text, *field);
}

}  // namespace ffh
