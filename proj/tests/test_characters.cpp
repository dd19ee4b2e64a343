#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ffh/characters.hpp"
#include "oracle.hpp"

using namespace ffh;

namespace {

const FieldParams F5(5);

PolyFq P(std::string_view s) { return parse_poly(s, F5); }

PolyFq random_poly(std::mt19937_64& rng, int n, bool monic) {
    std::uniform_int_distribution<std::int64_t> c(0, 4);
    std::vector<std::int64_t> v(static_cast<std::size_t>(n) + 1);
    for (auto& x : v) x = c(rng);
    v.back() = monic ? 1 : 1 + c(rng) % 4;
    return PolyFq(F5, std::span<const std::int64_t>(v.data(), v.size()));
}

int sym(const PolyFq& a, const PolyFq& b) { return to_int(residue_symbol(a, b)); }

}  // namespace

TEST_CASE("residue symbol examples") {
    CHECK(sym(P("T"), P("T^2+2")) == -1);
    CHECK(sym(P("T^2+2"), P("T")) == -1);
    for (std::int64_t c = 1; c < 5; ++c) {
        const auto sq = PolyFq::constant(F5, F5.mul(static_cast<Residue>(c), static_cast<Residue>(c)));
        CHECK(sym(sq, P("T^3+T+1")) == 1);
        CHECK(sym(sq, P("T^2+T")) == 1);
    }
    CHECK(sym(P("T+1"), P("T^2+4")) == 0);
    CHECK(sym(PolyFq(F5), P("T+2")) == 0);
    CHECK_THROWS_AS(residue_symbol(P("T"), P("2T+1")), ValidationError);
    CHECK_THROWS_AS(residue_symbol(P("T"), P("1")), ValidationError);
}

TEST_CASE("chi examples") {
    const Conductor c(P("T^3+T+1"));
    CHECK(c.genus() == 1);
    CHECK(to_int(chi(c, P("T+4"))) == -1);
    CHECK(to_int(chi(c, P("T"))) == 1);
    CHECK(to_int(chi(c, P("1"))) == 1);
    for (const auto& f : enumerate_monic(F5, 2)) CHECK(to_int(chi(c, f * f)) == 1);

    CHECK_THROWS_AS(Conductor(P("T^2+2")), ValidationError);          // even degree
    CHECK_THROWS_AS(Conductor(P("T^3+T^2")), ValidationError);        // reducible
    CHECK_THROWS_AS(Conductor(P("2T^3+2T+2")), ValidationError);      // not monic
}

TEST_CASE("character table") {
    const Conductor c(P("T^3+T+1"));
    auto factors = std::make_shared<const FactorTable>(F5, 4);
    const CharTable table(c, 1, factors);
    const std::vector<int> expected{1, 1, 1, 1, -1};
    const auto lin = enumerate_irreducible(F5, 1);
    for (std::size_t i = 0; i < lin.size(); ++i) {
        CHECK(to_int(table.prime_value(static_cast<std::uint32_t>(factors->indexer().index_of(lin[i])))) ==
              expected[i]);
    }
    CHECK(to_int(table.eval(P("T^2+4"))) == -1);
    CHECK(to_int(table.eval(P("1"))) == 1);
    // Degree-2 irreducibles are beyond the tabulated degree and use the fallback.
    for (const auto& f : enumerate_monic(F5, 4)) REQUIRE(table.eval(f) == chi(c, f));

    SUBCASE("tabulated values match the symbol on every irreducible") {
        const Conductor c7(enumerate_irreducible(F5, 7)[100]);
        const CharTable t7(c7, 4, factors);
        for (int d = 1; d <= 4; ++d)
            for (auto idx : factors->irreducibles(d))
                REQUIRE(t7.prime_value(idx) == residue_symbol(c7.poly(), factors->indexer().poly_at(idx)));
        CHECK(t7.self_test(1000, 99) == 0);
    }
    CHECK(build_char_table(c, 2).max_degree() == 2);
}

TEST_CASE("multiplicativity in the lower argument") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> deg(1, 6);
    for (int i = 0; i < 10000; ++i) {
        const PolyFq a = random_poly(rng, deg(rng), false);
        const PolyFq b1 = random_poly(rng, deg(rng), true);
        const PolyFq b2 = random_poly(rng, deg(rng), true);
        REQUIRE(sym(a, b1 * b2) == sym(a, b1) * sym(a, b2));
    }
}

TEST_CASE("periodicity in the upper argument") {
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<int> deg(1, 7);
    for (int i = 0; i < 10000; ++i) {
        const PolyFq a = random_poly(rng, deg(rng), false);
        const PolyFq b = random_poly(rng, deg(rng), true);
        const PolyFq c = random_poly(rng, deg(rng), false);
        REQUIRE(sym(a, b) == sym(a + c * b, b));
        REQUIRE(sym(a, b) == sym(rem(a, b), b));
    }
}

TEST_CASE("reciprocity for coprime monic pairs") {
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<int> deg(1, 8);
    int tested = 0;
    while (tested < 10000) {
        const PolyFq a = random_poly(rng, deg(rng), true);
        const PolyFq b = random_poly(rng, deg(rng), true);
        if (!gcd(a, b).is_one()) {
            REQUIRE(sym(a, b) == 0);
            REQUIRE(sym(b, a) == 0);
            continue;
        }
        REQUIRE(sym(a, b) == sym(b, a));
        REQUIRE(sym(a, b) != 0);
        ++tested;
    }
}

TEST_CASE("Euler criterion oracle, exhaustive for prime moduli of degree <= 3") {
    for (int d = 1; d <= 3; ++d)
        for (const auto& B : enumerate_irreducible(F5, d))
            for (int n = 0; n < d; ++n)
                for (const auto& m : oracle::monics(F5, n))
                    for (Residue c = 1; c < 5; ++c) {
                        const PolyFq A = m.scaled(c);
                        REQUIRE(sym(A, B) == oracle::euler(A, B));
                    }
}

TEST_CASE("Jacobi extension agrees with the factor-by-factor oracle") {
    std::mt19937_64 rng(14);
    for (int i = 0; i < 2000; ++i) {
        const PolyFq a = random_poly(rng, 5, false);
        const PolyFq b = random_poly(rng, 6, true);
        REQUIRE(sym(a, b) == oracle::jacobi(a, b));
    }
}
