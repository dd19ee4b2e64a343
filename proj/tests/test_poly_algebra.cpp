#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "ffh/poly_algebra.hpp"
#include "oracle.hpp"

using namespace ffh;

namespace {

const FieldParams F5(5);

PolyFq P(std::string_view s, FieldParams F = F5) { return parse_poly(s, F); }

PolyFq random_monic(std::mt19937_64& rng, FieldParams F, int n) {
    std::uniform_int_distribution<std::int64_t> c(0, F.q() - 1);
    std::vector<std::int64_t> v(static_cast<std::size_t>(n) + 1);
    for (auto& x : v) x = c(rng);
    v.back() = 1;
    return PolyFq(F, std::span<const std::int64_t>(v.data(), v.size()));
}

}  // namespace

TEST_CASE("field parameters accept only primes 1 mod 4") {
    CHECK_NOTHROW(FieldParams(5));
    CHECK_NOTHROW(FieldParams(13));
    CHECK_NOTHROW(FieldParams(65521));
    CHECK_THROWS_AS(FieldParams(3), ValidationError);
    CHECK_THROWS_AS(FieldParams(7), ValidationError);
    CHECK_THROWS_AS(FieldParams(9), ValidationError);
    CHECK_THROWS_AS(FieldParams(1), ValidationError);
    CHECK(F5.legendre(4) == 1);
    CHECK(F5.legendre(2) == -1);
    CHECK(F5.legendre(0) == 0);
    CHECK(F5.mul(F5.inv(3), 3) == 1);
}

TEST_CASE("ring operations") {
    CHECK(P("T+1") * P("T+4") == P("T^2+4"));
    CHECK(gcd(P("T^2+4"), P("T+1")) == P("T+1"));
    CHECK(P("T^3+T+1").evaluate(1) == 3);
    CHECK((P("T^2+4") + P("4T^2+1")).is_zero());
    CHECK(P("3T^2+1").monic() == P("T^2+2"));
    const auto dm = divmod(P("T^3+T+1"), P("T^2+2"));
    CHECK(dm.quotient * P("T^2+2") + dm.remainder == P("T^3+T+1"));
    CHECK(dm.remainder.degree() < 2);
    CHECK(gcd(P("2T^2+3"), P("T^4+1")).is_monic());

    SUBCASE("zero polynomial uses the sentinel degree") {
        PolyFq z(F5);
        CHECK(z.is_zero());
        CHECK(z.degree() == PolyFq::kZeroDegree);
        CHECK((z * P("T+1")).is_zero());
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(rem(P("T+1"), PolyFq(F5)), ValidationError);
        CHECK_THROWS_AS(P("T+1") + P("T+1", FieldParams(13)), ValidationError);
        CHECK_THROWS_AS(P("T+1") * P("T+1", FieldParams(13)), ValidationError);
    }
}

TEST_CASE("text formats round-trip") {
    for (const char* s : {"T^3+T+1", "3T^2+T+1", "T", "1", "4", "T^7+2T^5+T"}) {
        const PolyFq f = P(s);
        CHECK(to_human(f) == s);
        CHECK(parse_poly(to_compact(f)) == f);
        CHECK(parse_poly(to_human(f), F5) == f);
    }
    CHECK(to_compact(P("T^3+T+1")) == "poly:q5:1,1,0,1");
    CHECK(parse_poly("poly:q5:1,1,0,1") == P("T^3+T+1"));
    CHECK(P("T^2 - 1") == P("T^2+4"));
    CHECK(P("2*T^2+T") == P("2T^2+T"));
    CHECK(to_human(PolyFq(F5)) == "0");
    CHECK_THROWS_AS(parse_poly("poly:q5:1,0"), ValidationError);
    CHECK_THROWS_AS(parse_poly("poly:q7:1,1"), ValidationError);
    CHECK_THROWS_AS(parse_poly("poly:q5:1,1", FieldParams(13)), ValidationError);
    CHECK_THROWS_AS(parse_poly("T^2+", F5), ValidationError);
    CHECK_THROWS_AS(parse_poly("T^2+x", F5), ValidationError);
    CHECK_THROWS_AS(parse_poly("T^2+1"), ValidationError);
}

TEST_CASE("irreducibility") {
    CHECK(is_irreducible(P("T^2+2")));
    CHECK(is_irreducible(P("T^3+T+1")));
    CHECK_FALSE(is_irreducible(P("T^2+4")));
    CHECK_FALSE(is_irreducible(P("T^4+4T^2+4")));  // (T^2+2)^2, no roots
    CHECK_THROWS_AS(is_irreducible(P("2T+1")), ValidationError);
    CHECK_THROWS_AS(is_irreducible(P("1")), ValidationError);

    SUBCASE("agrees with trial division, exhaustively up to degree 5") {
        for (int n = 1; n <= 5; ++n)
            for (const auto& f : oracle::monics(F5, n)) REQUIRE(is_irreducible(f) == oracle::irreducible(f));
    }
    SUBCASE("q = 13, degree 3") {
        const FieldParams F13(13);
        for (const auto& f : oracle::monics(F13, 3)) REQUIRE(is_irreducible(f) == oracle::irreducible(f));
    }
}

TEST_CASE("enumeration") {
    CHECK(enumerate_monic(F5, 0).size() == 1);
    CHECK(enumerate_monic(F5, 0)[0].is_one());
    CHECK(enumerate_monic(F5, 2).size() == 25);
    CHECK(enumerate_monic(FieldParams(13), 1).size() == 13);
    CHECK(enumerate_irreducible(F5, 1).size() == 5);
    CHECK(enumerate_irreducible(F5, 2).size() == 10);
    CHECK(enumerate_irreducible(F5, 3).size() == 40);

    SUBCASE("lexicographic in (c_0, ..., c_{n-1}), no repeats") {
        const auto all = enumerate_monic(F5, 4);
        const auto ref = oracle::monics(F5, 4);
        REQUIRE(all.size() == ref.size());
        for (std::size_t i = 0; i < all.size(); ++i) REQUIRE(all[i] == ref[i]);
        std::set<std::string> seen;
        for (const auto& f : all) {
            CHECK(f.is_monic());
            CHECK(f.degree() == 4);
            seen.insert(to_compact(f));
        }
        CHECK(seen.size() == all.size());
    }
    SUBCASE("irreducibles keep the same order") {
        const auto irr = enumerate_irreducible(F5, 4);
        std::vector<PolyFq> ref;
        for (const auto& f : oracle::monics(F5, 4))
            if (oracle::irreducible(f)) ref.push_back(f);
        CHECK(irr == ref);
    }
    SUBCASE("sizes match the count for n <= 7") {
        for (int n = 1; n <= 7; ++n) CHECK(enumerate_irreducible(F5, n).size() == count_irreducible(5, n));
    }
}

TEST_CASE("irreducible counts") {
    CHECK(count_irreducible(5, 1) == 5);
    CHECK(count_irreducible(5, 3) == 40);
    CHECK(count_irreducible(5, 7) == 11160);
    CHECK(count_irreducible(5, 9) == 217000);
    CHECK_THROWS_AS(count_irreducible(5, 0), ValidationError);

    for (std::uint64_t q : {5u, 13u}) {
        for (int n = 1; n <= 10; ++n) {
            std::uint64_t total = 0;
            for (int d = 1; d <= n; ++d)
                if (n % d == 0) total += static_cast<std::uint64_t>(d) * count_irreducible(q, d);
            CHECK(total == checked_power(q, n));
            const double main = std::pow(static_cast<double>(q), n) / n;
            CHECK(std::abs(static_cast<double>(count_irreducible(q, n)) - main) <=
                  2.0 * std::pow(static_cast<double>(q), 0.5 * n) / n);
        }
    }
}

TEST_CASE("factorization") {
    auto f1 = factorize(P("T^2+4"));
    REQUIRE(f1.factors.size() == 2);
    CHECK(f1.factors[0] == std::pair{P("T+1"), 1});
    CHECK(f1.factors[1] == std::pair{P("T+4"), 1});
    auto f2 = factorize(P("T^2"));
    REQUIRE(f2.factors.size() == 1);
    CHECK(f2.factors[0] == std::pair{P("T"), 2});
    auto f3 = factorize(P("T^3+T+1"));
    REQUIRE(f3.factors.size() == 1);
    CHECK(f3.factors[0] == std::pair{P("T^3+T+1"), 1});
    auto f4 = factorize(P("3T^2+3"));
    CHECK(f4.unit == 3);
    CHECK(f4.product(F5) == P("3T^2+3"));
    CHECK_THROWS_AS(factorize(P("3")), ValidationError);
    CHECK_THROWS_AS(factorize(PolyFq(F5)), ValidationError);

    SUBCASE("re-multiplication on 10,000 random monic polynomials of degree <= 8") {
        std::mt19937_64 rng(17);
        std::uniform_int_distribution<int> deg(1, 8);
        for (int i = 0; i < 10000; ++i) {
            const PolyFq f = random_monic(rng, F5, deg(rng));
            const auto fac = factorize(f);
            REQUIRE(fac.product(F5) == f);
            for (std::size_t j = 0; j < fac.factors.size(); ++j) {
                REQUIRE(fac.factors[j].first.is_monic());
                REQUIRE(fac.factors[j].second >= 1);
                if (j) REQUIRE(fac.factors[j - 1].first < fac.factors[j].first);
            }
        }
    }
    SUBCASE("factors are irreducible (trial division oracle, degree <= 6)") {
        std::mt19937_64 rng(3);
        for (int i = 0; i < 300; ++i) {
            const PolyFq f = random_monic(rng, F5, 6);
            for (const auto& [Q, e] : factorize(f).factors) REQUIRE(oracle::irreducible(Q));
        }
    }
    SUBCASE("larger q and degree") {
        const FieldParams F(101);
        std::mt19937_64 rng(5);
        for (int i = 0; i < 200; ++i) {
            const PolyFq f = random_monic(rng, F, 12);
            REQUIRE(factorize(f).product(F) == f);
        }
    }
}

TEST_CASE("factor table") {
    const FactorTable table(F5, 5);
    CHECK(table.irreducibles(3).size() == 40);
    for (int n = 1; n <= 5; ++n) {
        for (const auto& f : enumerate_monic(F5, n)) {
            const auto idx = table.indexer().index_of(f);
            REQUIRE(table.indexer().poly_at(idx) == f);
            REQUIRE(table.indexer().degree_at(idx) == n);
            REQUIRE(table.factorize(f).factors == factorize(f).factors);
            REQUIRE(table.is_irreducible_at(idx) == is_irreducible(f));
        }
    }
    CHECK(table.indexer().index_of(P("1")) == 0);
}

TEST_CASE("von Mangoldt") {
    CHECK(von_mangoldt(P("T^2")) == 1);
    CHECK(von_mangoldt(P("T^2+4")) == 0);
    CHECK(von_mangoldt(P("T^2+2")) == 2);
    CHECK(von_mangoldt(P("1")) == 0);
    for (int n = 1; n <= 4; ++n)
        for (const auto& f : enumerate_monic(F5, n)) {
            const bool one_factor = factorize(f).factors.size() == 1;
            REQUIRE((von_mangoldt(f) > 0) == one_factor);
            REQUIRE(von_mangoldt(f) == oracle::von_mangoldt(f));
        }
}

TEST_CASE("square-free split") {
    auto s1 = squarefree_split(P("T^3+T^2"));  // T^2 (T+1)
    CHECK(s1.squarefree == P("T+1"));
    CHECK(s1.square_root == P("T"));
    auto s2 = squarefree_split(P("1"));
    CHECK(s2.squarefree.is_one());
    CHECK(s2.square_root.is_one());
    auto s3 = squarefree_split(P("T^4"));
    CHECK(s3.squarefree.is_one());
    CHECK(s3.square_root == P("T^2"));
    CHECK(is_square(P("T^2")));
    CHECK_FALSE(is_square(P("T")));

    SUBCASE("exhaustive at q = 5, degree <= 6") {
        for (int n = 0; n <= 6; ++n)
            for (const auto& l : enumerate_monic(F5, n)) {
                const auto s = squarefree_split(l);
                REQUIRE(s.squarefree * s.square_root * s.square_root == l);
                if (s.squarefree.degree() >= 1) REQUIRE(gcd(s.squarefree, s.squarefree.derivative()).is_one());
            }
    }
}
