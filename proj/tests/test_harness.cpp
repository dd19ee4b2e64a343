#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ffh/harness.hpp"
#include "ffh/predictions.hpp"
#include "oracle.hpp"

using namespace ffh;
namespace fs = std::filesystem;

namespace {

const FieldParams F5(5);

PolyFq P(std::string_view s) { return parse_poly(s, F5); }

fs::path scratch() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / ("ffh_harness_" + std::to_string(::getpid()));
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SweepConfig config(int g, std::vector<int> X, fs::path path = {}) {
    SweepConfig c;
    c.q = 5;
    c.g = g;
    c.X_list = std::move(X);
    c.cache_path = std::move(path);
    return c;
}

const SweepCache& genus_one() {
    static const SweepCache cache = [] {
        auto c = config(1, {1, 2});
        c.zero_samples = -1;
        return sweep(c);
    }();
    return cache;
}

const SweepCache& genus_two() {
    static const SweepCache cache = sweep(config(2, {2}));
    return cache;
}

int run(const std::string& args) {
    const std::string cmd = std::string(FFH_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string capture(const std::string& args) {
    const fs::path out = scratch() / "cli_out.txt";
    const std::string cmd = std::string(FFH_CLI_PATH) + " " + args + " >" + out.string() + " 2>/dev/null";
    REQUIRE(std::system(cmd.c_str()) == 0);
    return slurp(out);
}

}  // namespace

TEST_CASE("genus one sweep") {
    const auto& cache = genus_one();
    CHECK(cache.complete);
    CHECK(cache.size() == 40);
    const auto primes = enumerate_irreducible(F5, 3);
    for (std::size_t i = 0; i < cache.size(); ++i) {
        CHECK(cache.records[i].conductor == primes[i]);
        for (int X : {1, 2}) {
            const auto& h = cache.at(X)[i];
            CHECK(h.conductor == primes[i]);
            CHECK(h.has_zero_route());
            CHECK(h.hybrid_defect <= 1e-5);
        }
    }
    CHECK_THROWS_AS(cache.at(3), ValidationError);
    CHECK(functional_equation_audit(cache).empty());
}

TEST_CASE("genus one cache matches the naive oracle bit for bit") {
    const auto& cache = genus_one();
    QuadValue total(5);
    for (const auto& rec : cache.records) {
        const auto ref = oracle::coefficients(rec.conductor, 2);
        REQUIRE(rec.coeffs == ref);
        QuadValue central(5);
        for (int n = 0; n <= 2; ++n) central += QuadValue::scaled_power(5, BigInt(ref[n]), n);
        REQUIRE(rec.central == central);
        total += central;
    }
    const auto m = moment(cache, 1);
    CHECK(*m.exact == total / Rational(40));
    CHECK(*m.exact == QuadValue(5, 2, 0));
    CHECK(m.prediction == 2.0);
    CHECK(m.ratio == 1.0);
    CHECK(m.extra_value("conjecture_leading") == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cache round trip") {
    const fs::path path = scratch() / "roundtrip.csv";
    auto c = config(1, {0, 2}, path);
    c.zero_samples = 5;
    const auto fresh = sweep(c);
    const auto loaded = read_cache(path);
    CHECK(loaded.complete);
    CHECK(loaded.header == fresh.header);
    REQUIRE(loaded.size() == fresh.size());
    for (std::size_t i = 0; i < fresh.size(); ++i) {
        // Exact fields are stored as integers and rationals.
        CHECK(loaded.records[i].conductor == fresh.records[i].conductor);
        CHECK(loaded.records[i].coeffs == fresh.records[i].coeffs);
        CHECK(loaded.records[i].central == fresh.records[i].central);
        CHECK(loaded.records[i].rh_defect == fresh.records[i].rh_defect);
        for (std::size_t j = 0; j < fresh.records[i].angles.size(); ++j)
            CHECK(loaded.records[i].angles[j] == doctest::Approx(fresh.records[i].angles[j]).epsilon(1e-11));
        for (int X : {0, 2}) CHECK(loaded.at(X)[i] == fresh.at(X)[i]);
    }
    CHECK(loaded.at(2)[0].has_zero_route());
    CHECK_FALSE(loaded.at(2)[1].has_zero_route());

    const fs::path again = scratch() / "roundtrip2.csv";
    write_cache(again, loaded);
    const auto reread = read_cache(again);
    CHECK(reread.records == loaded.records);
    CHECK(reread.hybrid == loaded.hybrid);
    CHECK(slurp(again) == slurp(path));

    // A second sweep call just loads the complete cache.
    CHECK(sweep(c).records == loaded.records);
    auto other = c;
    other.X_list = {2};
    CHECK_THROWS_AS(sweep(other), ValidationError);
}

TEST_CASE("interrupted sweeps resume to the identical file") {
    const fs::path whole = scratch() / "whole.csv", part = scratch() / "part.csv";
    auto c = config(1, {2}, whole);
    c.chunk = 7;
    c.zero_samples = 10;
    sweep(c);
    const std::string reference = slurp(whole);

    fs::remove(part);  // doctest re-enters this case once per subcase
    auto p = c;
    p.cache_path = part;
    p.stop_after_chunks = 3;
    const auto partial = sweep(p);
    CHECK_FALSE(partial.complete);
    CHECK(partial.size() == 21);
    const auto read_back = read_cache(part);
    CHECK_FALSE(read_back.complete);
    CHECK(read_back.size() == 21);
    CHECK_THROWS_AS(moment(read_back, 1), ValidationError);

    SUBCASE("torn trailing line") {
        std::ofstream(part, std::ios::app) << "L,\"poly:q5:1,1,0,1\",1;3";
    }
    SUBCASE("rows after the last checkpoint") {
        std::istringstream lines(reference);
        std::string line;
        int copied = 0;
        std::ofstream out(part, std::ios::app);
        while (std::getline(lines, line) && copied < 30)
            if (line.rfind("L,", 0) == 0 || line.rfind("H,", 0) == 0) out << line << '\n', ++copied;
    }
    CHECK(read_cache(part).size() == 21);
    p.stop_after_chunks.reset();
    const auto resumed = sweep(p);
    CHECK(resumed.complete);
    CHECK(slurp(part) == reference);
    CHECK(read_cache(part).records == read_cache(whole).records);
}

TEST_CASE("thread count does not change the cache") {
    const fs::path one = scratch() / "t1.csv", eight = scratch() / "t8.csv";
    auto c = config(2, {2, 3}, one);
    c.chunk = 100;
    c.zero_samples = 16;
    c.threads = 1;
    const auto a = sweep(c);
    c.cache_path = eight;
    c.threads = 8;
    const auto b = sweep(c);
    CHECK(slurp(one) == slurp(eight));
    CHECK(a.records == b.records);
    CHECK(a.hybrid == b.hybrid);
    CHECK(to_csv_row(splitting_report(a, 1, 2)) == to_csv_row(splitting_report(b, 1, 2)));
}

TEST_CASE("k = 0 reports are exactly one") {
    const auto& cache = genus_two();
    CHECK(*moment(cache, 0).exact == QuadValue(5, 1, 0));
    CHECK(euler_moment(cache, 0, 2).empirical == 1.0);
    CHECK(z_moment(cache, 0, 2).empirical == 1.0);
    CHECK(splitting_report(cache, 0, 2).empirical == 1.0);
    CHECK(moment(cache, 0).ratio == 1.0);
}

TEST_CASE("twisted moments") {
    const auto& cache = genus_two();
    const auto plain = moment(cache, 1);
    CHECK(*twisted_moment(cache, P("1")).exact == *plain.exact);
    CHECK(*twisted_moment(cache, P("T^2")).exact == *plain.exact);
    CHECK(*twisted_moment(cache, P("T^2+2T+1")).exact == *plain.exact);
    const auto t = twisted_moment(cache, P("T"));
    CHECK(t.prediction == doctest::Approx(2.0 / std::sqrt(5.0)));
    CHECK(t.extra_value("deg_l1") == 1.0);
    CHECK(t.sample_size == 624);
    CHECK_THROWS_AS(twisted_moment(cache, P("T^3")), ValidationError);
    CHECK_THROWS_AS(twisted_moment(cache, parse_poly("T", FieldParams(13))), ValidationError);

    SUBCASE("against a direct character sum") {
        Rational a = 0, b = 0;
        for (const auto& rec : cache.records) {
            const int s = oracle::jacobi(rec.conductor, P("T^2+T"));
            a += s * rec.central.rational_part();
            b += s * rec.central.surd_part();
        }
        CHECK(*twisted_moment(cache, P("T^2+T")).exact == QuadValue(5, a / 624, b / 624));
    }
}

TEST_CASE("orthogonality") {
    for (const auto* cache : {&genus_one(), &genus_two()}) {
        const auto sq = orthogonality(*cache, P("T^2"));
        CHECK(sq.extra_value("raw_sum") == static_cast<double>(cache->size()));
        CHECK(*sq.exact == QuadValue(5, 1, 0));
        CHECK(sq.prediction == 1.0);
        const auto lin = orthogonality(*cache, P("T"));
        CHECK(lin.prediction == 0.0);
        CHECK(std::abs(lin.empirical) <= 1.0);
        long long direct = 0;
        for (const auto& rec : cache->records) direct += oracle::jacobi(rec.conductor, P("T+3"));
        CHECK(orthogonality(*cache, P("T+3")).extra_value("raw_sum") == static_cast<double>(direct));
    }
    CHECK_THROWS_AS(orthogonality(genus_one(), P("2T")), ValidationError);
}

TEST_CASE("splitting report fields") {
    const auto r = splitting_report(genus_two(), 1, 2);
    CHECK(r.empirical == doctest::Approx(r.extra_value("mean_L_k") /
                                         (r.extra_value("mean_P_k") * r.extra_value("mean_Z_k"))));
    CHECK(r.extra_value("split_ci_low") <= r.empirical);
    CHECK(r.extra_value("split_ci_high") >= r.empirical);
    CHECK(r.extra_value("kappa_ci_low") <= r.extra_value("kappa"));
    CHECK(r.extra_value("kappa_ci_high") >= r.extra_value("kappa"));
    CHECK(r.extra_value("candidate_sqrt2") == std::sqrt(2.0));
    CHECK(r.extra_value("bootstrap_resamples") == 200);
    CHECK(r.warnings.size() == 1);
    CHECK(r.extra_value("regime_c") == doctest::Approx(2.0 - 2.0 * std::log(5.0) / std::log(2.0)));
    const auto z = z_moment(genus_two(), 1, 2);
    CHECK(z.extra_value("kappa") == doctest::Approx(r.extra_value("kappa")).epsilon(1e-14));
    CHECK_THROWS_AS(r.extra_value("missing"), ValidationError);
    CHECK(std::isinf(regime_c(5, 1, 2)));

    const auto json = nlohmann::json::parse(to_json(r));
    CHECK(json["kind"] == "splitting");
    CHECK(json["extra"]["kappa"].get<double>() == r.extra_value("kappa"));
    const auto zr = zero_route_report(genus_two(), 2);
    CHECK(zr.sample_size == 128);
    CHECK(nlohmann::json::parse(to_json(zr))["ratio"].is_null());
    CHECK(to_csv_row(r).rfind("splitting,", 0) == 0);
}

TEST_CASE("central-only caches") {
    auto c = config(1, {2});
    c.mode = ModeChoice::CentralOnly;
    const auto cache = sweep(c);
    CHECK(cache.header.mode == LMode::CentralOnly);
    for (std::size_t i = 0; i < cache.size(); ++i) {
        CHECK(cache.records[i].coeffs.size() == 2);
        CHECK(cache.records[i].central == genus_one().records[i].central);
        CHECK_FALSE(cache.at(2)[i].has_zero_route());
    }
    CHECK(*moment(cache, 1).exact == *moment(genus_one(), 1).exact);
    CHECK(functional_equation_audit(cache).empty());
    CHECK(resolve_mode(config(4, {})) == LMode::CentralOnly);
    CHECK(resolve_mode(config(3, {})) == LMode::Full);
}

TEST_CASE("small utilities") {
    CHECK(zero_route_sample(10, 4) == std::vector<std::size_t>{0, 2, 5, 7});
    CHECK(zero_route_sample(3, 8).size() == 3);
    CHECK(zero_route_sample(3, -1).size() == 3);
    CHECK(zero_route_sample(3, 0).empty());
    CHECK(pairwise_sum({1, 2, 3, 4, 5}) == 15.0);
    CHECK(pairwise_sum({}) == 0.0);
    CHECK(parse_mode("central") == LMode::CentralOnly);
    CHECK_THROWS_AS(parse_mode("partial"), ValidationError);
    auto bad = config(1, {2, 2});
    CHECK_THROWS_AS(sweep(bad), ValidationError);
    CHECK_THROWS_AS(sweep(config(0, {})), ValidationError);
    const auto est = estimate_resources(config(4, {2, 3, 4}));
    CHECK(est.conductors == 217000);
    CHECK_FALSE(describe(est).empty());
}

TEST_CASE("command line") {
    const auto lfun = nlohmann::json::parse(capture("lfun --q 5 --prime 'T^3+T+1'"));
    CHECK(lfun["coeffs"] == nlohmann::json::array({1, 3, 5}));
    CHECK(lfun["central"] == "2 + 3·5^{-1/2}");
    CHECK(capture("enumerate --q 5 --degree 3 --irreducible --count") == "40\n");
    const std::string predictions = capture("predict --q 5 --g 3 --k 1");
    const auto pred = nlohmann::json::parse(predictions.substr(0, predictions.find('\n')));
    CHECK(pred["value"].get<double>() == doctest::Approx(3.0).epsilon(1e-13));

    CHECK(run("lfun --q 9 --prime 'T^3+T+1'") == 2);
    CHECK(run("lfun --q 5 --prime 'T^2+4'") == 2);
    CHECK(run("lfun --q 5") == 2);
    CHECK(run("--bogus") == 2);
    CHECK(run("moments --q 5 --g 1 --cache " + (scratch() / "absent.csv").string()) == 2);
    CHECK(run("sweep --q 5 --g 1 --cache /proc/ffh-no-such-dir/cache.csv") == 1);

    const fs::path cache = scratch() / "cli.csv";
    CHECK(run("sweep --q 5 --g 1 --X 2 --cache " + cache.string()) == 0);
    const auto csv = capture("compare --q 5 --g 1 --X 2 --format csv --cache " + cache.string());
    CHECK(csv.rfind(report_csv_header(), 0) == 0);
    CHECK(run("twisted --q 5 --g 1 --l T --cache " + cache.string()) == 0);
    CHECK(run("twisted --q 5 --g 1 --l T^2+T --cache " + cache.string()) == 2);
}
