// ffh: command-line front end for the sweep harness.
//
// Exit status: 0 on success, 2 on invalid input (one-line reason on stderr),
// 1 on a runtime failure.

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ffh/harness.hpp"
#include "ffh/hybrid.hpp"
#include "ffh/lfunction.hpp"
#include "ffh/poly_algebra.hpp"
#include "ffh/predictions.hpp"

using namespace ffh;
using json = nlohmann::ordered_json;

namespace {

struct Globals {
    std::uint32_t q = 5;
    int g = 1;
    std::vector<int> X;
    double k = 1.0;
    std::string cache;
    int threads = 1;
    std::string format = "json";
    double tol = 1e-6;
};

json num(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

int int_k(double k) {
    if (std::floor(k) != k) throw ValidationError("--k must be an integer here");
    return static_cast<int>(k);
}

std::filesystem::path default_cache(const Globals& G, LMode mode) {
    std::filesystem::path dir = "ffh-cache";
    if (const char* env = std::getenv("FFH_CACHE_DIR"); env && *env) dir = env;
    std::string name = "ffh_q" + std::to_string(G.q) + "_g" + std::to_string(G.g) + "_" + mode_name(mode);
    if (!G.X.empty()) {
        name += "_X";
        for (std::size_t i = 0; i < G.X.size(); ++i) name += (i ? "-" : "") + std::to_string(G.X[i]);
    }
    return dir / (name + ".csv");
}

json lrecord_json(const LRecord& r) {
    json j;
    j["conductor"] = to_human(r.conductor);
    j["compact"] = to_compact(r.conductor);
    j["q"] = r.conductor.field().q();
    j["genus"] = r.genus;
    j["coeffs"] = r.coeffs;
    j["central"] = r.central.pretty();
    j["central_a"] = rational_to_string(r.central.rational_part());
    j["central_b"] = rational_to_string(r.central.surd_part());
    j["central_value"] = r.central.to_double();
    json angles = json::array();
    for (double a : r.angles) angles.push_back(a);
    j["angles"] = angles;
    j["rh_defect"] = num(r.rh_defect);
    if (r.complete()) j["fe_violations"] = functional_equation_violations(r.coeffs, r.conductor.field().q());
    return j;
}

json prediction_json(const PredictionReport& p) {
    json j;
    j["kind"] = p.kind;
    j["q"] = p.q;
    j["g"] = p.g;
    j["k"] = p.k;
    j["X"] = p.X;
    j["value"] = num(p.value);
    j["tail_bound"] = num(p.tail_bound);
    return j;
}

void emit_reports(const std::vector<MomentReport>& reports, const std::string& format) {
    if (format == "csv") {
        std::cout << report_csv_header() << '\n';
        for (const auto& r : reports) std::cout << to_csv_row(r) << '\n';
    } else {
        for (const auto& r : reports) std::cout << to_json(r) << '\n';
    }
    for (const auto& r : reports)
        for (const auto& w : r.warnings) std::cerr << "warning: " << r.kind << ": " << w << '\n';
}

SweepConfig sweep_config(const Globals& G, const std::string& mode, int chunk, int zero_samples) {
    SweepConfig c;
    c.q = G.q;
    c.g = G.g;
    c.X_list = G.X;
    c.mode = mode == "full" ? ModeChoice::Full : mode == "central" ? ModeChoice::CentralOnly : ModeChoice::Auto;
    if (mode != "full" && mode != "central" && mode != "auto") throw ValidationError("--mode must be auto|full|central");
    c.threads = G.threads;
    c.chunk = chunk;
    c.zero_samples = zero_samples;
    c.zero_tol = G.tol;
    c.cache_path = G.cache.empty() ? default_cache(G, resolve_mode(c)) : std::filesystem::path(G.cache);
    c.log = &std::cerr;
    return c;
}

SweepCache load_cache(const Globals& G) {
    std::filesystem::path path = G.cache;
    if (path.empty()) {
        SweepConfig probe;
        probe.g = G.g;
        path = default_cache(G, resolve_mode(probe));
    }
    if (!std::filesystem::exists(path))
        throw ValidationError("no cache at " + path.string() + "; run `ffh sweep` first or pass --cache");
    auto cache = read_cache(path);
    if (cache.header.q != G.q || cache.header.g != G.g)
        throw ValidationError("cache " + path.string() + " holds q=" + std::to_string(cache.header.q) +
                              " g=" + std::to_string(cache.header.g));
    return cache;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quadratic L-functions over F_q[T], the hybrid Euler-Hadamard product, and family moments"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals G;
    app.add_option("--q", G.q, "field size (prime, 1 mod 4)");
    app.add_option("--g", G.g, "genus; conductors have degree 2g+1");
    app.add_option("--X", G.X, "Euler product cutoff(s)")->delimiter(',');
    app.add_option("--k", G.k, "moment exponent");
    app.add_option("--cache", G.cache, "sweep cache file (default under $FFH_CACHE_DIR or ./ffh-cache)");
    app.add_option("--threads", G.threads, "worker threads");
    app.add_option("--format", G.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--tol", G.tol, "zero-route tolerance");

    auto* en = app.add_subcommand("enumerate", "list monic (or irreducible) polynomials of one degree");
    int degree = 1;
    bool irreducible = false, count_only = false;
    en->add_option("--degree", degree)->required();
    en->add_flag("--irreducible", irreducible);
    en->add_flag("--count", count_only);

    std::string prime;
    auto* lf = app.add_subcommand("lfun", "L-polynomial, central value and zeros of one conductor");
    lf->add_option("--prime", prime, "conductor, e.g. \"T^3+T+1\"")->required();

    auto* hy = app.add_subcommand("hybrid", "P_X and Z_X (quotient and zero routes) for one conductor");
    std::string bump = "standard";
    hy->add_option("--prime", prime)->required();
    hy->add_option("--bump", bump)->check(CLI::IsMember({"standard", "skewed"}));

    auto* sw = app.add_subcommand("sweep", "compute (or resume) the family cache");
    std::string mode = "auto";
    int chunk = 512, zero_samples = 128;
    sw->add_option("--mode", mode, "auto|full|central");
    sw->add_option("--chunk", chunk, "conductors per checkpoint");
    sw->add_option("--zero-samples", zero_samples, "conductors per X given the zero route (-1: all)");
    bool estimate_only = false;
    sw->add_flag("--estimate", estimate_only, "print the resource estimate and stop");

    auto* mo = app.add_subcommand("moments", "family moments from a cache");
    auto* tw = app.add_subcommand("twisted", "twisted first moment from a cache");
    std::string twist;
    tw->add_option("--l", twist, "twist polynomial")->required();

    auto* pr = app.add_subcommand("predict", "closed-form predictions");
    int D = 12;
    pr->add_option("--D", D, "Euler product truncation degree");

    auto* cmp = app.add_subcommand("compare", "empirical vs predicted table");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (*en) {
            FieldParams F(G.q);
            if (degree < 0) throw ValidationError("--degree must be >= 0");
            if (count_only) {
                std::cout << (irreducible ? count_irreducible(G.q, degree) : checked_power(G.q, degree)) << '\n';
            } else if (irreducible) {
                for (const auto& p : enumerate_irreducible(F, degree)) std::cout << to_human(p) << '\n';
            } else {
                for_each_monic(F, degree, [](const PolyFq& p) { std::cout << to_human(p) << '\n'; });
            }
        } else if (*lf) {
            Conductor c(parse_poly(prime, FieldParams(G.q)));
            std::cout << lrecord_json(compute_lrecord(c)).dump() << '\n';
        } else if (*hy) {
            Conductor c(parse_poly(prime, FieldParams(G.q)));
            if (G.X.empty()) throw ValidationError("hybrid needs --X");
            int top = 2 * c.genus();
            for (int X : G.X) top = std::max(top, X);
            auto factors = std::make_shared<const FactorTable>(c.field(), top);
            CharTable table(c, top, factors);
            const auto rec = compute_lrecord(table, LMode::Full);
            for (int X : G.X) {
                json j;
                j["conductor"] = to_human(c.poly());
                j["X"] = X;
                auto h = compute_hybrid(table, rec, X);
                j["p_x"] = h.p_x;
                j["p_x_exponent"] = h.p_x_exponent.pretty();
                j["z_quotient"] = h.z_quotient;
                if (X >= 1) {
                    BumpWeight w(G.q, X, bump == "skewed" ? BumpShape::Skewed : BumpShape::Standard);
                    auto z = z_zeros(rec.angles, w, {G.tol});
                    j["z_zeros"] = z.value;
                    j["hybrid_defect"] = hybrid_defect(z.value, h.z_quotient);
                    j["periodic_terms"] = z.terms;
                    j["tail_estimate"] = z.tail_estimate;
                    j["quadrature_error"] = z.quadrature_error;
                }
                j["central_value"] = rec.central.to_double();
                std::cout << j.dump() << '\n';
            }
        } else if (*sw) {
            auto config = sweep_config(G, mode, chunk, zero_samples);
            if (estimate_only) {
                std::cout << describe(estimate_resources(config)) << '\n';
                return 0;
            }
            auto cache = sweep(config);
            json j;
            j["cache"] = config.cache_path.string();
            j["q"] = G.q;
            j["g"] = G.g;
            j["mode"] = mode_name(cache.header.mode);
            j["rows"] = cache.size();
            j["complete"] = cache.complete;
            j["fe_violations"] = functional_equation_audit(cache).size();
            std::cout << j.dump() << '\n';
        } else if (*mo) {
            auto cache = load_cache(G);
            std::vector<MomentReport> reports;
            if (G.X.empty()) {
                reports.push_back(moment(cache, int_k(G.k)));
            } else {
                for (int X : G.X) {
                    reports.push_back(euler_moment(cache, G.k, X));
                    reports.push_back(z_moment(cache, int_k(G.k), X));
                    if (X >= 1) reports.push_back(splitting_report(cache, int_k(G.k), X));
                }
            }
            emit_reports(reports, G.format);
        } else if (*tw) {
            auto cache = load_cache(G);
            emit_reports({twisted_moment(cache, parse_poly(twist, FieldParams(G.q)))}, G.format);
        } else if (*pr) {
            std::vector<PredictionReport> out;
            auto a = a_k(G.k, G.q, D);
            if (std::floor(G.k) == G.k && G.k >= 0) {
                out.push_back(predicted_moment(int_k(G.k), G.q, G.g, D));
                for (int X : G.X) out.push_back(predicted_zx_moment(int_k(G.k), G.q, G.g, X));
            }
            out.push_back(a);
            for (int X : G.X) {
                if (X >= 1) {
                    out.push_back(predicted_euler_moment(G.k, G.q, X, D));
                    out.push_back(predicted_L_over_P(G.q, G.g, X));
                }
            }
            for (auto& p : out)
                if (p.g == 0 && p.kind != "A_k" && p.kind != "euler_moment") p.g = G.g;
            if (G.format == "csv") {
                std::cout << "kind,q,g,k,X,value,tail_bound\n";
                for (const auto& p : out) {
                    std::ostringstream os;
                    os.precision(17);
                    os << p.kind << ',' << p.q << ',' << p.g << ',' << p.k << ',' << p.X << ',' << p.value << ','
                       << p.tail_bound;
                    std::cout << os.str() << '\n';
                }
            } else {
                for (const auto& p : out) std::cout << prediction_json(p).dump() << '\n';
            }
        } else if (*cmp) {
            auto cache = load_cache(G);
            std::vector<MomentReport> reports{moment(cache, 1), twisted_moment(cache, PolyFq::monomial(FieldParams(G.q), 1))};
            const int k = int_k(G.k);
            if (k != 1) reports.push_back(moment(cache, k));
            for (int X : G.X) {
                for (double kk : {-1.0, 1.0, 2.0}) reports.push_back(euler_moment(cache, kk, X));
                reports.push_back(z_moment(cache, k, X));
                if (X >= 1) reports.push_back(splitting_report(cache, k, X));
                if (cache.header.mode == LMode::Full && cache.header.zero_samples != 0 && X >= 1)
                    reports.push_back(zero_route_report(cache, X));
            }
            emit_reports(reports, G.format);
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
