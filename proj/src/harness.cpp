#include "ffh/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "ffh/poly_algebra.hpp"
#include "ffh/predictions.hpp"
#include "ffh/special.hpp"

namespace ffh {

namespace {

// --- small text helpers -------------------------------------------------------

std::string fmt_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_angle(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double parse_double(const std::string& s) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw ValidationError("");
        return v;
    } catch (const std::exception&) {
        throw ValidationError("bad number '" + s + "' in cache");
    }
}

int parse_int(const std::string& s) {
    try {
        std::size_t used = 0;
        int v = std::stoi(s, &used);
        if (used != s.size()) throw ValidationError("");
        return v;
    } catch (const std::exception&) {
        throw ValidationError("bad integer '" + s + "'");
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    if (s.empty()) return out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::vector<std::string> parse_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted) throw ValidationError("unterminated quote in cache row");
    out.push_back(cur);
    return out;
}

std::string join_ints(const std::vector<int>& v, char sep) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += sep;
        out += std::to_string(v[i]);
    }
    return out;
}

// --- rows -------------------------------------------------------------------

std::string l_row(const LRecord& r) {
    std::string coeffs, angles;
    for (std::size_t i = 0; i < r.coeffs.size(); ++i) coeffs += (i ? ";" : "") + std::to_string(r.coeffs[i]);
    for (std::size_t i = 0; i < r.angles.size(); ++i) angles += (i ? ";" : "") + fmt_angle(r.angles[i]);
    return "L," + csv_field(to_compact(r.conductor)) + "," + coeffs + "," +
           rational_to_string(r.central.rational_part()) + "," + rational_to_string(r.central.surd_part()) + "," +
           angles + "," + fmt_double(r.rh_defect);
}

std::string h_row(const HybridRecord& h) {
    return "H," + csv_field(to_compact(h.conductor)) + "," + std::to_string(h.X) + "," +
           rational_to_string(h.p_x_exponent.rational_part()) + "," +
           rational_to_string(h.p_x_exponent.surd_part()) + "," + fmt_double(h.p_x) + "," +
           fmt_double(h.z_quotient) + "," + fmt_double(h.z_zeros) + "," + fmt_double(h.hybrid_defect);
}

LRecord parse_l_row(const std::vector<std::string>& f, const FieldParams& field) {
    if (f.size() != 7) throw ValidationError("L row needs 7 fields");
    PolyFq p = parse_poly(f[1], field);
    LRecord r{p, (p.degree() - 1) / 2, {}, QuadValue(field.q(), parse_rational(f[3]), parse_rational(f[4])), {},
              parse_double(f[6])};
    for (const auto& c : split(f[2], ';')) r.coeffs.push_back(std::stoll(c));
    for (const auto& a : split(f[5], ';')) r.angles.push_back(parse_double(a));
    return r;
}

HybridRecord parse_h_row(const std::vector<std::string>& f, const FieldParams& field) {
    if (f.size() != 9) throw ValidationError("H row needs 9 fields");
    return HybridRecord{parse_poly(f[1], field),
                        parse_int(f[2]),
                        QuadValue(field.q(), parse_rational(f[3]), parse_rational(f[4])),
                        parse_double(f[5]),
                        parse_double(f[6]),
                        parse_double(f[7]),
                        parse_double(f[8])};
}

std::string header_text(const CacheHeader& h) {
    std::ostringstream os;
    os << "# ffh sweep cache\n"
       << "# q=" << h.q << "\n"
       << "# g=" << h.g << "\n"
       << "# version=" << h.version << "\n"
       << "# order=" << h.order << "\n"
       << "# mode=" << mode_name(h.mode) << "\n"
       << "# X=" << join_ints(h.X_list, ';') << "\n"
       << "# chunk=" << h.chunk << "\n"
       << "# zero_samples=" << h.zero_samples << "\n"
       << "# zero_tol=" << fmt_double(h.zero_tol) << "\n"
       << "# columns L=kind,conductor,coeffs,central_a,central_b,angles,rh_defect\n"
       << "# columns H=kind,conductor,X,px_exponent_a,px_exponent_b,p_x,z_quotient,z_zeros,hybrid_defect\n";
    return os.str();
}

struct Scan {
    SweepCache cache;
    std::uintmax_t committed_bytes = 0;
    bool has_header = false;
};

Scan scan_cache(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open cache " + path.string());
    Scan scan;
    auto& h = scan.cache.header;
    std::optional<FieldParams> field;
    std::vector<LRecord> pending_l;
    std::map<int, std::vector<HybridRecord>> pending_h;
    std::string line;
    std::uintmax_t offset = 0;
    bool in_header = true;
    while (std::getline(in, line)) {
        const bool terminated = !in.eof();
        offset += line.size() + (terminated ? 1 : 0);
        if (!terminated) break;  // a torn final line never counts
        if (line.rfind("# ", 0) == 0) {
            const std::string body = line.substr(2);
            const auto eq = body.find('=');
            const std::string key = eq == std::string::npos ? body : body.substr(0, eq);
            const std::string value = eq == std::string::npos ? "" : body.substr(eq + 1);
            if (key == "checkpoint n" || key == "complete rows") {
                if (!field) throw ValidationError("cache row before header in " + path.string());
                const auto n = static_cast<std::size_t>(std::stoull(value));
                for (auto& r : pending_l) scan.cache.records.push_back(std::move(r));
                for (auto& [X, rows] : pending_h)
                    for (auto& r : rows) scan.cache.hybrid[X].push_back(std::move(r));
                pending_l.clear();
                pending_h.clear();
                if (scan.cache.records.size() != n) throw ValidationError("cache row count disagrees with marker");
                scan.committed_bytes = offset;
                if (key == "complete rows") scan.cache.complete = true;
                continue;
            }
            if (!in_header) continue;
            if (key == "q") h.q = static_cast<std::uint32_t>(parse_int(value));
            else if (key == "g") h.g = parse_int(value);
            else if (key == "version") h.version = parse_int(value);
            else if (key == "order") h.order = value;
            else if (key == "mode") h.mode = parse_mode(value);
            else if (key == "X") {
                h.X_list.clear();
                for (const auto& x : split(value, ';')) h.X_list.push_back(parse_int(x));
            } else if (key == "chunk") h.chunk = parse_int(value);
            else if (key == "zero_samples") h.zero_samples = parse_int(value);
            else if (key == "zero_tol") h.zero_tol = parse_double(value);
            else if (key.rfind("columns", 0) == 0) {
                field = FieldParams(h.q);
                scan.has_header = true;
                scan.committed_bytes = offset;
                for (int X : h.X_list) scan.cache.hybrid[X];
            }
            continue;
        }
        in_header = false;
        if (!field) throw ValidationError("cache row before header in " + path.string());
        const auto fields = parse_csv_line(line);
        if (fields.empty()) continue;
        if (fields[0] == "L") {
            pending_l.push_back(parse_l_row(fields, *field));
        } else if (fields[0] == "H") {
            auto hr = parse_h_row(fields, *field);
            pending_h[hr.X].push_back(std::move(hr));
        } else {
            throw ValidationError("unknown cache row kind '" + fields[0] + "'");
        }
    }
    if (!scan.has_header) throw ValidationError("missing cache header in " + path.string());
    if (h.version != kCacheVersion) throw ValidationError("cache version " + std::to_string(h.version) + " unsupported");
    for (const auto& [X, rows] : scan.cache.hybrid)
        if (rows.size() != scan.cache.records.size())
            throw ValidationError("cache has " + std::to_string(rows.size()) + " hybrid rows for X=" +
                                  std::to_string(X));
    return scan;
}

struct ChunkResult {
    std::optional<LRecord> record;
    std::vector<HybridRecord> hybrid;
};

void append_rows(std::ostream& out, const LRecord& r, const std::vector<HybridRecord>& hs) {
    out << l_row(r) << '\n';
    for (const auto& h : hs) out << h_row(h) << '\n';
}

}  // namespace

// --- cache ------------------------------------------------------------------

const std::vector<HybridRecord>& SweepCache::at(int X) const {
    auto it = hybrid.find(X);
    if (it == hybrid.end()) throw ValidationError("no hybrid records for X=" + std::to_string(X) + " in this cache");
    return it->second;
}

std::string mode_name(LMode mode) { return mode == LMode::Full ? "full" : "central"; }

LMode parse_mode(const std::string& text) {
    if (text == "full") return LMode::Full;
    if (text == "central") return LMode::CentralOnly;
    throw ValidationError("unknown mode '" + text + "' (full|central)");
}

SweepCache read_cache(const std::filesystem::path& path) { return scan_cache(path).cache; }

void write_cache(const std::filesystem::path& path, const SweepCache& cache) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ComputationError("cannot write cache " + path.string());
    out << header_text(cache.header);
    const std::size_t chunk = static_cast<std::size_t>(std::max(cache.header.chunk, 1));
    for (std::size_t i = 0; i < cache.records.size(); ++i) {
        std::vector<HybridRecord> hs;
        for (int X : cache.header.X_list) hs.push_back(cache.at(X)[i]);
        append_rows(out, cache.records[i], hs);
        if ((i + 1) % chunk == 0 && i + 1 < cache.records.size()) out << "# checkpoint n=" << i + 1 << '\n';
    }
    out << (cache.complete ? "# complete rows=" : "# checkpoint n=") << cache.records.size() << '\n';
    if (!out) throw ComputationError("write failed for " + path.string());
}

// --- sweep ------------------------------------------------------------------

LMode resolve_mode(const SweepConfig& config) {
    switch (config.mode) {
        case ModeChoice::Full: return LMode::Full;
        case ModeChoice::CentralOnly: return LMode::CentralOnly;
        case ModeChoice::Auto: break;
    }
    return config.g <= 3 ? LMode::Full : LMode::CentralOnly;
}

CacheHeader header_for(const SweepConfig& config) {
    CacheHeader h;
    h.q = config.q;
    h.g = config.g;
    h.mode = resolve_mode(config);
    h.X_list = config.X_list;
    h.chunk = config.chunk;
    h.zero_samples = h.mode == LMode::Full ? config.zero_samples : 0;
    h.zero_tol = config.zero_tol;
    return h;
}

namespace {

void validate(const SweepConfig& c) {
    FieldParams check(c.q);
    if (c.g < 1) throw ValidationError("sweep needs g >= 1");
    if (c.threads < 1) throw ValidationError("threads must be >= 1");
    if (c.chunk < 1) throw ValidationError("chunk must be >= 1");
    if (!(c.zero_tol > 0.0)) throw ValidationError("zero tolerance must be positive");
    for (int X : c.X_list)
        if (X < 0) throw ValidationError("X must be non-negative");
    auto sorted = c.X_list;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw ValidationError("repeated X");
    checked_power(c.q, 2 * c.g + 1);
}

int table_degree(const SweepConfig& c) {
    const int top = resolve_mode(c) == LMode::Full ? 2 * c.g : c.g;
    int d = std::max(top, 1);
    for (int X : c.X_list) d = std::max(d, X);
    return d;
}

}  // namespace

ResourceEstimate estimate_resources(const SweepConfig& config) {
    validate(config);
    ResourceEstimate e;
    e.conductors = count_irreducible(config.q, 2 * config.g + 1);
    e.table_degree = table_degree(config);
    e.table_entries = (checked_power(config.q, e.table_degree + 1) - 1) / (config.q - 1);
    for (int d = 1; d <= e.table_degree; ++d) e.symbols_per_conductor += count_irreducible(config.q, d);
    e.table_megabytes = (8.0 + config.threads) * static_cast<double>(e.table_entries) / 1e6;
    const bool full = resolve_mode(config) == LMode::Full;
    const double row_bytes = 60.0 + 8.0 * config.g * (full ? 4 : 1) + 90.0 * config.X_list.size();
    e.cache_megabytes = row_bytes * static_cast<double>(e.conductors) / 1e6;
    // Rough per-operation costs measured on a desktop core.
    const double per_symbol = 0.15e-6 * (2 * config.g + 1);
    double per_conductor = 30e-6 + per_symbol * static_cast<double>(e.symbols_per_conductor) +
                           20e-6 * config.X_list.size() + 2e-6 * static_cast<double>(e.table_entries) / 1000.0;
    double seconds = per_conductor * static_cast<double>(e.conductors);
    if (full) {
        const double samples = config.zero_samples < 0 ? static_cast<double>(e.conductors)
                                                       : std::min<double>(config.zero_samples, e.conductors);
        const double per_route = 0.012 * config.g * (1.0 - std::log10(config.zero_tol) / 6.0) / 2.0;
        for (int X : config.X_list)
            if (X >= 1) seconds += samples * per_route;
    }
    e.seconds_single_thread = seconds;
    return e;
}

std::string describe(const ResourceEstimate& e) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "conductors=%llu table_degree=%d table_entries=%llu symbols/conductor=%llu table~%.1fMB "
                  "cache~%.1fMB time~%.0fs (1 thread)",
                  static_cast<unsigned long long>(e.conductors), e.table_degree,
                  static_cast<unsigned long long>(e.table_entries),
                  static_cast<unsigned long long>(e.symbols_per_conductor), e.table_megabytes, e.cache_megabytes,
                  e.seconds_single_thread);
    return buf;
}

std::vector<std::size_t> zero_route_sample(std::size_t n, int samples) {
    std::vector<std::size_t> out;
    if (samples == 0 || n == 0) return out;
    if (samples < 0 || static_cast<std::size_t>(samples) >= n) {
        out.resize(n);
        std::iota(out.begin(), out.end(), std::size_t{0});
        return out;
    }
    for (std::size_t i = 0; i < static_cast<std::size_t>(samples); ++i) out.push_back(i * n / static_cast<std::size_t>(samples));
    return out;
}

SweepCache sweep(const SweepConfig& config) {
    validate(config);
    const CacheHeader header = header_for(config);
    const FieldParams field(config.q);
    const int degree = 2 * config.g + 1;
    const auto expected = count_irreducible(config.q, degree);

    if (config.log) *config.log << "sweep q=" << config.q << " g=" << config.g << " mode=" << mode_name(header.mode)
                                << ": " << describe(estimate_resources(config)) << '\n';

    SweepCache cache;
    cache.header = header;
    for (int X : header.X_list) cache.hybrid[X];
    std::ofstream out;
    const bool to_file = !config.cache_path.empty();
    if (to_file && std::filesystem::exists(config.cache_path)) {
        Scan scan = scan_cache(config.cache_path);
        if (!(scan.cache.header == header))
            throw ValidationError("cache " + config.cache_path.string() +
                                  " was written with different parameters; remove it or pick another path");
        if (scan.cache.complete) {
            if (config.log) *config.log << "cache complete, " << scan.cache.size() << " rows\n";
            return std::move(scan.cache);
        }
        std::filesystem::resize_file(config.cache_path, scan.committed_bytes);
        cache = std::move(scan.cache);
        if (config.log) *config.log << "resuming after " << cache.size() << " rows\n";
        out.open(config.cache_path, std::ios::binary | std::ios::app);
    } else if (to_file) {
        if (config.cache_path.has_parent_path()) std::filesystem::create_directories(config.cache_path.parent_path());
        out.open(config.cache_path, std::ios::binary | std::ios::trunc);
        out << header_text(header);
    }
    if (to_file && !out) throw ComputationError("cannot write cache " + config.cache_path.string());

    const auto conductors = enumerate_irreducible(field, degree);
    if (conductors.size() != expected) throw ComputationError("irreducible enumeration disagrees with the count");
    const int D = table_degree(config);
    auto factors = std::make_shared<const FactorTable>(field, D);
    std::map<int, BumpWeight> bumps;
    const auto samples = zero_route_sample(conductors.size(), header.zero_samples);
    if (header.mode == LMode::Full && !samples.empty())
        for (int X : header.X_list)
            if (X >= 1) bumps.emplace(X, BumpWeight(config.q, X));
    const ZeroRouteOptions zopts{header.zero_tol};

    std::size_t next = cache.size();
    int chunks_done = 0;
    const std::size_t chunk = static_cast<std::size_t>(header.chunk);
    const std::size_t report_every = std::max<std::size_t>(1, conductors.size() / chunk / 10);
    while (next < conductors.size()) {
        const std::size_t end = std::min(conductors.size(), next + chunk);
        std::vector<ChunkResult> results(end - next);
        std::atomic<std::size_t> cursor{next};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto work = [&] {
            try {
                for (std::size_t i = cursor++; i < end; i = cursor++) {
                    const Conductor cond(conductors[i]);
                    const CharTable table(cond, D, factors);
                    auto& slot = results[i - next];
                    slot.record = compute_lrecord(table, header.mode);
                    const bool sampled = std::binary_search(samples.begin(), samples.end(), i);
                    for (int X : header.X_list) {
                        const BumpWeight* bump = nullptr;
                        if (sampled) {
                            auto it = bumps.find(X);
                            if (it != bumps.end()) bump = &it->second;
                        }
                        slot.hybrid.push_back(compute_hybrid(table, *slot.record, X, bump, zopts));
                    }
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                cursor = end;
            }
        };
        const int workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(config.threads), end - next));
        std::vector<std::thread> pool;
        for (int t = 1; t < workers; ++t) pool.emplace_back(work);
        work();
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);

        for (auto& r : results) {
            if (to_file) append_rows(out, *r.record, r.hybrid);
            for (std::size_t x = 0; x < header.X_list.size(); ++x)
                cache.hybrid[header.X_list[x]].push_back(std::move(r.hybrid[x]));
            cache.records.push_back(std::move(*r.record));
        }
        next = end;
        ++chunks_done;
        if (to_file) {
            out << (next == conductors.size() ? "# complete rows=" : "# checkpoint n=") << next << '\n';
            out.flush();
            if (!out) throw ComputationError("write failed for " + config.cache_path.string());
        }
        if (config.log && (static_cast<std::size_t>(chunks_done) % report_every == 0 || next == conductors.size()))
            *config.log << "  " << next << "/" << conductors.size() << " conductors\n";
        if (config.stop_after_chunks && chunks_done >= *config.stop_after_chunks && next < conductors.size())
            return cache;
    }
    cache.complete = true;
    return cache;
}

// --- reports ----------------------------------------------------------------

double MomentReport::extra_value(const std::string& name) const {
    for (const auto& [key, value] : extra)
        if (key == name) return value;
    throw ValidationError("report has no field '" + name + "'");
}

double pairwise_sum(const std::vector<double>& values) {
    auto rec = [&](auto&& self, std::size_t lo, std::size_t hi) -> double {
        if (hi - lo <= 8) {
            double s = 0.0;
            for (std::size_t i = lo; i < hi; ++i) s += values[i];
            return s;
        }
        const std::size_t mid = lo + (hi - lo) / 2;
        return self(self, lo, mid) + self(self, mid, hi);
    };
    return rec(rec, 0, values.size());
}

namespace {

void require_complete(const SweepCache& cache) {
    if (!cache.complete) throw ValidationError("cache is incomplete; finish the sweep first");
    if (cache.records.empty()) throw ValidationError("empty cache");
}

MomentReport base_report(const SweepCache& cache, std::string kind, double k, int X) {
    MomentReport r;
    r.kind = std::move(kind);
    r.q = cache.header.q;
    r.g = cache.header.g;
    r.k = k;
    r.X = X;
    r.sample_size = cache.size();
    return r;
}

void finish_ratio(MomentReport& r) { r.ratio = r.prediction != 0.0 ? r.empirical / r.prediction : std::nan(""); }

void add_regime(MomentReport& r) {
    if (r.X < 1) return;
    const double c = regime_c(r.q, r.g, r.X);
    r.extra.emplace_back("regime_c", c);
    if (!(c > 0.0)) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "X=%d is outside X <= (2-c) log g / log q for every c > 0 (c = %.4f)", r.X, c);
        r.warnings.emplace_back(buf);
    }
}

std::vector<double> powered(const std::vector<double>& v, double k) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = k == 1.0 ? v[i] : std::pow(v[i], k);
    return out;
}

double mean(const std::vector<double>& v) { return pairwise_sum(v) / static_cast<double>(v.size()); }

std::pair<double, double> percentile_interval(std::vector<double> v, double level) {
    std::sort(v.begin(), v.end());
    const double lo_q = 0.5 * (1.0 - level), hi_q = 1.0 - lo_q;
    auto at = [&](double p) {
        const double pos = p * static_cast<double>(v.size() - 1);
        const auto i = static_cast<std::size_t>(std::floor(pos));
        const double frac = pos - static_cast<double>(i);
        return i + 1 < v.size() ? v[i] * (1 - frac) + v[i + 1] * frac : v[i];
    };
    return {at(lo_q), at(hi_q)};
}

}  // namespace

double regime_c(std::uint32_t q, int g, int X) {
    if (g < 2) return -std::numeric_limits<double>::infinity();
    return 2.0 - X * std::log(static_cast<double>(q)) / std::log(static_cast<double>(g));
}

MomentReport moment(const SweepCache& cache, int k) {
    require_complete(cache);
    if (k < 0) throw ValidationError("moment needs k >= 0");
    const auto q = cache.header.q;
    const int g = cache.header.g;
    auto r = base_report(cache, "moment", k, 0);
    Rational a(0), b(0);
    for (const auto& rec : cache.records) {
        const QuadValue v = k == 1 ? rec.central : rec.central.pow(static_cast<unsigned>(k));
        a += v.rational_part();
        b += v.surd_part();
    }
    const Rational n(static_cast<long long>(cache.size()));
    r.exact = QuadValue(q, a / n, b / n);
    r.empirical = r.exact->to_double();
    if (k == 0) {
        r.prediction = 1.0;
    } else if (k == 1) {
        // Main term of the twisted theorem at l = 1; the leading-order conjecture is kept alongside.
        r.prediction = g + 1;
        r.envelope = std::pow(static_cast<double>(q), -0.5 * g) * g;
        r.extra.emplace_back("conjecture_leading", predicted_moment(1, q, g).value);
    } else {
        auto p = predicted_moment(k, q, g);
        r.prediction = p.value;
        r.envelope = p.tail_bound;
    }
    finish_ratio(r);
    return r;
}

MomentReport twisted_moment(const SweepCache& cache, const PolyFq& l) {
    require_complete(cache);
    if (l.field().q() != cache.header.q) throw ValidationError("twist over a different field");
    auto pred = predicted_twisted(l, cache.header.g);
    auto r = base_report(cache, "twisted", 1, 0);
    r.label = to_human(l);
    Rational a(0), b(0);
    for (const auto& rec : cache.records) {
        const int s = l.degree() == 0 ? 1 : to_int(residue_symbol(rec.conductor, l));
        if (s > 0) {
            a += rec.central.rational_part();
            b += rec.central.surd_part();
        } else if (s < 0) {
            a -= rec.central.rational_part();
            b -= rec.central.surd_part();
        }
    }
    const Rational n(static_cast<long long>(cache.size()));
    r.exact = QuadValue(cache.header.q, a / n, b / n);
    r.empirical = r.exact->to_double();
    r.prediction = pred.value;
    r.envelope = pred.tail_bound;
    const auto split = squarefree_split(l);
    r.extra.emplace_back("deg_l1", split.squarefree.degree());
    finish_ratio(r);
    return r;
}

MomentReport euler_moment(const SweepCache& cache, double k, int X) {
    require_complete(cache);
    const auto& hs = cache.at(X);
    auto r = base_report(cache, "euler_moment", k, X);
    std::vector<double> px(hs.size());
    for (std::size_t i = 0; i < hs.size(); ++i) px[i] = hs[i].p_x;
    r.empirical = mean(powered(px, k));
    if (k == 0.0 || X == 0) {
        r.prediction = 1.0;
    } else {
        auto p = predicted_euler_moment(k, cache.header.q, X);
        r.prediction = p.value;
        r.envelope = p.tail_bound;
        r.extra.emplace_back("limit_fixed_X", limiting_euler_moment(k, cache.header.q, X).value);
    }
    finish_ratio(r);
    add_regime(r);
    return r;
}

MomentReport z_moment(const SweepCache& cache, int k, int X) {
    require_complete(cache);
    if (k < 0) throw ValidationError("z_moment needs k >= 0");
    const auto& hs = cache.at(X);
    auto r = base_report(cache, "z_moment", k, X);
    std::vector<double> z(hs.size());
    for (std::size_t i = 0; i < hs.size(); ++i) z[i] = hs[i].z_quotient;
    r.empirical = mean(powered(z, k));
    if (k == 0 || X == 0) {
        r.prediction = k == 0 ? 1.0 : std::nan("");
    } else {
        const int g = cache.header.g;
        r.prediction = predicted_zx_moment(k, cache.header.q, g, X).value;
        if (k == 1) {
            const auto t = predicted_L_over_P(cache.header.q, g, X);
            r.extra.emplace_back("L_over_P_prediction", t.value);
            r.extra.emplace_back("kappa", r.empirical * std::exp(kEulerGamma) * X / g);
            r.envelope = t.tail_bound;
        }
    }
    finish_ratio(r);
    add_regime(r);
    return r;
}

MomentReport splitting_report(const SweepCache& cache, int k, int X, const BootstrapOptions& boot) {
    require_complete(cache);
    if (k < 0) throw ValidationError("splitting_report needs k >= 0");
    if (X < 1) throw ValidationError("splitting_report needs X >= 1");
    if (boot.resamples < 2 || !(boot.level > 0.0 && boot.level < 1.0)) throw ValidationError("bad bootstrap options");
    const auto& hs = cache.at(X);
    const std::size_t n = cache.size();
    const int g = cache.header.g;
    std::vector<double> L(n), P(n), Z(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double l = cache.records[i].central.to_double();
        L[i] = std::pow(l, k);
        P[i] = std::pow(hs[i].p_x, k);
        Z[i] = std::pow(hs[i].z_quotient, k);
    }
    std::vector<double> z1(n);
    for (std::size_t i = 0; i < n; ++i) z1[i] = hs[i].z_quotient;
    const double scale = std::exp(kEulerGamma) * X / g;
    auto r = base_report(cache, "splitting", k, X);
    const double mL = mean(L), mP = mean(P), mZ = mean(Z);
    r.empirical = mL / (mP * mZ);
    r.prediction = 1.0;
    finish_ratio(r);
    const double kappa = mean(z1) * scale;

    std::mt19937_64 rng(boot.seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<double> ratios, kappas;
    for (int b = 0; b < boot.resamples; ++b) {
        double sL = 0, sP = 0, sZ = 0, sZ1 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j = pick(rng);
            sL += L[j];
            sP += P[j];
            sZ += Z[j];
            sZ1 += z1[j];
        }
        const double dn = static_cast<double>(n);
        ratios.push_back((sL / dn) / ((sP / dn) * (sZ / dn)));
        kappas.push_back(sZ1 / dn * scale);
    }
    const auto [rlo, rhi] = percentile_interval(ratios, boot.level);
    const auto [klo, khi] = percentile_interval(kappas, boot.level);
    r.envelope = std::max(rhi - r.empirical, r.empirical - rlo);
    r.extra = {{"mean_L_k", mL},
               {"mean_P_k", mP},
               {"mean_Z_k", mZ},
               {"split_ci_low", rlo},
               {"split_ci_high", rhi},
               {"kappa", kappa},
               {"kappa_ci_low", klo},
               {"kappa_ci_high", khi},
               {"candidate_1", 1.0},
               {"candidate_sqrt2", std::sqrt(2.0)},
               {"candidate_2", 2.0}};
    const double cands[] = {1.0, std::sqrt(2.0), 2.0};
    const double nearest = *std::min_element(std::begin(cands), std::end(cands), [&](double a, double b) {
        return std::abs(std::log(kappa / a)) < std::abs(std::log(kappa / b));
    });
    r.extra.emplace_back("nearest_candidate", nearest);
    r.extra.emplace_back("bootstrap_resamples", boot.resamples);
    add_regime(r);
    return r;
}

MomentReport orthogonality(const SweepCache& cache, const PolyFq& f) {
    require_complete(cache);
    if (!f.is_monic()) throw ValidationError("orthogonality needs a monic f");
    if (f.field().q() != cache.header.q) throw ValidationError("f over a different field");
    std::int64_t sum = 0;
    for (const auto& rec : cache.records) sum += f.degree() == 0 ? 1 : to_int(residue_symbol(rec.conductor, f));
    auto r = base_report(cache, "orthogonality", 0, 0);
    r.label = to_human(f);
    const auto n = static_cast<long long>(cache.size());
    r.exact = QuadValue(cache.header.q, Rational(sum, n), Rational(0));
    r.empirical = r.exact->to_double();
    const bool square = f.degree() == 0 || is_square(f);
    r.prediction = square ? 1.0 : 0.0;
    r.envelope = std::pow(static_cast<double>(cache.header.q), -cache.header.g) * f.degree();
    r.extra.emplace_back("raw_sum", static_cast<double>(sum));
    r.extra.emplace_back("family_size", static_cast<double>(n));
    finish_ratio(r);
    return r;
}

std::vector<std::size_t> functional_equation_audit(const SweepCache& cache) {
    std::vector<std::size_t> bad;
    for (std::size_t i = 0; i < cache.size(); ++i) {
        const auto& rec = cache.records[i];
        if (!rec.complete()) continue;
        if (!functional_equation_violations(rec.coeffs, cache.header.q).empty()) bad.push_back(i);
    }
    return bad;
}

MomentReport zero_route_report(const SweepCache& cache, int X) {
    const auto& hs = cache.at(X);
    std::vector<double> d;
    for (const auto& h : hs)
        if (h.has_zero_route()) d.push_back(h.hybrid_defect);
    auto r = base_report(cache, "zero_route", 1, X);
    r.sample_size = d.size();
    if (d.empty()) throw ValidationError("no zero-route samples for X=" + std::to_string(X));
    std::sort(d.begin(), d.end());
    const std::size_t m = d.size() / 2;
    r.empirical = d.size() % 2 ? d[m] : 0.5 * (d[m - 1] + d[m]);
    r.prediction = 0.0;
    r.ratio = std::nan("");
    r.envelope = cache.header.zero_tol;
    r.extra.emplace_back("max_defect", d.back());
    return r;
}

std::string report_csv_header() {
    return "kind,label,q,g,k,X,empirical,prediction,ratio,sample_size,envelope,exact_a,exact_b,extra";
}

std::string to_csv_row(const MomentReport& r) {
    std::string extra;
    for (std::size_t i = 0; i < r.extra.size(); ++i)
        extra += (i ? ";" : "") + r.extra[i].first + "=" + fmt_double(r.extra[i].second);
    return r.kind + "," + csv_field(r.label) + "," + std::to_string(r.q) + "," + std::to_string(r.g) + "," +
           fmt_double(r.k) + "," + std::to_string(r.X) + "," + fmt_double(r.empirical) + "," +
           fmt_double(r.prediction) + "," + fmt_double(r.ratio) + "," + std::to_string(r.sample_size) + "," +
           fmt_double(r.envelope) + "," + (r.exact ? rational_to_string(r.exact->rational_part()) : "") + "," +
           (r.exact ? rational_to_string(r.exact->surd_part()) : "") + "," + csv_field(extra);
}

std::string to_json(const MomentReport& r) {
    nlohmann::ordered_json j;
    auto num = [](double v) -> nlohmann::ordered_json {
        if (std::isfinite(v)) return v;
        return nullptr;
    };
    j["kind"] = r.kind;
    if (!r.label.empty()) j["label"] = r.label;
    j["q"] = r.q;
    j["g"] = r.g;
    j["k"] = r.k;
    j["X"] = r.X;
    j["empirical"] = num(r.empirical);
    if (r.exact)
        j["exact"] = {{"a", rational_to_string(r.exact->rational_part())},
                      {"b", rational_to_string(r.exact->surd_part())},
                      {"pretty", r.exact->pretty()}};
    j["prediction"] = num(r.prediction);
    j["ratio"] = num(r.ratio);
    j["sample_size"] = r.sample_size;
    j["envelope"] = num(r.envelope);
    nlohmann::ordered_json extra = nlohmann::ordered_json::object();
    for (const auto& [key, value] : r.extra) extra[key] = num(value);
    j["extra"] = extra;
    if (!r.warnings.empty()) j["warnings"] = r.warnings;
    return j.dump();
}

}  // namespace ffh
