#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ffh/hybrid.hpp"
#include "ffh/lfunction.hpp"

namespace ffh {

inline constexpr int kCacheVersion = 1;
inline constexpr const char* kOrderTag = "lex-c0-major";

// ---------------------------------------------------------------------------
// Sweep cache
// ---------------------------------------------------------------------------

struct CacheHeader {
    std::uint32_t q = 5;
    int g = 1;
    int version = kCacheVersion;
    std::string order = kOrderTag;
    LMode mode = LMode::Full;
    std::vector<int> X_list;
    int chunk = 512;
    /// Conductors per X that get the zero route (evenly spaced); -1 = all.
    int zero_samples = 128;
    double zero_tol = 1e-6;

    friend bool operator==(const CacheHeader&, const CacheHeader&) = default;
};

struct SweepCache {
    CacheHeader header;
    std::vector<LRecord> records;
    /// Per X, aligned with `records`.
    std::map<int, std::vector<HybridRecord>> hybrid;
    bool complete = false;

    std::size_t size() const noexcept { return records.size(); }
    const std::vector<HybridRecord>& at(int X) const;
};

/// Reads a cache file. Rows after the last checkpoint are ignored, so a
/// file cut off mid-write reads as its last consistent prefix.
SweepCache read_cache(const std::filesystem::path& path);
/// Writes the whole cache (header, rows, checkpoints, completeness marker).
void write_cache(const std::filesystem::path& path, const SweepCache& cache);

std::string mode_name(LMode mode);
LMode parse_mode(const std::string& text);

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

enum class ModeChoice { Auto, Full, CentralOnly };

struct SweepConfig {
    std::uint32_t q = 5;
    int g = 1;
    std::vector<int> X_list;
    /// Auto is Full for g <= 3 and CentralOnly above.
    ModeChoice mode = ModeChoice::Auto;
    int threads = 1;
    /// Empty: keep everything in memory.
    std::filesystem::path cache_path;
    int chunk = 512;
    int zero_samples = 128;
    double zero_tol = 1e-6;
    /// Test hook: return after this many chunks without completing.
    std::optional<int> stop_after_chunks;
    /// Progress and resource lines; null for silence.
    std::ostream* log = nullptr;
};

struct ResourceEstimate {
    std::uint64_t conductors = 0;
    int table_degree = 0;
    std::uint64_t table_entries = 0;
    std::uint64_t symbols_per_conductor = 0;
    double table_megabytes = 0.0;
    double cache_megabytes = 0.0;
    double seconds_single_thread = 0.0;
};

LMode resolve_mode(const SweepConfig& config);
CacheHeader header_for(const SweepConfig& config);
ResourceEstimate estimate_resources(const SweepConfig& config);
std::string describe(const ResourceEstimate& estimate);

/// Runs (or resumes, or simply loads) the sweep over all conductors of
/// degree 2g+1. The cache content is a function of the header only, not
/// of the thread count. An existing cache with a different header is a
/// ValidationError, never overwritten.
SweepCache sweep(const SweepConfig& config);

/// Index positions of the conductors that get the zero route.
std::vector<std::size_t> zero_route_sample(std::size_t n, int samples);

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct MomentReport {
    std::string kind;
    std::string label;
    std::uint32_t q = 0;
    int g = 0;
    double k = 0.0;
    int X = 0;
    /// Exact empirical value where the kind allows it.
    std::optional<QuadValue> exact;
    double empirical = 0.0;
    double prediction = 0.0;
    double ratio = 0.0;
    std::size_t sample_size = 0;
    double envelope = 0.0;
    /// Named diagnostics in insertion order (candidate constants, intervals, ...).
    std::vector<std::pair<std::string, double>> extra;
    std::vector<std::string> warnings;

    double extra_value(const std::string& name) const;
};

/// Sum in a fixed pairwise order.
double pairwise_sum(const std::vector<double>& values);

MomentReport moment(const SweepCache& cache, int k);
MomentReport twisted_moment(const SweepCache& cache, const PolyFq& l);
MomentReport euler_moment(const SweepCache& cache, double k, int X);
MomentReport z_moment(const SweepCache& cache, int k, int X);

struct BootstrapOptions {
    int resamples = 200;
    std::uint64_t seed = 0x5eed5eedULL;
    double level = 0.95;
};

/// <L^k> / (<P_X^k> <Z_X^k>) together with the empirical constant
/// kappa = <Z_X> e^gamma X / g, the candidates {1, sqrt 2, 2} and bootstrap
/// percentile intervals for both.
MomentReport splitting_report(const SweepCache& cache, int k, int X, const BootstrapOptions& boot = {});

/// sum_P chi_P(f) over the cache, exactly; the report carries the
/// normalized sum and |P_{2g+1}| or 0 as the reference.
MomentReport orthogonality(const SweepCache& cache, const PolyFq& f);

/// Conductors whose coefficients break c_{2g-n} = q^(g-n) c_n; empty for
/// central-only caches.
std::vector<std::size_t> functional_equation_audit(const SweepCache& cache);

/// Median, maximum and count of the hybrid defect over the sampled zero routes.
MomentReport zero_route_report(const SweepCache& cache, int X);

/// c = 2 - X log q / log g in the regime condition X <= (2 - c) log g / log q.
double regime_c(std::uint32_t q, int g, int X);

std::string report_csv_header();
std::string to_csv_row(const MomentReport& report);
std::string to_json(const MomentReport& report);

}  // namespace ffh
