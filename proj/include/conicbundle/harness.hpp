#pragma once

// Experiment orchestration: surface reports, fibre-wise surface counts,
// sums of Peyre constants, growth tables and a plain-text result cache.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "conicbundle/densities.hpp"
#include "conicbundle/surface.hpp"

namespace cb {

enum class CountMethod { Fibration, Direct };

std::string to_string(CountMethod m);
CountMethod parse_count_method(const std::string& s);

struct CountRecord {
    std::string surface_id;
    double B = 0;
    CountMethod method = CountMethod::Fibration;
    double x_cutoff = 0;
    u64 count = 0;
    u64 excluded_singular_fibres = 0;
    u64 excluded_line_points = 0;
    i64 runtime_ms = 0;

    std::string to_text() const;
    static CountRecord from_text(const std::string& text);
    /// equality ignoring runtime
    bool same_result(const CountRecord& o) const;
};

/// Content-addressed directory of plain-text records.
class ResultCache {
public:
    explicit ResultCache(std::filesystem::path dir);

    std::optional<std::string> get(const std::string& key) const;
    void put(const std::string& key, const std::string& value) const;
    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path file_for(const std::string& key) const;
    std::filesystem::path dir_;
};

struct CountOptions {
    bool allow_large_direct = false;  // lift the B <= 200 guard on direct counts
    bool exclude_line_points = false; // strict mode: drop points on found rational lines
    unsigned threads = 0;             // 0 = hardware concurrency
    const ResultCache* cache = nullptr;
};

/// fibration: sum of conic counts over domain_B(X, x_cutoff);
/// direct: enumeration in P^3 restricted to nonsingular fibres of height <= x_cutoff.
CountRecord count_surface(const CubicSurfaceNF& X, double B, CountMethod method, double x_cutoff,
                          const CountOptions& opts = {});

/// Per-fibre counts in domain order.
std::vector<std::pair<FibreIndex, u64>> fibre_counts(const CubicSurfaceNF& X, double B, double x_cutoff,
                                                     unsigned threads = 0);

struct SumConstants {
    Bracket total;
    size_t fibres = 0;
    std::vector<FibreIndex> failed;
};

/// sum of Peyre constants over domain_B(X, x); failing fibres are listed, or rethrown when strict
SumConstants sum_constants(const CubicSurfaceNF& X, double x, long double rel_tol = 1e-4L, bool strict = false,
                           unsigned threads = 0);

struct GrowthRow {
    double B;
    double x_cutoff;
    u64 N;
    int rho;
    long double normalized;  // N / (B (log B)^(rho - 1))
};

std::vector<GrowthRow> growth_table(const CubicSurfaceNF& X, const std::vector<double>& Bs, double delta = 0.25,
                                    const CountOptions& opts = {});
std::string growth_csv(const std::vector<GrowthRow>& rows);

/// Structured text report of the surface.
std::string analyze(const CubicSurfaceNF& X);

} // namespace cb
