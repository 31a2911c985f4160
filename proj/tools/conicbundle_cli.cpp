#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "conicbundle/analytic.hpp"
#include "conicbundle/densities.hpp"
#include "conicbundle/error.hpp"
#include "conicbundle/harness.hpp"

using namespace cb;

namespace {

constexpr int exit_validation = 2;
constexpr int exit_tolerance = 3;

CubicSurfaceNF load_surface(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::Parse, "cannot read surface file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_surface_json(ss.str());
}

std::string fraction(const Rational& r) { return r.get_str(); }

int run_analyze(const std::string& file, bool lines, bool singular)
{
    CubicSurfaceNF X = load_surface(file);
    fmt::print("{}", analyze(X));
    if (lines) {
        auto found = find_rational_lines(X);
        fmt::print("rational_lines: {}\n", found.size());
        for (const auto& L : found)
            fmt::print("  line through ({}) and ({})\n", fmt::join(L.p.x, ":"), fmt::join(L.q.x, ":"));
    }
    if (singular) {
        auto pts = find_singular_points(X);
        fmt::print("singular_points_height_50: {}\n", pts.size());
        for (const auto& P : pts)
            fmt::print("  ({})\n", fmt::join(P.x, ":"));
    }
    return 0;
}

int run_count_fibre(const std::string& file, i64 s, i64 t, double B, bool dump)
{
    CubicSurfaceNF X = load_surface(file);
    FibreIndex st = FibreIndex::normalized(s, t);
    FibreConic C = fibre_conic(X, st);
    if (!dump) {
        ConicCount res = count_points(C, B);
        fmt::print("s,t,lambda,delta,B,count\n{},{},{},{},{},{}\n", st.s, st.t, C.lambda(), C.delta(), B, res.count);
        return 0;
    }
    std::vector<HeightedPoint> pts;
    count_points(C, B, [&](const HeightedPoint& hp) { pts.push_back(hp); });
    std::sort(pts.begin(), pts.end());
    fmt::print("x,y,z,height\n");
    for (const auto& hp : pts)
        fmt::print("{},{},{},{}\n", hp.point[0], hp.point[1], hp.point[2], hp.height);
    return 0;
}

int run_densities(const std::string& file, i64 s, i64 t, double tol)
{
    CubicSurfaceNF X = load_surface(file);
    FibreIndex st = FibreIndex::normalized(s, t);
    FibreConic C = fibre_conic(X, st);
    LocalDensityReport rep = peyre_constant(C, tol);
    fmt::print("fibre: ({}:{})\nlambda: {}\ndelta: {}\n", st.s, st.t, C.lambda(), C.delta());
    fmt::print("p,v_p,rho_star,sigma_p\n");
    for (const auto& bp : rep.bad_primes)
        fmt::print("{},{},{},{}\n", bp.p, bp.v, fmt::join(bp.rho, ";"), fraction(bp.sigma));
    fmt::print("sigma_inf: [{:.12Lg}, {:.12Lg}]\n", rep.sigma_inf.lo, rep.sigma_inf.hi);
    fmt::print("euler_factor: {}\n", fraction(rep.euler_factor));
    fmt::print("peyre_constant: [{:.12Lg}, {:.12Lg}]\n", rep.peyre_constant.lo, rep.peyre_constant.hi);
    return 0;
}

int run_count_surface(const std::string& file, double B, const std::string& method, double cutoff, bool allow_large,
                      bool strict_lines, const std::string& cache_dir)
{
    CubicSurfaceNF X = load_surface(file);
    CountOptions opts;
    opts.allow_large_direct = allow_large;
    opts.exclude_line_points = strict_lines;
    std::optional<ResultCache> cache;
    if (!cache_dir.empty()) {
        cache.emplace(cache_dir);
        opts.cache = &*cache;
    }
    CountRecord rec = count_surface(X, B, parse_count_method(method), cutoff > 0 ? cutoff : B, opts);
    fmt::print("{}", rec.to_text());
    return 0;
}

int run_sum_constants(const std::string& file, double x, double tol, bool strict)
{
    CubicSurfaceNF X = load_surface(file);
    SumConstants res = sum_constants(X, x, tol, strict);
    fmt::print("x: {}\nfibres: {}\nsum: [{:.12Lg}, {:.12Lg}]\nfailed_fibres: {}\n", x, res.fibres, res.total.lo,
               res.total.hi, res.failed.size());
    for (const auto& st : res.failed)
        fmt::print("  ({}:{})\n", st.s, st.t);
    return 0;
}

int run_growth(const std::string& file, const std::vector<double>& heights, double delta, const std::string& out,
               const std::string& cache_dir)
{
    CubicSurfaceNF X = load_surface(file);
    CountOptions opts;
    std::optional<ResultCache> cache;
    if (!cache_dir.empty()) {
        cache.emplace(cache_dir);
        opts.cache = &*cache;
    }
    std::string csv = growth_csv(growth_table(X, heights, delta, opts));
    if (out.empty() || out == "-") {
        fmt::print("{}", csv);
    } else {
        std::ofstream f(out);
        if (!f)
            throw Error(ErrorKind::InvalidArgument, "cannot write '" + out + "'");
        f << csv;
    }
    return 0;
}

int run_wirsing(const std::string& name, const std::string& surface, double x, std::vector<double> checkpoints,
                bool strict)
{
    std::optional<MultiplicativeFn> g;
    if (name == "squarefree-harmonic") {
        g = MultiplicativeFn::harmonic(1);
    } else if (name == "rho-delta") {
        if (surface.empty())
            throw Error(ErrorKind::InvalidArgument, "rho-delta needs --surface");
        g = final_lemma_function(load_surface(surface), strict);
    } else {
        throw Error(ErrorKind::InvalidArgument, "unknown function '" + name + "'");
    }
    WirsingReport rep = wirsing_sum(*g, x, checkpoints);
    fmt::print("x,sum,k_hat\n");
    std::vector<std::pair<double, long double>> prefix;
    for (const auto& [y, s] : rep.sums_at) {
        prefix.push_back({y, s});
        std::string k = "";
        if (prefix.size() >= 3) {
            try {
                k = fmt::format("{:.6Lf}", fit_log_power(prefix, y / 10).k);
            } catch (const Error&) {
            }
        }
        fmt::print("{},{:.15Lg},{}\n", y, s, k);
    }
    fmt::print(stderr, "k_hat={:.6Lf} c_hat={:.6Lg} shift={:.4Lf} residual={:.3Lg} a15_slope={:.6Lf} "
                       "a15_residual={:.4Lg} a16_worst_ratio={:.4Lg} a17={:.6Lg}\n",
               rep.k_hat, rep.c_hat, rep.shift, rep.fit_residual, rep.a15_slope, rep.a15_residual,
               rep.a16_worst_ratio, rep.a17_value);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"conic bundle point counts, local densities and growth experiments"};
    app.require_subcommand(1);

    std::string file, method = "fibration", out, fn, surface, cache_dir;
    i64 s = 0, t = 1;
    double B = 0, tol = 1e-4, cutoff = 0, x = 0, delta = 0.25;
    bool dump = false, allow_large = false, strict = false, lines = false, singular = false;
    std::vector<double> heights, checkpoints;

    auto* analyze_cmd = app.add_subcommand("analyze", "report forms, discriminant, factorization and invariants");
    analyze_cmd->add_option("surface", file)->required();
    analyze_cmd->add_flag("--lines", lines, "search for rational lines");
    analyze_cmd->add_flag("--singular-points", singular, "search for singular points of height <= 50");

    auto* fibre_cmd = app.add_subcommand("count-fibre", "count points on one fibre conic");
    fibre_cmd->add_option("surface", file)->required();
    fibre_cmd->add_option("--s", s)->required();
    fibre_cmd->add_option("--t", t)->required();
    fibre_cmd->add_option("--height", B)->required();
    fibre_cmd->add_flag("--dump-points", dump, "print the points as CSV");

    auto* dens_cmd = app.add_subcommand("densities", "local densities and Peyre constant of a fibre");
    dens_cmd->add_option("surface", file)->required();
    dens_cmd->add_option("--s", s)->required();
    dens_cmd->add_option("--t", t)->required();
    dens_cmd->add_option("--tol", tol, "relative tolerance of the archimedean bracket");

    auto* count_cmd = app.add_subcommand("count-surface", "count points on the surface");
    count_cmd->add_option("surface", file)->required();
    count_cmd->add_option("--height", B)->required();
    count_cmd->add_option("--method", method)->check(CLI::IsMember({"fibration", "direct"}));
    count_cmd->add_option("--cutoff", cutoff, "fibre height bound (default: the height)");
    count_cmd->add_flag("--allow-large", allow_large, "permit direct counts above B = 200");
    count_cmd->add_flag("--strict-lines", strict, "drop points on rational lines");
    count_cmd->add_option("--cache", cache_dir, "result cache directory");

    auto* sum_cmd = app.add_subcommand("sum-constants", "sum of Peyre constants over fibres of height <= x");
    sum_cmd->add_option("surface", file)->required();
    sum_cmd->add_option("--x", x)->required();
    sum_cmd->add_option("--tol", tol);
    sum_cmd->add_flag("--strict", strict, "abort on the first fibre that misses the tolerance");

    auto* growth_cmd = app.add_subcommand("growth", "growth table of fibration counts");
    growth_cmd->add_option("surface", file)->required();
    growth_cmd->add_option("--heights", heights)->required()->delimiter(',');
    growth_cmd->add_option("--delta", delta, "fibre cutoff exponent");
    growth_cmd->add_option("--out", out)->required();
    growth_cmd->add_option("--cache", cache_dir, "result cache directory");

    auto* wirsing_cmd = app.add_subcommand("wirsing-check", "partial sums of a multiplicative function");
    wirsing_cmd->add_option("--function", fn)->required()->check(
        CLI::IsMember({"squarefree-harmonic", "rho-delta"}));
    wirsing_cmd->add_option("--surface", surface);
    wirsing_cmd->add_option("--x", x)->required();
    wirsing_cmd->add_option("--checkpoints", checkpoints)->delimiter(',');
    wirsing_cmd->add_flag("--strict", strict, "coprimality to W_F instead of W0");

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze_cmd->parsed())
            return run_analyze(file, lines, singular);
        if (fibre_cmd->parsed())
            return run_count_fibre(file, s, t, B, dump);
        if (dens_cmd->parsed())
            return run_densities(file, s, t, tol);
        if (count_cmd->parsed())
            return run_count_surface(file, B, method, cutoff, allow_large, strict, cache_dir);
        if (sum_cmd->parsed())
            return run_sum_constants(file, x, tol, strict);
        if (growth_cmd->parsed())
            return run_growth(file, heights, delta, out, cache_dir);
        if (wirsing_cmd->parsed())
            return run_wirsing(fn, surface, x, checkpoints, strict);
    } catch (const ValidationError& e) {
        fmt::print(stderr, "validation failed:");
        for (auto k : e.failures())
            fmt::print(stderr, " {}", to_string(k));
        fmt::print(stderr, "\n{}\n", e.what());
        return exit_validation;
    } catch (const Error& e) {
        fmt::print(stderr, "{}\n", e.what());
        switch (e.kind()) {
        case ErrorKind::Parse:
        case ErrorKind::DegreeMismatch:
        case ErrorKind::SeparabilityFailure:
        case ErrorKind::ZeroResultant:
        case ErrorKind::DegenerateForm:
            return exit_validation;
        case ErrorKind::ToleranceNotMet:
            return exit_tolerance;
        default:
            return 1;
        }
    }
    return 1;
}
