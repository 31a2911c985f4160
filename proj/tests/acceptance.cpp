// Acceptance suite: one line per criterion with the tolerance it was judged against.
// Exit status counts failures outside the documented set below.

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "conicbundle/analytic.hpp"
#include "conicbundle/densities.hpp"
#include "conicbundle/error.hpp"
#include "conicbundle/harness.hpp"

using namespace cb;

namespace {

// Known shortfalls, explained in the README.
const std::set<int> documented_failures = {7};

const long double twelve_over_pi2 = 12 / (std::numbers::pi_v<long double> * std::numbers::pi_v<long double>);

struct Outcome {
    bool pass;
    std::string detail;
};

CubicSurfaceNF load(const std::string& name)
{
    std::ifstream in(std::string(TEST_DATA_DIR) + "/" + name);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_surface_json(ss.str());
}

u64 ipow(u64 p, int d)
{
    u64 r = 1;
    while (d-- > 0)
        r *= p;
    return r;
}

// Primitive pairs mod m = p^d with q = 0, counted over every direction (1 : w) and (p u : 1).
u64 scan_rho(const FibreConic& C, u64 p, int d)
{
    u64 m = ipow(p, d);
    auto q = C.param();
    auto zero = [&](i128 u, i128 v) {
        auto w = q.eval(u, v);
        return w[0] % i128(m) == 0 && w[1] % i128(m) == 0 && w[2] % i128(m) == 0;
    };
    u64 dirs = 0;
    for (u64 w = 0; w < m; ++w)
        dirs += zero(1, i128(w));
    for (u64 u = 0; u < m; u += p)
        dirs += zero(i128(u), 1);
    return dirs * (m - m / p);
}

Outcome parameterization()
{
    std::mt19937_64 gen(20261015);
    auto draw = [&](i64 lo, i64 hi) { return std::uniform_int_distribution<i64>(lo, hi)(gen); };
    int checked = 0, bad = 0;
    while (checked < 10000) {
        i64 c[5];
        for (auto& x : c)
            x = draw(-50, 50);
        i64 u = draw(-1000, 1000), v = draw(-1000, 1000);
        if (u == 0 && v == 0)
            continue;
        std::optional<FibreConic> C;
        try {
            C.emplace(c[0], c[1], c[2], c[3], c[4], 1);
        } catch (const Error&) {
            continue;  // degenerate conic
        }
        auto w = C->param().eval(u, v);
        bad += C->Q(w[0], w[1], w[2]) != 0;
        ++checked;
    }
    return {bad == 0, fmt::format("{} conics, {} nonzero values (tolerance 0)", checked, bad)};
}

Outcome oracle_equivalence(const CubicSurfaceNF& S1)
{
    CountRecord fib = count_surface(S1, 30, CountMethod::Fibration, 30);
    CountRecord dir = count_surface(S1, 30, CountMethod::Direct, 30);
    return {fib.count == dir.count,
            fmt::format("fibration {} vs direct {} at B = 30, fibre height <= 30 (exact)", fib.count, dir.count)};
}

Outcome peyre_convergence(const CubicSurfaceNF& S1)
{
    const double B = 1e6;
    FibreConic P(1, 0, 0, -1, 0, 1);
    Bracket c0 = peyre_constant(P, 1e-4L).peyre_constant;
    long double err0 = std::fabs(c0.mid() - twelve_over_pi2);
    long double r0 = (long double)count_points(P, B).count / B;
    long double dev0 = std::fabs(r0 - twelve_over_pi2) / twelve_over_pi2;

    FibreConic C = fibre_conic(S1, {1, 1});
    Bracket c1 = peyre_constant(C, 1e-4L).peyre_constant;
    long double r1 = (long double)count_points(C, B).count / B;
    long double dev1 = std::fabs(r1 - c1.mid()) / c1.mid();

    bool pass = err0 <= 1e-3L && c0.lo <= twelve_over_pi2 && twelve_over_pi2 <= c0.hi && dev0 <= 0.02L &&
                dev1 <= 0.02L;
    return {pass, fmt::format("x^2-yz: c = [{:.6Lf}, {:.6Lf}] vs 12/pi^2 = {:.6Lf} (tol 1e-3), N/B = {:.5Lf} "
                              "({:.2Lf}% off, tol 2%); S1 (1:1): c = {:.6Lf}, N/B = {:.5Lf} ({:.2Lf}% off, tol 2%)",
                              c0.lo, c0.hi, twelve_over_pi2, r0, 100 * dev0, c1.mid(), r1, 100 * dev1)};
}

Outcome nonarch_exactness(const CubicSurfaceNF& S1)
{
    const u64 cap = 10000;
    int fibres = 0, moduli = 0, sigmas = 0, bad = 0;
    for (auto st : domain_B(S1, 20)) {
        FibreConic C = fibre_conic(S1, st);
        ++fibres;
        std::vector<PrimePower> pp = factor(C.delta()).factors;
        // unramified small primes: v = 0
        for (u64 p : {2ull, 3ull, 5ull, 7ull})
            if (C.delta() % i64(p) != 0)
                pp.push_back({p, 0});
        for (auto [p, v] : pp) {
            Rational scanned_sigma = Rational(1) - Rational(1, p * p);
            bool complete = true;
            for (int d = 1; d <= v + 2; ++d) {
                u64 exact = rho_star(C, p, d);
                if (d > v && exact != 0)
                    ++bad;
                if (d > v + 1)
                    continue;
                if (ipow(p, d) > cap) {
                    complete = complete && d > v;
                    continue;
                }
                u64 scanned = scan_rho(C, p, d);
                ++moduli;
                if (scanned != exact)
                    ++bad;
                if (d <= v)
                    scanned_sigma += (Rational(1) - Rational(1, p)) * Rational(scanned, ipow(p, d));
            }
            if (complete) {
                scanned_sigma.canonicalize();
                ++sigmas;
                if (sigma_p(C, p) != scanned_sigma)
                    ++bad;
            }
        }
    }
    return {bad == 0, fmt::format("{} fibres, {} prime powers <= 10^4 scanned, {} sigma_p compared, {} mismatches "
                                  "(tolerance 0)",
                                  fibres, moduli, sigmas, bad)};
}

Outcome density_inequalities(const CubicSurfaceNF& S1)
{
    long double floor = archimedean_floor(S1);
    long double observed = INFINITY;
    int fibres = 0, bad = 0;
    for (auto st : domain_B(S1, 20)) {
        FibreConic C = fibre_conic(S1, st);
        long double H = (long double)st.height();
        long double v = sigma_inf(C, 1e-4L).hi * H * H;
        observed = std::min(observed, v);
        bad += v < floor;
        NonarchCheck nc = nonarch_lower_bound_check(C, S1.W0(), 1e9);
        bad += !nc.holds || nc.lhs < nc.rhs;
        ++fibres;
    }
    return {bad == 0 && floor > 0,
            fmt::format("{} fibres; sigma_inf H^2 >= {:.4Lf} (observed min {:.4Lf}); non-archimedean inequality; "
                        "{} violations (tolerance 0)",
                        fibres, floor, observed, bad)};
}

Outcome wirsing_engine(const CubicSurfaceNF& S1, const CubicSurfaceNF& split)
{
    WirsingReport h = wirsing_sum(MultiplicativeFn::harmonic(1), 1e7, {1e6, 1e7});
    long double slope = (h.sums_at[1].second - h.sums_at[0].second) / std::log(10.0L);
    long double target = 6 / (std::numbers::pi_v<long double> * std::numbers::pi_v<long double>);
    long double dev = std::fabs(slope - target) / target;

    int primes = 0, bad = 0;
    for (const auto* X : {&S1, &split}) {
        DeltaFactorData data = delta_factor_data(*X);
        for (u64 p : shared_sieve(97).primes_upto(97)) {
            if (mpz_divisible_ui_p(data.W_F.get_mpz_t(), p))
                continue;
            u64 scanned = 0;
            for (u64 s = 0; s < p; ++s)
                for (u64 t = 0; t < p; ++t)
                    scanned += (s != 0 || t != 0) && X->delta().eval_mod(s, t, p) == 0;
            u64 sum = 0;
            for (const auto& di : data.delta_i)
                sum += tau(di, p);
            bad += scanned != (p - 1) * sum;
            ++primes;
        }
    }
    return {dev <= 0.02L && bad == 0,
            fmt::format("slope {:.5Lf} vs 6/pi^2 = {:.5Lf} ({:.2Lf}% off, tol 2%); prime identity on {} (surface, p) "
                        "pairs, {} mismatches",
                        slope, target, 100 * dev, primes, bad)};
}

Outcome growth_exponent(const CubicSurfaceNF& S1, const CubicSurfaceNF& split)
{
    std::string detail;
    bool pass = true;
    for (auto [name, X, x] : {std::tuple{"S1", &S1, 1e7}, {"split", &split, 1e8}}) {
        WirsingReport rep = wirsing_sum(final_lemma_function(*X, false), x, {});
        int r = X->r();
        bool ok = std::fabs(rep.k_hat - r) <= 0.3L;
        pass = pass && ok;
        detail += fmt::format("{}{}: k_hat = {:.3Lf} at x = {:.0e}, r = {} (tol 0.3){}", detail.empty() ? "" : "; ",
                              name, rep.k_hat, x, r, ok ? "" : " [out of range]");
    }
    return {pass, detail};
}

Outcome mertens()
{
    const double x = 1e7;
    long double m = tau_statistics(IntPoly{0, 1}, x).sum_over_p - std::log(std::log((long double)x));
    return {m >= 0.2515L && m <= 0.2715L, fmt::format("sum 1/p - log log x = {:.6Lf} at x = 1e7, window "
                                                      "[0.2515, 0.2715]",
                                                      m)};
}

Outcome growth_order(const CubicSurfaceNF& S1)
{
    auto rows = growth_table(S1, {1e3, 1e4, 1e5, 1e6}, 0.25);
    long double lo = INFINITY, hi = 0;
    std::string cols;
    for (const auto& r : rows) {
        lo = std::min(lo, r.normalized);
        hi = std::max(hi, r.normalized);
        cols += fmt::format("{}{:.4Lf}", cols.empty() ? "" : " ", r.normalized);
    }
    return {lo > 0 && hi <= 3 * lo,
            fmt::format("normalized column [{}], min > 0 and max/min = {:.3Lf} (limit 3)", cols, hi / lo)};
}

} // namespace

int main()
{
    CubicSurfaceNF S1 = load("s1.json"), split = load("split.json");

    struct Criterion {
        int id;
        std::string name;
        double budget_s;
        std::function<Outcome()> run;
    };
    std::vector<Criterion> all = {
        {1, "parameterization identity", 1, parameterization},
        {2, "fibration = direct count", 120, [&] { return oracle_equivalence(S1); }},
        {3, "Peyre constant convergence", 600, [&] { return peyre_convergence(S1); }},
        {4, "non-archimedean exactness", 600, [&] { return nonarch_exactness(S1); }},
        {5, "density inequalities", 600, [&] { return density_inequalities(S1); }},
        {6, "Wirsing engine", 60, [&] { return wirsing_engine(S1, split); }},
        {7, "growth exponent", 600, [&] { return growth_exponent(S1, split); }},
        {8, "Mertens checkpoint", 60, mertens},
        {9, "growth order (lower-bound order)", 1800, [&] { return growth_order(S1); }},
    };

    int unexpected = 0;
    for (const auto& c : all) {
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, fmt::format("threw: {}", e.what())};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool in_time = secs <= c.budget_s;
        bool pass = o.pass && in_time;
        bool known = documented_failures.count(c.id) > 0;
        if (!pass && !known)
            ++unexpected;
        fmt::print("[{}] {}. {}: {}; {:.2f} s (budget {} s){}\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail, secs,
                   c.budget_s, !pass && known ? " [documented shortfall]" : "");
        std::fflush(stdout);
    }
    fmt::print("{} unexpected failure(s)\n", unexpected);
    return unexpected == 0 ? 0 : 1;
}
