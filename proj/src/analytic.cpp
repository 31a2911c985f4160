#include "conicbundle/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "conicbundle/error.hpp"
#include "conicbundle/polymod.hpp"

namespace cb {

namespace {

constexpr u64 direction_scan_limit = 1000;

bool divides(const BigInt& n, u64 p) { return mpz_divisible_ui_p(n.get_mpz_t(), p) != 0; }

u64 gcd_fast(u64 a, u64 b)
{
    if (a == 0)
        return b;
    if (b == 0)
        return a;
    int shift = __builtin_ctzll(a | b);
    a >>= __builtin_ctzll(a);
    do {
        b >>= __builtin_ctzll(b);
        if (a > b)
            std::swap(a, b);
        b -= a;
    } while (b);
    return a << shift;
}

std::vector<double> normalized_checkpoints(std::vector<double> cps, double x)
{
    if (cps.empty()) {
        for (double e = 1; std::pow(10.0, e) < x; e += 0.25)
            cps.push_back(std::round(std::pow(10.0, e)));
    }
    cps.push_back(x);
    std::sort(cps.begin(), cps.end());
    cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
    cps.erase(std::remove_if(cps.begin(), cps.end(), [&](double c) { return c < 1 || c > x; }), cps.end());
    return cps;
}

// least squares y = slope * x + icpt
std::pair<long double, long double> linear_fit(const std::vector<long double>& xs, const std::vector<long double>& ys)
{
    long double n = (long double)xs.size(), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    long double den = n * sxx - sx * sx;
    if (den == 0)
        return {0, n > 0 ? sy / n : 0};
    long double slope = (n * sxy - sx * sy) / den;
    return {slope, (sy - slope * sx) / n};
}

} // namespace

DeltaFactorData delta_factor_data(const CubicSurfaceNF& X)
{
    DeltaFactorData out;
    const auto& fac = X.delta_factorization();
    for (const auto& [g, m] : fac.factors)
        out.delta_i.push_back(g);
    BigInt prod_res = 1, prod_a = 1;
    for (size_t i = 0; i < out.delta_i.size(); ++i) {
        i64 ai = out.delta_i[i].coeff(0);
        out.a_i.push_back(ai != 0 ? ai : 1);
        prod_a *= BigInt((long)out.a_i.back());
        for (size_t j = 0; j < out.delta_i.size(); ++j)
            if (i != j)
                prod_res *= resultant(out.delta_i[i], out.delta_i[j]);
    }
    out.W_F_without_content = X.W0() * prod_res * prod_a;
    BigInt content = fac.content.get_num();
    if (fac.content.get_den() != 1)
        throw Error(ErrorKind::InvalidArgument, "discriminant content is not integral");
    out.W_F = content * out.W_F_without_content;
    BigInt c = abs(content);
    if (c.fits_ulong_p()) {
        for (auto [p, e] : factor_u64(c.get_ui()))
            if (!divides(out.W_F_without_content, p))
                out.flagged_primes.push_back(p);
    }
    return out;
}

u64 tau(const BinaryForm& delta_i, u64 p)
{
    if (delta_i.coeff(0) == 0)
        return 1;
    fp::Poly g = fp::reduce(delta_i.dehomogenize(), p);
    if (g.empty())
        return p;
    return fp::distinct_root_count(g, p);
}

u64 varrho_star_delta_prime(const BinaryForm& delta, u64 p)
{
    u64 roots = 0;
    if (p <= direction_scan_limit) {
        for (u64 x = 0; x < p; ++x)
            roots += delta.eval_mod(x, 1, p) == 0;
        roots += delta.eval_mod(1, 0, p) == 0;
    } else {
        fp::Poly g = fp::reduce(delta.dehomogenize(), p);
        if (g.empty())
            roots = p;
        else
            roots = fp::distinct_root_count(g, p);
        roots += mod_i64(delta.coeff(0), p) == 0;
    }
    return (p - 1) * roots;
}

u64 varrho_star_delta(const CubicSurfaceNF& X, u64 a)
{
    if (a == 0)
        throw Error(ErrorKind::InvalidArgument, "modulus must be positive");
    u64 r = 1;
    for (auto [p, e] : factor_u64(a)) {
        if (e > 1)
            throw Error(ErrorKind::InvalidArgument, "modulus must be squarefree");
        r *= varrho_star_delta_prime(X.delta(), p);
    }
    return r;
}

TauStatistics tau_statistics(const IntPoly& delta, double x)
{
    const PrimeSieve& sieve = shared_sieve(u64(x));
    CompensatedSum s1, s2;
    IntPoly d = delta;
    while (!d.empty() && d.back() == 0)
        d.pop_back();
    if (d.empty())
        throw Error(ErrorKind::ZeroForm, "tau statistics of the zero polynomial");
    for (u64 p : sieve.primes_upto(u64(x))) {
        u64 t;
        if (d.size() == 2) {
            if (mod_i64(d[1], p) != 0)
                t = 1;
            else
                t = mod_i64(d[0], p) == 0 ? p : 0;
        } else {
            fp::Poly g = fp::reduce(d, p);
            t = g.empty() ? p : fp::distinct_root_count(g, p);
        }
        if (t == 0)
            continue;
        long double lp = std::log((long double)p);
        s1.add((long double)t / (long double)p);
        s2.add((long double)t * lp / (long double)p);
    }
    return {s1.value(), s2.value()};
}

TauStatistics tau_statistics(const BinaryForm& delta_i, double x)
{
    if (delta_i.coeff(0) == 0)
        return tau_statistics(IntPoly{0, 1}, x);
    return tau_statistics(delta_i.dehomogenize(), x);
}

ExponentFit fit_log_power(const std::vector<std::pair<double, long double>>& sums, double from_x)
{
    std::vector<long double> ly, ls;
    for (auto [y, s] : sums)
        if (y >= from_x && y > 1 && s > 0) {
            ly.push_back(std::log((long double)y));
            ls.push_back(std::log(s));
        }
    if (ly.size() < 3)
        throw Error(ErrorKind::InvalidArgument, "exponent fit needs at least three checkpoints");
    auto fit_at = [&](long double h, ExponentFit& out) {
        std::vector<long double> xs;
        for (auto l : ly)
            xs.push_back(std::log(l + h));
        auto [k, icpt] = linear_fit(xs, ls);
        long double res = 0, sq = 0;
        for (size_t i = 0; i < xs.size(); ++i) {
            long double r = ls[i] - (k * xs[i] + icpt);
            res = std::max(res, std::fabs(r));
            sq += r * r;
        }
        out = {k, std::exp(icpt), h, res};
        return sq;
    };
    // the shift absorbs the secondary term of S ~ c (log y)^k (1 + c'/log y)
    long double hmin = -0.9L * ly.front(), hmax = 20;
    long double best_h = 0;
    ExponentFit best{}, cur{};
    long double best_sq = fit_at(0, best);
    const int grid = 400;
    for (int i = 0; i <= grid; ++i) {
        long double h = hmin + (hmax - hmin) * i / grid;
        long double sq = fit_at(h, cur);
        if (sq < best_sq) {
            best_sq = sq;
            best = cur;
            best_h = h;
        }
    }
    long double lo = std::max(hmin, best_h - (hmax - hmin) / grid), hi = std::min(hmax, best_h + (hmax - hmin) / grid);
    for (int it = 0; it < 100; ++it) {
        long double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
        ExponentFit f1{}, f2{};
        if (fit_at(m1, f1) < fit_at(m2, f2))
            hi = m2;
        else
            lo = m1;
    }
    long double sq = fit_at((lo + hi) / 2, cur);
    if (sq < best_sq)
        best = cur;
    return best;
}

WirsingReport wirsing_sum(const MultiplicativeFn& g, double x, std::vector<double> checkpoints,
                          const WirsingOptions& opts)
{
    if (!(x >= 1))
        throw Error(ErrorKind::InvalidArgument, "wirsing_sum needs x >= 1");
    if (opts.exact && x > 1e6)
        throw Error(ErrorKind::InvalidArgument, "exact partial sums are limited to x <= 10^6");
    WirsingReport rep;
    std::vector<double> cps = normalized_checkpoints(std::move(checkpoints), x);
    u64 X = u64(std::floor(x));
    const PrimeSieve& sieve = shared_sieve(X);
    auto primes = sieve.primes_upto(X);

    std::vector<long double> gp(primes.size());
    std::vector<Rational> gq(opts.exact ? primes.size() : 0);
    for (size_t i = 0; i < primes.size(); ++i) {
        u64 p = primes[i];
        if (opts.coprime_to && divides(*opts.coprime_to, p))
            continue;
        gp[i] = g.at_prime(p);
        if (opts.exact)
            gq[i] = g.exact_at_prime(p);
    }

    std::vector<u64> bounds;
    for (double c : cps)
        bounds.push_back(u64(std::floor(c)));
    std::vector<CompensatedSum> bucket(bounds.size());
    std::vector<Rational> qbucket(opts.exact ? bounds.size() : 0);
    auto slot = [&](u64 n) { return size_t(std::lower_bound(bounds.begin(), bounds.end(), n) - bounds.begin()); };

    auto dfs = [&](auto&& self, size_t start, u64 n, long double v, const Rational* q) -> void {
        size_t k = slot(n);
        bucket[k].add(v);
        if (q)
            qbucket[k] += *q;
        for (size_t i = start; i < primes.size(); ++i) {
            u64 p = primes[i];
            if (n > X / p)
                break;
            if (gp[i] == 0 && (!opts.exact || gq[i] == 0))
                continue;
            if (q) {
                Rational nq = *q * gq[i];
                self(self, i + 1, n * p, v * gp[i], &nq);
            } else {
                self(self, i + 1, n * p, v * gp[i], nullptr);
            }
        }
    };
    Rational one = 1;
    dfs(dfs, 0, 1, 1.0L, opts.exact ? &one : nullptr);

    CompensatedSum running;
    Rational qrunning = 0;
    for (size_t k = 0; k < bounds.size(); ++k) {
        running.add(bucket[k].value());
        rep.sums_at.emplace_back(cps[k], running.value());
        if (opts.exact) {
            qrunning += qbucket[k];
            qrunning.canonicalize();
            rep.exact_sums_at.emplace_back(cps[k], qrunning);
        }
    }

    // exponent over the top decade
    try {
        ExponentFit fit = fit_log_power(rep.sums_at, x / 10);
        rep.k_hat = fit.k;
        rep.c_hat = fit.c;
        rep.shift = fit.h;
        rep.fit_residual = fit.residual;
    } catch (const Error&) {
    }

    // prime-sum diagnostics at the checkpoints
    std::vector<long double> P(bounds.size()), L(bounds.size());
    CompensatedSum ps, ls, sq;
    size_t k = 0;
    for (size_t i = 0; i < primes.size(); ++i) {
        u64 p = primes[i];
        while (k < bounds.size() && bounds[k] < p) {
            P[k] = ps.value();
            L[k] = ls.value();
            ++k;
        }
        long double lp = std::log((long double)p);
        ps.add(gp[i] * lp);
        ls.add(std::log1p(std::fabs(gp[i])));
        sq.add(gp[i] * gp[i] * lp);
    }
    for (; k < bounds.size(); ++k) {
        P[k] = ps.value();
        L[k] = ls.value();
    }
    rep.a17_value = sq.value();
    std::vector<long double> xs, ys;
    for (size_t j = 0; j < bounds.size(); ++j)
        if (bounds[j] >= 2) {
            xs.push_back(std::log((long double)bounds[j]));
            ys.push_back(P[j]);
        }
    if (xs.size() >= 2) {
        auto [slope, icpt] = linear_fit(xs, ys);
        rep.a15_slope = slope;
        for (size_t j = 0; j < xs.size(); ++j)
            rep.a15_residual = std::max(rep.a15_residual, std::fabs(ys[j] - slope * xs[j] - icpt));
        long double kk = std::fabs(slope);
        for (size_t w = 0; w < bounds.size(); ++w)
            for (size_t z = w + 1; z < bounds.size(); ++z) {
                if (bounds[w] < 2)
                    continue;
                long double lw = std::log((long double)bounds[w]), lz = std::log((long double)bounds[z]);
                long double ratio = std::exp(L[z] - L[w] - kk * std::log(lz / lw));
                rep.a16_worst_ratio = std::max(rep.a16_worst_ratio, ratio);
            }
    }
    return rep;
}

MultiplicativeFn final_lemma_function(const CubicSurfaceNF& X, bool strict)
{
    BigInt modulus = strict ? delta_factor_data(X).W_F : X.W0();
    BinaryForm delta = X.delta();
    auto excluded = [modulus](u64 p) { return divides(modulus, p); };
    return MultiplicativeFn(
        [delta, excluded](u64 p) -> long double {
            if (excluded(p))
                return 0;
            long double pp = (long double)p;
            return (long double)varrho_star_delta_prime(delta, p) * (pp - 1) * (pp - 1) / (pp * pp * pp * pp);
        },
        [delta, excluded](u64 p) -> Rational {
            if (excluded(p))
                return 0;
            BigInt num = BigInt((unsigned long)varrho_star_delta_prime(delta, p)) * (p - 1) * (p - 1);
            BigInt den;
            mpz_ui_pow_ui(den.get_mpz_t(), p, 4);
            Rational r(num, den);
            r.canonicalize();
            return r;
        });
}

namespace {

// smallest prime factor table over [0, n]
std::vector<std::uint32_t> spf_table(u64 n)
{
    std::vector<std::uint32_t> spf(n + 1, 0);
    for (u64 i = 2; i <= n; ++i) {
        if (spf[i] != 0)
            continue;
        for (u64 j = i; j <= n; j += i)
            if (spf[j] == 0)
                spf[j] = std::uint32_t(i);
    }
    return spf;
}

} // namespace

long double final_lemma_sum(const CubicSurfaceNF& X, double x, bool strict)
{
    if (!(x >= 1))
        throw Error(ErrorKind::InvalidArgument, "final_lemma_sum needs x >= 1");
    u64 n = u64(std::floor(x));
    BigInt modulus = strict ? delta_factor_data(X).W_F : X.W0();
    auto spf = spf_table(n);
    std::vector<long double> gp(n + 1, -1);
    CompensatedSum sum;
    for (u64 a = 1; a <= n; ++a) {
        long double term = 1;
        u64 m = a;
        while (m > 1 && term != 0) {
            u64 p = spf[m];
            m /= p;
            if (m % p == 0) {
                term = 0;
                break;
            }
            if (gp[p] < 0) {
                if (divides(modulus, p)) {
                    gp[p] = 0;
                } else {
                    long double pp = (long double)p;
                    gp[p] = (long double)varrho_star_delta_prime(X.delta(), p) * (pp - 1) * (pp - 1) /
                            (pp * pp * pp * pp);
                }
            }
            term *= gp[p];
        }
        if (term != 0)
            sum.add(term);
    }
    return sum.value();
}

Rational final_lemma_sum_exact(const CubicSurfaceNF& X, double x, bool strict)
{
    if (!(x >= 1) || x > 1e6)
        throw Error(ErrorKind::InvalidArgument, "exact final-lemma sum needs 1 <= x <= 10^6");
    u64 n = u64(std::floor(x));
    BigInt modulus = strict ? delta_factor_data(X).W_F : X.W0();
    Rational sum = 0;
    for (u64 a = 1; a <= n; ++a) {
        if (!is_squarefree(a))
            continue;
        BigInt g;
        mpz_gcd_ui(g.get_mpz_t(), modulus.get_mpz_t(), a);
        if (g != 1)
            continue;
        BigInt phi((unsigned long)euler_phi(a));
        BigInt a4;
        mpz_ui_pow_ui(a4.get_mpz_t(), a, 4);
        sum += Rational(BigInt((unsigned long)varrho_star_delta(X, a)) * phi * phi, a4);
    }
    sum.canonicalize();
    return sum;
}

namespace {

template <class Acc>
void for_each_G_term(const CubicSurfaceNF& X, i64 sigma, i64 tau_, u64 a, double x, Acc&& acc)
{
    if (a == 0)
        throw Error(ErrorKind::InvalidArgument, "modulus must be positive");
    if (gcd_u64(gcd_u64(abs_u64(sigma), abs_u64(tau_)), a) != 1)
        throw Error(ErrorKind::InvalidArgument, "gcd(sigma, tau, a) must be 1");
    i64 n = i64(std::floor(x));
    auto roots = rational_roots(X.delta_factorization());
    i64 ai = i64(a);
    i64 s0 = i64(mod_i64(sigma, a)), t0 = i64(mod_i64(tau_, a));
    if (s0 == 0)
        s0 = ai;
    std::vector<u64> count(size_t(n + 1), 0);
    i64 tstart = -n + i64(mod_i64(t0 + n, a));
    for (i64 s = s0; s <= n; s += ai) {
        for (i64 t = tstart; t <= n; t += ai) {
            if (gcd_fast(u64(s), abs_u64(t)) != 1)
                continue;
            ++count[size_t(std::max(s, std::abs(t)))];
        }
    }
    // coprime pairs on singular fibres, s > 0
    for (auto [rs, rt] : roots) {
        if (rs <= 0 || std::max(rs, std::abs(rt)) > n)
            continue;
        if (mod_i64(rs - s0, a) == 0 && mod_i64(rt - t0, a) == 0)
            --count[size_t(std::max(rs, std::abs(rt)))];
    }
    for (i64 h = 1; h <= n; ++h)
        if (count[size_t(h)])
            acc(h, count[size_t(h)]);
}

} // namespace

Rational G_sum_exact(const CubicSurfaceNF& X, i64 sigma, i64 tau_, u64 a, double x)
{
    Rational sum = 0;
    for_each_G_term(X, sigma, tau_, a, x, [&](i64 h, u64 c) {
        BigInt h2 = BigInt((long)h) * h;
        sum += Rational(BigInt((unsigned long)c), h2);
    });
    sum.canonicalize();
    return sum;
}

long double G_sum(const CubicSurfaceNF& X, i64 sigma, i64 tau_, u64 a, double x)
{
    CompensatedSum sum;
    for_each_G_term(X, sigma, tau_, a, x,
                    [&](i64 h, u64 c) { sum.add((long double)c / ((long double)h * (long double)h)); });
    return sum.value();
}

} // namespace cb
