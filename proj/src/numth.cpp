#include "conicbundle/numth.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <random>

#include "conicbundle/error.hpp"
#include "conicbundle/polymod.hpp"

namespace cb {

namespace {

constexpr u64 trial_division_limit = 1'000'000;
constexpr u64 root_scan_limit = 1'000'000;

u64 pollard_brent(u64 n, u64 seed)
{
    if (n % 2 == 0)
        return 2;
    std::mt19937_64 rng(seed);
    for (;;) {
        u64 y = rng() % n, c = rng() % (n - 1) + 1, m = 128;
        u64 g = 1, r = 1, q = 1, x = 0, ys = 0;
        auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
        while (g == 1) {
            x = y;
            for (u64 i = 0; i < r; ++i)
                y = f(y);
            u64 k = 0;
            while (k < r && g == 1) {
                ys = y;
                for (u64 i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                g = gcd_u64(q, n);
                k += m;
            }
            r *= 2;
        }
        if (g == n) {
            do {
                ys = f(ys);
                g = gcd_u64(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n)
            return g;
    }
}

void factor_rec(u64 n, std::vector<u64>& out, u64 seed)
{
    if (n == 1)
        return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    u64 d = pollard_brent(n, seed);
    factor_rec(d, out, seed + 1);
    factor_rec(n / d, out, seed + 1);
}

u64 eval_mod(const IntPoly& g, u64 x, u64 m)
{
    u64 acc = 0;
    for (auto it = g.rbegin(); it != g.rend(); ++it)
        acc = (mulmod(acc, x, m) + mod_i64(*it, m)) % m;
    return acc;
}

u64 roots_mod_prime_power(const IntPoly& g, u64 p, int k)
{
    u64 pk = 1;
    for (int i = 0; i < k; ++i)
        pk *= p;
    if (pk <= root_scan_limit) {
        u64 count = 0;
        for (u64 s = 0; s < pk; ++s)
            count += eval_mod(g, s, pk) == 0;
        return count;
    }

    fp::Poly gp = fp::reduce(g, p);
    std::vector<u64> level;
    if (gp.empty()) {
        // g vanishes identically mod p; only reachable for small p
        for (u64 s = 0; s < p; ++s)
            level.push_back(s);
    } else {
        level = fp::roots(gp, p);
    }
    IntPoly dg;
    for (size_t i = 1; i < g.size(); ++i)
        dg.push_back(g[i] * i64(i));

    u64 pj = p;
    for (int j = 1; j < k; ++j) {
        u64 next_mod = pj * p;
        std::vector<u64> next;
        for (u64 r : level) {
            u64 deriv = eval_mod(dg, r, p);
            if (deriv != 0) {
                // unique Newton lift
                u64 val = eval_mod(g, r, next_mod);
                u64 c = (val / pj) % p;
                u64 t = mulmod(p - c % p, invmod(deriv, p), p);
                next.push_back(r + t * pj);
            } else {
                for (u64 c = 0; c < p; ++c) {
                    u64 cand = r + c * pj;
                    if (eval_mod(g, cand, next_mod) == 0)
                        next.push_back(cand);
                }
            }
        }
        level = std::move(next);
        pj = next_mod;
    }
    return level.size();
}

} // namespace

u64 FactoredInteger::recompose() const
{
    u64 v = 1;
    for (auto [p, e] : factors)
        for (int i = 0; i < e; ++i)
            v *= p;
    return v;
}

u64 mulmod(u64 a, u64 b, u64 m) { return u64(u128(a) * b % m); }

u64 powmod(u64 base, u64 exp, u64 m)
{
    u64 r = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1)
            r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

u64 invmod(u64 a, u64 m)
{
    i128 t = 0, nt = 1, r = m, nr = a % m;
    while (nr != 0) {
        i128 q = r / nr;
        i128 tmp = t - q * nt;
        t = nt;
        nt = tmp;
        tmp = r - q * nr;
        r = nr;
        nr = tmp;
    }
    if (r != 1)
        throw Error(ErrorKind::InvalidArgument, "invmod: not invertible");
    if (t < 0)
        t += m;
    return u64(t);
}

bool is_prime(u64 n)
{
    if (n < 2)
        return false;
    for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0)
            return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // this witness set is exact below 3.3e24
    for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite)
            return false;
    }
    return true;
}

std::vector<PrimePower> factor_u64(u64 n)
{
    std::vector<PrimePower> out;
    if (n <= 1)
        return out;
    auto take = [&](u64 p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e)
            out.push_back({p, e});
    };
    take(2);
    take(3);
    for (u64 p = 5; p <= trial_division_limit && p * p <= n; p += 6) {
        take(p);
        take(p + 2);
    }
    if (n > 1) {
        std::vector<u64> rest;
        factor_rec(n, rest, 0x9e3779b97f4a7c15ULL);
        std::sort(rest.begin(), rest.end());
        for (size_t i = 0; i < rest.size();) {
            size_t j = i;
            while (j < rest.size() && rest[j] == rest[i])
                ++j;
            out.push_back({rest[i], int(j - i)});
            i = j;
        }
    }
    return out;
}

FactoredInteger factor(i64 n)
{
    if (n == 0)
        throw Error(ErrorKind::InvalidArgument, "factor: zero has no factorization");
    return {n, factor_u64(abs_u64(n))};
}

u64 euler_phi(u64 a)
{
    if (a == 0)
        throw Error(ErrorKind::InvalidArgument, "euler_phi: a must be positive");
    u64 r = a;
    for (auto [p, e] : factor_u64(a))
        r = r / p * (p - 1);
    return r;
}

Rational phi_dagger(u64 a)
{
    if (a == 0)
        throw Error(ErrorKind::InvalidArgument, "phi_dagger: a must be positive");
    Rational r = 1;
    for (auto [p, e] : factor_u64(a))
        r *= Rational(BigInt((unsigned long)(p + 1)), BigInt((unsigned long)p));
    r.canonicalize();
    return r;
}

int mobius(u64 a)
{
    int m = 1;
    for (auto [p, e] : factor_u64(a)) {
        if (e > 1)
            return 0;
        m = -m;
    }
    return m;
}

bool is_squarefree(u64 a)
{
    if (a == 0)
        return false;
    for (auto [p, e] : factor_u64(a))
        if (e > 1)
            return false;
    return true;
}

int valuation(i64 n, u64 p)
{
    if (n == 0)
        throw Error(ErrorKind::InvalidArgument, "valuation of zero");
    u64 m = abs_u64(n);
    int v = 0;
    while (m % p == 0) {
        m /= p;
        ++v;
    }
    return v;
}

u64 roots_mod(const IntPoly& g, u64 m)
{
    if (m == 0)
        throw Error(ErrorKind::InvalidArgument, "roots_mod: modulus 0");
    u64 count = 1;
    for (auto [p, e] : factor_u64(m)) {
        count *= roots_mod_prime_power(g, p, e);
        if (count == 0)
            break;
    }
    return count;
}

PrimeSieve::PrimeSieve(u64 limit) : limit_(limit), composite_(limit + 1, false)
{
    composite_[0] = true;
    if (limit >= 1)
        composite_[1] = true;
    for (u64 i = 2; i * i <= limit; ++i)
        if (!composite_[i])
            for (u64 j = i * i; j <= limit; j += i)
                composite_[j] = true;
    for (u64 i = 2; i <= limit; ++i)
        if (!composite_[i])
            primes_.push_back(std::uint32_t(i));
}

bool PrimeSieve::is_prime(u64 n) const
{
    if (n > limit_)
        return cb::is_prime(n);
    return !composite_[n];
}

std::span<const std::uint32_t> PrimeSieve::primes_upto(u64 x) const
{
    auto end = std::upper_bound(primes_.begin(), primes_.end(), x,
                                [](u64 v, std::uint32_t p) { return v < p; });
    return {primes_.data(), size_t(end - primes_.begin())};
}

const PrimeSieve& shared_sieve(u64 limit)
{
    static std::mutex mtx;
    static std::vector<std::unique_ptr<PrimeSieve>> sieves;
    std::lock_guard lock(mtx);
    if (sieves.empty() || sieves.back()->limit() < limit)
        sieves.push_back(std::make_unique<PrimeSieve>(std::max<u64>(limit, 1u << 16)));
    return *sieves.back();
}

Rational MultiplicativeFn::exact_at_prime(u64 p) const
{
    if (!exact_)
        throw Error(ErrorKind::InvalidArgument, "multiplicative function has no exact rule");
    return exact_(p);
}

long double MultiplicativeFn::operator()(u64 a) const
{
    long double v = 1;
    for (auto [p, e] : factor_u64(a)) {
        if (e > 1)
            return 0;
        v *= rule_(p);
    }
    return v;
}

Rational MultiplicativeFn::exact(u64 a) const
{
    Rational v = 1;
    for (auto [p, e] : factor_u64(a)) {
        if (e > 1)
            return 0;
        v *= exact_at_prime(p);
    }
    return v;
}

MultiplicativeFn MultiplicativeFn::harmonic(long k)
{
    return MultiplicativeFn([k](u64 p) { return (long double)k / (long double)p; },
                            [k](u64 p) {
                                Rational r(BigInt(k), BigInt((unsigned long)p));
                                r.canonicalize();
                                return r;
                            });
}

MultiplicativeFn MultiplicativeFn::phi_ratio()
{
    return MultiplicativeFn([](u64 p) { return (long double)(p - 1) / (long double)p; },
                            [](u64 p) {
                                Rational r(BigInt((unsigned long)(p - 1)), BigInt((unsigned long)p));
                                r.canonicalize();
                                return r;
                            });
}

} // namespace cb
