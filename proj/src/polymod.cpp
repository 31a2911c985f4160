#include "conicbundle/polymod.hpp"

#include <algorithm>

#include "conicbundle/error.hpp"

namespace cb::fp {

void trim(Poly& f)
{
    while (!f.empty() && f.back() == 0)
        f.pop_back();
}

int deg(const Poly& f) { return int(f.size()) - 1; }

Poly reduce(const IntPoly& g, u64 p)
{
    Poly f(g.size());
    for (size_t i = 0; i < g.size(); ++i)
        f[i] = mod_i64(g[i], p);
    trim(f);
    return f;
}

Poly reduce(const std::vector<BigInt>& g, u64 p)
{
    Poly f(g.size());
    BigInt r;
    for (size_t i = 0; i < g.size(); ++i) {
        mpz_fdiv_r_ui(r.get_mpz_t(), g[i].get_mpz_t(), p);
        f[i] = r.get_ui();
    }
    trim(f);
    return f;
}

Poly add(const Poly& f, const Poly& g, u64 p)
{
    Poly r(std::max(f.size(), g.size()), 0);
    for (size_t i = 0; i < f.size(); ++i)
        r[i] = f[i];
    for (size_t i = 0; i < g.size(); ++i) {
        r[i] += g[i];
        if (r[i] >= p)
            r[i] -= p;
    }
    trim(r);
    return r;
}

Poly sub(const Poly& f, const Poly& g, u64 p)
{
    Poly r(std::max(f.size(), g.size()), 0);
    for (size_t i = 0; i < f.size(); ++i)
        r[i] = f[i];
    for (size_t i = 0; i < g.size(); ++i)
        r[i] = r[i] >= g[i] ? r[i] - g[i] : r[i] + p - g[i];
    trim(r);
    return r;
}

Poly mul(const Poly& f, const Poly& g, u64 p)
{
    if (f.empty() || g.empty())
        return {};
    Poly r(f.size() + g.size() - 1, 0);
    for (size_t i = 0; i < f.size(); ++i) {
        if (f[i] == 0)
            continue;
        for (size_t j = 0; j < g.size(); ++j)
            r[i + j] = (r[i + j] + mulmod(f[i], g[j], p)) % p;
    }
    trim(r);
    return r;
}

Poly scale(const Poly& f, u64 c, u64 p)
{
    Poly r(f.size());
    for (size_t i = 0; i < f.size(); ++i)
        r[i] = mulmod(f[i], c, p);
    trim(r);
    return r;
}

void divmod(const Poly& f, const Poly& g, u64 p, Poly& q, Poly& r)
{
    if (g.empty())
        throw Error(ErrorKind::InvalidArgument, "polynomial division by zero");
    r = f;
    trim(r);
    q.assign(r.size() >= g.size() ? r.size() - g.size() + 1 : 0, 0);
    u64 inv = invmod(g.back(), p);
    while (r.size() >= g.size()) {
        size_t shift = r.size() - g.size();
        u64 c = mulmod(r.back(), inv, p);
        q[shift] = c;
        for (size_t i = 0; i < g.size(); ++i) {
            u64 t = mulmod(c, g[i], p);
            r[shift + i] = r[shift + i] >= t ? r[shift + i] - t : r[shift + i] + p - t;
        }
        trim(r);
    }
    trim(q);
}

Poly mod(const Poly& f, const Poly& g, u64 p)
{
    Poly q, r;
    divmod(f, g, p, q, r);
    return r;
}

Poly monic(const Poly& f, u64 p)
{
    if (f.empty())
        return f;
    return scale(f, invmod(f.back(), p), p);
}

Poly gcd(Poly f, Poly g, u64 p)
{
    trim(f);
    trim(g);
    while (!g.empty()) {
        Poly r = mod(f, g, p);
        f = std::move(g);
        g = std::move(r);
    }
    return monic(f, p);
}

Poly ext_gcd(const Poly& f, const Poly& g, u64 p, Poly& s, Poly& t)
{
    Poly r0 = f, r1 = g, s0{1}, s1{}, t0{}, t1{1};
    trim(r0);
    trim(r1);
    while (!r1.empty()) {
        Poly q, r;
        divmod(r0, r1, p, q, r);
        Poly s2 = sub(s0, mul(q, s1, p), p);
        Poly t2 = sub(t0, mul(q, t1, p), p);
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.empty()) {
        s = {};
        t = {};
        return r0;
    }
    u64 inv = invmod(r0.back(), p);
    s = scale(s0, inv, p);
    t = scale(t0, inv, p);
    return scale(r0, inv, p);
}

Poly derivative(const Poly& f, u64 p)
{
    if (f.size() <= 1)
        return {};
    Poly d(f.size() - 1);
    for (size_t i = 1; i < f.size(); ++i)
        d[i - 1] = mulmod(f[i], i % p, p);
    trim(d);
    return d;
}

u64 eval(const Poly& f, u64 x, u64 p)
{
    u64 acc = 0;
    for (auto it = f.rbegin(); it != f.rend(); ++it)
        acc = (mulmod(acc, x, p) + *it) % p;
    return acc;
}

Poly powmod(const Poly& base, u64 e, const Poly& f, u64 p)
{
    Poly result{1 % p};
    result = mod(result, f, p);
    Poly b = mod(base, f, p);
    while (e) {
        if (e & 1)
            result = mod(mul(result, b, p), f, p);
        e >>= 1;
        if (e)
            b = mod(mul(b, b, p), f, p);
    }
    return result;
}

Poly powmod_x(u64 e, const Poly& f, u64 p) { return powmod(Poly{0, 1}, e, f, p); }

u64 distinct_root_count(const Poly& f, u64 p)
{
    if (f.empty())
        throw Error(ErrorKind::InvalidArgument, "root count of zero polynomial");
    if (f.size() == 1)
        return 0;
    Poly xp = powmod_x(p, f, p);
    Poly h = sub(xp, Poly{0, 1}, p);
    return u64(deg(gcd(f, h, p)));
}

namespace {

// f monic, product of distinct linear factors over F_p
void split_linear(const Poly& f, u64 p, std::mt19937_64& rng, std::vector<u64>& out)
{
    int d = deg(f);
    if (d == 0)
        return;
    if (d == 1) {
        out.push_back((p - f[0]) % p);
        return;
    }
    if (p == 2) {
        for (u64 x = 0; x < 2; ++x)
            if (eval(f, x, p) == 0)
                out.push_back(x);
        return;
    }
    for (;;) {
        u64 a = rng() % p;
        Poly h = powmod(Poly{a, 1}, (p - 1) / 2, f, p);
        h = sub(h, Poly{1}, p);
        Poly g = gcd(f, h, p);
        int dg = deg(g);
        if (dg > 0 && dg < d) {
            Poly q, r;
            divmod(f, g, p, q, r);
            split_linear(g, p, rng, out);
            split_linear(monic(q, p), p, rng, out);
            return;
        }
    }
}

// f monic squarefree with all irreducible factors of degree d
void split_equal_degree(const Poly& f, int d, u64 p, std::mt19937_64& rng, std::vector<Poly>& out)
{
    int n = deg(f);
    if (n == d) {
        out.push_back(f);
        return;
    }
    // (p^d - 1) / 2 as a product of exponentiations
    for (;;) {
        Poly a(n);
        for (auto& c : a)
            c = rng() % p;
        trim(a);
        if (deg(a) < 1)
            continue;
        Poly g0 = gcd(f, a, p);
        if (deg(g0) > 0 && deg(g0) < n) {
            Poly q, r;
            divmod(f, g0, p, q, r);
            split_equal_degree(g0, d, p, rng, out);
            split_equal_degree(monic(q, p), d, p, rng, out);
            return;
        }
        // a^((p^d-1)/2) = (a^(1+p+...+p^(d-1)))^((p-1)/2)
        Poly acc = mod(a, f, p);
        Poly frob = acc;
        for (int i = 1; i < d; ++i) {
            frob = powmod(frob, p, f, p);
            acc = mod(mul(acc, frob, p), f, p);
        }
        Poly h = powmod(acc, (p - 1) / 2, f, p);
        h = sub(h, Poly{1}, p);
        Poly g = gcd(f, h, p);
        if (deg(g) > 0 && deg(g) < n) {
            Poly q, r;
            divmod(f, g, p, q, r);
            split_equal_degree(g, d, p, rng, out);
            split_equal_degree(monic(q, p), d, p, rng, out);
            return;
        }
    }
}

} // namespace

std::vector<u64> roots(const Poly& f, u64 p, std::mt19937_64& rng)
{
    if (f.empty())
        throw Error(ErrorKind::InvalidArgument, "roots of zero polynomial");
    std::vector<u64> out;
    if (f.size() == 1)
        return out;
    Poly fm = monic(f, p);
    Poly g = fm;
    if (p <= 64) {
        for (u64 x = 0; x < p; ++x)
            if (eval(fm, x, p) == 0)
                out.push_back(x);
        return out;
    }
    Poly xp = powmod_x(p, fm, p);
    g = gcd(fm, sub(xp, Poly{0, 1}, p), p);
    if (!g.empty() && g[0] == 0) {
        out.push_back(0);
        Poly q, r;
        divmod(g, Poly{0, 1}, p, q, r);
        g = q;
    }
    split_linear(g, p, rng, out);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<u64> roots(const Poly& f, u64 p)
{
    std::mt19937_64 rng(0x5eed5eedULL ^ p);
    return roots(f, p, rng);
}

std::vector<std::pair<Poly, int>> distinct_degree(const Poly& f, u64 p)
{
    std::vector<std::pair<Poly, int>> out;
    Poly rest = monic(f, p);
    Poly h{0, 1};
    int d = 0;
    while (deg(rest) >= 2 * (d + 1)) {
        ++d;
        h = powmod(h, p, rest, p);
        Poly g = gcd(rest, sub(h, Poly{0, 1}, p), p);
        if (deg(g) > 0) {
            out.emplace_back(g, d);
            Poly q, r;
            divmod(rest, g, p, q, r);
            rest = monic(q, p);
            h = mod(h, rest, p);
        }
    }
    if (deg(rest) > 0)
        out.emplace_back(rest, deg(rest));
    return out;
}

std::vector<Poly> factor_squarefree(const Poly& f, u64 p, std::mt19937_64& rng)
{
    if (p == 2)
        throw Error(ErrorKind::InvalidArgument, "factor_squarefree needs odd p");
    std::vector<Poly> out;
    for (auto& [g, d] : distinct_degree(f, p))
        split_equal_degree(g, d, p, rng, out);
    std::sort(out.begin(), out.end(), [](const Poly& a, const Poly& b) {
        if (a.size() != b.size())
            return a.size() < b.size();
        return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
    });
    return out;
}

} // namespace cb::fp
