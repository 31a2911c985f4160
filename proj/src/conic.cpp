#include "conicbundle/conic.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "conicbundle/error.hpp"
#include "conicbundle/polymod.hpp"

namespace cb {

namespace {

constexpr u64 direction_scan_limit = 1'000'000;

i128 abs128(i128 x) { return x < 0 ? -x : x; }

i64 narrow(i128 v, const char* what)
{
    if (v > i128(INT64_MAX) || v < i128(INT64_MIN))
        throw Error(ErrorKind::Overflow, what);
    return i64(v);
}

u128 gcd128(u128 a, u128 b)
{
    while (b) {
        u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// x = s*a + t*b = g >= 0
i128 ext_gcd(i128 a, i128 b, i128& s, i128& t)
{
    i128 s0 = 1, s1 = 0, t0 = 0, t1 = 1;
    while (b != 0) {
        i128 q = a / b;
        i128 r = a - q * b;
        a = b;
        b = r;
        i128 tmp = s0 - q * s1;
        s0 = s1;
        s1 = tmp;
        tmp = t0 - q * t1;
        t0 = t1;
        t1 = tmp;
    }
    if (a < 0) {
        a = -a;
        s0 = -s0;
        t0 = -t0;
    }
    s = s0;
    t = t0;
    return a;
}

i128 mod128(i128 x, i128 m)
{
    i128 r = x % m;
    return r < 0 ? r + m : r;
}

// --- certified minimum of the height norm on the boundary of the unit box ---

struct Quad1 {
    long double c0, c1, c2;  // c0 + c1 t + c2 t^2
    long double weight;
    long double scale;       // sum of |c_i|, for rounding slack

    long double at(long double t) const { return c0 + t * (c1 + t * c2); }

    // min of |value| over [lo, hi], rounded down
    long double min_abs(long double lo, long double hi) const
    {
        long double vlo = at(lo), vhi = at(hi);
        long double mn = std::min(vlo, vhi), mx = std::max(vlo, vhi);
        if (c2 != 0) {
            long double tv = -c1 / (2 * c2);
            if (tv > lo && tv < hi) {
                long double vv = at(tv);
                mn = std::min(mn, vv);
                mx = std::max(mx, vv);
            }
        }
        long double slack = scale * 1e-15L;
        if (mn - slack <= 0 && mx + slack >= 0)
            return 0;
        return std::max<long double>(0, std::min(std::fabs(mn), std::fabs(mx)) - slack);
    }
};

struct Cell {
    int segment;
    long double lo, hi, lower;
    bool operator>(const Cell& o) const { return lower > o.lower; }
};

} // namespace

// --- QuadTriple --------------------------------------------------------------

std::array<i128, 3> QuadTriple::eval(i128 u, i128 v) const
{
    auto q = [&](const std::array<i64, 3>& c) { return c[0] * u * u + c[1] * u * v + c[2] * v * v; };
    return {q(x), q(y), q(z)};
}

i128 QuadTriple::norm(i128 u, i128 v) const
{
    auto p = eval(u, v);
    return std::max({abs128(p[0]), abs128(p[1]) * lambda, abs128(p[2])});
}

QuadTriple QuadTriple::compose(std::array<i64, 2> b1, std::array<i64, 2> b2) const
{
    auto sub = [&](const std::array<i64, 3>& c) {
        i128 u1 = b1[0], v1 = b1[1], u2 = b2[0], v2 = b2[1];
        i128 ii = c[0] * u1 * u1 + c[1] * u1 * v1 + c[2] * v1 * v1;
        i128 jj = c[0] * u2 * u2 + c[1] * u2 * v2 + c[2] * v2 * v2;
        i128 ij = 2 * c[0] * u1 * u2 + c[1] * (u1 * v2 + v1 * u2) + 2 * c[2] * v1 * v2;
        return std::array<i64, 3>{narrow(ii, "lattice substitution"), narrow(ij, "lattice substitution"),
                                  narrow(jj, "lattice substitution")};
    };
    return QuadTriple{sub(x), sub(y), sub(z), lambda};
}

// --- FibreConic --------------------------------------------------------------

FibreConic::FibreConic(i64 a, i64 b, i64 d, i64 e, i64 f, i64 lambda)
    : a_(a), b_(b), d_(d), e_(e), f_(f), lambda_(lambda)
{
    if (lambda < 1)
        throw Error(ErrorKind::InvalidArgument, "conic height weight must be positive");
    i128 D = i128(a) * e * e - i128(b) * d * e + i128(f) * b * b;
    delta_ = narrow(D, "conic determinant");
    if (delta_ == 0)
        throw Error(ErrorKind::SingularFibre, "conic determinant vanishes");
}

std::array<std::array<i64, 3>, 3> FibreConic::Pi() const
{
    return {{{b_, e_, 0}, {-a_, -d_, -f_}, {0, b_, e_}}};
}

i128 FibreConic::Q(i128 x, i128 y, i128 z) const
{
    return a_ * x * x + b_ * x * y + d_ * x * z + e_ * y * z + f_ * z * z;
}

QuadTriple FibreConic::param() const
{
    return QuadTriple{{b_, e_, 0}, {-a_, -d_, -f_}, {0, b_, e_}, lambda_};
}

// --- points and heights ------------------------------------------------------

Triple normalize_point(const std::array<i128, 3>& p)
{
    u128 g = 0;
    for (auto c : p)
        g = gcd128(g, u128(abs128(c)));
    if (g == 0)
        throw Error(ErrorKind::InvalidArgument, "zero vector is not a projective point");
    std::array<i128, 3> r{p[0] / i128(g), p[1] / i128(g), p[2] / i128(g)};
    i128 lead = r[0] != 0 ? r[0] : (r[1] != 0 ? r[1] : r[2]);
    if (lead < 0)
        for (auto& c : r)
            c = -c;
    return {narrow(r[0], "point"), narrow(r[1], "point"), narrow(r[2], "point")};
}

Triple parameterize(const FibreConic& C, i64 u, i64 v)
{
    if (u == 0 && v == 0)
        throw Error(ErrorKind::InvalidArgument, "parameter (0, 0)");
    auto p = C.param().eval(u, v);
    return {narrow(p[0], "parameterization"), narrow(p[1], "parameterization"),
            narrow(p[2], "parameterization")};
}

i64 height(i64 lambda, const Triple& p)
{
    Triple r = normalize_point({p[0], p[1], p[2]});
    i128 h = std::max({abs128(r[0]), abs128(r[1]) * lambda, abs128(r[2])});
    return narrow(h, "height");
}

i64 height(const FibreConic& C, const Triple& p) { return height(C.lambda(), p); }

// --- certified minimum -------------------------------------------------------

long double certified_min_m(const QuadTriple& q)
{
    // N is even, so the boundary reduces to u = 1, v in [-1, 1] and v = 1, u in [-1, 1].
    std::array<std::array<Quad1, 3>, 2> seg;
    auto mk = [](long double c0, long double c1, long double c2, long double w) {
        return Quad1{c0, c1, c2, w, std::fabs(c0) + std::fabs(c1) + std::fabs(c2)};
    };
    const std::array<const std::array<i64, 3>*, 3> comps{&q.x, &q.y, &q.z};
    for (int k = 0; k < 3; ++k) {
        const auto& c = *comps[size_t(k)];
        long double w = k == 1 ? (long double)q.lambda : 1.0L;
        seg[0][size_t(k)] = mk((long double)c[0], (long double)c[1], (long double)c[2], w);  // (1, t)
        seg[1][size_t(k)] = mk((long double)c[2], (long double)c[1], (long double)c[0], w);  // (t, 1)
    }
    auto lower = [&](int s, long double lo, long double hi) {
        long double best = 0;
        for (const auto& p : seg[size_t(s)])
            best = std::max(best, p.weight * p.min_abs(lo, hi));
        return best;
    };
    auto value = [&](int s, long double t) {
        long double best = 0;
        for (const auto& p : seg[size_t(s)])
            best = std::max(best, p.weight * std::fabs(p.at(t)));
        return best;
    };

    std::priority_queue<Cell, std::vector<Cell>, std::greater<>> heap;
    long double upper = INFINITY;
    for (int s = 0; s < 2; ++s) {
        heap.push({s, -1.0L, 1.0L, lower(s, -1.0L, 1.0L)});
        upper = std::min({upper, value(s, -1.0L), value(s, 0.0L), value(s, 1.0L)});
    }
    for (int iter = 0; iter < 200000; ++iter) {
        Cell c = heap.top();
        if (c.lower > 0 && c.lower >= 0.5L * upper)
            break;
        if (c.hi - c.lo < 0x1p-40L)
            break;
        heap.pop();
        long double mid = (c.lo + c.hi) / 2;
        upper = std::min(upper, value(c.segment, mid));
        heap.push({c.segment, c.lo, mid, lower(c.segment, c.lo, mid)});
        heap.push({c.segment, mid, c.hi, lower(c.segment, mid, c.hi)});
    }
    long double m = heap.top().lower * (1 - 1e-12L);
    if (!(m > 0))
        throw Error(ErrorKind::CannotCertify, "no positive lower bound for the height norm");
    return m;
}

long double certified_min_m(const FibreConic& C) { return certified_min_m(C.param()); }

// --- local solutions ---------------------------------------------------------

namespace {

// components of q along a chart, as quadratics c0 + c1 t + c2 t^2 in the free coordinate
using Chart = std::array<std::array<i64, 3>, 3>;

Chart chart_v(const FibreConic& C)  // (1, t)
{
    return {{{C.b(), C.e(), 0}, {-C.a(), -C.d(), -C.f()}, {0, C.b(), C.e()}}};
}

Chart chart_u(const FibreConic& C)  // (t, 1)
{
    return {{{0, C.e(), C.b()}, {-C.f(), -C.d(), -C.a()}, {C.e(), C.b(), 0}}};
}

u64 eval_mod(const std::array<i64, 3>& c, u64 t, u64 m)
{
    u64 r = mod_i64(c[2], m);
    r = (mulmod(r, t, m) + mod_i64(c[1], m)) % m;
    r = (mulmod(r, t, m) + mod_i64(c[0], m)) % m;
    return r;
}

bool vanishes(const Chart& ch, u64 t, u64 m)
{
    for (const auto& c : ch)
        if (eval_mod(c, t, m) != 0)
            return false;
    return true;
}

// free coordinates t mod p of solutions on a chart, t restricted to multiples of p when
// multiple_of_p (then only t = 0 mod p)
std::vector<u64> level_one(const Chart& ch, u64 p, bool multiple_of_p)
{
    std::vector<u64> out;
    if (multiple_of_p) {
        if (vanishes(ch, 0, p))
            out.push_back(0);
        return out;
    }
    if (p <= direction_scan_limit) {
        for (u64 t = 0; t < p; ++t)
            if (vanishes(ch, t, p))
                out.push_back(t);
        return out;
    }
    for (const auto& c : ch) {
        fp::Poly g = fp::reduce(IntPoly{c[0], c[1], c[2]}, p);
        if (g.empty())
            continue;
        for (u64 t : fp::roots(g, p))
            if (vanishes(ch, t, p))
                out.push_back(t);
        return out;
    }
    // every component vanishes mod p
    for (u64 t = 0; t < p; ++t)
        out.push_back(t);
    return out;
}

std::vector<u64> lift(const Chart& ch, const std::vector<u64>& sols, u64 p, u64 pj, u64 next)
{
    std::vector<u64> out;
    for (u64 t : sols) {
        bool done = false;
        for (const auto& c : ch) {
            // derivative c1 + 2 c2 t mod p
            u64 deriv = (mod_i64(c[1], p) + mulmod(mod_i64(c[2], p), (2 * (t % p)) % p, p)) % p;
            if (deriv == 0)
                continue;
            u64 val = eval_mod(c, t, next);
            u64 k = (val / pj) % p;
            u64 cstep = mulmod((p - k) % p, invmod(deriv, p), p);
            u64 cand = t + cstep * pj;
            if (vanishes(ch, cand, next))
                out.push_back(cand);
            done = true;
            break;
        }
        if (done)
            continue;
        for (u64 c = 0; c < p; ++c) {
            u64 cand = t + c * pj;
            if (vanishes(ch, cand, next))
                out.push_back(cand);
        }
    }
    return out;
}

std::vector<u64> chart_solutions(const Chart& ch, u64 p, int k, bool multiple_of_p)
{
    u64 pk = 1;
    for (int i = 0; i < k; ++i) {
        if (pk > UINT64_MAX / p / 4)
            throw Error(ErrorKind::Overflow, "prime power too large");
        pk *= p;
    }
    if (pk <= direction_scan_limit) {
        std::vector<u64> out;
        for (u64 t = 0; t < pk; t += multiple_of_p ? p : 1)
            if (vanishes(ch, t, pk))
                out.push_back(t);
        return out;
    }
    std::vector<u64> sols = level_one(ch, p, multiple_of_p);
    u64 pj = p;
    for (int j = 1; j < k && !sols.empty(); ++j) {
        sols = lift(ch, sols, p, pj, pj * p);
        pj *= p;
    }
    std::sort(sols.begin(), sols.end());
    return sols;
}

} // namespace

std::vector<std::array<u64, 2>> conic_directions(const FibreConic& C, u64 p, int k)
{
    if (k < 1 || !is_prime(p))
        throw Error(ErrorKind::InvalidArgument, "conic_directions needs a prime and k >= 1");
    std::vector<std::array<u64, 2>> out;
    for (u64 v : chart_solutions(chart_v(C), p, k, false))
        out.push_back({1, v});
    for (u64 u : chart_solutions(chart_u(C), p, k, true))
        out.push_back({u, 1});
    return out;
}

// --- counting ----------------------------------------------------------------

namespace {

struct LatticeClass {
    i128 g;
    i128 wu, wv;  // direction, reduced mod g
};

// j in [lo, hi] with alpha j^2 + beta j + gamma <= 0, widened for rounding
using Interval = std::pair<long double, long double>;

void solve_le(long double alpha, long double beta, long double gamma, long double lo, long double hi,
              std::vector<Interval>& out)
{
    const long double slack = 1e-9L;
    auto widen = [&](long double a, long double b) {
        a -= slack * (1 + std::fabs(a)) + 1e-6L;
        b += slack * (1 + std::fabs(b)) + 1e-6L;
        a = std::max(a, lo);
        b = std::min(b, hi);
        if (a <= b)
            out.emplace_back(a, b);
    };
    if (alpha == 0) {
        if (beta == 0) {
            if (gamma <= 0)
                out.emplace_back(lo, hi);
            return;
        }
        long double r = -gamma / beta;
        if (beta > 0)
            widen(lo, r);
        else
            widen(r, hi);
        return;
    }
    long double disc = beta * beta - 4 * alpha * gamma;
    long double tol = 1e-12L * (beta * beta + std::fabs(4 * alpha * gamma));
    if (disc < -tol) {
        if (alpha < 0)
            out.emplace_back(lo, hi);
        return;
    }
    long double sq = std::sqrt(std::max<long double>(disc, 0));
    long double qq = -0.5L * (beta + (beta >= 0 ? sq : -sq));
    long double r1, r2;
    if (qq == 0) {
        r1 = r2 = 0;
    } else {
        r1 = qq / alpha;
        r2 = gamma / qq;
    }
    if (r1 > r2)
        std::swap(r1, r2);
    if (alpha > 0) {
        widen(r1, r2);
    } else {
        widen(lo, r1);
        widen(r2, hi);
    }
}

std::vector<Interval> intersect(const std::vector<Interval>& A, const std::vector<Interval>& B)
{
    std::vector<Interval> out;
    for (auto [a0, a1] : A)
        for (auto [b0, b1] : B) {
            long double lo = std::max(a0, b0), hi = std::min(a1, b1);
            if (lo <= hi)
                out.emplace_back(lo, hi);
        }
    return out;
}

// { j : |c2 j^2 + c1 i j + c0 i^2| * w <= T }
std::vector<Interval> band(const std::array<i64, 3>& c, i64 i, long double w, long double T, long double J)
{
    long double alpha = (long double)c[2] * w;
    long double beta = (long double)c[1] * (long double)i * w;
    long double gamma = (long double)c[0] * (long double)i * (long double)i * w;
    std::vector<Interval> le, ge;
    solve_le(alpha, beta, gamma - T, -J, J, le);
    solve_le(-alpha, -beta, -gamma - T, -J, J, ge);
    std::vector<Interval> out = intersect(le, ge);
    std::sort(out.begin(), out.end());
    return out;
}

void emit_lattice(const FibreConic& C, const QuadTriple& q, const LatticeClass& cls, i64 T,
                  const PointSink& sink, ConicCount& res)
{
    // basis of { lambda w + g Z^2 } via column elimination, then Lagrange-Gauss reduction
    i128 s, t;
    i128 h = ext_gcd(cls.wu, cls.g, s, t);
    std::array<i128, 2> A{h, s * cls.wv};
    i128 G = i128(gcd128(u128(abs128((cls.g / h) * cls.wv)), u128(cls.g)));
    A[1] = mod128(A[1], G);
    std::array<i128, 2> Bv{0, G};
    if (h * G != cls.g)
        throw Error(ErrorKind::InvalidArgument, "class lattice has unexpected index");
    auto dot = [](const std::array<i128, 2>& x, const std::array<i128, 2>& y) {
        return x[0] * y[0] + x[1] * y[1];
    };
    for (;;) {
        if (dot(A, A) > dot(Bv, Bv))
            std::swap(A, Bv);
        i128 num = dot(A, Bv), den = dot(A, A);
        // nearest integer to num / den
        i128 mu = (2 * num + den) / (2 * den);
        if ((2 * num + den) % (2 * den) != 0 && (2 * num + den) < 0)
            --mu;
        if (mu == 0)
            break;
        Bv = {Bv[0] - mu * A[0], Bv[1] - mu * A[1]};
        if (dot(Bv, Bv) >= dot(A, A))
            break;
    }
    std::array<i64, 2> b1{narrow(A[0], "basis"), narrow(A[1], "basis")};
    std::array<i64, 2> b2{narrow(Bv[0], "basis"), narrow(Bv[1], "basis")};
    QuadTriple qq = q.compose(b1, b2);
    long double m = certified_min_m(qq);
    i128 bound = cls.g * i128(T);
    long double Tg = (long double)bound;
    i64 R = i64(std::floor(std::sqrt(Tg / m))) + 1;
    long double J = (long double)R;
    long double lam = (long double)q.lambda;

    for (i64 i = 0; i <= R; ++i) {
        std::vector<Interval> ivs = band(qq.x, i, 1, Tg, J);
        if (ivs.empty())
            continue;
        ivs = intersect(ivs, band(qq.y, i, lam, Tg, J));
        if (ivs.empty())
            continue;
        ivs = intersect(ivs, band(qq.z, i, 1, Tg, J));
        std::sort(ivs.begin(), ivs.end());
        i64 last = INT64_MIN;
        for (auto [lo, hi] : ivs) {
            i64 j0 = i64(std::ceil(lo)), j1 = i64(std::floor(hi));
            j0 = std::max(j0, last == INT64_MIN ? j0 : last + 1);
            for (i64 j = j0; j <= j1; ++j) {
                last = j;
                if (i == 0 && j <= 0)
                    continue;
                ++res.candidates;
                i128 u = i128(i) * b1[0] + i128(j) * b2[0];
                i128 v = i128(i) * b1[1] + i128(j) * b2[1];
                if (gcd128(u128(abs128(u)), u128(abs128(v))) != 1)
                    continue;
                auto p = q.eval(u, v);
                i128 N = std::max({abs128(p[0]), abs128(p[1]) * q.lambda, abs128(p[2])});
                if (N > bound)
                    continue;
                u128 content = gcd128(gcd128(u128(abs128(p[0])), u128(abs128(p[1]))), u128(abs128(p[2])));
                if (i128(content) != cls.g)
                    continue;
                ++res.count;
                if (sink) {
                    Triple pt = normalize_point(p);
                    sink(HeightedPoint{pt, narrow(N / cls.g, "height")});
                }
            }
        }
    }
    (void)C;
}

} // namespace

ConicCount count_points(const FibreConic& C, double B, const PointSink& sink)
{
    ConicCount res;
    if (!(B >= 1))
        return res;
    if (B > 9e15)
        throw Error(ErrorKind::Overflow, "height bound too large");
    i64 T = i64(std::floor(B));
    QuadTriple q = C.param();

    struct Option {
        i128 pk;
        std::vector<std::array<u64, 2>> dirs;
    };
    std::vector<std::vector<Option>> per_prime;
    for (auto [p, v] : factor_u64(abs_u64(C.delta()))) {
        std::vector<Option> opts;
        opts.push_back({1, {{1, 0}}});
        i128 pk = 1;
        for (int k = 1; k <= v; ++k) {
            pk *= p;
            auto dirs = conic_directions(C, p, k);
            if (dirs.empty())
                break;
            opts.push_back({pk, std::move(dirs)});
        }
        per_prime.push_back(std::move(opts));
    }

    // depth-first product over primes, combining directions by CRT
    auto rec = [&](auto&& self, size_t idx, i128 g, i128 wu, i128 wv) -> void {
        if (idx == per_prime.size()) {
            emit_lattice(C, q, LatticeClass{g, wu, wv}, T, sink, res);
            return;
        }
        for (const auto& opt : per_prime[idx]) {
            if (opt.pk == 1) {
                self(self, idx + 1, g, wu, wv);
                continue;
            }
            i128 s, t;
            ext_gcd(g, opt.pk, s, t);  // s g + t pk = 1
            i128 G = g * opt.pk;
            for (const auto& d : opt.dirs) {
                // x = a mod g, x = b mod pk  ->  x = a + g * ((b - a) * s mod pk)
                auto crt = [&](i128 a, i128 b) {
                    i128 k = mod128(mod128(b - a, opt.pk) * mod128(s, opt.pk), opt.pk);
                    return mod128(a + g * k, G);
                };
                self(self, idx + 1, G, crt(wu, i128(d[0])), crt(wv, i128(d[1])));
            }
        }
    };
    rec(rec, 0, 1, 1, 0);
    return res;
}

ConicCount count_points_box(const FibreConic& C, double B, const PointSink& sink, double u_scale)
{
    ConicCount res;
    if (!(B >= 1))
        return res;
    QuadTriple q = C.param();
    long double m = certified_min_m(q);
    i128 T = i128(std::floor(B));
    i64 U = i64(std::ceil(u_scale * std::sqrt((long double)B * (long double)abs_u64(C.delta()) / m)));
    for (i64 u = 0; u <= U; ++u) {
        for (i64 v = -U; v <= U; ++v) {
            if (u == 0 && v <= 0)
                continue;
            if (gcd_u64(abs_u64(u), abs_u64(v)) != 1)
                continue;
            ++res.candidates;
            auto p = q.eval(u, v);
            u128 content = gcd128(gcd128(u128(abs128(p[0])), u128(abs128(p[1]))), u128(abs128(p[2])));
            i128 N = std::max({abs128(p[0]), abs128(p[1]) * q.lambda, abs128(p[2])});
            if (N > T * i128(content))
                continue;
            ++res.count;
            if (sink)
                sink(HeightedPoint{normalize_point(p), narrow(N / i128(content), "height")});
        }
    }
    return res;
}

} // namespace cb
