#include "conicbundle/densities.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>

#include "conicbundle/error.hpp"

namespace cb {

namespace {

Rational inv_pow(u64 p, int d)
{
    BigInt den;
    mpz_ui_pow_ui(den.get_mpz_t(), p, unsigned(d));
    return Rational(BigInt(1), den);
}

// range of |c0 + c1 t + c2 t^2| over [lo, hi], widened for rounding
std::pair<long double, long double> abs_range(long double c0, long double c1, long double c2, long double lo,
                                              long double hi)
{
    auto at = [&](long double t) { return c0 + t * (c1 + t * c2); };
    long double a = at(lo), b = at(hi);
    long double mn = std::min(a, b), mx = std::max(a, b);
    if (c2 != 0) {
        long double tv = -c1 / (2 * c2);
        if (tv > lo && tv < hi) {
            mn = std::min(mn, at(tv));
            mx = std::max(mx, at(tv));
        }
    }
    long double slack = (std::fabs(c0) + std::fabs(c1) + std::fabs(c2)) * 1e-16L;
    mn -= slack;
    mx += slack;
    long double amax = std::max(std::fabs(mn), std::fabs(mx));
    long double amin = (mn <= 0 && mx >= 0) ? 0 : std::min(std::fabs(mn), std::fabs(mx));
    return {amin, amax};
}

// int_lo^hi dt / (c0 + c1 t + c2 t^2) for a quadratic without roots on [lo, hi],
// with a rough bound on the rounding error of the antiderivative difference
std::pair<long double, long double> quadratic_reciprocal_integral(long double c0, long double c1, long double c2,
                                                                  long double lo, long double hi)
{
    long double F_lo, F_hi;
    if (c2 == 0 && c1 == 0) {
        F_lo = lo / c0;
        F_hi = hi / c0;
    } else if (c2 == 0) {
        F_lo = std::log(std::fabs(c1 * lo + c0)) / c1;
        F_hi = std::log(std::fabs(c1 * hi + c0)) / c1;
    } else {
        long double D = c1 * c1 - 4 * c2 * c0;
        if (D < 0) {
            long double s = std::sqrt(-D);
            F_lo = 2 / s * std::atan((2 * c2 * lo + c1) / s);
            F_hi = 2 / s * std::atan((2 * c2 * hi + c1) / s);
        } else if (D > 0) {
            long double s = std::sqrt(D);
            auto F = [&](long double t) { return std::log(std::fabs((2 * c2 * t + c1 - s) / (2 * c2 * t + c1 + s))) / s; };
            F_lo = F(lo);
            F_hi = F(hi);
        } else {
            F_lo = -2 / (2 * c2 * lo + c1);
            F_hi = -2 / (2 * c2 * hi + c1);
        }
    }
    long double I = F_hi - F_lo;
    long double err = 1e-16L * (std::fabs(F_hi) + std::fabs(F_lo)) + 1e-15L * std::fabs(I);
    return {I, err};
}

struct QCell {
    int side;
    int depth;
    long double lo, hi;
    long double inner, outer;
    bool operator<(const QCell& o) const { return (outer - inner) < (o.outer - o.inner); }
};

} // namespace

u64 rho_star(const FibreConic& C, u64 p, int d)
{
    if (d < 1 || !is_prime(p))
        throw Error(ErrorKind::InvalidArgument, "rho_star needs a prime and d >= 1");
    // the content of q(u, v) divides Delta, so nothing survives beyond v_p(Delta)
    int v = valuation(C.delta(), p);
    if (d > v) {
        long double pd = std::pow((long double)p, d);
        if (pd > 1e18L)
            return 0;
    }
    u64 pd = 1;
    for (int i = 0; i < d; ++i)
        pd *= p;
    u64 phi = pd / p * (p - 1);
    return phi * u64(conic_directions(C, p, d).size());
}

Rational sigma_p(const FibreConic& C, u64 p, RhoStarTable* table)
{
    Rational inv_p2 = inv_pow(p, 2);
    Rational s = 1 - inv_p2;
    int v = valuation(C.delta(), p);
    Rational acc = 0;
    for (int d = 1; d <= v; ++d) {
        u64 r = rho_star(C, p, d);
        if (table)
            table->entries[{p, d}] = r;
        acc += Rational(BigInt((unsigned long)r)) * inv_pow(p, d);
    }
    s += (1 - inv_pow(p, 1)) * acc;
    s.canonicalize();
    return s;
}

Bracket sigma_inf(const FibreConic& C, long double rel_tol, int max_depth)
{
    // area = int_{-1}^{1} dv / N(1, v) + int_{-1}^{1} du / N(u, 1), N = max(|x|, lambda|y|, |z|)
    QuadTriple q = C.param();
    const std::array<const std::array<i64, 3>*, 3> comps{&q.x, &q.y, &q.z};
    auto bounds = [&](int side, long double lo, long double hi) {
        long double nlo = 0, nhi = 0;
        std::array<long double, 3> wmin, wmax;
        std::array<std::array<long double, 3>, 3> poly;
        for (int k = 0; k < 3; ++k) {
            const auto& c = *comps[size_t(k)];
            long double w = k == 1 ? (long double)q.lambda : 1.0L;
            poly[size_t(k)] = side == 0 ? std::array<long double, 3>{(long double)c[0], (long double)c[1], (long double)c[2]}
                                        : std::array<long double, 3>{(long double)c[2], (long double)c[1], (long double)c[0]};
            const auto& pk = poly[size_t(k)];
            auto [amin, amax] = abs_range(pk[0], pk[1], pk[2], lo, hi);
            wmin[size_t(k)] = w * amin;
            wmax[size_t(k)] = w * amax;
            nlo = std::max(nlo, wmin[size_t(k)]);
            nhi = std::max(nhi, wmax[size_t(k)]);
        }
        long double width = hi - lo;
        long double inner = width / nhi;
        long double outer = nlo > 0 ? width / nlo : INFINITY;
        // one component dominates without a sign change: integrate 1 / (w |c(t)|) in closed form
        for (int k = 0; k < 3; ++k) {
            if (!(wmin[size_t(k)] > 0))
                continue;
            bool dominates = true;
            for (int j = 0; j < 3; ++j)
                dominates = dominates && (j == k || wmax[size_t(j)] <= wmin[size_t(k)]);
            if (!dominates)
                continue;
            const auto& pk = poly[size_t(k)];
            long double w = k == 1 ? (long double)q.lambda : 1.0L;
            auto [I, err] = quadratic_reciprocal_integral(pk[0], pk[1], pk[2], lo, hi);
            I = std::fabs(I) / w;
            err /= w;
            // kept only when consistent with the first-order enclosure
            if (std::isfinite(I) && std::isfinite(err) && I - err <= outer && I + err >= inner) {
                inner = std::max(inner, I - err);
                outer = std::min(outer, I + err);
            }
            break;
        }
        return std::pair{inner, outer};
    };

    std::priority_queue<QCell> heap;
    CompensatedSum inner, outer;
    long unbounded = 0;  // cells whose outer bound is infinite, kept out of the sum
    auto account = [&](long double in, long double out, int sign) {
        inner.add(sign * in);
        if (std::isinf(out))
            unbounded += sign;
        else
            outer.add(sign * out);
    };
    auto push = [&](int side, int depth, long double lo, long double hi) {
        auto [in, out] = bounds(side, lo, hi);
        heap.push({side, depth, lo, hi, in, out});
        account(in, out, 1);
    };
    for (int side = 0; side < 2; ++side)
        for (int k = 0; k < 64; ++k)
            push(side, 6, -1 + k / 32.0L, -1 + (k + 1) / 32.0L);

    while (unbounded > 0 || !(outer.value() - inner.value() <= rel_tol * inner.value())) {
        QCell c = heap.top();
        if (c.depth >= max_depth)
            throw Error(ErrorKind::ToleranceNotMet, "archimedean density bracket too wide at depth cap");
        heap.pop();
        account(c.inner, c.outer, -1);
        long double mid = (c.lo + c.hi) / 2;
        push(c.side, c.depth + 1, c.lo, mid);
        push(c.side, c.depth + 1, mid, c.hi);
    }
    CompensatedSum si, so;
    while (!heap.empty()) {
        si.add(heap.top().inner);
        so.add(heap.top().outer);
        heap.pop();
    }
    return {si.value() * (1 - 1e-15L), so.value() * (1 + 1e-15L)};
}

LocalDensityReport peyre_constant(const FibreConic& C, long double rel_tol)
{
    LocalDensityReport rep;
    rep.sigma_inf = sigma_inf(C, rel_tol);
    rep.prefactor = Rational(1, 2);
    rep.euler_factor = 1;
    for (auto [p, v] : factor_u64(abs_u64(C.delta()))) {
        BadPrime bp{p, v, {}, 0};
        RhoStarTable table;
        bp.sigma = sigma_p(C, p, &table);
        for (int d = 1; d <= v; ++d)
            bp.rho.push_back(table.entries[{p, d}]);
        rep.euler_factor *= bp.sigma / (1 - inv_pow(p, 2));
        rep.bad_primes.push_back(std::move(bp));
    }
    rep.euler_factor.canonicalize();
    long double scale = (long double)rep.prefactor.get_d() * (long double)rep.euler_factor.get_d() /
                        FieldContext::zeta2();
    rep.peyre_constant = {rep.sigma_inf.lo * scale * (1 - 1e-15L), rep.sigma_inf.hi * scale * (1 + 1e-15L)};
    return rep;
}

NonarchCheck nonarch_lower_bound_check(const FibreConic& C, const BigInt& W0, double B_eta)
{
    NonarchCheck res{false, 1, 0};
    auto fac = factor_u64(abs_u64(C.delta()));
    for (auto [p, v] : fac)
        res.lhs *= sigma_p(C, p) / (1 - inv_pow(p, 2));
    res.lhs.canonicalize();

    // divisors of |Delta| built prime by prime, tracking phi
    struct Div {
        u64 a, phi;
    };
    std::vector<Div> divs{{1, 1}};
    for (auto [p, v] : fac) {
        size_t n = divs.size();
        for (size_t i = 0; i < n; ++i) {
            u64 pk = 1;
            for (int k = 1; k <= v; ++k) {
                pk *= p;
                divs.push_back({divs[i].a * pk, divs[i].phi * (pk / p) * (p - 1)});
            }
        }
    }
    for (const auto& d : divs) {
        if ((long double)d.a > (long double)B_eta)
            continue;
        BigInt g;
        mpz_gcd_ui(g.get_mpz_t(), W0.get_mpz_t(), d.a);
        if (g != 1)
            continue;
        Rational r(BigInt((unsigned long)d.phi), BigInt((unsigned long)d.a));
        r.canonicalize();
        res.rhs += r * r;
    }
    res.holds = res.lhs >= res.rhs;
    return res;
}

long double archimedean_floor(const CubicSurfaceNF& X)
{
    auto l1 = [](const BinaryForm& g) {
        long double s = 0;
        for (auto c : g.coeffs())
            s += std::fabs((long double)c);
        return s;
    };
    long double m = std::max(l1(X.b()) + l1(X.e()), l1(X.a()) + l1(X.d()) + l1(X.f()));
    return 4 / m;
}

} // namespace cb
