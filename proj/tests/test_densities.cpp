#include <doctest.h>

#include <cmath>
#include <numeric>

#include "conicbundle/densities.hpp"
#include "conicbundle/error.hpp"
#include "fixtures.hpp"

using namespace cb;
using fixtures::random_conic;
using fixtures::uniform;

namespace {

u64 ipow(u64 p, int d)
{
    u64 r = 1;
    while (d-- > 0)
        r *= p;
    return r;
}

// pairs mod m, not both divisible by any prime of m, annihilating q
u64 scan_rho(const FibreConic& C, u64 m)
{
    auto q = C.param();
    u64 n = 0;
    for (u64 u = 0; u < m; ++u)
        for (u64 v = 0; v < m; ++v) {
            if (std::gcd(std::gcd(u, v), m) != 1)
                continue;
            auto w = q.eval(i128(u), i128(v));
            n += w[0] % i128(m) == 0 && w[1] % i128(m) == 0 && w[2] % i128(m) == 0;
        }
    return n;
}

struct Iv {
    long double lo, hi;
};

Iv mul(Iv a, Iv b)
{
    long double c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    return {*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
}

Iv sq(Iv a)
{
    if (a.lo >= 0)
        return {a.lo * a.lo, a.hi * a.hi};
    if (a.hi <= 0)
        return {a.hi * a.hi, a.lo * a.lo};
    return {0, std::max(a.lo * a.lo, a.hi * a.hi)};
}

Iv lincomb(const std::array<i64, 3>& c, Iv uu, Iv uv, Iv vv)
{
    Iv parts[3] = {uu, uv, vv};
    Iv r{0, 0};
    for (int i = 0; i < 3; ++i) {
        long double a = parts[i].lo * c[size_t(i)], b = parts[i].hi * c[size_t(i)];
        r.lo += std::min(a, b);
        r.hi += std::max(a, b);
    }
    return r;
}

// area bracket of {max(|x|, lambda |y|, |z|) <= 1} by dyadic subdivision of the plane
Bracket dyadic_area(const FibreConic& C, int depth)
{
    auto q = C.param();
    long double R = 1.01L / std::sqrt(certified_min_m(C));
    long double inside = 0, unknown = 0;
    auto rec = [&](auto&& self, long double u0, long double u1, long double v0, long double v1, int d) -> void {
        Iv U{u0, u1}, V{v0, v1};
        Iv uu = sq(U), uv = mul(U, V), vv = sq(V);
        Iv x = lincomb(q.x, uu, uv, vv), y = lincomb(q.y, uu, uv, vv), z = lincomb(q.z, uu, uv, vv);
        auto absmax = [](Iv a) { return std::max(std::fabs(a.lo), std::fabs(a.hi)); };
        auto absmin = [](Iv a) { return (a.lo <= 0 && a.hi >= 0) ? 0.0L : std::min(std::fabs(a.lo), std::fabs(a.hi)); };
        long double hi = std::max({absmax(x), q.lambda * absmax(y), absmax(z)});
        long double lo = std::max({absmin(x), q.lambda * absmin(y), absmin(z)});
        long double area = (u1 - u0) * (v1 - v0);
        if (hi <= 1) {
            inside += area;
            return;
        }
        if (lo > 1)
            return;
        if (d == depth) {
            unknown += area;
            return;
        }
        long double um = (u0 + u1) / 2, vm = (v0 + v1) / 2;
        self(self, u0, um, v0, vm, d + 1);
        self(self, um, u1, v0, vm, d + 1);
        self(self, u0, um, vm, v1, d + 1);
        self(self, um, u1, vm, v1, d + 1);
    };
    rec(rec, -R, R, -R, R, 0);
    return {inside, inside + unknown};
}

} // namespace

TEST_CASE("rho* against a scan of pairs")
{
    FibreConic C12 = fibre_conic(fixtures::s1(), {1, 2});
    CHECK(C12.delta() == -41);
    CHECK(rho_star(C12, 41, 1) == 40);
    CHECK(rho_star(C12, 41, 2) == 0);
    CHECK(rho_star(C12, 41, 1) == scan_rho(C12, 41));

    int tested = 0;
    while (tested < 60) {
        auto maybe = random_conic(12, 1);
        if (!maybe)
            continue;
        const FibreConic& C = *maybe;
        for (u64 p : {2ull, 3ull, 5ull, 7ull}) {
            int v = valuation(C.delta(), p);
            for (int d = 1; d <= v + 1 && ipow(p, d) <= 300; ++d) {
                u64 got = rho_star(C, p, d);
                REQUIRE(got == scan_rho(C, ipow(p, d)));
                // no primitive pair survives beyond the valuation
                if (d == v + 1)
                    REQUIRE(got == 0);
            }
        }
        ++tested;
    }
}

TEST_CASE("rho* is multiplicative across coprime moduli")
{
    int tested = 0;
    while (tested < 25) {
        auto maybe = random_conic(10, 1);
        if (!maybe)
            continue;
        const FibreConic& C = *maybe;
        for (auto [p, a, q, b] : {std::tuple{2ull, 2, 3ull, 1}, {2ull, 1, 5ull, 1}, {3ull, 2, 5ull, 1}, {2ull, 3, 7ull, 1}}) {
            u64 m = ipow(p, a) * ipow(q, b);
            REQUIRE(m <= 1000);
            REQUIRE(scan_rho(C, m) == rho_star(C, p, a) * rho_star(C, q, b));
        }
        ++tested;
    }
}

TEST_CASE("sigma_p")
{
    FibreConic C12 = fibre_conic(fixtures::s1(), {1, 2});
    CHECK(sigma_p(C12, 41) == Rational(80, 41));
    CHECK(sigma_p(C12, 2) == Rational(3, 4));  // 2 does not divide delta
    RhoStarTable table;
    sigma_p(C12, 41, &table);
    CHECK(table.entries.at({41, 1}) == 40);

    LocalDensityReport rep = peyre_constant(C12);
    REQUIRE(rep.bad_primes.size() == 1);
    CHECK(rep.bad_primes[0].p == 41);
    CHECK(rep.bad_primes[0].v == 1);
    CHECK(rep.euler_factor == Rational(41, 21));
    CHECK(rep.prefactor == Rational(1, 2));
    CHECK(peyre_constant(fibre_conic(fixtures::s1(), {1, 1})).bad_primes.empty());
}

TEST_CASE("archimedean density")
{
    FibreConic P = fixtures::plain_conic();
    Bracket b = sigma_inf(P, 1e-6L);
    CHECK(b.lo <= 4);
    CHECK(b.hi >= 4);
    CHECK(b.width() <= 1e-5L);
    // the weight on y: max(|uv|, 2u^2, v^2) <= 1
    Bracket b2 = sigma_inf(P.with_lambda(2), 1e-6L);
    long double expect = 2 * std::sqrt(2.0L);  // |u| <= 1/sqrt 2 and |v| <= 1
    CHECK(b2.lo <= expect);
    CHECK(b2.hi >= expect);

    for (int it = 0; it < 15; ++it) {
        auto maybe = random_conic(9, uniform(1, 4));
        if (!maybe)
            continue;
        const FibreConic& C = *maybe;
        Bracket one = sigma_inf(C, 1e-5L);
        REQUIRE(one.lo > 0);
        REQUIRE(one.width() <= 1.01e-5L * one.hi);
        // scaling the forms by 2 halves the area
        Bracket two = sigma_inf(C.scaled(2), 1e-5L);
        REQUIRE(two.lo <= one.hi / 2 * (1 + 1e-12L));
        REQUIRE(two.hi >= one.lo / 2 * (1 - 1e-12L));
        // independent two-dimensional bracket
        Bracket d = dyadic_area(C, 12);
        REQUIRE(d.lo <= one.hi * (1 + 1e-12L));
        REQUIRE(d.hi >= one.lo * (1 - 1e-12L));
        REQUIRE(d.width() < 0.05L * d.hi);
    }
}

TEST_CASE("Peyre constant of x^2 - yz")
{
    LocalDensityReport rep = peyre_constant(fixtures::plain_conic(), 1e-6L);
    CHECK(rep.bad_primes.empty());
    CHECK(double(rep.peyre_constant.mid()) == doctest::Approx(12 / (M_PI * M_PI)).epsilon(1e-3));
    CHECK(rep.peyre_constant.lo <= 12 / (M_PIl * M_PIl));
    CHECK(rep.peyre_constant.hi >= 12 / (M_PIl * M_PIl));
}

TEST_CASE("Peyre constant predicts the count on a fibre")
{
    FibreConic C = fibre_conic(fixtures::s1(), {1, 1});
    LocalDensityReport rep = peyre_constant(C);
    double ratio = double(count_points(C, 1e5).count) / 1e5;
    CHECK(ratio == doctest::Approx(double(rep.peyre_constant.mid())).epsilon(0.02));
}

TEST_CASE("local density floors over a sweep of fibres")
{
    for (const auto& X : {fixtures::s1(), fixtures::split_fixture()}) {
        long double floor = archimedean_floor(X);
        REQUIRE(floor > 0);
        for (auto st : domain_B(X, 20)) {
            FibreConic C = fibre_conic(X, st);
            Bracket s = sigma_inf(C, 1e-3L);
            long double H = (long double)st.height();
            REQUIRE(s.hi * H * H >= floor);
            NonarchCheck nc = nonarch_lower_bound_check(C, X.W0(), 1e9);
            REQUIRE(nc.holds);
            REQUIRE(nc.lhs >= nc.rhs);
        }
    }
    CHECK(archimedean_floor(fixtures::s1()) == doctest::Approx(4.0L / 4));
}
