#include <doctest.h>

#include <numeric>

#include "conicbundle/error.hpp"
#include "conicbundle/numth.hpp"
#include "fixtures.hpp"

using namespace cb;

namespace {

bool trial_prime(u64 n)
{
    if (n < 2)
        return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

u64 naive_phi(u64 n)
{
    u64 c = 0;
    for (u64 k = 1; k <= n; ++k)
        c += std::gcd(k, n) == 1;
    return c;
}

u64 naive_roots(const IntPoly& g, u64 m)
{
    u64 c = 0;
    for (u64 s = 0; s < m; ++s) {
        i128 acc = 0, pw = 1;
        for (i64 c0 : g) {
            acc = (acc + i128(c0) * pw) % i128(m);
            pw = pw * i128(s) % i128(m);
        }
        c += acc % i128(m) == 0;
    }
    return c;
}

} // namespace

TEST_CASE("primality agrees with trial division")
{
    for (u64 n = 0; n < 20000; ++n)
        REQUIRE(is_prime(n) == trial_prime(n));
    CHECK(is_prime(18446744073709551557ull));
    CHECK_FALSE(is_prime(3215031751ull));           // strong pseudoprime to 2, 3, 5, 7
    CHECK_FALSE(is_prime(3825123056546413051ull));  // strong pseudoprime to the first nine primes
    CHECK(is_prime(1000000007ull));
}

TEST_CASE("sieve counts primes")
{
    const PrimeSieve& S = shared_sieve(1000000);
    CHECK(S.primes_upto(1000000).size() == 78498);
    CHECK(S.primes_upto(100).size() == 25);
    CHECK(S.primes_upto(1).empty());
    for (u64 n = 0; n < 5000; ++n)
        REQUIRE(S.is_prime(n) == trial_prime(n));
}

TEST_CASE("factorization recomposes and uses primes")
{
    auto& g = fixtures::rng();
    for (int it = 0; it < 2000; ++it) {
        i64 n = std::uniform_int_distribution<i64>(-(i64(1) << 50), i64(1) << 50)(g);
        if (n == 0)
            continue;
        FactoredInteger f = factor(n);
        CHECK(f.recompose() == abs_u64(n));
        for (size_t i = 0; i < f.factors.size(); ++i) {
            CHECK(is_prime(f.factors[i].prime));
            if (i)
                CHECK(f.factors[i - 1].prime < f.factors[i].prime);
        }
    }
    CHECK(factor(-576).factors == std::vector<PrimePower>{{2, 6}, {3, 2}});
    CHECK_THROWS_AS(factor(0), Error);
    // product of two primes near 2^31
    u64 p = 2147483647ull, q = 2147483629ull;
    auto fq = factor_u64(p * q);
    REQUIRE(fq.size() == 2);
    CHECK(fq[0].prime * fq[1].prime == p * q);
}

TEST_CASE("phi, mobius and squarefreeness match naive definitions")
{
    for (u64 n = 1; n <= 3000; ++n) {
        REQUIRE(euler_phi(n) == naive_phi(n));
        bool sf = true;
        int parity = 1;
        u64 m = n;
        for (u64 p = 2; p <= m; ++p) {
            if (m % p)
                continue;
            int e = 0;
            while (m % p == 0)
                m /= p, ++e;
            sf = sf && e == 1;
            parity = -parity;
        }
        REQUIRE(is_squarefree(n) == sf);
        REQUIRE(mobius(n) == (sf ? parity : 0));
    }
    CHECK(phi_dagger(12) == Rational(2, 1));  // (3/2)(4/3)
    CHECK(phi_dagger(1) == 1);
    CHECK(valuation(-576, 2) == 6);
    CHECK(valuation(7, 2) == 0);
}

TEST_CASE("modular arithmetic")
{
    CHECK(mulmod(~u64(0) - 1, ~u64(0) - 1, ~u64(0)) == 1);
    CHECK(powmod(2, 10, 1000) == 24);
    for (u64 m : {7ull, 97ull, 1000003ull, 999999999989ull})
        for (u64 a = 1; a < 50; ++a)
            if (gcd_u64(a, m) == 1)
                CHECK(mulmod(a, invmod(a, m), m) == 1);
    CHECK(floor_div(-7, 2) == -4);
    CHECK(floor_div(7, -2) == -4);
    CHECK(floor_div(6, 3) == 2);
    CHECK(mod_i64(-1, 5) == 4);
}

TEST_CASE("roots_mod matches scanning")
{
    auto& g = fixtures::rng();
    for (int it = 0; it < 300; ++it) {
        IntPoly f(std::uniform_int_distribution<int>(1, 6)(g));
        for (auto& c : f)
            c = fixtures::uniform(-20, 20);
        u64 m = u64(fixtures::uniform(1, 400));
        REQUIRE(roots_mod(f, m) == naive_roots(f, m));
    }
    CHECK(roots_mod({1, 0, 1}, 5) == 2);
    CHECK(roots_mod({1, 0, 1}, 25) == 2);
    CHECK(roots_mod({1, 0, 1}, 3) == 0);
    CHECK(roots_mod({0, 0, 1}, 16) == 4);
    // prime power above the scanning range
    CHECK(roots_mod({1, 0, 1}, 1009ull * 1009ull) == 2);
    CHECK(roots_mod({-11, 0, 1}, 1009ull * 1009ull) == 0);  // 11 is a non-residue mod 1009
    CHECK(roots_mod({-2, 0, 1}, 1009ull * 1009ull) == 2);
}

TEST_CASE("multiplicative functions")
{
    MultiplicativeFn h = MultiplicativeFn::harmonic(2);
    CHECK(h(1) == doctest::Approx(1.0));
    CHECK(double(h(6)) == doctest::Approx(4.0 / 6.0));
    CHECK(h(4) == 0);
    CHECK(h.exact(30) == Rational(4, 15));
    MultiplicativeFn r = MultiplicativeFn::phi_ratio();
    CHECK(r.exact(15) == Rational(8, 15));
    CHECK(r(9) == 0);
}

TEST_CASE("compensated summation")
{
    CompensatedSum s;
    s.add(1e20L);
    for (int i = 0; i < 1000; ++i)
        s.add(1.0L);
    s.add(-1e20L);
    CHECK(double(s.value()) == doctest::Approx(1000.0));
}
