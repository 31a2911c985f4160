#pragma once

// Integer and rational arithmetic services: primality, factorization,
// multiplicative functions and polynomial root counts modulo m.

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <gmpxx.h>

namespace cb {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;
using BigInt = mpz_class;
using Rational = mpq_class;

/// Univariate integer polynomial, coefficient of x^i at index i.
using IntPoly = std::vector<i64>;

struct PrimePower {
    u64 prime;
    int exponent;
    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct FactoredInteger {
    i64 value = 1;
    std::vector<PrimePower> factors;  // primes strictly increasing

    u64 recompose() const;
};

u64 mulmod(u64 a, u64 b, u64 m);
u64 powmod(u64 base, u64 exp, u64 m);
u64 invmod(u64 a, u64 m);  // requires gcd(a, m) == 1

/// Deterministic Miller-Rabin, exact on the whole 64-bit range.
bool is_prime(u64 n);

/// Complete factorization of a nonzero integer. Throws on zero.
FactoredInteger factor(i64 n);
std::vector<PrimePower> factor_u64(u64 n);

u64 euler_phi(u64 a);
Rational phi_dagger(u64 a);  // prod_{p|a} (1 + 1/p)
int mobius(u64 a);
bool is_squarefree(u64 a);
int valuation(i64 n, u64 p);

/// Number of residues s mod m with g(s) = 0 mod m.
u64 roots_mod(const IntPoly& g, u64 m);

/// Sieve of Eratosthenes over [0, limit]; immutable once built.
class PrimeSieve {
public:
    explicit PrimeSieve(u64 limit);

    u64 limit() const { return limit_; }
    bool is_prime(u64 n) const;
    std::span<const std::uint32_t> primes() const { return primes_; }
    /// primes p <= x
    std::span<const std::uint32_t> primes_upto(u64 x) const;

private:
    u64 limit_;
    std::vector<bool> composite_;
    std::vector<std::uint32_t> primes_;
};

/// Process-wide sieve covering at least [0, limit]; grows on demand.
const PrimeSieve& shared_sieve(u64 limit);

/// Multiplicative function supported on squarefree positive integers,
/// determined by its values at primes.
class MultiplicativeFn {
public:
    using PrimeRule = std::function<long double(u64)>;
    using ExactPrimeRule = std::function<Rational(u64)>;

    explicit MultiplicativeFn(PrimeRule rule, ExactPrimeRule exact = {})
        : rule_(std::move(rule)), exact_(std::move(exact)) {}

    long double at_prime(u64 p) const { return rule_(p); }
    bool has_exact() const { return static_cast<bool>(exact_); }
    Rational exact_at_prime(u64 p) const;

    long double operator()(u64 a) const;
    Rational exact(u64 a) const;

    /// g(p) = k / p
    static MultiplicativeFn harmonic(long k = 1);
    /// mu^2 * phi / id
    static MultiplicativeFn phi_ratio();

private:
    PrimeRule rule_;
    ExactPrimeRule exact_;
};

/// Neumaier-compensated accumulator.
class CompensatedSum {
public:
    void add(long double x)
    {
        long double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    long double value() const { return sum_ + comp_; }

private:
    long double sum_ = 0;
    long double comp_ = 0;
};

inline u64 gcd_u64(u64 a, u64 b)
{
    while (b) {
        u64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline u64 abs_u64(i64 x) { return x < 0 ? u64(0) - u64(x) : u64(x); }

inline i64 floor_div(i64 a, i64 b)
{
    i64 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

inline u64 mod_i64(i64 x, u64 m)
{
    i64 r = x % i64(m);
    return r < 0 ? u64(r + i64(m)) : u64(r);
}

inline u64 mod_i128(i128 x, u64 m)
{
    i128 r = x % i128(m);
    return r < 0 ? u64(r + i128(m)) : u64(r);
}

} // namespace cb
