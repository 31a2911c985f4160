#pragma once

// Local densities of fibre conics and the Peyre constant
//   c = 1/2 * sigma_inf * (1/zeta(2)) * prod_{p | Delta} sigma_p / (1 - p^-2).

#include <map>
#include <vector>

#include "conicbundle/conic.hpp"
#include "conicbundle/surface.hpp"

namespace cb {

struct Bracket {
    long double lo = 0;
    long double hi = 0;
    long double mid() const { return (lo + hi) / 2; }
    long double width() const { return hi - lo; }
};

/// primitive pairs mod p^d annihilating q (exact; p^d need not be small)
u64 rho_star(const FibreConic& C, u64 p, int d);

struct RhoStarTable {
    std::map<std::pair<u64, int>, u64> entries;
};

/// 1 - p^-2 + (1 - 1/p) sum_{d=1}^{v_p(Delta)} rho*(p^d) / p^d
Rational sigma_p(const FibreConic& C, u64 p, RhoStarTable* table = nullptr);

/// Area of { y in R^2 : max(|x(y)|, lambda |y(y)|, |z(y)|) <= 1 }, bracketed to
/// relative width rel_tol. Throws ToleranceNotMet past the depth cap.
Bracket sigma_inf(const FibreConic& C, long double rel_tol = 1e-4L, int max_depth = 24);

struct BadPrime {
    u64 p;
    int v;                 // v_p(Delta)
    std::vector<u64> rho;  // rho*(p^d), d = 1..v
    Rational sigma;
};

struct LocalDensityReport {
    Bracket sigma_inf;
    std::vector<BadPrime> bad_primes;
    Rational euler_factor;  // prod over bad p of sigma_p / (1 - p^-2)
    Rational prefactor;     // 1/2 over Q
    Bracket peyre_constant;
};

LocalDensityReport peyre_constant(const FibreConic& C, long double rel_tol = 1e-4L);

struct NonarchCheck {
    bool holds;
    Rational lhs;  // prod_{p | Delta} sigma_p / (1 - p^-2)
    Rational rhs;  // sum over a | Delta, a <= B_eta, gcd(a, W0) = 1 of (phi(a)/a)^2
};

/// The common factor 1/zeta(2) is cancelled from both sides.
NonarchCheck nonarch_lower_bound_check(const FibreConic& C, const BigInt& W0, double B_eta);

/// 4 / max(|b|_1 + |e|_1, |a|_1 + |d|_1 + |f|_1), a lower bound for
/// sigma_inf * H(s:t)^2 over all fibres (|g|_1 = sum of absolute coefficients).
long double archimedean_floor(const CubicSurfaceNF& X);

} // namespace cb
