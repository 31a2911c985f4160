#pragma once

// Dense univariate polynomials over F_p, coefficient of x^i at index i.
// The zero polynomial is the empty vector.

#include <random>
#include <vector>

#include "conicbundle/numth.hpp"

namespace cb::fp {

using Poly = std::vector<u64>;

void trim(Poly& f);
int deg(const Poly& f);
Poly reduce(const IntPoly& g, u64 p);
Poly reduce(const std::vector<BigInt>& g, u64 p);

Poly add(const Poly& f, const Poly& g, u64 p);
Poly sub(const Poly& f, const Poly& g, u64 p);
Poly mul(const Poly& f, const Poly& g, u64 p);
Poly scale(const Poly& f, u64 c, u64 p);
void divmod(const Poly& f, const Poly& g, u64 p, Poly& q, Poly& r);
Poly mod(const Poly& f, const Poly& g, u64 p);
Poly monic(const Poly& f, u64 p);
Poly gcd(Poly f, Poly g, u64 p);
/// Returns gcd (monic) and Bezout cofactors with s*f + t*g = gcd.
Poly ext_gcd(const Poly& f, const Poly& g, u64 p, Poly& s, Poly& t);
Poly derivative(const Poly& f, u64 p);
u64 eval(const Poly& f, u64 x, u64 p);

/// x^e mod f
Poly powmod_x(u64 e, const Poly& f, u64 p);
Poly powmod(const Poly& base, u64 e, const Poly& f, u64 p);

/// Number of distinct roots of f in F_p; f must be nonzero.
u64 distinct_root_count(const Poly& f, u64 p);

/// All distinct roots of f in F_p, sorted. f nonzero.
std::vector<u64> roots(const Poly& f, u64 p, std::mt19937_64& rng);
std::vector<u64> roots(const Poly& f, u64 p);

/// Distinct-degree factorization of a squarefree monic f: pairs (product, degree).
std::vector<std::pair<Poly, int>> distinct_degree(const Poly& f, u64 p);

/// Complete factorization of a squarefree monic f into monic irreducibles,
/// sorted by (degree, coefficients). p must be odd.
std::vector<Poly> factor_squarefree(const Poly& f, u64 p, std::mt19937_64& rng);

} // namespace cb::fp
