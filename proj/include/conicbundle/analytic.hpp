#pragma once

// Partial sums of squarefree-supported multiplicative functions and the
// arithmetic of the discriminant: root statistics of its factors, the
// exceptional modulus W_F, and the sums used in the lower bound argument.

#include <optional>
#include <vector>

#include "conicbundle/numth.hpp"
#include "conicbundle/surface.hpp"

namespace cb {

struct DeltaFactorData {
    std::vector<BinaryForm> delta_i;
    std::vector<i64> a_i;        // Delta_i(1, 0), or 1 when that vanishes
    BigInt W_F;                  // content * W0 * prod_{i != j} Res(Delta_i, Delta_j) * prod a_i
    BigInt W_F_without_content;
    /// primes dividing exactly one of the two variants
    std::vector<u64> flagged_primes;
};

DeltaFactorData delta_factor_data(const CubicSurfaceNF& X);

/// tau_i(p): roots of Delta_i(x, 1) mod p, or 1 when Delta_i(1, 0) = 0.
u64 tau(const BinaryForm& delta_i, u64 p);

/// primitive (sigma, tau) mod p with Delta(sigma, tau) = 0 mod p
u64 varrho_star_delta_prime(const BinaryForm& delta, u64 p);

/// multiplicative extension to squarefree a; throws InvalidArgument otherwise
u64 varrho_star_delta(const CubicSurfaceNF& X, u64 a);

struct TauStatistics {
    long double sum_over_p;      // sum_{p <= x} tau(p) / p
    long double sum_log_over_p;  // sum_{p <= x} tau(p) log p / p
};

/// tau(p) = number of roots of delta mod p (delta = x gives tau = 1)
TauStatistics tau_statistics(const IntPoly& delta, double x);
TauStatistics tau_statistics(const BinaryForm& delta_i, double x);

struct WirsingReport {
    long double k_hat = 0;
    long double c_hat = 0;
    long double shift = 0;          // h in S ~ c (log x + h)^k
    long double fit_residual = 0;   // max |log S - model| over fitted checkpoints
    long double a15_slope = 0;      // sum_{p<=y} g(p) log p against log y
    long double a15_residual = 0;
    long double a16_worst_ratio = 0;
    long double a17_value = 0;
    std::vector<std::pair<double, long double>> sums_at;
    std::vector<std::pair<double, Rational>> exact_sums_at;  // filled when requested
};

struct WirsingOptions {
    bool exact = false;  // also accumulate exact rational sums (small x only)
    /// exclude primes dividing this modulus from the support
    std::optional<BigInt> coprime_to;
};

/// sum_{a <= y} g(a) over squarefree a, at each checkpoint y (max checkpoint = x)
WirsingReport wirsing_sum(const MultiplicativeFn& g, double x, std::vector<double> checkpoints,
                          const WirsingOptions& opts = {});

/// Exponent fit of S(y) ~ c (log y + h)^k over the supplied points.
struct ExponentFit {
    long double k, c, h, residual;
};
ExponentFit fit_log_power(const std::vector<std::pair<double, long double>>& sums, double from_x);

/// g(p) = varrho*(p) (p - 1)^2 / p^4 for p coprime to the modulus, else 0
MultiplicativeFn final_lemma_function(const CubicSurfaceNF& X, bool strict);

/// sum over squarefree a <= x coprime to W0 (or W_F when strict) of varrho*(a) phi(a)^2 / a^4,
/// by a direct loop over a
long double final_lemma_sum(const CubicSurfaceNF& X, double x, bool strict = false);
Rational final_lemma_sum_exact(const CubicSurfaceNF& X, double x, bool strict = false);

/// sum of H(s:t)^-2 over coprime (s, t), s > 0, (s, t) = (sigma, tau) mod a,
/// H <= x, Delta(s, t) != 0
Rational G_sum_exact(const CubicSurfaceNF& X, i64 sigma, i64 tau, u64 a, double x);
long double G_sum(const CubicSurfaceNF& X, i64 sigma, i64 tau, u64 a, double x);

} // namespace cb
