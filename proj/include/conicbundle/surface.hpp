#pragma once

// Cubic surfaces  F = a x2^2 + d x2 x3 + f x3^2 + b x2 + e x3  with a, d, f
// linear and b, e quadratic forms in (x0, x1), and their conic bundle
// structure over P^1 given by (x0 : x1).

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "conicbundle/conic.hpp"
#include "conicbundle/forms.hpp"

namespace cb {

/// Ground field data. Only Q is implemented; the constants are kept so that
/// reports state the normalization used.
struct FieldContext {
    int r1 = 1;
    int r2 = 0;
    i64 class_number = 1;
    i64 roots_of_unity = 2;
    i64 abs_discriminant = 1;
    long double regulator = 1;

    static FieldContext rationals() { return {}; }
    /// zeta(2) for the rationals
    static long double zeta2();
};

/// Primitive coprime pair (s, t) with s > 0, or (0, 1).
struct FibreIndex {
    i64 s = 0;
    i64 t = 1;

    static FibreIndex normalized(i64 s, i64 t);
    i64 height() const;
    friend auto operator<=>(const FibreIndex&, const FibreIndex&) = default;
};

/// Point of P^3 with coprime coordinates, first nonzero coordinate positive.
struct ProjPoint3 {
    std::array<i64, 4> x{};

    static ProjPoint3 normalized(std::array<i128, 4> v);
    i64 height() const;
    friend auto operator<=>(const ProjPoint3&, const ProjPoint3&) = default;
};

class CubicSurfaceNF {
public:
    /// Validates degrees, W0 = Res(b, e) != 0, Delta != 0 and separability of
    /// Delta; every violated condition is reported in one ValidationError.
    static CubicSurfaceNF validate(const BinaryForm& a, const BinaryForm& d, const BinaryForm& f,
                                   const BinaryForm& b, const BinaryForm& e);

    const BinaryForm& a() const { return a_; }
    const BinaryForm& d() const { return d_; }
    const BinaryForm& f() const { return f_; }
    const BinaryForm& b() const { return b_; }
    const BinaryForm& e() const { return e_; }
    const BinaryForm& delta() const { return delta_; }
    const BigInt& W0() const { return W0_; }
    const FactorizationQ& delta_factorization() const { return fac_; }
    int picard_rank() const { return rho_; }
    int r() const { return rho_ - 2; }
    const FieldContext& field() const { return field_; }

    i128 F(const std::array<i64, 4>& x) const;
    /// the two quadrics with F = x0 Q0 + x1 Q1, split by the x0-terms
    std::array<i128, 2> Q01(const std::array<i64, 4>& x) const;

    /// JSON object {"a":[..],"d":[..],"f":[..],"b":[..],"e":[..]}
    std::string to_json() const;
    /// stable hexadecimal digest of the coefficients
    std::string digest() const;

private:
    BinaryForm a_, d_, f_, b_, e_, delta_;
    BigInt W0_;
    FactorizationQ fac_;
    int rho_ = 0;
    FieldContext field_;
};

CubicSurfaceNF parse_surface_json(const std::string& text);

/// Q_(s,t) with height weight max(|s|, |t|); throws SingularFibre when Delta(s,t) = 0.
FibreConic fibre_conic(const CubicSurfaceNF& X, FibreIndex st);

/// (x : y : z) on the fibre conic -> (s y : t y : x : z) in P^3
ProjPoint3 phi_map(FibreIndex st, const Triple& p);

/// Fibre containing x; on the line x0 = x1 = 0 it is (-Q1 : Q0) evaluated
/// through the x0-split. Empty where both vanish.
std::optional<FibreIndex> pi_map(const CubicSurfaceNF& X, const ProjPoint3& x);

/// Nonsingular fibres with max(|s|,|t|) <= x, in lexicographic (s, t) order.
std::vector<FibreIndex> domain_B(const CubicSurfaceNF& X, double x);

/// Rational line through two distinct integer points.
struct RationalLine {
    ProjPoint3 p, q;
    bool contains(const ProjPoint3& x) const;
};

/// x0 = x1 = 0 and x2 = x3 = 0, plus lines off the singular fibres found by
/// pairing points of height <= height_bound on two nonsingular fibres.
std::vector<RationalLine> find_rational_lines(const CubicSurfaceNF& X, i64 height_bound = 1000);

/// Points with all partial derivatives zero, coordinates bounded by height_bound.
std::vector<ProjPoint3> find_singular_points(const CubicSurfaceNF& X, i64 height_bound = 50);

struct BruteForceOptions {
    bool nonsingular_fibres_only = true;
    std::optional<i64> fibre_height_cap;
    const std::vector<RationalLine>* exclude_lines = nullptr;
    bool collect_points = false;
};

struct BruteForceCount {
    u64 count = 0;
    u64 singular_fibre = 0;  // skipped, on singular fibres
    u64 on_lines = 0;        // skipped, on an excluded line
    u64 above_cap = 0;       // skipped, fibre above the height cap
    u64 no_fibre = 0;        // skipped, pi undefined
    std::vector<ProjPoint3> points;
};

/// Direct enumeration of X(Q) with max |x_i| <= B.
BruteForceCount brute_force_surface_count(const CubicSurfaceNF& X, i64 B, const BruteForceOptions& opts = {});

} // namespace cb
