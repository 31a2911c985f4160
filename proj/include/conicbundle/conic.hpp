#pragma once

// Exact rational point counting on conics of the shape
//   Q = a x^2 + b xy + d xz + e yz + f z^2
// with respect to the weighted height max(|x|, lambda |y|, |z|).
// Points are produced through the parameterization
//   q(u, v) = Pi * (u^2, uv, v^2),  Pi = [[b, e, 0], [-a, -d, -f], [0, b, e]],
// whose content divides det(Pi) = a e^2 - b d e + f b^2.

#include <array>
#include <functional>
#include <vector>

#include "conicbundle/numth.hpp"

namespace cb {

using Triple = std::array<i64, 3>;

/// Three binary quadratics (coefficients of u^2, uv, v^2) plus the y-weight.
struct QuadTriple {
    std::array<i64, 3> x{}, y{}, z{};
    i64 lambda = 1;

    std::array<i128, 3> eval(i128 u, i128 v) const;
    /// max(|x|, lambda |y|, |z|) at (u, v)
    i128 norm(i128 u, i128 v) const;
    /// substitute (u, v) = i * b1 + j * b2
    QuadTriple compose(std::array<i64, 2> b1, std::array<i64, 2> b2) const;
};

class FibreConic {
public:
    /// Throws SingularFibre when a e^2 - b d e + f b^2 vanishes.
    FibreConic(i64 a, i64 b, i64 d, i64 e, i64 f, i64 lambda);

    i64 a() const { return a_; }
    i64 b() const { return b_; }
    i64 d() const { return d_; }
    i64 e() const { return e_; }
    i64 f() const { return f_; }
    i64 lambda() const { return lambda_; }
    i64 delta() const { return delta_; }
    std::array<std::array<i64, 3>, 3> Pi() const;

    /// Q(x, y, z)
    i128 Q(i128 x, i128 y, i128 z) const;
    QuadTriple param() const;
    FibreConic with_lambda(i64 lambda) const { return FibreConic(a_, b_, d_, e_, f_, lambda); }
    FibreConic scaled(i64 k) const { return FibreConic(k * a_, k * b_, k * d_, k * e_, k * f_, lambda_); }

private:
    i64 a_, b_, d_, e_, f_, lambda_, delta_;
};

struct HeightedPoint {
    Triple point;  // primitive, first nonzero coordinate positive
    i64 height;
    friend auto operator<=>(const HeightedPoint&, const HeightedPoint&) = default;
};

/// q(u, v); rejects (0, 0).
Triple parameterize(const FibreConic& C, i64 u, i64 v);

/// Height of the projective point p, after reduction to primitive form.
i64 height(const FibreConic& C, const Triple& p);
i64 height(i64 lambda, const Triple& p);

/// Primitive representative with first nonzero coordinate positive.
Triple normalize_point(const std::array<i128, 3>& p);

/// Certified lower bound for min max(|x|, lambda|y|, |z|) over the boundary
/// of the unit box. Throws CannotCertify if no positive bound is found.
long double certified_min_m(const QuadTriple& q);
long double certified_min_m(const FibreConic& C);

/// Directions (u : v) in P^1(Z/p^k) with q(u, v) = 0 mod p^k, as
/// representatives (1, v) or (u, 1) with p | u. Exhaustive for
/// p^k <= 10^6, lifted from p^(k-1) above that.
std::vector<std::array<u64, 2>> conic_directions(const FibreConic& C, u64 p, int k);

struct ConicCount {
    u64 count = 0;
    bool certified = true;
    u64 candidates = 0;  // lattice points examined
};

using PointSink = std::function<void(const HeightedPoint&)>;

/// Exact count of points on C with H_lambda <= B, by enumeration of the
/// parameter lattices attached to each possible content g | delta.
ConicCount count_points(const FibreConic& C, double B, const PointSink& sink = {});

/// Reference enumeration over the box max(|u|,|v|) <= ceil(u_scale * sqrt(B |delta| / m_Q)).
ConicCount count_points_box(const FibreConic& C, double B, const PointSink& sink = {}, double u_scale = 1.0);

} // namespace cb
