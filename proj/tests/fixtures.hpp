#pragma once

#include <numeric>
#include <optional>
#include <random>
#include <tuple>
#include <type_traits>

#include "conicbundle/error.hpp"
#include "conicbundle/surface.hpp"

namespace fixtures {

using namespace cb;

inline BinaryForm lin(i64 c0, i64 c1) { return BinaryForm(1, {c0, c1}); }
inline BinaryForm quad(i64 c0, i64 c1, i64 c2) { return BinaryForm(2, {c0, c1, c2}); }

// a = s, d = t, f = s - t, b = s^2 + t^2, e = st
inline CubicSurfaceNF s1()
{
    return CubicSurfaceNF::validate(lin(1, 0), lin(0, 1), lin(1, -1), quad(1, 0, 1), quad(0, 1, 0));
}

// x^2 - yz
inline FibreConic plain_conic() { return FibreConic(1, 0, 0, -1, 0, 1); }

// a e^2 - b d e + f b^2 on coefficient arrays
inline std::array<i64, 6> quintic(const std::array<i64, 2>& a, const std::array<i64, 2>& d,
                                  const std::array<i64, 2>& f, const std::array<i64, 3>& b,
                                  const std::array<i64, 3>& e)
{
    auto mul = [](const auto& x, const auto& y) {
        std::array<i64, std::tuple_size_v<std::decay_t<decltype(x)>> + std::tuple_size_v<std::decay_t<decltype(y)>> - 1> r{};
        for (size_t i = 0; i < x.size(); ++i)
            for (size_t j = 0; j < y.size(); ++j)
                r[i + j] += x[i] * y[j];
        return r;
    };
    auto t1 = mul(a, mul(e, e)), t2 = mul(d, mul(b, e)), t3 = mul(f, mul(b, b));
    std::array<i64, 6> out{};
    for (size_t i = 0; i < 6; ++i)
        out[i] = t1[i] - t2[i] + t3[i];
    return out;
}

// First surface (coefficients in [-2, 2], fixed scan order) whose discriminant
// splits into five distinct rational linear factors, two of them s and t, with
// W0 != 0 and no singular point on the line x0 = x1 = 0. The last condition
// says the x0- and x1-parts of a x2^2 + d x2 x3 + f x3^2 are coprime.
inline CubicSurfaceNF split_fixture()
{
    static std::optional<CubicSurfaceNF> cached;
    if (cached)
        return *cached;
    const int R = 2;
    // Delta(1, 0) = a0 e0^2 - b0 d0 e0 + f0 b0^2 and Delta(0, 1) likewise must vanish
    struct Edge {
        i64 a, d, f, b, e;
    };
    std::vector<Edge> edges;
    for (i64 a = -R; a <= R; ++a)
        for (i64 d = -R; d <= R; ++d)
            for (i64 f = -R; f <= R; ++f)
                for (i64 b = -R; b <= R; ++b)
                    for (i64 e = -R; e <= R; ++e)
                        if (a * e * e - b * d * e + f * b * b == 0)
                            edges.push_back({a, d, f, b, e});
    auto rational_zeros = [](const std::array<i64, 6>& D) {
        int n = 0;
        for (i64 s = 0; s <= 6; ++s)
            for (i64 t = -6; t <= 6; ++t) {
                if (std::gcd(s, t) != 1 || (s == 0 && t != 1))
                    continue;
                i64 v = 0, ps = 1;
                for (int i = 5; i >= 0; --i, ps *= s) {
                    i64 pt = 1;
                    for (int j = 0; j < i; ++j)
                        pt *= t;
                    v += D[size_t(i)] * ps * pt;
                }
                n += v == 0;
            }
        return n;
    };
    for (const auto& L : edges)
        for (const auto& H : edges) {
            std::array<i64, 2> a{L.a, H.a}, d{L.d, H.d}, f{L.f, H.f};
            BinaryForm A0 = quad(a[0], d[0], f[0]), A1 = quad(a[1], d[1], f[1]);
            if (A0.is_zero() || A1.is_zero() || resultant(A0, A1) == 0)
                continue;
            for (i64 b1 = -R; b1 <= R; ++b1)
                for (i64 e1 = -R; e1 <= R; ++e1) {
                    std::array<i64, 3> b{L.b, b1, H.b}, e{L.e, e1, H.e};
                    auto D = quintic(a, d, f, b, e);
                    if (rational_zeros(D) != 5)
                        continue;
                    BinaryForm B = quad(b[0], b[1], b[2]), E = quad(e[0], e[1], e[2]);
                    if (resultant(B, E) == 0)
                        continue;
                    try {
                        auto X = CubicSurfaceNF::validate(lin(a[0], a[1]), lin(d[0], d[1]), lin(f[0], f[1]), B, E);
                        if (X.r() != 5)
                            continue;
                        cached = X;
                        return *cached;
                    } catch (const ValidationError&) {
                    }
                }
        }
    throw std::runtime_error("no split fixture in the search box");
}

inline std::mt19937_64& rng()
{
    static std::mt19937_64 r(20261015);
    return r;
}

inline i64 uniform(i64 lo, i64 hi) { return std::uniform_int_distribution<i64>(lo, hi)(rng()); }

// coefficients uniform in [-r, r]; empty when the conic is singular
inline std::optional<FibreConic> random_conic(i64 r, i64 lambda)
{
    i64 a = uniform(-r, r), b = uniform(-r, r), d = uniform(-r, r), e = uniform(-r, r), f = uniform(-r, r);
    if (a * e * e - b * d * e + f * b * b == 0)
        return std::nullopt;
    return FibreConic(a, b, d, e, f, lambda);
}

} // namespace fixtures
