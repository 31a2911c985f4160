#include "conicbundle/surface.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

#include "conicbundle/error.hpp"

namespace cb {

namespace {

i128 abs128(i128 x) { return x < 0 ? -x : x; }

u128 gcd128(u128 a, u128 b)
{
    while (b) {
        u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

i64 narrow(i128 v)
{
    if (v > i128(INT64_MAX) || v < i128(INT64_MIN))
        throw Error(ErrorKind::Overflow, "value exceeds 64 bits");
    return i64(v);
}

// exact integer square root of a nonnegative value, or -1 if not a square
i128 exact_sqrt(i128 n)
{
    if (n < 0)
        return -1;
    i128 r = i128(std::sqrt((long double)n));
    while (r > 0 && r * r > n)
        --r;
    while ((r + 1) * (r + 1) <= n)
        ++r;
    return r * r == n ? r : -1;
}

} // namespace

long double FieldContext::zeta2() { return std::numbers::pi_v<long double> * std::numbers::pi_v<long double> / 6; }

FibreIndex FibreIndex::normalized(i64 s, i64 t)
{
    if (s == 0 && t == 0)
        throw Error(ErrorKind::InvalidArgument, "fibre index (0, 0)");
    i64 g = i64(gcd_u64(abs_u64(s), abs_u64(t)));
    s /= g;
    t /= g;
    if (s < 0 || (s == 0 && t < 0)) {
        s = -s;
        t = -t;
    }
    return {s, t};
}

i64 FibreIndex::height() const { return std::max(std::abs(s), std::abs(t)); }

ProjPoint3 ProjPoint3::normalized(std::array<i128, 4> v)
{
    u128 g = 0;
    for (auto c : v)
        g = gcd128(g, u128(abs128(c)));
    if (g == 0)
        throw Error(ErrorKind::InvalidArgument, "zero vector is not a point of P^3");
    for (auto& c : v)
        c /= i128(g);
    for (auto c : v) {
        if (c == 0)
            continue;
        if (c < 0)
            for (auto& w : v)
                w = -w;
        break;
    }
    return {{narrow(v[0]), narrow(v[1]), narrow(v[2]), narrow(v[3])}};
}

i64 ProjPoint3::height() const
{
    i64 h = 0;
    for (auto c : x)
        h = std::max(h, std::abs(c));
    return h;
}

CubicSurfaceNF CubicSurfaceNF::validate(const BinaryForm& a, const BinaryForm& d, const BinaryForm& f,
                                        const BinaryForm& b, const BinaryForm& e)
{
    if (a.degree() != 1 || d.degree() != 1 || f.degree() != 1 || b.degree() != 2 || e.degree() != 2)
        throw Error(ErrorKind::DegreeMismatch, "expected degrees 1, 1, 1, 2, 2 for a, d, f, b, e");

    CubicSurfaceNF X;
    X.a_ = a;
    X.d_ = d;
    X.f_ = f;
    X.b_ = b;
    X.e_ = e;

    std::vector<ErrorKind> failures;
    std::vector<std::string> reasons;
    if (b.is_zero() || e.is_zero()) {
        X.W0_ = 0;
    } else {
        X.W0_ = resultant(b, e);
    }
    if (X.W0_ == 0) {
        failures.push_back(ErrorKind::ZeroResultant);
        reasons.push_back("Res(b, e) = 0");
    }
    X.delta_ = discriminant_quintic(a, d, f, b, e);
    if (X.delta_.is_zero()) {
        failures.push_back(ErrorKind::DegenerateForm);
        reasons.push_back("Delta vanishes identically");
    } else if (!is_separable(X.delta_)) {
        failures.push_back(ErrorKind::SeparabilityFailure);
        reasons.push_back("Delta = " + X.delta_.to_string() + " has a repeated factor");
    }
    if (!failures.empty()) {
        std::string msg;
        for (size_t i = 0; i < reasons.size(); ++i)
            msg += (i ? "; " : "") + reasons[i];
        throw ValidationError(std::move(failures), msg);
    }
    X.fac_ = factor_over_Q(X.delta_);
    X.rho_ = cb::picard_rank(X.fac_);
    return X;
}

i128 CubicSurfaceNF::F(const std::array<i64, 4>& x) const
{
    i128 x2 = x[2], x3 = x[3];
    return a_(x[0], x[1]) * x2 * x2 + d_(x[0], x[1]) * x2 * x3 + f_(x[0], x[1]) * x3 * x3 +
           b_(x[0], x[1]) * x2 + e_(x[0], x[1]) * x3;
}

std::array<i128, 2> CubicSurfaceNF::Q01(const std::array<i64, 4>& x) const
{
    i128 x0 = x[0], x1 = x[1], x2 = x[2], x3 = x[3];
    i128 q0 = a_.coeff(0) * x2 * x2 + d_.coeff(0) * x2 * x3 + f_.coeff(0) * x3 * x3 +
              (b_.coeff(0) * x0 + b_.coeff(1) * x1) * x2 + (e_.coeff(0) * x0 + e_.coeff(1) * x1) * x3;
    i128 q1 = a_.coeff(1) * x2 * x2 + d_.coeff(1) * x2 * x3 + f_.coeff(1) * x3 * x3 + b_.coeff(2) * x1 * x2 +
              e_.coeff(2) * x1 * x3;
    return {q0, q1};
}

std::string CubicSurfaceNF::to_json() const
{
    auto arr = [](const BinaryForm& g) { return fmt::format("[{}]", fmt::join(g.coeffs(), ",")); };
    return fmt::format(R"({{"a":{},"d":{},"f":{},"b":{},"e":{}}})", arr(a_), arr(d_), arr(f_), arr(b_), arr(e_));
}

std::string CubicSurfaceNF::digest() const
{
    u64 h = 0xcbf29ce484222325ULL;
    for (unsigned char c : to_json()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return fmt::format("{:016x}", h);
}

CubicSurfaceNF parse_surface_json(const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorKind::Parse, ex.what());
    }
    if (j.is_object() && j.contains("surface"))
        j = j["surface"];
    if (!j.is_object())
        throw Error(ErrorKind::Parse, "surface must be a JSON object");
    auto form = [&](const char* key, int degree) {
        if (!j.contains(key))
            throw Error(ErrorKind::Parse, fmt::format("missing coefficient array '{}'", key));
        const auto& arr = j[key];
        if (!arr.is_array() || arr.size() != size_t(degree + 1))
            throw Error(ErrorKind::Parse, fmt::format("'{}' must be an array of {} integers", key, degree + 1));
        std::vector<i64> c;
        for (const auto& v : arr) {
            if (!v.is_number_integer())
                throw Error(ErrorKind::Parse, fmt::format("'{}' has a non-integer entry", key));
            c.push_back(v.get<i64>());
        }
        return BinaryForm(degree, c);
    };
    return CubicSurfaceNF::validate(form("a", 1), form("d", 1), form("f", 1), form("b", 2), form("e", 2));
}

FibreConic fibre_conic(const CubicSurfaceNF& X, FibreIndex st)
{
    auto ev = [&](const BinaryForm& g) { return narrow(g(st.s, st.t)); };
    if (X.delta()(st.s, st.t) == 0)
        throw Error(ErrorKind::SingularFibre, fmt::format("Delta({}, {}) = 0", st.s, st.t));
    return FibreConic(ev(X.a()), ev(X.b()), ev(X.d()), ev(X.e()), ev(X.f()), st.height());
}

ProjPoint3 phi_map(FibreIndex st, const Triple& p)
{
    if (p[0] == 0 && p[1] == 0 && p[2] == 0)
        throw Error(ErrorKind::InvalidArgument, "zero vector is not a point of P^2");
    return ProjPoint3::normalized({i128(st.s) * p[1], i128(st.t) * p[1], p[0], p[2]});
}

std::optional<FibreIndex> pi_map(const CubicSurfaceNF& X, const ProjPoint3& x)
{
    if (x.x[0] != 0 || x.x[1] != 0)
        return FibreIndex::normalized(x.x[0], x.x[1]);
    auto [q0, q1] = X.Q01(x.x);
    if (q0 == 0 && q1 == 0)
        return std::nullopt;
    // F = x0 Q0 - x1 (-Q1); pi = (Q1' : Q0) with Q1' = -q1
    i128 s = -q1, t = q0;
    u128 g = gcd128(u128(abs128(s)), u128(abs128(t)));
    return FibreIndex::normalized(narrow(s / i128(g)), narrow(t / i128(g)));
}

std::vector<FibreIndex> domain_B(const CubicSurfaceNF& X, double x)
{
    if (!(x >= 1))
        throw Error(ErrorKind::InvalidArgument, "domain_B needs x >= 1");
    i64 n = i64(std::floor(x));
    std::vector<FibreIndex> out;
    if (X.delta()(0, 1) != 0)
        out.push_back({0, 1});
    for (i64 s = 1; s <= n; ++s)
        for (i64 t = -n; t <= n; ++t)
            if (gcd_u64(u64(s), abs_u64(t)) == 1 && X.delta()(s, t) != 0)
                out.push_back({s, t});
    return out;
}

bool RationalLine::contains(const ProjPoint3& x) const
{
    // all 3x3 minors of the rows p, q, x vanish
    const auto &P = p.x, &Q = q.x, &R = x.x;
    for (int skip = 0; skip < 4; ++skip) {
        std::array<int, 3> c{};
        for (int i = 0, k = 0; i < 4; ++i)
            if (i != skip)
                c[size_t(k++)] = i;
        auto m = [&](const std::array<i64, 4>& v, int i) { return i128(v[size_t(c[size_t(i)])]); };
        i128 det = m(P, 0) * (m(Q, 1) * m(R, 2) - m(Q, 2) * m(R, 1)) -
                   m(P, 1) * (m(Q, 0) * m(R, 2) - m(Q, 2) * m(R, 0)) +
                   m(P, 2) * (m(Q, 0) * m(R, 1) - m(Q, 1) * m(R, 0));
        if (det != 0)
            return false;
    }
    return true;
}

std::vector<RationalLine> find_rational_lines(const CubicSurfaceNF& X, i64 height_bound)
{
    std::vector<RationalLine> lines{
        {ProjPoint3{{0, 0, 1, 0}}, ProjPoint3{{0, 0, 0, 1}}},
        {ProjPoint3{{1, 0, 0, 0}}, ProjPoint3{{0, 1, 0, 0}}},
    };
    // a line other than x0 = x1 = 0 that is not inside a fibre meets every fibre plane once
    std::vector<FibreIndex> fibres;
    for (double r = 1; fibres.size() < 2; r += 1) {
        fibres = domain_B(X, r);
        if (r > 16)
            return lines;
    }
    std::array<std::vector<ProjPoint3>, 2> pts;
    for (int k = 0; k < 2; ++k) {
        FibreIndex st = fibres[size_t(k)];
        FibreConic C = fibre_conic(X, st);
        count_points(C, double(height_bound), [&](const HeightedPoint& hp) {
            if (hp.point[1] != 0)
                pts[size_t(k)].push_back(phi_map(st, hp.point));
        });
    }
    std::set<std::array<i64, 6>> seen;
    auto add = [&](const std::array<i128, 4>& P, const std::array<i128, 4>& Q) {
        std::array<i128, 6> pl{};
        int k = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                pl[size_t(k++)] = P[size_t(i)] * Q[size_t(j)] - P[size_t(j)] * Q[size_t(i)];
        u128 g = 0;
        for (auto c : pl)
            g = gcd128(g, u128(abs128(c)));
        std::array<i64, 6> key{};
        int sign = 0;
        for (size_t i = 0; i < 6; ++i) {
            i128 c = pl[i] / i128(g);
            if (sign == 0 && c != 0)
                sign = c > 0 ? 1 : -1;
            key[i] = narrow(c * sign);
        }
        return seen.insert(key).second;
    };
    for (const auto& L : lines) {
        std::array<i128, 4> P{}, Q{};
        for (size_t i = 0; i < 4; ++i) {
            P[i] = L.p.x[i];
            Q[i] = L.q.x[i];
        }
        add(P, Q);
    }
    for (const auto& P : pts[0]) {
        for (const auto& Q : pts[1]) {
            std::array<i64, 4> plus{}, minus{};
            bool fits = true;
            for (size_t i = 0; i < 4; ++i) {
                i128 s = i128(P.x[i]) + Q.x[i], m = i128(P.x[i]) - Q.x[i];
                if (abs128(s) > INT64_MAX / 4 || abs128(m) > INT64_MAX / 4)
                    fits = false;
                plus[i] = i64(s);
                minus[i] = i64(m);
            }
            if (!fits || X.F(plus) != 0 || X.F(minus) != 0)
                continue;
            std::array<i128, 4> A{}, B{};
            for (size_t i = 0; i < 4; ++i) {
                A[i] = P.x[i];
                B[i] = Q.x[i];
            }
            if (add(A, B))
                lines.push_back({P, Q});
        }
    }
    return lines;
}

std::vector<ProjPoint3> find_singular_points(const CubicSurfaceNF& X, i64 height_bound)
{
    BinaryForm as = X.a().derivative_s(), at = X.a().derivative_t();
    BinaryForm ds = X.d().derivative_s(), dt = X.d().derivative_t();
    BinaryForm fs = X.f().derivative_s(), ft = X.f().derivative_t();
    BinaryForm bs = X.b().derivative_s(), bt = X.b().derivative_t();
    BinaryForm es = X.e().derivative_s(), et = X.e().derivative_t();
    auto singular = [&](const std::array<i64, 4>& x) {
        i128 x0 = x[0], x1 = x[1], x2 = x[2], x3 = x[3];
        auto A = X.a()(x0, x1), D = X.d()(x0, x1), Fv = X.f()(x0, x1), Bv = X.b()(x0, x1), E = X.e()(x0, x1);
        if (2 * A * x2 + D * x3 + Bv != 0 || D * x2 + 2 * Fv * x3 + E != 0)
            return false;
        i128 g0 = as(x0, x1) * x2 * x2 + ds(x0, x1) * x2 * x3 + fs(x0, x1) * x3 * x3 + bs(x0, x1) * x2 +
                  es(x0, x1) * x3;
        i128 g1 = at(x0, x1) * x2 * x2 + dt(x0, x1) * x2 * x3 + ft(x0, x1) * x3 * x3 + bt(x0, x1) * x2 +
                  et(x0, x1) * x3;
        return g0 == 0 && g1 == 0;
    };
    std::set<ProjPoint3> found;
    // on x0 = x1 = 0 the point is singular iff both split quadrics vanish
    for (i64 x2 = 0; x2 <= height_bound; ++x2)
        for (i64 x3 = -height_bound; x3 <= height_bound; ++x3) {
            if ((x2 == 0 && x3 <= 0) || gcd_u64(u64(x2), abs_u64(x3)) != 1)
                continue;
            std::array<i64, 4> x{0, 0, x2, x3};
            if (singular(x))
                found.insert(ProjPoint3::normalized({0, 0, x2, x3}));
        }
    for (i64 s = 0; s <= height_bound; ++s)
        for (i64 t = -height_bound; t <= height_bound; ++t) {
            if ((s == 0 && t != 1) || gcd_u64(u64(s), abs_u64(t)) != 1)
                continue;
            i128 A = X.a()(s, t), D = X.d()(s, t), Fv = X.f()(s, t), Bv = X.b()(s, t), E = X.e()(s, t);
            i128 det = 4 * A * Fv - D * D;
            if (det != 0) {
                // grad in (x2, x3) vanishes at (s, t, X2, X3) = (det s, det t, -2fB + dE, dB - 2aE) / det
                auto P = ProjPoint3::normalized({det * s, det * t, -2 * Fv * Bv + D * E, D * Bv - 2 * A * E});
                if (P.height() <= height_bound && singular(P.x))
                    found.insert(P);
                continue;
            }
            i64 kmax = height_bound / std::max<i64>(1, std::max(std::abs(s), std::abs(t)));
            for (i64 k = 1; k <= kmax; ++k)
                for (i64 x2 = -height_bound; x2 <= height_bound; ++x2)
                    for (i64 x3 = -height_bound; x3 <= height_bound; ++x3) {
                        std::array<i64, 4> x{k * s, k * t, x2, x3};
                        if (singular(x))
                            found.insert(ProjPoint3::normalized({x[0], x[1], x2, x3}));
                    }
        }
    return {found.begin(), found.end()};
}

BruteForceCount brute_force_surface_count(const CubicSurfaceNF& X, i64 B, const BruteForceOptions& opts)
{
    BruteForceCount res;
    if (B < 1)
        return res;
    auto consider = [&](const std::array<i64, 4>& x) {
        u64 g = 0;
        for (auto c : x)
            g = gcd_u64(g, abs_u64(c));
        if (g != 1)
            return;
        ProjPoint3 P{x};
        auto st = pi_map(X, P);
        if (!st) {
            ++res.no_fibre;
            return;
        }
        if (opts.fibre_height_cap && st->height() > *opts.fibre_height_cap) {
            ++res.above_cap;
            return;
        }
        if (opts.nonsingular_fibres_only && X.delta()(st->s, st->t) == 0) {
            ++res.singular_fibre;
            return;
        }
        if (opts.exclude_lines) {
            for (const auto& L : *opts.exclude_lines)
                if (L.contains(P)) {
                    ++res.on_lines;
                    return;
                }
        }
        ++res.count;
        if (opts.collect_points)
            res.points.push_back(P);
    };

    // normalization: first nonzero coordinate positive
    for (i64 x0 = 0; x0 <= B; ++x0) {
        for (i64 x1 = (x0 == 0 ? 0 : -B); x1 <= B; ++x1) {
            i128 A = X.f()(x0, x1), a = X.a()(x0, x1), d = X.d()(x0, x1), b = X.b()(x0, x1), e = X.e()(x0, x1);
            bool lead01 = x0 != 0 || x1 != 0;
            for (i64 x2 = (lead01 ? -B : 0); x2 <= B; ++x2) {
                i128 Bc = d * x2 + e;
                i128 C = a * x2 * x2 + b * x2;
                auto emit = [&](i64 x3) {
                    if (!lead01 && x2 == 0 && x3 <= 0)
                        return;
                    consider({x0, x1, x2, x3});
                };
                if (A != 0) {
                    i128 disc = Bc * Bc - 4 * A * C;
                    i128 r = exact_sqrt(disc);
                    if (r < 0)
                        continue;
                    for (i128 num : {-Bc + r, -Bc - r}) {
                        if (num % (2 * A) != 0)
                            continue;
                        i128 x3 = num / (2 * A);
                        if (abs128(x3) <= B)
                            emit(i64(x3));
                        if (r == 0)
                            break;
                    }
                } else if (Bc != 0) {
                    if (C % Bc == 0 && abs128(C / Bc) <= B)
                        emit(i64(-C / Bc));
                } else if (C == 0) {
                    for (i64 x3 = -B; x3 <= B; ++x3)
                        emit(x3);
                }
            }
        }
    }
    std::sort(res.points.begin(), res.points.end());
    return res;
}

} // namespace cb
