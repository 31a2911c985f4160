#include "conicbundle/forms.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "conicbundle/error.hpp"
#include "conicbundle/polymod.hpp"

namespace cb {

namespace {

constexpr int max_factor_degree = 8;

i64 checked_add(i64 a, i64 b)
{
    i64 r;
    if (__builtin_add_overflow(a, b, &r))
        throw Error(ErrorKind::Overflow, "binary form coefficient overflow");
    return r;
}

i64 checked_mul(i64 a, i64 b)
{
    i64 r;
    if (__builtin_mul_overflow(a, b, &r))
        throw Error(ErrorKind::Overflow, "binary form coefficient overflow");
    return r;
}

i64 to_i64(const BigInt& v)
{
    if (!v.fits_slong_p())
        throw Error(ErrorKind::Overflow, "factor coefficient exceeds 64 bits");
    return v.get_si();
}

BigInt big(i64 v) { return BigInt(long(v)); }
BigInt big(u64 v) { return BigInt((unsigned long)v); }

// ---- dense polynomials over Z, coefficient of x^i at index i ----

using ZPoly = std::vector<BigInt>;

void ztrim(ZPoly& f)
{
    while (!f.empty() && f.back() == 0)
        f.pop_back();
}

int zdeg(const ZPoly& f) { return int(f.size()) - 1; }

ZPoly zmul(const ZPoly& f, const ZPoly& g)
{
    if (f.empty() || g.empty())
        return {};
    ZPoly r(f.size() + g.size() - 1, BigInt(0));
    for (size_t i = 0; i < f.size(); ++i)
        for (size_t j = 0; j < g.size(); ++j)
            r[i + j] += f[i] * g[j];
    ztrim(r);
    return r;
}

ZPoly zderiv(const ZPoly& f)
{
    ZPoly d;
    for (size_t i = 1; i < f.size(); ++i)
        d.push_back(f[i] * BigInt((unsigned long)i));
    ztrim(d);
    return d;
}

BigInt zcontent(const ZPoly& f)
{
    BigInt g = 0;
    for (auto& c : f)
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    return g;
}

// primitive with positive leading coefficient
ZPoly zprimitive(ZPoly f)
{
    ztrim(f);
    if (f.empty())
        return f;
    BigInt c = zcontent(f);
    if (f.back() < 0)
        c = -c;
    for (auto& v : f)
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), c.get_mpz_t());
    return f;
}

// exact division a / b over Z; false if b does not divide a
bool zdivides(const ZPoly& a, const ZPoly& b, ZPoly& q)
{
    ZPoly r = a;
    ztrim(r);
    if (b.empty())
        throw Error(ErrorKind::InvalidArgument, "division by zero polynomial");
    if (r.size() < b.size()) {
        q.clear();
        return r.empty();
    }
    q.assign(r.size() - b.size() + 1, BigInt(0));
    while (r.size() >= b.size()) {
        size_t shift = r.size() - b.size();
        if (!mpz_divisible_p(r.back().get_mpz_t(), b.back().get_mpz_t()))
            return false;
        BigInt c = r.back() / b.back();
        q[shift] = c;
        for (size_t i = 0; i < b.size(); ++i)
            r[shift + i] -= c * b[i];
        ztrim(r);
    }
    ztrim(q);
    return r.empty();
}

// gcd over Q, returned primitive with positive leading coefficient
ZPoly zgcd(ZPoly a, ZPoly b)
{
    a = zprimitive(a);
    b = zprimitive(b);
    if (a.size() < b.size())
        std::swap(a, b);
    while (!b.empty()) {
        // primitive pseudo-remainder
        ZPoly r = a;
        BigInt lc = b.back();
        while (r.size() >= b.size()) {
            size_t shift = r.size() - b.size();
            BigInt c = r.back();
            for (auto& v : r)
                v *= lc;
            for (size_t i = 0; i < b.size(); ++i)
                r[shift + i] -= c * b[i];
            ztrim(r);
        }
        a = std::move(b);
        b = zprimitive(r);
    }
    return zprimitive(a);
}

// Squarefree decomposition of a primitive polynomial: (part, multiplicity).
std::vector<std::pair<ZPoly, int>> squarefree_decomposition(const ZPoly& f)
{
    std::vector<std::pair<ZPoly, int>> out;
    if (zdeg(f) < 1)
        return out;
    ZPoly g = zgcd(f, zderiv(f));
    ZPoly w;
    zdivides(zprimitive(f), g, w);
    w = zprimitive(w);
    int i = 1;
    while (zdeg(w) > 0) {
        ZPoly y = zgcd(w, g);
        ZPoly part;
        zdivides(w, y, part);
        part = zprimitive(part);
        if (zdeg(part) > 0)
            out.emplace_back(part, i);
        ZPoly g2;
        zdivides(g, y, g2);
        g = zprimitive(g2);
        w = y;
        ++i;
    }
    return out;
}

std::vector<u64> divisors_of(u64 n)
{
    std::vector<u64> ds{1};
    for (auto [p, e] : factor_u64(n)) {
        size_t cur = ds.size();
        u64 pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= p;
            for (size_t i = 0; i < cur; ++i)
                ds.push_back(ds[i] * pk);
        }
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

// Extracts linear factors v*x - u of a squarefree primitive f.
std::vector<ZPoly> extract_rational_roots(ZPoly& f, bool& complete)
{
    complete = false;
    std::vector<ZPoly> found;
    if (zdeg(f) < 1)
        return found;
    if (f[0] == 0) {
        found.push_back({BigInt(0), BigInt(1)});
        ZPoly q;
        zdivides(f, found.back(), q);
        f = zprimitive(q);
    }
    if (zdeg(f) < 1) {
        complete = true;
        return found;
    }
    BigInt a0 = abs(f[0]), lc = abs(f.back());
    if (!a0.fits_ulong_p() || !lc.fits_ulong_p())
        return found;
    auto nums = divisors_of(a0.get_ui());
    auto dens = divisors_of(lc.get_ui());
    if (nums.size() * dens.size() > 200000)
        return found;
    complete = true;
    for (u64 v : dens) {
        for (u64 u : nums) {
            if (gcd_u64(u, v) != 1)
                continue;
            for (int sign : {1, -1}) {
                if (zdeg(f) < 1)
                    return found;
                // f(u/v) * v^n == 0
                BigInt U = big(u) * sign, V = big(v), acc = 0, vpow = 1, upow = 1;
                std::vector<BigInt> up(f.size()), vp(f.size());
                for (size_t i = 0; i < f.size(); ++i) {
                    up[i] = upow;
                    vp[i] = vpow;
                    upow *= U;
                    vpow *= V;
                }
                size_t n = f.size() - 1;
                for (size_t i = 0; i < f.size(); ++i)
                    acc += f[i] * up[i] * vp[n - i];
                if (acc == 0) {
                    ZPoly lin{-U, V};
                    ZPoly q;
                    zdivides(f, lin, q);
                    f = zprimitive(q);
                    found.push_back(zprimitive(lin));
                }
            }
        }
    }
    return found;
}

// ---- Hensel lifting ----

ZPoly zmod(const ZPoly& f, const BigInt& m)
{
    ZPoly r(f.size());
    for (size_t i = 0; i < f.size(); ++i)
        mpz_fdiv_r(r[i].get_mpz_t(), f[i].get_mpz_t(), m.get_mpz_t());
    ztrim(r);
    return r;
}

ZPoly from_fp(const fp::Poly& f)
{
    ZPoly r;
    for (u64 c : f)
        r.push_back(big(c));
    return r;
}

// F monic mod p^k with F = g0 * h0 mod p, g0 and h0 monic and coprime mod p.
std::pair<ZPoly, ZPoly> hensel_pair(const ZPoly& F, const fp::Poly& g0, const fp::Poly& h0, u64 p,
                                    int k)
{
    fp::Poly s, t;
    fp::ext_gcd(g0, h0, p, s, t);
    ZPoly G = from_fp(g0), H = from_fp(h0);
    BigInt pj = big(p);
    for (int j = 1; j < k; ++j) {
        BigInt next = pj * big(p);
        ZPoly E = zmod(F, next);
        ZPoly GH = zmul(G, H);
        E.resize(std::max(E.size(), GH.size()), BigInt(0));
        for (size_t i = 0; i < GH.size(); ++i)
            E[i] -= GH[i];
        E = zmod(E, next);
        for (auto& c : E)
            mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), pj.get_mpz_t());
        fp::Poly e = fp::reduce(E, p);
        fp::Poly dG = fp::mod(fp::mul(t, e, p), g0, p);
        fp::Poly dH = fp::mod(fp::mul(s, e, p), h0, p);
        for (size_t i = 0; i < dG.size(); ++i)
            G[i] += pj * big(dG[i]);
        for (size_t i = 0; i < dH.size(); ++i)
            H[i] += pj * big(dH[i]);
        pj = next;
    }
    return {G, H};
}

std::vector<ZPoly> hensel_lift(const ZPoly& F, std::vector<fp::Poly> factors, u64 p, int k)
{
    if (factors.size() == 1)
        return {F};
    fp::Poly rest{1};
    for (size_t i = 1; i < factors.size(); ++i)
        rest = fp::mul(rest, factors[i], p);
    auto [G, H] = hensel_pair(F, factors[0], rest, p, k);
    std::vector<ZPoly> out{G};
    factors.erase(factors.begin());
    auto tail = hensel_lift(H, factors, p, k);
    out.insert(out.end(), tail.begin(), tail.end());
    return out;
}

std::set<int> subset_degrees(const std::vector<int>& degs)
{
    std::set<int> sums{0};
    for (int d : degs) {
        std::set<int> next = sums;
        for (int s : sums)
            next.insert(s + d);
        sums = std::move(next);
    }
    return sums;
}

// Zassenhaus factorization of a squarefree primitive f with deg >= 2.
std::vector<ZPoly> zassenhaus(ZPoly f)
{
    int n = zdeg(f);
    if (n <= 1)
        return {f};

    struct Candidate {
        u64 p;
        std::vector<int> degs;
    };
    std::vector<Candidate> good;
    std::set<int> possible;
    for (int d = 1; d < n; ++d)
        possible.insert(d);
    for (u64 p = 3; good.size() < 5 && p < 10000; p += 2) {
        if (!is_prime(p))
            continue;
        if (mpz_divisible_ui_p(f.back().get_mpz_t(), p))
            continue;
        fp::Poly fb = fp::reduce(f, p);
        if (fp::deg(fp::gcd(fb, fp::derivative(fb, p), p)) > 0)
            continue;
        std::vector<int> degs;
        for (auto& [g, d] : fp::distinct_degree(fb, p))
            for (int i = 0; i < fp::deg(g) / d; ++i)
                degs.push_back(d);
        auto sums = subset_degrees(degs);
        std::set<int> keep;
        for (int d : possible)
            if (sums.count(d))
                keep.insert(d);
        possible = std::move(keep);
        good.push_back({p, degs});
        if (possible.empty())
            return {f};
    }
    if (good.empty())
        throw Error(ErrorKind::InvalidArgument, "no good prime for factorization");
    auto best = std::min_element(good.begin(), good.end(), [](const auto& a, const auto& b) {
        return a.degs.size() < b.degs.size();
    });
    u64 p = best->p;
    if (best->degs.size() == 1)
        return {f};

    std::mt19937_64 rng(0xc0ffee ^ p);
    fp::Poly fb = fp::monic(fp::reduce(f, p), p);
    auto modular = fp::factor_squarefree(fb, p, rng);

    // p^k > 2 * |lc| * 2^n * ||f||_2
    BigInt norm2 = 0;
    for (auto& c : f)
        norm2 += c * c;
    BigInt bound = sqrt(norm2) + 1;
    bound *= abs(f.back());
    bound <<= (n + 1);
    int k = 1;
    BigInt M = big(p);
    while (M <= bound) {
        M *= big(p);
        ++k;
    }

    BigInt lc = f.back();
    BigInt inv;
    mpz_invert(inv.get_mpz_t(), lc.get_mpz_t(), M.get_mpz_t());
    ZPoly F = f;
    for (auto& c : F)
        c *= inv;
    F = zmod(F, M);
    std::vector<ZPoly> lifted = hensel_lift(F, modular, p, k);

    std::vector<ZPoly> result;
    BigInt half = M / 2;
    size_t s = 1;
    while (2 * s <= lifted.size()) {
        bool found = false;
        std::vector<size_t> idx(s);
        for (size_t i = 0; i < s; ++i)
            idx[i] = i;
        for (;;) {
            ZPoly cand{f.back()};
            for (size_t i : idx)
                cand = zmod(zmul(cand, lifted[i]), M);
            for (auto& c : cand)
                if (c > half)
                    c -= M;
            cand = zprimitive(cand);
            ZPoly q;
            if (zdeg(cand) > 0 && zdivides(f, cand, q)) {
                result.push_back(cand);
                f = zprimitive(q);
                for (size_t j = s; j-- > 0;)
                    lifted.erase(lifted.begin() + long(idx[j]));
                found = true;
                break;
            }
            // next combination
            int pos = int(s) - 1;
            while (pos >= 0 && idx[size_t(pos)] == lifted.size() - s + size_t(pos))
                --pos;
            if (pos < 0)
                break;
            ++idx[size_t(pos)];
            for (size_t j = size_t(pos) + 1; j < s; ++j)
                idx[j] = idx[j - 1] + 1;
        }
        if (!found)
            ++s;
    }
    if (zdeg(f) > 0)
        result.push_back(zprimitive(f));
    return result;
}

BigInt bareiss_det(std::vector<std::vector<BigInt>> m)
{
    size_t n = m.size();
    if (n == 0)
        return 1;
    int sign = 1;
    BigInt prev = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            size_t piv = k + 1;
            while (piv < n && m[piv][k] == 0)
                ++piv;
            if (piv == n)
                return 0;
            std::swap(m[k], m[piv]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i) {
            for (size_t j = k + 1; j < n; ++j) {
                BigInt v = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
                m[i][j] = v;
            }
        }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

// (x-coefficients low-to-high) -> binary form of the given degree
BinaryForm rehomogenize(const ZPoly& g, int degree)
{
    std::vector<i64> c(size_t(degree) + 1, 0);
    for (int i = 0; i <= zdeg(g); ++i)
        c[size_t(degree - i)] = to_i64(g[size_t(i)]);
    return BinaryForm(degree, c);
}

bool form_less(const BinaryForm& a, const BinaryForm& b)
{
    if (a.degree() != b.degree())
        return a.degree() < b.degree();
    return a.coeffs() < b.coeffs();
}

} // namespace

BinaryForm::BinaryForm(int degree, std::vector<i64> coeffs) : degree_(degree), coeffs_(std::move(coeffs))
{
    if (degree < 0 || coeffs_.size() != size_t(degree) + 1)
        throw Error(ErrorKind::DegreeMismatch, "binary form needs degree+1 coefficients");
}

BinaryForm BinaryForm::zero(int degree) { return BinaryForm(degree, std::vector<i64>(size_t(degree) + 1, 0)); }

BinaryForm BinaryForm::homogenize(const IntPoly& g)
{
    IntPoly h = g;
    while (!h.empty() && h.back() == 0)
        h.pop_back();
    if (h.empty())
        return BinaryForm();
    int d = int(h.size()) - 1;
    std::vector<i64> c(h.size());
    for (int i = 0; i <= d; ++i)
        c[size_t(d - i)] = h[size_t(i)];
    return BinaryForm(d, c);
}

bool BinaryForm::is_zero() const
{
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](i64 c) { return c == 0; });
}

i128 BinaryForm::operator()(i64 s, i64 t) const
{
    // Horner in s/t homogeneous form: sum c_i s^(d-i) t^i
    i128 acc = 0;
    i128 tp = 1;
    std::vector<i128> spow(size_t(degree_) + 1);
    spow[0] = 1;
    for (int i = 1; i <= degree_; ++i)
        if (__builtin_mul_overflow(spow[size_t(i - 1)], i128(s), &spow[size_t(i)]))
            throw Error(ErrorKind::Overflow, "form evaluation overflow");
    for (int i = 0; i <= degree_; ++i) {
        i128 term;
        if (__builtin_mul_overflow(i128(coeffs_[size_t(i)]), spow[size_t(degree_ - i)], &term) ||
            __builtin_mul_overflow(term, tp, &term) || __builtin_add_overflow(acc, term, &acc))
            throw Error(ErrorKind::Overflow, "form evaluation overflow");
        if (i < degree_ && __builtin_mul_overflow(tp, i128(t), &tp))
            throw Error(ErrorKind::Overflow, "form evaluation overflow");
    }
    return acc;
}

BigInt BinaryForm::eval_big(const BigInt& s, const BigInt& t) const
{
    BigInt acc = 0;
    for (int i = 0; i <= degree_; ++i) {
        BigInt sp, tp;
        mpz_pow_ui(sp.get_mpz_t(), s.get_mpz_t(), (unsigned long)(degree_ - i));
        mpz_pow_ui(tp.get_mpz_t(), t.get_mpz_t(), (unsigned long)i);
        acc += big(coeffs_[size_t(i)]) * sp * tp;
    }
    return acc;
}

u64 BinaryForm::eval_mod(u64 s, u64 t, u64 m) const
{
    u64 acc = 0;
    for (int i = 0; i <= degree_; ++i) {
        u64 term = mulmod(mod_i64(coeffs_[size_t(i)], m), powmod(s, u64(degree_ - i), m), m);
        term = mulmod(term, powmod(t, u64(i), m), m);
        acc = (acc + term) % m;
    }
    return acc;
}

IntPoly BinaryForm::dehomogenize() const
{
    IntPoly g(size_t(degree_) + 1);
    for (int i = 0; i <= degree_; ++i)
        g[size_t(degree_ - i)] = coeffs_[size_t(i)];
    while (!g.empty() && g.back() == 0)
        g.pop_back();
    return g;
}

BinaryForm BinaryForm::derivative_s() const
{
    if (degree_ == 0)
        return BinaryForm();
    std::vector<i64> c(static_cast<size_t>(degree_));
    for (int i = 0; i < degree_; ++i)
        c[size_t(i)] = checked_mul(coeffs_[size_t(i)], degree_ - i);
    return BinaryForm(degree_ - 1, c);
}

BinaryForm BinaryForm::derivative_t() const
{
    if (degree_ == 0)
        return BinaryForm();
    std::vector<i64> c(static_cast<size_t>(degree_));
    for (int i = 1; i <= degree_; ++i)
        c[size_t(i - 1)] = checked_mul(coeffs_[size_t(i)], i);
    return BinaryForm(degree_ - 1, c);
}

i64 BinaryForm::content() const
{
    u64 g = 0;
    for (i64 c : coeffs_)
        g = gcd_u64(g, abs_u64(c));
    return i64(g);
}

std::string BinaryForm::to_string() const
{
    std::string out;
    for (int i = 0; i <= degree_; ++i) {
        i64 c = coeffs_[size_t(i)];
        if (c == 0)
            continue;
        int ps = degree_ - i, pt = i;
        std::string mono;
        auto power = [](const char* v, int k) {
            if (k == 0)
                return std::string();
            return k == 1 ? std::string(v) : std::string(v) + "^" + std::to_string(k);
        };
        std::string sp = power("s", ps), tp = power("t", pt);
        mono = sp.empty() ? tp : (tp.empty() ? sp : sp + "*" + tp);
        u64 ac = abs_u64(c);
        std::string body;
        if (mono.empty())
            body = std::to_string(ac);
        else if (ac == 1)
            body = mono;
        else
            body = std::to_string(ac) + "*" + mono;
        if (out.empty())
            out = (c < 0 ? "-" : "") + body;
        else
            out += (c < 0 ? " - " : " + ") + body;
    }
    return out.empty() ? "0" : out;
}

BinaryForm operator+(const BinaryForm& f, const BinaryForm& g)
{
    if (f.degree_ != g.degree_)
        throw Error(ErrorKind::DegreeMismatch, "adding forms of different degree");
    std::vector<i64> c(f.coeffs_.size());
    for (size_t i = 0; i < c.size(); ++i)
        c[i] = checked_add(f.coeffs_[i], g.coeffs_[i]);
    return BinaryForm(f.degree_, c);
}

BinaryForm operator-(const BinaryForm& f, const BinaryForm& g) { return f + (-1) * g; }

BinaryForm operator*(const BinaryForm& f, const BinaryForm& g)
{
    std::vector<i64> c(size_t(f.degree_ + g.degree_) + 1, 0);
    for (size_t i = 0; i < f.coeffs_.size(); ++i)
        for (size_t j = 0; j < g.coeffs_.size(); ++j)
            c[i + j] = checked_add(c[i + j], checked_mul(f.coeffs_[i], g.coeffs_[j]));
    return BinaryForm(f.degree_ + g.degree_, c);
}

BinaryForm operator*(i64 k, const BinaryForm& f)
{
    std::vector<i64> c(f.coeffs_.size());
    for (size_t i = 0; i < c.size(); ++i)
        c[i] = checked_mul(k, f.coeffs_[i]);
    return BinaryForm(f.degree_, c);
}

bool FactorizationQ::squarefree() const
{
    return std::all_of(factors.begin(), factors.end(), [](const auto& f) { return f.second == 1; });
}

std::vector<BigInt> FactorizationQ::expand() const
{
    std::vector<BigInt> acc{BigInt(1)};
    for (auto& [form, mult] : factors) {
        for (int m = 0; m < mult; ++m) {
            std::vector<BigInt> next(acc.size() + size_t(form.degree()), BigInt(0));
            for (size_t i = 0; i < acc.size(); ++i)
                for (int j = 0; j <= form.degree(); ++j)
                    next[i + size_t(j)] += acc[i] * big(form.coeff(j));
            acc = std::move(next);
        }
    }
    if (content.get_den() != 1)
        throw Error(ErrorKind::InvalidArgument, "non-integral content");
    for (auto& c : acc)
        c *= content.get_num();
    return acc;
}

BinaryForm discriminant_quintic(const BinaryForm& a, const BinaryForm& d, const BinaryForm& f,
                                const BinaryForm& b, const BinaryForm& e)
{
    if (a.degree() != 1 || d.degree() != 1 || f.degree() != 1 || b.degree() != 2 || e.degree() != 2)
        throw Error(ErrorKind::DegreeMismatch, "discriminant needs linear a,d,f and quadratic b,e");
    return a * e * e - b * d * e + f * b * b;
}

BigInt resultant(const BinaryForm& f, const BinaryForm& g)
{
    if (f.is_zero() || g.is_zero())
        throw Error(ErrorKind::ZeroForm, "resultant of a zero form");
    size_t m = size_t(f.degree()), n = size_t(g.degree());
    size_t N = m + n;
    std::vector<std::vector<BigInt>> syl(N, std::vector<BigInt>(N, BigInt(0)));
    for (size_t r = 0; r < n; ++r)
        for (size_t i = 0; i <= m; ++i)
            syl[r][r + i] = big(f.coeff(int(i)));
    for (size_t r = 0; r < m; ++r)
        for (size_t i = 0; i <= n; ++i)
            syl[n + r][r + i] = big(g.coeff(int(i)));
    return bareiss_det(std::move(syl));
}

bool is_separable(const BinaryForm& f)
{
    if (f.is_zero())
        throw Error(ErrorKind::ZeroForm, "separability of the zero form");
    if (f.degree() <= 1)
        return true;
    BinaryForm fs = f.derivative_s(), ft = f.derivative_t();
    if (fs.is_zero() || ft.is_zero())
        return false;
    return resultant(fs, ft) != 0;
}

FactorizationQ factor_over_Q(const BinaryForm& f)
{
    if (f.is_zero())
        throw Error(ErrorKind::ZeroForm, "factorization of the zero form");
    if (f.degree() > max_factor_degree)
        throw Error(ErrorKind::DegreeTooLarge, "factor_over_Q supports degree <= 8");

    FactorizationQ out;
    int k = 0;
    while (f.coeff(k) == 0)
        ++k;
    if (k > 0)
        out.factors.emplace_back(BinaryForm(1, {0, 1}), k);

    ZPoly g;
    for (i64 c : f.dehomogenize())
        g.push_back(big(c));
    ZPoly prim = zprimitive(g);
    for (auto& [part, mult] : squarefree_decomposition(prim)) {
        ZPoly rest = part;
        bool complete = false;
        std::vector<ZPoly> irreducibles = extract_rational_roots(rest, complete);
        if (zdeg(rest) >= 1) {
            if (complete && zdeg(rest) <= 3)
                irreducibles.push_back(rest);
            else
                for (auto& h : zassenhaus(rest))
                    irreducibles.push_back(h);
        }
        for (auto& h : irreducibles)
            out.factors.emplace_back(rehomogenize(zprimitive(h), zdeg(h)), mult);
    }
    std::sort(out.factors.begin(), out.factors.end(),
              [](const auto& x, const auto& y) { return form_less(x.first, y.first); });

    // content from the leading nonzero coefficient
    std::vector<BigInt> prod;
    {
        FactorizationQ unit{Rational(1), out.factors};
        prod = unit.expand();
    }
    size_t i = 0;
    while (prod[i] == 0)
        ++i;
    out.content = Rational(big(f.coeff(int(i))), prod[i]);
    out.content.canonicalize();
    return out;
}

int picard_rank(const FactorizationQ& fac)
{
    if (!fac.squarefree())
        throw Error(ErrorKind::SeparabilityFailure, "discriminant has a repeated factor");
    return 2 + fac.distinct_factors();
}

std::vector<std::pair<i64, i64>> rational_roots(const FactorizationQ& fac)
{
    std::vector<std::pair<i64, i64>> roots;
    for (auto& [form, mult] : fac.factors) {
        if (form.degree() != 1)
            continue;
        // alpha*s + beta*t = 0  =>  (s:t) = (-beta : alpha)
        i64 s = -form.coeff(1), t = form.coeff(0);
        if (s < 0 || (s == 0 && t < 0)) {
            s = -s;
            t = -t;
        }
        roots.emplace_back(s, t);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

} // namespace cb
