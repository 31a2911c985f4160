#pragma once

// Binary forms over Z in (s, t): evaluation, resultants, the discriminant
// quintic of the conic bundle, and factorization into Q-irreducibles.

#include <string>
#include <utility>
#include <vector>

#include "conicbundle/numth.hpp"

namespace cb {

/// Homogeneous form of fixed degree; coeffs[i] multiplies s^(degree-i) t^i.
class BinaryForm {
public:
    BinaryForm() : degree_(0), coeffs_{0} {}
    BinaryForm(int degree, std::vector<i64> coeffs);

    static BinaryForm zero(int degree);
    /// t(x) -> t^deg * g(s/t), g given low-to-high
    static BinaryForm homogenize(const IntPoly& g);

    int degree() const { return degree_; }
    const std::vector<i64>& coeffs() const { return coeffs_; }
    i64 coeff(int i) const { return coeffs_[size_t(i)]; }
    bool is_zero() const;

    /// Exact value at (s, t); throws Overflow when it leaves 127 bits.
    i128 operator()(i64 s, i64 t) const;
    BigInt eval_big(const BigInt& s, const BigInt& t) const;
    u64 eval_mod(u64 s, u64 t, u64 m) const;

    /// f(x, 1) as a polynomial in x (index = power of x).
    IntPoly dehomogenize() const;
    BinaryForm derivative_s() const;
    BinaryForm derivative_t() const;
    i64 content() const;

    std::string to_string() const;

    friend BinaryForm operator+(const BinaryForm& f, const BinaryForm& g);
    friend BinaryForm operator-(const BinaryForm& f, const BinaryForm& g);
    friend BinaryForm operator*(const BinaryForm& f, const BinaryForm& g);
    friend BinaryForm operator*(i64 c, const BinaryForm& f);
    friend bool operator==(const BinaryForm&, const BinaryForm&) = default;

private:
    int degree_;
    std::vector<i64> coeffs_;
};

struct FactorizationQ {
    Rational content;
    /// Q-irreducible, primitive, positive leading s-coefficient (t itself is [0,1]).
    std::vector<std::pair<BinaryForm, int>> factors;

    int distinct_factors() const { return int(factors.size()); }
    bool squarefree() const;
    /// content * prod factor^multiplicity, as exact big-integer coefficients
    std::vector<BigInt> expand() const;
};

BinaryForm discriminant_quintic(const BinaryForm& a, const BinaryForm& d, const BinaryForm& f,
                                const BinaryForm& b, const BinaryForm& e);

/// Sylvester resultant of two nonzero forms.
BigInt resultant(const BinaryForm& f, const BinaryForm& g);

/// No repeated projective root over the algebraic closure.
bool is_separable(const BinaryForm& f);

/// Complete factorization over Q, degree <= 8.
FactorizationQ factor_over_Q(const BinaryForm& f);

/// 2 + r for a separable discriminant.
int picard_rank(const FactorizationQ& delta_factorization);

/// Rational projective roots (s:t), normalized s > 0 or (0:1).
std::vector<std::pair<i64, i64>> rational_roots(const FactorizationQ& fac);

} // namespace cb
