#pragma once

#include <utility>

#include "distortion/curve.hpp"

namespace distortion {

struct PairingValue {
    FieldElement value;
    Int m;
};

namespace detail {

struct MillerZero {};

/// Running value of a Miller function at one evaluation point, kept as a
/// fraction to postpone inversions.
struct MillerAcc {
    FieldElement num, den;
};

/// Multiplies acc by l_{T,R}(X) / v_{T+R}(X) and returns T + R.
inline Point miller_step(const Point& T, const Point& R, const Point& X, MillerAcc& acc)
{
    if (T.is_infinity() || R.is_infinity())
        return add(T, R);
    const Curve& E = T.curve();
    if (T.x() == R.x() && (T.y() != R.y() || T.y().is_zero())) {
        // Vertical line; T + R = O.
        const auto l = X.x() - T.x();
        if (l.is_zero())
            throw MillerZero{};
        acc.num *= l;
        return Point::infinity(E);
    }
    FieldElement lambda;
    if (T.x() == R.x())
        lambda = (T.x().square().scaled(3) + E.a()) / T.y().scaled(2);
    else
        lambda = (R.y() - T.y()) / (R.x() - T.x());
    const auto x3 = lambda.square() - T.x() - R.x();
    const auto y3 = lambda * (T.x() - x3) - T.y();
    const auto l = X.y() - T.y() - lambda * (X.x() - T.x());
    const auto v = X.x() - x3;
    if (l.is_zero() || v.is_zero())
        throw MillerZero{};
    acc.num *= l;
    acc.den *= v;
    return make_point_unchecked(E, x3, y3);
}

/// f_{m,P}(X1) / f_{m,P}(X2) where div f_{m,P} = m(P) - m(O).
inline FieldElement miller_ratio(const Point& P, const Int& m, const Point& X1, const Point& X2)
{
    if (X1.is_infinity() || X2.is_infinity())
        throw MillerZero{};
    const Field& F = P.curve().field();
    MillerAcc a1{FieldElement::one(F), FieldElement::one(F)}, a2 = a1;
    Point T = P;
    const auto bits = mpz_sizeinbase(m.get_mpz_t(), 2);
    for (std::size_t i = bits - 1; i-- > 0;) {
        a1.num = a1.num.square();
        a1.den = a1.den.square();
        a2.num = a2.num.square();
        a2.den = a2.den.square();
        miller_step(T, T, X1, a1);
        T = miller_step(T, T, X2, a2);
        if (mpz_tstbit(m.get_mpz_t(), i)) {
            miller_step(T, P, X1, a1);
            T = miller_step(T, P, X2, a2);
        }
    }
    const auto den = a1.den * a2.num;
    if (den.is_zero())
        throw MillerZero{};
    return (a1.num * a2.den) / den;
}

} // namespace detail

constexpr int kPairingRetries = 32;

/// Weil pairing e_m(P, Q) by Miller's algorithm with a random auxiliary point
/// S: e = [f_P(Q+S)/f_P(S)] / [f_Q(P-S)/f_Q(-S)].
inline PairingValue weil_pairing(const Point& P, const Point& Q, const Int& m, Rng& rng)
{
    check_same_curve(P, Q);
    const Curve& E = P.curve();
    const Field& F = E.field();
    require(m >= 1, Errc::BadInput, "pairing order must be positive");
    require(mod(m, int_from_u64(F->p())) != 0, Errc::NotTorsion, "pairing order divisible by the characteristic");
    require(scalar_mul(m, P).is_infinity() && scalar_mul(m, Q).is_infinity(), Errc::NotTorsion,
            "pairing arguments are not m-torsion");
    require(mod(F->order() - 1, m) == 0, Errc::FieldLacksRoots,
            "working field does not contain the m-th roots of unity");
    if (P.is_infinity() || Q.is_infinity() || P == Q || m == 1)
        return {FieldElement::one(F), m};
    for (int attempt = 0; attempt < kPairingRetries; ++attempt) {
        const Point S = random_point(E, rng);
        try {
            const auto fp = detail::miller_ratio(P, m, add(Q, S), S);
            const auto fq = detail::miller_ratio(Q, m, sub(P, S), neg(S));
            // Fixed convention: the inverse of the raw ratio.
            PairingValue v{fq / fp, m};
            require(v.value.pow(m).is_one(), Errc::NotRootOfUnity, "pairing value is not an m-th root of unity");
            return v;
        } catch (const detail::MillerZero&) {
        }
    }
    fail(Errc::PairingRetriesExhausted, "every auxiliary point hit a zero of a Miller line");
}

inline PairingValue weil_pairing(const Point& P, const Point& Q, const Int& m)
{
    Rng rng(0);
    return weil_pairing(P, Q, m, rng);
}

inline PairingValue weil_pairing(const Point& P, const Point& Q, long long m)
{
    return weil_pairing(P, Q, Int(static_cast<long>(m)));
}

/// Exact multiplicative order of a root of unity in mu_m.
inline Int root_of_unity_order(const PairingValue& v)
{
    require(v.value.pow(v.m).is_one(), Errc::NotRootOfUnity, "value is not an m-th root of unity");
    Int ord = v.m;
    for (const auto& [ell, e] : factor(v.m)) {
        for (unsigned i = 0; i < e; ++i) {
            if (!v.value.pow(Int(ord / ell)).is_one())
                break;
            ord /= ell;
        }
    }
    return ord;
}

} // namespace distortion
