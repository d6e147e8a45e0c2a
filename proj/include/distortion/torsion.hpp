#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "distortion/pairing.hpp"

namespace distortion {

constexpr int kTorsionRetries = 64;

/// log_g(h) in the cyclic group <g> of order ell^k, or nullopt if h is not in <g>.
inline std::optional<Int> discrete_log_prime_power(const Point& g, const Point& h, const Int& ell, unsigned k)
{
    if (k == 0)
        return h.is_infinity() ? std::optional<Int>(Int(0)) : std::nullopt;
    const Point base = scalar_mul(pow(ell, k - 1), g); // order ell
    Int x = 0;
    Int ellj = 1;
    for (unsigned j = 0; j < k; ++j) {
        const Point target = scalar_mul(pow(ell, k - 1 - j), sub(h, scalar_mul(x, g)));
        std::optional<Int> digit;
        Point acc = Point::infinity(g.curve());
        for (Int d = 0; d < ell; ++d) {
            if (acc == target) {
                digit = d;
                break;
            }
            acc = add(acc, base);
        }
        if (!digit)
            return std::nullopt;
        x += *digit * ellj;
        ellj *= ell;
    }
    if (scalar_mul(x, g) != h)
        return std::nullopt;
    return x;
}

inline unsigned log_order(const Point& P, const Int& ell)
{
    unsigned k = 0;
    Point T = P;
    while (!T.is_infinity()) {
        T = scalar_mul(ell, T);
        ++k;
    }
    return k;
}

namespace detail {

/// One attempt at a basis of E[ell^e] from the ell-primary part (of order
/// ell^v) of E(F); the caller certifies independence.
inline std::optional<std::pair<Point, Point>> prime_power_basis_attempt(const Curve& E, const Int& ell, unsigned e,
                                                                        unsigned v, const Int& cofactor, Rng& rng)
{
    const Point S1 = scalar_mul(cofactor, random_point(E, rng));
    const Point S2 = scalar_mul(cofactor, random_point(E, rng));
    const unsigned a = log_order(S1, ell);
    if (a < e || v < a + e)
        return std::nullopt;
    const unsigned b = v - a;
    if (a < b)
        return std::nullopt;
    const Point c1 = scalar_mul(pow(ell, b), S1);
    const Point c2 = scalar_mul(pow(ell, b), S2);
    const auto lambda = discrete_log_prime_power(c1, c2, ell, a - b);
    if (!lambda)
        return std::nullopt;
    const Point S2p = sub(S2, scalar_mul(*lambda, S1));
    const Point P1 = scalar_mul(pow(ell, a - e), S1);
    const Point P2 = scalar_mul(pow(ell, b - e), S2p);
    return std::make_pair(P1, P2);
}

} // namespace detail

/// Basis (P, Q) of E[m] over the curve's working field, certified by e_m(P, Q)
/// having order m. Only the primes of m are factored out of #E(F).
inline std::pair<Point, Point> torsion_basis(const Curve& E, const Int& m, Rng& rng)
{
    const Int p = int_from_u64(E.field()->p());
    require(m >= 1 && gcd(m, p) == 1, Errc::BadInput, "torsion order must be positive and prime to p");
    const Int N = group_order(E);
    require(mod(N, Int(m * m)) == 0, Errc::TorsionNotRational,
            "E[" + m.get_str() + "] is not rational over the working field (m^2 does not divide #E)");
    if (m == 1)
        return {Point::infinity(E), Point::infinity(E)};
    const auto mf = factor(m);
    for (int attempt = 0; attempt < kTorsionRetries; ++attempt) {
        Point P = Point::infinity(E), Q = P;
        bool ok = true;
        for (const auto& [ell, e] : mf) {
            const unsigned v = valuation(N, ell);
            const Int cofactor = N / pow(ell, v);
            std::optional<std::pair<Point, Point>> pb;
            for (int inner = 0; inner < kTorsionRetries && !pb; ++inner) {
                pb = detail::prime_power_basis_attempt(E, ell, e, v, cofactor, rng);
                if (pb) {
                    const Int le = pow(ell, e);
                    const auto w = weil_pairing(pb->first, pb->second, le, rng);
                    if (root_of_unity_order(w) != le)
                        pb.reset();
                }
            }
            if (!pb) {
                ok = false;
                break;
            }
            P = add(P, pb->first);
            Q = add(Q, pb->second);
        }
        if (!ok)
            continue;
        const auto w = weil_pairing(P, Q, m, rng);
        if (root_of_unity_order(w) == m)
            return {P, Q};
    }
    fail(Errc::TorsionNotRational, "could not certify a basis of E[" + m.get_str() + "]");
}

inline std::pair<Point, Point> torsion_basis(const Curve& E, long long m, Rng& rng)
{
    return torsion_basis(E, Int(static_cast<long>(m)), rng);
}

/// All points i P + j Q, 0 <= i, j < m, indexed [i * m + j].
inline std::vector<Point> enumerate_torsion(const Point& P, const Point& Q, std::uint64_t m)
{
    std::vector<Point> out;
    out.reserve(m * m);
    Point row = Point::infinity(P.curve());
    for (std::uint64_t i = 0; i < m; ++i) {
        Point cur = row;
        for (std::uint64_t j = 0; j < m; ++j) {
            out.push_back(cur);
            cur = add(cur, Q);
        }
        row = add(row, P);
    }
    return out;
}

/// One generator per cyclic subgroup of order ell in E[ell]: Q and P + k Q.
inline std::vector<Point> cyclic_subgroup_generators(const Point& P, const Point& Q, std::uint64_t ell)
{
    std::vector<Point> out{Q};
    Point cur = P;
    for (std::uint64_t k = 0; k < ell; ++k) {
        out.push_back(cur);
        cur = add(cur, Q);
    }
    return out;
}

} // namespace distortion
