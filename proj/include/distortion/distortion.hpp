#pragma once

#include <optional>
#include <string>
#include <vector>

#include "distortion/endomorphism.hpp"

namespace distortion {

/// e_m(P, phi(Q)).
inline PairingValue modified_weil_pairing(const Point& P, const Point& Q, const Int& m, const Endomorphism& phi, Rng& rng)
{
    return weil_pairing(P, phi(Q), m, rng);
}

inline PairingValue modified_weil_pairing(const Point& P, const Point& Q, const Int& m, const Endomorphism& phi)
{
    Rng rng(0);
    return modified_weil_pairing(P, Q, m, phi, rng);
}

constexpr std::uint64_t kMaxEnumeratedOrder = 10000;

/// Exact order check: m P = O and (m / ell) P != O for every prime ell | m.
inline bool has_exact_order(const Point& P, const Int& m)
{
    if (!scalar_mul(m, P).is_infinity())
        return false;
    for (const auto& [ell, e] : factor(m))
        if (scalar_mul(Int(m / ell), P).is_infinity())
            return false;
    return true;
}

inline bool in_cyclic_subgroup(const Point& R, const Point& P, std::uint64_t m)
{
    Point T = Point::infinity(P.curve());
    for (std::uint64_t s = 0; s < m; ++s) {
        if (T == R)
            return true;
        T = add(T, P);
    }
    return false;
}

/// phi(P) not in <P>, for P of order exactly m.
inline bool is_distortion_for_point(const Endomorphism& phi, const Point& P, const Int& m)
{
    require(has_exact_order(P, m), Errc::OrderMismatch, "point does not have order " + m.get_str());
    const Point R = phi(P);
    if (m <= kMaxEnumeratedOrder)
        return !in_cyclic_subgroup(R, P, to_u64(m));
    require(is_prime(m), Errc::BadInput, "membership for large composite orders is not supported");
    Rng rng(0);
    return !weil_pairing(P, R, m, rng).value.is_one();
}

enum class Outcome { ScalarAction, AllButTwo, All, AllButOne };

inline std::string outcome_name(Outcome o)
{
    switch (o) {
    case Outcome::ScalarAction: return "ScalarAction";
    case Outcome::AllButTwo: return "AllButTwo";
    case Outcome::All: return "All";
    case Outcome::AllButOne: return "AllButOne";
    }
    return "?";
}

enum class ClassifyMode { Legendre, Eigenlines, Both };

struct DistortionVerdict {
    std::uint64_t ell = 0;
    Outcome outcome = Outcome::All;
    std::optional<int> legendre_value;      // absent when not computed
    bool legendre_ambiguous = false;        // ell may divide the conductor of Z[phi]: AllButOne or ScalarAction
    std::optional<Mat2> matrix;             // action on E[ell] when computed
    std::vector<std::uint64_t> eigenvalues; // distinct eigenvalues mod ell
    std::vector<Point> eigenlines;          // generators, over the E[ell] field
    std::string evidence;                   // "legendre", "eigenlines" or "both"
    std::size_t field_extension = 0;        // degree of the E[ell] field over the working field
};

/// Eigenvalues of M over F_ell (distinct, ascending).
inline std::vector<std::uint64_t> eigenvalues_mod(const Mat2& M)
{
    std::vector<std::uint64_t> out;
    const std::uint64_t ell = M.ell, t = M.trace(), d = M.det();
    for (std::uint64_t x = 0; x < ell; ++x)
        if ((x * x + ell * ell - (t * x) % ell + d) % ell == 0)
            out.push_back(x);
    return out;
}

/// Outcome from the matrix alone: scalar, or the number of invariant lines.
inline Outcome outcome_from_matrix(const Mat2& M)
{
    if (M.is_scalar())
        return Outcome::ScalarAction;
    switch (eigenvalues_mod(M).size()) {
    case 0: return Outcome::All;
    case 1: return Outcome::AllButOne;
    default: return Outcome::AllButTwo;
    }
}

/// Invariant lines of a non-scalar M, as coordinate vectors (a, b) for a P + b Q.
inline std::vector<std::pair<std::uint64_t, std::uint64_t>> eigenline_vectors(const Mat2& M)
{
    std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
    const std::uint64_t ell = M.ell;
    // Candidate lines: (0,1) and (1,k).
    auto invariant = [&](std::uint64_t a, std::uint64_t b) {
        const std::uint64_t x = (M.m[0] * a + M.m[1] * b) % ell;
        const std::uint64_t y = (M.m[2] * a + M.m[3] * b) % ell;
        return (x * b + ell * ell - (y * a) % ell) % ell == 0;
    };
    if (invariant(0, 1))
        out.emplace_back(0, 1);
    for (std::uint64_t k = 0; k < ell; ++k)
        if (invariant(1, k))
            out.emplace_back(1, k);
    return out;
}

/// ell^2 | D and D / ell^2 is still a discriminant (0 or 1 mod 4).
inline bool may_divide_conductor(const Int& D, std::uint64_t ell)
{
    const Int L2 = int_from_u64(ell * ell);
    if (mod(D, L2) != 0)
        return false;
    const Int r = mod(Int(D / L2), Int(4));
    return r == 0 || r == 1;
}

inline Outcome outcome_from_legendre(int s) { return s == -1 ? Outcome::All : s == 1 ? Outcome::AllButTwo : Outcome::AllButOne; }

constexpr std::size_t kMaxClassifyFieldDegree = 240;

/// Frame for E[ell] over the smallest workable extension of E's field.
inline TorsionFrame require_frame(const Curve& E, std::uint64_t ell, std::size_t max_total_degree = kMaxClassifyFieldDegree)
{
    auto frame = torsion_frame(E, ell, max_total_degree);
    require(frame.has_value(), Errc::TorsionNotRational,
            "E[" + std::to_string(ell) + "] is not rational over any extension within the size budget");
    return *frame;
}

inline DistortionVerdict classify_prime(const Endomorphism& phi, std::uint64_t ell, ClassifyMode mode)
{
    const Curve& E = phi.curve();
    require(is_prime(ell), Errc::NotPrime, std::to_string(ell) + " is not prime");
    require(ell != E.field()->p(), Errc::PrimeEqualsCharacteristic, "ell equals the characteristic");
    DistortionVerdict v;
    v.ell = ell;
    std::optional<Outcome> leg, eig;
    if (mode != ClassifyMode::Eigenlines) {
        const auto td = endo_trace_degree(phi);
        const int s = legendre(td.D, int_from_u64(ell));
        v.legendre_value = s;
        leg = td.D == 0 ? Outcome::ScalarAction : outcome_from_legendre(s);
        v.legendre_ambiguous = td.D != 0 && may_divide_conductor(td.D, ell);
    }
    if (mode != ClassifyMode::Legendre) {
        const auto frame = require_frame(E, ell);
        v.field_extension = frame.k;
        const auto phiT = base_change(phi, *frame.emb);
        const Mat2 M = endo_matrix_mod_ell(phiT, ell, frame.basis);
        v.matrix = M;
        v.eigenvalues = eigenvalues_mod(M);
        eig = outcome_from_matrix(M);
        if (*eig != Outcome::ScalarAction && *eig != Outcome::All) {
            const auto& [P, Q] = frame.basis;
            for (const auto& [a, b] : eigenline_vectors(M))
                v.eigenlines.push_back(add(scalar_mul(Int(static_cast<unsigned long>(a)), P), scalar_mul(Int(static_cast<unsigned long>(b)), Q)));
        }
    }
    if (mode == ClassifyMode::Legendre) {
        v.outcome = *leg;
        v.evidence = "legendre";
    } else if (mode == ClassifyMode::Eigenlines) {
        v.outcome = *eig;
        v.evidence = "eigenlines";
    } else {
        const bool agree = *leg == *eig || (v.legendre_ambiguous && *eig == Outcome::ScalarAction);
        require(agree, Errc::BadInput,
                "legendre verdict " + outcome_name(*leg) + " disagrees with eigenline verdict " + outcome_name(*eig));
        v.outcome = *eig;
        v.evidence = "both";
    }
    return v;
}

/// phi distorts every non-trivial point of E[m] iff (D_phi / ell) = -1 for all ell | m.
inline bool is_distortion_for_torsion(const Endomorphism& phi, const Int& m)
{
    const Int p = int_from_u64(phi.curve().field()->p());
    require(m > 1, Errc::BadInput, "m must exceed 1");
    require(gcd(m, p) == 1, Errc::PrimeEqualsCharacteristic, "m is divisible by the characteristic");
    const auto td = endo_trace_degree(phi);
    for (const auto& [ell, e] : factor(m))
        if (legendre(td.D, ell) != -1)
            return false;
    return true;
}

/// True when no distortion map exists for P in E(F_q)[ell] (E[ell] not contained in E(F_q)).
inline bool verheul_obstruction(const Curve& E, std::uint64_t ell)
{
    require(!is_supersingular(E), Errc::CurveSupersingular, "the obstruction applies to ordinary curves only");
    const Int L = int_from_u64(ell);
    const Int N = group_order(E);
    require(mod(N, L) == 0, Errc::BadInput, "ell does not divide #E(F_q)");
    if (mod(N, L * L) != 0)
        return true;
    Rng rng(ell);
    try {
        torsion_basis(E, L, rng);
        return false;
    } catch (const Error& e) {
        if (e.code() != Errc::TorsionNotRational)
            throw;
        return true;
    }
}

/// Tr_k(P) = sum_{i<k} pi_q^i(P), q the size of the curve's base field.
inline Point trace_map(const Point& P, std::uint64_t k)
{
    const std::uint64_t d = P.curve().base_degree();
    Point acc = Point::infinity(P.curve());
    Point cur = P;
    for (std::uint64_t i = 0; i < k; ++i) {
        acc = add(acc, cur);
        cur = frobenius(cur, d);
    }
    return acc;
}

/// Tr_k as a formal sum of Frobenius powers.
inline Endomorphism trace_endomorphism(const Curve& E, std::uint64_t k)
{
    std::vector<Term> terms;
    const std::uint64_t d = E.base_degree();
    for (std::uint64_t i = 0; i < k; ++i) {
        Chain c;
        if (i > 0)
            c.push_back(frobenius_atom(E, d * i));
        terms.push_back(Term{1, std::move(c)});
    }
    return Endomorphism(E, std::move(terms));
}

struct FrobeniusEigenlines {
    Point one;    // generator of the 1-eigenline, E(F_q)[ell]
    Point q_line; // generator of the q-eigenline
};

/// Eigenlines of pi_q on E[ell], q the base field size; points live over the
/// smallest extension containing E[ell].
inline FrobeniusEigenlines frobenius_eigenspaces(const Curve& E, std::uint64_t ell)
{
    const Int q = E.base_q();
    require(ell != E.field()->p(), Errc::PrimeEqualsCharacteristic, "ell equals the characteristic");
    require(mod(E.base_order(), int_from_u64(ell)) == 0, Errc::BadInput, "ell does not divide #E(F_q)");
    require(embedding_degree(q, ell) > 1, Errc::EigenvaluesCoincide, "q = 1 mod ell: Frobenius eigenvalues coincide");
    const auto frame = require_frame(E, ell);
    const std::uint64_t qm = mod_u64(q, ell);
    const std::uint64_t d = E.base_degree();
    std::optional<Point> one, ql;
    for (const auto& G : cyclic_subgroup_generators(frame.basis.first, frame.basis.second, ell)) {
        const Point F = frobenius(G, d);
        if (F == G)
            one = G;
        else if (F == scalar_mul(Int(static_cast<unsigned long>(qm)), G))
            ql = G;
    }
    require(one && ql, Errc::BadInput, "Frobenius eigenlines not found");
    return {*one, *ql};
}

} // namespace distortion
