#pragma once

#include <optional>
#include <string>
#include <vector>

#include "distortion/distortion.hpp"

namespace distortion {

struct CatalogueBuild {
    Curve curve;
    Endomorphism endo;
    Int expected_order; // #E over the curve's base field
    std::string name;
};

struct CatalogueEntry {
    std::string name;
    std::string map;
    std::string condition;
    std::string group_order;
};

inline const std::vector<CatalogueEntry>& catalogue_entries()
{
    static const std::vector<CatalogueEntry> entries{
        {"ss_i", "(x,y) -> (-x, i y)", "p = 3 mod 4, E: y^2 = x^3 + a x over F_p", "p + 1"},
        {"ss_zeta", "(x,y) -> (zeta x, y)", "p = 2 mod 3, E: y^2 = x^3 + a over F_p", "p + 1"},
        {"ss_pp2", "(x,y) -> (omega x^p / r^((2p-1)/3), y^p / r^(p-1))",
         "p = 2 mod 3, E: y^2 = x^3 + a over F_p^2 with a not in F_p, r^2 = a, omega^3 = r", "p^2 - p + 1"},
        {"ord_type1", "(x,y) -> (r x, y)", "r = 2 mod 3 prime, p = r^2 + r + 1 prime, E: y^2 = x^3 + b over F_p",
         "r^2"},
        {"ord_type2", "(x,y) -> (-x, 4r y)", "r = 3 mod 4 prime, p = 16 r^2 + 1 prime, E: y^2 = x^3 - x over F_p",
         "16 r^2"},
    };
    return entries;
}

namespace detail {

/// Smallest root of f in F (roots are returned sorted).
inline std::optional<FieldElement> smallest_root(const Poly& f)
{
    const auto rts = roots(f);
    if (rts.empty())
        return std::nullopt;
    return rts.front();
}

inline Field field_with_degree(const Field& F, std::size_t n)
{
    require(n % F->degree() == 0, Errc::BadInput, "requested degree is not a multiple of the field degree");
    return extension(F, n / F->degree())->target();
}

} // namespace detail

/// y^2 = x^3 + a x over F_p, worked over F_p^2, with (x,y) -> (-x, i y).
inline CatalogueBuild build_ss_i(std::uint64_t p, const Int& a)
{
    require(is_prime(int_from_u64(p)) && p > 3, Errc::NotPrime, "p must be a prime above 3");
    require(p % 4 == 3, Errc::BadCongruence, "ss_i needs p = 3 mod 4");
    const Field F2 = detail::field_with_degree(FieldSpec::prime(p), 2);
    const Curve E(FieldElement::from_int(F2, a), FieldElement::zero(F2), 1);
    const auto one = FieldElement::one(F2);
    const auto i = detail::smallest_root(Poly(F2, {one, FieldElement::zero(F2), one}));
    require(i.has_value(), Errc::BadInput, "no square root of -1");
    return {E, Endomorphism::twist(E, LinearTwist{-one, *i}), int_from_u64(p) + 1, "ss_i"};
}

/// y^2 = x^3 + a over F_p, worked over F_p^2, with (x,y) -> (zeta x, y).
inline CatalogueBuild build_ss_zeta(std::uint64_t p, const Int& a)
{
    require(is_prime(int_from_u64(p)) && p > 3, Errc::NotPrime, "p must be a prime above 3");
    require(p % 3 == 2, Errc::BadCongruence, "ss_zeta needs p = 2 mod 3");
    const Field F2 = detail::field_with_degree(FieldSpec::prime(p), 2);
    const Curve E(FieldElement::zero(F2), FieldElement::from_int(F2, a), 1);
    const auto one = FieldElement::one(F2);
    const auto zeta = detail::smallest_root(Poly(F2, {one, one, one}));
    require(zeta.has_value(), Errc::BadInput, "no primitive cube root of unity");
    return {E, Endomorphism::twist(E, LinearTwist{*zeta, one}), int_from_u64(p) + 1, "ss_zeta"};
}

struct PP2Roots {
    std::optional<FieldElement> r;     // r^2 = a, r in F_p^2
    std::optional<FieldElement> omega; // omega^3 = r
};

/// y^2 = x^3 + a over F_p^2 (a not in F_p), worked over F_p^6, with
/// pi_p followed by (x,y) -> (omega x / r^((2p-1)/3), y / r^(p-1)).
/// `a` may live in any field whose degree is a multiple of 2; the working
/// field is that field when its degree is a multiple of 6, else an extension.
inline CatalogueBuild build_ss_pp2(const FieldElement& a_in, const PP2Roots& pinned = {})
{
    const std::uint64_t p = a_in.field()->p();
    require(p > 3, Errc::NotPrime, "p must be a prime above 3");
    require(p % 3 == 2, Errc::BadCongruence, "ss_pp2 needs p = 2 mod 3");
    require(a_in.field()->degree() % 2 == 0 && a_in.in_subfield(2), Errc::BadInput, "a must lie in F_p^2");
    require(!a_in.in_subfield(1), Errc::ElementInSubfield, "a lies in F_p");
    const std::size_t n = std::lcm(a_in.field()->degree(), std::size_t{6});
    const auto emb = extension(a_in.field(), n / a_in.field()->degree());
    const Field& W = emb->target();
    const FieldElement a = emb->lift(a_in);
    const Curve E(FieldElement::zero(W), a, 2);

    FieldElement r = pinned.r ? emb->lift(*pinned.r) : FieldElement::zero(W);
    if (!pinned.r) {
        const auto s = a.sqrt();
        require(s.has_value(), Errc::BadInput, "a has no square root");
        r = *s;
    }
    require(r.square() == a, Errc::BadInput, "r^2 != a");
    require(r.in_subfield(2), Errc::BadInput, "r is not in F_p^2");
    FieldElement omega = pinned.omega ? emb->lift(*pinned.omega) : FieldElement::zero(W);
    if (!pinned.omega) {
        const auto w = detail::smallest_root(Poly(W, {-r, FieldElement::zero(W), FieldElement::zero(W), FieldElement::one(W)}));
        require(w.has_value(), Errc::BadInput, "r has no cube root");
        omega = *w;
    }
    require(omega.square() * omega == r, Errc::BadInput, "omega^3 != r");

    const LinearTwist tw{omega / r.pow(std::uint64_t((2 * p - 1) / 3)), r.pow(std::uint64_t(p - 1)).inverse()};
    const Curve Ep = E.conjugate(1);
    auto phi = Endomorphism::from_chain(E, {frobenius_atom(E, 1), twist_atom(Ep, tw)});
    const Int P = int_from_u64(p);
    return {E, phi, P * P - P + 1, "ss_pp2"};
}

struct OrdinaryBuild {
    CatalogueBuild build;
    std::uint64_t r = 0;
    std::uint64_t p = 0;
};

/// phi(P) not in <P> for every non-trivial P in E(F_p).
inline bool distorts_all_rational_points(const Endomorphism& phi)
{
    for (const auto& P : enumerate_base_points(phi.curve())) {
        if (P.is_infinity())
            continue;
        if (in_cyclic_subgroup(phi(P), P, to_u64(point_order(P))))
            return false;
    }
    return true;
}

/// Type I: r = 2 mod 3, p = r^2 + r + 1, (x,y) -> (r x, y) on y^2 = x^3 + b.
/// Accepts the smallest b with #E(F_p) = r^2 whose map distorts every
/// non-trivial point of E(F_p).
inline std::vector<OrdinaryBuild> build_ord_type1(std::uint64_t search_bound)
{
    std::vector<OrdinaryBuild> out;
    for (std::uint64_t r = 2; r <= search_bound; ++r) {
        if (r % 3 != 2 || !is_prime(int_from_u64(r)))
            continue;
        const std::uint64_t p = r * r + r + 1;
        if (!is_prime(int_from_u64(p)) || p > naive_count_bound())
            continue;
        const Field F = FieldSpec::prime(p);
        const Int order = int_from_u64(r * r);
        for (std::uint64_t b = 1; b < p; ++b) {
            const Curve E(FieldElement::zero(F), FieldElement::from_int(F, int_from_u64(b)), 1);
            if (group_order(E) != order)
                continue;
            const auto phi = Endomorphism::twist(E, LinearTwist{FieldElement::from_int(F, int_from_u64(r)), FieldElement::one(F)});
            if (!distorts_all_rational_points(phi))
                continue;
            out.push_back({{E, phi, order, "ord_type1"}, r, p});
            break;
        }
    }
    require(!out.empty(), Errc::NoneFound, "no Type I curve within the search bound");
    return out;
}

/// Type II: r = 3 mod 4, p = 16 r^2 + 1, (x,y) -> (-x, 4r y) on y^2 = x^3 - x.
inline std::vector<OrdinaryBuild> build_ord_type2(std::uint64_t search_bound)
{
    std::vector<OrdinaryBuild> out;
    for (std::uint64_t r = 3; r <= search_bound; ++r) {
        if (r % 4 != 3 || !is_prime(int_from_u64(r)))
            continue;
        const std::uint64_t p = 16 * r * r + 1;
        if (!is_prime(int_from_u64(p)) || p > naive_count_bound())
            continue;
        const Field F = FieldSpec::prime(p);
        const Curve E(FieldElement::from_int(F, -1), FieldElement::zero(F), 1);
        const Int order = int_from_u64(16 * r * r);
        require(group_order(E) == order, Errc::BadInput, "Type II curve order is not 16 r^2");
        const auto phi = Endomorphism::twist(E, LinearTwist{FieldElement::from_int(F, -1), FieldElement::from_int(F, int_from_u64(4 * r))});
        out.push_back({{E, phi, order, "ord_type2"}, r, p});
    }
    require(!out.empty(), Errc::NoneFound, "no Type II curve within the search bound");
    return out;
}

} // namespace distortion
