#pragma once

#include "distortion/catalogue.hpp"

namespace worked {

using namespace distortion;

inline FieldElement c(const Field& F, long long v) { return FieldElement::from_int(F, v); }

/// y^2 = x^3 + z over F_19[z]/(z^2 + 18z + 2).
struct Frobenius361 {
    Field F = FieldSpec::create(19, {2, 18, 1});
    Curve E{FieldElement::zero(F), FieldElement::generator(F)};
    Endomorphism pi = Endomorphism::frobenius(E, 2);
};

/// y^2 = x^3 + x + 5 over F_13[z]/(z^3 + 2z + 11), degree-9 isogeny from (3,3).
struct Conductor13 {
    Field F = FieldSpec::create(13, {11, 2, 0, 1});
    Curve E{c(F, 1), c(F, 5)};
    Point K{E, c(F, 3), c(F, 3)};
    Point P{E, c(F, 12), c(F, 4)};
    Isogeny phi = velu_from_kernel(E, K);
    Endomorphism endo = Endomorphism::from_chain(E, {isogeny_atom(phi, "phi")});
};

/// y^2 = x^3 - 35x + 98 over F_701 with the 2-isogeny from (319,0) and the
/// endomorphism alpha = (1 + sqrt(-7))/2, alpha = 386.
struct Charles701 {
    Field F = FieldSpec::prime(701);
    Curve E{c(F, -35), c(F, 98)};
    Point K{E, c(F, 319), c(F, 0)};
    Isogeny psi = velu_from_kernel(E, K);
    FieldElement alpha_inv = c(F, 386).inverse();
    Endomorphism alpha = Endomorphism::from_chain(
        E, {isogeny_atom(psi, "V1"), twist_atom(psi.codomain(), LinearTwist{alpha_inv.square(), alpha_inv.square() * alpha_inv})});
    Endomorphism phi2 = transfer(psi, alpha, "V1");
    const Curve& E2() const { return psi.codomain(); }
    Point Q{psi.codomain(), c(F, 675), c(F, 16)};
};

/// y^2 = x^3 + tau + 1 over F_101^6 with the pinned tau, r, omega and the
/// degree-17 isogeny to E'.
struct Transfer101 {
    Field F = FieldSpec::create(101, {2, 67, 20, 90, 2, 0, 1});
    FieldElement tau{F, {9, 70, 20, 79, 25, 56}};
    FieldElement r{F, {3, 61, 3, 27, 29, 69}};
    FieldElement omega{F, {69, 100, 94, 19, 90, 38}};
    CatalogueBuild built = build_ss_pp2(tau + FieldElement::one(F), PP2Roots{r, omega});
    const Curve& E() const { return built.curve; }
    const Endomorphism& phi() const { return built.endo; }
    Point K{built.curve, FieldElement(F, {0, 49, 59, 91, 16, 32}), FieldElement(F, {41, 62, 61, 44, 51, 90})};
    Isogeny psi = velu_from_kernel(built.curve, K);
    Endomorphism phi2 = transfer(psi, built.endo, "V1");
    const Curve& E2() const { return psi.codomain(); }
    Point P{psi.codomain(), FieldElement(F, {100, 46, 26, 59, 30, 83}), FieldElement(F, {56, 32, 23, 56, 81, 36})};
    Point P2{psi.codomain(), FieldElement(F, {46, 66, 89, 33, 23, 0}), FieldElement(F, {42, 75, 4, 82, 30, 22})};
    FieldElement golden_P{F, {72, 81, 57, 12, 11, 52}};
};

/// y^2 = x^3 + 11x + 4 over F_13: 4-isogeny from a point over F_13^6, then
/// (x,y) -> (4x, -5y) back to E.
struct Remark13 {
    Field F = FieldSpec::prime(13);
    Field F6 = FieldSpec::create(13, {2, 11, 11, 10, 0, 0, 1});
    Curve E{c(F, 11), c(F, 4)};
    FieldEmbedding emb{F, F6};
    Curve E6 = base_change(E, emb);
    Point K{E6, emb.lift(c(F, 4)), FieldElement(F6, {5, 12, 0, 7, 9, 3})};
    Isogeny psi = velu_from_kernel(E, K, emb);
    LinearTwist gamma{c(F, 4), c(F, -5)};
    Endomorphism phi = Endomorphism::from_chain(E, {isogeny_atom(psi, "V1"), twist_atom(psi.codomain(), gamma)});
};

} // namespace worked
