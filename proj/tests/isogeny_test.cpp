#include <gtest/gtest.h>

#include "worked_examples.hpp"

using namespace distortion;
using worked::c;

namespace {

Poly ints(const Field& F, std::vector<long long> descending)
{
    std::reverse(descending.begin(), descending.end());
    return Poly::from_ints(F, descending);
}

/// Evaluates the composition g o f pointwise over every base point.
void expect_pointwise_equal(const std::vector<Point>& pts, const auto& f, const auto& g)
{
    for (const auto& P : pts)
        ASSERT_EQ(f(P), g(P)) << P.to_string();
}

} // namespace

TEST(Velu, TwoIsogenyOverF701MatchesPublishedMaps)
{
    const worked::Charles701 ex;
    const auto& F = ex.F;
    EXPECT_TRUE(ex.psi.codomain().same_as(Curve(c(F, 503), c(F, 66))));
    EXPECT_EQ(ex.psi.degree(), 2);
    const auto& m = ex.psi.maps();
    EXPECT_EQ(m.xn, ints(F, {1, -319, 313}));
    EXPECT_EQ(m.xd, ints(F, {1, -319}));
    EXPECT_EQ(m.yn, ints(F, {1, 63, -197}));
    EXPECT_EQ(m.yd, ints(F, {1, 63, 116}));
}

TEST(Velu, DualOverF701MatchesPublishedMaps)
{
    const worked::Charles701 ex;
    const auto& F = ex.F;
    const auto d = dual(ex.psi);
    EXPECT_TRUE(d.domain().same_as(ex.E2()));
    EXPECT_TRUE(d.codomain().same_as(ex.E));
    const auto& m = d.maps();
    EXPECT_EQ(m.xn, ints(F, {-175, -191, -52}));
    EXPECT_EQ(m.xd, ints(F, {1, -63}));
    EXPECT_EQ(m.yn, ints(F, {263, -191, 84}));
    EXPECT_EQ(m.yd, ints(F, {1, -126, -237}));
    const auto two = [](const Point& P) { return scalar_mul(2, P); };
    expect_pointwise_equal(enumerate_base_points(ex.E), [&](const Point& P) { return d(ex.psi(P)); }, two);
    expect_pointwise_equal(enumerate_base_points(ex.E2()), [&](const Point& P) { return ex.psi(d(P)); }, two);
}

TEST(Velu, NineIsogenyOverF13CubedMatchesPublishedMaps)
{
    const worked::Conductor13 ex;
    const auto& F = ex.F;
    EXPECT_EQ(ex.phi.degree(), 9);
    EXPECT_TRUE(ex.phi.codomain().same_as(ex.E));
    const auto& m = ex.phi.maps();
    EXPECT_EQ(m.xn, ints(F, {1, 1, 4, 1, -6, -1, 5, -6, 0, -5}));
    EXPECT_EQ(m.xd, ints(F, {1, 1, 4, 1, -6, -1, 3, 5, 4}));
    EXPECT_EQ(m.yn, ints(F, {1, -5, -5, 2, 2, -1, -2, 0, 5, -4, -2, 3, -6}));
    EXPECT_EQ(m.yd, ints(F, {1, -5, -5, 2, 2, -1, -5, 2, 1, -5, 5, -2, 5}));
}

TEST(Velu, KernelIsMappedToInfinityAndMapIsAHomomorphism)
{
    const worked::Conductor13 ex;
    Point T = ex.K;
    for (int i = 0; i < 9; ++i, T = T + ex.K)
        ASSERT_TRUE(ex.phi(T).is_infinity());
    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        const auto P = random_point(ex.E, rng), Q = random_point(ex.E, rng);
        ASSERT_EQ(ex.phi(P + Q), ex.phi(P) + ex.phi(Q));
        const auto R = ex.phi(P);
        if (!R.is_infinity())
            ASSERT_TRUE(ex.E.contains(R.x(), R.y()));
    }
}

TEST(Velu, KernelOverExtensionDescendsWhenGaloisStable)
{
    const worked::Remark13 ex;
    EXPECT_EQ(point_order(ex.K), 4);
    EXPECT_TRUE(ex.psi.domain().same_as(ex.E));
    EXPECT_TRUE(ex.psi.codomain().same_as(Curve(c(ex.F, 8), c(ex.F, 9))));
    EXPECT_EQ(ex.psi.degree(), 4);
}

TEST(Velu, KernelNotGaloisStableIsRejected)
{
    const auto F = FieldSpec::prime(19);
    const Curve E(c(F, 1), c(F, 1));
    const auto frame = torsion_frame(E, 3, 64);
    ASSERT_TRUE(frame.has_value());
    const auto& basis = frame->basis;
    const auto& emb = frame->emb;
    bool rejected = false;
    for (const auto& G : cyclic_subgroup_generators(basis.first, basis.second, 3)) {
        const Point F1 = frobenius(G, 1);
        bool in = false;
        for (Point T = G; !T.is_infinity(); T = T + G)
            in = in || T == F1;
        if (in)
            continue;
        try {
            velu_from_kernel(E, G, *emb);
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), Errc::KernelNotRationalAsSet);
            rejected = true;
        }
        break;
    }
    EXPECT_TRUE(rejected);
}

TEST(Isomorphism, PublishedTwistTakesCodomainBackToCurve)
{
    const worked::Remark13 ex;
    const auto isos = find_isomorphisms(ex.psi.codomain(), ex.E);
    EXPECT_NE(std::find(isos.begin(), isos.end(), ex.gamma), isos.end());
    EXPECT_TRUE(twist_codomain(ex.psi.codomain(), ex.gamma).same_as(ex.E));
    for (const auto& tw : isos)
        EXPECT_EQ(tw.v.square(), tw.u.square() * tw.u);
}

TEST(Isomorphism, IdentityIsPreferred)
{
    const worked::Charles701 ex;
    const auto tw = find_isomorphism(ex.E, ex.E);
    ASSERT_TRUE(tw.has_value());
    EXPECT_TRUE(tw->u.is_one());
    EXPECT_TRUE(tw->v.is_one());
}

TEST(Dual, CompositionIsMultiplicationByDegreeOnRandomCurves)
{
    // Generated: random curves over small primes, kernels of prime order 3 or 5.
    Rng rng(17);
    int checked = 0;
    for (std::uint64_t p : {31ull, 37ull, 43ull, 59ull, 61ull, 67ull}) {
        const auto F = FieldSpec::prime(p);
        for (int trial = 0; trial < 4; ++trial) {
            const auto a = FieldElement::random(F, rng), b = FieldElement::random(F, rng);
            if ((a.square() * a * c(F, 4) + b.square() * c(F, 27)).is_zero())
                continue;
            const Curve E(a, b);
            const Int N = group_order(E);
            for (long ell : {3L, 5L}) {
                if (mod(N, Int(ell)) != 0)
                    continue;
                Point K = Point::infinity(E);
                while (K.is_infinity())
                    K = scalar_mul(Int(N / ell), random_point(E, rng));
                const auto psi = velu_from_kernel(E, K);
                ASSERT_EQ(psi.degree(), ell);
                const auto d = dual(psi);
                for (int i = 0; i < 20; ++i) {
                    const auto P = random_point(E, rng);
                    ASSERT_EQ(d(psi(P)), scalar_mul(Int(ell), P));
                }
                ++checked;
            }
        }
    }
    EXPECT_GE(checked, 5);
}
