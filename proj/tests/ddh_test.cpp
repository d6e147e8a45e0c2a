#include <gtest/gtest.h>

#include "worked_examples.hpp"

#include "distortion/ddh.hpp"

using namespace distortion;

TEST(Ddh, TrivialTuple)
{
    const worked::Charles701 ex;
    const auto inst = generate_instance(ex.Q, 5, ex.phi2, DdhScalars{1, 1, 1});
    EXPECT_EQ(inst.A, ex.Q);
    EXPECT_EQ(inst.C, ex.Q);
    EXPECT_TRUE(decide_ddh(inst));
}

TEST(Ddh, ValidAndShiftedTuples)
{
    const worked::Charles701 ex;
    Rng rng(9);
    for (int i = 0; i < 20; ++i) {
        const Int a = random_below(rng, Int(5)), b = random_below(rng, Int(5));
        EXPECT_TRUE(decide_ddh(generate_instance(ex.Q, 5, ex.phi2, DdhScalars{a, b, a * b})));
        EXPECT_FALSE(decide_ddh(generate_instance(ex.Q, 5, ex.phi2, DdhScalars{a, b, a * b + 1})));
    }
}

TEST(Ddh, SeededInstancesAreReproducibleAndValid)
{
    const worked::Charles701 ex;
    const auto i1 = generate_instance(ex.Q, 5, ex.phi2, std::nullopt, 42);
    const auto i2 = generate_instance(ex.Q, 5, ex.phi2, std::nullopt, 42);
    EXPECT_EQ(i1.A, i2.A);
    EXPECT_EQ(i1.B, i2.B);
    EXPECT_EQ(i1.C, i2.C);
    EXPECT_TRUE(scalar_mul(5, i1.A).is_infinity());
    EXPECT_TRUE(decide_ddh(i1));
}

TEST(Ddh, Preconditions)
{
    const worked::Charles701 ex;
    try {
        generate_instance(ex.Q, 25, ex.phi2, DdhScalars{1, 1, 1});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::OrderMismatch);
    }
    const auto id = Endomorphism::scalar(ex.E2(), 1);
    try {
        decide_ddh(generate_instance(ex.Q, 5, id, DdhScalars{1, 2, 2}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::DegeneratePairing);
    }
}
