#pragma once

#include <optional>

#include "distortion/distortion.hpp"

namespace distortion {

struct DdhInstance {
    Point P, A, B, C;
    Int m;
    Endomorphism phi;
};

struct DdhScalars {
    Int a, b, c;
};

/// (P, aP, bP, cP); scalars absent from `given` are drawn from the seed.
inline DdhInstance generate_instance(const Point& P, const Int& m, const Endomorphism& phi,
                                     const std::optional<DdhScalars>& given, std::uint64_t seed = 0)
{
    require(has_exact_order(P, m), Errc::OrderMismatch, "P does not have order " + m.get_str());
    DdhScalars s;
    if (given) {
        s = *given;
    } else {
        Rng rng(seed);
        s.a = random_below(rng, m);
        s.b = random_below(rng, m);
        s.c = mod(Int(s.a * s.b), m);
    }
    return {P, scalar_mul(s.a, P), scalar_mul(s.b, P), scalar_mul(s.c, P), m, phi};
}

/// e_{m,phi}(A, B) == e_{m,phi}(P, C).
inline bool decide_ddh(const DdhInstance& inst, std::uint64_t seed = 0)
{
    Rng rng(seed);
    const auto base = modified_weil_pairing(inst.P, inst.P, inst.m, inst.phi, rng);
    require(root_of_unity_order(base) == inst.m, Errc::DegeneratePairing,
            "e_{m,phi}(P, P) does not have order m: phi does not distort P");
    if (inst.m <= kMaxEnumeratedOrder) {
        const auto m = to_u64(inst.m);
        for (const Point* X : {&inst.A, &inst.B, &inst.C})
            require(in_cyclic_subgroup(*X, inst.P, m), Errc::BadInput, "tuple point is not in <P>");
    }
    const auto lhs = modified_weil_pairing(inst.A, inst.B, inst.m, inst.phi, rng);
    const auto rhs = modified_weil_pairing(inst.P, inst.C, inst.m, inst.phi, rng);
    return lhs.value == rhs.value;
}

} // namespace distortion
