#pragma once

#include <chrono>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "worked_examples.hpp"

#include "distortion/ddh.hpp"

namespace criteria {

using namespace distortion;
using worked::c;

struct Result {
    int id = 0;
    std::string title;
    std::size_t checks = 0;
    std::vector<std::string> failures;
    double seconds = 0;
    bool pass() const { return failures.empty() && checks > 0; }
};

class Recorder {
public:
    explicit Recorder(Result& r) : r_(r) {}

    void check(bool ok, const std::string& label)
    {
        ++r_.checks;
        if (!ok)
            r_.failures.push_back(label);
    }

    template <class A, class B>
    void equal(const A& got, const B& want, const std::string& label)
    {
        ++r_.checks;
        if (!(got == want)) {
            std::ostringstream os;
            os << label << ": got " << show(got) << ", expected " << show(want);
            r_.failures.push_back(os.str());
        }
    }

private:
    template <class T>
    static std::string show(const T& v)
    {
        if constexpr (requires { v.to_string(); })
            return v.to_string();
        else if constexpr (requires { v.get_str(); })
            return v.get_str();
        else if constexpr (requires { v.begin(); v.end(); }) {
            std::ostringstream os;
            os << "{";
            for (auto it = v.begin(); it != v.end(); ++it)
                os << (it == v.begin() ? "" : ", ") << *it;
            os << "}";
            return os.str();
        }
        else {
            std::ostringstream os;
            os << v;
            return os.str();
        }
    }

    Result& r_;
};

inline Result run(int id, const std::string& title, const std::function<void(Recorder&)>& body)
{
    Result r;
    r.id = id;
    r.title = title;
    Recorder rec(r);
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(rec);
    } catch (const std::exception& e) {
        r.failures.push_back(std::string("exception: ") + e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

inline Result frobenius_f361()
{
    return run(1, "F_361 Frobenius distorts E[22]", [](Recorder& rec) {
        const worked::Frobenius361 ex;
        const auto g = frobenius_trace(ex.E, false);
        rec.equal(g.N, 325, "order");
        rec.equal(g.t, 37, "trace");
        const auto td = endo_trace_degree(ex.pi);
        rec.equal(td.D, -75, "D_pi");
        rec.equal(legendre(Int(-75), Int(2)), -1, "legendre(-75, 2)");
        rec.equal(legendre(Int(-75), Int(11)), -1, "legendre(-75, 11)");
        rec.check(is_distortion_for_torsion(ex.pi, 22), "pi distorts E[22]");
        std::size_t killed = 0;
        for (const auto& P : enumerate_base_points(ex.E))
            killed += scalar_mul(325, P).is_infinity() ? 1 : 0;
        rec.equal(killed, std::size_t{325}, "325 P = O on every rational point");
    });
}

inline Result conductor_f13()
{
    return run(2, "degree-9 isogeny on y^2 = x^3 + x + 5 over F_13^3", [](Recorder& rec) {
        const worked::Conductor13 ex;
        const auto g = frobenius_trace(Curve(ex.E.a(), ex.E.b(), 3), false);
        rec.equal(g.N, 2268, "#E(F_13^3)");
        rec.equal(g.t, -70, "trace over F_13^3");
        rec.equal(endo_trace_degree(Endomorphism::frobenius(ex.E, 3)).D, -3888, "D_pi");
        const auto& F = ex.F;
        auto desc = [&](std::vector<long long> v) {
            std::reverse(v.begin(), v.end());
            return Poly::from_ints(F, v);
        };
        const auto& m = ex.phi.maps();
        rec.equal(m.xn, desc({1, 1, 4, 1, -6, -1, 5, -6, 0, -5}), "f1");
        rec.equal(m.xd, desc({1, 1, 4, 1, -6, -1, 3, 5, 4}), "f2");
        rec.equal(m.yn, desc({1, -5, -5, 2, 2, -1, -2, 0, 5, -4, -2, 3, -6}), "g1 / y");
        rec.equal(m.yd, desc({1, -5, -5, 2, 2, -1, -5, 2, 1, -5, 5, -2, 5}), "g2");
        const auto frame = require_frame(ex.E, 3);
        const auto phiT = base_change(ex.endo, *frame.emb);
        const auto sub = oracle::multiples(base_change(ex.P, frame.E, *frame.emb));
        for (const auto& R : sub)
            rec.check(phiT(R).is_infinity(), "phi kills " + R.to_string());
        for (const auto& Q : oracle::full_torsion(frame)) {
            if (std::find(sub.begin(), sub.end(), Q) != sub.end())
                continue;
            rec.check(oracle::distorts(phiT, Q), "phi distorts " + Q.to_string());
            rec.check(std::find(sub.begin(), sub.end(), phiT(Q)) != sub.end(), "phi(Q) in <P> for " + Q.to_string());
        }
        const auto M = endo_matrix_mod_ell(phiT, 3, frame.basis);
        rec.check(!M.is_zero(), "M(phi) mod 3 nonzero");
        rec.check((M * M).is_zero(), "M(phi)^2 = 0 mod 3");
    });
}

inline Result charles_f701()
{
    return run(3, "F_701 transfer along a 2-isogeny", [](Recorder& rec) {
        const worked::Charles701 ex;
        const auto& F = ex.F;
        rec.check(ex.E2().same_as(Curve(c(F, 503), c(F, 66))), "codomain y^2 = x^3 + 503x + 66");
        const auto d = dual(ex.psi);
        rec.equal(d.maps().xn, Poly::from_ints(F, {-52, -191, -175}), "dual x numerator");
        rec.equal(d.maps().xd, Poly::from_ints(F, {-63, 1}), "dual x denominator");
        const auto v = weil_pairing(ex.Q, ex.phi2(ex.Q), 5);
        rec.equal(v.value, c(F, 638), "e_5(Q, phi'(Q))");
        rec.equal(root_of_unity_order(v), 5, "order of the pairing value");
        Rng rng(3);
        const auto basis = torsion_basis(ex.E2(), 5, rng);
        const auto s = oracle::scan(ex.phi2, enumerate_torsion(basis.first, basis.second, 5));
        rec.equal(s.nontrivial, std::size_t{24}, "non-trivial points of E'[5]");
        rec.equal(s.distorted, std::size_t{24}, "distorted points of E'[5]");
    });
}

inline Result transfer_f101()
{
    return run(4, "F_101^6 transfer along a 17-isogeny", [](Recorder& rec) {
        const worked::Transfer101 ex;
        const Int want = Int(4) * 81 * 49 * 169 * 289 * 1369;
        rec.equal(group_order(ex.E()), want, "#E(F_101^6)");
        Rng rng(4);
        const auto basis = torsion_basis(ex.E(), 7, rng);
        const auto pts = enumerate_torsion(basis.first, basis.second, 7);
        const auto s = oracle::scan(ex.phi(), pts);
        rec.equal(s.nontrivial, std::size_t{48}, "non-trivial points of E[7]");
        rec.equal(s.distorted, std::size_t{36}, "distorted points of E[7]");
        std::vector<Point> small;
        for (const auto& R : pts)
            if (frobenius(R, 2) == R)
                small.push_back(R);
        const auto t = oracle::scan(ex.phi(), small);
        rec.equal(t.nontrivial, std::size_t{6}, "non-trivial points of E[7](F_101^2)");
        rec.equal(t.distorted, std::size_t{6}, "distorted points of E[7](F_101^2)");
        rec.equal(ex.psi.degree(), 17, "isogeny degree");
        const auto b2 = torsion_basis(ex.E2(), 7, rng);
        const auto s2 = oracle::scan(ex.phi2, enumerate_torsion(b2.first, b2.second, 7));
        rec.equal(s2.distorted, std::size_t{36}, "distorted points of E'[7]");
        rec.equal(weil_pairing(ex.P, ex.phi2(ex.P), 7).value, ex.golden_P, "e_7(P, phi'(P))");
        rec.check(weil_pairing(ex.P2, ex.phi2(ex.P2), 7).value.is_one(), "e_7(P', phi'(P')) = 1");
        const auto M = endo_matrix_mod_ell(ex.phi(), 7, basis);
        const auto M2 = M * M;
        rec.check(M2.is_scalar() && M2.m[0] == 4, "phi^2 = [4] on E[7]");
        rec.equal(eigenvalues_mod(M), (std::vector<std::uint64_t>{2, 5}), "eigenvalues");
    });
}

inline Result remark_f13()
{
    return run(5, "4-isogeny and twist on y^2 = x^3 + 11x + 4 over F_13", [](Recorder& rec) {
        const worked::Remark13 ex;
        const auto& F = ex.F;
        rec.check(ex.psi.codomain().same_as(Curve(c(F, 8), c(F, 9))), "codomain y^2 = x^3 + 8x + 9");
        rec.check(twist_codomain(ex.psi.codomain(), ex.gamma).same_as(ex.E), "gamma = (4x, -5y) lands on E");
        const Point p6(ex.E, c(F, 6), c(F, 0)), p9(ex.E, c(F, 9), c(F, 0)), p11(ex.E, c(F, 11), c(F, 0));
        rec.equal(ex.phi(p6), p11, "phi(6,0)");
        rec.equal(ex.phi(p9), p11, "phi(9,0)");
        rec.check(ex.phi(p11).is_infinity(), "phi(11,0) = O");
    });
}

struct Triple {
    std::string name;
    Endomorphism phi;
    std::uint64_t ell;
};

inline std::vector<Triple> classification_triples()
{
    const worked::Charles701 ch;
    const worked::Frobenius361 f;
    const worked::Remark13 rem;
    const worked::Conductor13 con;
    const worked::Transfer101 ex2;
    std::vector<Triple> t;
    for (std::uint64_t l : {2, 3, 5, 7, 11})
        t.push_back({"alpha/F_701", ch.alpha, l});
    for (std::uint64_t l : {2, 3, 7, 13})
        t.push_back({"pi/F_361", f.pi, l});
    t.push_back({"remark/F_13", rem.phi, 3});
    t.push_back({"9-isogeny/F_13^3", con.endo, 2});
    t.push_back({"table-map/F_101^6", ex2.phi(), 7});
    t.push_back({"table-map/F_101^6", ex2.phi(), 3});
    t.push_back({"ss_i/F_11", build_ss_i(11, 1).endo, 3});
    t.push_back({"ss_zeta/F_17", build_ss_zeta(17, 1).endo, 2});
    t.push_back({"[2]/F_701", Endomorphism::scalar(ch.E, 2), 5});
    t.push_back({"[3]/F_361", Endomorphism::scalar(f.E, 3), 2});
    return t;
}

inline Outcome outcome_from_lines(std::size_t lines, std::uint64_t ell)
{
    if (lines == ell + 1)
        return Outcome::ScalarAction;
    return lines == 0 ? Outcome::All : lines == 1 ? Outcome::AllButOne : Outcome::AllButTwo;
}

inline Result classification_cross_check()
{
    return run(6, "legendre and eigenline verdicts against exhaustive scans", [](Recorder& rec) {
        std::set<Outcome> seen;
        std::size_t n = 0;
        for (const auto& tr : classification_triples()) {
            const std::string tag = tr.name + " ell=" + std::to_string(tr.ell);
            const auto leg = classify_prime(tr.phi, tr.ell, ClassifyMode::Legendre);
            const auto eig = classify_prime(tr.phi, tr.ell, ClassifyMode::Eigenlines);
            rec.equal(outcome_name(leg.outcome), outcome_name(eig.outcome), tag + " legendre vs eigenlines");
            const auto frame = require_frame(tr.phi.curve(), tr.ell);
            const auto phiT = base_change(tr.phi, *frame.emb);
            const auto lines = oracle::invariant_lines(phiT, frame);
            rec.equal(outcome_name(outcome_from_lines(lines, tr.ell)), outcome_name(eig.outcome), tag + " subgroup scan");
            const auto s = oracle::scan(phiT, oracle::full_torsion(frame));
            rec.equal(s.distorted, oracle::expected_distorted(eig.outcome, tr.ell), tag + " point scan");
            seen.insert(eig.outcome);
            ++n;
        }
        rec.check(n >= 12, "at least 12 triples");
        rec.equal(seen.size(), std::size_t{4}, "verdicts covered");
    });
}

/// A curve with a distortion map and a certified basis of E[m].
struct PairingFamily {
    std::string name;
    Endomorphism phi;
    Int m;
    std::pair<Point, Point> basis;
};

inline PairingFamily family_transfer_701(Int m)
{
    const worked::Charles701 ex;
    const auto frame = require_frame(ex.E2(), 3);
    const auto phiT = base_change(ex.phi2, *frame.emb);
    Rng rng(15);
    return {"transfer/F_701", phiT, m, torsion_basis(frame.E, m, rng)};
}

inline PairingFamily family_ss(const std::string& name, const CatalogueBuild& b, Int m)
{
    Rng rng(21);
    return {name, b.endo, m, torsion_basis(b.curve, m, rng)};
}

inline Point random_torsion(const PairingFamily& f, Rng& rng)
{
    return scalar_mul(random_below(rng, f.m), f.basis.first) + scalar_mul(random_below(rng, f.m), f.basis.second);
}

inline Point random_of_order(const PairingFamily& f, const Int& n, Rng& rng)
{
    for (;;) {
        const Point R = scalar_mul(Int(f.m / n), random_torsion(f, rng));
        if (has_exact_order(R, n))
            return R;
    }
}

inline Result modified_pairing_properties(std::size_t trials = 100)
{
    return run(7, "modified Weil pairing properties", [trials](Recorder& rec) {
        const std::vector<PairingFamily> fams{
            family_transfer_701(15),
            family_ss("ss_i/F_83^2", build_ss_i(83, 1), 21),
            family_ss("ss_zeta/F_29^2", build_ss_zeta(29, 1), 10),
        };
        Rng rng(7);
        for (const auto& f : fams) {
            const Int& m = f.m;
            auto e = [&](const Point& P, const Point& Q, const Int& n) { return modified_weil_pairing(P, Q, n, f.phi, rng).value; };
            std::vector<Int> divs;
            for (auto d : divisors(to_u64(m)))
                divs.push_back(int_from_u64(d));
            for (std::size_t i = 0; i < trials; ++i) {
                const std::string tag = f.name + " #" + std::to_string(i);
                const Point P1 = random_torsion(f, rng), P2 = random_torsion(f, rng), Q = random_torsion(f, rng);
                rec.check(e(P1 + P2, Q, m) == e(P1, Q, m) * e(P2, Q, m), tag + " bilinear left");
                rec.check(e(Q, P1 + P2, m) == e(Q, P1, m) * e(Q, P2, m), tag + " bilinear right");
                const Point P = random_of_order(f, m, rng);
                rec.equal(root_of_unity_order(PairingValue{e(P, P, m), m}), m, tag + " distortion");
                Point R = random_torsion(f, rng);
                while (R.is_infinity())
                    R = random_torsion(f, rng);
                const bool right = !e(f.basis.first, R, m).is_one() || !e(f.basis.second, R, m).is_one();
                const bool left = !e(R, f.basis.first, m).is_one() || !e(R, f.basis.second, m).is_one();
                rec.check(right && left, tag + " non-degenerate");
                const Int d = divs[1 + random_below(rng, Int(divs.size() - 1)).get_ui()];
                const Int dp = m / d;
                const Point Qd = scalar_mul(dp, random_torsion(f, rng));
                const Point Pm = random_torsion(f, rng);
                rec.check(e(Pm, Qd, m) == e(scalar_mul(dp, Pm), Qd, d), tag + " compatible left");
                rec.check(e(Qd, Pm, m) == e(Qd, scalar_mul(dp, Pm), d), tag + " compatible right");
                const Int n = divs[1 + random_below(rng, Int(divs.size() - 1)).get_ui()];
                const Point Pn = random_of_order(f, n, rng);
                rec.equal(root_of_unity_order(PairingValue{e(Pn, Pn, m), m}), n, tag + " strong distortion");
            }
        }
        // Galois invariance: sigma fixes the field of definition of phi and moves E[m].
        struct GaloisCase {
            std::string name;
            Endomorphism phi;
            std::uint64_t ell;
        };
        const worked::Charles701 ch;
        const worked::Frobenius361 f361;
        for (const auto& gc : {GaloisCase{"transfer/F_701", ch.phi2, 3}, GaloisCase{"pi/F_361", f361.pi, 13}}) {
            const auto frame = require_frame(gc.phi.curve(), gc.ell);
            const auto phiT = base_change(gc.phi, *frame.emb);
            const std::uint64_t s = gc.phi.curve().field()->degree();
            const Int L = int_from_u64(gc.ell);
            bool moved = false;
            for (std::size_t i = 0; i < trials; ++i) {
                const Point P = scalar_mul(random_below(rng, L), frame.basis.first) + scalar_mul(random_below(rng, L), frame.basis.second);
                const Point Q = scalar_mul(random_below(rng, L), frame.basis.first) + scalar_mul(random_below(rng, L), frame.basis.second);
                const auto lhs = modified_weil_pairing(frobenius(P, s), frobenius(Q, s), L, phiT, rng).value;
                const auto rhs = modified_weil_pairing(P, Q, L, phiT, rng).value.frobenius(s);
                rec.check(lhs == rhs, gc.name + " #" + std::to_string(i) + " Galois invariant");
                moved = moved || !(frobenius(P, s) == P);
            }
            rec.check(moved, gc.name + " sigma acts non-trivially");
        }
        // Non-square-free m: a distorted point of order 2 pairs trivially with itself for m = 4.
        for (const auto& b : {build_ss_i(83, 1), build_ss_zeta(23, 1)}) {
            Rng r2(4);
            const auto basis = torsion_basis(b.curve, 4, r2);
            std::size_t distorted = 0;
            for (const auto& P : enumerate_torsion(scalar_mul(2, basis.first), scalar_mul(2, basis.second), 2)) {
                if (P.is_infinity() || !oracle::distorts(b.endo, P))
                    continue;
                ++distorted;
                for (std::size_t i = 0; i < trials; ++i)
                    rec.check(modified_weil_pairing(P, P, 4, b.endo, r2).value.is_one(), b.name + " e_{4,phi}(P,P) = 1");
            }
            rec.check(distorted > 0, b.name + " has a distorted point of order 2");
        }
    });
}

inline Result e22_over_f19_120()
{
    return run(8, "F_361 Frobenius distorts all of E[22] over F_19^120", [](Recorder& rec) {
        const worked::Frobenius361 ex;
        const auto emb = extension(ex.F, 60);
        rec.equal(emb->target()->degree(), std::size_t{120}, "extension degree");
        const Curve ET = base_change(ex.E, *emb);
        Rng rng(22);
        const auto basis = torsion_basis(ET, 22, rng);
        const auto piT = base_change(ex.pi, *emb);
        const auto s = oracle::scan(piT, enumerate_torsion(basis.first, basis.second, 22));
        rec.equal(s.nontrivial, std::size_t{483}, "non-trivial points of E[22]");
        rec.equal(s.distorted, std::size_t{483}, "distorted points of E[22]");
        // 60 is the least n with 22 | #E(F_361^n).
        const auto g = frobenius_trace(ex.E, false);
        for (std::uint64_t n = 1; n <= 60; ++n) {
            const Int q = pow(g.q, static_cast<unsigned long>(n));
            const Int N = q + 1 - trace_over_extension(g.t, g.q, n);
            rec.check((mod(N, Int(22)) == 0) == (n == 60), "22 | #E(F_361^" + std::to_string(n) + ") iff n = 60");
        }
    });
}

inline Result ddh_demo()
{
    return run(9, "DDH decided with the modified pairing", [](Recorder& rec) {
        const worked::Charles701 ex;
        Rng rng(9);
        for (int i = 0; i < 100; ++i) {
            const Int a = random_below(rng, Int(5)), b = random_below(rng, Int(5));
            rec.check(decide_ddh(generate_instance(ex.Q, 5, ex.phi2, DdhScalars{a, b, a * b})), "valid tuple accepted");
        }
        for (long a = 0; a < 5; ++a)
            for (long b = 0; b < 5; ++b)
                for (long cc = 0; cc < 5; ++cc)
                    if ((a * b - cc) % 5 != 0)
                        rec.check(!decide_ddh(generate_instance(ex.Q, 5, ex.phi2, DdhScalars{a, b, cc})),
                                  "invalid tuple rejected a=" + std::to_string(a) + " b=" + std::to_string(b) + " c=" + std::to_string(cc));
    });
}

} // namespace criteria
