#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "distortion/polynomial.hpp"
#include "distortion/torsion.hpp"

namespace distortion {

/// (x, y) -> (xn(x)/xd(x), y * yn(x)/yd(x)); stored reduced with monic denominators.
struct RationalMapPair {
    Poly xn, xd, yn, yd;
};

/// (x, y) -> (u x, v y) with v^2 = u^3: an isomorphism between short
/// Weierstrass models.
struct LinearTwist {
    FieldElement u, v;
    bool operator==(const LinearTwist& o) const { return u == o.u && v == o.v; }
};

/// Image of y^2 = x^3 + a x + b under (x, y) -> (u x, v y).
inline Curve twist_codomain(const Curve& E, const LinearTwist& tw)
{
    return image_curve(E, tw.u.square() * E.a(), tw.u.square() * tw.u * E.b(), common_subfield_degree({tw.u, tw.v}));
}

class Isogeny {
public:
    Isogeny() = default;
    Isogeny(Curve domain, Curve codomain, Int degree, Poly kernel_poly, RationalMapPair maps)
        : domain_(std::move(domain)), codomain_(std::move(codomain)), degree_(std::move(degree)),
          kernel_poly_(std::move(kernel_poly)), maps_(std::move(maps))
    {
    }

    const Curve& domain() const noexcept { return domain_; }
    const Curve& codomain() const noexcept { return codomain_; }
    const Int& degree() const noexcept { return degree_; }
    const Poly& kernel_poly() const noexcept { return kernel_poly_; }
    const RationalMapPair& maps() const noexcept { return maps_; }

    Point operator()(const Point& P) const
    {
        require(P.curve().same_as(domain_), Errc::OffCurve, "point is not on the isogeny's domain");
        if (P.is_infinity())
            return Point::infinity(codomain_);
        const auto xd = maps_.xd(P.x());
        if (xd.is_zero())
            return Point::infinity(codomain_);
        const auto yd = maps_.yd(P.x());
        require(!yd.is_zero(), Errc::BadInput, "y-map denominator vanishes off the kernel");
        return make_point_unchecked(codomain_, maps_.xn(P.x()) / xd, P.y() * maps_.yn(P.x()) / yd);
    }

    /// Same isogeny followed by (x, y) -> (u x, v y).
    Isogeny then_twist(const LinearTwist& tw) const
    {
        RationalMapPair m = maps_;
        m.xn = m.xn * tw.u;
        m.yn = m.yn * tw.v;
        return Isogeny(domain_, twist_codomain(codomain_, tw), degree_, kernel_poly_, m);
    }

private:
    Curve domain_, codomain_;
    Int degree_;
    Poly kernel_poly_;
    RationalMapPair maps_;
};

inline Point evaluate(const Isogeny& psi, const Point& P) { return psi(P); }

namespace detail {

/// n/d reduced with monic denominator.
inline std::pair<Poly, Poly> reduce_fraction(const Poly& n, const Poly& d)
{
    const Poly g = gcd(n, d);
    Poly nn = n / g, dd = d / g;
    const auto inv = dd.lead().inverse();
    return {nn * inv, dd * inv};
}

} // namespace detail

constexpr std::uint64_t kMaxKernelSize = 100000;

/// Vélu's formulas for the separable isogeny with kernel <K>, K in E(F).
inline Isogeny velu_from_kernel(const Curve& E, const Point& K)
{
    require(K.curve().same_as(E), Errc::OffCurve, "kernel generator is not on the curve");
    const Field& F = E.field();
    // Enumerate <K>.
    std::vector<Point> kernel;
    Point T = K;
    while (!T.is_infinity()) {
        kernel.push_back(T);
        require(kernel.size() < kMaxKernelSize, Errc::BadKernel, "kernel too large");
        T = add(T, K);
    }
    const Int deg = Int(static_cast<unsigned long>(kernel.size() + 1));
    require(mod(deg, int_from_u64(F->p())) != 0, Errc::BadKernel, "kernel order divisible by the characteristic");
    // S: 2-torsion points plus one representative of each {Q, -Q}.
    std::vector<Point> S;
    for (const auto& Q : kernel) {
        if (Q.y().is_zero()) {
            S.push_back(Q);
            continue;
        }
        if (std::none_of(S.begin(), S.end(), [&](const Point& R) { return R.x() == Q.x(); }))
            S.push_back(Q);
    }
    const auto zero = FieldElement::zero(F);
    FieldElement v = zero, w = zero;
    std::vector<FieldElement> vq, uq;
    for (const auto& Q : S) {
        const auto gx = Q.x().square().scaled(3) + E.a();
        const auto vQ = Q.y().is_zero() ? gx : gx.scaled(2);
        const auto uQ = Q.y().square().scaled(4);
        vq.push_back(vQ);
        uq.push_back(uQ);
        v += vQ;
        w += uQ + Q.x() * vQ;
    }
    const FieldElement A = E.a() - v.scaled(5), B = E.b() - w.scaled(7);

    std::vector<FieldElement> xs;
    for (const auto& Q : S)
        xs.push_back(Q.x());
    const Poly h = poly_from_roots(F, xs);
    const Poly h2 = h * h;
    const Poly x = Poly::x(F);
    // X = x + sum v_Q/(x - x_Q) + u_Q/(x - x_Q)^2, over the common denominator h^2.
    Poly num = x * h2;
    for (std::size_t i = 0; i < S.size(); ++i) {
        const Poly lin = Poly::linear_root(xs[i]);
        const Poly q1 = h2 / lin;
        const Poly q2 = q1 / lin;
        num = num + q1 * vq[i] + q2 * uq[i];
    }
    auto [xn, xd] = detail::reduce_fraction(num, h2);
    // Y = y * dX/dx.
    const Poly dn = xn.derivative() * xd - xn * xd.derivative();
    auto [yn, yd] = detail::reduce_fraction(dn, xd * xd);
    std::vector<FieldElement> all = h.coeffs();
    all.push_back(A);
    all.push_back(B);
    const Curve codomain = image_curve(E, A, B, common_subfield_degree(all));
    return Isogeny(E, codomain, deg, h, RationalMapPair{xn, xd, yn, yd});
}

/// Lifts an isogeny to an extension field.
inline Isogeny base_change(const Isogeny& psi, const FieldEmbedding& emb)
{
    if (emb.is_identity())
        return psi;
    const Field& T = emb.target();
    auto lift = [&](const Poly& f) { return f.map_coeffs(T, [&](const FieldElement& c) { return emb.lift(c); }); };
    const auto& m = psi.maps();
    return Isogeny(base_change(psi.domain(), emb), base_change(psi.codomain(), emb), psi.degree(), lift(psi.kernel_poly()),
                   RationalMapPair{lift(m.xn), lift(m.xd), lift(m.yn), lift(m.yd)});
}

/// Inverse of base_change: all coefficients must lie in the embedded subfield.
inline std::optional<Isogeny> descend(const Isogeny& psi, const Curve& domain, const FieldEmbedding& emb)
{
    if (emb.is_identity())
        return psi;
    const Field& S = emb.source();
    bool ok = true;
    auto down = [&](const FieldElement& c) {
        if (!ok || !emb.in_image(c)) {
            ok = false;
            return FieldElement::zero(S);
        }
        return emb.descend(c);
    };
    auto down_poly = [&](const Poly& f) { return f.map_coeffs(S, down); };
    const auto& m = psi.maps();
    RationalMapPair dm{down_poly(m.xn), down_poly(m.xd), down_poly(m.yn), down_poly(m.yd)};
    Poly kp = down_poly(psi.kernel_poly());
    const auto a = down(psi.codomain().a()), b = down(psi.codomain().b());
    if (!ok)
        return std::nullopt;
    std::vector<FieldElement> all = kp.coeffs();
    all.push_back(a);
    all.push_back(b);
    return Isogeny(domain, image_curve(domain, a, b, common_subfield_degree(all)), psi.degree(), kp, dm);
}

/// Vélu for a kernel generated by a point over an extension field; the
/// isogeny must be defined over E's field (the kernel Galois-stable as a set).
inline Isogeny velu_from_kernel(const Curve& E, const Point& K, const FieldEmbedding& emb)
{
    require(same_field(E.field(), emb.source()), Errc::MixedFields, "curve field does not match embedding source");
    const Curve ET = base_change(E, emb);
    require(K.curve().same_as(ET), Errc::OffCurve, "kernel generator is not on the base-changed curve");
    const auto psi = velu_from_kernel(ET, K);
    auto down = descend(psi, E, emb);
    require(down.has_value(), Errc::KernelNotRationalAsSet, "kernel is not Galois-stable over the curve's field");
    return *down;
}

/// All (u, v) with v^2 = u^3 taking E1 onto E2 over the working field, sorted.
inline std::vector<LinearTwist> find_isomorphisms(const Curve& E1, const Curve& E2)
{
    require(same_field(E1.field(), E2.field()), Errc::MixedFields, "curves over different fields");
    const Field& F = E1.field();
    std::vector<FieldElement> us;
    const bool a0 = E1.a().is_zero(), b0 = E1.b().is_zero();
    if (a0 != E2.a().is_zero() || b0 != E2.b().is_zero())
        return {};
    if (a0) {
        // u^3 = b2 / b1
        const auto c = E2.b() / E1.b();
        us = roots(Poly(F, {-c, FieldElement::zero(F), FieldElement::zero(F), FieldElement::one(F)}));
    } else if (b0) {
        const auto c = E2.a() / E1.a();
        us = roots(Poly(F, {-c, FieldElement::zero(F), FieldElement::one(F)}));
    } else {
        const auto u = (E2.b() * E1.a()) / (E1.b() * E2.a());
        if (u.square() == E2.a() / E1.a())
            us.push_back(u);
    }
    std::vector<LinearTwist> out;
    for (const auto& u : us) {
        const auto u3 = u.square() * u;
        const auto s = u3.sqrt();
        if (!s)
            continue;
        out.push_back({u, *s});
        out.push_back({u, -*s});
    }
    std::sort(out.begin(), out.end(), [](const LinearTwist& x, const LinearTwist& y) {
        return x.u != y.u ? x.u < y.u : x.v < y.v;
    });
    return out;
}

inline std::optional<LinearTwist> find_isomorphism(const Curve& E1, const Curve& E2)
{
    const auto all = find_isomorphisms(E1, E2);
    if (all.empty())
        return std::nullopt;
    const auto one = FieldElement::one(E1.field());
    for (const auto& t : all)
        if (t.u == one && t.v == one)
            return t;
    return all.front();
}

inline Point apply_twist(const LinearTwist& tw, const Point& P, const Curve& codomain)
{
    if (P.is_infinity())
        return Point::infinity(codomain);
    return make_point_unchecked(codomain, tw.u * P.x(), tw.v * P.y());
}

/// Smallest k (up to max_k) such that E[m] is rational over the degree-k
/// extension of E's working field.
inline std::optional<std::size_t> torsion_field_degree(const Curve& E, const Int& m, std::size_t max_k)
{
    const auto g = base_order_info(E, false);
    const Int mm = m * m;
    for (std::size_t k = 1; k <= max_k; ++k) {
        const Int q = pow(int_from_u64(E.field()->p()), static_cast<unsigned long>(E.field()->degree() * k));
        const Int Nk = q + 1 - trace_over_extension(g.t, g.q, E.extension_degree() * k);
        if (mod(Nk, mm) != 0)
            continue;
        if (mod(q - 1, m) != 0)
            continue;
        const auto emb = extension(E.field(), k);
        const Curve ET = base_change(E, *emb);
        Rng rng(k);
        try {
            torsion_basis(ET, m, rng);
            return k;
        } catch (const Error& e) {
            if (e.code() != Errc::TorsionNotRational)
                throw;
        }
    }
    return std::nullopt;
}

constexpr std::size_t kMaxDualExtension = 48;

/// Dual isogeny: Vélu on psi(E1[d]) followed by the isomorphism that makes
/// dual o psi = [d] on sampled points.
inline Isogeny dual(const Isogeny& psi)
{
    const Curve& E1 = psi.domain();
    const Curve& E2 = psi.codomain();
    const Int& d = psi.degree();
    require(mod(d, int_from_u64(E1.field()->p())) != 0, Errc::InseparableDegree, "isogeny degree divisible by p");
    const auto k = torsion_field_degree(E1, d, kMaxDualExtension);
    require(k.has_value(), Errc::TorsionNotRational, "E[deg] not rational over any small extension");
    const auto emb = extension(E1.field(), *k);
    const Curve E1T = base_change(E1, *emb);
    const Isogeny psiT = base_change(psi, *emb);
    Rng rng(17);
    const auto [P, Q] = torsion_basis(E1T, d, rng);
    const Point A = psiT(P), B = psiT(Q);
    // <A, B> is cyclic of order d; find a generator.
    const auto df = factor(d);
    auto has_order_d = [&](const Point& G) {
        if (!scalar_mul(d, G).is_infinity())
            return false;
        for (const auto& [ell, e] : df)
            if (scalar_mul(Int(d / ell), G).is_infinity())
                return false;
        return true;
    };
    std::optional<Point> G;
    Point cand = A;
    for (Int i = 0; i < d && !G; ++i) {
        if (has_order_d(cand))
            G = cand;
        cand = add(cand, B);
    }
    require(G.has_value(), Errc::BadKernel, "image of E[d] is not cyclic of order d");
    const auto rhoT = velu_from_kernel(base_change(E2, *emb), *G);
    auto rho = descend(rhoT, E2, *emb);
    require(rho.has_value(), Errc::KernelNotRationalAsSet, "dual kernel does not descend");
    // Pick the isomorphism rho(E2) -> E1 that makes rho o psi = [d].
    std::vector<Point> samples;
    for (int i = 0; i < 6; ++i)
        samples.push_back(random_point(E1, rng));
    for (const auto& tw : find_isomorphisms(rho->codomain(), E1)) {
        const auto cand_dual = rho->then_twist(tw);
        bool ok = true;
        for (const auto& S : samples) {
            const Point img = cand_dual(psi(S));
            const Point ref = scalar_mul(d, S);
            if (!(img.is_infinity() ? ref.is_infinity() : (!ref.is_infinity() && img.x() == ref.x() && img.y() == ref.y()))) {
                ok = false;
                break;
            }
        }
        if (ok)
            return Isogeny(E2, E1, d, cand_dual.kernel_poly(), cand_dual.maps());
    }
    fail(Errc::BadKernel, "no isomorphism closes the dual isogeny");
}

} // namespace distortion
