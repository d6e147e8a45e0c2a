#pragma once

#include <cstdlib>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "distortion/embedding.hpp"
#include "distortion/field.hpp"

namespace distortion {

/// Upper bound on q for naive point counting; overridable through the
/// DISTORTION_COUNT_BOUND environment variable.
inline Int naive_count_bound()
{
    if (const char* env = std::getenv("DISTORTION_COUNT_BOUND"))
        return parse_int(env);
    return Int(1000000);
}

/// Short Weierstrass curve y^2 = x^3 + a x + b over the working field F.
/// `base_degree` d marks the subfield F_{p^d} the curve is defined over; group
/// orders over F are derived from #E(F_{p^d}).
class Curve {
public:
    Curve() = default;

    Curve(FieldElement a, FieldElement b, std::size_t base_degree = 0, std::optional<Int> base_order = std::nullopt)
    {
        require(a.valid() && b.valid(), Errc::BadInput, "curve coefficients missing");
        require(same_field(a.field(), b.field()), Errc::MixedFields, "curve coefficients from different fields");
        const Field& F = a.field();
        require(F->p() > 3, Errc::BadInput, "curves need characteristic p > 3");
        const auto disc = a.pow(std::uint64_t(3)).scaled(4) + b.square().scaled(27);
        require(!disc.is_zero(), Errc::SingularCurve, "discriminant 4a^3 + 27b^2 vanishes");
        const std::size_t n = F->degree();
        if (base_degree == 0) {
            for (std::size_t d = 1; d <= n; ++d)
                if (n % d == 0 && a.in_subfield(d) && b.in_subfield(d)) {
                    base_degree = d;
                    break;
                }
        }
        require(n % base_degree == 0, Errc::BadInput, "base degree must divide the field degree");
        require(a.in_subfield(base_degree) && b.in_subfield(base_degree), Errc::BadInput,
                "curve coefficients are not in the stated base field");
        d_ = std::make_shared<Data>();
        d_->a = std::move(a);
        d_->b = std::move(b);
        d_->base_degree = base_degree;
        if (base_order)
            d_->base_order = *base_order;
    }

    const Field& field() const { return d_->a.field(); }
    const FieldElement& a() const { return d_->a; }
    const FieldElement& b() const { return d_->b; }
    std::size_t base_degree() const { return d_->base_degree; }
    bool valid() const noexcept { return d_ != nullptr; }

    /// q of the base field F_{p^d}.
    Int base_q() const { return pow(int_from_u64(field()->p()), static_cast<unsigned long>(base_degree())); }

    /// Field extension degree of the working field over the base field.
    std::size_t extension_degree() const { return field()->degree() / base_degree(); }

    bool same_as(const Curve& o) const
    {
        return d_ == o.d_ || (same_field(field(), o.field()) && a() == o.a() && b() == o.b());
    }

    bool contains(const FieldElement& x, const FieldElement& y) const { return y.square() == rhs(x); }

    FieldElement rhs(const FieldElement& x) const { return (x.square() + a()) * x + b(); }

    FieldElement j_invariant() const
    {
        const auto a3 = a().pow(std::uint64_t(3)).scaled(4);
        return (a3 * FieldElement::from_int(field(), 1728)) / (a3 + b().square().scaled(27));
    }

    /// Curve with coefficients raised to p^e.
    Curve conjugate(std::uint64_t e) const
    {
        if (e % base_degree() == 0)
            return *this;
        return Curve(a().frobenius(e), b().frobenius(e), base_degree(), d_->base_order);
    }

    /// #E(F_{p^d}) for the base field; counted naively on first use unless supplied.
    Int base_order() const;

    std::optional<Int> known_base_order() const
    {
        std::lock_guard<std::mutex> lock(d_->mu);
        return d_->base_order;
    }

    std::string to_string() const { return "y^2 = x^3 + (" + a().to_string() + ")*x + (" + b().to_string() + ")"; }

private:
    struct Data {
        FieldElement a, b;
        std::size_t base_degree = 1;
        std::mutex mu;
        std::optional<Int> base_order;
    };
    std::shared_ptr<Data> d_;
};

class Point {
public:
    Point() = default;

    static Point infinity(const Curve& E)
    {
        Point P;
        P.E_ = E;
        P.inf_ = true;
        return P;
    }

    Point(const Curve& E, FieldElement x, FieldElement y) : E_(E), inf_(false), x_(std::move(x)), y_(std::move(y))
    {
        require(same_field(x_.field(), E.field()) && same_field(y_.field(), E.field()), Errc::MixedFields,
                "point coordinates not in the curve's field");
        require(E.contains(x_, y_), Errc::OffCurve, "point (" + x_.to_string() + ", " + y_.to_string() + ") is not on the curve");
    }

    const Curve& curve() const noexcept { return E_; }
    bool is_infinity() const noexcept { return inf_; }
    const FieldElement& x() const { return x_; }
    const FieldElement& y() const { return y_; }

    bool operator==(const Point& o) const
    {
        if (inf_ || o.inf_)
            return inf_ == o.inf_;
        return x_ == o.x_ && y_ == o.y_;
    }

    std::string to_string() const
    {
        if (inf_)
            return "O";
        return "(" + x_.to_string() + ", " + y_.to_string() + ")";
    }

private:
    friend Point make_point_unchecked(const Curve&, FieldElement, FieldElement);
    Curve E_;
    bool inf_ = true;
    FieldElement x_, y_;
};

inline Point make_point_unchecked(const Curve& E, FieldElement x, FieldElement y)
{
    Point P;
    P.E_ = E;
    P.inf_ = false;
    P.x_ = std::move(x);
    P.y_ = std::move(y);
    return P;
}

inline void check_same_curve(const Point& P, const Point& Q)
{
    require(P.curve().same_as(Q.curve()), Errc::MixedCurves, "points lie on different curves");
}

inline Point neg(const Point& P)
{
    if (P.is_infinity())
        return P;
    return make_point_unchecked(P.curve(), P.x(), -P.y());
}

inline Point add(const Point& P, const Point& Q)
{
    check_same_curve(P, Q);
    if (P.is_infinity())
        return Q;
    if (Q.is_infinity())
        return P;
    FieldElement lambda;
    if (P.x() == Q.x()) {
        if (P.y() != Q.y() || P.y().is_zero())
            return Point::infinity(P.curve());
        lambda = (P.x().square().scaled(3) + P.curve().a()) / P.y().scaled(2);
    } else {
        lambda = (Q.y() - P.y()) / (Q.x() - P.x());
    }
    FieldElement x3 = lambda.square() - P.x() - Q.x();
    FieldElement y3 = lambda * (P.x() - x3) - P.y();
    return make_point_unchecked(P.curve(), std::move(x3), std::move(y3));
}

inline Point sub(const Point& P, const Point& Q) { return add(P, neg(Q)); }

inline Point operator+(const Point& P, const Point& Q) { return add(P, Q); }
inline Point operator-(const Point& P, const Point& Q) { return sub(P, Q); }
inline Point operator-(const Point& P) { return neg(P); }

inline Point scalar_mul(const Int& k, const Point& P)
{
    if (k < 0)
        return scalar_mul(Int(-k), neg(P));
    Point R = Point::infinity(P.curve());
    if (P.is_infinity() || k == 0)
        return R;
    const auto bits = mpz_sizeinbase(k.get_mpz_t(), 2);
    for (std::size_t i = bits; i-- > 0;) {
        R = add(R, R);
        if (mpz_tstbit(k.get_mpz_t(), i))
            R = add(R, P);
    }
    return R;
}

inline Point scalar_mul(long long k, const Point& P) { return scalar_mul(Int(static_cast<long>(k)), P); }
inline Point operator*(const Int& k, const Point& P) { return scalar_mul(k, P); }
inline Point operator*(long long k, const Point& P) { return scalar_mul(k, P); }

/// (x, y) -> (x^(p^e), y^(p^e)), landing on the conjugate curve.
inline Point frobenius(const Point& P, std::uint64_t e)
{
    const Curve C = P.curve().conjugate(e);
    if (P.is_infinity())
        return Point::infinity(C);
    return make_point_unchecked(C, P.x().frobenius(e), P.y().frobenius(e));
}

/// Naive #E(F_{p^d}) with d the base degree: iterate x over the base field.
inline Int count_points_naive(const Curve& E)
{
    const Int q = E.base_q();
    require(q <= naive_count_bound(), Errc::FieldTooLarge,
            "naive point count over a field of size " + q.get_str() + " exceeds the configured bound");
    const Field& F = E.field();
    const auto p = F->p();
    Int count = 1;
    if (E.base_degree() == 1) {
        const auto a = E.a().coeffs()[0], b = E.b().coeffs()[0];
        const std::uint64_t half = (p - 1) / 2;
        std::uint64_t c = 1;
        for (std::uint64_t x = 0; x < p; ++x) {
            const std::uint64_t r = fp::addmod(fp::mulmod(fp::addmod(fp::mulmod(x, x, p), a, p), x, p), b, p);
            if (r == 0)
                c += 1;
            else if (fp::powmod(r, half, p) == 1)
                c += 2;
        }
        return int_from_u64(c);
    }
    const Int half = (q - 1) / 2;
    std::uint64_t c = 1;
    for_each_subfield_element(F, E.base_degree(), [&](const FieldElement& x) {
        const auto r = E.rhs(x);
        if (r.is_zero())
            c += 1;
        else if (r.pow(half).is_one())
            c += 2;
    });
    count = int_from_u64(c);
    return count;
}

inline Int Curve::base_order() const
{
    {
        std::lock_guard<std::mutex> lock(d_->mu);
        if (d_->base_order)
            return *d_->base_order;
    }
    const Int N = count_points_naive(*this);
    std::lock_guard<std::mutex> lock(d_->mu);
    d_->base_order = N;
    return N;
}

/// t_n from t_1 via t_k = t t_{k-1} - q t_{k-2}, t_0 = 2.
inline Int trace_over_extension(const Int& t1, const Int& q, std::uint64_t n)
{
    if (n == 0)
        return Int(2);
    Int prev = 2, cur = t1;
    for (std::uint64_t k = 1; k < n; ++k) {
        Int next = t1 * cur - q * prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

struct GroupOrderInfo {
    Int q;
    Int t;
    Int N;
    std::optional<Factorization> factors;
};

/// Trace and order over the base field F_{p^d}.
inline GroupOrderInfo base_order_info(const Curve& E, bool factorize = true)
{
    GroupOrderInfo g;
    g.q = E.base_q();
    g.N = E.base_order();
    g.t = g.q + 1 - g.N;
    require(g.t * g.t <= 4 * g.q, Errc::BadInput, "group order violates the Hasse bound");
    if (factorize)
        g.factors = factor(g.N);
    return g;
}

/// Trace and order over the working field; factorization optional because
/// orders over large extensions need not factor quickly.
inline GroupOrderInfo frobenius_trace(const Curve& E, bool factorize = true)
{
    const auto base = base_order_info(E, false);
    GroupOrderInfo g;
    g.q = E.field()->order();
    g.t = trace_over_extension(base.t, base.q, E.extension_degree());
    g.N = g.q + 1 - g.t;
    if (factorize)
        g.factors = factor(g.N);
    return g;
}

inline Int group_order(const Curve& E) { return frobenius_trace(E, false).N; }

/// #E(F_{p^d}) for a multiple d of the base degree.
inline Int order_over_subfield(const Curve& E, std::size_t d)
{
    require(d % E.base_degree() == 0, Errc::BadInput, "subfield degree must be a multiple of the base degree");
    const auto g = base_order_info(E, false);
    const Int q = pow(int_from_u64(E.field()->p()), static_cast<unsigned long>(d));
    return q + 1 - trace_over_extension(g.t, g.q, d / E.base_degree());
}

/// Builds the curve y^2 = x^3 + a x + b that is the target of a map from E
/// whose coefficients all lie in the subfield of degree `map_degree`. When the
/// new curve's base field contains that subfield and E's base field, its
/// order is inherited instead of recounted.
inline Curve image_curve(const Curve& E, FieldElement a, FieldElement b, std::size_t map_degree)
{
    Curve C(std::move(a), std::move(b));
    const std::size_t d = C.base_degree();
    if (d % map_degree == 0 && d % E.base_degree() == 0 && (E.known_base_order() || E.base_q() <= naive_count_bound()))
        return Curve(C.a(), C.b(), d, order_over_subfield(E, d));
    return C;
}

/// Smallest d dividing the field degree with every element in F_{p^d}.
inline std::size_t common_subfield_degree(const std::vector<FieldElement>& xs)
{
    require(!xs.empty(), Errc::BadInput, "no elements");
    const std::size_t n = xs.front().field()->degree();
    for (std::size_t d = 1; d <= n; ++d) {
        if (n % d)
            continue;
        if (std::all_of(xs.begin(), xs.end(), [&](const FieldElement& x) { return x.in_subfield(d); }))
            return d;
    }
    return n;
}

inline bool is_supersingular(const Curve& E)
{
    const auto g = base_order_info(E, false);
    return mod(g.t, int_from_u64(E.field()->p())) == 0;
}

/// Random affine point over the working field.
inline Point random_point(const Curve& E, Rng& rng)
{
    for (;;) {
        const auto x = FieldElement::random(E.field(), rng);
        const auto s = E.rhs(x).sqrt();
        if (!s)
            continue;
        const bool flip = rng() & 1;
        return make_point_unchecked(E, x, flip ? -*s : *s);
    }
}

/// Random affine point with coordinates in the subfield F_{p^d}.
inline Point random_point_over_subfield(const Curve& E, std::size_t d, Rng& rng)
{
    const auto basis = subfield_basis(E.field(), d);
    const auto p = E.field()->p();
    for (;;) {
        FieldElement x = FieldElement::zero(E.field());
        for (const auto& b : basis)
            x += b.scaled(rng() % p);
        const auto r = E.rhs(x);
        const auto s = r.sqrt();
        if (!s)
            continue;
        // The square root of a subfield square lies in the subfield iff r is a
        // square there.
        if (!s->in_subfield(d))
            continue;
        const bool flip = rng() & 1;
        return make_point_unchecked(E, x, flip ? -*s : *s);
    }
}

/// Exact order of P given a factored multiple N of it.
inline Int point_order(const Point& P, const Int& N, const Factorization& f)
{
    require(scalar_mul(N, P).is_infinity(), Errc::OrderNotDividing, "N*P is not the identity");
    Int ord = N;
    for (const auto& [ell, e] : f) {
        for (unsigned i = 0; i < e; ++i) {
            if (!scalar_mul(Int(ord / ell), P).is_infinity())
                break;
            ord /= ell;
        }
    }
    return ord;
}

inline Int point_order(const Point& P, const Int& N) { return point_order(P, N, factor(N)); }

/// Order of P using the curve's group order over the working field.
inline Int point_order(const Point& P)
{
    const auto g = frobenius_trace(P.curve());
    return point_order(P, g.N, *g.factors);
}

/// All points of E(F_{p^d}) for the base field (d = base degree); small fields only.
inline std::vector<Point> enumerate_base_points(const Curve& E)
{
    require(E.base_q() <= naive_count_bound(), Errc::FieldTooLarge, "field too large to enumerate");
    std::vector<Point> out{Point::infinity(E)};
    const std::size_t d = E.base_degree();
    for_each_subfield_element(E.field(), d, [&](const FieldElement& x) {
        const auto s = E.rhs(x).sqrt();
        if (!s || !s->in_subfield(d))
            return;
        out.push_back(make_point_unchecked(E, x, *s));
        if (!s->is_zero())
            out.push_back(make_point_unchecked(E, x, -*s));
    });
    return out;
}

/// Base change of E to the target field of `emb`, preserving the base degree
/// so orders over the new field follow from the same base count.
inline Curve base_change(const Curve& E, const FieldEmbedding& emb)
{
    require(same_field(E.field(), emb.source()), Errc::MixedFields, "curve field does not match embedding source");
    if (emb.is_identity())
        return E;
    return Curve(emb.lift(E.a()), emb.lift(E.b()), E.base_degree(), E.known_base_order());
}

inline Point base_change(const Point& P, const Curve& target, const FieldEmbedding& emb)
{
    if (P.is_infinity())
        return Point::infinity(target);
    return make_point_unchecked(target, emb.lift(P.x()), emb.lift(P.y()));
}

/// Descends a point from the embedding's target field to its source.
inline Point descend(const Point& P, const Curve& source_curve, const FieldEmbedding& emb)
{
    if (P.is_infinity())
        return Point::infinity(source_curve);
    return make_point_unchecked(source_curve, emb.descend(P.x()), emb.descend(P.y()));
}

} // namespace distortion
