#pragma once

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "distortion/isogeny.hpp"

namespace distortion {

/// Integer for prime-field elements, else the ascending coefficient list.
inline std::string element_literal(const FieldElement& a)
{
    if (a.is_prime_field_element())
        return a.is_zero() ? "0" : std::to_string(a.coeffs()[0]);
    std::string s = "[";
    for (std::size_t i = 0; i < a.field()->degree(); ++i)
        s += (i ? "," : "") + std::to_string(i < a.coeffs().size() ? a.coeffs()[i] : 0);
    return s + "]";
}

enum class AtomKind { Isogeny, Frobenius, Scalar, Twist, Dual };

/// One map in a composition chain. Isogeny and Dual atoms carry explicit
/// rational maps (the dual is computed once, when the atom is built).
struct Atom {
    AtomKind kind = AtomKind::Scalar;
    Curve domain, codomain;
    std::shared_ptr<const Isogeny> iso;
    std::string name;
    std::uint64_t e = 0;
    Int k = 1;
    LinearTwist tw;

    Int degree() const
    {
        switch (kind) {
        case AtomKind::Isogeny:
        case AtomKind::Dual: return iso->degree();
        case AtomKind::Frobenius: return pow(int_from_u64(domain.field()->p()), static_cast<unsigned long>(e));
        case AtomKind::Scalar: return k * k;
        case AtomKind::Twist: return 1;
        }
        return 1;
    }

    Point apply(const Point& P) const
    {
        switch (kind) {
        case AtomKind::Isogeny:
        case AtomKind::Dual: return (*iso)(P);
        case AtomKind::Frobenius:
            if (P.is_infinity())
                return Point::infinity(codomain);
            return make_point_unchecked(codomain, P.x().frobenius(e), P.y().frobenius(e));
        case AtomKind::Scalar: return scalar_mul(k, P);
        case AtomKind::Twist: return apply_twist(tw, P, codomain);
        }
        return P;
    }

    std::string to_string() const
    {
        switch (kind) {
        case AtomKind::Isogeny: return "isog(" + name + ")";
        case AtomKind::Dual: return "dual(" + name + ")";
        case AtomKind::Frobenius: return "frob(" + std::to_string(e) + ")";
        case AtomKind::Scalar: return "scalar(" + k.get_str() + ")";
        case AtomKind::Twist: return "twist(u=" + element_literal(tw.u) + ", v=" + element_literal(tw.v) + ")";
        }
        return "?";
    }
};

inline Atom isogeny_atom(const Isogeny& psi, std::string name = "psi")
{
    Atom a;
    a.kind = AtomKind::Isogeny;
    a.domain = psi.domain();
    a.codomain = psi.codomain();
    a.iso = std::make_shared<const Isogeny>(psi);
    a.name = std::move(name);
    return a;
}

inline Atom dual_atom(const Isogeny& psi, std::string name = "psi")
{
    Atom a;
    a.kind = AtomKind::Dual;
    a.iso = std::make_shared<const Isogeny>(dual(psi));
    a.domain = a.iso->domain();
    a.codomain = a.iso->codomain();
    a.name = std::move(name);
    return a;
}

inline Atom frobenius_atom(const Curve& E, std::uint64_t e)
{
    Atom a;
    a.kind = AtomKind::Frobenius;
    a.domain = E;
    a.codomain = E.conjugate(e);
    a.e = e;
    return a;
}

inline Atom scalar_atom(const Curve& E, const Int& k)
{
    Atom a;
    a.kind = AtomKind::Scalar;
    a.domain = a.codomain = E;
    a.k = k;
    return a;
}

inline Atom twist_atom(const Curve& E, const LinearTwist& tw)
{
    require(!tw.u.is_zero() && tw.v.square() == tw.u.square() * tw.u, Errc::BadInput, "twist needs v^2 = u^3 with u != 0");
    Atom a;
    a.kind = AtomKind::Twist;
    a.domain = E;
    a.codomain = twist_codomain(E, tw);
    a.tw = tw;
    return a;
}

inline Atom base_change(const Atom& a, const FieldEmbedding& emb)
{
    if (emb.is_identity())
        return a;
    Atom b = a;
    b.domain = base_change(a.domain, emb);
    b.codomain = base_change(a.codomain, emb);
    if (a.iso)
        b.iso = std::make_shared<const Isogeny>(base_change(*a.iso, emb));
    if (a.kind == AtomKind::Twist)
        b.tw = LinearTwist{emb.lift(a.tw.u), emb.lift(a.tw.v)};
    return b;
}

using Chain = std::vector<Atom>; // application order: front() acts first

struct Term {
    Int coeff;
    Chain chain;
};

struct TraceDegree {
    Int t, d, D;
    std::vector<std::uint64_t> primes; // moduli used in the reconstruction
};

/// Formal integer combination of composition chains, all starting and ending
/// on the same curve. Never expanded into a single rational map.
class Endomorphism {
public:
    Endomorphism() = default;

    Endomorphism(Curve E, std::vector<Term> terms) : E_(std::move(E)), terms_(std::move(terms)), cache_(std::make_shared<Cache>())
    {
        for (const auto& t : terms_) {
            const Curve* cur = &E_;
            for (const auto& a : t.chain) {
                require(a.domain.same_as(*cur), Errc::CurveMismatch, "chain atom " + a.to_string() + " does not start on the previous codomain");
                cur = &a.codomain;
            }
            require(cur->same_as(E_), Errc::CurveMismatch, "chain does not end on its starting curve");
        }
    }

    static Endomorphism from_chain(const Curve& E, Chain chain, const Int& coeff = 1)
    {
        return Endomorphism(E, {Term{coeff, std::move(chain)}});
    }

    static Endomorphism scalar(const Curve& E, const Int& k) { return from_chain(E, {}, k); }

    /// x -> x^(p^e); an endomorphism only when E's coefficients are fixed.
    static Endomorphism frobenius(const Curve& E, std::uint64_t e)
    {
        require(E.conjugate(e).same_as(E), Errc::CurveMismatch, "Frobenius power does not fix the curve");
        return from_chain(E, {frobenius_atom(E, e)});
    }

    static Endomorphism twist(const Curve& E, const LinearTwist& tw) { return from_chain(E, {twist_atom(E, tw)}); }

    const Curve& curve() const noexcept { return E_; }
    const std::vector<Term>& terms() const noexcept { return terms_; }

    Point operator()(const Point& P) const
    {
        require(P.curve().same_as(E_), Errc::OffCurve, "point is not on the endomorphism's curve");
        Point acc = Point::infinity(E_);
        for (const auto& t : terms_) {
            Point R = P;
            for (const auto& a : t.chain)
                R = a.apply(R);
            R = make_point_or_inf(R);
            acc = add(acc, scalar_mul(t.coeff, R));
        }
        return acc;
    }

    Endomorphism operator+(const Endomorphism& o) const
    {
        require(E_.same_as(o.E_), Errc::CurveMismatch, "sum of endomorphisms of different curves");
        auto terms = terms_;
        terms.insert(terms.end(), o.terms_.begin(), o.terms_.end());
        return Endomorphism(E_, std::move(terms));
    }

    Endomorphism operator-(const Endomorphism& o) const { return *this + o.scaled(-1); }

    Endomorphism scaled(const Int& k) const
    {
        auto terms = terms_;
        for (auto& t : terms)
            t.coeff *= k;
        return Endomorphism(E_, std::move(terms));
    }

    /// this o rho (rho applied first).
    Endomorphism after(const Endomorphism& rho) const
    {
        require(E_.same_as(rho.E_), Errc::CurveMismatch, "composition of endomorphisms of different curves");
        std::vector<Term> terms;
        for (const auto& a : terms_)
            for (const auto& b : rho.terms_) {
                Chain c = b.chain;
                c.insert(c.end(), a.chain.begin(), a.chain.end());
                terms.push_back(Term{a.coeff * b.coeff, std::move(c)});
            }
        return Endomorphism(E_, std::move(terms));
    }

    /// Degree bound (sum_i |c_i| sqrt(deg chain_i))^2, exact for one term.
    Int degree_bound() const
    {
        if (terms_.size() == 1)
            return terms_[0].coeff * terms_[0].coeff * chain_degree(terms_[0].chain);
        Int s = 0;
        for (const auto& t : terms_)
            s += abs(t.coeff) * isqrt_ceil(chain_degree(t.chain));
        return s * s;
    }

    bool degree_is_exact() const { return terms_.size() == 1; }

    static Int chain_degree(const Chain& c)
    {
        Int d = 1;
        for (const auto& a : c)
            d *= a.degree();
        return d;
    }

    std::optional<TraceDegree> cached_trace_degree() const
    {
        std::lock_guard<std::mutex> lock(cache_->mu);
        return cache_->td;
    }

    void store_trace_degree(const TraceDegree& td) const
    {
        std::lock_guard<std::mutex> lock(cache_->mu);
        if (!cache_->td)
            cache_->td = td;
    }

    std::string to_string() const
    {
        std::string s;
        for (const auto& t : terms_) {
            const Int c = abs(t.coeff);
            if (!s.empty())
                s += sgn(t.coeff) < 0 ? " - " : " + ";
            else if (sgn(t.coeff) < 0)
                s += "-";
            if (c != 1)
                s += c.get_str() + "*";
            if (t.chain.empty())
                s += "scalar(1)";
            for (std::size_t i = 0; i < t.chain.size(); ++i)
                s += (i ? "; " : "") + t.chain[i].to_string();
        }
        return s;
    }

private:
    // Chains end on a curve equal to E_ but possibly a distinct object.
    Point make_point_or_inf(const Point& R) const
    {
        if (R.is_infinity())
            return Point::infinity(E_);
        return make_point_unchecked(E_, R.x(), R.y());
    }

    struct Cache {
        std::mutex mu;
        std::optional<TraceDegree> td;
    };

    Curve E_;
    std::vector<Term> terms_;
    std::shared_ptr<Cache> cache_;
};

inline Point evaluate(const Endomorphism& phi, const Point& P) { return phi(P); }

inline Endomorphism base_change(const Endomorphism& phi, const FieldEmbedding& emb)
{
    if (emb.is_identity())
        return phi;
    std::vector<Term> terms;
    for (const auto& t : phi.terms()) {
        Chain c;
        for (const auto& a : t.chain)
            c.push_back(base_change(a, emb));
        terms.push_back(Term{t.coeff, std::move(c)});
    }
    return Endomorphism(base_change(phi.curve(), emb), std::move(terms));
}

/// psi o phi o dual(psi) on the codomain of psi, kept as a chain.
inline Endomorphism transfer(const Isogeny& psi, const Endomorphism& phi, const std::string& name = "psi")
{
    require(phi.curve().same_as(psi.domain()), Errc::CurveMismatch, "endomorphism is not on the isogeny's domain");
    const Atom back = dual_atom(psi, name);
    const Atom fwd = isogeny_atom(psi, name);
    std::vector<Term> terms;
    for (const auto& t : phi.terms()) {
        Chain c{back};
        c.insert(c.end(), t.chain.begin(), t.chain.end());
        c.push_back(fwd);
        terms.push_back(Term{t.coeff, std::move(c)});
    }
    return Endomorphism(psi.codomain(), std::move(terms));
}

/// 2x2 matrix over Z/ell: column j holds the coordinates of phi(basis_j).
struct Mat2 {
    std::uint64_t ell;
    std::array<std::uint64_t, 4> m; // row-major {m00, m01, m10, m11}

    std::uint64_t trace() const { return (m[0] + m[3]) % ell; }
    std::uint64_t det() const { return ((m[0] * m[3]) % ell + ell * ell - (m[1] * m[2]) % ell) % ell; }
    bool is_scalar() const { return m[1] == 0 && m[2] == 0 && m[0] == m[3]; }
    bool is_zero() const { return m[0] == 0 && m[1] == 0 && m[2] == 0 && m[3] == 0; }

    Mat2 operator*(const Mat2& o) const
    {
        Mat2 r{ell, {}};
        r.m[0] = (m[0] * o.m[0] + m[1] * o.m[2]) % ell;
        r.m[1] = (m[0] * o.m[1] + m[1] * o.m[3]) % ell;
        r.m[2] = (m[2] * o.m[0] + m[3] * o.m[2]) % ell;
        r.m[3] = (m[2] * o.m[1] + m[3] * o.m[3]) % ell;
        return r;
    }

    Mat2 operator+(const Mat2& o) const
    {
        Mat2 r{ell, {}};
        for (int i = 0; i < 4; ++i)
            r.m[i] = (m[i] + o.m[i]) % ell;
        return r;
    }

    bool operator==(const Mat2& o) const { return ell == o.ell && m == o.m; }
};

/// Coordinates of points of E[ell] in a basis, by table lookup.
class TorsionCoordinates {
public:
    TorsionCoordinates(const Point& P, const Point& Q, std::uint64_t ell) : ell_(ell)
    {
        const auto pts = enumerate_torsion(P, Q, ell);
        for (std::uint64_t i = 0; i < ell; ++i)
            for (std::uint64_t j = 0; j < ell; ++j)
                table_.emplace(key(pts[i * ell + j]), std::make_pair(i, j));
        require(table_.size() == ell * ell, Errc::BasisInvalid, "basis points do not generate E[ell]");
    }

    std::optional<std::pair<std::uint64_t, std::uint64_t>> find(const Point& R) const
    {
        const auto it = table_.find(key(R));
        if (it == table_.end())
            return std::nullopt;
        return it->second;
    }

private:
    static std::vector<std::uint64_t> key(const Point& R)
    {
        if (R.is_infinity())
            return {};
        std::vector<std::uint64_t> k = R.x().coeffs();
        k.insert(k.end(), R.y().coeffs().begin(), R.y().coeffs().end());
        return k;
    }

    std::uint64_t ell_;
    std::map<std::vector<std::uint64_t>, std::pair<std::uint64_t, std::uint64_t>> table_;
};

constexpr std::uint64_t kMaxMatrixPrime = 97;

inline Mat2 endo_matrix_mod_ell(const Endomorphism& phi, std::uint64_t ell, const std::pair<Point, Point>& basis)
{
    require(ell <= kMaxMatrixPrime && is_prime(ell), Errc::BadInput, "matrix prime must be a prime <= 97");
    const auto& [P, Q] = basis;
    const Int L = int_from_u64(ell);
    require(!P.is_infinity() && !Q.is_infinity() && scalar_mul(L, P).is_infinity() && scalar_mul(L, Q).is_infinity(),
            Errc::BasisInvalid, "basis points are not of order ell");
    const TorsionCoordinates coords(P, Q, ell);
    const auto a = coords.find(phi(P));
    const auto b = coords.find(phi(Q));
    require(a && b, Errc::BasisInvalid, "image of a basis point is not in E[ell]");
    return Mat2{ell, {a->first, b->first, a->second, b->second}};
}

/// Working-field data for E[ell]: the extension where it is rational, the
/// base-changed endomorphism, and a certified basis.
struct TorsionFrame {
    std::uint64_t ell;
    std::size_t k;
    std::shared_ptr<const FieldEmbedding> emb;
    Curve E;
    std::pair<Point, Point> basis;
};

namespace detail {

/// Multiplicative order of X in F_ell[X]/(X^2 - t X + q); 0 if X is not a unit.
inline std::uint64_t frobenius_order_mod(std::uint64_t t, std::uint64_t q, std::uint64_t ell)
{
    if (q % ell == 0)
        return 0;
    // Represent elements as c0 + c1 X with X^2 = t X - q.
    std::uint64_t c0 = 0, c1 = 1;
    const std::uint64_t mq = (ell - q % ell) % ell;
    for (std::uint64_t k = 1; k <= ell * ell; ++k) {
        if (c0 == 1 && c1 == 0)
            return k;
        // (c0 + c1 X) X = c0 X + c1 (t X - q)
        const std::uint64_t n0 = (c1 * mq) % ell;
        const std::uint64_t n1 = (c0 + c1 * t) % ell;
        c0 = n0;
        c1 = n1;
    }
    return 0;
}

} // namespace detail

/// Extension degrees k (ascending) worth trying for E[ell] over the working
/// field: divisors of the order of Frobenius in F_ell[X]/(charpoly) with
/// ell^2 | #E(F_{q^k}) and ell | q^k - 1.
inline std::vector<std::size_t> torsion_extension_candidates(const Curve& E, std::uint64_t ell)
{
    const auto g = frobenius_trace(E, false);
    const std::uint64_t k0 = detail::frobenius_order_mod(mod_u64(g.t, ell), mod_u64(g.q, ell), ell);
    if (k0 == 0)
        return {};
    const auto base = base_order_info(E, false);
    const Int LL = int_from_u64(ell * ell);
    std::vector<std::size_t> out;
    for (auto k : divisors(k0)) {
        const Int q = pow(int_from_u64(E.field()->p()), static_cast<unsigned long>(E.field()->degree() * k));
        const Int Nk = q + 1 - trace_over_extension(base.t, base.q, E.extension_degree() * k);
        if (mod(Nk, LL) == 0 && mod(Int(q - 1), int_from_u64(ell)) == 0)
            out.push_back(k);
    }
    return out;
}

inline std::optional<TorsionFrame> torsion_frame(const Curve& E, std::uint64_t ell, std::size_t max_total_degree, std::uint64_t seed = 0)
{
    const std::size_t n = E.field()->degree();
    const Int L = int_from_u64(ell);
    for (std::size_t k : torsion_extension_candidates(E, ell)) {
        if (n * k > max_total_degree)
            continue;
        const auto emb = extension(E.field(), k);
        const Curve ET = base_change(E, *emb);
        Rng rng(seed ^ (ell * 1000003ull + k));
        try {
            auto basis = torsion_basis(ET, L, rng);
            return TorsionFrame{ell, k, emb, ET, std::move(basis)};
        } catch (const Error& e) {
            if (e.code() != Errc::TorsionNotRational)
                throw;
        }
    }
    return std::nullopt;
}

constexpr std::size_t kMaxCrtFieldDegree = 64;

/// Trace, degree and discriminant of phi by CRT over matrices on E[ell].
inline TraceDegree endo_trace_degree(const Endomorphism& phi, std::size_t max_total_degree = kMaxCrtFieldDegree)
{
    if (auto c = phi.cached_trace_degree())
        return *c;
    const Curve& E = phi.curve();
    const std::uint64_t p = E.field()->p();
    const Int B = phi.degree_bound();
    const bool exact = phi.degree_is_exact();
    // Moduli must separate t in [-2 sqrt B, 2 sqrt B] and, unless known, d in [0, B].
    const Int tb = 2 * isqrt_ceil(B);
    const Int target = exact ? Int(2 * tb + 1) : Int(2 * std::max(tb, B) + 1);

    struct Cand {
        std::size_t cost;
        std::uint64_t ell;
    };
    std::vector<Cand> cands;
    const std::size_t n = E.field()->degree();
    for (std::uint64_t ell = 2; ell <= kMaxMatrixPrime; ++ell) {
        if (ell == p || !is_prime(ell))
            continue;
        const auto ks = torsion_extension_candidates(E, ell);
        if (ks.empty() || n * ks.front() > max_total_degree)
            continue;
        cands.push_back({n * ks.front(), ell});
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.cost != b.cost ? a.cost < b.cost : a.ell < b.ell; });

    std::vector<std::pair<Int, Int>> tr, dt;
    Int M = 1;
    TraceDegree out;
    for (const auto& c : cands) {
        if (M >= target)
            break;
        const auto frame = torsion_frame(E, c.ell, max_total_degree);
        if (!frame)
            continue;
        const auto phiT = base_change(phi, *frame->emb);
        const Mat2 mat = endo_matrix_mod_ell(phiT, c.ell, frame->basis);
        const Int L = int_from_u64(c.ell);
        tr.emplace_back(int_from_u64(mat.trace()), L);
        dt.emplace_back(int_from_u64(mat.det()), L);
        out.primes.push_back(c.ell);
        M *= L;
    }
    require(M >= target, Errc::DegreeBoundOverflow,
            "CRT moduli product " + M.get_str() + " cannot reach the degree bound " + B.get_str());
    const auto [tr_r, tr_m] = crt(tr);
    out.t = symmetric_residue(tr_r, tr_m);
    if (exact) {
        out.d = B;
        const auto [d_r, d_m] = crt(dt);
        require(mod(Int(out.d - d_r), d_m) == 0, Errc::BadInput, "determinants disagree with the exact degree");
    } else {
        out.d = crt(dt).first;
    }
    out.D = out.t * out.t - 4 * out.d;
    phi.store_trace_degree(out);
    return out;
}

} // namespace distortion
