#pragma once

#include <string>
#include <utility>
#include <vector>

#include "distortion/field.hpp"

namespace distortion {

/// Univariate polynomial over a field F_{p^n}; ascending coefficients, no
/// trailing zeros.
class Poly {
public:
    Poly() = default;
    explicit Poly(Field F) : F_(std::move(F)) {}
    Poly(Field F, std::vector<FieldElement> c) : F_(std::move(F)), c_(std::move(c)) { trim(); }

    static Poly constant(const FieldElement& a) { return Poly(a.field(), {a}); }
    static Poly x(const Field& F) { return Poly(F, {FieldElement::zero(F), FieldElement::one(F)}); }
    /// x - a
    static Poly linear_root(const FieldElement& a) { return Poly(a.field(), {-a, FieldElement::one(a.field())}); }

    /// From integer coefficients (ascending), reduced mod p.
    static Poly from_ints(const Field& F, const std::vector<long long>& c)
    {
        std::vector<FieldElement> out;
        for (auto v : c)
            out.push_back(FieldElement::from_int(F, v));
        return Poly(F, std::move(out));
    }

    const Field& field() const noexcept { return F_; }
    const std::vector<FieldElement>& coeffs() const noexcept { return c_; }
    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }
    FieldElement lead() const { return c_.empty() ? FieldElement::zero(F_) : c_.back(); }
    FieldElement coeff(std::size_t i) const { return i < c_.size() ? c_[i] : FieldElement::zero(F_); }

    Poly operator+(const Poly& o) const
    {
        std::vector<FieldElement> r(std::max(c_.size(), o.c_.size()), FieldElement::zero(F_));
        for (std::size_t i = 0; i < r.size(); ++i)
            r[i] = coeff(i) + o.coeff(i);
        return Poly(F_, std::move(r));
    }

    Poly operator-(const Poly& o) const
    {
        std::vector<FieldElement> r(std::max(c_.size(), o.c_.size()), FieldElement::zero(F_));
        for (std::size_t i = 0; i < r.size(); ++i)
            r[i] = coeff(i) - o.coeff(i);
        return Poly(F_, std::move(r));
    }

    Poly operator-() const { return Poly(F_) - *this; }

    Poly operator*(const Poly& o) const
    {
        if (is_zero() || o.is_zero())
            return Poly(F_);
        std::vector<FieldElement> r(c_.size() + o.c_.size() - 1, FieldElement::zero(F_));
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i].is_zero())
                continue;
            for (std::size_t j = 0; j < o.c_.size(); ++j)
                r[i + j] += c_[i] * o.c_[j];
        }
        return Poly(F_, std::move(r));
    }

    Poly operator*(const FieldElement& a) const
    {
        std::vector<FieldElement> r = c_;
        for (auto& c : r)
            c *= a;
        return Poly(F_, std::move(r));
    }

    std::pair<Poly, Poly> divmod(const Poly& b) const
    {
        require(!b.is_zero(), Errc::DivisionByZero, "polynomial division by zero");
        if (degree() < b.degree())
            return {Poly(F_), *this};
        std::vector<FieldElement> rem = c_;
        std::vector<FieldElement> q(c_.size() - b.c_.size() + 1, FieldElement::zero(F_));
        const FieldElement inv = b.lead().inverse();
        const std::size_t db = b.c_.size() - 1;
        for (std::size_t k = q.size(); k-- > 0;) {
            const FieldElement c = rem[k + db] * inv;
            q[k] = c;
            if (!c.is_zero())
                for (std::size_t j = 0; j <= db; ++j)
                    rem[k + j] -= c * b.c_[j];
        }
        rem.resize(db);
        return {Poly(F_, std::move(q)), Poly(F_, std::move(rem))};
    }

    Poly operator/(const Poly& b) const { return divmod(b).first; }
    Poly operator%(const Poly& b) const { return divmod(b).second; }

    Poly monic() const
    {
        if (is_zero())
            return *this;
        return *this * lead().inverse();
    }

    Poly derivative() const
    {
        if (c_.size() <= 1)
            return Poly(F_);
        std::vector<FieldElement> r;
        for (std::size_t i = 1; i < c_.size(); ++i)
            r.push_back(c_[i].scaled(i));
        return Poly(F_, std::move(r));
    }

    FieldElement operator()(const FieldElement& x) const
    {
        FieldElement r = FieldElement::zero(F_);
        for (std::size_t i = c_.size(); i-- > 0;)
            r = r * x + c_[i];
        return r;
    }

    /// Coefficient-wise image under a field map (e.g. Frobenius or embedding).
    template <class Fn>
    Poly map_coeffs(const Field& target, Fn&& fn) const
    {
        std::vector<FieldElement> r;
        for (const auto& c : c_)
            r.push_back(fn(c));
        return Poly(target, std::move(r));
    }

    bool operator==(const Poly& o) const { return c_ == o.c_; }

    std::string to_string(const std::string& var = "x") const
    {
        if (is_zero())
            return "0";
        std::string s;
        for (std::size_t i = c_.size(); i-- > 0;) {
            if (c_[i].is_zero())
                continue;
            if (!s.empty())
                s += " + ";
            const std::string c = c_[i].to_string();
            const bool simple = c.find(' ') == std::string::npos;
            if (i == 0)
                s += c;
            else {
                if (!c_[i].is_one())
                    s += (simple ? c : "(" + c + ")") + "*";
                s += var + (i > 1 ? "^" + std::to_string(i) : "");
            }
        }
        return s;
    }

private:
    void trim()
    {
        while (!c_.empty() && c_.back().is_zero())
            c_.pop_back();
    }

    Field F_;
    std::vector<FieldElement> c_;
};

inline Poly gcd(Poly a, Poly b)
{
    while (!b.is_zero()) {
        Poly r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

inline Poly powmod(const Poly& base, const Int& e, const Poly& f)
{
    Poly r = Poly::constant(FieldElement::one(f.field())) % f;
    const Poly b = base % f;
    const auto bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (std::size_t i = bits; i-- > 0;) {
        r = (r * r) % f;
        if (mpz_tstbit(e.get_mpz_t(), i))
            r = (r * b) % f;
    }
    return r;
}

/// Product of (x - a) over the given roots.
inline Poly poly_from_roots(const Field& F, const std::vector<FieldElement>& roots)
{
    Poly r = Poly::constant(FieldElement::one(F));
    for (const auto& a : roots)
        r = r * Poly::linear_root(a);
    return r;
}

namespace detail {

inline void split_roots(const Poly& f, Rng& rng, std::vector<FieldElement>& out)
{
    if (f.degree() <= 0)
        return;
    if (f.degree() == 1) {
        out.push_back(-f.coeff(0) * f.lead().inverse());
        return;
    }
    const Field& F = f.field();
    const Int e = (F->order() - 1) / 2;
    for (;;) {
        const Poly t = Poly(F, {FieldElement::random(F, rng), FieldElement::one(F)});
        const Poly g = gcd(powmod(t, e, f) - Poly::constant(FieldElement::one(F)), f);
        if (g.degree() > 0 && g.degree() < f.degree()) {
            split_roots(g, rng, out);
            split_roots(f / g, rng, out);
            return;
        }
    }
}

} // namespace detail

/// Distinct roots of f in its coefficient field, sorted by coefficient vector.
inline std::vector<FieldElement> roots(const Poly& f, std::uint64_t seed = 0)
{
    require(!f.is_zero(), Errc::BadInput, "roots of the zero polynomial");
    std::vector<FieldElement> out;
    if (f.degree() == 0)
        return out;
    const Field& F = f.field();
    const Poly fm = f.monic();
    const Poly x = Poly::x(F);
    const Poly g = gcd(powmod(x, F->order(), fm) - x, fm);
    Rng rng(seed);
    detail::split_roots(g, rng, out);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace distortion
