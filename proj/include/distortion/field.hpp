#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "distortion/error.hpp"
#include "distortion/integer.hpp"

namespace distortion {

namespace fp {

// Dense polynomials over F_p, ascending coefficients, no trailing zeros
// (the zero polynomial is the empty vector).
using Coeffs = std::vector<std::uint64_t>;

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p)
{
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

inline std::uint64_t addmod(std::uint64_t a, std::uint64_t b, std::uint64_t p)
{
    const std::uint64_t s = a + b;
    return (s >= p || s < a) ? s - p : s;
}

inline std::uint64_t submod(std::uint64_t a, std::uint64_t b, std::uint64_t p) { return a >= b ? a - b : a + (p - b); }

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p)
{
    std::uint64_t r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1)
            r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

inline std::uint64_t invmod(std::uint64_t a, std::uint64_t p)
{
    require(a % p != 0, Errc::DivisionByZero, "inverse of 0 mod " + std::to_string(p));
    return powmod(a, p - 2, p);
}

inline void trim(Coeffs& a)
{
    while (!a.empty() && a.back() == 0)
        a.pop_back();
}

inline int deg(const Coeffs& a) { return static_cast<int>(a.size()) - 1; }

inline Coeffs sub(Coeffs a, const Coeffs& b, std::uint64_t p)
{
    if (a.size() < b.size())
        a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i)
        a[i] = submod(a[i], b[i], p);
    trim(a);
    return a;
}

inline Coeffs mul(const Coeffs& a, const Coeffs& b, std::uint64_t p)
{
    if (a.empty() || b.empty())
        return {};
    std::vector<unsigned __int128> acc(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i])
            continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            acc[i + j] += static_cast<unsigned __int128>(a[i]) * b[j];
    }
    Coeffs r(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i)
        r[i] = static_cast<std::uint64_t>(acc[i] % p);
    trim(r);
    return r;
}

/// Quotient and remainder; b must be nonzero.
inline std::pair<Coeffs, Coeffs> divmod(Coeffs a, const Coeffs& b, std::uint64_t p)
{
    require(!b.empty(), Errc::DivisionByZero, "polynomial division by zero");
    trim(a);
    if (a.size() < b.size())
        return {{}, a};
    const std::uint64_t lead_inv = invmod(b.back(), p);
    Coeffs q(a.size() - b.size() + 1, 0);
    const std::size_t db = b.size() - 1;
    for (std::size_t k = q.size(); k-- > 0;) {
        const std::uint64_t c = mulmod(a[k + db], lead_inv, p);
        q[k] = c;
        if (c)
            for (std::size_t j = 0; j <= db; ++j)
                a[k + j] = submod(a[k + j], mulmod(c, b[j], p), p);
    }
    trim(a);
    trim(q);
    return {q, a};
}

inline Coeffs monic(Coeffs a, std::uint64_t p)
{
    if (a.empty())
        return a;
    const std::uint64_t inv = invmod(a.back(), p);
    for (auto& c : a)
        c = mulmod(c, inv, p);
    return a;
}

inline Coeffs gcd(Coeffs a, Coeffs b, std::uint64_t p)
{
    trim(a);
    trim(b);
    while (!b.empty()) {
        auto r = divmod(a, b, p).second;
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a, p);
}

inline Coeffs mulmod_poly(const Coeffs& a, const Coeffs& b, const Coeffs& f, std::uint64_t p)
{
    return divmod(mul(a, b, p), f, p).second;
}

/// base^e mod f, e arbitrary precision.
inline Coeffs powmod_poly(const Coeffs& base, const Int& e, const Coeffs& f, std::uint64_t p)
{
    Coeffs r{1};
    r = divmod(r, f, p).second;
    Coeffs b = divmod(base, f, p).second;
    const auto bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (std::size_t i = bits; i-- > 0;) {
        r = mulmod_poly(r, r, f, p);
        if (mpz_tstbit(e.get_mpz_t(), i))
            r = mulmod_poly(r, b, f, p);
    }
    return r;
}

/// Ben-Or: f monic of degree n is irreducible iff gcd(X^(p^k) - X, f) = 1 for
/// k <= n/2; additionally X^(p^n) = X mod f is confirmed.
inline bool is_irreducible(const Coeffs& f, std::uint64_t p)
{
    const int n = deg(f);
    if (n < 1)
        return false;
    if (n == 1)
        return true;
    const Coeffs x{0, 1};
    Coeffs h = x;
    const Int pe = int_from_u64(p);
    for (int k = 1; k <= n; ++k) {
        h = powmod_poly(h, pe, f, p);
        if (2 * k <= n) {
            const auto g = gcd(sub(h, x, p), f, p);
            if (deg(g) > 0)
                return false;
        }
    }
    return sub(h, x, p).empty();
}

} // namespace fp

class FieldSpec;
using Field = std::shared_ptr<const FieldSpec>;

/// F_{p^n} = F_p[X]/(f) with f monic irreducible of degree n.
class FieldSpec {
public:
    /// `modulus` holds n+1 ascending coefficients of a monic irreducible f.
    static Field create(std::uint64_t p, std::vector<std::uint64_t> modulus)
    {
        require(p >= 3 && p < (std::uint64_t(1) << 62) && is_prime(p), Errc::NotPrime,
                "field characteristic must be an odd prime below 2^62, got " + std::to_string(p));
        for (auto& c : modulus)
            c %= p;
        require(modulus.size() >= 2 && modulus.back() == 1, Errc::BadInput, "field modulus must be monic of degree >= 1");
        require(fp::is_irreducible(modulus, p), Errc::NotIrreducible, "field modulus is reducible over F_" + std::to_string(p));
        return Field(new FieldSpec(p, std::move(modulus)));
    }

    static Field prime(std::uint64_t p) { return create(p, {0, 1}); }

    std::uint64_t p() const noexcept { return p_; }
    std::size_t degree() const noexcept { return modulus_.size() - 1; }
    const std::vector<std::uint64_t>& modulus() const noexcept { return modulus_; }
    const Int& order() const noexcept { return q_; }

    bool same_as(const FieldSpec& o) const noexcept { return this == &o || (p_ == o.p_ && modulus_ == o.modulus_); }

private:
    FieldSpec(std::uint64_t p, std::vector<std::uint64_t> modulus)
        : p_(p), modulus_(std::move(modulus)), q_(pow(int_from_u64(p), static_cast<unsigned long>(modulus_.size() - 1)))
    {
        wide_acc_ = static_cast<unsigned __int128>(p_) * p_ * (2 * modulus_.size() + 2) >= (static_cast<unsigned __int128>(1) << 63);
    }

    friend class FieldElement;

    std::uint64_t p_;
    std::vector<std::uint64_t> modulus_;
    Int q_;
    bool wide_acc_ = true;
};

inline bool same_field(const Field& a, const Field& b) { return a && b && a->same_as(*b); }

/// Element of F_{p^n}: n residues mod p, ascending powers of the generator z.
class FieldElement {
public:
    FieldElement() = default;

    FieldElement(Field F, std::vector<std::uint64_t> coeffs) : F_(std::move(F)), c_(std::move(coeffs))
    {
        require(F_ != nullptr, Errc::BadInput, "field element without a field");
        const auto p = F_->p();
        for (auto& c : c_)
            c %= p;
        if (c_.size() > F_->degree()) {
            fp::trim(c_);
            c_ = fp::divmod(c_, F_->modulus(), p).second;
        }
        c_.resize(F_->degree(), 0);
    }

    static FieldElement zero(const Field& F) { return FieldElement(F, {}); }
    static FieldElement one(const Field& F) { return FieldElement(F, {1}); }
    static FieldElement generator(const Field& F) { return FieldElement(F, {0, 1}); }

    static FieldElement from_int(const Field& F, const Int& v) { return FieldElement(F, {mod_u64(v, F->p())}); }
    static FieldElement from_int(const Field& F, long long v)
    {
        const auto p = static_cast<long long>(F->p());
        long long r = v % p;
        if (r < 0)
            r += p;
        return FieldElement(F, {static_cast<std::uint64_t>(r)});
    }

    static FieldElement random(const Field& F, Rng& rng)
    {
        std::vector<std::uint64_t> c(F->degree());
        for (auto& x : c)
            x = rng() % F->p();
        return FieldElement(F, std::move(c));
    }

    const Field& field() const noexcept { return F_; }
    const std::vector<std::uint64_t>& coeffs() const noexcept { return c_; }
    bool valid() const noexcept { return F_ != nullptr; }

    bool is_zero() const noexcept
    {
        return std::all_of(c_.begin(), c_.end(), [](std::uint64_t v) { return v == 0; });
    }

    bool is_one() const noexcept
    {
        if (c_.empty() || c_[0] != 1 % F_->p())
            return false;
        return std::all_of(c_.begin() + 1, c_.end(), [](std::uint64_t v) { return v == 0; });
    }

    /// True when the element lies in the prime field.
    bool is_prime_field_element() const noexcept
    {
        return std::all_of(c_.begin() + (c_.empty() ? 0 : 1), c_.end(), [](std::uint64_t v) { return v == 0; });
    }

    FieldElement operator+(const FieldElement& o) const
    {
        check_same(o);
        FieldElement r = *this;
        const auto p = F_->p();
        for (std::size_t i = 0; i < c_.size(); ++i)
            r.c_[i] = fp::addmod(c_[i], o.c_[i], p);
        return r;
    }

    FieldElement operator-(const FieldElement& o) const
    {
        check_same(o);
        FieldElement r = *this;
        const auto p = F_->p();
        for (std::size_t i = 0; i < c_.size(); ++i)
            r.c_[i] = fp::submod(c_[i], o.c_[i], p);
        return r;
    }

    FieldElement operator-() const
    {
        FieldElement r = *this;
        const auto p = F_->p();
        for (auto& c : r.c_)
            c = c ? p - c : 0;
        return r;
    }

    FieldElement operator*(const FieldElement& o) const
    {
        check_same(o);
        FieldElement r;
        r.F_ = F_;
        r.c_ = F_->wide_acc_ ? mul_reduce<unsigned __int128>(c_, o.c_) : mul_reduce<std::uint64_t>(c_, o.c_);
        return r;
    }

    FieldElement operator/(const FieldElement& o) const { return *this * o.inverse(); }

    FieldElement& operator+=(const FieldElement& o) { return *this = *this + o; }
    FieldElement& operator-=(const FieldElement& o) { return *this = *this - o; }
    FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }
    FieldElement& operator/=(const FieldElement& o) { return *this = *this / o; }

    FieldElement square() const { return *this * *this; }

    FieldElement scaled(std::uint64_t k) const
    {
        FieldElement r = *this;
        const auto p = F_->p();
        k %= p;
        for (auto& c : r.c_)
            c = fp::mulmod(c, k, p);
        return r;
    }

    FieldElement inverse() const
    {
        require(!is_zero(), Errc::DivisionByZero, "inverse of zero field element");
        const auto p = F_->p();
        if (c_.size() == 1)
            return FieldElement(F_, {fp::invmod(c_[0], p)});
        // Extended Euclid in F_p[X] against the modulus.
        fp::Coeffs r0 = F_->modulus(), r1 = c_;
        fp::trim(r1);
        fp::Coeffs s0{}, s1{1};
        while (!r1.empty()) {
            auto [q, r] = fp::divmod(r0, r1, p);
            auto s = fp::sub(s0, fp::mul(q, s1, p), p);
            r0 = std::move(r1);
            r1 = std::move(r);
            s0 = std::move(s1);
            s1 = std::move(s);
        }
        // r0 is a nonzero constant since the modulus is irreducible.
        const std::uint64_t inv = fp::invmod(r0[0], p);
        for (auto& c : s0)
            c = fp::mulmod(c, inv, p);
        return FieldElement(F_, std::move(s0));
    }

    FieldElement pow(const Int& e) const
    {
        if (e < 0)
            return inverse().pow(Int(-e));
        FieldElement r = one(F_);
        const auto bits = mpz_sizeinbase(e.get_mpz_t(), 2);
        for (std::size_t i = bits; i-- > 0;) {
            r = r.square();
            if (mpz_tstbit(e.get_mpz_t(), i))
                r = r * *this;
        }
        return r;
    }

    FieldElement pow(std::uint64_t e) const { return pow(int_from_u64(e)); }

    /// x -> x^(p^k).
    FieldElement frobenius(std::uint64_t k = 1) const
    {
        FieldElement r = *this;
        const Int p = int_from_u64(F_->p());
        for (std::uint64_t i = 0; i < k % F_->degree(); ++i)
            r = r.pow(p);
        return r;
    }

    /// Membership in the subfield F_{p^d} (d must divide n).
    bool in_subfield(std::uint64_t d) const
    {
        require(d >= 1 && F_->degree() % d == 0, Errc::BadInput, "subfield degree must divide the field degree");
        return frobenius(d) == *this;
    }

    bool is_square() const
    {
        if (is_zero())
            return true;
        return pow(Int((F_->order() - 1) / 2)).is_one();
    }

    /// Square root with canonical choice: the lexicographically smaller
    /// coefficient vector of {s, -s}.
    std::optional<FieldElement> sqrt() const
    {
        if (is_zero())
            return *this;
        const Int q = F_->order();
        if (!pow(Int((q - 1) / 2)).is_one())
            return std::nullopt;
        // Tonelli-Shanks: q - 1 = 2^s t, t odd.
        Int t = q - 1;
        unsigned s = 0;
        while (mpz_even_p(t.get_mpz_t())) {
            t /= 2;
            ++s;
        }
        const FieldElement c = non_residue().pow(t);
        FieldElement x = pow(Int((t + 1) / 2));
        FieldElement b = pow(t);
        FieldElement g = c;
        unsigned r = s;
        while (!b.is_one()) {
            unsigned m = 0;
            FieldElement bb = b;
            while (!bb.is_one()) {
                bb = bb.square();
                ++m;
            }
            FieldElement gs = g;
            for (unsigned i = 0; i + 1 < r - m; ++i)
                gs = gs.square();
            x *= gs;
            g = gs.square();
            b *= g;
            r = m;
        }
        const FieldElement other = -x;
        return other.c_ < x.c_ ? other : x;
    }

    /// First quadratic non-residue in a fixed enumeration order.
    FieldElement non_residue() const
    {
        const Int e = (F_->order() - 1) / 2;
        const auto p = F_->p();
        const std::size_t n = F_->degree();
        for (std::uint64_t k = 1;; ++k) {
            std::vector<std::uint64_t> c(n, 0);
            // Enumerate k in base p as a coefficient vector.
            std::uint64_t v = k;
            for (std::size_t i = 0; i < n && v; ++i, v /= p)
                c[i] = v % p;
            FieldElement cand(F_, std::move(c));
            if (!cand.is_zero() && !cand.pow(e).is_one())
                return cand;
        }
    }

    std::strong_ordering operator<=>(const FieldElement& o) const { return c_ <=> o.c_; }
    bool operator==(const FieldElement& o) const { return c_ == o.c_ && (F_ == o.F_ || same_field(F_, o.F_)); }

    /// Human-readable polynomial in z, e.g. "52*z^5 + 11*z^4 + 72".
    std::string to_string() const
    {
        std::string s;
        for (std::size_t i = c_.size(); i-- > 0;) {
            if (!c_[i])
                continue;
            if (!s.empty())
                s += " + ";
            if (i == 0 || c_[i] != 1)
                s += std::to_string(c_[i]);
            if (i > 0) {
                if (c_[i] != 1)
                    s += "*";
                s += "z";
                if (i > 1)
                    s += "^" + std::to_string(i);
            }
        }
        return s.empty() ? "0" : s;
    }

private:
    void check_same(const FieldElement& o) const
    {
        if (F_ != o.F_ && !same_field(F_, o.F_))
            fail(Errc::MixedFields, "operands live in different fields");
    }

    template <class Acc>
    std::vector<std::uint64_t> mul_reduce(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) const
    {
        const std::size_t n = F_->degree();
        const auto p = F_->p();
        if (n == 1)
            return {fp::mulmod(a[0], b[0], p)};
        std::vector<Acc> acc(2 * n - 1, 0);
        for (std::size_t i = 0; i < n; ++i) {
            if (!a[i])
                continue;
            const Acc ai = a[i];
            for (std::size_t j = 0; j < n; ++j)
                acc[i + j] += ai * b[j];
        }
        // Reduce X^k for k >= n using X^n = -sum m_j X^j.
        const auto& m = F_->modulus();
        for (std::size_t k = 2 * n - 1; k-- > n;) {
            const std::uint64_t c = static_cast<std::uint64_t>(acc[k] % p);
            if (!c)
                continue;
            for (std::size_t j = 0; j < n; ++j)
                if (m[j])
                    acc[k - n + j] += static_cast<Acc>(c) * (p - m[j]);
        }
        std::vector<std::uint64_t> r(n);
        for (std::size_t i = 0; i < n; ++i)
            r[i] = static_cast<std::uint64_t>(acc[i] % p);
        return r;
    }

    Field F_;
    std::vector<std::uint64_t> c_;
};

inline FieldElement operator*(long long k, const FieldElement& a) { return FieldElement::from_int(a.field(), k) * a; }

struct FieldElementHash {
    std::size_t operator()(const FieldElement& a) const noexcept
    {
        std::size_t h = 0xcbf29ce484222325ull;
        for (auto c : a.coeffs())
            h = (h ^ std::hash<std::uint64_t>{}(c)) * 0x100000001b3ull;
        return h;
    }
};

/// A basis of the subfield F_{p^d} inside F (as F_p-vector space), built from
/// relative traces of powers of the generator.
inline std::vector<FieldElement> subfield_basis(const Field& F, std::size_t d)
{
    const std::size_t n = F->degree();
    require(d >= 1 && n % d == 0, Errc::BadInput, "subfield degree must divide the field degree");
    if (d == n) {
        std::vector<FieldElement> out;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<std::uint64_t> c(n, 0);
            c[i] = 1;
            out.emplace_back(F, std::move(c));
        }
        return out;
    }
    const auto p = F->p();
    std::vector<FieldElement> chosen;
    std::vector<std::vector<std::uint64_t>> rows; // row-echelon copy
    std::vector<std::size_t> pivots;
    FieldElement zpow = FieldElement::one(F);
    const FieldElement z = FieldElement::generator(F);
    for (std::size_t i = 0; i < n && chosen.size() < d; ++i, zpow *= z) {
        FieldElement tr = FieldElement::zero(F);
        FieldElement conj = zpow;
        for (std::size_t j = 0; j < n / d; ++j) {
            tr += conj;
            conj = conj.frobenius(d);
        }
        auto v = tr.coeffs();
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const auto c = v[pivots[r]];
            if (c)
                for (std::size_t k = 0; k < n; ++k)
                    v[k] = fp::submod(v[k], fp::mulmod(c, rows[r][k], p), p);
        }
        auto piv = std::find_if(v.begin(), v.end(), [](std::uint64_t x) { return x != 0; });
        if (piv == v.end())
            continue;
        const std::size_t pi = static_cast<std::size_t>(piv - v.begin());
        const auto inv = fp::invmod(v[pi], p);
        for (auto& x : v)
            x = fp::mulmod(x, inv, p);
        rows.push_back(v);
        pivots.push_back(pi);
        chosen.push_back(tr);
    }
    require(chosen.size() == d, Errc::BadInput, "failed to build subfield basis");
    return chosen;
}

/// Calls `fn` on every element of the subfield F_{p^d} of F.
template <class Fn>
void for_each_subfield_element(const Field& F, std::size_t d, Fn&& fn)
{
    const auto basis = subfield_basis(F, d);
    const auto p = F->p();
    std::vector<std::uint64_t> digits(d, 0);
    FieldElement cur = FieldElement::zero(F);
    for (;;) {
        fn(cur);
        std::size_t i = 0;
        while (i < d) {
            cur += basis[i];
            if (++digits[i] < p)
                break;
            digits[i] = 0; // wrapped: p additions returned this coordinate to 0
            ++i;
        }
        if (i == d)
            return;
    }
}

/// Deterministic search for a monic irreducible polynomial of degree n over F_p.
inline std::vector<std::uint64_t> find_irreducible(std::uint64_t p, std::size_t n, std::uint64_t seed = 0)
{
    require(n >= 1, Errc::BadInput, "degree must be positive");
    if (n == 1)
        return {0, 1};
    Rng rng(seed ^ (p * 0x9e3779b97f4a7c15ull) ^ n);
    for (;;) {
        std::vector<std::uint64_t> f(n + 1);
        for (auto& c : f)
            c = rng() % p;
        f[n] = 1;
        if (f[0] == 0)
            continue;
        if (fp::is_irreducible(f, p))
            return f;
    }
}

} // namespace distortion
