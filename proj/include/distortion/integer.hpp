#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "distortion/error.hpp"

namespace distortion {

using Int = mpz_class;
using Rng = std::mt19937_64;

/// Prime-power factorization, primes ascending.
using Factorization = std::vector<std::pair<Int, unsigned>>;

inline Int int_from_u64(std::uint64_t v)
{
    Int r;
    mpz_import(r.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
    return r;
}

inline std::uint64_t to_u64(const Int& v)
{
    require(v >= 0 && mpz_sizeinbase(v.get_mpz_t(), 2) <= 64, Errc::BadInput,
            "integer does not fit in 64 bits: " + v.get_str());
    std::uint64_t r = 0;
    mpz_export(&r, nullptr, 1, sizeof(r), 0, 0, v.get_mpz_t());
    return r;
}

inline bool fits_u64(const Int& v) { return v >= 0 && mpz_sizeinbase(v.get_mpz_t(), 2) <= 64; }

inline Int parse_int(const std::string& s)
{
    Int r;
    if (r.set_str(s, 10) != 0)
        fail(Errc::BadInput, "not an integer: '" + s + "'");
    return r;
}

inline bool is_prime(const Int& n)
{
    if (n < 2)
        return false;
    return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

inline bool is_prime(std::uint64_t n) { return is_prime(int_from_u64(n)); }

inline Int next_prime(const Int& n)
{
    Int r;
    mpz_nextprime(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

/// Least non-negative residue.
inline Int mod(const Int& a, const Int& m)
{
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline std::uint64_t mod_u64(const Int& a, std::uint64_t m) { return mpz_fdiv_ui(a.get_mpz_t(), m); }

inline Int pow(const Int& base, unsigned long e)
{
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Int powmod(const Int& base, const Int& e, const Int& m)
{
    Int r;
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline Int gcd(const Int& a, const Int& b)
{
    Int r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline Int lcm(const Int& a, const Int& b)
{
    Int r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline Int isqrt_floor(const Int& n)
{
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline Int isqrt_ceil(const Int& n)
{
    Int r = isqrt_floor(n);
    if (r * r < n)
        ++r;
    return r;
}

inline unsigned valuation(Int n, const Int& ell)
{
    if (n == 0)
        return 0;
    unsigned v = 0;
    while (mpz_divisible_p(n.get_mpz_t(), ell.get_mpz_t())) {
        n /= ell;
        ++v;
    }
    return v;
}

inline Int random_below(Rng& rng, const Int& bound)
{
    // Rejection-free enough: draw 64 extra bits and reduce.
    const auto bits = mpz_sizeinbase(bound.get_mpz_t(), 2) + 64;
    Int r = 0;
    for (std::size_t got = 0; got < bits; got += 64) {
        r <<= 64;
        r += int_from_u64(rng());
    }
    return mod(r, bound);
}

namespace detail {

inline Int pollard_brent(const Int& n, Rng& rng)
{
    if (mpz_even_p(n.get_mpz_t()))
        return 2;
    for (;;) {
        Int y = random_below(rng, n - 1) + 1;
        const Int c = random_below(rng, n - 1) + 1;
        const unsigned long m = 128;
        Int g = 1, r = 1, q = 1, x, ys;
        auto f = [&](const Int& v) { return mod(v * v + c, n); };
        do {
            x = y;
            for (Int i = 0; i < r; ++i)
                y = f(y);
            Int k = 0;
            do {
                ys = y;
                for (unsigned long i = 0; i < m && k + i < r; ++i) {
                    y = f(y);
                    q = mod(q * abs(Int(x - y)), n);
                }
                g = gcd(q, n);
                k += m;
            } while (k < r && g == 1);
            r *= 2;
        } while (g == 1);
        if (g == n) {
            do {
                ys = f(ys);
                g = gcd(abs(Int(x - ys)), n);
            } while (g == 1);
        }
        if (g != n)
            return g;
    }
}

inline void factor_into(const Int& n, Factorization& out, Rng& rng)
{
    if (n == 1)
        return;
    if (is_prime(n)) {
        out.emplace_back(n, 1);
        return;
    }
    const Int d = pollard_brent(n, rng);
    factor_into(d, out, rng);
    factor_into(n / d, out, rng);
}

} // namespace detail

/// Trial division to 10^6, then Pollard-Brent rho on the cofactor.
inline Factorization factor(Int n)
{
    require(n != 0, Errc::BadInput, "cannot factor 0");
    n = abs(n);
    Factorization raw;
    for (std::uint64_t d = 2; d <= 1000000; d += (d == 2 ? 1 : 2)) {
        if (Int(d) * d > n)
            break;
        unsigned e = 0;
        while (mpz_divisible_ui_p(n.get_mpz_t(), d)) {
            n /= d;
            ++e;
        }
        if (e)
            raw.emplace_back(Int(d), e);
    }
    if (n > 1) {
        Rng rng(0x5eed);
        Factorization big;
        detail::factor_into(n, big, rng);
        raw.insert(raw.end(), big.begin(), big.end());
    }
    std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    Factorization merged;
    for (const auto& [pr, e] : raw) {
        if (!merged.empty() && merged.back().first == pr)
            merged.back().second += e;
        else
            merged.emplace_back(pr, e);
    }
    return merged;
}

inline std::vector<std::uint64_t> prime_divisors(std::uint64_t n)
{
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0)
                n /= d;
        }
    }
    if (n > 1)
        out.push_back(n);
    return out;
}

inline std::vector<std::uint64_t> divisors(std::uint64_t n)
{
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            if (d * d != n)
                out.push_back(n / d);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::string factorization_string(const Factorization& f)
{
    std::string s;
    for (const auto& [pr, e] : f) {
        if (!s.empty())
            s += " * ";
        s += pr.get_str();
        if (e > 1)
            s += "^" + std::to_string(e);
    }
    return s.empty() ? "1" : s;
}

/// Smallest k >= 1 with q^k = 1 mod ell.
inline std::uint64_t embedding_degree(const Int& q, std::uint64_t ell)
{
    require(ell >= 2 && is_prime(ell), Errc::NotPrime, "embedding degree needs a prime, got " + std::to_string(ell));
    const std::uint64_t qm = mod_u64(q, ell);
    require(qm != 0, Errc::BadInput, "ell divides q");
    std::uint64_t acc = qm, k = 1;
    while (acc != 1) {
        acc = static_cast<std::uint64_t>((static_cast<unsigned __int128>(acc) * qm) % ell);
        ++k;
    }
    return k;
}

/// Legendre symbol with the mod-8 rule at ell = 2 (split / inert / ramified).
inline int legendre(const Int& D, const Int& ell)
{
    require(is_prime(ell), Errc::NotPrime, ell.get_str() + " is not prime");
    if (ell == 2) {
        const auto r = mod_u64(D, 8);
        if (r % 2 == 0)
            return 0;
        return (r == 1 || r == 7) ? 1 : -1;
    }
    const Int r = mod(D, ell);
    if (r == 0)
        return 0;
    return mpz_legendre(r.get_mpz_t(), ell.get_mpz_t());
}

/// CRT combine residues r_i mod m_i (pairwise coprime); returns (r, M).
inline std::pair<Int, Int> crt(const std::vector<std::pair<Int, Int>>& residues)
{
    Int r = 0, M = 1;
    for (const auto& [ri, mi] : residues) {
        Int inv;
        mpz_invert(inv.get_mpz_t(), Int(mod(M, mi)).get_mpz_t(), mi.get_mpz_t());
        const Int t = mod((ri - r) * inv, mi);
        r += M * t;
        M *= mi;
    }
    return {mod(r, M), M};
}

/// Symmetric representative in (-M/2, M/2].
inline Int symmetric_residue(const Int& r, const Int& M)
{
    Int s = mod(r, M);
    if (2 * s > M)
        s -= M;
    return s;
}

} // namespace distortion
