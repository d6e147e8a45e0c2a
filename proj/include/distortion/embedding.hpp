#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include "distortion/polynomial.hpp"

namespace distortion {

/// Field homomorphism S -> T for S = F_{p^s}, T = F_{p^t}, s | t, sending the
/// generator of S to the smallest root of S's modulus in T.
class FieldEmbedding {
public:
    FieldEmbedding(Field S, Field T) : S_(std::move(S)), T_(std::move(T))
    {
        require(S_->p() == T_->p(), Errc::MixedFields, "embedding between fields of different characteristic");
        require(T_->degree() % S_->degree() == 0, Errc::BadInput, "source degree must divide target degree");
        if (S_->same_as(*T_)) {
            image_ = FieldElement::generator(T_);
        } else if (S_->degree() == 1) {
            // Prime field: generator is the root of x - c.
            image_ = FieldElement::from_int(T_, Int(0) - int_from_u64(S_->modulus()[0]));
        } else {
            std::vector<FieldElement> c;
            for (auto v : S_->modulus())
                c.push_back(FieldElement(T_, {v}));
            const auto rts = roots(Poly(T_, c));
            require(!rts.empty(), Errc::BadInput, "source modulus has no root in target field");
            image_ = rts.front();
        }
        powers_.push_back(FieldElement::one(T_));
        for (std::size_t i = 1; i < S_->degree(); ++i)
            powers_.push_back(powers_.back() * image_);
    }

    const Field& source() const noexcept { return S_; }
    const Field& target() const noexcept { return T_; }
    const FieldElement& generator_image() const noexcept { return image_; }
    bool is_identity() const noexcept { return S_->same_as(*T_); }

    FieldElement lift(const FieldElement& a) const
    {
        require(same_field(a.field(), S_), Errc::MixedFields, "element is not in the embedding's source field");
        if (is_identity())
            return FieldElement(T_, a.coeffs());
        FieldElement r = FieldElement::zero(T_);
        for (std::size_t i = 0; i < a.coeffs().size(); ++i)
            if (a.coeffs()[i])
                r += powers_[i].scaled(a.coeffs()[i]);
        return r;
    }

    bool in_image(const FieldElement& b) const { return b.in_subfield(S_->degree()); }

    /// Inverse of lift; fails with ElementInSubfield-style BadInput when b is
    /// not in the image.
    FieldElement descend(const FieldElement& b) const
    {
        require(same_field(b.field(), T_), Errc::MixedFields, "element is not in the embedding's target field");
        if (is_identity())
            return FieldElement(S_, b.coeffs());
        const auto p = T_->p();
        const std::size_t s = S_->degree(), t = T_->degree();
        // Solve sum_i a_i powers_[i] = b: t equations, s unknowns.
        std::vector<std::vector<std::uint64_t>> rows(t, std::vector<std::uint64_t>(s + 1));
        for (std::size_t r = 0; r < t; ++r) {
            for (std::size_t c = 0; c < s; ++c)
                rows[r][c] = powers_[c].coeffs()[r];
            rows[r][s] = b.coeffs()[r];
        }
        std::size_t rank = 0;
        std::vector<std::size_t> pivcol;
        for (std::size_t c = 0; c < s && rank < t; ++c) {
            std::size_t piv = rank;
            while (piv < t && rows[piv][c] == 0)
                ++piv;
            if (piv == t)
                continue;
            std::swap(rows[piv], rows[rank]);
            const auto inv = fp::invmod(rows[rank][c], p);
            for (auto& v : rows[rank])
                v = fp::mulmod(v, inv, p);
            for (std::size_t r = 0; r < t; ++r) {
                if (r == rank || rows[r][c] == 0)
                    continue;
                const auto f = rows[r][c];
                for (std::size_t k = 0; k <= s; ++k)
                    rows[r][k] = fp::submod(rows[r][k], fp::mulmod(f, rows[rank][k], p), p);
            }
            pivcol.push_back(c);
            ++rank;
        }
        for (std::size_t r = rank; r < t; ++r)
            require(rows[r][s] == 0, Errc::BadInput, "element does not lie in the embedded subfield");
        std::vector<std::uint64_t> a(s, 0);
        for (std::size_t r = 0; r < rank; ++r)
            a[pivcol[r]] = rows[r][s];
        return FieldElement(S_, std::move(a));
    }

private:
    Field S_, T_;
    FieldElement image_;
    std::vector<FieldElement> powers_;
};

/// The degree-k extension of F with its embedding. Extensions are built from a
/// deterministic irreducible-polynomial search and memoized, so repeated
/// requests return the same field object.
inline std::shared_ptr<const FieldEmbedding> extension(const Field& F, std::size_t k)
{
    require(k >= 1, Errc::BadInput, "extension degree must be positive");
    using Key = std::tuple<std::uint64_t, std::vector<std::uint64_t>, std::size_t>;
    static std::mutex mu;
    static std::map<Key, std::shared_ptr<const FieldEmbedding>> cache;
    static std::map<std::pair<std::uint64_t, std::size_t>, Field> fields;
    const Key key{F->p(), F->modulus(), k};
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(key); it != cache.end())
        return it->second;
    Field T;
    if (k == 1) {
        T = F;
    } else {
        const auto fk = std::make_pair(F->p(), F->degree() * k);
        auto it = fields.find(fk);
        if (it == fields.end())
            it = fields.emplace(fk, FieldSpec::create(F->p(), find_irreducible(F->p(), F->degree() * k))).first;
        T = it->second;
    }
    auto emb = std::make_shared<const FieldEmbedding>(F, T);
    cache.emplace(key, emb);
    return emb;
}

} // namespace distortion
