#pragma once

#include <cctype>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>

#include <json.hpp>

#include "distortion/endomorphism.hpp"

namespace distortion::io {

using json = nlohmann::json;

[[noreturn]] inline void schema_fail(const std::string& what) { fail(Errc::SchemaError, what); }

/// Parses JSON text; syntax errors name the line and column.
inline json parse_json(const std::string& text, const std::string& origin)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::size_t start = text.rfind('\n', e.byte > 1 ? e.byte - 2 : 0);
        start = start == std::string::npos ? 0 : start + 1;
        const std::size_t end = text.find('\n', start);
        schema_fail(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what() + "\n  " +
                    text.substr(start, end == std::string::npos ? std::string::npos : end - start));
    }
}

inline json load_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        schema_fail("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json(ss.str(), path);
}

inline const json& member(const json& j, const std::string& key, const std::string& where)
{
    if (!j.is_object() || !j.contains(key))
        schema_fail(where + ": missing \"" + key + "\"");
    return j.at(key);
}

inline Int int_from_json(const json& j, const std::string& where)
{
    if (j.is_number_integer())
        return j.is_number_unsigned() ? int_from_u64(j.get<std::uint64_t>()) : Int(static_cast<long>(j.get<std::int64_t>()));
    if (j.is_string()) {
        try {
            return parse_int(j.get<std::string>());
        } catch (const std::exception&) {
        }
    }
    schema_fail(where + ": expected an integer");
}

inline json int_to_json(const Int& v)
{
    if (v.fits_slong_p())
        return v.get_si();
    return v.get_str();
}

/// {"p": 101, "modulus": [ascending coefficients]}; the modulus defaults to X.
inline Field field_from_json(const json& j, const std::string& where = "field")
{
    const Int p = int_from_json(member(j, "p", where), where + ".p");
    std::vector<std::uint64_t> modulus{0, 1};
    if (j.contains("modulus")) {
        modulus.clear();
        const auto& m = j.at("modulus");
        if (!m.is_array())
            schema_fail(where + ".modulus: expected an array");
        for (const auto& c : m)
            modulus.push_back(to_u64(mod(int_from_json(c, where + ".modulus"), p)));
    }
    return FieldSpec::create(to_u64(p), modulus);
}

inline json field_to_json(const Field& F) { return json{{"p", F->p()}, {"modulus", F->modulus()}}; }

using Names = std::map<std::string, FieldElement>;

/// Integer, ascending coefficient array, or the name of a configured element.
inline FieldElement element_from_json(const Field& F, const json& j, const std::string& where, const Names* names = nullptr)
{
    if (j.is_array()) {
        if (j.size() > F->degree())
            schema_fail(where + ": more coefficients than the field degree");
        std::vector<std::uint64_t> c;
        const Int p = int_from_u64(F->p());
        for (const auto& v : j)
            c.push_back(to_u64(mod(int_from_json(v, where), p)));
        c.resize(F->degree(), 0);
        return FieldElement(F, c);
    }
    if (j.is_string() && names) {
        if (auto it = names->find(j.get<std::string>()); it != names->end())
            return it->second;
    }
    return FieldElement::from_int(F, int_from_json(j, where));
}

/// Prime-field elements as integers, others as ascending coefficient arrays.
inline json element_to_json(const FieldElement& a)
{
    if (a.is_prime_field_element())
        return a.is_zero() ? 0 : a.coeffs()[0];
    std::vector<std::uint64_t> c = a.coeffs();
    c.resize(a.field()->degree(), 0);
    return c;
}

inline json point_to_json(const Point& P)
{
    if (P.is_infinity())
        return "infinity";
    return json{{"x", element_to_json(P.x())}, {"y", element_to_json(P.y())}};
}

inline json curve_to_json(const Curve& E)
{
    json j{{"field", field_to_json(E.field())}, {"a", element_to_json(E.a())}, {"b", element_to_json(E.b())}};
    if (E.base_degree() != E.field()->degree())
        j["base_degree"] = E.base_degree();
    return j;
}

inline json poly_to_json(const Poly& f)
{
    json out = json::array();
    for (const auto& c : f.coeffs())
        out.push_back(element_to_json(c));
    return out;
}

/// A curve with its named elements, points and isogenies.
struct CurveConfig {
    Field F;
    Curve E;
    Names elements;
    std::map<std::string, Point> points;
    std::map<std::string, std::shared_ptr<const FieldEmbedding>> point_fields; // for points over an extension
    std::map<std::string, Isogeny> isogenies;

    const Point& point(const std::string& name) const
    {
        auto it = points.find(name);
        if (it == points.end())
            schema_fail("unknown point \"" + name + "\"");
        return it->second;
    }

    const Isogeny& isogeny(const std::string& name) const
    {
        auto it = isogenies.find(name);
        if (it == isogenies.end())
            schema_fail("unknown isogeny \"" + name + "\"");
        return it->second;
    }
};

inline Point point_from_json(const Curve& E, const json& j, const std::string& where, const Names* names = nullptr)
{
    if (j.is_string() && j.get<std::string>() == "infinity")
        return Point::infinity(E);
    const auto& F = E.field();
    return Point(E, element_from_json(F, member(j, "x", where), where + ".x", names),
                 element_from_json(F, member(j, "y", where), where + ".y", names));
}

/// {"field", "a", "b", optional "base_degree", "base_order", "elements",
///  "points", "isogenies"}. A point may carry "field" (it lies over that
///  extension) or "on": NAME (it lies on that isogeny's codomain).
inline CurveConfig curve_config_from_json(const json& j)
{
    if (!j.is_object())
        schema_fail("curve config must be an object");
    CurveConfig cfg;
    cfg.F = field_from_json(member(j, "field", "curve"), "curve.field");
    if (j.contains("elements"))
        for (const auto& [name, v] : j.at("elements").items())
            cfg.elements.emplace(name, element_from_json(cfg.F, v, "elements." + name, &cfg.elements));
    const auto a = element_from_json(cfg.F, member(j, "a", "curve"), "curve.a", &cfg.elements);
    const auto b = element_from_json(cfg.F, member(j, "b", "curve"), "curve.b", &cfg.elements);
    const std::size_t bd = j.contains("base_degree") ? j.at("base_degree").get<std::size_t>() : 0;
    std::optional<Int> order;
    if (j.contains("base_order"))
        order = int_from_json(j.at("base_order"), "curve.base_order");
    cfg.E = Curve(a, b, bd, order);
    // Points on an isogeny's codomain ("on": NAME) wait until the isogenies exist.
    std::vector<std::pair<std::string, json>> deferred;
    if (j.contains("points")) {
        for (const auto& [name, v] : j.at("points").items()) {
            const std::string where = "points." + name;
            if (v.is_object() && v.contains("on")) {
                deferred.emplace_back(name, v);
            } else if (v.is_object() && v.contains("field")) {
                const auto T = field_from_json(v.at("field"), where + ".field");
                auto emb = std::make_shared<const FieldEmbedding>(cfg.F, T);
                cfg.points.emplace(name, point_from_json(base_change(cfg.E, *emb), v, where));
                cfg.point_fields.emplace(name, emb);
            } else {
                cfg.points.emplace(name, point_from_json(cfg.E, v, where, &cfg.elements));
            }
        }
    }
    if (j.contains("isogenies")) {
        for (const auto& [name, v] : j.at("isogenies").items()) {
            const std::string where = "isogenies." + name;
            const auto& kname = member(v, "kernel", where).get<std::string>();
            const Point& K = cfg.point(kname);
            if (auto it = cfg.point_fields.find(kname); it != cfg.point_fields.end())
                cfg.isogenies.emplace(name, velu_from_kernel(cfg.E, K, *it->second));
            else
                cfg.isogenies.emplace(name, velu_from_kernel(cfg.E, K));
        }
    }
    for (const auto& [name, v] : deferred) {
        const auto& psi = cfg.isogeny(v.at("on").get<std::string>());
        cfg.points.emplace(name, point_from_json(psi.codomain(), v, "points." + name, &cfg.elements));
    }
    return cfg;
}

inline CurveConfig load_curve_config(const std::string& path) { return curve_config_from_json(load_json_file(path)); }

/// Endomorphism DSL. Atoms apply left to right:
///   endo  := ['-'] term (('+' | '-') term)*
///   term  := int | [int '*'] atom (';' atom)*
///   atom  := frob(e) | scalar(k) | twist(u=expr, v=expr) | isog(NAME) | dual(NAME)
///   expr  := factor (('*' | '/') factor)*
///   factor:= ['-'] primary ['^' ['-'] int]
///   primary := int | NAME | '[' int (',' int)* ']' | '(' expr ')'
/// The chain starts on the domain of its first isogeny or dual atom, else on
/// the configured curve.
class DslParser {
public:
    DslParser(std::string text, const CurveConfig& cfg) : s_(std::move(text)), cfg_(cfg) {}

    Endomorphism parse()
    {
        std::vector<std::pair<Int, std::vector<RawAtom>>> raw;
        skip();
        Int sign = 1;
        if (peek('-')) {
            ++i_;
            sign = -1;
        }
        raw.push_back(term(sign));
        for (skip(); i_ < s_.size(); skip()) {
            if (peek('+'))
                sign = 1;
            else if (peek('-'))
                sign = -1;
            else
                error("expected '+' or '-'");
            ++i_;
            raw.push_back(term(sign));
        }
        const Curve start = start_curve(raw);
        std::vector<Term> terms;
        for (auto& [coeff, atoms] : raw) {
            Chain chain;
            Curve cur = start;
            for (auto& a : atoms) {
                chain.push_back(build(a, cur));
                cur = chain.back().codomain;
            }
            terms.push_back(Term{coeff, std::move(chain)});
        }
        return Endomorphism(start, std::move(terms));
    }

private:
    struct RawAtom {
        std::string kind, name;
        Int k = 0;
        std::size_t u_pos = 0, v_pos = 0, pos = 0;
    };

    [[noreturn]] void error(const std::string& what) const
    {
        schema_fail("endomorphism DSL at column " + std::to_string(i_ + 1) + ": " + what + "\n  " + s_ + "\n  " +
                    std::string(i_, ' ') + "^");
    }

    void skip()
    {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_])))
            ++i_;
    }

    bool peek(char c)
    {
        skip();
        return i_ < s_.size() && s_[i_] == c;
    }

    void expect(char c)
    {
        if (!peek(c))
            error(std::string("expected '") + c + "'");
        ++i_;
    }

    std::string ident()
    {
        skip();
        const std::size_t b = i_;
        while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_'))
            ++i_;
        if (b == i_)
            error("expected a name");
        return s_.substr(b, i_ - b);
    }

    Int integer()
    {
        skip();
        const std::size_t b = i_;
        if (i_ < s_.size() && s_[i_] == '-')
            ++i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_])))
            ++i_;
        if (b == i_ || (s_[b] == '-' && i_ == b + 1))
            error("expected an integer");
        return parse_int(s_.substr(b, i_ - b));
    }

    bool at_digit()
    {
        skip();
        return i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]));
    }

    std::pair<Int, std::vector<RawAtom>> term(const Int& sign)
    {
        Int coeff = sign;
        if (at_digit()) {
            const Int k = integer();
            if (!peek('*'))
                return {sign * k, {}};
            ++i_;
            coeff = sign * k;
        }
        std::vector<RawAtom> atoms{atom()};
        while (peek(';')) {
            ++i_;
            atoms.push_back(atom());
        }
        return {coeff, std::move(atoms)};
    }

    RawAtom atom()
    {
        RawAtom a;
        skip();
        a.pos = i_;
        a.kind = ident();
        expect('(');
        if (a.kind == "frob" || a.kind == "scalar") {
            a.k = integer();
        } else if (a.kind == "isog" || a.kind == "dual") {
            a.name = ident();
        } else if (a.kind == "twist") {
            if (ident() != "u")
                error("expected u=");
            expect('=');
            a.u_pos = i_;
            skip_expr();
            expect(',');
            if (ident() != "v")
                error("expected v=");
            expect('=');
            a.v_pos = i_;
            skip_expr();
        } else {
            i_ = a.pos;
            error("unknown atom '" + a.kind + "'");
        }
        expect(')');
        return a;
    }

    // Twist arguments are evaluated once the working field is known.
    void skip_expr()
    {
        int depth = 0;
        for (; i_ < s_.size(); ++i_) {
            const char c = s_[i_];
            if (c == '(' || c == '[')
                ++depth;
            else if ((c == ')' || c == ']') && depth > 0)
                --depth;
            else if ((c == ',' || c == ')') && depth == 0)
                return;
        }
    }

    Curve start_curve(const std::vector<std::pair<Int, std::vector<RawAtom>>>& raw)
    {
        for (const auto& [c, atoms] : raw) {
            if (atoms.empty())
                continue;
            const auto& a = atoms.front();
            if (a.kind == "isog")
                return cfg_.isogeny(a.name).domain();
            if (a.kind == "dual")
                return cfg_.isogeny(a.name).codomain();
            return cfg_.E;
        }
        return cfg_.E;
    }

    Atom build(const RawAtom& a, const Curve& cur)
    {
        i_ = a.pos;
        if (a.kind == "frob") {
            if (a.k < 1)
                error("Frobenius power must be positive");
            return frobenius_atom(cur, to_u64(a.k));
        }
        if (a.kind == "scalar")
            return scalar_atom(cur, a.k);
        if (a.kind == "isog")
            return isogeny_atom(cfg_.isogeny(a.name), a.name);
        if (a.kind == "dual")
            return dual_atom(cfg_.isogeny(a.name), a.name);
        i_ = a.u_pos;
        const auto u = expr(cur.field());
        i_ = a.v_pos;
        const auto v = expr(cur.field());
        return twist_atom(cur, LinearTwist{u, v});
    }

    FieldElement expr(const Field& F)
    {
        FieldElement r = factor(F);
        for (;;) {
            if (peek('*')) {
                ++i_;
                r = r * factor(F);
            } else if (peek('/')) {
                ++i_;
                const auto d = factor(F);
                if (d.is_zero())
                    error("division by zero");
                r = r / d;
            } else {
                return r;
            }
        }
    }

    FieldElement factor(const Field& F)
    {
        bool neg = false;
        if (peek('-')) {
            ++i_;
            neg = true;
        }
        FieldElement r = primary(F);
        if (peek('^')) {
            ++i_;
            const Int e = integer();
            if (e < 0) {
                if (r.is_zero())
                    error("zero to a negative power");
                r = r.inverse().pow(Int(-e));
            } else {
                r = r.pow(e);
            }
        }
        return neg ? -r : r;
    }

    FieldElement primary(const Field& F)
    {
        skip();
        if (peek('(')) {
            ++i_;
            auto r = expr(F);
            expect(')');
            return r;
        }
        if (peek('[')) {
            ++i_;
            std::vector<std::uint64_t> c;
            const Int p = int_from_u64(F->p());
            for (;;) {
                c.push_back(to_u64(mod(integer(), p)));
                if (peek(']'))
                    break;
                expect(',');
            }
            ++i_;
            if (c.size() > F->degree())
                error("more coefficients than the field degree");
            c.resize(F->degree(), 0);
            return FieldElement(F, c);
        }
        if (at_digit())
            return FieldElement::from_int(F, integer());
        const std::size_t at = i_;
        const auto name = ident();
        auto it = cfg_.elements.find(name);
        if (it == cfg_.elements.end()) {
            i_ = at;
            error("unknown element '" + name + "'");
        }
        if (!same_field(it->second.field(), F))
            error("element '" + name + "' is not in the working field");
        return it->second;
    }

    std::string s_;
    const CurveConfig& cfg_;
    std::size_t i_ = 0;
};

inline Endomorphism parse_endomorphism(const std::string& text, const CurveConfig& cfg) { return DslParser(text, cfg).parse(); }

} // namespace distortion::io
