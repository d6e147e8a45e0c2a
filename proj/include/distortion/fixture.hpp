#pragma once

#include <algorithm>
#include <filesystem>

#include "distortion/distortion.hpp"
#include "distortion/io.hpp"

namespace distortion::io {

enum class Compare { Exact, SetEquality, Boolean };

inline Compare compare_from_string(const std::string& s, const std::string& where)
{
    if (s == "exact")
        return Compare::Exact;
    if (s == "set-equality")
        return Compare::SetEquality;
    if (s == "boolean")
        return Compare::Boolean;
    schema_fail(where + ": unknown comparison mode \"" + s + "\"");
}

inline std::string compare_name(Compare c)
{
    switch (c) {
    case Compare::Exact: return "exact";
    case Compare::SetEquality: return "set-equality";
    case Compare::Boolean: return "boolean";
    }
    return "exact";
}

struct Check {
    std::string name;
    std::string kind;
    json args = json::object();
    json expected;
    Compare mode = Compare::Exact;
    std::string provenance;
};

struct Fixture {
    std::string id;
    std::string description;
    json curve;                               // raw curve config
    std::map<std::string, std::string> endos; // name -> DSL
    std::vector<Check> checks;
};

inline Fixture fixture_from_json(const json& j)
{
    Fixture f;
    f.id = member(j, "id", "fixture").get<std::string>();
    const std::string where = "fixture " + f.id;
    if (j.contains("description"))
        f.description = j.at("description").get<std::string>();
    f.curve = member(j, "curve", where);
    if (j.contains("endomorphisms"))
        for (const auto& [name, v] : j.at("endomorphisms").items())
            f.endos.emplace(name, v.get<std::string>());
    const auto& checks = member(j, "checks", where);
    if (!checks.is_array() || checks.empty())
        schema_fail(where + ": \"checks\" must be a non-empty array");
    for (const auto& c : checks) {
        Check k;
        k.name = member(c, "name", where + " check").get<std::string>();
        const std::string cw = where + " check " + k.name;
        k.kind = member(c, "kind", cw).get<std::string>();
        if (c.contains("args"))
            k.args = c.at("args");
        k.expected = member(c, "expected", cw);
        k.mode = compare_from_string(c.value("mode", std::string("exact")), cw);
        if (!c.contains("provenance") || !c.at("provenance").is_string() || c.at("provenance").get<std::string>().empty())
            schema_fail(cw + ": every expectation needs a provenance note");
        k.provenance = c.at("provenance").get<std::string>();
        f.checks.push_back(std::move(k));
    }
    return f;
}

inline json fixture_to_json(const Fixture& f)
{
    json j{{"id", f.id}, {"description", f.description}, {"curve", f.curve}};
    json e = json::object();
    for (const auto& [k, v] : f.endos)
        e[k] = v;
    j["endomorphisms"] = e;
    json cs = json::array();
    for (const auto& c : f.checks)
        cs.push_back({{"name", c.name}, {"kind", c.kind}, {"args", c.args}, {"expected", c.expected}, {"mode", compare_name(c.mode)}, {"provenance", c.provenance}});
    j["checks"] = cs;
    return j;
}

inline Fixture load_fixture(const std::string& path) { return fixture_from_json(load_json_file(path)); }

struct CheckOutcome {
    std::string name;
    bool pass = false;
    json got;
    json expected;
    std::string error;
};

inline bool compare_values(const json& got, const json& want, Compare mode)
{
    switch (mode) {
    case Compare::Boolean: return got.is_boolean() && want.is_boolean() && got == want;
    case Compare::SetEquality: {
        if (!got.is_array() || !want.is_array())
            return false;
        auto a = got.get<std::vector<json>>(), b = want.get<std::vector<json>>();
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
        b.erase(std::unique(b.begin(), b.end()), b.end());
        return a == b;
    }
    case Compare::Exact: return got == want;
    }
    return false;
}

/// Evaluation context for one fixture.
class FixtureRunner {
public:
    explicit FixtureRunner(const Fixture& f) : f_(f), cfg_(curve_config_from_json(f.curve))
    {
        for (const auto& [name, dsl] : f.endos)
            endos_.emplace(name, parse_endomorphism(dsl, cfg_));
    }

    const CurveConfig& config() const { return cfg_; }

    std::vector<CheckOutcome> run() const
    {
        std::vector<CheckOutcome> out;
        for (const auto& c : f_.checks) {
            CheckOutcome o{c.name, false, nullptr, c.expected, {}};
            try {
                o.got = evaluate(c);
                o.pass = compare_values(o.got, c.expected, c.mode);
            } catch (const std::exception& e) {
                o.error = e.what();
            }
            out.push_back(std::move(o));
        }
        return out;
    }

    const Endomorphism& endo(const json& args) const
    {
        const auto name = member(args, "endo", "check args").get<std::string>();
        auto it = endos_.find(name);
        if (it == endos_.end())
            schema_fail("unknown endomorphism \"" + name + "\"");
        return it->second;
    }

    json evaluate(const Check& c) const
    {
        const json& a = c.args;
        const auto num = [&](const char* key) { return int_from_json(member(a, key, c.name), c.name + "." + key); };
        const auto u64 = [&](const char* key) { return to_u64(num(key)); };
        if (c.kind == "group_order" || c.kind == "trace") {
            if (a.contains("degree")) {
                const std::size_t d = u64("degree");
                const Int N = order_over_subfield(cfg_.E, d);
                const Int q = pow(int_from_u64(cfg_.F->p()), static_cast<unsigned long>(d));
                return int_to_json(c.kind == "trace" ? Int(q + 1 - N) : N);
            }
            const auto g = frobenius_trace(cfg_.E, false);
            const std::uint64_t n = a.contains("extension") ? u64("extension") : 1;
            const Int t = trace_over_extension(g.t, g.q, n);
            return int_to_json(c.kind == "trace" ? t : Int(pow(g.q, static_cast<unsigned long>(n)) + 1 - t));
        }
        if (c.kind == "trace_degree") {
            const auto td = endo_trace_degree(endo(a));
            return json{{"t", int_to_json(td.t)}, {"d", int_to_json(td.d)}, {"D", int_to_json(td.D)}};
        }
        if (c.kind == "legendre")
            return legendre(num("D"), num("ell"));
        if (c.kind == "distorts_torsion")
            return is_distortion_for_torsion(endo(a), num("m"));
        if (c.kind == "distorts_point")
            return is_distortion_for_point(endo(a), point(a, "point"), num("m"));
        if (c.kind == "evaluate") {
            if (a.contains("isogeny"))
                return point_to_json(isogeny(a)(point(a, "point")));
            return point_to_json(endo(a)(point(a, "point")));
        }
        if (c.kind == "pairing") {
            const Point& P = point(a, "P");
            Point Q = point(a, "Q");
            if (a.contains("endo"))
                Q = endo(a)(Q);
            return element_to_json(weil_pairing(P, Q, num("m")).value);
        }
        if (c.kind == "codomain") {
            const auto& E = isogeny(a).codomain();
            return json{{"a", element_to_json(E.a())}, {"b", element_to_json(E.b())}};
        }
        if (c.kind == "isogeny_maps") {
            const Isogeny psi = a.value("dual", false) ? dual(isogeny(a)) : isogeny(a);
            const auto& m = psi.maps();
            return json{{"xn", poly_to_json(m.xn)}, {"xd", poly_to_json(m.xd)}, {"yn", poly_to_json(m.yn)}, {"yd", poly_to_json(m.yd)}};
        }
        if (c.kind == "twist_codomain") {
            const auto& E = isogeny(a).codomain();
            const LinearTwist tw{element_from_json(E.field(), member(a, "u", c.name), c.name + ".u", &cfg_.elements),
                                 element_from_json(E.field(), member(a, "v", c.name), c.name + ".v", &cfg_.elements)};
            const auto T = twist_codomain(E, tw);
            return json{{"a", element_to_json(T.a())}, {"b", element_to_json(T.b())}};
        }
        if (c.kind == "classify") {
            const auto mode = a.value("mode", std::string("both"));
            const auto m = mode == "legendre" ? ClassifyMode::Legendre : mode == "eigenlines" ? ClassifyMode::Eigenlines : ClassifyMode::Both;
            return outcome_name(classify_prime(endo(a), u64("ell"), m).outcome);
        }
        if (c.kind == "eigenvalues")
            return classify_prime(endo(a), u64("ell"), ClassifyMode::Eigenlines).eigenvalues;
        if (c.kind == "torsion_matrix") {
            const std::uint64_t ell = u64("ell");
            const auto frame = require_frame(cfg_.E, ell);
            const auto M = endo_matrix_mod_ell(base_change(endo(a), *frame.emb), ell, frame.basis);
            const auto M2 = M * M;
            return json{{"zero", M.is_zero()}, {"square_zero", M2.is_zero()}, {"square_scalar", M2.is_scalar() ? json(M2.m[0]) : json(nullptr)}};
        }
        if (c.kind == "scan_torsion") {
            const std::uint64_t ell = u64("ell");
            const auto& phi = endo(a);
            const auto frame = require_frame(phi.curve(), ell);
            const auto phiT = base_change(phi, *frame.emb);
            const std::size_t sub = a.contains("subfield_degree") ? a.at("subfield_degree").get<std::size_t>() : 0;
            std::size_t nontrivial = 0, distorted = 0;
            for (const auto& R : enumerate_torsion(frame.basis.first, frame.basis.second, ell)) {
                if (R.is_infinity() || (sub && !(R.x().in_subfield(sub) && R.y().in_subfield(sub))))
                    continue;
                ++nontrivial;
                distorted += has_exact_order(R, int_from_u64(ell)) && !in_cyclic_subgroup(phiT(R), R, ell) ? 1 : 0;
            }
            return json{{"nontrivial", nontrivial}, {"distorted", distorted}};
        }
        schema_fail("unknown check kind \"" + c.kind + "\"");
    }

private:
    const Point& point(const json& a, const char* key) const { return cfg_.point(member(a, key, "check args").get<std::string>()); }
    const Isogeny& isogeny(const json& a) const { return cfg_.isogeny(member(a, "isogeny", "check args").get<std::string>()); }

    const Fixture& f_;
    CurveConfig cfg_;
    std::map<std::string, Endomorphism> endos_;
};

inline std::string default_fixture_dir()
{
#ifdef DISTORTION_FIXTURE_DIR
    return DISTORTION_FIXTURE_DIR;
#else
    return "fixtures";
#endif
}

/// Fixture files in a directory, sorted by id.
inline std::vector<Fixture> load_fixture_dir(const std::string& dir)
{
    std::vector<Fixture> out;
    if (!std::filesystem::is_directory(dir))
        schema_fail("fixture directory " + dir + " does not exist");
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.path().extension() == ".json")
            out.push_back(load_fixture(e.path().string()));
    std::sort(out.begin(), out.end(), [](const Fixture& a, const Fixture& b) { return a.id < b.id; });
    return out;
}

} // namespace distortion::io
