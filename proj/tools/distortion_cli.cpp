#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <distortion.hpp>

using namespace distortion;
using namespace distortion::io;

namespace {

struct Options {
    std::uint64_t seed = 0;
    std::string curve;
    std::string endo;
    std::string mode = "both";
    std::uint64_t ell = 0;
    std::string m;
    std::size_t degree = 0;
    std::uint64_t k = 0;
    std::string point, P, Q;
    std::string kernel;
    std::string isogeny;
    std::string entry;
    std::uint64_t p = 0;
    std::string a, b, c;
    std::uint64_t bound = 20;
    std::string id;
    std::string dir;
};

/// A curve config file, or a fixture file whose "curve" is used and whose
/// named endomorphisms may stand in for DSL text.
struct Loaded {
    CurveConfig cfg;
    std::map<std::string, std::string> endos;
};

Loaded load_curve(const std::string& path)
{
    const json j = load_json_file(path);
    Loaded out;
    if (j.is_object() && j.contains("checks")) {
        const Fixture f = fixture_from_json(j);
        out.cfg = curve_config_from_json(f.curve);
        out.endos = f.endos;
    } else {
        out.cfg = curve_config_from_json(j);
    }
    return out;
}

Endomorphism load_endo(const Loaded& L, const std::string& text)
{
    if (text.empty())
        schema_fail("--endo is required");
    auto it = L.endos.find(text);
    return parse_endomorphism(it == L.endos.end() ? text : it->second, L.cfg);
}

Int parse_m(const std::string& s)
{
    if (s.empty())
        schema_fail("--m is required");
    const Int m = parse_int(s);
    require(m >= 2, Errc::BadInput, "--m must be at least 2");
    return m;
}

ClassifyMode parse_mode(const std::string& s)
{
    if (s == "legendre")
        return ClassifyMode::Legendre;
    if (s == "eigenlines")
        return ClassifyMode::Eigenlines;
    if (s == "both")
        return ClassifyMode::Both;
    schema_fail("--mode must be legendre, eigenlines or both");
}

json trace_degree_json(const TraceDegree& td)
{
    return json{{"t", int_to_json(td.t)}, {"d", int_to_json(td.d)}, {"D", int_to_json(td.D)}};
}

json isogeny_json(const Isogeny& psi)
{
    const auto& m = psi.maps();
    return json{{"degree", int_to_json(psi.degree())},
                {"domain", curve_to_json(psi.domain())},
                {"codomain", curve_to_json(psi.codomain())},
                {"maps", {{"xn", poly_to_json(m.xn)}, {"xd", poly_to_json(m.xd)}, {"yn", poly_to_json(m.yn)}, {"yd", poly_to_json(m.yd)}}}};
}

json verdict_json(const DistortionVerdict& v)
{
    json j{{"ell", v.ell}, {"outcome", outcome_name(v.outcome)}, {"evidence", v.evidence}};
    j["legendre_value"] = v.legendre_value ? json(*v.legendre_value) : json("NotApplicable");
    j["legendre_ambiguous"] = v.legendre_ambiguous;
    j["eigenvalues"] = v.eigenvalues;
    json lines = json::array();
    for (const auto& P : v.eigenlines)
        lines.push_back(point_to_json(P));
    j["eigenlines"] = lines;
    if (v.matrix)
        j["matrix"] = v.matrix->m;
    if (v.field_extension)
        j["field_extension"] = v.field_extension;
    return j;
}

/// A point of exact order m: project a random point onto the part of the
/// group supported on the primes of m, then scale down to order m.
Point point_of_order(const Curve& E, const Int& m, std::uint64_t seed)
{
    const Int N = group_order(E);
    require(mod(N, m) == 0, Errc::OrderMismatch, "m does not divide #E");
    Int cofactor = N;
    for (Int g = gcd(cofactor, m); g > 1; g = gcd(cofactor, m))
        cofactor /= g;
    const Int support = N / cofactor;
    Rng rng(seed);
    for (int attempt = 0; attempt < 200; ++attempt) {
        const Point R = scalar_mul(cofactor, random_point(E, rng));
        const Int ord = point_order(R, support);
        if (mod(ord, m) != 0)
            continue;
        const Point P = scalar_mul(Int(ord / m), R);
        if (has_exact_order(P, m))
            return P;
    }
    fail(Errc::OrderMismatch, "no point of order " + m.get_str() + " found");
}

json build_json(const CatalogueBuild& b)
{
    return json{{"entry", b.name},
                {"curve", curve_to_json(b.curve)},
                {"endo", b.endo.to_string()},
                {"expected_order", int_to_json(b.expected_order)}};
}

json run_count(const Options& o)
{
    const Loaded L = load_curve(o.curve);
    const Curve& E = L.cfg.E;
    Int q, N;
    if (o.degree) {
        q = pow(int_from_u64(E.field()->p()), static_cast<unsigned long>(o.degree));
        N = order_over_subfield(E, o.degree);
    } else {
        const auto g = frobenius_trace(E, false);
        q = g.q;
        N = g.N;
    }
    const Int t = q + 1 - N;
    return json{{"q", int_to_json(q)},
                {"order", int_to_json(N)},
                {"trace", int_to_json(t)},
                {"supersingular", mod(t, int_from_u64(E.field()->p())) == 0}};
}

json run_trace(const Options& o)
{
    const Loaded L = load_curve(o.curve);
    require(o.k >= 1, Errc::BadInput, "--k must be positive");
    const Endomorphism tr = trace_endomorphism(L.cfg.E, o.k);
    json j{{"k", o.k}, {"endo", tr.to_string()}};
    if (!o.point.empty()) {
        const Point& P = L.cfg.point(o.point);
        j["point"] = point_to_json(P);
        j["image"] = point_to_json(trace_map(P, o.k));
    }
    return j;
}

json run_pair(const Options& o)
{
    const Loaded L = load_curve(o.curve);
    const Int m = parse_m(o.m);
    Rng rng(o.seed);
    const Point& P = L.cfg.point(o.P);
    const Point& Q = L.cfg.point(o.Q);
    const PairingValue v = o.endo.empty() ? weil_pairing(P, Q, m, rng)
                                          : modified_weil_pairing(P, Q, m, load_endo(L, o.endo), rng);
    return json{{"m", int_to_json(m)}, {"value", element_to_json(v.value)}, {"order", int_to_json(root_of_unity_order(v))}};
}

json run_velu(const Options& o)
{
    const Loaded L = load_curve(o.curve);
    if (!o.isogeny.empty())
        return isogeny_json(L.cfg.isogeny(o.isogeny));
    if (o.kernel.empty())
        schema_fail("velu needs --kernel or --isogeny");
    const Point& K = L.cfg.point(o.kernel);
    auto it = L.cfg.point_fields.find(o.kernel);
    return isogeny_json(it == L.cfg.point_fields.end() ? velu_from_kernel(L.cfg.E, K)
                                                       : velu_from_kernel(L.cfg.E, K, *it->second));
}

json run_endo(const Options& o)
{
    const Loaded L = load_curve(o.curve);
    const Endomorphism phi = load_endo(L, o.endo);
    json j{{"endo", phi.to_string()}};
    j.update(trace_degree_json(endo_trace_degree(phi)));
    if (!o.point.empty())
        j["image"] = point_to_json(phi(L.cfg.point(o.point)));
    return j;
}

json run_classify(const Options& o)
{
    const Loaded L = load_curve(o.curve);
    require(o.ell >= 2, Errc::BadInput, "--ell is required");
    const Endomorphism phi = load_endo(L, o.endo);
    return json{{"endo", phi.to_string()}, {"verdict", verdict_json(classify_prime(phi, o.ell, parse_mode(o.mode)))}};
}

json run_transfer(const Options& o)
{
    const Loaded L = load_curve(o.curve);
    if (o.isogeny.empty())
        schema_fail("transfer needs --isogeny");
    const Isogeny& psi = L.cfg.isogeny(o.isogeny);
    const Endomorphism phi2 = transfer(psi, load_endo(L, o.endo), o.isogeny);
    json j{{"codomain", curve_to_json(psi.codomain())}, {"endo", phi2.to_string()}};
    j.update(trace_degree_json(endo_trace_degree(phi2)));
    if (o.ell)
        j["verdict"] = verdict_json(classify_prime(phi2, o.ell, parse_mode(o.mode)));
    return j;
}

json run_catalogue_list()
{
    json out = json::array();
    for (const auto& e : catalogue_entries())
        out.push_back({{"entry", e.name}, {"map", e.map}, {"condition", e.condition}, {"group_order", e.group_order}});
    return json{{"entries", out}};
}

json run_catalogue_build(const Options& o)
{
    if (o.entry == "ord_type1" || o.entry == "ord_type2") {
        const auto builds = o.entry == "ord_type1" ? build_ord_type1(o.bound) : build_ord_type2(o.bound);
        json out = json::array();
        for (const auto& b : builds) {
            json j = build_json(b.build);
            j["r"] = b.r;
            j["p"] = b.p;
            out.push_back(j);
        }
        return json{{"bound", o.bound}, {"builds", out}};
    }
    if (o.a.empty())
        schema_fail("catalogue build needs --a");
    if (o.entry == "ss_i")
        return build_json(build_ss_i(o.p, parse_int(o.a)));
    if (o.entry == "ss_zeta")
        return build_json(build_ss_zeta(o.p, parse_int(o.a)));
    if (o.entry == "ss_pp2") {
        require(is_prime(int_from_u64(o.p)), Errc::NotPrime, "--p must be prime");
        const Field F2 = extension(FieldSpec::prime(o.p), 2)->target();
        return build_json(build_ss_pp2(element_from_json(F2, parse_json(o.a, "--a"), "--a")));
    }
    schema_fail("unknown catalogue entry \"" + o.entry + "\"");
}

json run_ddh(const Options& o)
{
    const Loaded L = load_curve(o.curve);
    const Int m = parse_m(o.m);
    const Endomorphism phi = load_endo(L, o.endo);
    const Point P = o.point.empty() ? point_of_order(phi.curve(), m, o.seed) : L.cfg.point(o.point);
    std::optional<DdhScalars> scalars;
    const int given = !o.a.empty() + !o.b.empty() + !o.c.empty();
    if (given == 3)
        scalars = DdhScalars{parse_int(o.a), parse_int(o.b), parse_int(o.c)};
    else if (given != 0)
        schema_fail("give all of --a, --b, --c or none");
    const DdhInstance inst = generate_instance(P, m, phi, scalars, o.seed);
    json j{{"m", int_to_json(m)}, {"P", point_to_json(P)}, {"valid", decide_ddh(inst, o.seed)}};
    if (scalars) {
        j["a"] = int_to_json(scalars->a);
        j["b"] = int_to_json(scalars->b);
        j["c"] = int_to_json(scalars->c);
    }
    return j;
}

json run_verify(const Options& o, bool& all_pass)
{
    const std::string dir = o.dir.empty() ? default_fixture_dir() : o.dir;
    json out = json::array();
    all_pass = true;
    bool found = false;
    for (const auto& f : load_fixture_dir(dir)) {
        if (!o.id.empty() && f.id != o.id)
            continue;
        found = true;
        json checks = json::array();
        std::size_t failed = 0;
        for (const auto& r : FixtureRunner(f).run()) {
            json c{{"name", r.name}, {"pass", r.pass}, {"got", r.got}, {"expected", r.expected}};
            if (!r.error.empty())
                c["error"] = r.error;
            failed += !r.pass;
            checks.push_back(c);
        }
        all_pass = all_pass && failed == 0;
        out.push_back({{"id", f.id}, {"pass", failed == 0}, {"failed", failed}, {"checks", checks}});
    }
    if (!found)
        schema_fail(o.id.empty() ? "no fixtures in " + dir : "no fixture with id " + o.id);
    return json{{"fixtures", out}, {"pass", all_pass}};
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Distortion maps on elliptic curves over finite fields"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--seed", o.seed, "random seed (printed in every output)");

    const auto curve_opt = [&](CLI::App* s) { s->add_option("--curve", o.curve, "curve config or fixture file")->required(); };
    const auto endo_opt = [&](CLI::App* s, bool required) {
        auto* opt = s->add_option("--endo", o.endo, "endomorphism DSL, or a name from a fixture file");
        if (required)
            opt->required();
    };

    auto* count = app.add_subcommand("count", "group order and Frobenius trace");
    curve_opt(count);
    count->add_option("--degree", o.degree, "count over F_{p^degree} instead of the working field");

    auto* trace = app.add_subcommand("trace", "trace map sum of pi^i for i < k");
    curve_opt(trace);
    trace->add_option("--k", o.k, "number of Frobenius conjugates")->required();
    trace->add_option("--point", o.point, "point name to evaluate");

    auto* pair = app.add_subcommand("pair", "Weil pairing, or modified Weil pairing with --endo");
    curve_opt(pair);
    endo_opt(pair, false);
    pair->add_option("--P", o.P, "first point name")->required();
    pair->add_option("--Q", o.Q, "second point name")->required();
    pair->add_option("--m", o.m, "pairing order")->required();

    auto* velu = app.add_subcommand("velu", "isogeny from a kernel point");
    curve_opt(velu);
    velu->add_option("--kernel", o.kernel, "kernel point name");
    velu->add_option("--isogeny", o.isogeny, "configured isogeny name");

    auto* endo = app.add_subcommand("endo", "trace, degree and discriminant of an endomorphism");
    curve_opt(endo);
    endo_opt(endo, true);
    endo->add_option("--point", o.point, "point name to evaluate");

    auto* classify = app.add_subcommand("classify", "distortion verdict on E[ell]");
    curve_opt(classify);
    endo_opt(classify, true);
    classify->add_option("--ell", o.ell, "prime ell")->required();
    classify->add_option("--mode", o.mode, "legendre, eigenlines or both");

    auto* transfer_cmd = app.add_subcommand("transfer", "move an endomorphism along a configured isogeny");
    curve_opt(transfer_cmd);
    endo_opt(transfer_cmd, true);
    transfer_cmd->add_option("--isogeny", o.isogeny, "configured isogeny name")->required();
    transfer_cmd->add_option("--ell", o.ell, "classify the result on E'[ell]");
    transfer_cmd->add_option("--mode", o.mode, "legendre, eigenlines or both");

    auto* catalogue = app.add_subcommand("catalogue", "known distortion maps");
    catalogue->require_subcommand(1);
    auto* cat_list = catalogue->add_subcommand("list", "list catalogue entries");
    auto* cat_build = catalogue->add_subcommand("build", "build a catalogue curve and map");
    cat_build->add_option("--entry", o.entry, "entry name")->required();
    cat_build->add_option("--p", o.p, "characteristic");
    cat_build->add_option("--a", o.a, "curve coefficient (integer, or JSON coefficient array for ss_pp2)");
    cat_build->add_option("--bound", o.bound, "search bound on r for ordinary entries");

    auto* ddh = app.add_subcommand("ddh", "decide a Diffie-Hellman tuple with the modified pairing");
    curve_opt(ddh);
    endo_opt(ddh, true);
    ddh->add_option("--m", o.m, "order of P")->required();
    ddh->add_option("--point", o.point, "point name (default: a seeded point of order m)");
    ddh->add_option("--a", o.a, "scalar a");
    ddh->add_option("--b", o.b, "scalar b");
    ddh->add_option("--c", o.c, "scalar c");

    auto* verify = app.add_subcommand("verify-examples", "run the golden example fixtures");
    verify->add_option("--id", o.id, "run one fixture");
    verify->add_option("--dir", o.dir, "fixture directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e);
        app.exit(e);
        return 2;
    }

    json out;
    int code = 0;
    try {
        if (*count)
            out = run_count(o);
        else if (*trace)
            out = run_trace(o);
        else if (*pair)
            out = run_pair(o);
        else if (*velu)
            out = run_velu(o);
        else if (*endo)
            out = run_endo(o);
        else if (*classify)
            out = run_classify(o);
        else if (*transfer_cmd)
            out = run_transfer(o);
        else if (*cat_list)
            out = run_catalogue_list();
        else if (*cat_build)
            out = run_catalogue_build(o);
        else if (*ddh)
            out = run_ddh(o);
        else if (*verify) {
            bool all_pass = true;
            out = run_verify(o, all_pass);
            code = all_pass ? 0 : 1;
        }
    } catch (const Error& e) {
        out = json{{"error", errc_name(e.code())}, {"message", e.what()}};
        code = e.code() == Errc::SchemaError ? 2 : 1;
    } catch (const std::exception& e) {
        out = json{{"error", "InternalError"}, {"message", e.what()}};
        code = 1;
    }
    out["seed"] = o.seed;
    std::cout << out.dump(2) << '\n';
    return code;
}
