#include "urysohn/generic.hpp"
#include "urysohn/io.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

using namespace urysohn;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kFails = 1;
constexpr int kUsage = 2;

struct Options {
    std::string monoid_file;
    std::string builtin_name;
    std::vector<std::string> spaces;
    std::string format = "text";
    std::uint64_t seed = 0;
    std::size_t size = 10;
    std::size_t size_bound = 1;
    std::size_t max_base = 3;
    long denominator = 0;
    std::string bound;
    std::string mode = "disjoint";
    std::string phi_file;
    std::string base;
    std::string katetov;
    std::vector<std::string> assign;
    std::vector<std::string> args;
};

class UsageError : public Error {
public:
    using Error::Error;
};

DistanceMonoidSpec load_monoid(const Options& o) {
    if (!o.monoid_file.empty() && !o.builtin_name.empty()) {
        throw UsageError("give only one of --monoid and --builtin");
    }
    if (!o.monoid_file.empty()) {
        return monoid_from_json(read_json_file(o.monoid_file));
    }
    if (!o.builtin_name.empty()) {
        return builtin(o.builtin_name);
    }
    if (!o.spaces.empty()) {
        return space_from_json(read_json_file(o.spaces.front())).spec();
    }
    throw UsageError("a monoid is required (--monoid FILE or --builtin NAME)");
}

FiniteMetricSpace load_space(const Options& o, std::size_t i = 0) {
    if (o.spaces.size() <= i) {
        throw UsageError("missing --space FILE");
    }
    return space_from_json(read_json_file(o.spaces[i]));
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) {
        auto b = item.find_first_not_of(' ');
        auto e = item.find_last_not_of(' ');
        if (b != std::string::npos) {
            out.push_back(item.substr(b, e - b + 1));
        }
    }
    return out;
}

std::vector<Rational> fragment_for(const DistanceMonoidSpec& spec, const Options& o) {
    std::optional<long> den;
    if (o.denominator > 0) {
        den = o.denominator;
    }
    std::optional<Rational> bound;
    if (!o.bound.empty()) {
        bound = Rational::from_string(o.bound);
    }
    return fragment_elements(spec, den, bound);
}

std::string matrix_text(const FiniteMetricSpace& s) {
    std::vector<std::vector<std::string>> cells;
    std::size_t width = 0;
    for (const auto& p : s.points()) {
        width = std::max(width, p.size());
    }
    for (std::size_t i = 0; i < s.size(); ++i) {
        cells.emplace_back();
        for (std::size_t j = 0; j < s.size(); ++j) {
            cells.back().push_back(format_value(s.spec(), s.d(i, j)));
            width = std::max(width, cells.back().back().size());
        }
    }
    auto pad = [&](const std::string& t) { return std::string(width + 1 - t.size(), ' ') + t; };
    std::string out = std::string(width + 1, ' ');
    for (const auto& p : s.points()) {
        out += pad(p);
    }
    out += "\n";
    for (std::size_t i = 0; i < s.size(); ++i) {
        out += pad(s.points()[i]);
        for (const auto& c : cells[i]) {
            out += pad(c);
        }
        out += "\n";
    }
    return out;
}

json tuple_json(const DistanceMonoidSpec& spec, const std::vector<Rational>& t) {
    json out = json::array();
    for (const auto& r : t) {
        out.push_back(spec.format_element(r));
    }
    return out;
}

std::string tuple_text(const DistanceMonoidSpec& spec, const std::vector<Rational>& t) {
    std::string out = "(";
    for (std::size_t i = 0; i < t.size(); ++i) {
        out += (i ? "," : "") + spec.format_element(t[i]);
    }
    return out + ")";
}

// Report: text lines plus the JSON document, printed according to --format.
struct Report {
    std::string command;
    int code = kOk;
    std::string text;
    json doc = json::object();
};

int emit(const Options& o, Report r) {
    if (o.format == "json") {
        r.doc["command"] = r.command;
        r.doc["ok"] = r.code == kOk;
        std::cout << r.doc.dump(2) << "\n";
    } else {
        std::cout << r.text;
        if (!r.text.empty() && r.text.back() != '\n') {
            std::cout << "\n";
        }
    }
    return r.code;
}

Report check_monoid(const Options& o) {
    auto spec = load_monoid(o);
    Report r{"check-monoid"};
    auto magma = check_magma_axioms(spec, o.seed);
    r.doc["kind"] = to_string(spec.kind());
    r.doc["magma_axioms"] = magma.passed;
    if (magma.passed) {
        r.text += "magma axioms: pass\n";
    } else {
        const auto& v = magma.violations.front();
        r.text += "magma axioms: fail " + v.axiom + " " + tuple_text(spec, v.tuple) + "\n";
        r.doc["violation"] = {{"axiom", v.axiom}, {"tuple", tuple_json(spec, v.tuple)}};
        r.code = kFails;
    }
    for (const auto& n : magma.notes) {
        r.text += "note: " + n + "\n";
    }
    r.doc["notes"] = magma.notes;
    if (!magma.passed) {
        return r;
    }
    if (spec.kind() == MonoidKind::IntervalTruncatedAdd) {
        auto w = check_sum_complete(spec.carrier());
        r.doc["sum_complete"] = !w;
        r.text += w ? "sum complete: no " + tuple_text(spec, {w->first, w->second}) + "\n" : "sum complete: yes\n";
    }
    auto assoc = check_associativity(spec, o.seed);
    r.doc["associative"] = !assoc;
    if (assoc) {
        std::vector<Rational> t(assoc->begin(), assoc->end());
        r.text += "associativity: fail " + tuple_text(spec, t) + "\n";
        r.doc["associativity_witness"] = tuple_json(spec, t);
        r.code = kFails;
        return r;
    }
    r.text += "associativity: pass\n";
    auto flags = classify_monoid(spec);
    std::vector<std::string> names;
    if (flags.right_closed) {
        names.push_back("right_closed");
    }
    if (flags.ultrametric) {
        names.push_back("ultrametric");
    }
    if (flags.group_like) {
        names.push_back("group_like");
    }
    r.doc["flags"] = names;
    std::string joined;
    for (const auto& n : names) {
        joined += " " + n;
    }
    r.text += "flags:" + (joined.empty() ? std::string(" none") : joined) + "\n";
    return r;
}

Report star_op(const Options& o, bool add) {
    auto spec = load_monoid(o);
    if (o.args.size() != 2) {
        throw UsageError("expected two values");
    }
    auto a = parse_value(spec, o.args[0]);
    auto b = parse_value(spec, o.args[1]);
    auto v = add ? star_add(spec, a, b) : star_diff(spec, a, b);
    Report r{add ? "star-add" : "star-diff"};
    r.text = format_value(spec, v);
    r.doc["result"] = r.text;
    return r;
}

Report triangle(const Options& o) {
    auto spec = load_monoid(o);
    if (o.args.size() != 3) {
        throw UsageError("expected three values");
    }
    auto a = parse_value(spec, o.args[0]);
    auto b = parse_value(spec, o.args[1]);
    auto c = parse_value(spec, o.args[2]);
    bool ok = is_triangle(spec, a, b, c);
    auto iv = triangle_interval(spec, b, c);
    Report r{"triangle", ok ? kOk : kFails};
    r.text = std::string(ok ? "triangle" : "not a triangle") + ": first side must lie in [" +
             format_value(spec, iv.lo) + ", " + format_value(spec, iv.hi) + "]";
    r.doc["triangle"] = ok;
    r.doc["range"] = {format_value(spec, iv.lo), format_value(spec, iv.hi)};
    return r;
}

Report four_values(const Options& o) {
    auto spec = load_monoid(o);
    auto rep = four_values_search(spec);
    Report r{"four-values"};
    r.doc["exhaustive"] = rep.exhaustive;
    if (rep.witness) {
        r.code = kFails;
        r.text = "fails at " + format_quadruple(spec, *rep.witness);
        r.doc["witness"] = format_quadruple(spec, *rep.witness);
    } else {
        r.text = rep.exhaustive ? "pass" : "pass (critical sample)";
    }
    return r;
}

Report amalgamate(const Options& o) {
    if (o.spaces.size() != 2) {
        throw UsageError("amalgamate needs --space twice");
    }
    auto a = load_space(o, 0);
    auto b = load_space(o, 1);
    Report r{"amalgamate"};
    try {
        auto m = o.mode == "free" ? free_amalgam(a, b) : disjoint_amalgam(a, b);
        auto bad = validate_metric(m);
        r.doc["space"] = space_to_json(m);
        r.text = matrix_text(m);
        r.doc["metric"] = bad.empty();
        if (!bad.empty()) {
            r.code = kFails;
            std::string pts;
            for (auto i : bad.front().points) {
                pts += (pts.empty() ? "" : ",") + m.points()[i];
            }
            r.text += "not metric: " + bad.front().rule + " at (" + pts + ")\n";
            r.doc["violation"] = {{"rule", bad.front().rule}, {"points", split(pts, ',')}};
        }
    } catch (const AmalgamationFailure& e) {
        r.code = kFails;
        r.text = std::string("amalgamation fails: ") + e.what() + " " + format_quadruple(a.spec(), e.quadruple());
        r.doc["witness"] = format_quadruple(a.spec(), e.quadruple());
    }
    return r;
}

Interval parse_interval(const DistanceMonoidSpec& spec, const std::string& text) {
    return parse_formula(spec, "d(x,y) in " + text).interval;
}

Report approx_check(const Options& o) {
    auto space = load_space(o);
    const auto& spec = space.spec();
    if (o.phi_file.empty()) {
        throw UsageError("approx-check needs --phi FILE");
    }
    auto j = read_json_file(o.phi_file);
    if (!j.is_object()) {
        throw SchemaError("", "expected an object mapping values to intervals");
    }
    ValueApproximation phi;
    phi.set(ExtendedValue::principal(Rational(0)), Interval::point_zero());
    for (const auto& [key, val] : j.items()) {
        if (!val.is_string()) {
            throw SchemaError("/" + key, "expected an interval string");
        }
        phi.set(parse_value(spec, key), parse_interval(spec, val.get<std::string>()));
    }
    auto m = approximately_metric_check(space, phi);
    Report r{"approx-check", m ? kOk : kFails};
    r.doc["feasible"] = m.has_value();
    if (!m) {
        r.text = "infeasible";
        return r;
    }
    FiniteMetricSpace out(spec, space.points());
    for (std::size_t i = 0; i < space.size(); ++i) {
        for (std::size_t k = i + 1; k < space.size(); ++k) {
            out.set(i, k, ExtendedValue::principal((*m)[i][k]));
        }
    }
    r.text = "feasible\n" + matrix_text(out);
    r.doc["space"] = space_to_json(out);
    return r;
}

Report grow(const Options& o) {
    auto spec = load_monoid(o);
    GrowthOptions g;
    g.max_base = o.max_base;
    if (o.denominator > 0) {
        g.denominator = o.denominator;
    }
    if (!o.bound.empty()) {
        g.bound = Rational::from_string(o.bound);
    }
    auto res = grow_generic(spec, o.size, o.seed, g);
    Report r{"grow"};
    r.text = matrix_text(res.space) + "closed prefix: " + std::to_string(res.closed_prefix) +
             "\nobligations processed: " + std::to_string(res.realized.size()) + "\n";
    r.doc["space"] = space_to_json(res.space);
    r.doc["closed_prefix"] = res.closed_prefix;
    r.doc["obligations"] = res.realized.size();
    return r;
}

Report check_extension(const Options& o) {
    auto space = load_space(o);
    const auto& spec = space.spec();
    auto labels = split(o.base, ',');
    auto values = split(o.katetov, ',');
    if (labels.empty() || labels.size() != values.size()) {
        throw UsageError("--base and --katetov must list the same number of entries");
    }
    std::vector<std::size_t> idx;
    for (const auto& l : labels) {
        auto i = space.index_of(l);
        if (!i) {
            throw UsageError("unknown point '" + l + "'");
        }
        idx.push_back(*i);
    }
    KatetovMap f;
    for (const auto& v : values) {
        f.push_back(parse_value(spec, v));
    }
    auto scheme = canonical_scheme(space.subspace(idx), f);
    auto bad = check_extension_axiom(space, scheme);
    Report r{"check-extension", bad ? kFails : kOk};
    r.doc["axiom"] = print_formula(spec, extension_axiom(scheme));
    r.text = r.doc["axiom"].get<std::string>() + "\n";
    if (bad) {
        std::vector<std::string> names;
        std::string t;
        for (auto i : *bad) {
            names.push_back(space.points()[i]);
            t += (t.empty() ? "" : ",") + space.points()[i];
        }
        r.text += "counterexample: (" + t + ")";
        r.doc["counterexample"] = names;
    } else {
        r.text += "holds";
    }
    return r;
}

Report check_qe(const Options& o) {
    auto spec = load_monoid(o);
    auto d = qe_decision(spec);
    Report r{"check-qe"};
    switch (d.verdict) {
    case QeVerdict::Yes:
        r.text = "yes (" + d.reason + ")";
        r.doc["verdict"] = "yes";
        break;
    case QeVerdict::No: {
        r.code = kFails;
        const auto& w = *d.witness;
        std::string wt = "alpha=" + format_value(spec, w.alpha) + " s=" + spec.format_element(w.s) +
                         " lhs=" + format_value(spec, w.lhs) + " rhs=" + format_value(spec, w.rhs);
        r.text = "no " + wt;
        r.doc["verdict"] = "no";
        r.doc["witness"] = {{"alpha", format_value(spec, w.alpha)},
                            {"s", spec.format_element(w.s)},
                            {"lhs", format_value(spec, w.lhs)},
                            {"rhs", format_value(spec, w.rhs)}};
        break;
    }
    case QeVerdict::Unknown:
        r.code = kFails;
        r.text = "unknown (" + d.reason + ")";
        r.doc["verdict"] = "unknown";
        break;
    }
    r.doc["reason"] = d.reason;
    return r;
}

Report gen_axioms(const Options& o) {
    auto spec = load_monoid(o);
    auto axioms = generate_axioms(spec, o.size_bound, fragment_for(spec, o));
    Report r{"gen-axioms"};
    json list = json::array();
    for (const auto& a : axioms) {
        auto t = print_formula(spec, a);
        r.text += t + "\n";
        list.push_back(t);
    }
    r.doc["axioms"] = std::move(list);
    return r;
}

Report eval_formula(const Options& o) {
    auto space = load_space(o);
    if (o.args.size() != 1) {
        throw UsageError("expected one formula");
    }
    auto f = parse_formula(space.spec(), o.args[0]);
    Assignment asg;
    for (const auto& a : o.assign) {
        auto eq = a.find('=');
        if (eq == std::string::npos) {
            throw UsageError("--assign expects var=point");
        }
        auto p = space.index_of(a.substr(eq + 1));
        if (!p) {
            throw UsageError("unknown point '" + a.substr(eq + 1) + "'");
        }
        asg[a.substr(0, eq)] = *p;
    }
    bool value = eval(space, f, asg);
    Report r{"eval-formula", value ? kOk : kFails};
    r.text = value ? "true" : "false";
    r.doc["formula"] = print_formula(space.spec(), f);
    r.doc["value"] = value;
    return r;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generalized metric spaces over distance monoids"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub, bool monoid, bool space) {
        sub->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
        sub->add_option("--seed", o.seed, "random seed");
        if (monoid) {
            sub->add_option("--monoid", o.monoid_file, "MonoidFile");
            sub->add_option("--builtin", o.builtin_name, "builtin monoid name");
        }
        if (space) {
            sub->add_option("--space", o.spaces, "SpaceFile")->allow_extra_args(false);
        }
    };

    std::map<std::string, std::function<Report()>> handlers;
    auto add = [&](const std::string& name, const std::string& help, bool monoid, bool space,
                   std::function<Report()> run) {
        auto* sub = app.add_subcommand(name, help);
        common(sub, monoid, space);
        handlers[name] = std::move(run);
        return sub;
    };

    add("check-monoid", "check the distance-magma axioms, associativity and flags", true, false,
        [&] { return check_monoid(o); });
    add("star-add", "sum in the completion", true, false, [&] { return star_op(o, true); })
        ->add_option("values", o.args, "two values")->required();
    add("star-diff", "difference in the completion", true, false, [&] { return star_op(o, false); })
        ->add_option("values", o.args, "two values")->required();
    add("triangle", "is (a,b,c) a triangle", true, false, [&] { return triangle(o); })
        ->add_option("values", o.args, "three values")->required();
    add("four-values", "search for a four-values failure", true, false, [&] { return four_values(o); });
    add("amalgamate", "amalgamate two spaces over their shared points", false, true, [&] { return amalgamate(o); })
        ->add_option("--mode", o.mode, "free or disjoint")
        ->check(CLI::IsMember({"free", "disjoint"}));
    add("approx-check", "is a space approximately metric", false, true, [&] { return approx_check(o); })
        ->add_option("--phi", o.phi_file, "JSON object mapping values to intervals")
        ->required();
    auto* g = add("grow", "grow a finite part of the generic space", true, false, [&] { return grow(o); });
    g->add_option("--size", o.size, "number of points");
    g->add_option("--max-base", o.max_base, "largest obligation base");
    g->add_option("--denominator", o.denominator, "lattice fragment for dense carriers");
    g->add_option("--bound", o.bound, "largest fragment element");
    auto* ce = add("check-extension", "model check one canonical extension axiom", false, true,
                   [&] { return check_extension(o); });
    ce->add_option("--base", o.base, "comma separated base points")->required();
    ce->add_option("--katetov", o.katetov, "comma separated values on the base")->required();
    add("check-qe", "decide quantifier elimination", true, false, [&] { return check_qe(o); });
    auto* ga = add("gen-axioms", "print MS instances and extension axioms", true, false, [&] { return gen_axioms(o); });
    ga->add_option("--size", o.size_bound, "largest base of an extension axiom");
    ga->add_option("--denominator", o.denominator, "lattice fragment for dense carriers");
    ga->add_option("--bound", o.bound, "largest fragment element");
    auto* ef = add("eval-formula", "evaluate a formula on a space", false, true, [&] { return eval_formula(o); });
    ef->add_option("formula", o.args, "formula text")->required();
    ef->add_option("--assign", o.assign, "var=point")->allow_extra_args(false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        for (const auto& [name, run] : handlers) {
            if (app.got_subcommand(name)) {
                return emit(o, run());
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
