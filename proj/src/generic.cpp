#include "urysohn/generic.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <random>
#include <set>

namespace urysohn {

std::vector<KatetovMap> enumerate_katetov(const FiniteMetricSpace& space, const std::vector<Rational>& fragment) {
    std::vector<ExtendedValue> vals;
    for (const auto& r : fragment) {
        if (!r.is_zero()) {
            vals.push_back(ExtendedValue::principal(r));
        }
    }
    std::sort(vals.begin(), vals.end());
    const auto& spec = space.spec();
    const std::size_t n = space.size();
    std::vector<KatetovMap> out;
    KatetovMap cur(n);
    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == n) {
            out.push_back(cur);
            return;
        }
        for (const auto& v : vals) {
            bool ok = true;
            for (std::size_t j = 0; j < i && ok; ++j) {
                ok = is_triangle(spec, space.d(i, j), v, cur[j]);
            }
            if (ok) {
                cur[i] = v;
                self(self, i + 1);
            }
        }
    };
    rec(rec, 0);
    return out;
}

bool ExtensionScheme::standard() const {
    for (std::size_t i = 0; i < approx.size(); ++i) {
        for (std::size_t j = 0; j < approx.size(); ++j) {
            const auto& iv = approx.at(i, j);
            if (!iv.zero && !iv.hi.is_principal()) {
                return false;
            }
        }
    }
    return true;
}

FiniteMetricSpace extend(const FiniteMetricSpace& base, const KatetovMap& f) {
    std::string label = "z";
    while (base.index_of(label)) {
        label += "'";
    }
    FiniteMetricSpace out = base;
    out.add_point(label, f);
    return out;
}

ExtensionScheme canonical_scheme(const FiniteMetricSpace& base, const KatetovMap& f) {
    if (auto bad = check_katetov(base, f)) {
        throw PreconditionError("not a Katetov map");
    }
    return {base, f, canonical_approximation(extend(base, f))};
}

Formula extension_axiom(const ExtensionScheme& scheme) {
    const std::size_t n = scheme.base.size();
    auto var = [](std::size_t i) { return "x" + std::to_string(i + 1); };
    std::vector<Formula> k;
    for (std::size_t i = 0; i < n; ++i) {
        k.push_back(Formula::in(var(i), "y", scheme.approx.at(i, n)));
    }
    Formula body = Formula::exists("y", Formula::all_of(std::move(k)));
    std::vector<Formula> c;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            c.push_back(Formula::in(var(i), var(j), scheme.approx.at(i, j)));
        }
    }
    if (!c.empty()) {
        body = Formula::implies(Formula::all_of(std::move(c)), std::move(body));
    }
    for (std::size_t i = n; i-- > 0;) {
        body = Formula::forall(var(i), std::move(body));
    }
    return body;
}

std::optional<std::vector<std::size_t>> check_extension_axiom(const FiniteMetricSpace& space,
                                                              const ExtensionScheme& scheme,
                                                              const std::optional<std::vector<std::size_t>>& domain) {
    const std::size_t n = scheme.base.size();
    std::vector<std::size_t> dom;
    if (domain) {
        dom = *domain;
    } else {
        dom.resize(space.size());
        std::iota(dom.begin(), dom.end(), 0);
    }
    std::vector<std::size_t> tuple(n);
    std::optional<std::vector<std::size_t>> failure;
    auto has_witness = [&] {
        for (std::size_t y = 0; y < space.size(); ++y) {
            bool ok = true;
            for (std::size_t i = 0; i < n && ok; ++i) {
                ok = scheme.approx.at(i, n).contains(space.d(tuple[i], y));
            }
            if (ok) {
                return true;
            }
        }
        return false;
    };
    auto rec = [&](auto&& self, std::size_t i) -> bool {
        if (i == n) {
            if (!has_witness()) {
                failure = tuple;
                return true;
            }
            return false;
        }
        for (auto p : dom) {
            bool ok = true;
            for (std::size_t j = 0; j < i && ok; ++j) {
                ok = scheme.approx.at(j, i).contains(space.d(tuple[j], p));
            }
            if (!ok) {
                continue;
            }
            tuple[i] = p;
            if (self(self, i + 1)) {
                return true;
            }
        }
        return false;
    };
    rec(rec, 0);
    return failure;
}

// ---------------------------------------------------------------------------
// Growth
// ---------------------------------------------------------------------------

namespace {

void require_four_values(const DistanceMonoidSpec& spec, const std::vector<Rational>& frag) {
    std::optional<Quadruple> witness;
    DistanceMonoidSpec fragment_spec = spec;
    if (!spec.is_finite()) {
        fragment_spec = spec.kind() == MonoidKind::IntervalMax ? DistanceMonoidSpec::finite_max(frag)
                                                               : DistanceMonoidSpec::finite_truncated(frag);
    }
    if (auto w = four_values_search(fragment_spec).witness) {
        throw PreconditionError("fragment fails the four-values condition at " + format_quadruple(fragment_spec, *w));
    }
}

// Subsets of {0..n-1} of size <= k that contain p, in lexicographic order.
std::vector<std::vector<std::size_t>> subsets_with(std::size_t n, std::size_t p, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur;
    auto rec = [&](auto&& self, std::size_t start) -> void {
        if (std::find(cur.begin(), cur.end(), p) != cur.end()) {
            out.push_back(cur);
        }
        if (cur.size() == k) {
            return;
        }
        for (std::size_t i = start; i < n; ++i) {
            cur.push_back(i);
            self(self, i + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

} // namespace

GrowthResult grow_generic(const DistanceMonoidSpec& spec, std::size_t target_size, std::uint64_t seed,
                          const GrowthOptions& options) {
    if (target_size == 0) {
        throw PreconditionError("target size must be positive");
    }
    if (options.max_base == 0) {
        throw PreconditionError("max_base must be positive");
    }
    auto frag = fragment_elements(spec, options.denominator, options.bound);
    if (frag.size() < 2) {
        throw PreconditionError("fragment has no nonzero element");
    }
    require_four_values(spec, frag);
    std::vector<Rational> vals(frag.begin() + 1, frag.end());

    std::mt19937_64 rng(seed);
    GrowthResult result{FiniteMetricSpace(spec, {"p0"}), {}, 0};
    auto& space = result.space;
    std::deque<std::pair<std::size_t, Obligation>> queue; // (owning point, obligation)
    std::vector<std::size_t> pending;

    auto schedule = [&](std::size_t p) {
        std::vector<Obligation> batch;
        for (auto& subset : subsets_with(space.size(), p, options.max_base)) {
            for (auto& f : enumerate_katetov(space.subspace(subset), frag)) {
                batch.push_back({subset, std::move(f)});
            }
        }
        std::shuffle(batch.begin(), batch.end(), rng);
        pending.push_back(batch.size());
        for (auto& o : batch) {
            queue.emplace_back(p, std::move(o));
        }
    };
    auto realized_by = [&](const Obligation& o) -> std::optional<std::size_t> {
        for (std::size_t y = 0; y < space.size(); ++y) {
            bool ok = std::find(o.subset.begin(), o.subset.end(), y) == o.subset.end();
            for (std::size_t i = 0; i < o.subset.size() && ok; ++i) {
                ok = space.d(o.subset[i], y) == o.values[i];
            }
            if (ok) {
                return y;
            }
        }
        return std::nullopt;
    };

    // New point with the obligation's distances on its subset and random
    // ambient-admissible distances elsewhere.
    auto add_realizer = [&](const Obligation& ob) {
        const std::size_t n = space.size();
        std::vector<ExtendedValue> row(n);
        std::vector<bool> fixed(n, false);
        for (std::size_t i = 0; i < ob.subset.size(); ++i) {
            row[ob.subset[i]] = ob.values[i];
            fixed[ob.subset[i]] = true;
        }
        for (std::size_t x = 0; x < n; ++x) {
            if (fixed[x]) {
                continue;
            }
            std::vector<Rational> admissible;
            for (const auto& v : vals) {
                bool ok = true;
                for (std::size_t z = 0; z < n && ok; ++z) {
                    if (fixed[z]) {
                        ok = is_ambient_triangle(spec, space.d(x, z).point(), v, row[z].point());
                    }
                }
                if (ok) {
                    admissible.push_back(v);
                }
            }
            if (admissible.empty()) {
                throw Error("no admissible distance while extending " + space.points()[x]);
            }
            std::uniform_int_distribution<std::size_t> pick(0, admissible.size() - 1);
            row[x] = ExtendedValue::principal(admissible[pick(rng)]);
            fixed[x] = true;
        }
        space.add_point("p" + std::to_string(n), row);
        schedule(n);
    };

    schedule(0);
    while (space.size() < target_size) {
        if (queue.empty()) {
            // every obligation is realized inside the space; pad with a free point
            add_realizer({});
            continue;
        }
        auto [owner, ob] = std::move(queue.front());
        queue.pop_front();
        --pending[owner];
        if (!realized_by(ob)) {
            add_realizer(ob);
        }
        result.realized.push_back(std::move(ob));
    }
    result.closed_prefix = 0;
    while (result.closed_prefix < pending.size() && pending[result.closed_prefix] == 0) {
        ++result.closed_prefix;
    }
    return result;
}

// ---------------------------------------------------------------------------
// Witnesses for extension axioms
// ---------------------------------------------------------------------------

WitnessResult realize_witness(const DistanceMonoidSpec& spec, const FiniteMetricSpace& tuple,
                              const PairApproximation& phi) {
    const std::size_t n = tuple.size();
    if (phi.size() != n + 1) {
        throw PreconditionError("approximation must cover the tuple and the new point");
    }
    auto fail = [](std::string why) { return WitnessResult{std::nullopt, std::move(why)}; };
    auto name = [&](std::size_t i) { return "a" + std::to_string(i + 1); };
    for (std::size_t i = 0; i <= n; ++i) {
        for (std::size_t j = 0; j <= n; ++j) {
            const auto& iv = phi.at(i, j);
            if (i != j && (iv.zero || !iv.hi.is_principal())) {
                return fail("approximation is not standard at (" + name(i) + "," + name(j) + ")");
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!tuple.d(i, j).is_principal()) {
                return fail("tuple distances must be carrier elements");
            }
            if (!phi.at(i, j).contains(tuple.d(i, j))) {
                return fail("tuple violates C at (" + name(i) + "," + name(j) + ")");
            }
        }
    }
    auto up = [&](std::size_t i) { return phi.at(i, n).hi.point(); };
    auto low = [&](std::size_t i) { return phi.at(i, n).lo; };
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            if (a == b) {
                continue;
            }
            if (phi.at(a, b).hi.point() > op_add(spec, up(a), up(b))) {
                return fail("hypothesis (i) fails at (" + name(a) + "," + name(b) + ")");
            }
            auto inf = star_add(spec, normalize_cut(spec, phi.at(a, b).lo.point(), true),
                                ExtendedValue::principal(up(b)));
            if (!(low(a) < inf)) {
                return fail("hypothesis (ii) fails at (" + name(a) + "," + name(b) + ")");
            }
        }
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return up(a) < up(b); });
    std::vector<Rational> s(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t bk = order[k];
        Rational best = up(bk);
        for (std::size_t i = 0; i < k; ++i) {
            best = min(best, op_add(spec, s[order[i]], tuple.d(order[i], bk).point()));
        }
        s[bk] = best;
    }
    for (std::size_t i = 0; i < n; ++i) {
        auto si = ExtendedValue::principal(s[i]);
        if (!(low(i) < si && s[i] <= up(i))) {
            return fail("condition (1) fails at " + name(i));
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && !is_triangle(spec, tuple.d(i, j), si, ExtendedValue::principal(s[j]))) {
                return fail("condition (3) fails at (" + name(i) + "," + name(j) + ")");
            }
        }
    }
    return {s, ""};
}

QeDecision qe_decision(const DistanceMonoidSpec& spec) {
    auto flags = classify_monoid(spec);
    if (flags.right_closed) {
        return {QeVerdict::Yes, "right_closed", std::nullopt};
    }
    if (flags.ultrametric) {
        return {QeVerdict::Yes, "ultrametric", std::nullopt};
    }
    if (flags.group_like) {
        return {QeVerdict::Yes, "group_like", std::nullopt};
    }
    if (auto w = find_qe_witness(spec)) {
        return {QeVerdict::No, "continuity of x -> x + s fails", w};
    }
    if (spec.is_finite() || spec.carrier().is_lattice()) {
        // every nonzero element has an immediate predecessor, so (iv) is vacuous
        return {QeVerdict::Yes, "condition-(iv)", std::nullopt};
    }
    return {QeVerdict::Unknown, "no flag set and no witness among critical candidates", std::nullopt};
}

// ---------------------------------------------------------------------------
// Axioms
// ---------------------------------------------------------------------------

namespace {

// Encoding of (A, f) under a point permutation; the minimum over all
// permutations identifies the isomorphism type.
std::vector<Rational> encode(const FiniteMetricSpace& a, const KatetovMap& f, const std::vector<std::size_t>& perm) {
    std::vector<Rational> out;
    for (std::size_t i = 0; i < perm.size(); ++i) {
        out.push_back(f[perm[i]].point());
        for (std::size_t j = i + 1; j < perm.size(); ++j) {
            out.push_back(a.d(perm[i], perm[j]).point());
        }
    }
    return out;
}

std::vector<Rational> canonical_key(const FiniteMetricSpace& a, const KatetovMap& f) {
    std::vector<std::size_t> perm(a.size());
    std::iota(perm.begin(), perm.end(), 0);
    auto best = encode(a, f, perm);
    while (std::next_permutation(perm.begin(), perm.end())) {
        best = std::min(best, encode(a, f, perm));
    }
    return best;
}

} // namespace

std::vector<Formula> generate_axioms(const DistanceMonoidSpec& spec, std::size_t size_bound,
                                     const std::vector<Rational>& fragment) {
    auto out = instantiate_ms_axioms(spec, fragment);
    std::vector<Rational> vals;
    for (const auto& r : fragment) {
        if (!r.is_zero()) {
            vals.push_back(r);
        }
    }
    std::sort(vals.begin(), vals.end());
    for (const auto& r : vals) {
        if (!has_immediate_predecessor(spec, ExtendedValue::principal(r))) {
            return out; // canonical approximations need predecessors
        }
    }
    std::set<std::vector<Rational>> seen;
    for (std::size_t n = 1; n <= size_bound; ++n) {
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < n; ++i) {
            labels.push_back("a" + std::to_string(i + 1));
        }
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                pairs.emplace_back(i, j);
            }
        }
        std::vector<std::size_t> choice(pairs.size(), 0);
        while (true) {
            FiniteMetricSpace a(spec, labels);
            for (std::size_t p = 0; p < pairs.size(); ++p) {
                a.set(pairs[p].first, pairs[p].second, ExtendedValue::principal(vals[choice[p]]));
            }
            if (validate_metric(a).empty()) {
                for (const auto& f : enumerate_katetov(a, fragment)) {
                    if (seen.insert(canonical_key(a, f)).second) {
                        out.push_back(extension_axiom(canonical_scheme(a, f)));
                    }
                }
            }
            std::size_t p = 0;
            while (p < choice.size() && ++choice[p] == vals.size()) {
                choice[p++] = 0;
            }
            if (p == choice.size()) {
                break;
            }
        }
    }
    return out;
}

} // namespace urysohn
