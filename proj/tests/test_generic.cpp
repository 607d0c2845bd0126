#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "urysohn/generic.hpp"

#include <random>
#include <set>

using namespace urysohn;

namespace {

Rational q(long p, long d = 1) { return Rational(p, d); }
ExtendedValue P(long p, long d = 1) { return ExtendedValue::principal(q(p, d)); }

FiniteMetricSpace random_space(const DistanceMonoidSpec& spec, std::size_t n, std::mt19937_64& rng) {
    auto vals = fragment_elements(spec);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) {
        labels.push_back("b" + std::to_string(i));
    }
    std::uniform_int_distribution<std::size_t> pick(1, vals.size() - 1);
    while (true) {
        FiniteMetricSpace s(spec, labels);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                s.set(i, j, ExtendedValue::principal(vals[pick(rng)]));
            }
        }
        if (validate_metric(s).empty()) {
            return s;
        }
    }
}

std::vector<std::size_t> prefix(std::size_t m) {
    std::vector<std::size_t> v(m);
    for (std::size_t i = 0; i < m; ++i) {
        v[i] = i;
    }
    return v;
}

std::vector<std::vector<std::size_t>> small_subsets(std::size_t n, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back({i});
        if (k >= 2) {
            for (std::size_t j = i + 1; j < n; ++j) {
                out.push_back({i, j});
            }
        }
    }
    return out;
}

std::size_t realizers(const FiniteMetricSpace& s, const Obligation& o) {
    std::size_t count = 0;
    for (std::size_t y = 0; y < s.size(); ++y) {
        bool ok = std::find(o.subset.begin(), o.subset.end(), y) == o.subset.end();
        for (std::size_t i = 0; i < o.subset.size() && ok; ++i) {
            ok = s.d(o.subset[i], y) == o.values[i];
        }
        count += ok;
    }
    return count;
}

} // namespace

TEST_CASE("Katetov enumeration") {
    auto r1 = builtin("R1");
    FiniteMetricSpace three(r1, {"a", "b", "c"});
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = i + 1; j < 3; ++j) {
            three.set(i, j, P(1));
        }
    }
    auto maps = enumerate_katetov(three, fragment_elements(r1));
    REQUIRE(maps.size() == 1);
    CHECK(maps[0] == KatetovMap{P(1), P(1), P(1)});

    auto r2 = builtin("R2");
    CHECK(enumerate_katetov(FiniteMetricSpace(r2, {"a"}), fragment_elements(r2)).size() == 2);
    FiniteMetricSpace pair(r2, {"a", "b"});
    pair.set(0, 1, P(2));
    auto m2 = enumerate_katetov(pair, fragment_elements(r2));
    CHECK(m2 == std::vector<KatetovMap>{{P(1), P(1)}, {P(1), P(2)}, {P(2), P(1)}, {P(2), P(2)}});

    // every enumerated map passes check_katetov, and every Katetov map is enumerated
    std::mt19937_64 rng(3);
    auto r3 = builtin("R3");
    for (int t = 0; t < 30; ++t) {
        auto s = random_space(r3, 1 + rng() % 3, rng);
        auto maps3 = enumerate_katetov(s, fragment_elements(r3));
        std::size_t brute = 0;
        std::size_t total = 1;
        for (std::size_t i = 0; i < s.size(); ++i) {
            total *= 3;
        }
        for (std::size_t code = 0; code < total; ++code) {
            KatetovMap f;
            for (std::size_t c = code, i = 0; i < s.size(); ++i, c /= 3) {
                f.push_back(P(static_cast<long>(c % 3) + 1));
            }
            if (!check_katetov(s, f)) {
                ++brute;
                CHECK(std::find(maps3.begin(), maps3.end(), f) != maps3.end());
            }
        }
        CHECK(maps3.size() == brute);
    }
}

TEST_CASE("extension axiom text") {
    auto r1 = builtin("R1");
    FiniteMetricSpace one(r1, {"a"});
    auto scheme = canonical_scheme(one, {P(1)});
    CHECK(scheme.standard());
    CHECK(print_formula(r1, extension_axiom(scheme)) == "forall x1. exists y. d(x1,y) in (0, 1]");

    auto r2 = builtin("R2");
    FiniteMetricSpace pair(r2, {"a", "b"});
    pair.set(0, 1, P(2));
    CHECK(print_formula(r2, extension_axiom(canonical_scheme(pair, {P(1), P(2)}))) ==
          "forall x1. forall x2. (d(x1,x2) in (1, 2] -> (exists y. (d(x1,y) in (0, 1] & d(x2,y) in (1, 2])))");
    CHECK_THROWS_AS(canonical_scheme(pair, {P(0), P(2)}), PreconditionError);
}

TEST_CASE("model checking agrees with evaluating the axiom") {
    std::mt19937_64 rng(8);
    for (std::string name : {"R2", "R3", "U2"}) {
        auto spec = builtin(name);
        auto frag = fragment_elements(spec);
        for (int t = 0; t < 60; ++t) {
            auto base = random_space(spec, 1 + rng() % 2, rng);
            auto maps = enumerate_katetov(base, frag);
            auto scheme = canonical_scheme(base, maps[rng() % maps.size()]);
            auto space = random_space(spec, 2 + rng() % 4, rng);
            CHECK(eval(space, extension_axiom(scheme)) == !check_extension_axiom(space, scheme).has_value());
        }
    }
}

TEST_CASE("unsatisfiable C holds vacuously") {
    auto r2 = builtin("R2");
    FiniteMetricSpace pair(r2, {"a", "b"});
    pair.set(0, 1, P(2));
    auto scheme = canonical_scheme(pair, {P(1), P(1)});
    FiniteMetricSpace close(r2, {"u", "v"});
    close.set(0, 1, P(1));
    CHECK_FALSE(check_extension_axiom(close, scheme).has_value());
}

TEST_CASE("R1 growth is a complete graph") {
    auto g = grow_generic(builtin("R1"), 10, 1);
    REQUIRE(g.space.size() == 10);
    for (std::size_t i = 0; i < 10; ++i) {
        for (std::size_t j = 0; j < 10; ++j) {
            CHECK(g.space.d(i, j) == (i == j ? P(0) : P(1)));
        }
    }
}

TEST_CASE("R2 growth satisfies the extension axioms it scheduled") {
    auto r2 = builtin("R2");
    GrowthOptions opt;
    opt.max_base = 2;
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        auto g = grow_generic(r2, 30, seed, opt);
        REQUIRE(g.space.size() == 30);
        CHECK(validate_metric(g.space).empty());
        CHECK(g.closed_prefix >= 3);
        auto domain = prefix(g.closed_prefix);
        auto frag = fragment_elements(r2);
        for (const auto& subset : small_subsets(g.closed_prefix, 2)) {
            auto base = g.space.subspace(subset);
            for (const auto& f : enumerate_katetov(base, frag)) {
                CHECK_FALSE(check_extension_axiom(g.space, canonical_scheme(base, f), domain).has_value());
            }
        }
        for (const auto& o : g.realized) {
            auto scheme = canonical_scheme(g.space.subspace(o.subset), o.values);
            CHECK_FALSE(check_extension_axiom(g.space, scheme, o.subset).has_value());
            CHECK(realizers(g.space, o) >= 1);
        }
    }
}

TEST_CASE("growth is deterministic and monotone") {
    auto r3 = builtin("R3");
    auto a = grow_generic(r3, 25, 9);
    auto b = grow_generic(r3, 25, 9);
    auto c = grow_generic(r3, 15, 9);
    auto d = grow_generic(r3, 25, 10);
    bool same = true, differs = false;
    for (std::size_t i = 0; i < 25; ++i) {
        for (std::size_t j = 0; j < 25; ++j) {
            same = same && a.space.d(i, j) == b.space.d(i, j);
            differs = differs || a.space.d(i, j) != d.space.d(i, j);
            if (i < 15 && j < 15) {
                CHECK(a.space.d(i, j) == c.space.d(i, j));
            }
        }
    }
    CHECK(same);
    CHECK(differs);
    CHECK(validate_metric(a.space).empty());
}

TEST_CASE("ultrametric growth gives nested equivalence relations") {
    auto u2 = builtin("U2");
    auto g = grow_generic(u2, 25, 4);
    const auto& s = g.space;
    CHECK(validate_metric(s).empty());
    for (long r = 0; r <= 2; ++r) {
        for (std::size_t i = 0; i < s.size(); ++i) {
            for (std::size_t j = 0; j < s.size(); ++j) {
                for (std::size_t k = 0; k < s.size(); ++k) {
                    if (s.d(i, j) <= P(r) && s.d(j, k) <= P(r)) {
                        CHECK(s.d(i, k) <= P(r));
                    }
                }
            }
        }
    }
    // both nontrivial levels occur
    std::set<ExtendedValue> seen;
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t j = i + 1; j < s.size(); ++j) {
            seen.insert(s.d(i, j));
        }
    }
    CHECK(seen == std::set<ExtendedValue>{P(1), P(2)});
}

TEST_CASE("removing a realizing point plants a counterexample") {
    auto r2 = builtin("R2");
    GrowthOptions opt;
    opt.max_base = 2;
    auto g = grow_generic(r2, 20, 5, opt);
    bool planted = false;
    for (const auto& o : g.realized) {
        if (realizers(g.space, o) != 1) {
            continue;
        }
        std::size_t y = 0;
        for (; y < g.space.size(); ++y) {
            bool ok = std::find(o.subset.begin(), o.subset.end(), y) == o.subset.end();
            for (std::size_t i = 0; i < o.subset.size() && ok; ++i) {
                ok = g.space.d(o.subset[i], y) == o.values[i];
            }
            if (ok) {
                break;
            }
        }
        std::vector<std::size_t> keep;
        for (std::size_t i = 0; i < g.space.size(); ++i) {
            if (i != y) {
                keep.push_back(i);
            }
        }
        auto smaller = g.space.subspace(keep);
        std::vector<std::size_t> moved;
        for (auto i : o.subset) {
            moved.push_back(i < y ? i : i - 1);
        }
        auto scheme = canonical_scheme(g.space.subspace(o.subset), o.values);
        CHECK_FALSE(check_extension_axiom(g.space, scheme, o.subset).has_value());
        auto bad = check_extension_axiom(smaller, scheme, moved);
        REQUIRE(bad.has_value());
        auto sorted = *bad;
        std::sort(sorted.begin(), sorted.end());
        CHECK(sorted == moved);
        CHECK_FALSE(eval(smaller, extension_axiom(scheme)));
        planted = true;
        break;
    }
    CHECK(planted);
}

TEST_CASE("growth preconditions") {
    CHECK_THROWS_AS(grow_generic(builtin("nonassoc"), 5, 1), PreconditionError);
    CHECK_THROWS_AS(grow_generic(builtin("Q1"), 5, 1), PreconditionError);
    CHECK_THROWS_AS(grow_generic(builtin("R2"), 0, 1), PreconditionError);
    GrowthOptions opt;
    opt.denominator = 2;
    auto g = grow_generic(builtin("Q1"), 12, 1, opt);
    CHECK(g.space.size() == 12);
    CHECK(validate_metric(g.space).empty());
    for (std::size_t i = 0; i < 12; ++i) {
        for (std::size_t j = i + 1; j < 12; ++j) {
            CHECK((g.space.d(i, j) == P(1, 2) || g.space.d(i, j) == P(1)));
        }
    }
}

TEST_CASE("witness construction examples") {
    auto r3 = builtin("R3");
    FiniteMetricSpace one(r3, {"b1"});
    PairApproximation phi1(2);
    phi1.set(0, 1, Interval::open_closed(P(1), P(3)));
    auto w1 = realize_witness(r3, one, phi1);
    REQUIRE(w1.distances);
    CHECK(*w1.distances == std::vector<Rational>{q(3)});

    FiniteMetricSpace two(r3, {"b1", "b2"});
    two.set(0, 1, P(2));
    PairApproximation phi(3);
    phi.set(0, 1, Interval::open_closed(P(1), P(2)));
    phi.set(0, 2, Interval::open_closed(P(0), P(1)));
    phi.set(1, 2, Interval::open_closed(P(2), P(3)));
    auto w = realize_witness(r3, two, phi);
    REQUIRE(w.distances);
    CHECK(*w.distances == std::vector<Rational>{q(1), q(3)});

    // (i): the pair is farther apart than the targets allow
    FiniteMetricSpace far(r3, {"b1", "b2"});
    far.set(0, 1, P(3));
    PairApproximation bad(3);
    bad.set(0, 1, Interval::open_closed(P(2), P(3)));
    bad.set(0, 2, Interval::open_closed(P(0), P(1)));
    bad.set(1, 2, Interval::open_closed(P(0), P(1)));
    auto wb = realize_witness(r3, far, bad);
    CHECK_FALSE(wb.distances);
    CHECK(wb.failure.find("(i)") != std::string::npos);

    // C fails
    auto wc = realize_witness(r3, two, bad);
    CHECK_FALSE(wc.distances);
    CHECK(wc.failure.find("C") != std::string::npos);

    CHECK_THROWS_AS(realize_witness(r3, two, PairApproximation(2)), PreconditionError);
}

TEST_CASE("witness construction on canonical schemes recovers the Katetov map") {
    std::mt19937_64 rng(17);
    for (std::string name : {"R3", "U3", "S2"}) {
        auto spec = builtin(name);
        auto frag = fragment_elements(spec);
        for (int t = 0; t < 100; ++t) {
            auto base = random_space(spec, 1 + rng() % 4, rng);
            auto maps = enumerate_katetov(base, frag);
            const auto& f = maps[rng() % maps.size()];
            auto scheme = canonical_scheme(base, f);
            auto w = realize_witness(spec, base, scheme.approx);
            INFO(name << " " << w.failure);
            REQUIRE(w.distances);
            for (std::size_t i = 0; i < base.size(); ++i) {
                CHECK(ExtendedValue::principal((*w.distances)[i]) == f[i]);
            }
        }
    }
}

TEST_CASE("QE decisions") {
    auto r3 = qe_decision(builtin("R3"));
    CHECK(r3.verdict == QeVerdict::Yes);
    CHECK(r3.reason == "right_closed");
    CHECK(qe_decision(builtin("Q1")).reason == "group_like");
    CHECK(qe_decision(builtin("U2")).verdict == QeVerdict::Yes);
    auto no = qe_decision(builtin("noQE"));
    REQUIRE(no.verdict == QeVerdict::No);
    REQUIRE(no.witness);
    CHECK(no.witness->alpha == ExtendedValue::gap(q(3)));
    CHECK(no.witness->s == q(2));
    CHECK(no.witness->lhs == star_add(builtin("noQE"), no.witness->alpha, P(2)));
    CHECK_THROWS_AS(qe_decision(builtin("nonassoc")), PreconditionError);
}

TEST_CASE("axiom generation") {
    auto r1 = builtin("R1");
    auto ax1 = generate_axioms(r1, 1, fragment_elements(r1));
    REQUIRE(ax1.size() == 5);
    CHECK(print_formula(r1, ax1.back()) == "forall x1. exists y. d(x1,y) in (0, 1]");

    auto r2 = builtin("R2");
    auto ms = instantiate_ms_axioms(r2, fragment_elements(r2)).size();
    CHECK(generate_axioms(r2, 1, fragment_elements(r2)).size() == ms + 2);
    // pairs at distance 1 or 2, each with three Katetov maps up to swapping the points
    CHECK(generate_axioms(r2, 2, fragment_elements(r2)).size() == ms + 2 + 6);

    // dense carriers only get MS instances
    auto q1 = builtin("Q1");
    auto frag = fragment_elements(q1, 2);
    CHECK(generate_axioms(q1, 2, frag).size() == instantiate_ms_axioms(q1, frag).size());
}

TEST_CASE("partial isometries of the closed prefix extend by one point") {
    auto r2 = builtin("R2");
    GrowthOptions opt;
    opt.max_base = 2;
    auto g = grow_generic(r2, 20, 12, opt);
    const auto& s = g.space;
    const std::size_t m = g.closed_prefix;
    REQUIRE(m >= 3);
    std::size_t extended = 0;
    // partial isometries a -> b between subsets of size <= 2 of the prefix
    for (const auto& a : small_subsets(m, 2)) {
        for (const auto& b : small_subsets(m, 2)) {
            if (a.size() != b.size() || (a.size() == 2 && s.d(a[0], a[1]) != s.d(b[0], b[1]))) {
                continue;
            }
            for (std::size_t x = 0; x < m; ++x) {
                bool found = false;
                for (std::size_t y = 0; y < s.size() && !found; ++y) {
                    found = true;
                    for (std::size_t i = 0; i < a.size() && found; ++i) {
                        found = s.d(x, a[i]) == s.d(y, b[i]) && (x == a[i]) == (y == b[i]);
                    }
                }
                CHECK(found);
                ++extended;
            }
        }
    }
    CHECK(extended > 100);
}
