#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "urysohn/metric_space.hpp"

#include <random>

using namespace urysohn;

namespace {

Rational q(long p, long d = 1) { return Rational(p, d); }
ExtendedValue P(long p, long d = 1) { return ExtendedValue::principal(q(p, d)); }

FiniteMetricSpace make_space(const DistanceMonoidSpec& spec, const std::vector<std::string>& pts,
                             const std::vector<std::tuple<std::string, std::string, ExtendedValue>>& d) {
    FiniteMetricSpace s(spec, pts);
    for (const auto& [a, b, v] : d) {
        s.set(a, b, v);
    }
    return s;
}

FiniteMetricSpace example_four_points() {
    return make_space(builtin("twoThree"), {"w", "x", "y", "z"},
                      {{"w", "x", P(1)}, {"x", "z", P(1)}, {"w", "y", P(1)},
                       {"x", "y", P(3)}, {"w", "z", P(3)}, {"y", "z", P(4)}});
}

ValueApproximation example_four_phi() {
    ValueApproximation phi;
    phi.set(P(0), Interval::point_zero());
    phi.set(P(1), Interval::open_closed(P(0), P(1)));
    phi.set(P(3), Interval::open_closed(P(0), P(3)));
    phi.set(P(4), Interval::open_closed(P(3), P(4)));
    return phi;
}

// Independent associativity oracle for truncated addition on a finite set.
bool brute_associative(const std::vector<Rational>& vals) {
    auto add = [&](const Rational& a, const Rational& b) {
        Rational best(0);
        for (const auto& v : vals) {
            if (v <= a + b && v > best) {
                best = v;
            }
        }
        return best;
    };
    for (const auto& a : vals) {
        for (const auto& b : vals) {
            for (const auto& c : vals) {
                if (add(add(a, b), c) != add(a, add(b, c))) {
                    return false;
                }
            }
        }
    }
    return true;
}

// Random metric space over a finite spec with n points, by rejection.
FiniteMetricSpace random_space(const DistanceMonoidSpec& spec, std::size_t n, std::mt19937_64& rng,
                               const std::string& prefix) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) {
        labels.push_back(prefix + std::to_string(i));
    }
    std::uniform_int_distribution<long> pick(1, static_cast<long>(spec.size()) - 1);
    while (true) {
        FiniteMetricSpace s(spec, labels);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                s.set(i, j, P(pick(rng)));
            }
        }
        if (validate_metric(s).empty()) {
            return s;
        }
    }
}

bool embeds(const FiniteMetricSpace& big, const FiniteMetricSpace& small) {
    for (std::size_t i = 0; i < small.size(); ++i) {
        for (std::size_t j = 0; j < small.size(); ++j) {
            auto a = big.index_of(small.points()[i]);
            auto b = big.index_of(small.points()[j]);
            if (!a || !b || big.d(*a, *b) != small.d(i, j)) {
                return false;
            }
        }
    }
    return true;
}

} // namespace

TEST_CASE("validate_metric") {
    CHECK(validate_metric(FiniteMetricSpace(builtin("R2"), {"a"})).empty());
    auto A = example_four_points();
    CHECK(validate_metric(A).empty());
    A.set("y", "z", P(100));
    auto v = validate_metric(A);
    REQUIRE_FALSE(v.empty());
    CHECK(v.front().rule == "triangle");
    CHECK(v.front().points == std::vector<std::size_t>{0, 2, 3});
}

TEST_CASE("check_katetov") {
    auto r2 = builtin("R2");
    auto s = make_space(r2, {"a", "b"}, {{"a", "b", P(2)}});
    CHECK_FALSE(check_katetov(s, {P(1), P(1)}));
    CHECK_FALSE(check_katetov(s, {P(1), P(2)}));
    CHECK_FALSE(check_katetov(s, {P(2), P(2)}));
    auto u2 = builtin("U2");
    auto t = make_space(u2, {"a", "b"}, {{"a", "b", P(2)}});
    CHECK(check_katetov(t, {P(1), P(1)}));
    CHECK_THROWS_AS(check_katetov(s, {P(0), P(1)}), PreconditionError);
}

TEST_CASE("four values check") {
    auto r1 = builtin("R1");
    CHECK(four_values_check(r1, {q(1), q(1), q(1), q(1), q(1)}) == q(1));
    auto na = builtin("nonassoc"); // positions 0,1,2,3 stand for 0,1,2,7/2
    CHECK_FALSE(four_values_check(na, {q(1), q(1), q(3), q(2), q(2)}));
    auto r2 = builtin("R2");
    auto t = four_values_check(r2, {q(1), q(2), q(1), q(2), q(1)});
    REQUIRE(t);
    CHECK((*t == q(1) || *t == q(2)));
    CHECK_THROWS_AS(four_values_check(builtin("R3"), {q(1), q(3), q(1), q(1), q(1)}), PreconditionError);
    auto dense = four_values_check(builtin("Q"), {q(1), q(2), q(1), q(2), q(1)});
    REQUIRE(dense);
    CHECK(*dense > q(0));
    CHECK(*dense <= q(2));
}

TEST_CASE("four values search") {
    auto na = four_values_search(builtin("nonassoc"));
    REQUIRE(na.witness);
    CHECK(format_quadruple(builtin("nonassoc"), *na.witness) == "(1,1,7/2,2;2)");
    CHECK(na.exhaustive);
    auto gf = four_values_search(builtin("gapFour"));
    CHECK_FALSE(gf.witness);
    CHECK_FALSE(gf.exhaustive);
    for (std::string name : {"R1", "R2", "R3", "R5", "U3", "S3", "Q1", "Q", "Qmax"}) {
        CAPTURE(name);
        CHECK_FALSE(four_values_search(builtin(name)).witness);
    }
}

TEST_CASE("property: four values iff associative on small finite carriers") {
    std::vector<Rational> pool{q(1, 2), q(1), q(3, 2), q(2), q(5, 2), q(3), q(7, 2), q(4), q(5)};
    std::size_t checked = 0;
    std::size_t non_assoc = 0;
    for (unsigned mask = 0; mask < (1u << pool.size()); ++mask) {
        if (__builtin_popcount(mask) > 4) {
            continue;
        }
        std::vector<Rational> vals{q(0)};
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (mask & (1u << i)) {
                vals.push_back(pool[i]);
            }
        }
        auto spec = DistanceMonoidSpec::finite_truncated(vals);
        bool assoc = brute_associative(vals);
        CHECK(assoc == !four_values_search(spec).witness);
        CHECK(assoc == !check_associativity(spec));
        ++checked;
        non_assoc += assoc ? 0 : 1;
    }
    CHECK(checked > 200);
    CHECK(non_assoc > 10);
}

TEST_CASE("free amalgam") {
    auto r2 = builtin("R2");
    auto A = make_space(r2, {"a", "c"}, {{"a", "c", P(1)}});
    auto B = make_space(r2, {"c", "b"}, {{"c", "b", P(1)}});
    auto F = free_amalgam(A, B);
    CHECK(F.d(*F.index_of("a"), *F.index_of("b")) == P(2));
    CHECK(validate_metric(F).empty());
    CHECK(free_amalgam(A, A).size() == 2);
    auto C = make_space(r2, {"a", "c"}, {{"a", "c", P(2)}});
    CHECK_THROWS_AS(free_amalgam(A, C), PreconditionError);
}

TEST_CASE("free amalgam fails on a non-associative magma") {
    auto na = builtin("nonassoc");
    bool found = false;
    for (long x = 1; x <= 3 && !found; ++x) {
        for (long y = 1; y <= 3 && !found; ++y) {
            for (long z = 1; z <= 3 && !found; ++z) {
                // A = {a, c, e}, B = {c, e, b} sharing the edge c-e.
                auto A = make_space(na, {"a", "c"}, {{"a", "c", P(x)}});
                auto B = make_space(na, {"c", "b"}, {{"c", "b", P(y)}});
                auto F = free_amalgam(A, B);
                auto G = make_space(na, {"b", "e"}, {{"b", "e", P(z)}});
                auto H = free_amalgam(F, G);
                found = !validate_metric(H).empty();
            }
        }
    }
    CHECK(found);
}

TEST_CASE("one point amalgam") {
    auto r2 = builtin("R2");
    auto X1 = make_space(r2, {"x1", "a"}, {{"x1", "a", P(1)}});
    auto X2 = make_space(r2, {"x2", "a"}, {{"x2", "a", P(2)}});
    auto M = one_point_amalgam(X1, X2);
    auto t = M.d(*M.index_of("x1"), *M.index_of("x2"));
    CHECK((t == P(1) || t == P(2)));
    CHECK(validate_metric(M).empty());

    auto na = builtin("nonassoc");
    // Witness configuration (1,1,7/2,2;2): d(y,y')=2, x1 at 1,1 and x2 at 7/2,2.
    auto Y1 = make_space(na, {"x1", "y", "yp"}, {{"x1", "y", P(1)}, {"x1", "yp", P(1)}, {"y", "yp", P(2)}});
    auto Y2 = make_space(na, {"x2", "y", "yp"}, {{"x2", "y", P(3)}, {"x2", "yp", P(2)}, {"y", "yp", P(2)}});
    CHECK_THROWS_AS(one_point_amalgam(Y1, Y2), AmalgamationFailure);
}

TEST_CASE("disjoint amalgam") {
    auto r2 = builtin("R2");
    auto T1 = make_space(r2, {"a", "b", "p"}, {{"a", "b", P(1)}, {"a", "p", P(2)}, {"b", "p", P(1)}});
    auto T2 = make_space(r2, {"a", "b", "q"}, {{"a", "b", P(1)}, {"a", "q", P(1)}, {"b", "q", P(2)}});
    auto M = disjoint_amalgam(T1, T2);
    CHECK(M.size() == 4);
    CHECK(validate_metric(M).empty());
    CHECK(embeds(M, T1));
    CHECK(embeds(M, T2));
    CHECK(disjoint_amalgam(T1, T1.subspace({0, 1})).size() == 3);
}

TEST_CASE("property: disjoint amalgams of random spaces over R_3") {
    auto r3 = builtin("R3");
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        auto shared = random_space(r3, 2, rng, "s");
        auto X1 = random_space(r3, 5, rng, "u");
        auto X2 = random_space(r3, 5, rng, "v");
        // Overwrite the first two points of each factor with the shared pair.
        FiniteMetricSpace A(r3, {"s0", "s1", "u2", "u3", "u4"});
        FiniteMetricSpace B(r3, {"s0", "s1", "v2", "v3", "v4"});
        for (std::size_t i = 0; i < 5; ++i) {
            for (std::size_t j = i + 1; j < 5; ++j) {
                A.set(i, j, X1.d(i, j));
                B.set(i, j, X2.d(i, j));
            }
        }
        B.set(0, 1, A.d(0, 1));
        if (!validate_metric(B).empty()) {
            continue;
        }
        auto M = disjoint_amalgam(A, B);
        CHECK(validate_metric(M).empty());
        CHECK(embeds(M, A));
        CHECK(embeds(M, B));
    }
}

TEST_CASE("canonical approximation") {
    auto r3 = builtin("R3");
    auto s = make_space(r3, {"a", "b", "c"}, {{"a", "b", P(1)}, {"a", "c", P(3)}, {"b", "c", P(3)}});
    auto phi = canonical_approximation(s);
    CHECK(phi.at(0, 1) == Interval::open_closed(P(0), P(1)));
    CHECK(phi.at(0, 2) == Interval::open_closed(P(2), P(3)));
    CHECK(phi.at(1, 1) == Interval::point_zero());
    CHECK(phi.valid_for(s));
    auto hat = phi.hat(s);
    CHECK(hat.at(P(3)) == Interval::open_closed(P(2), P(3)));
    CHECK_THROWS_AS(canonical_approximation(make_space(builtin("Q1"), {"a", "b"}, {{"a", "b", P(1, 2)}})),
                    PreconditionError);
}

TEST_CASE("metric refinement examples") {
    auto q1 = builtin("Q1");
    ValueApproximation psi;
    psi.set(P(1, 2), Interval::open_closed(P(0), P(1, 2)));
    psi.set(ExtendedValue::successor(q(1, 2)), Interval::open_closed(P(1, 2), P(3, 5)));
    std::vector<ExtendedValue> X{P(1, 2), ExtendedValue::successor(q(1, 2))};
    auto phi = metric_refinement(q1, X, psi);
    CHECK(phi.at(ExtendedValue::successor(q(1, 2))) == Interval::open_closed(P(1, 2), P(3, 5)));
    CHECK(phi.at(P(1, 2)).hi == P(1, 2));
    CHECK(is_metric_approximation(q1, X, phi));
    CHECK(phi.refines(psi));

    auto r3 = builtin("R3");
    ValueApproximation wide;
    for (long v = 1; v <= 3; ++v) {
        wide.set(P(v), Interval::open_closed(P(0), P(3)));
    }
    auto tight = metric_refinement(r3, {P(1), P(2), P(3)}, wide);
    CHECK(tight.at(P(1)).hi == P(1));
    CHECK(tight.at(P(2)).hi == P(2));
    CHECK(tight.at(P(3)).hi == P(3));
    ValueApproximation one;
    one.set(P(1), Interval::open_closed(P(0), P(3)));
    CHECK(metric_refinement(r3, {P(1)}, one).at(P(1)).hi == P(3));
    CHECK(metric_refinement(r3, {P(0)}, ValueApproximation{}).at(P(0)) == Interval::point_zero());

    CHECK_THROWS_AS(metric_refinement(builtin("gapFour"), {P(1)}, one), PreconditionError);
    ValueApproximation om;
    om.set(ExtendedValue::omega(), Interval::open_closed(P(0), ExtendedValue::omega()));
    CHECK_THROWS_AS(metric_refinement(builtin("Q"), {ExtendedValue::omega()}, om), PreconditionError);
}

TEST_CASE("property: metric refinement refines and is metric") {
    std::mt19937_64 rng(5);
    for (std::string name : {"R3", "R5", "S4", "Q1", "Q", "Qmax"}) {
        CAPTURE(name);
        auto spec = builtin(name);
        auto elems = spec.has_finitely_many_elements() ? spec.finite_elements() : spec.carrier().sample_elements();
        std::vector<ExtendedValue> cuts;
        for (const auto& r : elems) {
            if (!r.is_zero()) {
                cuts.push_back(ExtendedValue::principal(r));
            }
            auto s = normalize_cut(spec, r, true);
            if (!s.is_zero() && !s.is_omega()) {
                cuts.push_back(s);
            }
        }
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        std::uniform_int_distribution<std::size_t> pick(0, cuts.size() - 1);
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<ExtendedValue> X;
            ValueApproximation psi;
            for (int k = 0; k < 4; ++k) {
                auto v = cuts[pick(rng)];
                if (psi.covers(v)) {
                    continue;
                }
                // lo: some element below v (or 0); hi: some element >= v, or omega.
                std::vector<ExtendedValue> below{P(0)}, above;
                for (const auto& r : elems) {
                    auto e = ExtendedValue::principal(r);
                    (e < v ? below : above).push_back(e);
                    if (e == v) {
                        continue;
                    }
                }
                if (!spec.max_element()) {
                    above.push_back(ExtendedValue::omega());
                }
                if (above.empty()) {
                    continue;
                }
                auto lo = below[std::uniform_int_distribution<std::size_t>(0, below.size() - 1)(rng)];
                auto hi = above[std::uniform_int_distribution<std::size_t>(0, above.size() - 1)(rng)];
                psi.set(v, Interval::open_closed(lo, hi));
                X.push_back(v);
            }
            auto phi = metric_refinement(spec, X, psi);
            CHECK(phi.refines(psi));
            CHECK(phi.valid());
            CHECK(is_metric_approximation(spec, X, phi));
        }
    }
}

TEST_CASE("approximately metric: the four point example") {
    auto A = example_four_points();
    auto phi = example_four_phi();
    CHECK_FALSE(approximately_metric_check(A, phi));
    for (auto idx : std::vector<std::vector<std::size_t>>{{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}) {
        auto sub = A.subspace(idx);
        auto m = approximately_metric_check(sub, phi);
        REQUIRE(m);
        CHECK(is_ambient_metric(sub.spec(), *m));
        for (std::size_t i = 0; i < sub.size(); ++i) {
            for (std::size_t j = i + 1; j < sub.size(); ++j) {
                CHECK(phi.at(sub.d(i, j)).contains(ExtendedValue::principal((*m)[i][j])));
            }
        }
    }
}

TEST_CASE("approximately metric: realizations stay inside the intervals") {
    auto r3 = builtin("R3");
    auto s = make_space(r3, {"a", "b", "c"}, {{"a", "b", P(1)}, {"a", "c", P(2)}, {"b", "c", P(3)}});
    ValueApproximation phi;
    for (long v = 1; v <= 3; ++v) {
        phi.set(P(v), Interval::open_closed(P(v - 1), P(v)));
    }
    auto m = approximately_metric_check(s, phi);
    REQUIRE(m);
    CHECK((*m)[0][1] == q(1));
    CHECK((*m)[1][2] == q(3));
}

TEST_CASE("property: approximately metric iff metric on sum-complete carriers") {
    std::mt19937_64 rng(3);
    auto r3 = builtin("R3");
    std::uniform_int_distribution<long> pick(1, 3);
    int feasible = 0;
    int infeasible = 0;
    for (int trial = 0; trial < 300; ++trial) {
        FiniteMetricSpace s(r3, {"a", "b", "c", "d"});
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t j = i + 1; j < 4; ++j) {
                s.set(i, j, P(pick(rng)));
            }
        }
        ValueApproximation phi;
        for (long v = 1; v <= 3; ++v) {
            phi.set(P(v), Interval::open_closed(P(std::uniform_int_distribution<long>(0, v - 1)(rng)), P(3)));
        }
        auto m = approximately_metric_check(s, phi);
        bool metric = validate_metric(s).empty();
        CHECK(m.has_value() == metric);
        if (m) {
            CHECK(is_ambient_metric(r3, *m));
            ++feasible;
        } else {
            ++infeasible;
        }
    }
    CHECK(feasible > 0);
    CHECK(infeasible > 0);
}

TEST_CASE("approximately metric over a non-sum-complete carrier agrees with brute force") {
    // Q-dense twoThree: compare Fourier-Motzkin against a grid search at
    // denominator 4, which suffices for these integer-valued intervals.
    auto tt = builtin("twoThree");
    std::vector<Rational> grid;
    for (long k = 1; k <= 20; ++k) {
        if (tt.contains(q(k, 4))) {
            grid.push_back(q(k, 4));
        }
    }
    std::mt19937_64 rng(9);
    std::vector<ExtendedValue> vals{P(1), P(3), P(4)};
    int agree = 0;
    for (int trial = 0; trial < 40; ++trial) {
        FiniteMetricSpace s(tt, {"a", "b", "c"});
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = i + 1; j < 3; ++j) {
                s.set(i, j, vals[std::uniform_int_distribution<std::size_t>(0, 2)(rng)]);
            }
        }
        ValueApproximation phi = example_four_phi();
        bool brute = false;
        for (const auto& x : grid) {
            for (const auto& y : grid) {
                for (const auto& z : grid) {
                    bool in = phi.at(s.d(0, 1)).contains(ExtendedValue::principal(x)) &&
                              phi.at(s.d(0, 2)).contains(ExtendedValue::principal(y)) &&
                              phi.at(s.d(1, 2)).contains(ExtendedValue::principal(z));
                    brute = brute || (in && x <= y + z && y <= x + z && z <= x + y);
                }
            }
        }
        auto m = approximately_metric_check(s, phi);
        CHECK(m.has_value() == brute);
        agree += m.has_value() == brute;
    }
    CHECK(agree == 40);
}
