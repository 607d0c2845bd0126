// Realizing an approximation by an actual metric.
//
// Sum-complete carriers go through the metric refinement. Otherwise every
// distance is assigned a piece of the carrier and the resulting system of
// linear inequalities is decided by Fourier-Motzkin elimination.

#include "urysohn/metric_space.hpp"

#include <algorithm>
#include <map>

namespace urysohn {

namespace {

struct Constraint {
    std::vector<Rational> coef; // sum coef[k] * x_k  (< or <=)  rhs
    Rational rhs;
    bool strict = false;
};

class FourierMotzkin {
public:
    explicit FourierMotzkin(std::size_t vars) : vars_(vars) {}

    void add(Constraint c) { rows_.push_back(std::move(c)); }

    void add_bound(std::size_t k, const Rational& value, bool upper, bool strict) {
        Constraint c{std::vector<Rational>(vars_, Rational(0)), upper ? value : -value, strict};
        c.coef[k] = upper ? Rational(1) : Rational(-1);
        add(std::move(c));
    }

    std::optional<std::vector<Rational>> solve() const {
        std::vector<std::vector<Constraint>> stages;
        std::vector<Constraint> cur = rows_;
        for (std::size_t k = 0; k < vars_; ++k) {
            stages.push_back(cur);
            std::vector<Constraint> pos, neg, next;
            for (auto& c : cur) {
                int sgn = c.coef[k].is_zero() ? 0 : (c.coef[k].is_negative() ? -1 : 1);
                (sgn > 0 ? pos : sgn < 0 ? neg : next).push_back(c);
            }
            for (const auto& p : pos) {
                for (const auto& q : neg) {
                    Rational a = p.coef[k];
                    Rational b = -q.coef[k];
                    Constraint c{std::vector<Rational>(vars_, Rational(0)), p.rhs * b + q.rhs * a,
                                 p.strict || q.strict};
                    for (std::size_t j = 0; j < vars_; ++j) {
                        c.coef[j] = p.coef[j] * b + q.coef[j] * a;
                    }
                    c.coef[k] = Rational(0);
                    next.push_back(std::move(c));
                }
            }
            cur = prune(std::move(next));
        }
        for (const auto& c : cur) {
            if (c.strict ? !(Rational(0) < c.rhs) : c.rhs.is_negative()) {
                return std::nullopt;
            }
        }
        std::vector<Rational> x(vars_, Rational(0));
        for (std::size_t k = vars_; k-- > 0;) {
            std::optional<Rational> lo, hi;
            bool lo_strict = false, hi_strict = false;
            for (const auto& c : stages[k]) {
                if (c.coef[k].is_zero()) {
                    continue;
                }
                Rational rest = c.rhs;
                for (std::size_t j = k + 1; j < vars_; ++j) {
                    rest -= c.coef[j] * x[j];
                }
                Rational bound = rest / c.coef[k];
                if (!c.coef[k].is_negative()) {
                    if (!hi || bound < *hi || (bound == *hi && c.strict)) {
                        hi = bound;
                        hi_strict = c.strict;
                    }
                } else if (!lo || bound > *lo || (bound == *lo && c.strict)) {
                    lo = bound;
                    lo_strict = c.strict;
                }
            }
            if (lo && hi) {
                x[k] = (*lo == *hi) ? *lo : (*lo + *hi) / Rational(2);
            } else if (lo) {
                x[k] = lo_strict ? *lo + Rational(1) : *lo;
            } else if (hi) {
                x[k] = hi_strict ? *hi - Rational(1) : *hi;
            }
        }
        return x;
    }

private:
    // Scale each row so its first nonzero coefficient is +-1 and keep the
    // tightest row per coefficient vector.
    std::vector<Constraint> prune(std::vector<Constraint> rows) const {
        std::map<std::vector<Rational>, Constraint> best;
        std::vector<Constraint> constants;
        for (auto& c : rows) {
            auto lead = std::find_if(c.coef.begin(), c.coef.end(), [](const Rational& r) { return !r.is_zero(); });
            if (lead == c.coef.end()) {
                constants.push_back(std::move(c));
                continue;
            }
            Rational scale = lead->is_negative() ? -*lead : *lead;
            for (auto& v : c.coef) {
                v = v / scale;
            }
            c.rhs = c.rhs / scale;
            auto it = best.find(c.coef);
            if (it == best.end()) {
                best.emplace(c.coef, c);
            } else if (c.rhs < it->second.rhs || (c.rhs == it->second.rhs && c.strict)) {
                it->second = c;
            }
        }
        for (auto& [k, c] : best) {
            constants.push_back(std::move(c));
        }
        return constants;
    }

    std::size_t vars_;
    std::vector<Constraint> rows_;
};

bool sum_complete(const DistanceMonoidSpec& spec) {
    if (spec.kind() != MonoidKind::IntervalTruncatedAdd || spec.has_finitely_many_elements()) {
        return true;
    }
    return !check_sum_complete(spec.carrier());
}

std::optional<DistanceMatrix> via_refinement(const FiniteMetricSpace& space, const ValueApproximation& phi) {
    const auto& spec = space.spec();
    if (!validate_metric(space).empty()) {
        return std::nullopt;
    }
    const std::size_t n = space.size();
    // Omega is not an element: stand it in by an element above everything else.
    ExtendedValue stand_in = ExtendedValue::omega();
    bool has_omega = false;
    ExtendedValue below = ExtendedValue::principal(Rational(0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const auto& v = space.d(i, j);
            if (v.is_omega()) {
                has_omega = true;
                below = max(below, phi.at(v).lo);
            } else {
                below = max(below, v);
            }
        }
    }
    ValueApproximation psi;
    std::vector<ExtendedValue> X;
    if (has_omega) {
        stand_in = ExtendedValue::principal(element_in_between(spec, normalize_cut(spec, below.point(), true),
                                                               ExtendedValue::omega()));
        psi.set(stand_in, Interval::open_closed(phi.at(ExtendedValue::omega()).lo, ExtendedValue::omega()));
        X.push_back(stand_in);
    }
    auto value = [&](std::size_t i, std::size_t j) { return space.d(i, j).is_omega() ? stand_in : space.d(i, j); };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto& v = space.d(i, j);
            if (!v.is_omega() && !psi.covers(v)) {
                psi.set(v, phi.at(v));
                X.push_back(v);
            }
        }
    }
    auto refined = metric_refinement(spec, X, psi);
    DistanceMatrix m(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) {
                m[i][j] = refined.at(value(i, j)).hi.point();
            }
        }
    }
    return m;
}

struct Piece {
    Rational lo;
    bool lo_strict;
    std::optional<Rational> hi;
    bool hi_strict;
};

// Pieces of the carrier meeting the interval (lo, hi].
std::vector<Piece> admissible_pieces(const DistanceMonoidSpec& spec, const Interval& iv) {
    std::optional<Rational> cap;
    bool cap_strict = false;
    switch (iv.hi.kind()) {
    case CutKind::Principal:
    case CutKind::Successor:
        cap = iv.hi.point();
        break;
    case CutKind::Gap:
        cap = iv.hi.point();
        cap_strict = true;
        break;
    case CutKind::Omega:
        break;
    }
    std::vector<Piece> out;
    for (const auto& c : spec.carrier().pieces()) {
        Piece p{c.lo, !c.lo_closed, c.hi, c.hi && !c.hi_closed};
        if (p.lo < iv.lo.point() || (p.lo == iv.lo.point())) {
            p.lo = iv.lo.point();
            p.lo_strict = true;
        }
        if (cap && (!p.hi || *cap < *p.hi || (*cap == *p.hi && cap_strict))) {
            p.hi = cap;
            p.hi_strict = cap_strict;
        }
        if (p.hi && (*p.hi < p.lo || (*p.hi == p.lo && (p.lo_strict || p.hi_strict)))) {
            continue;
        }
        out.push_back(p);
    }
    return out;
}

std::optional<DistanceMatrix> via_pieces(const FiniteMetricSpace& space, const ValueApproximation& phi) {
    const auto& spec = space.spec();
    const std::size_t n = space.size();
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<std::vector<Piece>> options;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            pairs.emplace_back(i, j);
            options.push_back(admissible_pieces(spec, phi.at(space.d(i, j))));
            if (options.back().empty()) {
                return std::nullopt;
            }
        }
    }
    auto var = [&](std::size_t i, std::size_t j) {
        if (i > j) {
            std::swap(i, j);
        }
        return static_cast<std::size_t>(std::find(pairs.begin(), pairs.end(), std::make_pair(i, j)) - pairs.begin());
    };
    FourierMotzkin base(pairs.size());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = j + 1; k < n; ++k) {
                if (i == j || i == k) {
                    continue;
                }
                // d(j,k) <= d(i,j) + d(i,k)
                Constraint c{std::vector<Rational>(pairs.size(), Rational(0)), Rational(0), false};
                c.coef[var(j, k)] = Rational(1);
                c.coef[var(i, j)] = Rational(-1);
                c.coef[var(i, k)] = Rational(-1);
                base.add(std::move(c));
            }
        }
    }
    std::vector<std::size_t> choice(pairs.size(), 0);
    while (true) {
        FourierMotzkin fm = base;
        for (std::size_t v = 0; v < pairs.size(); ++v) {
            const auto& p = options[v][choice[v]];
            fm.add_bound(v, p.lo, false, p.lo_strict);
            if (p.hi) {
                fm.add_bound(v, *p.hi, true, p.hi_strict);
            }
        }
        if (auto x = fm.solve()) {
            DistanceMatrix m(n, std::vector<Rational>(n, Rational(0)));
            for (std::size_t v = 0; v < pairs.size(); ++v) {
                m[pairs[v].first][pairs[v].second] = (*x)[v];
                m[pairs[v].second][pairs[v].first] = (*x)[v];
            }
            return m;
        }
        std::size_t v = 0;
        while (v < choice.size() && ++choice[v] == options[v].size()) {
            choice[v++] = 0;
        }
        if (v == choice.size()) {
            return std::nullopt;
        }
    }
}

} // namespace

std::optional<DistanceMatrix> approximately_metric_check(const FiniteMetricSpace& space,
                                                         const ValueApproximation& phi) {
    for (std::size_t i = 0; i < space.size(); ++i) {
        for (std::size_t j = i + 1; j < space.size(); ++j) {
            const auto& v = space.d(i, j);
            if (!phi.covers(v) || !phi.at(v).contains(v)) {
                throw PreconditionError("phi does not approximate " + format_value(space.spec(), v));
            }
        }
    }
    if (space.size() < 2) {
        return DistanceMatrix(space.size(), std::vector<Rational>(space.size(), Rational(0)));
    }
    if (sum_complete(space.spec())) {
        return via_refinement(space, phi);
    }
    return via_pieces(space, phi);
}

} // namespace urysohn
