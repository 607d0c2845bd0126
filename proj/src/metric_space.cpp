#include "urysohn/metric_space.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace urysohn {

FiniteMetricSpace::FiniteMetricSpace(DistanceMonoidSpec spec, std::vector<std::string> points)
    : spec_(std::move(spec)), points_(std::move(points)) {
    std::set<std::string> seen(points_.begin(), points_.end());
    if (seen.size() != points_.size()) {
        throw std::invalid_argument("duplicate point labels");
    }
    dist_.assign(points_.size(), std::vector<ExtendedValue>(points_.size(), ExtendedValue::principal(Rational(0))));
}

std::optional<std::size_t> FiniteMetricSpace::index_of(const std::string& label) const {
    auto it = std::find(points_.begin(), points_.end(), label);
    if (it == points_.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - points_.begin());
}

void FiniteMetricSpace::set(std::size_t i, std::size_t j, const ExtendedValue& v) {
    dist_[i][j] = v;
    dist_[j][i] = v;
}

void FiniteMetricSpace::set(const std::string& a, const std::string& b, const ExtendedValue& v) {
    auto i = index_of(a);
    auto j = index_of(b);
    if (!i || !j) {
        throw std::invalid_argument("unknown point '" + (i ? b : a) + "'");
    }
    set(*i, *j, v);
}

std::size_t FiniteMetricSpace::add_point(const std::string& label, const std::vector<ExtendedValue>& row) {
    if (index_of(label)) {
        throw std::invalid_argument("point '" + label + "' already present");
    }
    if (row.size() != points_.size()) {
        throw std::invalid_argument("distance row has the wrong length");
    }
    points_.push_back(label);
    for (std::size_t i = 0; i < row.size(); ++i) {
        dist_[i].push_back(row[i]);
    }
    auto last = row;
    last.push_back(ExtendedValue::principal(Rational(0)));
    dist_.push_back(last);
    return points_.size() - 1;
}

FiniteMetricSpace FiniteMetricSpace::subspace(const std::vector<std::size_t>& indices) const {
    std::vector<std::string> labels;
    for (auto i : indices) {
        labels.push_back(points_.at(i));
    }
    FiniteMetricSpace out(spec_, labels);
    for (std::size_t a = 0; a < indices.size(); ++a) {
        for (std::size_t b = a + 1; b < indices.size(); ++b) {
            out.set(a, b, dist_[indices[a]][indices[b]]);
        }
    }
    return out;
}

bool FiniteMetricSpace::over_carrier() const {
    for (const auto& row : dist_) {
        for (const auto& v : row) {
            if (!v.is_principal()) {
                return false;
            }
        }
    }
    return true;
}

std::vector<MetricViolation> validate_metric(const FiniteMetricSpace& space) {
    std::vector<MetricViolation> out;
    const auto& spec = space.spec();
    const std::size_t n = space.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (!space.d(i, i).is_zero()) {
            out.push_back({"zero", {i}});
        }
        for (std::size_t j = i + 1; j < n; ++j) {
            if (space.d(i, j).is_zero()) {
                out.push_back({"zero", {i, j}});
            }
            if (space.d(i, j) != space.d(j, i)) {
                out.push_back({"symmetry", {i, j}});
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            for (std::size_t k = j + 1; k < n; ++k) {
                if (!is_triangle(spec, space.d(i, j), space.d(j, k), space.d(i, k))) {
                    out.push_back({"triangle", {i, j, k}});
                }
            }
        }
    }
    return out;
}

bool is_ambient_triangle(const DistanceMonoidSpec& spec, const Rational& a, const Rational& b, const Rational& c) {
    switch (spec.kind()) {
    case MonoidKind::IntervalTruncatedAdd:
        return a <= b + c && b <= a + c && c <= a + b;
    case MonoidKind::IntervalMax:
        return a <= max(b, c) && b <= max(a, c) && c <= max(a, b);
    case MonoidKind::Finite:
        return a <= spec.ambient_sum(b, c) && b <= spec.ambient_sum(a, c) && c <= spec.ambient_sum(a, b);
    }
    return false;
}

std::optional<std::pair<std::size_t, std::size_t>> check_katetov(const FiniteMetricSpace& space,
                                                                  const std::vector<ExtendedValue>& f) {
    if (f.size() != space.size()) {
        throw PreconditionError("Katetov map has the wrong number of values");
    }
    for (const auto& v : f) {
        if (v.is_zero()) {
            throw PreconditionError("Katetov map values must be nonzero");
        }
    }
    for (std::size_t i = 0; i < space.size(); ++i) {
        for (std::size_t j = i + 1; j < space.size(); ++j) {
            if (!is_triangle(space.spec(), space.d(i, j), f[i], f[j])) {
                return std::make_pair(i, j);
            }
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Approximations
// ---------------------------------------------------------------------------

bool Interval::subset_of(const Interval& o) const {
    if (zero || o.zero) {
        return zero == o.zero;
    }
    return o.lo <= lo && hi <= o.hi;
}

std::string format_interval(const DistanceMonoidSpec& spec, const Interval& iv) {
    if (iv.zero) {
        return "{0}";
    }
    return "(" + format_value(spec, iv.lo) + ", " + format_value(spec, iv.hi) + "]";
}

void ValueApproximation::set(const ExtendedValue& v, const Interval& iv) {
    for (auto& [k, cur] : entries_) {
        if (k == v) {
            cur = iv;
            return;
        }
    }
    entries_.emplace_back(v, iv);
}

const Interval& ValueApproximation::at(const ExtendedValue& v) const {
    for (const auto& [k, iv] : entries_) {
        if (k == v) {
            return iv;
        }
    }
    throw PreconditionError("approximation does not cover a value");
}

bool ValueApproximation::covers(const ExtendedValue& v) const {
    return std::any_of(entries_.begin(), entries_.end(), [&](const auto& e) { return e.first == v; });
}

bool ValueApproximation::valid() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const auto& e) { return e.second.contains(e.first); });
}

bool ValueApproximation::refines(const ValueApproximation& other) const {
    for (const auto& [v, iv] : entries_) {
        if (v.is_zero() && !other.covers(v)) {
            continue; // 0 maps to {0} implicitly
        }
        if (!other.covers(v) || !iv.subset_of(other.at(v))) {
            return false;
        }
    }
    return true;
}

PairApproximation::PairApproximation(std::size_t n) : cells_(n, std::vector<Interval>(n)) {}

void PairApproximation::set(std::size_t i, std::size_t j, const Interval& iv) {
    cells_[i][j] = iv;
    cells_[j][i] = iv;
}

bool PairApproximation::valid_for(const FiniteMetricSpace& space) const {
    if (space.size() != size()) {
        return false;
    }
    for (std::size_t i = 0; i < size(); ++i) {
        for (std::size_t j = 0; j < size(); ++j) {
            if (!cells_[i][j].contains(space.d(i, j))) {
                return false;
            }
        }
    }
    return true;
}

bool PairApproximation::refines(const PairApproximation& other) const {
    if (other.size() != size()) {
        return false;
    }
    for (std::size_t i = 0; i < size(); ++i) {
        for (std::size_t j = 0; j < size(); ++j) {
            if (!cells_[i][j].subset_of(other.cells_[i][j])) {
                return false;
            }
        }
    }
    return true;
}

ValueApproximation PairApproximation::hat(const FiniteMetricSpace& space) const {
    ValueApproximation out;
    for (std::size_t i = 0; i < size(); ++i) {
        for (std::size_t j = 0; j < size(); ++j) {
            const auto& v = space.d(i, j);
            const auto& iv = cells_[i][j];
            if (v.is_zero()) {
                out.set(v, Interval::point_zero());
                continue;
            }
            if (!out.covers(v)) {
                out.set(v, iv);
                continue;
            }
            Interval cur = out.at(v);
            cur.lo = max(cur.lo, iv.lo);
            cur.hi = min(cur.hi, iv.hi);
            out.set(v, cur);
        }
    }
    return out;
}

PairApproximation canonical_approximation(const FiniteMetricSpace& space) {
    const auto& S = space.spec().carrier();
    PairApproximation out(space.size());
    for (std::size_t i = 0; i < space.size(); ++i) {
        for (std::size_t j = i + 1; j < space.size(); ++j) {
            const auto& v = space.d(i, j);
            if (!v.is_principal()) {
                throw PreconditionError("canonical approximation needs carrier distances");
            }
            auto pred = S.sup_lt(v.point());
            if (!pred || !pred->attained) {
                throw PreconditionError(format_value(space.spec(), v) + " has no immediate predecessor");
            }
            out.set(i, j, Interval::open_closed(ExtendedValue::principal(pred->value), v));
        }
    }
    return out;
}

namespace {

void require_sum_complete(const DistanceMonoidSpec& spec) {
    if (spec.kind() == MonoidKind::IntervalTruncatedAdd) {
        if (auto w = check_sum_complete(spec.carrier())) {
            throw PreconditionError("carrier is not sum-complete (witness pair (" + w->first.str() + ", " +
                                    w->second.str() + "))");
        }
    }
}

std::vector<ExtendedValue> sorted_nonzero(std::vector<ExtendedValue> X) {
    std::sort(X.begin(), X.end());
    X.erase(std::unique(X.begin(), X.end()), X.end());
    X.erase(std::remove_if(X.begin(), X.end(), [](const ExtendedValue& v) { return v.is_zero(); }), X.end());
    return X;
}

} // namespace

ValueApproximation metric_refinement(const DistanceMonoidSpec& spec, std::vector<ExtendedValue> X,
                                     const ValueApproximation& psi) {
    require_sum_complete(spec);
    auto alpha = sorted_nonzero(std::move(X));
    for (const auto& a : alpha) {
        if (a.is_omega()) {
            throw PreconditionError("X is not bounded by a carrier element");
        }
        if (!psi.covers(a) || !psi.at(a).contains(a)) {
            throw PreconditionError("psi is not an approximation of X at " + format_value(spec, a));
        }
    }
    const std::size_t n = alpha.size();
    std::vector<Rational> up(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto& hi = psi.at(alpha[k]).hi;
        if (hi.is_principal()) {
            up[k] = hi.point();
        } else {
            up[k] = element_in_between(spec, alpha[k], hi);
        }
    }
    // Shrink each upper end below the next value of X.
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (ExtendedValue::principal(up[k]) >= alpha[k + 1]) {
            up[k] = element_in_between(spec, alpha[k], alpha[k + 1]);
        }
    }
    std::vector<Rational> s(n);
    ValueApproximation phi;
    phi.set(ExtendedValue::principal(Rational(0)), Interval::point_zero());
    for (std::size_t k = 0; k < n; ++k) {
        Rational best = up[k];
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = i; j < k; ++j) {
                if (alpha[k] <= star_add(spec, alpha[i], alpha[j])) {
                    best = min(best, op_add(spec, s[i], s[j]));
                }
            }
        }
        s[k] = best;
        phi.set(alpha[k], Interval::open_closed(psi.at(alpha[k]).lo, ExtendedValue::principal(best)));
    }
    return phi;
}

bool is_metric_approximation(const DistanceMonoidSpec& spec, const std::vector<ExtendedValue>& X,
                             const ValueApproximation& phi) {
    auto upper = [&](const ExtendedValue& v) -> std::optional<Rational> {
        if (v.is_zero()) {
            return Rational(0);
        }
        const auto& iv = phi.at(v);
        if (!iv.hi.is_principal()) {
            return std::nullopt;
        }
        return iv.hi.point();
    };
    for (const auto& a : X) {
        if (!phi.covers(a) && !a.is_zero()) {
            return false;
        }
        if (!upper(a)) {
            return false;
        }
    }
    for (const auto& a : X) {
        for (const auto& b : X) {
            for (const auto& c : X) {
                if (a <= star_add(spec, b, c) && *upper(a) > op_add(spec, *upper(b), *upper(c))) {
                    return false;
                }
            }
        }
    }
    return true;
}

bool is_ambient_metric(const DistanceMonoidSpec& spec, const DistanceMatrix& m) {
    const std::size_t n = m.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (!m[i][i].is_zero()) {
            return false;
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (m[i][j] != m[j][i] || (i != j && m[i][j].is_zero()) || !spec.contains(m[i][j])) {
                return false;
            }
            for (std::size_t k = 0; k < n; ++k) {
                if (!is_ambient_triangle(spec, m[i][j], m[j][k], m[i][k])) {
                    return false;
                }
            }
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Four values
// ---------------------------------------------------------------------------

std::string format_quadruple(const DistanceMonoidSpec& spec, const Quadruple& q) {
    auto f = [&](const Rational& r) { return spec.format_element(r); };
    return "(" + f(q.u1) + "," + f(q.u2) + "," + f(q.v1) + "," + f(q.v2) + ";" + f(q.s) + ")";
}

namespace {

// Closed range [lo, hi] of t with (t, u, v) an ambient triangle.
std::pair<Rational, Rational> ambient_triangle_range(const DistanceMonoidSpec& spec, const Rational& u,
                                                     const Rational& v) {
    if (spec.kind() == MonoidKind::IntervalMax) {
        if (u == v) {
            return {Rational(0), u};
        }
        return {max(u, v), max(u, v)};
    }
    Rational diff = u < v ? v - u : u - v;
    return {diff, u + v};
}

} // namespace

std::optional<Rational> four_values_check(const DistanceMonoidSpec& spec, const Quadruple& q) {
    for (const auto* r : {&q.u1, &q.u2, &q.v1, &q.v2, &q.s}) {
        spec.require_element(*r);
    }
    if (!is_ambient_triangle(spec, q.s, q.u1, q.u2)) {
        throw PreconditionError("(s,u1,u2) = (" + spec.format_element(q.s) + "," + spec.format_element(q.u1) + "," +
                                spec.format_element(q.u2) + ") is not a triangle");
    }
    if (!is_ambient_triangle(spec, q.s, q.v1, q.v2)) {
        throw PreconditionError("(s,v1,v2) = (" + spec.format_element(q.s) + "," + spec.format_element(q.v1) + "," +
                                spec.format_element(q.v2) + ") is not a triangle");
    }
    auto ok = [&](const Rational& t) {
        return is_ambient_triangle(spec, t, q.u1, q.v1) && is_ambient_triangle(spec, t, q.u2, q.v2);
    };
    if (spec.is_finite()) {
        for (std::size_t t = 1; t < spec.size(); ++t) {
            if (ok(Rational(static_cast<long>(t)))) {
                return Rational(static_cast<long>(t));
            }
        }
        return ok(Rational(0)) ? std::optional<Rational>(Rational(0)) : std::nullopt;
    }
    auto [lo1, hi1] = ambient_triangle_range(spec, q.u1, q.v1);
    auto [lo2, hi2] = ambient_triangle_range(spec, q.u2, q.v2);
    Rational lo = max(lo1, lo2);
    Rational hi = min(hi1, hi2);
    if (hi < lo) {
        return std::nullopt;
    }
    const auto& S = spec.carrier();
    auto first = lo.is_zero() ? S.inf_gt(lo) : S.inf_ge(lo);
    if (first) {
        if (first->attained && first->value <= hi) {
            return first->value;
        }
        if (!first->attained && first->value < hi) {
            if (auto t = S.element_between(first->value, hi)) {
                return *t;
            }
            if (S.contains(hi)) {
                return hi;
            }
        }
    }
    if (lo.is_zero()) {
        return Rational(0);
    }
    return std::nullopt;
}

FourValuesReport four_values_search(const DistanceMonoidSpec& spec) {
    FourValuesReport report;
    auto search = [&](const std::vector<Rational>& pool) -> std::optional<Quadruple> {
        const std::size_t n = pool.size();
        // tri[a][b][c]: (pool[a], pool[b], pool[c]) is an ambient triangle.
        std::vector<char> tri(n * n * n);
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = 0; b < n; ++b) {
                for (std::size_t c = 0; c < n; ++c) {
                    tri[(a * n + b) * n + c] = is_ambient_triangle(spec, pool[a], pool[b], pool[c]);
                }
            }
        }
        for (std::size_t s = 0; s < n; ++s) {
            for (std::size_t u1 = 0; u1 < n; ++u1) {
                for (std::size_t u2 = 0; u2 < n; ++u2) {
                    if (!tri[(s * n + u1) * n + u2]) {
                        continue;
                    }
                    for (std::size_t v1r = n; v1r-- > 0;) {
                        for (std::size_t v2 = 0; v2 < n; ++v2) {
                            if (!tri[(s * n + v1r) * n + v2]) {
                                continue;
                            }
                            Quadruple q{pool[u1], pool[u2], pool[v1r], pool[v2], pool[s]};
                            if (!four_values_check(spec, q)) {
                                return q;
                            }
                        }
                    }
                }
            }
        }
        return std::nullopt;
    };

    if (spec.has_finitely_many_elements()) {
        report.witness = search(spec.finite_elements());
        return report;
    }
    if (spec.kind() == MonoidKind::IntervalMax) {
        return report;
    }
    const auto& S = spec.carrier();
    if (!check_sum_complete(S)) {
        if (auto w = check_associativity(spec)) {
            Rational r = (*w)[0];
            Rational s = (*w)[1];
            Rational t = (*w)[2];
            Rational left = op_add(spec, op_add(spec, r, s), t);
            Rational right = op_add(spec, r, op_add(spec, s, t));
            if (left < right) {
                std::swap(r, t);
            }
            Rational rs = op_add(spec, r, s);
            Quadruple q{r, s, op_add(spec, rs, t), t, rs};
            if (!four_values_check(spec, q)) {
                report.witness = q;
            }
        }
        return report;
    }
    // Not sum-complete: search a critical sample only.
    report.exhaustive = false;
    std::set<Rational> pool;
    for (const auto& p : S.critical_points()) {
        for (auto x : {S.max_le(p), S.min_ge(p)}) {
            if (x) {
                pool.insert(*x);
            }
        }
        for (auto b : {S.sup_lt(p), S.inf_gt(p)}) {
            if (b && b->attained) {
                pool.insert(b->value);
            }
        }
        if (auto x = S.element_between(p, std::nullopt)) {
            pool.insert(*x);
        }
    }
    std::vector<Rational> sample(pool.begin(), pool.end());
    if (sample.size() > 16) {
        sample.resize(16);
    }
    report.witness = search(sample);
    return report;
}

// ---------------------------------------------------------------------------
// Amalgamation
// ---------------------------------------------------------------------------

namespace {

void require_same_spec(const FiniteMetricSpace& a, const FiniteMetricSpace& b) {
    if (a.spec().kind() != b.spec().kind()) {
        throw PreconditionError("spaces are over different monoids");
    }
}

std::vector<std::string> shared_labels(const FiniteMetricSpace& a, const FiniteMetricSpace& b) {
    std::vector<std::string> out;
    for (const auto& p : a.points()) {
        if (b.index_of(p)) {
            out.push_back(p);
        }
    }
    return out;
}

void require_agreement(const FiniteMetricSpace& a, const FiniteMetricSpace& b, const std::vector<std::string>& shared) {
    for (const auto& p : shared) {
        for (const auto& q : shared) {
            if (a.d(*a.index_of(p), *a.index_of(q)) != b.d(*b.index_of(p), *b.index_of(q))) {
                throw PreconditionError("spaces disagree on d(" + p + "," + q + ")");
            }
        }
    }
}

Rational elem(const ExtendedValue& v) {
    if (!v.is_principal()) {
        throw PreconditionError("amalgamation needs carrier distances");
    }
    return v.point();
}

// Least cut of D(r, s) = {x : r <= s (+) x and s <= r (+) x} in the ambient monoid.
ExtendedValue upward_cut(const DistanceMonoidSpec& spec, const Rational& r, const Rational& s) {
    switch (spec.kind()) {
    case MonoidKind::Finite:
        for (const auto& x : spec.finite_elements()) {
            if (r <= spec.ambient_sum(s, x) && s <= spec.ambient_sum(r, x)) {
                return ExtendedValue::principal(x);
            }
        }
        return top_cut(spec);
    case MonoidKind::IntervalMax:
        return r == s ? ExtendedValue::principal(Rational(0)) : ExtendedValue::principal(max(r, s));
    case MonoidKind::IntervalTruncatedAdd:
        break;
    }
    return normalize_cut(spec, r < s ? s - r : r - s, false);
}

} // namespace

FiniteMetricSpace free_amalgam(const FiniteMetricSpace& a, const FiniteMetricSpace& b) {
    require_same_spec(a, b);
    auto shared = shared_labels(a, b);
    if (shared.empty()) {
        throw PreconditionError("free amalgam needs a common point");
    }
    require_agreement(a, b, shared);
    FiniteMetricSpace out = a;
    const auto& spec = a.spec();
    for (std::size_t j = 0; j < b.size(); ++j) {
        const auto& label = b.points()[j];
        if (a.index_of(label)) {
            continue;
        }
        std::vector<ExtendedValue> row;
        for (std::size_t i = 0; i < out.size(); ++i) {
            const auto& p = out.points()[i];
            if (auto bi = b.index_of(p)) {
                row.push_back(b.d(*bi, j));
                continue;
            }
            std::optional<ExtendedValue> best;
            for (const auto& z : shared) {
                auto v = star_add(spec, a.d(*a.index_of(p), *a.index_of(z)), b.d(*b.index_of(z), j));
                if (!best || v < *best) {
                    best = v;
                }
            }
            row.push_back(*best);
        }
        out.add_point(label, row);
    }
    return out;
}

FiniteMetricSpace one_point_amalgam(const FiniteMetricSpace& x1, const FiniteMetricSpace& x2) {
    require_same_spec(x1, x2);
    const auto& spec = x1.spec();
    auto shared = shared_labels(x1, x2);
    if (shared.empty() || shared.size() + 1 != x1.size() || shared.size() + 1 != x2.size()) {
        throw PreconditionError("one-point amalgam needs spaces differing by one point each");
    }
    require_agreement(x1, x2, shared);
    std::size_t p1 = 0;
    std::size_t p2 = 0;
    while (x2.index_of(x1.points()[p1])) {
        ++p1;
    }
    while (x1.index_of(x2.points()[p2])) {
        ++p2;
    }
    std::sort(shared.begin(), shared.end());
    auto d1 = [&](const std::string& x) { return elem(x1.d(p1, *x1.index_of(x))); };
    auto d2 = [&](const std::string& x) { return elem(x2.d(p2, *x2.index_of(x))); };

    std::string y = shared.front();
    std::string yp = shared.front();
    for (const auto& x : shared) {
        if (spec.ambient_sum(d1(x), d2(x)) < spec.ambient_sum(d1(y), d2(y))) {
            y = x;
        }
        if (upward_cut(spec, d1(x), d2(x)) > upward_cut(spec, d1(yp), d2(yp))) {
            yp = x;
        }
    }
    Quadruple q{d1(y), d1(yp), d2(y), d2(yp), elem(x1.d(*x1.index_of(y), *x1.index_of(yp)))};
    auto t = four_values_check(spec, q);
    if (!t) {
        throw AmalgamationFailure("no t completes the four-values configuration " + format_quadruple(spec, q), q);
    }
    if (t->is_zero()) {
        t = min(d1(y), d1(yp));
    }
    for (const auto& x : shared) {
        if (!is_ambient_triangle(spec, *t, d1(x), d2(x))) {
            throw AmalgamationFailure("t = " + spec.format_element(*t) + " fails the triangle at " + x, q);
        }
    }
    std::vector<ExtendedValue> row;
    for (std::size_t i = 0; i < x1.size(); ++i) {
        row.push_back(i == p1 ? ExtendedValue::principal(*t) : x2.d(p2, *x2.index_of(x1.points()[i])));
    }
    FiniteMetricSpace out = x1;
    out.add_point(x2.points()[p2], row);
    return out;
}

FiniteMetricSpace disjoint_amalgam(const FiniteMetricSpace& x1, const FiniteMetricSpace& x2) {
    require_same_spec(x1, x2);
    auto shared = shared_labels(x1, x2);
    if (shared.empty()) {
        throw PreconditionError("amalgamation needs a common point");
    }
    require_agreement(x1, x2, shared);
    std::vector<std::string> fresh;
    for (const auto& p : x2.points()) {
        if (!x1.index_of(p)) {
            fresh.push_back(p);
        }
    }
    std::sort(fresh.begin(), fresh.end());
    std::vector<std::string> outside;
    for (const auto& p : x1.points()) {
        if (!x2.index_of(p)) {
            outside.push_back(p);
        }
    }
    FiniteMetricSpace out = x1;
    // Points whose distance to the next new point is already known.
    std::vector<std::string> known = shared;
    for (const auto& p : fresh) {
        std::vector<std::optional<ExtendedValue>> to_p(out.size());
        for (std::size_t i = 0; i < out.size(); ++i) {
            if (auto j = x2.index_of(out.points()[i])) {
                to_p[i] = x2.d(*j, *x2.index_of(p));
            }
        }
        std::vector<std::string> base = known;
        for (const auto& q : outside) {
            // Base case on base + {q} (inside out) and base + {p}.
            std::vector<std::size_t> left_idx;
            for (const auto& b : base) {
                left_idx.push_back(*out.index_of(b));
            }
            left_idx.push_back(*out.index_of(q));
            FiniteMetricSpace left = out.subspace(left_idx);
            FiniteMetricSpace right(out.spec(), base);
            for (std::size_t a = 0; a < base.size(); ++a) {
                for (std::size_t b = a + 1; b < base.size(); ++b) {
                    right.set(a, b, out.d(left_idx[a], left_idx[b]));
                }
            }
            std::vector<ExtendedValue> row;
            for (const auto& b : base) {
                row.push_back(*to_p[*out.index_of(b)]);
            }
            right.add_point(p, row);
            auto merged = one_point_amalgam(left, right);
            to_p[*out.index_of(q)] = merged.d(*merged.index_of(q), *merged.index_of(p));
            base.push_back(q);
        }
        std::vector<ExtendedValue> row;
        for (const auto& v : to_p) {
            row.push_back(*v);
        }
        out.add_point(p, row);
        known.push_back(p);
    }
    return out;
}

} // namespace urysohn
