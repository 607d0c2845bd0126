#include "urysohn/monoid.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

namespace urysohn {

std::string to_string(MonoidKind kind) {
    switch (kind) {
    case MonoidKind::Finite:
        return "finite";
    case MonoidKind::IntervalTruncatedAdd:
        return "interval-truncated-add";
    case MonoidKind::IntervalMax:
        return "interval-max";
    }
    return "?";
}

namespace {

std::vector<Rational> sorted_values(std::vector<Rational> values) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    if (values.empty() || values.front() != Rational(0)) {
        throw std::invalid_argument("finite carrier must contain 0");
    }
    if (values.front().is_negative()) {
        throw std::invalid_argument("negative distance");
    }
    return values;
}

int index_of(const DistanceMonoidSpec& spec, const Rational& r) {
    if (!r.is_integer() || r.is_negative() || r >= Rational(static_cast<long>(spec.size()))) {
        throw CarrierViolation("element index " + r.str() + " out of range");
    }
    return static_cast<int>(r.raw().get_num().get_si());
}

} // namespace

DistanceMonoidSpec DistanceMonoidSpec::finite(std::vector<std::string> labels, std::vector<std::vector<int>> table) {
    if (labels.empty()) {
        throw std::invalid_argument("finite monoid needs at least the element 0");
    }
    std::set<std::string> seen(labels.begin(), labels.end());
    if (seen.size() != labels.size()) {
        throw std::invalid_argument("duplicate element labels");
    }
    const int n = static_cast<int>(labels.size());
    if (static_cast<int>(table.size()) != n) {
        throw std::invalid_argument("table must have one row per element");
    }
    for (const auto& row : table) {
        if (static_cast<int>(row.size()) != n) {
            throw std::invalid_argument("table must be square");
        }
        for (int v : row) {
            // -1 marks an undefined entry, reported by the totality check.
            if (v < -1 || v >= n) {
                throw std::invalid_argument("table entry " + std::to_string(v) + " out of range");
            }
        }
    }
    DistanceMonoidSpec spec;
    spec.kind_ = MonoidKind::Finite;
    IntervalComponent positions;
    positions.hi = Rational(n - 1);
    positions.hi_closed = true;
    spec.carrier_ = std::make_shared<const IntervalUnionCarrier>(std::vector<IntervalComponent>{positions}, Rational(1));
    spec.labels_ = std::move(labels);
    spec.table_ = std::move(table);
    return spec;
}

DistanceMonoidSpec DistanceMonoidSpec::finite_truncated(std::vector<Rational> values) {
    values = sorted_values(std::move(values));
    const std::size_t n = values.size();
    std::vector<std::string> labels;
    std::vector<std::vector<int>> table(n, std::vector<int>(n));
    for (const auto& v : values) {
        labels.push_back(v.str());
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Rational sum = values[i] + values[j];
            auto it = std::upper_bound(values.begin(), values.end(), sum);
            table[i][j] = static_cast<int>(it - values.begin()) - 1;
        }
    }
    auto spec = finite(std::move(labels), std::move(table));
    spec.values_ = std::move(values);
    return spec;
}

DistanceMonoidSpec DistanceMonoidSpec::finite_max(std::vector<Rational> values) {
    values = sorted_values(std::move(values));
    const std::size_t n = values.size();
    std::vector<std::string> labels;
    std::vector<std::vector<int>> table(n, std::vector<int>(n));
    for (const auto& v : values) {
        labels.push_back(v.str());
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            table[i][j] = static_cast<int>(std::max(i, j));
        }
    }
    auto spec = finite(std::move(labels), std::move(table));
    spec.values_ = std::move(values);
    return spec;
}

DistanceMonoidSpec DistanceMonoidSpec::interval(MonoidKind kind, IntervalUnionCarrier carrier) {
    if (kind == MonoidKind::Finite) {
        throw std::invalid_argument("interval monoid needs an interval kind");
    }
    DistanceMonoidSpec spec;
    spec.kind_ = kind;
    spec.carrier_ = std::make_shared<const IntervalUnionCarrier>(std::move(carrier));
    return spec;
}

const IntervalUnionCarrier& DistanceMonoidSpec::carrier() const { return *carrier_; }

bool DistanceMonoidSpec::contains(const Rational& element) const {
    if (is_finite()) {
        return element.is_integer() && !element.is_negative() && element < Rational(static_cast<long>(size()));
    }
    return carrier_->contains(element);
}

void DistanceMonoidSpec::require_element(const Rational& element) const {
    if (!contains(element)) {
        throw CarrierViolation(format_element(element) + " is not in the carrier");
    }
}

std::optional<Rational> DistanceMonoidSpec::max_element() const {
    if (is_finite()) {
        return Rational(static_cast<long>(size()) - 1);
    }
    return carrier_->max_element();
}

bool DistanceMonoidSpec::has_finitely_many_elements() const { return is_finite() || carrier_->is_finite_set(); }

std::vector<Rational> DistanceMonoidSpec::finite_elements() const {
    if (is_finite()) {
        std::vector<Rational> out;
        for (std::size_t i = 0; i < size(); ++i) {
            out.emplace_back(static_cast<long>(i));
        }
        return out;
    }
    return carrier_->elements();
}

std::string DistanceMonoidSpec::format_element(const Rational& element) const {
    if (is_finite()) {
        if (element.is_integer() && !element.is_negative() && element < Rational(static_cast<long>(size()))) {
            return labels_[element.raw().get_num().get_si()];
        }
        return "#" + element.str();
    }
    return element.str();
}

std::optional<Rational> DistanceMonoidSpec::parse_element(std::string_view text) const {
    if (is_finite()) {
        for (std::size_t i = 0; i < labels_.size(); ++i) {
            if (labels_[i] == text) {
                return Rational(static_cast<long>(i));
            }
        }
        if (!values_.empty()) {
            if (auto q = Rational::parse(text)) {
                auto it = std::find(values_.begin(), values_.end(), *q);
                if (it != values_.end()) {
                    return Rational(static_cast<long>(it - values_.begin()));
                }
            }
        }
        return std::nullopt;
    }
    auto q = Rational::parse(text);
    if (!q || !carrier_->contains(*q)) {
        return std::nullopt;
    }
    return q;
}

Rational DistanceMonoidSpec::ambient_sum(const Rational& r, const Rational& s) const {
    switch (kind_) {
    case MonoidKind::Finite: {
        int v = table_[index_of(*this, r)][index_of(*this, s)];
        if (v < 0) {
            throw UnsupportedOperation("sum of " + format_element(r) + " and " + format_element(s) + " is undefined");
        }
        return Rational(v);
    }
    case MonoidKind::IntervalTruncatedAdd:
        return r + s;
    case MonoidKind::IntervalMax:
        return max(r, s);
    }
    return r;
}

Rational op_add(const DistanceMonoidSpec& spec, const Rational& r, const Rational& s) {
    spec.require_element(r);
    spec.require_element(s);
    switch (spec.kind()) {
    case MonoidKind::Finite:
        return spec.ambient_sum(r, s);
    case MonoidKind::IntervalMax:
        return max(r, s);
    case MonoidKind::IntervalTruncatedAdd:
        break;
    }
    const auto& c = spec.carrier();
    Rational y = r + s;
    Bound b = c.sup_le(y);
    if (b.attained) {
        return b.value;
    }
    // The truncation set has no maximum. Its least upper cut is still an
    // element when S resumes with a minimum right after the supremum.
    if (auto next = c.min_ge(b.value)) {
        return *next;
    }
    throw UnsupportedOperation("sum of " + r.str() + " and " + s.str() + " is not attained in the carrier (witness pair (" +
                               r.str() + ", " + s.str() + "))");
}

// ---------------------------------------------------------------------------
// Sum completeness
// ---------------------------------------------------------------------------

namespace {

struct Span {
    Rational lo;
    bool lo_closed;
    std::optional<Rational> hi;
    bool hi_closed;
};

std::optional<Span> intersect(const Span& a, const Span& b) {
    Span out{a.lo, a.lo_closed, a.hi, a.hi_closed};
    if (b.lo > out.lo || (b.lo == out.lo && !b.lo_closed)) {
        out.lo = b.lo;
        out.lo_closed = b.lo_closed;
    }
    if (b.hi && (!out.hi || *b.hi < *out.hi || (*b.hi == *out.hi && !b.hi_closed))) {
        out.hi = b.hi;
        out.hi_closed = b.hi_closed;
    }
    if (out.hi && (*out.hi < out.lo || (*out.hi == out.lo && !(out.lo_closed && out.hi_closed)))) {
        return std::nullopt;
    }
    return out;
}

Span span_of(const IntervalComponent& c) { return {c.lo, c.lo_closed, c.hi, c.hi_closed}; }

// A simple point of a nonempty span, preferring its lower end, then `hint`.
Rational pick(const Span& s, const std::optional<Rational>& hint = std::nullopt) {
    auto inside = [&](const Rational& x) {
        return (x > s.lo || (x == s.lo && s.lo_closed)) && (!s.hi || x < *s.hi || (x == *s.hi && s.hi_closed));
    };
    if (hint && inside(*hint)) {
        return *hint;
    }
    if (s.lo_closed) {
        return s.lo;
    }
    if (!s.hi) {
        Rational x = s.lo.floor() + Rational(1);
        return x;
    }
    for (Rational den : {Rational(1), Rational(2), Rational(4)}) {
        Rational x = ((s.lo * den).floor() + Rational(1)) / den;
        if (inside(x)) {
            return x;
        }
    }
    return (s.lo + *s.hi) / Rational(2);
}

// Pairs whose ambient sum has an unattained supremum. With `only_total`
// restricted to sums whose rounding-up also fails.
std::optional<std::pair<Rational, Rational>> unattained_sum(const IntervalUnionCarrier& carrier, bool only_total) {
    if (carrier.is_lattice()) {
        return std::nullopt;
    }
    const auto& pieces = carrier.pieces();
    std::vector<Span> bad;
    for (const auto& p : pieces) {
        if (!p.hi || p.hi_closed || carrier.contains(*p.hi) || p.lo == *p.hi) {
            continue;
        }
        const Rational& b = *p.hi;
        auto next = carrier.inf_gt(b);
        if (next && next->attained) {
            if (only_total) {
                continue;
            }
            bad.push_back({b, true, next->value, false});
        } else if (next) {
            bad.push_back({b, true, next->value, true});
        } else {
            bad.push_back({b, true, std::nullopt, false});
        }
    }
    std::optional<std::pair<Rational, Rational>> best;
    std::optional<Rational> best_y;
    for (const auto& range : bad) {
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            for (std::size_t j = i; j < pieces.size(); ++j) {
                const auto& I = pieces[i];
                const auto& J = pieces[j];
                Span sum{I.lo + J.lo, I.lo_closed && J.lo_closed, std::nullopt, false};
                if (I.hi && J.hi) {
                    sum.hi = *I.hi + *J.hi;
                    sum.hi_closed = I.hi_closed && J.hi_closed;
                }
                auto meet = intersect(sum, range);
                if (!meet) {
                    continue;
                }
                Rational y = pick(*meet);
                if (best_y && *best_y <= y) {
                    continue;
                }
                // r in I with y - r in J.
                Span shifted{J.hi ? y - *J.hi : Rational(0), J.hi ? J.hi_closed : true, y - J.lo, J.lo_closed};
                if (!J.hi) {
                    shifted.lo = I.lo;
                    shifted.lo_closed = I.lo_closed;
                }
                auto rs = intersect(span_of(I), shifted);
                if (!rs) {
                    continue;
                }
                Rational r = pick(*rs, y / Rational(2));
                Rational s = y - r;
                best_y = y;
                best = std::make_pair(min(r, s), max(r, s));
            }
        }
    }
    return best;
}

} // namespace

std::optional<std::pair<Rational, Rational>> check_sum_complete(const IntervalUnionCarrier& carrier) {
    return unattained_sum(carrier, false);
}

// ---------------------------------------------------------------------------
// Axiom checks
// ---------------------------------------------------------------------------

namespace {

std::vector<Rational> sample_pool(const DistanceMonoidSpec& spec, std::uint64_t seed, std::size_t extra) {
    const auto& c = spec.carrier();
    std::vector<Rational> pool = c.sample_elements();
    std::mt19937_64 rng(seed);
    Rational top = c.critical_points().back() + Rational(3);
    std::uniform_int_distribution<long> den_dist(1, 12);
    for (std::size_t k = 0; k < extra; ++k) {
        long den = den_dist(rng);
        long num = std::uniform_int_distribution<long>(0, (top * Rational(den)).floor().raw().get_num().get_si())(rng);
        Rational x(num, den);
        if (auto e = c.max_le(x)) {
            pool.push_back(*e);
        }
    }
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    return pool;
}

} // namespace

AxiomReport check_magma_axioms(const DistanceMonoidSpec& spec, std::uint64_t seed) {
    AxiomReport report;
    auto flag = [&](std::string axiom, std::vector<Rational> tuple) {
        report.passed = false;
        report.violations.push_back({std::move(axiom), std::move(tuple)});
    };
    if (spec.is_finite()) {
        const auto& t = spec.table();
        const int n = static_cast<int>(spec.size());
        auto R = [](int i) { return Rational(i); };
        for (int r = 0; r < n; ++r) {
            for (int s = 0; s < n; ++s) {
                if (t[r][s] < 0) {
                    flag("totality", {R(r), R(s)});
                }
            }
        }
        for (int r = 0; r < n; ++r) {
            for (int s = 0; s < n; ++s) {
                if (t[r][s] >= 0 && t[r][s] < r) {
                    flag("positivity", {R(r), R(s)});
                }
            }
        }
        for (int r = 0; r < n; ++r) {
            for (int s = r + 1; s < n; ++s) {
                for (int u = 0; u < n; ++u) {
                    if (t[r][u] >= 0 && t[s][u] >= 0 && t[r][u] > t[s][u]) {
                        flag("order", {R(r), R(s), R(u)});
                    }
                }
            }
        }
        for (int r = 0; r < n; ++r) {
            for (int s = r + 1; s < n; ++s) {
                if (t[r][s] != t[s][r]) {
                    flag("commutativity", {R(r), R(s)});
                }
            }
        }
        for (int r = 0; r < n; ++r) {
            if (t[r][0] != r || t[0][r] != r) {
                flag("unity", {R(r)});
            }
        }
        return report;
    }

    if (spec.kind() == MonoidKind::IntervalMax) {
        report.notes.push_back("max is a distance-monoid operation on any ordered set containing 0");
    } else {
        const auto& c = spec.carrier();
        if (auto w = unattained_sum(c, true)) {
            flag("totality", {w->first, w->second});
        } else if (check_sum_complete(c)) {
            report.notes.push_back("truncated add rounds unattained sums up to the next carrier element");
        } else {
            report.notes.push_back("truncated add on a sum-complete carrier satisfies the axioms by construction");
        }
        if (!report.passed) {
            return report;
        }
    }

    auto pool = sample_pool(spec, seed, 24);
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (int trial = 0; trial < 400 && report.passed; ++trial) {
        const Rational& r = pool[pick(rng)];
        const Rational& s = pool[pick(rng)];
        const Rational& u = pool[pick(rng)];
        Rational rs = op_add(spec, r, s);
        if (rs != op_add(spec, s, r)) {
            flag("commutativity", {r, s});
        }
        if (rs < r) {
            flag("positivity", {r, s});
        }
        if (op_add(spec, r, Rational(0)) != r) {
            flag("unity", {r});
        }
        Rational lo = min(r, s);
        Rational hi = max(r, s);
        if (op_add(spec, lo, u) > op_add(spec, hi, u)) {
            flag("order", {lo, hi, u});
        }
    }
    report.notes.push_back("sampled " + std::to_string(pool.size()) + " carrier elements");
    return report;
}

std::optional<Triple> check_associativity(const DistanceMonoidSpec& spec, std::uint64_t seed) {
    if (spec.kind() == MonoidKind::IntervalMax) {
        return std::nullopt;
    }
    auto add = [&](const Rational& a, const Rational& b) {
        try {
            return op_add(spec, a, b);
        } catch (const UnsupportedOperation& e) {
            throw PreconditionError(std::string("operation is not total: ") + e.what());
        }
    };
    auto scan = [&](const std::vector<Rational>& pool) -> std::optional<Triple> {
        for (const auto& r : pool) {
            for (const auto& s : pool) {
                Rational rs = add(r, s);
                for (const auto& t : pool) {
                    if (add(rs, t) != add(r, add(s, t))) {
                        return Triple{r, s, t};
                    }
                }
            }
        }
        return std::nullopt;
    };
    if (spec.is_finite() || (spec.has_finitely_many_elements() && spec.finite_elements().size() <= 48)) {
        return scan(spec.finite_elements());
    }
    const auto& c = spec.carrier();
    std::vector<Rational> base = c.sample_elements();
    std::vector<Rational> sums;
    for (std::size_t i = 0; i < base.size(); ++i) {
        for (std::size_t j = i; j < base.size(); ++j) {
            sums.push_back(add(base[i], base[j]));
        }
    }
    base.insert(base.end(), sums.begin(), sums.end());
    std::sort(base.begin(), base.end());
    base.erase(std::unique(base.begin(), base.end()), base.end());
    if (base.size() > 40) {
        // Keep the critical neighbourhood small: thin evenly.
        std::vector<Rational> thin;
        for (std::size_t i = 0; i < base.size(); i += (base.size() + 39) / 40) {
            thin.push_back(base[i]);
        }
        thin.push_back(base.back());
        base = std::move(thin);
    }
    if (auto w = scan(base)) {
        return w;
    }
    return scan(sample_pool(spec, seed, 20));
}

// ---------------------------------------------------------------------------
// Catalog
// ---------------------------------------------------------------------------

namespace {

IntervalComponent closed_open(long lo, std::optional<long> hi) {
    IntervalComponent c;
    c.lo = Rational(lo);
    c.lo_closed = true;
    if (hi) {
        c.hi = Rational(*hi);
    }
    c.hi_closed = false;
    return c;
}

IntervalComponent closed(Rational lo, Rational hi) {
    IntervalComponent c;
    c.lo = lo;
    c.lo_closed = true;
    c.hi = hi;
    c.hi_closed = true;
    return c;
}

IntervalComponent ray(Rational lo, bool lo_closed) {
    IntervalComponent c;
    c.lo = lo;
    c.lo_closed = lo_closed;
    return c;
}

std::optional<long> suffix_number(std::string_view name, std::string_view prefix) {
    if (name.size() <= prefix.size() || name.substr(0, prefix.size()) != prefix) {
        return std::nullopt;
    }
    long n = 0;
    for (char ch : name.substr(prefix.size())) {
        if (ch < '0' || ch > '9' || n > 1000) {
            return std::nullopt;
        }
        n = n * 10 + (ch - '0');
    }
    return n;
}

} // namespace

std::vector<std::string> builtin_names() {
    return {"R1", "R2", "R3", "U2", "U3", "S2", "S3", "Q1", "Q", "Qmax", "twoThree", "gapFour", "noQE", "nonassoc"};
}

DistanceMonoidSpec builtin(std::string_view name) {
    auto named = [&](DistanceMonoidSpec spec) {
        spec.set_name(std::string(name));
        return spec;
    };
    if (auto n = suffix_number(name, "R"); n && *n >= 1) {
        std::vector<Rational> v;
        for (long i = 0; i <= *n; ++i) {
            v.emplace_back(i);
        }
        return named(DistanceMonoidSpec::finite_truncated(v));
    }
    if (auto n = suffix_number(name, "U"); n && *n >= 1) {
        std::vector<Rational> v;
        for (long i = 0; i <= *n; ++i) {
            v.emplace_back(i);
        }
        return named(DistanceMonoidSpec::finite_max(v));
    }
    if (auto n = suffix_number(name, "S"); n && *n >= 1) {
        IntervalUnionCarrier c({closed(Rational(0), Rational(1))}, Rational(1, *n));
        return named(DistanceMonoidSpec::interval(MonoidKind::IntervalTruncatedAdd, c));
    }
    if (name == "Q1") {
        return named(DistanceMonoidSpec::interval(MonoidKind::IntervalTruncatedAdd,
                                                  IntervalUnionCarrier({closed(Rational(0), Rational(1))})));
    }
    if (name == "Q") {
        return named(DistanceMonoidSpec::interval(MonoidKind::IntervalTruncatedAdd,
                                                  IntervalUnionCarrier({ray(Rational(0), true)})));
    }
    if (name == "Qmax") {
        return named(DistanceMonoidSpec::interval(MonoidKind::IntervalMax, IntervalUnionCarrier({ray(Rational(0), true)})));
    }
    if (name == "twoThree") {
        return named(DistanceMonoidSpec::interval(MonoidKind::IntervalTruncatedAdd,
                                                  IntervalUnionCarrier({closed_open(0, 2), ray(Rational(3), true)})));
    }
    if (name == "gapFour") {
        return named(DistanceMonoidSpec::interval(MonoidKind::IntervalTruncatedAdd,
                                                  IntervalUnionCarrier({closed_open(0, 2), ray(Rational(4), false)})));
    }
    if (name == "noQE") {
        IntervalUnionCarrier c({closed(Rational(0), Rational(0)), ray(Rational(2), true)}, std::nullopt, {Rational(3)});
        return named(DistanceMonoidSpec::interval(MonoidKind::IntervalTruncatedAdd, c));
    }
    if (name == "nonassoc") {
        return named(DistanceMonoidSpec::finite_truncated({Rational(0), Rational(1), Rational(2), Rational(7, 2)}));
    }
    throw std::invalid_argument("unknown builtin monoid '" + std::string(name) + "'");
}

std::vector<Rational> fragment_elements(const DistanceMonoidSpec& spec, std::optional<long> denominator,
                                        std::optional<Rational> bound) {
    if (spec.has_finitely_many_elements()) {
        auto all = spec.finite_elements();
        if (bound) {
            all.erase(std::remove_if(all.begin(), all.end(), [&](const Rational& r) { return r > *bound; }), all.end());
        }
        return all;
    }
    const auto& S = spec.carrier();
    Rational top;
    if (bound) {
        top = *bound;
    } else if (auto m = S.max_element()) {
        top = *m;
    } else {
        auto crit = S.critical_points();
        top = *std::max_element(crit.begin(), crit.end()) + Rational(2);
    }
    if (S.is_lattice() && !denominator) {
        return S.elements_up_to(top);
    }
    if (!denominator || *denominator <= 0) {
        throw PreconditionError("a dense carrier needs a denominator to enumerate");
    }
    std::vector<Rational> out;
    Rational step(1, *denominator);
    for (Rational x(0); x <= top; x += step) {
        if (S.contains(x)) {
            out.push_back(x);
        }
    }
    return out;
}

} // namespace urysohn
