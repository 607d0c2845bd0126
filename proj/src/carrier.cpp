#include "urysohn/monoid.hpp"

#include <algorithm>
#include <stdexcept>

namespace urysohn {

namespace {

// Component relation to a point p: is p strictly past the upper end?
bool below_point(const IntervalComponent& c, const Rational& p) {
    if (!c.hi) {
        return false;
    }
    return *c.hi < p || (*c.hi == p && !c.hi_closed);
}

bool nonempty_dense(const IntervalComponent& c) {
    if (!c.hi) {
        return true;
    }
    if (c.lo < *c.hi) {
        return true;
    }
    return c.lo == *c.hi && c.lo_closed && c.hi_closed;
}

bool degenerate(const IntervalComponent& c) { return c.hi && c.lo == *c.hi; }

void sort_unique(std::vector<Rational>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

} // namespace

bool component_contains(const IntervalComponent& c, const Rational& x) {
    if (x < c.lo || (x == c.lo && !c.lo_closed)) {
        return false;
    }
    return !below_point(c, x);
}

IntervalUnionCarrier::IntervalUnionCarrier(std::vector<IntervalComponent> components,
                                           std::optional<Rational> lattice,
                                           std::vector<Rational> excluded)
    : components_(std::move(components)), lattice_(std::move(lattice)), excluded_(std::move(excluded)) {
    if (components_.empty()) {
        throw std::invalid_argument("carrier needs at least one component");
    }
    if (lattice_ && *lattice_ <= Rational(0)) {
        throw std::invalid_argument("lattice step must be positive");
    }
    std::sort(components_.begin(), components_.end(),
              [](const IntervalComponent& a, const IntervalComponent& b) { return a.lo < b.lo; });
    for (std::size_t i = 0; i < components_.size(); ++i) {
        const auto& c = components_[i];
        if (c.lo.is_negative()) {
            throw std::invalid_argument("component lower end " + c.lo.str() + " is negative");
        }
        if (!nonempty_dense(c)) {
            throw std::invalid_argument("component " + std::to_string(i) + " is empty");
        }
        if (i > 0) {
            const auto& p = components_[i - 1];
            if (!p.hi || *p.hi > c.lo || (*p.hi == c.lo && p.hi_closed && c.lo_closed)) {
                throw std::invalid_argument("components " + std::to_string(i - 1) + " and " +
                                            std::to_string(i) + " overlap");
            }
        }
    }
    sort_unique(excluded_);
    for (const auto& e : excluded_) {
        bool inside = std::any_of(components_.begin(), components_.end(),
                                  [&](const IntervalComponent& c) { return component_contains(c, e); });
        if (!inside) {
            throw std::invalid_argument("excluded point " + e.str() + " lies outside every component");
        }
    }

    if (!lattice_) {
        for (const auto& c : components_) {
            IntervalComponent cur = c;
            bool alive = true;
            for (const auto& e : excluded_) {
                if (!alive || !component_contains(cur, e)) {
                    continue;
                }
                if (e == cur.lo) {
                    cur.lo_closed = false;
                    alive = nonempty_dense(cur);
                    continue;
                }
                if (cur.hi && e == *cur.hi) {
                    cur.hi_closed = false;
                    alive = nonempty_dense(cur);
                    continue;
                }
                IntervalComponent left = cur;
                left.hi = e;
                left.hi_closed = false;
                pieces_.push_back(left);
                cur.lo = e;
                cur.lo_closed = false;
            }
            if (alive) {
                pieces_.push_back(cur);
            }
        }
        if (pieces_.empty()) {
            throw std::invalid_argument("carrier is empty");
        }
    } else {
        pieces_ = components_;
        for (const auto& c : components_) {
            if (!lattice_min_in(c, c.lo, true)) {
                throw std::invalid_argument("component starting at " + c.lo.str() + " has no lattice point");
            }
        }
    }
    if (!contains(Rational(0))) {
        throw std::invalid_argument("0 must belong to the carrier");
    }
}

bool IntervalUnionCarrier::is_excluded(const Rational& x) const {
    return std::binary_search(excluded_.begin(), excluded_.end(), x);
}

bool IntervalUnionCarrier::contains(const Rational& x) const {
    if (x.is_negative()) {
        return false;
    }
    if (lattice_ && !(x / *lattice_).is_integer()) {
        return false;
    }
    if (is_excluded(x)) {
        return false;
    }
    return std::any_of(components_.begin(), components_.end(),
                       [&](const IntervalComponent& c) { return component_contains(c, x); });
}

// Largest lattice multiple in c that is <= upper (< upper when !inclusive),
// skipping excluded points.
std::optional<Rational> IntervalUnionCarrier::lattice_max_in(const IntervalComponent& c, const Rational& upper,
                                                             bool inclusive) const {
    const Rational& d = *lattice_;
    Rational top = upper;
    bool incl = inclusive;
    if (c.hi && (*c.hi < top || (*c.hi == top && !c.hi_closed))) {
        top = *c.hi;
        incl = c.hi_closed;
    }
    Rational k = (top / d).floor();
    if (!incl && k * d == top) {
        k -= Rational(1);
    }
    for (;;) {
        Rational x = k * d;
        if (!component_contains(c, x)) {
            return std::nullopt;
        }
        if (!is_excluded(x)) {
            return x;
        }
        k -= Rational(1);
    }
}

std::optional<Rational> IntervalUnionCarrier::lattice_min_in(const IntervalComponent& c, const Rational& lower,
                                                             bool inclusive) const {
    const Rational& d = *lattice_;
    Rational bot = lower;
    bool incl = inclusive;
    if (c.lo > bot || (c.lo == bot && !c.lo_closed)) {
        bot = c.lo;
        incl = c.lo_closed;
    }
    Rational k = (bot / d).ceil();
    if (!incl && k * d == bot) {
        k += Rational(1);
    }
    for (;;) {
        Rational x = k * d;
        if (!component_contains(c, x)) {
            return std::nullopt;
        }
        if (!is_excluded(x)) {
            return x;
        }
        k += Rational(1);
    }
}

bool IntervalUnionCarrier::bounded_above() const { return components_.back().hi.has_value(); }

bool IntervalUnionCarrier::is_finite_set() const {
    if (!bounded_above()) {
        return false;
    }
    if (lattice_) {
        return true;
    }
    return std::all_of(pieces_.begin(), pieces_.end(), degenerate);
}

std::optional<Rational> IntervalUnionCarrier::max_element() const {
    if (!bounded_above()) {
        return std::nullopt;
    }
    return max_le(*components_.back().hi);
}

std::optional<Rational> IntervalUnionCarrier::max_le(const Rational& y) const {
    auto b = sup_le(y);
    if (b.attained) {
        return b.value;
    }
    return std::nullopt;
}

std::optional<Rational> IntervalUnionCarrier::min_ge(const Rational& c) const {
    auto b = inf_ge(c);
    if (b && b->attained) {
        return b->value;
    }
    return std::nullopt;
}

Bound IntervalUnionCarrier::sup_le(const Rational& y) const {
    auto b = sup_lt(y);
    if (contains(y)) {
        return {y, true};
    }
    if (!b) {
        throw std::logic_error("sup_le below 0");
    }
    return *b;
}

std::optional<Bound> IntervalUnionCarrier::sup_lt(const Rational& y) const {
    const auto& parts = lattice_ ? components_ : pieces_;
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
        const auto& c = *it;
        if (c.lo >= y) {
            continue;
        }
        if (lattice_) {
            if (auto x = lattice_max_in(c, y, false)) {
                return Bound{*x, true};
            }
            continue;
        }
        // c.lo < y: the set c ∩ (-inf, y) is nonempty.
        if (c.hi && (*c.hi < y)) {
            return Bound{*c.hi, c.hi_closed};
        }
        return Bound{y, false};
    }
    return std::nullopt;
}

std::optional<Bound> IntervalUnionCarrier::inf_gt(const Rational& y) const {
    const auto& parts = lattice_ ? components_ : pieces_;
    for (const auto& c : parts) {
        if (c.hi && *c.hi <= y) {
            continue;
        }
        if (lattice_) {
            if (auto x = lattice_min_in(c, y, false)) {
                return Bound{*x, true};
            }
            continue;
        }
        if (c.lo > y) {
            return Bound{c.lo, c.lo_closed};
        }
        return Bound{y, false};
    }
    return std::nullopt;
}

std::optional<Bound> IntervalUnionCarrier::inf_ge(const Rational& c) const {
    if (contains(c)) {
        return Bound{c, true};
    }
    return inf_gt(c);
}

bool IntervalUnionCarrier::accumulates_right(const Rational& y) const {
    if (lattice_) {
        return false;
    }
    return std::any_of(pieces_.begin(), pieces_.end(), [&](const IntervalComponent& c) {
        return c.lo <= y && (!c.hi || y < *c.hi);
    });
}

bool IntervalUnionCarrier::accumulates_left(const Rational& y) const {
    if (lattice_) {
        return false;
    }
    return std::any_of(pieces_.begin(), pieces_.end(), [&](const IntervalComponent& c) {
        return c.lo < y && (!c.hi || y <= *c.hi);
    });
}

std::optional<Rational> IntervalUnionCarrier::element_between(const Rational& lo,
                                                              const std::optional<Rational>& hi) const {
    auto first = inf_gt(lo);
    if (!first) {
        return std::nullopt;
    }
    auto ok = [&](const Rational& x) { return x > lo && (!hi || x < *hi) && contains(x); };
    if (first->attained) {
        return ok(first->value) ? std::optional<Rational>(first->value) : std::nullopt;
    }
    // Dense piece starting at first->value (open); pick a simple point inside.
    const Rational& a = first->value;
    std::optional<Rational> cap = hi;
    for (const auto& c : pieces_) {
        if (component_contains(c, a) || (c.lo == a && !c.lo_closed)) {
            if (c.hi && (!cap || *c.hi < *cap)) {
                cap = *c.hi;
            }
            break;
        }
    }
    Rational step = cap ? (*cap - a) / Rational(2) : Rational(1);
    // Prefer a nearby integer or half-integer if one fits.
    for (Rational den : {Rational(1), Rational(2), Rational(4), Rational(8)}) {
        Rational x = ((a * den).floor() + Rational(1)) / den;
        if (ok(x) && (!cap || x < *cap)) {
            return x;
        }
    }
    for (int i = 0; i < 64; ++i) {
        Rational x = a + step;
        if (ok(x)) {
            return x;
        }
        step /= Rational(2);
    }
    return std::nullopt;
}

std::vector<Rational> IntervalUnionCarrier::critical_points() const {
    std::vector<Rational> pts{Rational(0)};
    for (const auto& c : components_) {
        pts.push_back(c.lo);
        if (c.hi) {
            pts.push_back(*c.hi);
        }
    }
    for (const auto& e : excluded_) {
        pts.push_back(e);
    }
    if (lattice_) {
        std::vector<Rational> extra;
        for (const auto& p : pts) {
            Rational f = (p / *lattice_).floor() * *lattice_;
            for (int k = -1; k <= 2; ++k) {
                Rational x = f + Rational(k) * *lattice_;
                if (!x.is_negative()) {
                    extra.push_back(x);
                }
            }
        }
        pts.insert(pts.end(), extra.begin(), extra.end());
    }
    sort_unique(pts);
    return pts;
}

std::vector<Rational> IntervalUnionCarrier::sample_elements() const {
    std::vector<Rational> out;
    for (const auto& p : critical_points()) {
        if (auto a = max_le(p)) {
            out.push_back(*a);
        }
        if (auto b = min_ge(p)) {
            out.push_back(*b);
        }
        if (auto s = sup_lt(p); s && s->attained) {
            out.push_back(s->value);
        }
        if (auto s = inf_gt(p); s && s->attained) {
            out.push_back(s->value);
        }
    }
    if (!lattice_) {
        for (const auto& c : pieces_) {
            if (degenerate(c)) {
                continue;
            }
            Rational width = c.hi ? *c.hi - c.lo : Rational(4);
            for (Rational frac : {Rational(1, 16), Rational(1, 4), Rational(1, 2), Rational(3, 4), Rational(15, 16)}) {
                out.push_back(c.lo + width * frac);
            }
            if (!c.hi) {
                out.push_back(c.lo + Rational(10));
            }
        }
    } else if (!bounded_above()) {
        Rational x = components_.back().lo + Rational(5) * *lattice_;
        if (auto e = max_le(x)) {
            out.push_back(*e);
        }
    }
    out.erase(std::remove_if(out.begin(), out.end(), [&](const Rational& x) { return !contains(x); }), out.end());
    sort_unique(out);
    return out;
}

std::vector<Rational> IntervalUnionCarrier::elements_up_to(const Rational& bound) const {
    std::vector<Rational> out;
    if (lattice_) {
        for (const auto& c : components_) {
            if (c.lo > bound) {
                break;
            }
            auto x = lattice_min_in(c, c.lo, true);
            while (x && *x <= bound) {
                out.push_back(*x);
                x = lattice_min_in(c, *x, false);
            }
        }
        return out;
    }
    for (const auto& c : pieces_) {
        if (!degenerate(c)) {
            throw std::invalid_argument("cannot enumerate a dense carrier");
        }
        if (c.lo <= bound) {
            out.push_back(c.lo);
        }
    }
    return out;
}

std::vector<Rational> IntervalUnionCarrier::elements() const {
    if (!is_finite_set()) {
        throw std::invalid_argument("carrier is infinite");
    }
    return elements_up_to(*components_.back().hi);
}

} // namespace urysohn
