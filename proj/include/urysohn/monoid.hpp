#pragma once

#include "urysohn/errors.hpp"
#include "urysohn/rational.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace urysohn {

// ---------------------------------------------------------------------------
// Carriers
// ---------------------------------------------------------------------------

struct IntervalComponent {
    Rational lo;
    bool lo_closed = true;
    std::optional<Rational> hi; ///< nullopt means +infinity
    bool hi_closed = false;

    bool bounded() const { return hi.has_value(); }
};

/// A supremum or infimum in Q together with whether the carrier attains it.
struct Bound {
    Rational value;
    bool attained = false;
};

/// Subset of the nonnegative rationals given as a finite union of intervals,
/// optionally intersected with the multiples of a lattice step, minus a finite
/// set of excluded points. All queries are exact.
class IntervalUnionCarrier {
public:
    IntervalUnionCarrier(std::vector<IntervalComponent> components,
                         std::optional<Rational> lattice = std::nullopt,
                         std::vector<Rational> excluded = {});

    const std::vector<IntervalComponent>& components() const { return components_; }
    const std::optional<Rational>& lattice() const { return lattice_; }
    const std::vector<Rational>& excluded() const { return excluded_; }

    bool contains(const Rational& x) const;
    bool is_lattice() const { return lattice_.has_value(); }
    /// True when the carrier has finitely many elements.
    bool is_finite_set() const;
    bool bounded_above() const;
    std::optional<Rational> max_element() const;

    /// Largest element <= y, if one exists.
    std::optional<Rational> max_le(const Rational& y) const;
    /// Smallest element >= c, if one exists.
    std::optional<Rational> min_ge(const Rational& c) const;
    /// sup of {x in S : x <= y}; always defined because 0 is in S.
    Bound sup_le(const Rational& y) const;
    /// sup of {x in S : x < y}; nullopt when the set is empty (y == 0).
    std::optional<Bound> sup_lt(const Rational& y) const;
    /// inf of {x in S : x >= c}; nullopt when empty.
    std::optional<Bound> inf_ge(const Rational& c) const;
    /// inf of {x in S : x > c}; nullopt when empty.
    std::optional<Bound> inf_gt(const Rational& c) const;

    /// S meets (y, y + e) for every e > 0.
    bool accumulates_right(const Rational& y) const;
    /// S meets (y - e, y) for every e > 0.
    bool accumulates_left(const Rational& y) const;

    /// Some element x with lo < x < hi (hi = nullopt for +infinity), preferring
    /// simple values close to lo.
    std::optional<Rational> element_between(const Rational& lo, const std::optional<Rational>& hi) const;

    /// Endpoints, excluded points, their lattice neighbours, and 0.
    std::vector<Rational> critical_points() const;
    /// Carrier elements near every critical point and inside every piece.
    std::vector<Rational> sample_elements() const;
    /// All elements <= bound (the carrier must be a lattice or a finite set).
    std::vector<Rational> elements_up_to(const Rational& bound) const;
    /// All elements; requires is_finite_set().
    std::vector<Rational> elements() const;

    /// Pieces of the carrier with excluded points split off (dense carriers).
    const std::vector<IntervalComponent>& pieces() const { return pieces_; }

private:
    std::optional<Rational> lattice_max_in(const IntervalComponent& c, const Rational& upper, bool inclusive) const;
    std::optional<Rational> lattice_min_in(const IntervalComponent& c, const Rational& lower, bool inclusive) const;
    bool is_excluded(const Rational& x) const;

    std::vector<IntervalComponent> components_;
    std::optional<Rational> lattice_;
    std::vector<Rational> excluded_;
    std::vector<IntervalComponent> pieces_;
};

bool component_contains(const IntervalComponent& c, const Rational& x);

// ---------------------------------------------------------------------------
// Distance monoids
// ---------------------------------------------------------------------------

enum class MonoidKind { Finite, IntervalTruncatedAdd, IntervalMax };

std::string to_string(MonoidKind kind);

/// A countable distance magma. Elements are passed around as Rationals: the
/// element itself for interval kinds, the list position for the finite kind.
class DistanceMonoidSpec {
public:
    /// Finite magma with opaque labels; order is list order, labels[0] is 0.
    static DistanceMonoidSpec finite(std::vector<std::string> labels, std::vector<std::vector<int>> table);
    /// Finite subset of (Q>=0, +) with truncated addition max{x : x <= r + s}.
    static DistanceMonoidSpec finite_truncated(std::vector<Rational> values);
    /// Finite subset of Q>=0 with r (+) s = max(r, s).
    static DistanceMonoidSpec finite_max(std::vector<Rational> values);
    static DistanceMonoidSpec interval(MonoidKind kind, IntervalUnionCarrier carrier);

    MonoidKind kind() const { return kind_; }
    bool is_finite() const { return kind_ == MonoidKind::Finite; }

    // finite kind
    std::size_t size() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<std::vector<int>>& table() const { return table_; }
    /// Numeric values when the finite spec was built from rationals.
    const std::vector<Rational>& values() const { return values_; }

    /// The interval carrier; for finite specs, the lattice of positions 0..n-1.
    const IntervalUnionCarrier& carrier() const;

    bool contains(const Rational& element) const;
    void require_element(const Rational& element) const;
    /// Largest element, if any.
    std::optional<Rational> max_element() const;
    /// Finite kind: all positions; interval kinds with a finite carrier: all elements.
    std::vector<Rational> finite_elements() const;
    bool has_finitely_many_elements() const;

    std::string format_element(const Rational& element) const;
    std::optional<Rational> parse_element(std::string_view text) const;

    const std::string& name() const { return name_; }
    void set_name(std::string name) { name_ = std::move(name); }

    /// Ambient sum r + s (interval truncated add), max (interval max) or the
    /// table entry (finite). Not truncated.
    Rational ambient_sum(const Rational& r, const Rational& s) const;

private:
    DistanceMonoidSpec() = default;

    MonoidKind kind_ = MonoidKind::Finite;
    std::vector<std::string> labels_;
    std::vector<std::vector<int>> table_;
    std::vector<Rational> values_;
    std::shared_ptr<const IntervalUnionCarrier> carrier_;
    std::string name_;
};

/// Monoid sum. Throws CarrierViolation or UnsupportedOperation.
Rational op_add(const DistanceMonoidSpec& spec, const Rational& r, const Rational& s);

struct AxiomViolation {
    std::string axiom;
    std::vector<Rational> tuple;
};

struct AxiomReport {
    bool passed = true;
    std::vector<AxiomViolation> violations;
    std::vector<std::string> notes;
};

AxiomReport check_magma_axioms(const DistanceMonoidSpec& spec, std::uint64_t seed = 0);

using Triple = std::array<Rational, 3>;

/// nullopt when associative; otherwise (r, s, t) with (r+s)+t != r+(s+t).
/// Exhaustive for finite specs, critical-point plus sampled for interval specs.
std::optional<Triple> check_associativity(const DistanceMonoidSpec& spec, std::uint64_t seed = 0);

/// nullopt when every truncated sum is attained; otherwise a witness pair.
std::optional<std::pair<Rational, Rational>> check_sum_complete(const IntervalUnionCarrier& carrier);

struct MonoidFlags {
    bool right_closed = false;
    bool ultrametric = false;
    bool group_like = false;

    bool any() const { return right_closed || ultrametric || group_like; }
};

/// Throws PreconditionError for non-associative or non-total specs.
MonoidFlags classify_monoid(const DistanceMonoidSpec& spec);

/// A finite set of elements used wherever enumeration is needed. Finite
/// carriers give every element; other carriers give the multiples of
/// 1/denominator in the carrier up to bound (default: the maximum, or the
/// largest critical point plus 2).
std::vector<Rational> fragment_elements(const DistanceMonoidSpec& spec, std::optional<long> denominator = std::nullopt,
                                        std::optional<Rational> bound = std::nullopt);

/// Catalog: R<n>, U<n>, S<n>, Q1, Q, Qmax, twoThree, gapFour, noQE, nonassoc.
DistanceMonoidSpec builtin(std::string_view name);
std::vector<std::string> builtin_names();

} // namespace urysohn
