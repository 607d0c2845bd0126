#pragma once

#include "urysohn/cut.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace urysohn {

/// Finitely many labelled points with a symmetric matrix of S* distances.
class FiniteMetricSpace {
public:
    FiniteMetricSpace(DistanceMonoidSpec spec, std::vector<std::string> points);

    const DistanceMonoidSpec& spec() const { return spec_; }
    const std::vector<std::string>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    std::optional<std::size_t> index_of(const std::string& label) const;

    const ExtendedValue& d(std::size_t i, std::size_t j) const { return dist_[i][j]; }
    void set(std::size_t i, std::size_t j, const ExtendedValue& v);
    void set(const std::string& a, const std::string& b, const ExtendedValue& v);

    /// Appends a point; row[i] is its distance to point i.
    std::size_t add_point(const std::string& label, const std::vector<ExtendedValue>& row);
    FiniteMetricSpace subspace(const std::vector<std::size_t>& indices) const;
    /// True when every distance is a carrier element.
    bool over_carrier() const;

private:
    DistanceMonoidSpec spec_;
    std::vector<std::string> points_;
    std::vector<std::vector<ExtendedValue>> dist_;
};

struct MetricViolation {
    std::string rule; ///< "zero", "symmetry" or "triangle"
    std::vector<std::size_t> points;
};

/// Every violated metric axiom; triangles are checked with star_add.
std::vector<MetricViolation> validate_metric(const FiniteMetricSpace& space);

/// Triangle inequality in the ambient monoid for carrier elements: rational
/// sum for truncated add, max, or the table itself.
bool is_ambient_triangle(const DistanceMonoidSpec& spec, const Rational& a, const Rational& b, const Rational& c);

/// nullopt when f is Katetov over the space; otherwise the first bad pair.
std::optional<std::pair<std::size_t, std::size_t>> check_katetov(const FiniteMetricSpace& space,
                                                                  const std::vector<ExtendedValue>& f);

// ---------------------------------------------------------------------------
// Approximations
// ---------------------------------------------------------------------------

/// {0}, or the half-open interval (lo, hi] with lo in S and hi in S or omega.
struct Interval {
    bool zero = true;
    ExtendedValue lo;
    ExtendedValue hi;

    static Interval point_zero() { return {}; }
    static Interval open_closed(ExtendedValue lo, ExtendedValue hi) { return {false, std::move(lo), std::move(hi)}; }

    bool contains(const ExtendedValue& v) const { return zero ? v.is_zero() : (lo < v && v <= hi); }
    bool subset_of(const Interval& o) const;
    friend bool operator==(const Interval&, const Interval&) = default;
};

std::string format_interval(const DistanceMonoidSpec& spec, const Interval& iv);

/// Approximation of a finite set of S* values.
class ValueApproximation {
public:
    void set(const ExtendedValue& v, const Interval& iv);
    const Interval& at(const ExtendedValue& v) const;
    bool covers(const ExtendedValue& v) const;
    const std::vector<std::pair<ExtendedValue, Interval>>& entries() const { return entries_; }
    /// Every value lies in its interval and 0 maps to {0}.
    bool valid() const;
    bool refines(const ValueApproximation& other) const;

private:
    std::vector<std::pair<ExtendedValue, Interval>> entries_;
};

/// Symmetric approximation indexed by point pairs of a space.
class PairApproximation {
public:
    explicit PairApproximation(std::size_t n = 0);

    std::size_t size() const { return cells_.size(); }
    const Interval& at(std::size_t i, std::size_t j) const { return cells_[i][j]; }
    void set(std::size_t i, std::size_t j, const Interval& iv);
    bool valid_for(const FiniteMetricSpace& space) const;
    bool refines(const PairApproximation& other) const;
    /// The reduction to distance values: largest lower end and smallest upper
    /// end over the pairs realizing each value.
    ValueApproximation hat(const FiniteMetricSpace& space) const;

private:
    std::vector<std::vector<Interval>> cells_;
};

/// Canonical approximation (d^-, d] where d^- is the immediate predecessor.
/// Requires every nonzero carrier element to have one.
PairApproximation canonical_approximation(const FiniteMetricSpace& space);

/// Refinement with metric upper ends. Requires a sum-complete spec and a set
/// X that avoids omega when omega is not a carrier element.
ValueApproximation metric_refinement(const DistanceMonoidSpec& spec, std::vector<ExtendedValue> X,
                                     const ValueApproximation& psi);

/// True when the upper ends are carrier elements and alpha <= beta (+)* gamma
/// implies upper(alpha) <= upper(beta) (+) upper(gamma) on X.
bool is_metric_approximation(const DistanceMonoidSpec& spec, const std::vector<ExtendedValue>& X,
                             const ValueApproximation& phi);

using DistanceMatrix = std::vector<std::vector<Rational>>;

/// A metric with each distance in phi(d(a,b)) and in S, or nullopt.
std::optional<DistanceMatrix> approximately_metric_check(const FiniteMetricSpace& space,
                                                         const ValueApproximation& phi);

/// True when m is a metric for the ambient triangle inequality.
bool is_ambient_metric(const DistanceMonoidSpec& spec, const DistanceMatrix& m);

// ---------------------------------------------------------------------------
// Four values and amalgamation
// ---------------------------------------------------------------------------

struct Quadruple {
    Rational u1, u2, v1, v2, s;
    friend bool operator==(const Quadruple&, const Quadruple&) = default;
};

std::string format_quadruple(const DistanceMonoidSpec& spec, const Quadruple& q);

class AmalgamationFailure : public Error {
public:
    AmalgamationFailure(const std::string& what, Quadruple q) : Error(what), quadruple_(std::move(q)) {}
    const Quadruple& quadruple() const { return quadruple_; }

private:
    Quadruple quadruple_;
};

/// Smallest positive t in S with (t,u1,v1) and (t,u2,v2) ambient triangles,
/// else 0 when only 0 works, else nullopt. Throws PreconditionError when
/// (s,u1,u2) or (s,v1,v2) is not a triangle.
std::optional<Rational> four_values_check(const DistanceMonoidSpec& spec, const Quadruple& q);

struct FourValuesReport {
    std::optional<Quadruple> witness;
    /// False when the search only covered a critical sample.
    bool exhaustive = true;
};

FourValuesReport four_values_search(const DistanceMonoidSpec& spec);

/// Free amalgam over the shared labels.
FiniteMetricSpace free_amalgam(const FiniteMetricSpace& a, const FiniteMetricSpace& b);

/// Base case: X1 and X2 differ by exactly one point each.
FiniteMetricSpace one_point_amalgam(const FiniteMetricSpace& x1, const FiniteMetricSpace& x2);

/// Amalgam adding the points of X2 outside X1 one at a time in label order.
FiniteMetricSpace disjoint_amalgam(const FiniteMetricSpace& x1, const FiniteMetricSpace& x2);

} // namespace urysohn
