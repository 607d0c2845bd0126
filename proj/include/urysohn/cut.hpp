#pragma once

#include "urysohn/monoid.hpp"

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace urysohn {

enum class CutKind { Principal, Successor, Gap, Omega };

/// An element of the completion S*, always in normal form.
///
/// Principal r is S^{>=r}; Successor r is S^{>r} for r in S with no immediate
/// successor; Gap m is S^{>m} for m not in S; Omega is the empty cut, which
/// only occurs when S has no maximum. For finite specs the point is an index.
class ExtendedValue {
public:
    ExtendedValue() = default;

    static ExtendedValue principal(Rational r) { return {CutKind::Principal, std::move(r)}; }
    static ExtendedValue successor(Rational r) { return {CutKind::Successor, std::move(r)}; }
    static ExtendedValue gap(Rational m) { return {CutKind::Gap, std::move(m)}; }
    static ExtendedValue omega() { return {CutKind::Omega, Rational(0)}; }

    CutKind kind() const { return kind_; }
    const Rational& point() const { return point_; }
    bool is_principal() const { return kind_ == CutKind::Principal; }
    bool is_omega() const { return kind_ == CutKind::Omega; }
    bool is_zero() const { return is_principal() && point_.is_zero(); }

    friend bool operator==(const ExtendedValue&, const ExtendedValue&) = default;
    /// Order of S*. Valid for normalized values of the same spec.
    friend std::strong_ordering operator<=>(const ExtendedValue& a, const ExtendedValue& b);

private:
    ExtendedValue(CutKind kind, Rational point) : kind_(kind), point_(std::move(point)) {}

    CutKind kind_ = CutKind::Principal;
    Rational point_;
};

std::strong_ordering compare_cuts(const ExtendedValue& a, const ExtendedValue& b);
inline ExtendedValue max(const ExtendedValue& a, const ExtendedValue& b) { return a < b ? b : a; }
inline ExtendedValue min(const ExtendedValue& a, const ExtendedValue& b) { return b < a ? b : a; }

/// Principal cut at r; throws CarrierViolation when r is not in S.
ExtendedValue embed(const DistanceMonoidSpec& spec, const Rational& r);

/// Canonical form of {x in S : x >= c} (above = false) or {x in S : x > c}.
ExtendedValue normalize_cut(const DistanceMonoidSpec& spec, const Rational& c, bool above);

/// Re-normalizes an arbitrary value (e.g. a parsed "gap(2)" that is principal).
ExtendedValue normalize(const DistanceMonoidSpec& spec, const ExtendedValue& v);

/// The largest cut, omega_S: principal max when S has one.
ExtendedValue top_cut(const DistanceMonoidSpec& spec);

ExtendedValue star_add(const DistanceMonoidSpec& spec, const ExtendedValue& a, const ExtendedValue& b);
ExtendedValue star_diff(const DistanceMonoidSpec& spec, const ExtendedValue& a, const ExtendedValue& b);

struct TriangleInterval {
    ExtendedValue lo;
    ExtendedValue hi;
};

TriangleInterval triangle_interval(const DistanceMonoidSpec& spec, const ExtendedValue& a, const ExtendedValue& b);
bool is_triangle(const DistanceMonoidSpec& spec, const ExtendedValue& a, const ExtendedValue& b,
                 const ExtendedValue& c);

/// True when some cut lies immediately below v.
bool has_immediate_predecessor(const DistanceMonoidSpec& spec, const ExtendedValue& v);

/// Some carrier element t with a <= t < b (requires a < b).
Rational element_in_between(const DistanceMonoidSpec& spec, const ExtendedValue& a, const ExtendedValue& b);

/// sup{x (+) s : x < alpha} for alpha without an immediate predecessor.
ExtendedValue sup_below_plus(const DistanceMonoidSpec& spec, const ExtendedValue& alpha, const Rational& s);

struct QeWitness {
    ExtendedValue alpha;
    Rational s;
    ExtendedValue lhs;
    ExtendedValue rhs;
};

/// A verified failure of continuity of x -> x (+) s below alpha, or nullopt.
std::optional<QeWitness> find_qe_witness(const DistanceMonoidSpec& spec);

std::string format_value(const DistanceMonoidSpec& spec, const ExtendedValue& v);
/// Parses "p/q", "p/q+", "gap(p/q)", "omega" (labels for finite specs) and normalizes.
ExtendedValue parse_value(const DistanceMonoidSpec& spec, std::string_view text);

} // namespace urysohn
