#pragma once

#include "urysohn/formula.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace urysohn {

using KatetovMap = std::vector<ExtendedValue>;

/// Every Katetov map on the space with nonzero values from the fragment, in
/// lexicographic order of value positions.
std::vector<KatetovMap> enumerate_katetov(const FiniteMetricSpace& space, const std::vector<Rational>& fragment);

/// A finite space A, a Katetov map f on it, and a pair approximation of A^f.
/// The added point z_f has index A.size() in the approximation.
struct ExtensionScheme {
    FiniteMetricSpace base;
    KatetovMap katetov;
    PairApproximation approx;

    /// Upper ends of all intervals are carrier elements.
    bool standard() const;
};

/// The one-point extension A^f with the new point labelled "z".
FiniteMetricSpace extend(const FiniteMetricSpace& base, const KatetovMap& f);

/// (A, f, canonical approximation of A^f); the monoid must give every nonzero
/// distance an immediate predecessor.
ExtensionScheme canonical_scheme(const FiniteMetricSpace& base, const KatetovMap& f);

/// The sentence forall x (C -> exists y K).
Formula extension_axiom(const ExtensionScheme& scheme);

/// Bounded model checking of the extension axiom. Tuples range over the
/// points listed in domain (all points when absent); witnesses range over
/// the whole space. Returns the first tuple satisfying C with no witness.
std::optional<std::vector<std::size_t>> check_extension_axiom(const FiniteMetricSpace& space,
                                                              const ExtensionScheme& scheme,
                                                              const std::optional<std::vector<std::size_t>>& domain = std::nullopt);

struct GrowthOptions {
    std::size_t max_base = 3;
    std::optional<long> denominator; ///< lattice fragment for dense carriers
    std::optional<Rational> bound;
};

struct Obligation {
    std::vector<std::size_t> subset;
    KatetovMap values;
};

struct GrowthResult {
    FiniteMetricSpace space;
    /// Obligations taken off the queue, each realized by some point.
    std::vector<Obligation> realized;
    /// Every obligation on a subset of the first closed_prefix points was realized.
    std::size_t closed_prefix = 0;
};

/// Finite stage of the Fraisse limit: points are added one at a time to
/// realize queued (subset, Katetov map) obligations in FIFO order. Throws
/// PreconditionError when the fragment fails the four-values condition.
GrowthResult grow_generic(const DistanceMonoidSpec& spec, std::size_t target_size, std::uint64_t seed,
                          const GrowthOptions& options = {});

struct WitnessResult {
    std::optional<std::vector<Rational>> distances; ///< s_i for each tuple point, in input order
    std::string failure;
};

/// The witness distances of the extension lemma for a tuple b realizing the
/// C part of a standard scheme. Checks the hypotheses first.
WitnessResult realize_witness(const DistanceMonoidSpec& spec, const FiniteMetricSpace& tuple,
                              const PairApproximation& phi);

enum class QeVerdict { Yes, No, Unknown };

struct QeDecision {
    QeVerdict verdict = QeVerdict::Unknown;
    std::string reason;
    std::optional<QeWitness> witness;
};

/// Throws PreconditionError for non-associative specs.
QeDecision qe_decision(const DistanceMonoidSpec& spec);

/// MS instances over the fragment plus every canonical extension axiom with
/// 1 <= |A| <= size_bound, one per isomorphism type of (A, f).
std::vector<Formula> generate_axioms(const DistanceMonoidSpec& spec, std::size_t size_bound,
                                     const std::vector<Rational>& fragment);

} // namespace urysohn
