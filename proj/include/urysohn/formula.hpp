#pragma once

#include "urysohn/metric_space.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace urysohn {

enum class FormulaKind { Le, In, Eq, Not, And, Or, Implies, Exists, Forall };

/// Formula of the relational language with atoms d(x,y) <= s. Binary nodes
/// have two children, Not and the quantifiers one.
struct Formula {
    FormulaKind kind = FormulaKind::Eq;
    std::string x; ///< first variable, or the bound variable of a quantifier
    std::string y;
    Rational bound;    ///< Le
    Interval interval; ///< In
    std::vector<Formula> children;

    static Formula le(std::string x, std::string y, Rational s);
    static Formula gt(std::string x, std::string y, Rational s);
    static Formula in(std::string x, std::string y, Interval iv);
    static Formula eq(std::string x, std::string y);
    static Formula negate(Formula f);
    static Formula conj(Formula a, Formula b);
    static Formula disj(Formula a, Formula b);
    static Formula implies(Formula a, Formula b);
    static Formula exists(std::string var, Formula body);
    static Formula forall(std::string var, Formula body);
    /// Folds a nonempty list with And.
    static Formula all_of(std::vector<Formula> parts);

    friend bool operator==(const Formula&, const Formula&) = default;
};

/// Grammar:
///   formula := disj [ "->" formula ]
///   disj    := conj { "|" conj }
///   conj    := unary { "&" unary }
///   unary   := "!" unary | ("forall" | "exists") var "." formula | "(" formula ")" | atom
///   atom    := "d(" var "," var ")" ( "<=" value | ">" value | "in" interval ) | var "=" var
///   interval := "{0}" | "(" value "," value "]"
/// Values use the element syntax of the spec; an interval's upper end may be "omega".
Formula parse_formula(const DistanceMonoidSpec& spec, std::string_view text);

/// Canonical text; binary nodes are fully parenthesized.
std::string print_formula(const DistanceMonoidSpec& spec, const Formula& f);

std::vector<std::string> free_variables(const Formula& f);

using Assignment = std::map<std::string, std::size_t>;

/// Satisfaction over the points of a finite space. Throws PreconditionError
/// for an unbound variable.
bool eval(const FiniteMetricSpace& space, const Formula& f, const Assignment& assignment = {});

/// (MS1)-(MS4) over a finite fragment. MS3 takes t as the largest fragment
/// element below the ambient sum; MS4 appears only when the fragment holds
/// the carrier maximum.
std::vector<Formula> instantiate_ms_axioms(const DistanceMonoidSpec& spec, const std::vector<Rational>& fragment);

/// The fragment restriction of the 2-type p_alpha(x,y).
std::vector<Formula> type_formulas(const DistanceMonoidSpec& spec, const ExtendedValue& alpha,
                                   const std::vector<Rational>& fragment);

} // namespace urysohn
