#include "urysohn/formula.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace urysohn {

Formula Formula::le(std::string x, std::string y, Rational s) {
    Formula f;
    f.kind = FormulaKind::Le;
    f.x = std::move(x);
    f.y = std::move(y);
    f.bound = std::move(s);
    return f;
}

Formula Formula::gt(std::string x, std::string y, Rational s) { return negate(le(std::move(x), std::move(y), std::move(s))); }

Formula Formula::in(std::string x, std::string y, Interval iv) {
    Formula f;
    f.kind = FormulaKind::In;
    f.x = std::move(x);
    f.y = std::move(y);
    f.interval = std::move(iv);
    return f;
}

Formula Formula::eq(std::string x, std::string y) {
    Formula f;
    f.kind = FormulaKind::Eq;
    f.x = std::move(x);
    f.y = std::move(y);
    return f;
}

Formula Formula::negate(Formula a) {
    Formula f;
    f.kind = FormulaKind::Not;
    f.children.push_back(std::move(a));
    return f;
}

namespace {

Formula binary(FormulaKind kind, Formula a, Formula b) {
    Formula f;
    f.kind = kind;
    f.children.push_back(std::move(a));
    f.children.push_back(std::move(b));
    return f;
}

Formula quantifier(FormulaKind kind, std::string var, Formula body) {
    Formula f;
    f.kind = kind;
    f.x = std::move(var);
    f.children.push_back(std::move(body));
    return f;
}

} // namespace

Formula Formula::conj(Formula a, Formula b) { return binary(FormulaKind::And, std::move(a), std::move(b)); }
Formula Formula::disj(Formula a, Formula b) { return binary(FormulaKind::Or, std::move(a), std::move(b)); }
Formula Formula::implies(Formula a, Formula b) { return binary(FormulaKind::Implies, std::move(a), std::move(b)); }
Formula Formula::exists(std::string var, Formula body) { return quantifier(FormulaKind::Exists, std::move(var), std::move(body)); }
Formula Formula::forall(std::string var, Formula body) { return quantifier(FormulaKind::Forall, std::move(var), std::move(body)); }

Formula Formula::all_of(std::vector<Formula> parts) {
    if (parts.empty()) {
        throw std::invalid_argument("empty conjunction");
    }
    Formula out = std::move(parts.front());
    for (std::size_t i = 1; i < parts.size(); ++i) {
        out = conj(std::move(out), std::move(parts[i]));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

class Parser {
public:
    Parser(const DistanceMonoidSpec& spec, std::string_view text) : spec_(spec), text_(text) {}

    Formula parse() {
        Formula f = formula();
        skip_ws();
        if (pos_ != text_.size()) {
            fail("unexpected trailing input");
        }
        return f;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, last_end_); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool peek(std::string_view tok) {
        skip_ws();
        return text_.substr(pos_, tok.size()) == tok;
    }

    bool accept(std::string_view tok) {
        if (!peek(tok)) {
            return false;
        }
        pos_ += tok.size();
        last_end_ = pos_;
        return true;
    }

    void expect(std::string_view tok) {
        if (!accept(tok)) {
            fail("expected '" + std::string(tok) + "'");
        }
    }

    static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

    std::string peek_identifier() {
        skip_ws();
        std::size_t end = pos_;
        if (end < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[end])) || text_[end] == '_')) {
            while (end < text_.size() && ident_char(text_[end])) {
                ++end;
            }
        }
        return std::string(text_.substr(pos_, end - pos_));
    }

    std::string identifier() {
        std::string id = peek_identifier();
        if (id.empty()) {
            fail("expected a variable");
        }
        pos_ += id.size();
        last_end_ = pos_;
        return id;
    }

    std::string value_token() {
        skip_ws();
        std::size_t end = pos_;
        while (end < text_.size()) {
            char c = text_[end];
            if (std::isspace(static_cast<unsigned char>(c)) || std::string_view("(),[]{}&|!=<>").find(c) != std::string_view::npos ||
                (c == '-' && end + 1 < text_.size() && text_[end + 1] == '>')) {
                break;
            }
            ++end;
        }
        if (end == pos_) {
            fail("expected a value");
        }
        std::string tok(text_.substr(pos_, end - pos_));
        pos_ = end;
        last_end_ = pos_;
        return tok;
    }

    Rational element() {
        std::size_t start = pos_;
        auto tok = value_token();
        auto v = spec_.parse_element(tok);
        if (!v) {
            skip_ws_to(start);
            fail("unknown carrier element '" + tok + "'");
        }
        return *v;
    }

    void skip_ws_to(std::size_t start) {
        last_end_ = start;
        while (last_end_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[last_end_]))) {
            ++last_end_;
        }
    }

    Formula formula() {
        Formula left = disjunction();
        if (accept("->")) {
            return Formula::implies(std::move(left), formula());
        }
        return left;
    }

    Formula disjunction() {
        Formula f = conjunction();
        while (accept("|")) {
            f = Formula::disj(std::move(f), conjunction());
        }
        return f;
    }

    Formula conjunction() {
        Formula f = unary();
        while (accept("&")) {
            f = Formula::conj(std::move(f), unary());
        }
        return f;
    }

    Formula unary() {
        if (accept("!")) {
            return Formula::negate(unary());
        }
        if (accept("(")) {
            Formula f = formula();
            expect(")");
            return f;
        }
        std::string id = peek_identifier();
        if (id == "forall" || id == "exists") {
            identifier();
            std::string var = identifier();
            expect(".");
            Formula body = formula();
            return id == "forall" ? Formula::forall(var, std::move(body)) : Formula::exists(var, std::move(body));
        }
        return atom();
    }

    Formula atom() {
        std::string id = identifier();
        if (id == "d" && peek("(")) {
            expect("(");
            std::string x = identifier();
            expect(",");
            std::string y = identifier();
            expect(")");
            if (accept("<=")) {
                return Formula::le(x, y, element());
            }
            if (accept(">")) {
                return Formula::gt(x, y, element());
            }
            if (peek_identifier() == "in") {
                identifier();
                return Formula::in(x, y, interval());
            }
            fail("expected '<=', '>' or 'in'");
        }
        expect("=");
        return Formula::eq(id, identifier());
    }

    Interval interval() {
        if (accept("{")) {
            auto zero = value_token();
            if (zero != "0") {
                fail("only {0} is a point interval");
            }
            expect("}");
            return Interval::point_zero();
        }
        expect("(");
        ExtendedValue lo = ExtendedValue::principal(element());
        expect(",");
        ExtendedValue hi;
        if (peek_identifier() == "omega") {
            identifier();
            hi = top_cut(spec_);
        } else {
            hi = ExtendedValue::principal(element());
        }
        expect("]");
        return Interval::open_closed(lo, hi);
    }

    const DistanceMonoidSpec& spec_;
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t last_end_ = 0;
};

bool is_quantifier(const Formula& f) { return f.kind == FormulaKind::Exists || f.kind == FormulaKind::Forall; }

std::string print_operand(const DistanceMonoidSpec& spec, const Formula& f) {
    std::string s = print_formula(spec, f);
    return is_quantifier(f) ? "(" + s + ")" : s;
}

void collect_free(const Formula& f, std::set<std::string>& bound, std::vector<std::string>& out) {
    auto note = [&](const std::string& v) {
        if (!bound.count(v) && std::find(out.begin(), out.end(), v) == out.end()) {
            out.push_back(v);
        }
    };
    switch (f.kind) {
    case FormulaKind::Le:
    case FormulaKind::In:
    case FormulaKind::Eq:
        note(f.x);
        note(f.y);
        return;
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
        bool was = bound.count(f.x) > 0;
        bound.insert(f.x);
        collect_free(f.children[0], bound, out);
        if (!was) {
            bound.erase(f.x);
        }
        return;
    }
    default:
        for (const auto& c : f.children) {
            collect_free(c, bound, out);
        }
    }
}

} // namespace

Formula parse_formula(const DistanceMonoidSpec& spec, std::string_view text) { return Parser(spec, text).parse(); }

std::string print_formula(const DistanceMonoidSpec& spec, const Formula& f) {
    auto dxy = [&] { return "d(" + f.x + "," + f.y + ")"; };
    auto interval_text = [&](const Interval& iv) {
        if (iv.zero) {
            return std::string("{0}");
        }
        std::string hi = iv.hi.is_omega() ? "omega" : spec.format_element(iv.hi.point());
        return "(" + spec.format_element(iv.lo.point()) + ", " + hi + "]";
    };
    switch (f.kind) {
    case FormulaKind::Le:
        return dxy() + " <= " + spec.format_element(f.bound);
    case FormulaKind::In:
        return dxy() + " in " + interval_text(f.interval);
    case FormulaKind::Eq:
        return f.x + " = " + f.y;
    case FormulaKind::Not: {
        const auto& c = f.children[0];
        if (c.kind == FormulaKind::Le) {
            return "d(" + c.x + "," + c.y + ") > " + spec.format_element(c.bound);
        }
        return "!" + print_operand(spec, c);
    }
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies: {
        const char* op = f.kind == FormulaKind::And ? " & " : f.kind == FormulaKind::Or ? " | " : " -> ";
        return "(" + print_operand(spec, f.children[0]) + op + print_operand(spec, f.children[1]) + ")";
    }
    case FormulaKind::Exists:
        return "exists " + f.x + ". " + print_formula(spec, f.children[0]);
    case FormulaKind::Forall:
        return "forall " + f.x + ". " + print_formula(spec, f.children[0]);
    }
    return {};
}

std::vector<std::string> free_variables(const Formula& f) {
    std::set<std::string> bound;
    std::vector<std::string> out;
    collect_free(f, bound, out);
    return out;
}

bool eval(const FiniteMetricSpace& space, const Formula& f, const Assignment& assignment) {
    auto lookup = [&](const std::string& v) {
        auto it = assignment.find(v);
        if (it == assignment.end()) {
            throw PreconditionError("unbound variable '" + v + "'");
        }
        return it->second;
    };
    switch (f.kind) {
    case FormulaKind::Le:
        return space.d(lookup(f.x), lookup(f.y)) <= ExtendedValue::principal(f.bound);
    case FormulaKind::In:
        return f.interval.contains(space.d(lookup(f.x), lookup(f.y)));
    case FormulaKind::Eq:
        return lookup(f.x) == lookup(f.y);
    case FormulaKind::Not:
        return !eval(space, f.children[0], assignment);
    case FormulaKind::And:
        return eval(space, f.children[0], assignment) && eval(space, f.children[1], assignment);
    case FormulaKind::Or:
        return eval(space, f.children[0], assignment) || eval(space, f.children[1], assignment);
    case FormulaKind::Implies:
        return !eval(space, f.children[0], assignment) || eval(space, f.children[1], assignment);
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
        bool want = f.kind == FormulaKind::Exists;
        Assignment inner = assignment;
        for (std::size_t i = 0; i < space.size(); ++i) {
            inner[f.x] = i;
            if (eval(space, f.children[0], inner) == want) {
                return want;
            }
        }
        return !want;
    }
    }
    return false;
}

std::vector<Formula> instantiate_ms_axioms(const DistanceMonoidSpec& spec, const std::vector<Rational>& fragment) {
    std::vector<Rational> frag = fragment;
    std::sort(frag.begin(), frag.end());
    std::vector<Formula> out;
    const Rational zero(0);
    // MS1
    out.push_back(Formula::forall(
        "x", Formula::forall("y", Formula::conj(Formula::implies(Formula::le("x", "y", zero), Formula::eq("x", "y")),
                                                Formula::implies(Formula::eq("x", "y"), Formula::le("x", "y", zero))))));
    // MS2
    for (const auto& s : frag) {
        if (s.is_zero()) {
            continue;
        }
        out.push_back(Formula::forall(
            "x", Formula::forall("y", Formula::conj(Formula::implies(Formula::le("x", "y", s), Formula::le("y", "x", s)),
                                                    Formula::implies(Formula::le("y", "x", s), Formula::le("x", "y", s))))));
    }
    // MS3
    for (const auto& r : frag) {
        for (const auto& s : frag) {
            if (r.is_zero() || s.is_zero()) {
                continue;
            }
            Rational sum = spec.ambient_sum(r, s);
            Rational t = frag.front();
            for (const auto& x : frag) {
                if (x <= sum) {
                    t = x;
                }
            }
            out.push_back(Formula::forall(
                "x", Formula::forall(
                         "y", Formula::forall("z", Formula::implies(Formula::conj(Formula::le("x", "y", r),
                                                                                   Formula::le("y", "z", s)),
                                                                   Formula::le("x", "z", t))))));
        }
    }
    // MS4
    if (auto m = spec.max_element(); m && std::find(frag.begin(), frag.end(), *m) != frag.end()) {
        out.push_back(Formula::forall("x", Formula::forall("y", Formula::le("x", "y", *m))));
    }
    return out;
}

std::vector<Formula> type_formulas(const DistanceMonoidSpec& spec, const ExtendedValue& alpha,
                                   const std::vector<Rational>& fragment) {
    std::vector<Rational> frag = fragment;
    std::sort(frag.begin(), frag.end());
    std::vector<Formula> out;
    for (const auto& s : frag) {
        if (!spec.contains(s)) {
            throw CarrierViolation(s.str() + " is not a carrier element");
        }
        if (alpha <= ExtendedValue::principal(s)) {
            out.push_back(Formula::le("x", "y", s));
        } else {
            out.push_back(Formula::gt("x", "y", s));
        }
    }
    return out;
}

} // namespace urysohn
