#include "urysohn/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace urysohn {

Rational::Rational(long num, long den) : value_(num, den) {
    if (den == 0) {
        throw std::invalid_argument("rational with zero denominator");
    }
    value_.canonicalize();
}

Rational::Rational(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) {
        return false;
    }
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            return false;
        }
    }
    return true;
}

} // namespace

std::optional<Rational> Rational::parse(std::string_view text) {
    bool negative = false;
    if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    mpq_class q;
    auto slash = text.find('/');
    auto dot = text.find('.');
    if (slash != std::string_view::npos) {
        auto num = text.substr(0, slash);
        auto den = text.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) {
            return std::nullopt;
        }
        mpz_class d(std::string(den), 10);
        if (d == 0) {
            return std::nullopt;
        }
        q = mpq_class(mpz_class(std::string(num), 10), d);
    } else if (dot != std::string_view::npos) {
        auto whole = text.substr(0, dot);
        auto frac = text.substr(dot + 1);
        if ((!whole.empty() && !all_digits(whole)) || !all_digits(frac)) {
            return std::nullopt;
        }
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
        mpz_class w = whole.empty() ? mpz_class(0) : mpz_class(std::string(whole), 10);
        q = mpq_class(w * scale + mpz_class(std::string(frac), 10), scale);
    } else {
        if (!all_digits(text)) {
            return std::nullopt;
        }
        q = mpq_class(mpz_class(std::string(text), 10));
    }
    q.canonicalize();
    if (negative) {
        q = -q;
    }
    return Rational(std::move(q));
}

Rational Rational::from_string(std::string_view text) {
    auto r = parse(text);
    if (!r) {
        throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    }
    return *r;
}

std::string Rational::str() const { return value_.get_str(); }

bool Rational::is_integer() const { return value_.get_den() == 1; }

Rational Rational::floor() const {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
    return Rational(mpq_class(q));
}

long Rational::to_long() const {
    return floor().raw().get_num().get_si();
}

Rational Rational::ceil() const {
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
    return Rational(mpq_class(q));
}

Rational& Rational::operator+=(const Rational& o) {
    value_ += o.value_;
    return *this;
}

Rational& Rational::operator-=(const Rational& o) {
    value_ -= o.value_;
    return *this;
}

Rational& Rational::operator*=(const Rational& o) {
    value_ *= o.value_;
    return *this;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) {
        throw std::domain_error("rational division by zero");
    }
    value_ /= o.value_;
    return *this;
}

std::size_t Rational::hash() const {
    std::size_t h = std::hash<std::string>{}(value_.get_num().get_str(16));
    return h ^ (std::hash<std::string>{}(value_.get_den().get_str(16)) * 1000003u);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

} // namespace urysohn
