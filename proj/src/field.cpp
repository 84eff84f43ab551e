#include "turan/field.hpp"

#include "turan/error.hpp"

#include <cmath>
#include <ostream>

namespace turan {

Rational make_rational(const Integer& num, const Integer& den) {
    if (sgn(den) == 0) throw DomainError("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Reads [sign]digits starting at pos; advances pos.
Integer read_integer(std::string_view s, std::size_t& pos, bool allow_sign) {
    bool negative = false;
    if (allow_sign && pos < s.size() && (s[pos] == '+' || s[pos] == '-')) negative = s[pos++] == '-';
    std::size_t digits = pos;
    while (pos < s.size() && is_digit(s[pos])) ++pos;
    if (pos == digits) throw ParseError("expected digits in '" + std::string(s) + "'");
    Integer value(std::string(s.substr(digits, pos - digits)));
    return negative ? Integer(-value) : value;
}

Rational read_fraction(std::string_view s, std::size_t& pos, bool allow_sign) {
    Integer num = read_integer(s, pos, allow_sign);
    if (pos >= s.size() || s[pos] != '/')
        throw ParseError("denominator required in '" + std::string(s) + "'");
    ++pos;
    Integer den = read_integer(s, pos, false);
    if (sgn(den) == 0) throw ParseError("zero denominator in '" + std::string(s) + "'");
    return make_rational(num, den);
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::size_t pos = 0;
    Rational q = read_fraction(text, pos, true);
    if (pos != text.size()) throw ParseError("trailing characters in '" + std::string(text) + "'");
    return q;
}

std::string to_string(const Rational& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational exact_rational(double x) {
    if (!std::isfinite(x)) throw DomainError("cannot convert a non-finite double");
    Rational q(x);  // mpq_set_d is exact
    q.canonicalize();
    return q;
}

Integer floor(const Rational& q) {
    Integer r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

Rational rationalize(double x, const Integer& max_denominator) {
    if (!std::isfinite(x)) throw DomainError("rationalize: non-finite input");
    if (max_denominator < 1) throw DomainError("rationalize: max_denominator must be >= 1");

    const Rational target = exact_rational(x);
    Rational rest = target;
    Integer p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    while (true) {
        Integer a = floor(rest);
        Integer p2 = a * p1 + p0;
        Integer q2 = a * q1 + q0;
        if (q2 > max_denominator) {
            // Best semiconvergent between the last two convergents.
            Integer k = (max_denominator - q0) / q1;
            Rational semi = make_rational(k * p1 + p0, k * q1 + q0);
            Rational conv = make_rational(p1, q1);
            Rational ds = abs(semi - target);
            Rational dc = abs(conv - target);
            if (ds < dc || (ds == dc && semi.get_den() < conv.get_den())) return semi;
            return conv;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        Rational frac = rest - Rational(a);
        if (sgn(frac) == 0) return make_rational(p1, q1);
        rest = 1 / frac;
    }
}

bool is_valid_discriminant(std::int64_t d) {
    if (d == 0) return true;
    if (d < 2) return false;
    for (std::int64_t f = 2; f * f <= d; ++f)
        if (d % (f * f) == 0) return false;
    return true;
}

FieldElement::FieldElement(Rational a, Rational b, std::int64_t d) : a_(std::move(a)), b_(std::move(b)), d_(d) {
    if (!is_valid_discriminant(d)) throw DomainError("discriminant " + std::to_string(d) + " is not square-free");
    if (d == 0 && sgn(b_) != 0) throw DomainError("sqrt coefficient given with discriminant 0");
    normalize();
}

void FieldElement::normalize() {
    if (sgn(b_) == 0) d_ = 0;
}

std::int64_t common_discriminant(const FieldElement& x, const FieldElement& y) {
    if (x.discriminant() == 0) return y.discriminant();
    if (y.discriminant() == 0 || y.discriminant() == x.discriminant()) return x.discriminant();
    throw DomainError("mismatched discriminants " + std::to_string(x.discriminant()) + " and " +
                      std::to_string(y.discriminant()));
}

int FieldElement::sign() const {
    const int sa = sgn(a_);
    const int sb = sgn(b_);
    if (sb == 0) return sa;
    if (sa == 0 || sa == sb) return sb;
    // Opposite signs: compare a^2 with b^2 * d.
    Rational lhs = a_ * a_;
    Rational rhs = b_ * b_ * Rational(static_cast<long>(d_));
    int c = cmp(lhs, rhs);
    if (c > 0) return sa;
    if (c < 0) return sb;
    return 0;
}

int field_sign(const FieldElement& x) { return x.sign(); }

FieldElement FieldElement::operator-() const {
    FieldElement r = *this;
    r.a_ = -r.a_;
    r.b_ = -r.b_;
    return r;
}

FieldElement& FieldElement::operator+=(const FieldElement& y) {
    const std::int64_t d = common_discriminant(*this, y);
    a_ += y.a_;
    b_ += y.b_;
    d_ = d;
    normalize();
    return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& y) {
    const std::int64_t d = common_discriminant(*this, y);
    a_ -= y.a_;
    b_ -= y.b_;
    d_ = d;
    normalize();
    return *this;
}

FieldElement& FieldElement::operator*=(const FieldElement& y) {
    const std::int64_t d = common_discriminant(*this, y);
    if (sgn(b_) == 0 && sgn(y.b_) == 0) {
        a_ *= y.a_;
        return *this;
    }
    Rational na = a_ * y.a_ + b_ * y.b_ * Rational(static_cast<long>(d));
    Rational nb = a_ * y.b_ + b_ * y.a_;
    a_ = std::move(na);
    b_ = std::move(nb);
    d_ = d;
    normalize();
    return *this;
}

FieldElement FieldElement::inverse() const {
    if (is_zero()) throw DomainError("inversion of zero");
    if (sgn(b_) == 0) return FieldElement(Rational(1) / a_);
    // (a - b sqrt d) / (a^2 - b^2 d); the norm is nonzero since d is not a square.
    Rational norm = a_ * a_ - b_ * b_ * Rational(static_cast<long>(d_));
    return FieldElement(a_ / norm, -b_ / norm, d_);
}

FieldElement& FieldElement::operator/=(const FieldElement& y) {
    common_discriminant(*this, y);
    if (sgn(y.b_) == 0) {
        if (sgn(y.a_) == 0) throw DomainError("division by zero");
        a_ /= y.a_;
        b_ /= y.a_;
        normalize();
        return *this;
    }
    return *this *= y.inverse();
}

double FieldElement::to_double() const {
    double v = a_.get_d();
    if (d_ != 0) v += b_.get_d() * std::sqrt(static_cast<double>(d_));
    return v;
}

int compare(const FieldElement& x, const FieldElement& y) { return (x - y).sign(); }

Integer floor(const FieldElement& x) {
    if (x.is_rational()) return floor(x.rational_part());
    Integer k(std::floor(x.to_double()));
    while (compare(x, FieldElement(Rational(k))) < 0) k -= 1;
    while (compare(x, FieldElement(Rational(k + 1))) >= 0) k += 1;
    return k;
}

FieldElement parse_field_element(std::string_view text) {
    std::size_t pos = 0;
    Rational a = read_fraction(text, pos, true);
    if (pos == text.size()) return FieldElement(a);
    if (text[pos] != '+' && text[pos] != '-')
        throw ParseError("expected '+' or '-' after rational part in '" + std::string(text) + "'");
    Rational b = read_fraction(text, pos, true);
    constexpr std::string_view kSqrt = "*sqrt(";
    if (text.substr(pos, kSqrt.size()) != kSqrt)
        throw ParseError("expected '*sqrt(' in '" + std::string(text) + "'");
    pos += kSqrt.size();
    Integer d = read_integer(text, pos, false);
    if (pos >= text.size() || text[pos] != ')') throw ParseError("expected ')' in '" + std::string(text) + "'");
    ++pos;
    if (pos != text.size()) throw ParseError("trailing characters in '" + std::string(text) + "'");
    if (!d.fits_slong_p()) throw ParseError("discriminant too large");
    const std::int64_t dd = d.get_si();
    if (dd == 0 || !is_valid_discriminant(dd))
        throw ParseError("invalid discriminant " + d.get_str() + " in '" + std::string(text) + "'");
    return FieldElement(a, b, dd);
}

std::string to_string(const FieldElement& x) {
    std::string s = to_string(x.rational_part());
    if (x.is_rational()) return s;
    const Rational& b = x.sqrt_coefficient();
    if (sgn(b) > 0) s += '+';
    s += to_string(b) + "*sqrt(" + std::to_string(x.discriminant()) + ")";
    return s;
}

std::ostream& operator<<(std::ostream& os, const FieldElement& x) { return os << to_string(x); }

}  // namespace turan
