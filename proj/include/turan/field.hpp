#pragma once

// Exact arithmetic over Q and real quadratic fields Q[sqrt(d)].
//
// Rationals are GMP rationals (always canonical: lowest terms, positive
// denominator). A FieldElement is a + b*sqrt(d); d == 0 encodes the plain
// rational case, and any element with b == 0 is normalized to d == 0 so that
// rational values mix freely with elements of any extension.

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace turan {

using Integer = mpz_class;
using Rational = mpq_class;

/// Builds num/den in lowest terms. Throws DomainError when den == 0.
Rational make_rational(const Integer& num, const Integer& den);

/// Parses `p/q` (sign optional, denominator mandatory).
Rational parse_rational(std::string_view text);

/// Formats as `p/q`, always with an explicit denominator.
std::string to_string(const Rational& q);

/// Best rational approximation of `x` with denominator <= max_denominator.
/// Ties in distance go to the smaller denominator.
Rational rationalize(double x, const Integer& max_denominator);

/// Exact value of a finite double.
Rational exact_rational(double x);

/// Largest integer <= q.
Integer floor(const Rational& q);

/// True iff d >= 2 has no square factor, or d == 0.
bool is_valid_discriminant(std::int64_t d);

class FieldElement {
public:
    FieldElement() = default;
    FieldElement(long value) : a_(value) {}  // NOLINT(google-explicit-constructor)
    FieldElement(Rational a) : a_(std::move(a)) {}  // NOLINT(google-explicit-constructor)
    /// a + b*sqrt(d). Throws DomainError for an invalid discriminant, or for
    /// d == 0 with b != 0.
    FieldElement(Rational a, Rational b, std::int64_t d);

    const Rational& rational_part() const noexcept { return a_; }
    const Rational& sqrt_coefficient() const noexcept { return b_; }
    std::int64_t discriminant() const noexcept { return d_; }
    bool is_rational() const noexcept { return d_ == 0; }
    bool is_zero() const noexcept { return sgn(a_) == 0 && d_ == 0; }

    /// Exact sign of a + b*sqrt(d) using only integer comparisons.
    int sign() const;

    FieldElement operator-() const;
    FieldElement& operator+=(const FieldElement& y);
    FieldElement& operator-=(const FieldElement& y);
    FieldElement& operator*=(const FieldElement& y);
    FieldElement& operator/=(const FieldElement& y);

    /// Multiplicative inverse. Throws DomainError on zero.
    FieldElement inverse() const;

    /// Floating approximation, for display and numeric heuristics only.
    double to_double() const;

    friend bool operator==(const FieldElement& x, const FieldElement& y) {
        return x.d_ == y.d_ && x.a_ == y.a_ && x.b_ == y.b_;
    }

private:
    void normalize();

    Rational a_{0};
    Rational b_{0};
    std::int64_t d_ = 0;
};

/// Common discriminant of two operands; throws DomainError if both are
/// irrational with different d.
std::int64_t common_discriminant(const FieldElement& x, const FieldElement& y);

inline FieldElement operator+(FieldElement x, const FieldElement& y) { return x += y; }
inline FieldElement operator-(FieldElement x, const FieldElement& y) { return x -= y; }
inline FieldElement operator*(FieldElement x, const FieldElement& y) { return x *= y; }
inline FieldElement operator/(FieldElement x, const FieldElement& y) { return x /= y; }

int field_sign(const FieldElement& x);

/// Total order on the reals represented (exact).
int compare(const FieldElement& x, const FieldElement& y);
inline bool operator<(const FieldElement& x, const FieldElement& y) { return compare(x, y) < 0; }
inline bool operator<=(const FieldElement& x, const FieldElement& y) { return compare(x, y) <= 0; }
inline bool operator>(const FieldElement& x, const FieldElement& y) { return compare(x, y) > 0; }
inline bool operator>=(const FieldElement& x, const FieldElement& y) { return compare(x, y) >= 0; }

/// Largest integer <= x, exactly.
Integer floor(const FieldElement& x);

/// Parses `p/q` or `p/q+r/s*sqrt(d)`; whitespace-free, optional sign on
/// either term, denominators mandatory.
FieldElement parse_field_element(std::string_view text);

/// Inverse of parse_field_element.
std::string to_string(const FieldElement& x);

std::ostream& operator<<(std::ostream& os, const FieldElement& x);

}  // namespace turan
