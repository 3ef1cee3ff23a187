#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace fliess {

using Integer = mpz_class;
using Rational = mpq_class;
using Complex = std::complex<long double>;

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Accepts "3", "-7/4", "0.125", "2.5e-3". Decimal forms are converted exactly.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& r);
long double to_long_double(const Rational& r);

Rational binomial(long n, long k);
Rational factorial(long n);

// Generalised binomial coefficient C(e, r) for any integer e (negative allowed).
Rational gen_binomial(long e, long r);

// Exact numbers of the form p + q*sqrt(d), d a fixed squarefree integer.
// d = 0 marks a plain rational; d may be negative (underdamped poles, d = -1
// for Gaussian rationals). Mixing two surds with different nonzero radicands
// is refused rather than silently approximated.
class QuadSurd {
public:
    QuadSurd() = default;
    QuadSurd(long v) : p_(v) {}
    QuadSurd(Rational p) : p_(std::move(p)) { p_.canonicalize(); }
    QuadSurd(Rational p, Rational q, long d);

    // sqrt of a rational, with the radicand reduced to its squarefree part.
    static QuadSurd sqrt_of(const Rational& r);

    const Rational& rational_part() const { return p_; }
    const Rational& surd_part() const { return q_; }
    long radicand() const { return q_ == 0 ? 0 : d_; }

    bool is_zero() const { return p_ == 0 && q_ == 0; }
    bool is_rational() const { return q_ == 0; }
    bool is_real() const { return q_ == 0 || d_ > 0; }

    QuadSurd conjugate() const;
    // Complex conjugate, which differs from the algebraic one when d > 0.
    QuadSurd complex_conjugate() const;
    // Norm over Q: (p + q√d)(p - q√d).
    Rational norm() const;

    QuadSurd operator-() const;
    QuadSurd& operator+=(const QuadSurd& o);
    QuadSurd& operator-=(const QuadSurd& o);
    QuadSurd& operator*=(const QuadSurd& o);
    QuadSurd& operator/=(const QuadSurd& o);

    friend QuadSurd operator+(QuadSurd a, const QuadSurd& b) { return a += b; }
    friend QuadSurd operator-(QuadSurd a, const QuadSurd& b) { return a -= b; }
    friend QuadSurd operator*(QuadSurd a, const QuadSurd& b) { return a *= b; }
    friend QuadSurd operator/(QuadSurd a, const QuadSurd& b) { return a /= b; }

    friend bool operator==(const QuadSurd& a, const QuadSurd& b);
    friend bool operator!=(const QuadSurd& a, const QuadSurd& b) { return !(a == b); }
    // Structural order, only meant for use as a map key.
    friend bool structural_less(const QuadSurd& a, const QuadSurd& b);

    QuadSurd pow(long e) const;
    Complex to_complex() const;
    std::string to_string() const;

    // Inverse of to_string for the forms it emits plus "sqrt(d)" and "q*sqrt(d)".
    static QuadSurd parse(std::string_view text);

private:
    void unify(const QuadSurd& o);

    Rational p_{0};
    Rational q_{0};
    long d_{0};
};

inline Complex to_complex(const QuadSurd& v) { return v.to_complex(); }
inline Complex to_complex(const Complex& v) { return v; }

// Field operations shared by the exact and numeric pipelines.
template <class K>
struct FieldTraits;

template <>
struct FieldTraits<QuadSurd> {
    static constexpr bool exact = true;
    static QuadSurd from_rational(const Rational& r) { return QuadSurd(r); }
    static bool is_zero(const QuadSurd& v) { return v.is_zero(); }
    static bool same(const QuadSurd& a, const QuadSurd& b) { return a == b; }
    static QuadSurd conj(const QuadSurd& v) { return v.complex_conjugate(); }
};

template <>
struct FieldTraits<Complex> {
    static constexpr bool exact = false;
    static Complex from_rational(const Rational& r) { return Complex(to_long_double(r), 0.0L); }
    static bool is_zero(const Complex& v) { return v == Complex(0.0L, 0.0L); }
    static bool same(const Complex& a, const Complex& b);
    static Complex conj(const Complex& v) { return std::conj(v); }
};

// Formats a long double with the given number of significant digits.
std::string format_sig(long double v, int digits);

}  // namespace fliess
