#include "fliess/number.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace fliess {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

Integer pow10(unsigned long e) {
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
    return r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string_view s = trim(text);
    if (s.empty()) throw ParseError("empty number");
    bool neg = false;
    if (s.front() == '+' || s.front() == '-') {
        neg = s.front() == '-';
        s.remove_prefix(1);
    }
    Rational out;
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        auto num = s.substr(0, slash);
        auto den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) throw ParseError("bad rational '" + std::string(text) + "'");
        out = Rational(Integer(std::string(num)), Integer(std::string(den)));
        if (out.get_den() == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
        out.canonicalize();
    } else {
        long exponent = 0;
        if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
            auto ex = s.substr(e + 1);
            try {
                exponent = std::stol(std::string(ex));
            } catch (const std::exception&) {
                throw ParseError("bad exponent in '" + std::string(text) + "'");
            }
            s = s.substr(0, e);
        }
        std::string digits;
        long frac_len = 0;
        if (auto dot = s.find('.'); dot != std::string_view::npos) {
            auto ip = s.substr(0, dot);
            auto fp = s.substr(dot + 1);
            if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)) || (ip.empty() && fp.empty()))
                throw ParseError("bad number '" + std::string(text) + "'");
            digits = std::string(ip) + std::string(fp);
            frac_len = static_cast<long>(fp.size());
        } else {
            if (!all_digits(s)) throw ParseError("bad number '" + std::string(text) + "'");
            digits = std::string(s);
        }
        Integer mant(digits.empty() ? std::string("0") : digits);
        long scale = exponent - frac_len;
        if (scale >= 0)
            out = Rational(mant * pow10(static_cast<unsigned long>(scale)));
        else
            out = Rational(mant, pow10(static_cast<unsigned long>(-scale)));
        out.canonicalize();
    }
    return neg ? Rational(-out) : out;
}

std::string to_string(const Rational& r) { return r.get_str(); }

long double to_long_double(const Rational& r) {
    // Two doubles carry ~106 bits, comfortably beyond the 64-bit long double mantissa.
    mpf_class x(0, 256);
    x = r;
    double hi = x.get_d();
    mpf_class rest(0, 256);
    rest = x - mpf_class(hi, 256);
    return static_cast<long double>(hi) + static_cast<long double>(rest.get_d());
}

Rational binomial(long n, long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return Rational(r);
}

Rational factorial(long n) {
    if (n < 0) throw std::invalid_argument("factorial of negative number");
    Integer r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return Rational(r);
}

Rational gen_binomial(long e, long r) {
    if (r < 0) return 0;
    Rational acc = 1;
    for (long i = 0; i < r; ++i) acc *= Rational(e - i, i + 1);
    acc.canonicalize();
    return acc;
}

// ---------------------------------------------------------------------------

QuadSurd::QuadSurd(Rational p, Rational q, long d) : p_(std::move(p)), q_(std::move(q)), d_(d) {
    p_.canonicalize();
    q_.canonicalize();
    if (d_ == 0 || q_ == 0) {
        q_ = 0;
        d_ = 0;
    } else if (d_ == 1) {
        p_ += q_;
        q_ = 0;
        d_ = 0;
    }
}

QuadSurd QuadSurd::sqrt_of(const Rational& r) {
    if (r == 0) return QuadSurd();
    // sqrt(a/b) = sqrt(a*b)/b
    Integer m = r.get_num() * r.get_den();
    bool neg = m < 0;
    if (neg) m = -m;
    Integer square_part = 1;
    Integer rest = m;
    // Pull out small square factors; a large residual is kept as the radicand.
    for (unsigned long f = 2; f < 100000 && Integer(f) * f <= rest; ++f) {
        Integer ff = Integer(f) * f;
        while (mpz_divisible_p(rest.get_mpz_t(), ff.get_mpz_t())) {
            rest /= ff;
            square_part *= f;
        }
    }
    if (mpz_perfect_square_p(rest.get_mpz_t())) {
        Integer root;
        mpz_sqrt(root.get_mpz_t(), rest.get_mpz_t());
        square_part *= root;
        rest = 1;
    }
    if (!rest.fits_slong_p()) throw std::overflow_error("radicand too large for exact surd");
    long d = rest.get_si();
    if (neg) d = -d;
    Rational coeff(square_part, r.get_den());
    coeff.canonicalize();
    if (d == 1) return QuadSurd(coeff);
    return QuadSurd(Rational(0), coeff, d);
}

void QuadSurd::unify(const QuadSurd& o) {
    if (o.q_ == 0) return;
    if (q_ == 0) {
        d_ = o.d_;
        return;
    }
    if (d_ != o.d_)
        throw std::domain_error("surd arithmetic across different radicands (" + std::to_string(d_) + " vs " +
                                std::to_string(o.d_) + ")");
}

QuadSurd QuadSurd::conjugate() const { return QuadSurd(p_, -q_, d_); }

QuadSurd QuadSurd::complex_conjugate() const { return d_ < 0 ? conjugate() : *this; }

Rational QuadSurd::norm() const {
    Rational n = p_ * p_ - q_ * q_ * d_;
    n.canonicalize();
    return n;
}

QuadSurd QuadSurd::operator-() const { return QuadSurd(-p_, -q_, d_); }

QuadSurd& QuadSurd::operator+=(const QuadSurd& o) {
    unify(o);
    p_ += o.p_;
    q_ += o.q_;
    if (q_ == 0) d_ = 0;
    return *this;
}

QuadSurd& QuadSurd::operator-=(const QuadSurd& o) {
    unify(o);
    p_ -= o.p_;
    q_ -= o.q_;
    if (q_ == 0) d_ = 0;
    return *this;
}

QuadSurd& QuadSurd::operator*=(const QuadSurd& o) {
    unify(o);
    long d = d_ != 0 ? d_ : o.d_;
    Rational np = p_ * o.p_ + q_ * o.q_ * d;
    Rational nq = p_ * o.q_ + q_ * o.p_;
    *this = QuadSurd(np, nq, d);
    return *this;
}

QuadSurd& QuadSurd::operator/=(const QuadSurd& o) {
    if (o.is_zero()) throw std::domain_error("division by zero surd");
    Rational n = o.norm();
    QuadSurd num = *this;
    num *= o.conjugate();
    *this = QuadSurd(num.p_ / n, num.q_ / n, num.q_ == 0 ? 0 : num.d_);
    return *this;
}

bool operator==(const QuadSurd& a, const QuadSurd& b) {
    return a.p_ == b.p_ && a.q_ == b.q_ && (a.q_ == 0 || a.d_ == b.d_);
}

bool structural_less(const QuadSurd& a, const QuadSurd& b) {
    if (a.radicand() != b.radicand()) return a.radicand() < b.radicand();
    if (a.p_ != b.p_) return a.p_ < b.p_;
    return a.q_ < b.q_;
}

QuadSurd QuadSurd::pow(long e) const {
    if (e < 0) return QuadSurd(1) / pow(-e);
    QuadSurd result(1);
    QuadSurd base = *this;
    while (e > 0) {
        if (e & 1) result *= base;
        base *= base;
        e >>= 1;
    }
    return result;
}

Complex QuadSurd::to_complex() const {
    long double p = to_long_double(p_);
    if (q_ == 0) return {p, 0.0L};
    long double q = to_long_double(q_);
    if (d_ > 0) return {p + q * std::sqrt(static_cast<long double>(d_)), 0.0L};
    return {p, q * std::sqrt(static_cast<long double>(-d_))};
}

std::string QuadSurd::to_string() const {
    if (q_ == 0) return p_.get_str();
    std::string surd = "sqrt(" + std::to_string(d_) + ")";
    std::string qs;
    if (q_ == 1)
        qs = surd;
    else if (q_ == -1)
        qs = "-" + surd;
    else
        qs = q_.get_str() + "*" + surd;
    if (p_ == 0) return qs;
    if (qs.front() == '-') return p_.get_str() + qs;
    return p_.get_str() + "+" + qs;
}

QuadSurd QuadSurd::parse(std::string_view text) {
    std::string_view s = trim(text);
    auto pos = s.find("sqrt(");
    if (pos == std::string_view::npos) return QuadSurd(parse_rational(s));
    auto close = s.find(')', pos);
    if (close == std::string_view::npos) throw ParseError("unterminated sqrt in '" + std::string(text) + "'");
    long d = 0;
    try {
        d = std::stol(std::string(s.substr(pos + 5, close - pos - 5)));
    } catch (const std::exception&) {
        throw ParseError("bad radicand in '" + std::string(text) + "'");
    }
    if (!trim(s.substr(close + 1)).empty()) throw ParseError("trailing text after sqrt in '" + std::string(text) + "'");
    // Split "p+q*" / "p-q*" / "q*" / "-" / "" before sqrt.
    std::string_view head = trim(s.substr(0, pos));
    Rational p = 0;
    Rational q = 1;
    if (!head.empty() && head.back() == '*') head = trim(head.substr(0, head.size() - 1));
    // Find the sign separating p from q (not the leading sign, not an exponent sign).
    std::size_t split = std::string_view::npos;
    for (std::size_t i = head.size(); i-- > 1;) {
        if ((head[i] == '+' || head[i] == '-') && head[i - 1] != 'e' && head[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    std::string_view qpart = head;
    if (split != std::string_view::npos) {
        p = parse_rational(head.substr(0, split));
        qpart = head.substr(split);
    }
    qpart = trim(qpart);
    if (qpart.empty() || qpart == "+")
        q = 1;
    else if (qpart == "-")
        q = -1;
    else
        q = parse_rational(qpart);
    QuadSurd root = sqrt_of(Rational(d));
    return QuadSurd(p) + QuadSurd(q) * root;
}

bool FieldTraits<Complex>::same(const Complex& a, const Complex& b) {
    long double scale = std::max({1.0L, std::abs(a), std::abs(b)});
    return std::abs(a - b) <= 1e-15L * scale;
}

std::string format_sig(long double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*Lg", digits, v);
    return buf;
}

}  // namespace fliess
