#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "fliess/number.hpp"
#include "fliess/series.hpp"

namespace fliess {

class UnsupportedForm : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Two distinct pole values closer than the numeric grouping tolerance allows
// to decide whether they coincide.
class DegeneracyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr long double kRepeatedPoleTol = 1e-9L;
inline constexpr long double kAmbiguousPoleTol = 1e-6L;

template <class K>
K ipow(const K& base, long e) {
    if (e < 0) return FieldTraits<K>::from_rational(1) / ipow(base, -e);
    K result = FieldTraits<K>::from_rational(1);
    K b = base;
    while (e > 0) {
        if (e & 1) result *= b;
        b *= b;
        e >>= 1;
    }
    return result;
}

// Σ c t^j e^{λ t}.
template <class K>
struct TimeTerm {
    K coeff;
    int power = 0;
    K rate;
};

template <class K>
class TimeFunction {
public:
    const std::vector<TimeTerm<K>>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    void add(const K& coeff, int power, const K& rate) {
        if (FieldTraits<K>::is_zero(coeff)) return;
        for (auto it = terms_.begin(); it != terms_.end(); ++it)
            if (it->power == power && FieldTraits<K>::same(it->rate, rate)) {
                it->coeff += coeff;
                if (FieldTraits<K>::is_zero(it->coeff)) terms_.erase(it);
                return;
            }
        terms_.push_back({coeff, power, rate});
    }

    TimeFunction& operator+=(const TimeFunction& o) {
        for (const auto& t : o.terms_) add(t.coeff, t.power, t.rate);
        return *this;
    }
    friend TimeFunction operator+(TimeFunction a, const TimeFunction& b) { return a += b; }

    TimeFunction scaled(const K& c) const {
        TimeFunction out;
        for (const auto& t : terms_) out.add(t.coeff * c, t.power, t.rate);
        return out;
    }

    // Value at t = 0: sum of the t^0 coefficients.
    K at_zero() const {
        K acc = FieldTraits<K>::from_rational(0);
        for (const auto& t : terms_)
            if (t.power == 0) acc += t.coeff;
        return acc;
    }

    // Coefficient of the constant atom (rate 0, power 0).
    K constant() const {
        for (const auto& t : terms_)
            if (t.power == 0 && FieldTraits<K>::is_zero(t.rate)) return t.coeff;
        return FieldTraits<K>::from_rational(0);
    }

    Complex evaluate_complex(long double t) const {
        Complex acc = 0;
        for (const auto& term : terms_) {
            Complex c = to_complex(term.coeff);
            Complex r = to_complex(term.rate);
            acc += c * std::pow(t, static_cast<long double>(term.power)) * std::exp(r * t);
        }
        return acc;
    }
    long double evaluate(long double t) const { return evaluate_complex(t).real(); }

    TimeFunction<Complex> to_numeric() const {
        TimeFunction<Complex> out;
        for (const auto& t : terms_) out.add(to_complex(t.coeff), t.power, to_complex(t.rate));
        return out;
    }

    // Term-wise exact equality (order-insensitive); meaningful for exact K.
    friend bool operator==(const TimeFunction& a, const TimeFunction& b) {
        if (a.terms_.size() != b.terms_.size()) return false;
        for (const auto& t : a.terms_) {
            bool found = false;
            for (const auto& u : b.terms_)
                if (t.power == u.power && FieldTraits<K>::same(t.rate, u.rate) && FieldTraits<K>::same(t.coeff, u.coeff))
                    found = true;
            if (!found) return false;
        }
        return true;
    }

private:
    std::vector<TimeTerm<K>> terms_;
};

std::vector<long double> evaluate(const TimeFunction<Complex>& tf, const std::vector<long double>& t_grid);

// Tabulated-style rendering: "0.08333 - (0.03519/0.382)e^{-t/0.382} + ...", with
// conjugate pairs folded into e^{-t/τ}(A cos(ωt) + B sin(ωt)).
std::string render_time_function(const TimeFunction<Complex>& tf, int digits = 4);

// f_a^α = [Σ_{j<α} C(α-1, j) a^j t^j / j!] e^{a t}
template <class K>
TimeFunction<K> f_a_alpha(const K& a, int alpha) {
    if (alpha < 1) throw std::invalid_argument("f_a^alpha needs alpha >= 1");
    TimeFunction<K> tf;
    for (int j = 0; j < alpha; ++j) {
        K c = FieldTraits<K>::from_rational(binomial(alpha - 1, j) / factorial(j)) * ipow(a, j);
        tf.add(c, j, a);
    }
    return tf;
}

// numerator(x0) / ∏ (1 - v x0)^m, the denominators grouped by value.
template <class K>
struct X0Rational {
    std::vector<K> numerator;                 // ascending powers of x0
    std::vector<std::pair<K, int>> factors;   // (v, m), v != 0, values distinct
};

// Σ_k p_k x0^k + Σ r / (1 - v x0)^order
template <class K>
struct PartialFractions {
    struct Part {
        K pole;
        int order = 1;
        K residue;
    };
    std::vector<K> polynomial;
    std::vector<Part> parts;
};

namespace detail {

template <class K>
bool close_to(const K& a, const K& b, long double tol) {
    if constexpr (FieldTraits<K>::exact) {
        (void)tol;
        return a == b;
    } else {
        long double scale = std::max({1.0L, std::abs(a), std::abs(b)});
        return std::abs(a - b) <= tol * scale;
    }
}

// Groups values; numeric values within kRepeatedPoleTol count as one repeated
// pole, values further apart but within kAmbiguousPoleTol are refused.
template <class K>
void add_factor(std::vector<std::pair<K, int>>& factors, const K& v, int m) {
    for (auto& [w, mult] : factors) {
        if (close_to(w, v, kRepeatedPoleTol)) {
            mult += m;
            return;
        }
        if (!FieldTraits<K>::exact && close_to(w, v, kAmbiguousPoleTol))
            throw DegeneracyError("pole values " + std::to_string(static_cast<double>(std::abs(to_complex(w)))) +
                                  " and " + std::to_string(static_cast<double>(std::abs(to_complex(v)))) +
                                  " nearly coincide; rerun with exact (surd) pole values");
    }
    factors.emplace_back(v, m);
}

template <class K>
std::vector<K> series_mul(const std::vector<K>& a, const std::vector<K>& b, std::size_t n) {
    std::vector<K> out(n, FieldTraits<K>::from_rational(0));
    for (std::size_t i = 0; i < std::min(n, a.size()); ++i)
        for (std::size_t j = 0; i + j < n && j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

// Taylor coefficients of (c + h)^e around h = 0, c != 0, first n.
template <class K>
std::vector<K> shifted_power(const K& c, long e, std::size_t n) {
    std::vector<K> out;
    K lead = ipow(c, e);
    K inv = FieldTraits<K>::from_rational(1) / c;
    K ratio = FieldTraits<K>::from_rational(1);
    for (std::size_t r = 0; r < n; ++r) {
        out.push_back(lead * FieldTraits<K>::from_rational(gen_binomial(e, static_cast<long>(r))) * ratio);
        ratio *= inv;
    }
    return out;
}

}  // namespace detail

// Rational function of an all-x0 term with pole values substituted. The
// scalar's rational part and pole factors are applied; ε and noise powers are not.
template <class K>
X0Rational<K> rational_of(const SeriesTerm& term, const std::vector<K>& pole_values) {
    if (!term.chain.all_x0())
        throw UnsupportedForm("inverse Laplace-Borel needs an all-x0 chain; substitute the input for x1 first");
    if (term.chain.dim() > pole_values.size()) throw std::invalid_argument("missing pole values");
    X0Rational<K> r;
    K scale = FieldTraits<K>::from_rational(term.scalar.value);
    for (const auto& pf : term.scalar.pole_factors) scale *= pf.evaluate(pole_values);
    const std::size_t k = term.chain.length();
    r.numerator.assign(k + 1, FieldTraits<K>::from_rational(0));
    r.numerator[k] = scale;
    for (const auto& f : term.chain.fractions) {
        if (f.pole.is_zero()) continue;
        K v = f.pole.evaluate(pole_values);
        if (FieldTraits<K>::is_zero(v)) continue;
        detail::add_factor(r.factors, v, f.exponent);
    }
    return r;
}

// Inverse Laplace-Borel transform by residues: x0^k / ∏(1 - v x0)^m maps to
// the inverse Laplace transform of s^(N-k-1) / ∏(s - v)^m with N = Σ m.
template <class K>
TimeFunction<K> inverse_laplace_borel(const X0Rational<K>& g) {
    TimeFunction<K> out;
    long total = 0;
    for (const auto& f : g.factors) total += f.second;
    const K zero = FieldTraits<K>::from_rational(0);
    for (std::size_t k = 0; k < g.numerator.size(); ++k) {
        if (FieldTraits<K>::is_zero(g.numerator[k])) continue;
        const long e = total - static_cast<long>(k) - 1;
        // Poles: the factor values, plus s = 0 when e < 0.
        std::vector<std::pair<K, int>> poles = g.factors;
        if (e < 0) poles.emplace_back(zero, static_cast<int>(-e));
        for (std::size_t pi = 0; pi < poles.size(); ++pi) {
            const K& p = poles[pi].first;
            const std::size_t m = static_cast<std::size_t>(poles[pi].second);
            const bool at_origin = FieldTraits<K>::is_zero(p);
            std::vector<K> phi(m, zero);
            phi[0] = FieldTraits<K>::from_rational(1);
            if (!at_origin && e != 0) phi = detail::series_mul(phi, detail::shifted_power(p, e, m), m);
            for (std::size_t qi = 0; qi < poles.size(); ++qi) {
                if (qi == pi) continue;
                if (FieldTraits<K>::is_zero(poles[qi].first)) continue;  // s^e already cancelled
                phi = detail::series_mul(phi, detail::shifted_power(K(p - poles[qi].first), -poles[qi].second, m), m);
            }
            for (std::size_t j = 0; j < m; ++j) {
                K c = phi[m - 1 - j] * FieldTraits<K>::from_rational(Rational(1) / factorial(static_cast<long>(j)));
                out.add(c * g.numerator[k], static_cast<int>(j), p);
            }
        }
    }
    return out;
}

template <class K>
TimeFunction<K> inverse_laplace_borel(const SeriesTerm& term, const std::vector<K>& pole_values) {
    return inverse_laplace_borel(rational_of(term, pole_values));
}

// Table route: x0^n -> t^n/n!, r (1 - a x0)^-n -> r f_a^n.
template <class K>
TimeFunction<K> inverse_laplace_borel(const PartialFractions<K>& pf) {
    TimeFunction<K> out;
    const K zero = FieldTraits<K>::from_rational(0);
    for (std::size_t n = 0; n < pf.polynomial.size(); ++n)
        out.add(pf.polynomial[n] * FieldTraits<K>::from_rational(Rational(1) / factorial(static_cast<long>(n))),
                static_cast<int>(n), zero);
    for (const auto& part : pf.parts) out += f_a_alpha(part.pole, part.order).scaled(part.residue);
    return out;
}

// Forward transform: t^j e^{λt} -> j! x0^j / (1 - λ x0)^(j+1), rewritten in
// standard partial fractions via x0 = (1 - w)/λ with w = 1 - λ x0.
template <class K>
PartialFractions<K> laplace_borel(const TimeFunction<K>& tf) {
    PartialFractions<K> out;
    const K zero = FieldTraits<K>::from_rational(0);
    auto add_part = [&](const K& pole, int order, const K& r) {
        for (auto& p : out.parts)
            if (p.order == order && FieldTraits<K>::same(p.pole, pole)) {
                p.residue += r;
                return;
            }
        out.parts.push_back({pole, order, r});
    };
    for (const auto& t : tf.terms()) {
        const K base = t.coeff * FieldTraits<K>::from_rational(factorial(t.power));
        if (FieldTraits<K>::is_zero(t.rate)) {
            if (out.polynomial.size() <= static_cast<std::size_t>(t.power))
                out.polynomial.resize(static_cast<std::size_t>(t.power) + 1, zero);
            out.polynomial[static_cast<std::size_t>(t.power)] += base;
            continue;
        }
        const K scale = base * ipow(t.rate, -t.power);
        for (int r = 0; r <= t.power; ++r) {
            Rational sign_binom = binomial(t.power, r) * (r % 2 ? -1 : 1);
            add_part(t.rate, t.power + 1 - r, scale * FieldTraits<K>::from_rational(sign_binom));
        }
    }
    out.parts.erase(std::remove_if(out.parts.begin(), out.parts.end(),
                                   [](const auto& p) { return FieldTraits<K>::is_zero(p.residue); }),
                    out.parts.end());
    while (!out.polynomial.empty() && FieldTraits<K>::is_zero(out.polynomial.back())) out.polynomial.pop_back();
    return out;
}

template <class K>
PartialFractions<K> partial_fractions(const X0Rational<K>& g) {
    return laplace_borel(inverse_laplace_borel(g));
}

template <class K>
PartialFractions<K> partial_fractions(const SeriesTerm& term, const std::vector<K>& pole_values) {
    return partial_fractions(rational_of(term, pole_values));
}

// Taylor coefficients in x0, used to check decompositions by recombination.
template <class K>
std::vector<K> taylor(const X0Rational<K>& g, std::size_t n) {
    std::vector<K> acc(n, FieldTraits<K>::from_rational(0));
    for (std::size_t k = 0; k < std::min(n, g.numerator.size()); ++k) acc[k] = g.numerator[k];
    for (const auto& [v, m] : g.factors)
        for (int r = 0; r < m; ++r) {
            // multiply by 1/(1 - v x0) = Σ v^i x0^i
            for (std::size_t i = 1; i < n; ++i) acc[i] += v * acc[i - 1];
        }
    return acc;
}

template <class K>
std::vector<K> taylor(const PartialFractions<K>& pf, std::size_t n) {
    std::vector<K> acc(n, FieldTraits<K>::from_rational(0));
    for (std::size_t k = 0; k < std::min(n, pf.polynomial.size()); ++k) acc[k] += pf.polynomial[k];
    for (const auto& part : pf.parts)
        for (std::size_t i = 0; i < n; ++i)
            acc[i] += part.residue * FieldTraits<K>::from_rational(binomial(static_cast<long>(i) + part.order - 1,
                                                                           static_cast<long>(i))) *
                      ipow(part.pole, static_cast<long>(i));
    return acc;
}

// Irreducible-looking quadratic denominators such as 1 + ω² x0² are split
// over the surd field: 1 + b x0 + c x0² = (1 - r1 x0)(1 - r2 x0).
X0Rational<QuadSurd> quadratic_denominator(const std::vector<QuadSurd>& numerator, const Rational& b, const Rational& c);

// x1 -> A x0: the closed-form image of a step input of height A.
SeriesTerm substitute_step(const SeriesTerm& term, const Rational& amplitude);

// h1(τ) from the terms with a single x1. Everything right of that x1 must be
// the trivial fraction, otherwise the kernel is not a function of τ alone.
template <class K>
TimeFunction<K> extract_kernel_order1(const TermList& terms, const std::vector<K>& pole_values) {
    TimeFunction<K> h;
    for (const auto& t : terms) {
        if (t.chain.count(Letter::x1) != 1) continue;
        auto pos = static_cast<std::size_t>(std::find(t.chain.letters.begin(), t.chain.letters.end(), Letter::x1) -
                                            t.chain.letters.begin());
        const Fraction& after = t.chain.fractions[pos + 1];
        if (pos + 1 != t.chain.letters.size() || !after.pole.is_zero() || after.exponent != 1)
            throw UnsupportedForm("first-order kernel with a nontrivial factor after the input letter");
        SeriesTerm a{t.scalar, Chain{}};
        a.chain.letters.assign(t.chain.letters.begin(), t.chain.letters.begin() + static_cast<long>(pos));
        a.chain.fractions.assign(t.chain.fractions.begin(), t.chain.fractions.begin() + static_cast<long>(pos) + 1);
        h += inverse_laplace_borel(a, pole_values);
    }
    return h;
}

}  // namespace fliess
