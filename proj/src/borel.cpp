#include "fliess/borel.hpp"

#include <sstream>

namespace fliess {

std::vector<long double> evaluate(const TimeFunction<Complex>& tf, const std::vector<long double>& t_grid) {
    std::vector<long double> out;
    out.reserve(t_grid.size());
    for (long double t : t_grid) out.push_back(tf.evaluate(t));
    return out;
}

namespace {

constexpr long double kImagTol = 1e-12L;

std::string t_power(int j) {
    if (j == 0) return "";
    if (j == 1) return " t";
    return " t^" + std::to_string(j);
}

struct Piece {
    long double sort_key;
    bool negative;
    std::string body;
};

}  // namespace

std::string render_time_function(const TimeFunction<Complex>& tf, int digits) {
    auto num = [digits](long double v) { return format_sig(v, digits); };
    std::vector<Piece> pieces;
    std::vector<bool> used(tf.terms().size(), false);
    const auto& terms = tf.terms();
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        const auto& t = terms[i];
        long double sigma = t.rate.real();
        long double omega = t.rate.imag();
        bool real_rate = std::abs(omega) <= kImagTol * std::max(1.0L, std::abs(t.rate));
        if (real_rate) {
            long double c = t.coeff.real();
            Piece p{0, c < 0, ""};
            long double mag = std::abs(c);
            if (std::abs(sigma) <= kImagTol) {
                p.sort_key = -1;
                p.body = num(mag) + t_power(t.power);
            } else if (sigma < 0) {
                long double tau = -1.0L / sigma;
                p.sort_key = tau;
                if (t.power == 0)
                    p.body = "(" + num(mag * tau) + "/" + num(tau) + ")e^{-t/" + num(tau) + "}";
                else
                    p.body = num(mag) + t_power(t.power) + " e^{-t/" + num(tau) + "}";
            } else {
                p.sort_key = 1e30L;
                p.body = num(mag) + t_power(t.power) + " e^{" + num(sigma) + "t}";
            }
            pieces.push_back(p);
            continue;
        }
        // Fold the conjugate partner: c e^{λt} + c̄ e^{λ̄t} = e^{σt}(A cos ωt + B sin ωt).
        for (std::size_t j = i + 1; j < terms.size(); ++j)
            if (!used[j] && terms[j].power == t.power &&
                std::abs(terms[j].rate - std::conj(t.rate)) <= 1e-12L * std::max(1.0L, std::abs(t.rate))) {
                used[j] = true;
                break;
            }
        Complex c = omega > 0 ? t.coeff : std::conj(t.coeff);
        long double w = std::abs(omega);
        long double a = 2 * c.real();
        long double b = -2 * c.imag();
        std::string osc = "(" + num(a) + " cos(" + num(w) + "t) " + (b < 0 ? "- " : "+ ") + num(std::abs(b)) + " sin(" +
                          num(w) + "t))";
        Piece p{0, false, ""};
        if (std::abs(sigma) <= kImagTol) {
            p.sort_key = 1e29L;
            p.body = osc + t_power(t.power);
        } else if (sigma < 0) {
            long double tau = -1.0L / sigma;
            p.sort_key = tau;
            p.body = "e^{-t/" + num(tau) + "}" + osc + t_power(t.power);
        } else {
            p.sort_key = 1e30L;
            p.body = "e^{" + num(sigma) + "t}" + osc + t_power(t.power);
        }
        pieces.push_back(p);
    }
    if (pieces.empty()) return "0";
    std::stable_sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) { return a.sort_key < b.sort_key; });
    std::string out;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        if (i == 0)
            out += pieces[i].negative ? "-" : "";
        else
            out += pieces[i].negative ? " - " : " + ";
        out += pieces[i].body;
    }
    return out;
}

X0Rational<QuadSurd> quadratic_denominator(const std::vector<QuadSurd>& numerator, const Rational& b, const Rational& c) {
    // Roots r of r² + b r + c = 0 give 1 + b x + c x² = (1 - r1 x)(1 - r2 x).
    X0Rational<QuadSurd> g;
    g.numerator = numerator;
    if (c == 0) {
        if (b != 0) detail::add_factor(g.factors, QuadSurd(Rational(-b)), 1);
        return g;
    }
    Rational disc = b * b - 4 * c;
    QuadSurd half(Rational(-b / 2));
    if (disc == 0) {
        detail::add_factor(g.factors, half, 2);
        return g;
    }
    QuadSurd root = QuadSurd::sqrt_of(disc) / QuadSurd(2);
    detail::add_factor(g.factors, half + root, 1);
    detail::add_factor(g.factors, half - root, 1);
    return g;
}

SeriesTerm substitute_step(const SeriesTerm& term, const Rational& amplitude) {
    SeriesTerm out = term;
    long r = 0;
    for (auto& l : out.chain.letters)
        if (l == Letter::x1) {
            l = Letter::x0;
            ++r;
        }
    Rational scale = 1;
    for (long i = 0; i < r; ++i) scale *= amplitude;
    out.scalar.value *= scale;
    return out;
}

}  // namespace fliess
