#include "fliess/residual.hpp"

#include <map>

namespace fliess {

namespace {

template <class K>
using WordMap = std::map<Word, K, GradedLex>;

template <class K>
using Graded = std::map<EpsMonomial, WordMap<K>>;

template <class K>
void add_to(WordMap<K>& m, const Word& w, const K& c) {
    auto [it, fresh] = m.try_emplace(w, c);
    if (!fresh) it->second += c;
}

template <class K>
K combo_value(const PoleCombo& c, const std::vector<K>& poles) {
    if (c.dim() > poles.size()) throw std::invalid_argument("missing pole values");
    K v = FieldTraits<K>::from_rational(0);
    for (std::size_t i = 0; i < c.dim(); ++i)
        if (c[i] != 0) v += FieldTraits<K>::from_rational(c[i]) * poles[i];
    return v;
}

template <class K>
WordMap<K> expand_term(const SeriesTerm& s, std::size_t max_len, const std::vector<K>& poles) {
    WordMap<K> acc;
    acc.emplace(Word{}, FieldTraits<K>::from_rational(1));
    const Chain& ch = s.chain;
    for (std::size_t k = 0; k < ch.fractions.size(); ++k) {
        const Fraction& f = ch.fractions[k];
        const K c = combo_value(f.pole, poles);
        const bool trivial = FieldTraits<K>::is_zero(c);
        WordMap<K> next;
        for (const auto& [w, coef] : acc) {
            K ck = FieldTraits<K>::from_rational(1);
            for (std::size_t j = 0; w.size() + j <= max_len; ++j) {
                if (j > 0) {
                    if (trivial) break;
                    ck *= c;
                }
                K mult = ck * FieldTraits<K>::from_rational(
                                  Rational(binomial(static_cast<long>(j) + f.exponent - 1, static_cast<long>(j))));
                add_to(next, concat(w, Word::power(Letter::x0, j)), coef * mult);
            }
        }
        acc = std::move(next);
        if (k < ch.letters.size()) {
            WordMap<K> with_letter;
            for (const auto& [w, coef] : acc)
                if (w.size() + 1 <= max_len) add_to(with_letter, concat(w, Word{ch.letters[k]}), coef);
            acc = std::move(with_letter);
        }
    }
    K scale = FieldTraits<K>::from_rational(s.scalar.value);
    for (const auto& pf : s.scalar.pole_factors) scale *= combo_value(pf, poles);
    for (auto& [w, coef] : acc) coef *= scale;
    return acc;
}

template <class K>
WordMap<K> shuffle_maps(const WordMap<K>& a, const WordMap<K>& b, std::size_t max_len) {
    WordMap<K> out;
    for (const auto& [u, cu] : a)
        for (const auto& [v, cv] : b) {
            if (u.size() + v.size() > max_len) continue;
            const K prod = cu * cv;
            const WordPolynomial sh = shuffle_words(u, v);
            for (const auto& [w, c] : sh.terms()) add_to(out, w, prod * FieldTraits<K>::from_rational(c));
        }
    return out;
}

template <class K>
WordMap<K> concat_maps(const WordMap<K>& a, const WordMap<K>& b, std::size_t max_len) {
    WordMap<K> out;
    for (const auto& [u, cu] : a)
        for (const auto& [v, cv] : b)
            if (u.size() + v.size() <= max_len) add_to(out, concat(u, v), cu * cv);
    return out;
}

template <class K>
Graded<K> shuffle_graded(const Graded<K>& a, const Graded<K>& b, int max_grade, std::size_t max_len) {
    Graded<K> out;
    for (const auto& [ea, ma] : a)
        for (const auto& [eb, mb] : b) {
            EpsMonomial e = ea + eb;
            if (e.total() > max_grade) continue;
            for (const auto& [w, c] : shuffle_maps(ma, mb, max_len)) add_to(out[e], w, c);
        }
    return out;
}

long double magnitude(const QuadSurd& v) { return std::abs(v.to_complex()); }
long double magnitude(const Complex& v) { return std::abs(v); }

template <class K>
ResidualReport residual_impl(const Expansion& ex, const std::vector<K>& poles, int max_grade, std::size_t max_len) {
    Graded<K> g;
    for (int order = 0; order <= max_grade; ++order)
        for (const auto& term : ex.series.orders[static_cast<std::size_t>(order)])
            for (const auto& [w, c] : expand_term(term, max_len, poles)) add_to(g[term.scalar.eps], w, c);

    Graded<K> rhs;
    for (const auto& [w, c] : expand_term(ex.form.g0, max_len, poles)) add_to(rhs[EpsMonomial{}], w, c);
    const WordMap<K> prefactor = expand_term(ex.form.prefactor, max_len, poles);
    for (int deg : ex.spec.active_degrees()) {
        const auto slot = static_cast<std::size_t>(deg - 2);
        Graded<K> power = g;
        for (int k = 1; k < deg; ++k) power = shuffle_graded(power, g, max_grade - 1, max_len);
        for (const auto& [e, m] : power) {
            if (e.total() > max_grade - 1) continue;
            EpsMonomial shifted = e + EpsMonomial::single(slot);
            for (const auto& [w, c] : concat_maps(prefactor, m, max_len)) add_to(rhs[shifted], w, c);
        }
    }

    ResidualReport rep;
    rep.exact = FieldTraits<K>::exact;
    Graded<K> diff = g;
    for (const auto& [e, m] : rhs)
        for (const auto& [w, c] : m) add_to(diff[e], w, K(-c));
    for (const auto& [e, m] : diff) {
        if (e.total() > max_grade) continue;
        for (const auto& [w, c] : m) {
            ++rep.coefficients_checked;
            auto it = g.find(e);
            if (it != g.end()) {
                auto jt = it->second.find(w);
                if (jt != it->second.end()) rep.scale = std::max(rep.scale, magnitude(jt->second));
            }
            const long double d = magnitude(c);
            rep.max_abs = std::max(rep.max_abs, d);
            const bool off = rep.exact ? !FieldTraits<K>::is_zero(c) : d > 1e-9L;
            if (off) {
                ++rep.nonzero;
                if (rep.examples.size() < 5)
                    rep.examples.push_back((e.is_one() ? std::string("1") : e.to_string()) + " " + w.to_string());
            }
        }
    }
    return rep;
}

}  // namespace

ResidualReport fixed_point_residual(const Expansion& ex, int max_grade, std::size_t max_len) {
    if (max_grade < 0) throw std::invalid_argument("max_grade must be nonnegative");
    if (max_grade + 1 > static_cast<int>(ex.series.orders.size()))
        throw std::invalid_argument("expansion computed to fewer orders than the residual check needs");
    if (!ex.spec.exact_poles.empty()) return residual_impl(ex, ex.spec.exact_poles, max_grade, max_len);
    return residual_impl(ex, ex.spec.numeric_poles, max_grade, max_len);
}

}  // namespace fliess
