#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include "fliess/number.hpp"
#include "fliess/word.hpp"

namespace fliess {

inline constexpr std::size_t kMaxPoles = 8;
inline constexpr std::size_t kMaxNonlinear = 8;  // stiffness degrees 2 .. 9

class DimensionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Integer combination of the base pole symbols a1..ap. The zero combination
// stands for the trivial fraction 1/(1 - 0*x0) = 1.
class PoleCombo {
public:
    PoleCombo() = default;
    explicit PoleCombo(std::size_t dim);
    PoleCombo(std::initializer_list<int> coeffs);

    static PoleCombo unit(std::size_t dim, std::size_t i);

    std::size_t dim() const { return dim_; }
    int operator[](std::size_t i) const { return c_[i]; }
    void set(std::size_t i, int v);
    bool is_zero() const;

    PoleCombo& operator+=(const PoleCombo& o);
    friend PoleCombo operator+(PoleCombo a, const PoleCombo& b) { return a += b; }
    PoleCombo operator-() const;

    friend bool operator==(const PoleCombo&, const PoleCombo&) = default;
    friend auto operator<=>(const PoleCombo&, const PoleCombo&) = default;

    // "2a1 + a2"; with negated = true the tabulated display form "-2a1 - a2".
    std::string to_string(bool negated = false) const;

    template <class K>
    K evaluate(const std::vector<K>& values) const {
        K acc = FieldTraits<K>::from_rational(0);
        for (std::size_t i = 0; i < dim_; ++i)
            if (c_[i] != 0) acc += K(FieldTraits<K>::from_rational(c_[i])) * values.at(i);
        return acc;
    }

    std::size_t hash() const;

private:
    std::array<std::int16_t, kMaxPoles> c_{};
    std::uint8_t dim_ = 0;
};

// Exponent vector over the nonlinear coefficients. Slot k belongs to the
// stiffness term of degree k + 2 and is displayed as ε(k+1), so the quadratic
// and cubic Duffing coefficients read ε1 and ε2.
class EpsMonomial {
public:
    EpsMonomial() = default;
    static EpsMonomial single(std::size_t slot, int power = 1);

    int operator[](std::size_t slot) const { return e_[slot]; }
    void bump(std::size_t slot, int by = 1);
    int total() const;
    bool is_one() const { return total() == 0; }

    EpsMonomial& operator+=(const EpsMonomial& o);
    friend EpsMonomial operator+(EpsMonomial a, const EpsMonomial& b) { return a += b; }
    friend bool operator==(const EpsMonomial&, const EpsMonomial&) = default;
    friend auto operator<=>(const EpsMonomial&, const EpsMonomial&) = default;

    std::string to_string() const;
    std::size_t hash() const;

private:
    std::array<std::uint8_t, kMaxNonlinear> e_{};
};

struct ScalarCoefficient {
    Rational value{1};
    EpsMonomial eps;
    int noise_power = 0;                  // exponent of (σ²/2)
    std::vector<PoleCombo> pole_factors;  // product of linear forms in the poles, kept sorted

    // Everything except the rational part; terms with equal chains and equal
    // keys are like terms.
    bool same_key(const ScalarCoefficient& o) const {
        return eps == o.eps && noise_power == o.noise_power && pole_factors == o.pole_factors;
    }
    ScalarCoefficient& operator*=(const ScalarCoefficient& o);
    friend ScalarCoefficient operator*(ScalarCoefficient a, const ScalarCoefficient& b) { return a *= b; }
    friend bool operator==(const ScalarCoefficient& a, const ScalarCoefficient& b) {
        return a.value == b.value && a.same_key(b);
    }

    // Signed rational times the ε monomial and noise power, e.g. "-4 ε1 (σ²/2)".
    std::string to_string() const;
};

struct Fraction {
    PoleCombo pole;
    int exponent = 1;

    friend bool operator==(const Fraction&, const Fraction&) = default;
    friend auto operator<=>(const Fraction&, const Fraction&) = default;
};

// f0 l1 f1 l2 ... lq fq: q letters interleaved with q + 1 fraction slots.
struct Chain {
    std::vector<Letter> letters;
    std::vector<Fraction> fractions;

    Chain() = default;
    explicit Chain(const PoleCombo& leading) : fractions{Fraction{leading, 1}} {}

    static Chain build(const std::vector<Letter>& letters, const std::vector<PoleCombo>& poles);

    Chain& append(Letter l, const PoleCombo& next);
    std::size_t length() const { return letters.size(); }
    std::size_t count(Letter l) const;
    std::size_t dim() const { return fractions.empty() ? 0 : fractions.front().pole.dim(); }
    bool is_reduced() const;
    bool all_x0() const { return count(Letter::x1) == 0; }
    Word word() const { return Word(letters); }

    friend bool operator==(const Chain&, const Chain&) = default;
    std::size_t hash() const;
};

struct SeriesTerm {
    ScalarCoefficient scalar;
    Chain chain;

    friend bool operator==(const SeriesTerm&, const SeriesTerm&) = default;
};

using TermList = std::vector<SeriesTerm>;

struct GeneratingSeries {
    std::size_t dim = 0;
    std::vector<TermList> orders;

    std::size_t term_count() const;
    friend bool operator==(const GeneratingSeries&, const GeneratingSeries&) = default;
};

// Canonical order: letter pattern graded-lex, pole combos, ε vector, noise
// power, pole factors, then rational value.
bool canonical_less(const SeriesTerm& a, const SeriesTerm& b);

// Merges like terms keeping first-occurrence order, dropping zeros.
TermList merge_terms(const TermList& terms);
// merge_terms followed by the canonical sort.
TermList normalize_terms(const TermList& terms);
GeneratingSeries normalize(const GeneratingSeries& series);

// Number of elementary interleavings the recursion visits for two chains.
std::uint64_t interleaving_count(const Chain& s, const Chain& t);

// Chain shuffle by the closed-form recursion on standard-form terms. Like
// chains from this one product are merged; the list is in generation order.
TermList shuffle_terms(const SeriesTerm& s, const SeriesTerm& t);
// Left fold of shuffle_terms over the operands, merged within the product.
TermList shuffle_many(const TermList& operands);

// Concatenation product. The adjoining fraction slots must not both be
// nontrivial (that product is not a single standard-form term).
SeriesTerm concat_terms(const SeriesTerm& a, const SeriesTerm& b);

TermList reduce_exponents(const SeriesTerm& s);

// Truncated word expansion with rational pole values substituted. Only the
// rational part and pole factors of the scalar are applied; ε and noise powers
// are left to the caller.
WordPolynomial expand_to_words(const SeriesTerm& s, long order, const std::vector<Rational>& pole_values);

// Two-row array display with negated pole combos, preceded by the scalar.
std::string render_array(const SeriesTerm& s);
// Single-line form: scalar [letters; poles].
std::string render_inline(const SeriesTerm& s);

// Machine-readable record form; parse_dump inverts dump exactly.
std::string dump(const GeneratingSeries& series);
GeneratingSeries parse_dump(const std::string& text);

}  // namespace fliess
