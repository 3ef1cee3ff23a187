#pragma once

#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "fliess/number.hpp"

namespace fliess {

// x0 encodes integration in time, x1 encodes the input.
enum class Letter : std::uint8_t { x0 = 0, x1 = 1 };

inline const char* letter_name(Letter l) { return l == Letter::x0 ? "x0" : "x1"; }

class Word {
public:
    Word() = default;
    Word(std::initializer_list<Letter> letters) : letters_(letters) {}
    explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {}

    static Word power(Letter l, std::size_t n) { return Word(std::vector<Letter>(n, l)); }
    // Parses juxtaposed letter names ("x0x1x0"); "" and "1" give the empty word.
    static Word parse(std::string_view text);

    std::size_t size() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }
    Letter operator[](std::size_t i) const { return letters_[i]; }
    const std::vector<Letter>& letters() const { return letters_; }
    std::size_t count(Letter l) const;

    Word tail() const { return Word(std::vector<Letter>(letters_.begin() + 1, letters_.end())); }

    std::string to_string() const;

    friend bool operator==(const Word& a, const Word& b) { return a.letters_ == b.letters_; }
    friend bool operator!=(const Word& a, const Word& b) { return !(a == b); }

private:
    std::vector<Letter> letters_;
};

Word concat(const Word& u, const Word& v);

// Graded-lexicographic order: shorter words first, then lexicographic with x0 < x1.
struct GradedLex {
    bool operator()(const Word& a, const Word& b) const;
};

class WordPolynomial {
public:
    using Map = std::map<Word, Rational, GradedLex>;

    WordPolynomial() = default;
    explicit WordPolynomial(const Word& w, Rational c = 1) { add(w, std::move(c)); }

    void add(const Word& w, const Rational& c);
    Rational coeff(const Word& w) const;
    const Map& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    // Sum of all coefficients.
    Rational mass() const;
    WordPolynomial truncated(std::size_t max_len) const;

    WordPolynomial& operator+=(const WordPolynomial& o);
    WordPolynomial& operator-=(const WordPolynomial& o);
    WordPolynomial& operator*=(const Rational& c);

    friend WordPolynomial operator+(WordPolynomial a, const WordPolynomial& b) { return a += b; }
    friend WordPolynomial operator-(WordPolynomial a, const WordPolynomial& b) { return a -= b; }
    friend WordPolynomial operator*(WordPolynomial a, const Rational& c) { return a *= c; }
    friend WordPolynomial operator*(const Rational& c, WordPolynomial a) { return a *= c; }
    friend bool operator==(const WordPolynomial& a, const WordPolynomial& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const WordPolynomial& a, const WordPolynomial& b) { return !(a == b); }

    // "c1·w1 + c2·w2" in graded-lex order; "0" for the zero polynomial.
    std::string to_string() const;

private:
    Map terms_;
};

// Concatenation product of polynomials, dropping words longer than max_len.
WordPolynomial concat_product(const WordPolynomial& p, const WordPolynomial& q,
                              std::size_t max_len = static_cast<std::size_t>(-1));

WordPolynomial shuffle_words(const Word& u, const Word& v);
WordPolynomial shuffle_polynomials(const WordPolynomial& p, const WordPolynomial& q);
// Shuffle restricted to pairs whose combined length fits into max_len.
WordPolynomial shuffle_polynomials_truncated(const WordPolynomial& p, const WordPolynomial& q, std::size_t max_len);

// Shuffle over an arbitrary alphabet, by the same first-letter recursion.
// Multiplicities are counted in 64 bits; used for alphabets wider than {x0, x1}.
template <class T>
std::map<std::vector<T>, std::uint64_t> shuffle_sequences(const std::vector<T>& u, const std::vector<T>& v) {
    std::map<std::vector<T>, std::uint64_t> out;
    if (u.empty() || v.empty()) {
        out[u.empty() ? v : u] = 1;
        return out;
    }
    auto branch = [&out](const T& head, const std::map<std::vector<T>, std::uint64_t>& rest) {
        for (const auto& [w, c] : rest) {
            std::vector<T> word{head};
            word.insert(word.end(), w.begin(), w.end());
            out[word] += c;
        }
    };
    branch(u.front(), shuffle_sequences(std::vector<T>(u.begin() + 1, u.end()), v));
    branch(v.front(), shuffle_sequences(u, std::vector<T>(v.begin() + 1, v.end())));
    return out;
}

void clear_shuffle_cache();
std::size_t shuffle_cache_size();

}  // namespace fliess
