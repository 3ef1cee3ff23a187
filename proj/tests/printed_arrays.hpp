#pragma once

// Helpers for comparing series terms with arrays written the way they are
// printed: a row of letters over a row of negated pole combinations.

#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "fliess/series.hpp"

namespace testutil {

struct PrintedArray {
    fliess::Rational multiplier;
    int eps1 = 0;
    int eps2 = 0;
    std::string letters;               // "x0 x0 x1"
    std::vector<std::string> columns;  // "-2a1 - a2"
};

// "-2a1 - a2" -> {2, 1} (the stored combo is the negation of what is shown).
inline std::vector<int> parse_negated_combo(const std::string& text, std::size_t dim) {
    std::string s;
    for (char ch : text)
        if (ch != ' ') s += ch;
    std::vector<int> out(dim, 0);
    static const std::regex term(R"(([+-]?)(\d*)a(\d+))");
    for (auto it = std::sregex_iterator(s.begin(), s.end(), term); it != std::sregex_iterator(); ++it) {
        const auto& m = *it;
        int coef = m[2].str().empty() ? 1 : std::stoi(m[2].str());
        if (m[1].str() == "-") coef = -coef;
        out[static_cast<std::size_t>(std::stoi(m[3].str()) - 1)] += -coef;
    }
    return out;
}

// True when the term has the printed scalar and the chain
// 1/(1 - c1 x0) l1 1/(1 - c2 x0) l2 ... lq with a trivial last fraction.
inline bool matches(const fliess::SeriesTerm& t, const PrintedArray& a, std::string* why = nullptr) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (t.scalar.value != a.multiplier) return fail("multiplier " + t.scalar.value.get_str());
    if (t.scalar.eps[0] != a.eps1 || t.scalar.eps[1] != a.eps2) return fail("eps " + t.scalar.eps.to_string());
    std::istringstream ls(a.letters);
    std::vector<fliess::Letter> letters;
    for (std::string l; ls >> l;) letters.push_back(l == "x0" ? fliess::Letter::x0 : fliess::Letter::x1);
    if (t.chain.letters != letters) return fail("letters " + t.chain.word().to_string());
    if (t.chain.fractions.size() != letters.size() + 1) return fail("fraction count");
    const auto& last = t.chain.fractions.back();
    if (!last.pole.is_zero() || last.exponent != 1) return fail("last fraction not trivial");
    for (std::size_t i = 0; i < a.columns.size(); ++i) {
        const auto& f = t.chain.fractions[i];
        auto want = parse_negated_combo(a.columns[i], f.pole.dim());
        for (std::size_t k = 0; k < want.size(); ++k)
            if (f.pole[k] != want[k]) return fail("column " + std::to_string(i) + " is " + f.pole.to_string(true));
        if (f.exponent != 1) return fail("column " + std::to_string(i) + " exponent");
    }
    return true;
}

}  // namespace testutil
