#include "fliess/word.hpp"

#include <algorithm>
#include <mutex>
#include <unordered_map>

namespace fliess {

Word Word::parse(std::string_view text) {
    std::vector<Letter> out;
    std::size_t i = 0;
    if (text == "1") return Word();
    while (i < text.size()) {
        char c = text[i];
        if (c == ' ' || c == '\t') {
            ++i;
            continue;
        }
        if (c != 'x' || i + 1 >= text.size() || (text[i + 1] != '0' && text[i + 1] != '1'))
            throw ParseError("bad word '" + std::string(text) + "'");
        out.push_back(text[i + 1] == '0' ? Letter::x0 : Letter::x1);
        i += 2;
    }
    return Word(std::move(out));
}

std::size_t Word::count(Letter l) const { return static_cast<std::size_t>(std::count(letters_.begin(), letters_.end(), l)); }

std::string Word::to_string() const {
    if (letters_.empty()) return "1";
    std::string s;
    s.reserve(2 * letters_.size());
    for (Letter l : letters_) s += letter_name(l);
    return s;
}

Word concat(const Word& u, const Word& v) {
    std::vector<Letter> out(u.letters());
    out.insert(out.end(), v.letters().begin(), v.letters().end());
    return Word(std::move(out));
}

bool GradedLex::operator()(const Word& a, const Word& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.letters() < b.letters();
}

// ---------------------------------------------------------------------------

void WordPolynomial::add(const Word& w, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(w, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Rational WordPolynomial::coeff(const Word& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? Rational(0) : it->second;
}

Rational WordPolynomial::mass() const {
    Rational m = 0;
    for (const auto& [w, c] : terms_) m += c;
    return m;
}

WordPolynomial WordPolynomial::truncated(std::size_t max_len) const {
    WordPolynomial out;
    for (const auto& [w, c] : terms_)
        if (w.size() <= max_len) out.terms_.emplace(w, c);
    return out;
}

WordPolynomial& WordPolynomial::operator+=(const WordPolynomial& o) {
    for (const auto& [w, c] : o.terms_) add(w, c);
    return *this;
}

WordPolynomial& WordPolynomial::operator-=(const WordPolynomial& o) {
    for (const auto& [w, c] : o.terms_) add(w, -c);
    return *this;
}

WordPolynomial& WordPolynomial::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [w, v] : terms_) v *= c;
    return *this;
}

std::string WordPolynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [w, c] : terms_) {
        Rational mag = abs(c);
        if (first)
            s += c < 0 ? "-" : "";
        else
            s += c < 0 ? " - " : " + ";
        first = false;
        if (mag != 1)
            s += mag.get_str() + "·" + w.to_string();
        else
            s += w.to_string();
    }
    return s;
}

WordPolynomial concat_product(const WordPolynomial& p, const WordPolynomial& q, std::size_t max_len) {
    WordPolynomial out;
    for (const auto& [u, cu] : p.terms())
        for (const auto& [v, cv] : q.terms())
            if (u.size() + v.size() <= max_len) out.add(concat(u, v), cu * cv);
    return out;
}

// ---------------------------------------------------------------------------

namespace {

struct WordPairHash {
    std::size_t operator()(const std::pair<Word, Word>& k) const {
        std::size_t h = 1469598103934665603ull;
        auto mix = [&h](const Word& w) {
            for (Letter l : w.letters()) h = (h ^ (static_cast<std::size_t>(l) + 1)) * 1099511628211ull;
            h = (h ^ 0xff) * 1099511628211ull;
        };
        mix(k.first);
        mix(k.second);
        return h;
    }
};

std::mutex cache_mutex;
std::unordered_map<std::pair<Word, Word>, WordPolynomial, WordPairHash> cache;

WordPolynomial shuffle_uncached(const Word& u, const Word& v);

WordPolynomial shuffle_cached(const Word& a, const Word& b) {
    const bool swap = b.letters() < a.letters();
    const Word& u = swap ? b : a;
    const Word& v = swap ? a : b;
    std::pair<Word, Word> key{u, v};
    {
        std::lock_guard lock(cache_mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    WordPolynomial r = shuffle_uncached(u, v);
    std::lock_guard lock(cache_mutex);
    cache.try_emplace(std::move(key), r);
    return r;
}

WordPolynomial prepend(Letter l, const WordPolynomial& p) {
    WordPolynomial out;
    for (const auto& [w, c] : p.terms()) out.add(concat(Word{l}, w), c);
    return out;
}

// x_j w ⧢ x_k w' = x_j (w ⧢ x_k w') + x_k (x_j w ⧢ w')
WordPolynomial shuffle_uncached(const Word& u, const Word& v) {
    if (u.empty()) return WordPolynomial(v);
    if (v.empty()) return WordPolynomial(u);
    WordPolynomial out = prepend(u[0], shuffle_cached(u.tail(), v));
    out += prepend(v[0], shuffle_cached(u, v.tail()));
    return out;
}

}  // namespace

WordPolynomial shuffle_words(const Word& u, const Word& v) { return shuffle_cached(u, v); }

WordPolynomial shuffle_polynomials(const WordPolynomial& p, const WordPolynomial& q) {
    return shuffle_polynomials_truncated(p, q, static_cast<std::size_t>(-1));
}

WordPolynomial shuffle_polynomials_truncated(const WordPolynomial& p, const WordPolynomial& q, std::size_t max_len) {
    WordPolynomial out;
    for (const auto& [u, cu] : p.terms())
        for (const auto& [v, cv] : q.terms()) {
            if (u.size() + v.size() > max_len) continue;
            WordPolynomial s = shuffle_words(u, v);
            s *= cu * cv;
            out += s;
        }
    return out;
}

void clear_shuffle_cache() {
    std::lock_guard lock(cache_mutex);
    cache.clear();
}

std::size_t shuffle_cache_size() {
    std::lock_guard lock(cache_mutex);
    return cache.size();
}

}  // namespace fliess
