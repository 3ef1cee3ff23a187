#include "fliess/series.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

namespace fliess {

namespace {

inline std::size_t hash_mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
}

std::size_t display_width(const std::string& s) {
    std::size_t w = 0;
    for (unsigned char c : s)
        if ((c & 0xC0) != 0x80) ++w;
    return w;
}

std::string pad(const std::string& s, std::size_t width) {
    std::size_t w = display_width(s);
    return w >= width ? s : s + std::string(width - w, ' ');
}

const char* const kSuperscripts[] = {"⁰", "¹", "²", "³", "⁴", "⁵", "⁶", "⁷", "⁸", "⁹"};

std::string power_suffix(int p) {
    if (p == 1) return "";
    std::string digits = std::to_string(p);
    std::string out;
    for (char c : digits) out += kSuperscripts[c - '0'];
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// PoleCombo

PoleCombo::PoleCombo(std::size_t dim) {
    if (dim > kMaxPoles) throw std::invalid_argument("at most " + std::to_string(kMaxPoles) + " pole symbols");
    dim_ = static_cast<std::uint8_t>(dim);
}

PoleCombo::PoleCombo(std::initializer_list<int> coeffs) : PoleCombo(coeffs.size()) {
    std::size_t i = 0;
    for (int c : coeffs) set(i++, c);
}

PoleCombo PoleCombo::unit(std::size_t dim, std::size_t i) {
    PoleCombo c(dim);
    c.set(i, 1);
    return c;
}

void PoleCombo::set(std::size_t i, int v) {
    if (i >= dim_) throw std::out_of_range("pole index out of range");
    c_[i] = static_cast<std::int16_t>(v);
}

bool PoleCombo::is_zero() const {
    for (std::size_t i = 0; i < dim_; ++i)
        if (c_[i] != 0) return false;
    return true;
}

PoleCombo& PoleCombo::operator+=(const PoleCombo& o) {
    if (dim_ != o.dim_)
        throw DimensionMismatch("pole combinations over " + std::to_string(dim_) + " and " + std::to_string(o.dim_) +
                                " symbols");
    for (std::size_t i = 0; i < dim_; ++i) c_[i] = static_cast<std::int16_t>(c_[i] + o.c_[i]);
    return *this;
}

PoleCombo PoleCombo::operator-() const {
    PoleCombo r = *this;
    for (std::size_t i = 0; i < dim_; ++i) r.c_[i] = static_cast<std::int16_t>(-c_[i]);
    return r;
}

std::string PoleCombo::to_string(bool negated) const {
    std::string s;
    for (std::size_t i = 0; i < dim_; ++i) {
        int c = negated ? -c_[i] : c_[i];
        if (c == 0) continue;
        if (s.empty())
            s += c < 0 ? "-" : "";
        else
            s += c < 0 ? " - " : " + ";
        int mag = c < 0 ? -c : c;
        if (mag != 1) s += std::to_string(mag);
        s += "a" + std::to_string(i + 1);
    }
    return s.empty() ? "0" : s;
}

std::size_t PoleCombo::hash() const {
    std::size_t h = dim_;
    for (std::size_t i = 0; i < dim_; ++i) h = hash_mix(h, static_cast<std::size_t>(c_[i] + 0x8000));
    return h;
}

// ---------------------------------------------------------------------------
// EpsMonomial

EpsMonomial EpsMonomial::single(std::size_t slot, int power) {
    EpsMonomial m;
    m.bump(slot, power);
    return m;
}

void EpsMonomial::bump(std::size_t slot, int by) {
    if (slot >= kMaxNonlinear) throw std::out_of_range("nonlinearity slot out of range");
    int v = e_[slot] + by;
    if (v < 0 || v > 255) throw std::out_of_range("ε exponent out of range");
    e_[slot] = static_cast<std::uint8_t>(v);
}

int EpsMonomial::total() const {
    int t = 0;
    for (auto v : e_) t += v;
    return t;
}

EpsMonomial& EpsMonomial::operator+=(const EpsMonomial& o) {
    for (std::size_t i = 0; i < kMaxNonlinear; ++i) bump(i, o.e_[i]);
    return *this;
}

std::string EpsMonomial::to_string() const {
    std::string s;
    for (std::size_t i = 0; i < kMaxNonlinear; ++i)
        if (e_[i] > 0) s += "ε" + std::to_string(i + 1) + power_suffix(e_[i]);
    return s;
}

std::size_t EpsMonomial::hash() const {
    std::size_t h = 17;
    for (auto v : e_) h = hash_mix(h, v);
    return h;
}

// ---------------------------------------------------------------------------
// ScalarCoefficient

ScalarCoefficient& ScalarCoefficient::operator*=(const ScalarCoefficient& o) {
    value *= o.value;
    eps += o.eps;
    noise_power += o.noise_power;
    if (!o.pole_factors.empty()) {
        pole_factors.insert(pole_factors.end(), o.pole_factors.begin(), o.pole_factors.end());
        std::sort(pole_factors.begin(), pole_factors.end());
    }
    return *this;
}

std::string ScalarCoefficient::to_string() const {
    std::string tail = eps.to_string();
    if (noise_power > 0) tail += "(σ²/2)" + power_suffix(noise_power);
    for (const auto& f : pole_factors) tail += "(" + f.to_string() + ")";
    if (tail.empty()) return value.get_str();
    if (value == 1) return tail;
    if (value == -1) return "-" + tail;
    return value.get_str() + tail;
}

// ---------------------------------------------------------------------------
// Chain

Chain Chain::build(const std::vector<Letter>& letters, const std::vector<PoleCombo>& poles) {
    if (poles.size() != letters.size() + 1)
        throw std::invalid_argument("a chain with q letters needs q + 1 fraction slots");
    Chain c(poles.front());
    for (std::size_t i = 0; i < letters.size(); ++i) c.append(letters[i], poles[i + 1]);
    return c;
}

Chain& Chain::append(Letter l, const PoleCombo& next) {
    if (!fractions.empty() && fractions.front().pole.dim() != next.dim())
        throw DimensionMismatch("fraction dimension differs within one chain");
    letters.push_back(l);
    fractions.push_back(Fraction{next, 1});
    return *this;
}

std::size_t Chain::count(Letter l) const {
    return static_cast<std::size_t>(std::count(letters.begin(), letters.end(), l));
}

bool Chain::is_reduced() const {
    return std::all_of(fractions.begin(), fractions.end(), [](const Fraction& f) { return f.exponent == 1; });
}

std::size_t Chain::hash() const {
    std::size_t h = letters.size();
    for (Letter l : letters) h = hash_mix(h, static_cast<std::size_t>(l));
    for (const auto& f : fractions) h = hash_mix(hash_mix(h, f.pole.hash()), static_cast<std::size_t>(f.exponent));
    return h;
}

std::size_t GeneratingSeries::term_count() const {
    std::size_t n = 0;
    for (const auto& o : orders) n += o.size();
    return n;
}

// ---------------------------------------------------------------------------
// Ordering and merging

namespace {

struct TermKey {
    const SeriesTerm* term;
};

struct TermKeyHash {
    std::size_t operator()(const TermKey& k) const {
        std::size_t h = hash_mix(k.term->chain.hash(), k.term->scalar.eps.hash());
        h = hash_mix(h, static_cast<std::size_t>(k.term->scalar.noise_power));
        for (const auto& f : k.term->scalar.pole_factors) h = hash_mix(h, f.hash());
        return h;
    }
};

struct TermKeyEq {
    bool operator()(const TermKey& a, const TermKey& b) const {
        return a.term->chain == b.term->chain && a.term->scalar.same_key(b.term->scalar);
    }
};

template <class T>
int three_way(const T& a, const T& b) {
    if (a < b) return -1;
    if (b < a) return 1;
    return 0;
}

}  // namespace

bool canonical_less(const SeriesTerm& a, const SeriesTerm& b) {
    const Chain& ca = a.chain;
    const Chain& cb = b.chain;
    if (ca.letters.size() != cb.letters.size()) return ca.letters.size() < cb.letters.size();
    if (int c = three_way(ca.letters, cb.letters)) return c < 0;
    if (int c = three_way(ca.fractions, cb.fractions)) return c < 0;
    if (int c = three_way(a.scalar.eps, b.scalar.eps)) return c < 0;
    if (a.scalar.noise_power != b.scalar.noise_power) return a.scalar.noise_power < b.scalar.noise_power;
    if (int c = three_way(a.scalar.pole_factors, b.scalar.pole_factors)) return c < 0;
    return a.scalar.value < b.scalar.value;
}

TermList merge_terms(const TermList& terms) {
    TermList out;
    out.reserve(terms.size());
    std::unordered_map<TermKey, std::size_t, TermKeyHash, TermKeyEq> index;
    index.reserve(terms.size());
    // Keys point into `terms`, whose elements outlive the map.
    for (const auto& t : terms) {
        auto [it, inserted] = index.try_emplace(TermKey{&t}, out.size());
        if (inserted)
            out.push_back(t);
        else
            out[it->second].scalar.value += t.scalar.value;
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const SeriesTerm& t) { return t.scalar.value == 0; }),
              out.end());
    return out;
}

TermList normalize_terms(const TermList& terms) {
    TermList out = merge_terms(terms);
    std::sort(out.begin(), out.end(), canonical_less);
    return out;
}

GeneratingSeries normalize(const GeneratingSeries& series) {
    GeneratingSeries out;
    out.dim = series.dim;
    out.orders.reserve(series.orders.size());
    for (const auto& o : series.orders) out.orders.push_back(normalize_terms(o));
    return out;
}

// ---------------------------------------------------------------------------
// Shuffle

std::uint64_t interleaving_count(const Chain& s, const Chain& t) {
    Rational b = binomial(static_cast<long>(s.length() + t.length()), static_cast<long>(s.length()));
    if (!b.get_num().fits_ulong_p()) return UINT64_MAX;
    return b.get_num().get_ui();
}

namespace {

struct ChainHash {
    std::size_t operator()(const Chain& c) const { return c.hash(); }
};

// Insertion-ordered multiset of chains with 64-bit multiplicities.
struct ChainBag {
    std::vector<std::pair<Chain, std::uint64_t>> items;
    std::unordered_map<Chain, std::size_t, ChainHash> index;

    void add(Chain&& c, std::uint64_t mult) {
        auto it = index.find(c);
        if (it != index.end()) {
            if (__builtin_add_overflow(items[it->second].second, mult, &items[it->second].second))
                throw std::overflow_error("shuffle multiplicity overflow");
            return;
        }
        index.emplace(c, items.size());
        items.emplace_back(std::move(c), mult);
    }
};

void require_compatible(const SeriesTerm& s, const SeriesTerm& t) {
    if (s.chain.fractions.empty() || t.chain.fractions.empty())
        throw std::invalid_argument("shuffle of a chain without fraction slots");
    if (s.chain.dim() != t.chain.dim())
        throw DimensionMismatch("shuffle of terms over " + std::to_string(s.chain.dim()) + " and " +
                                std::to_string(t.chain.dim()) + " pole symbols");
    if (!s.chain.is_reduced() || !t.chain.is_reduced())
        throw std::invalid_argument("shuffle requires reduced terms (all exponents 1)");
}

}  // namespace

// P(i, j) = [P(i, j-1) t_j + P(i-1, j) s_i] / (1 - (b_i + d_j) x0), with the
// base case P(0, 0) = 1/(1 - (b_0 + d_0) x0). The trailing fraction of every
// partial chain is the sum of the two operands' current trailing fractions.
TermList shuffle_terms(const SeriesTerm& s, const SeriesTerm& t) {
    require_compatible(s, t);
    const Chain& a = s.chain;
    const Chain& b = t.chain;
    const std::size_t p = a.length();
    const std::size_t q = b.length();

    std::vector<ChainBag> prev(q + 1), cur(q + 1);
    for (std::size_t i = 0; i <= p; ++i) {
        for (std::size_t j = 0; j <= q; ++j) {
            ChainBag cell;
            const PoleCombo tail = a.fractions[i].pole + b.fractions[j].pole;
            if (i == 0 && j == 0) {
                cell.add(Chain(tail), 1);
            } else {
                if (j > 0)
                    for (const auto& [c, m] : cur[j - 1].items) {
                        Chain n = c;
                        n.append(b.letters[j - 1], tail);
                        cell.add(std::move(n), m);
                    }
                if (i > 0)
                    for (const auto& [c, m] : prev[j].items) {
                        Chain n = c;
                        n.append(a.letters[i - 1], tail);
                        cell.add(std::move(n), m);
                    }
            }
            cur[j] = std::move(cell);
        }
        std::swap(prev, cur);
    }

    const ScalarCoefficient scalar = s.scalar * t.scalar;
    TermList out;
    out.reserve(prev[q].items.size());
    for (auto& [c, m] : prev[q].items) {
        SeriesTerm term{scalar, std::move(c)};
        term.scalar.value *= Rational(Integer(std::to_string(m)));
        out.push_back(std::move(term));
    }
    return out;
}

TermList shuffle_many(const TermList& operands) {
    if (operands.empty()) throw std::invalid_argument("shuffle_many needs at least one operand");
    TermList acc{operands.front()};
    for (std::size_t k = 1; k < operands.size(); ++k) {
        TermList next;
        for (const auto& a : acc) {
            TermList part = shuffle_terms(a, operands[k]);
            next.insert(next.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
        }
        acc = merge_terms(next);
    }
    return acc;
}

SeriesTerm concat_terms(const SeriesTerm& a, const SeriesTerm& b) {
    if (a.chain.dim() != b.chain.dim()) throw DimensionMismatch("concatenation across pole dimensions");
    const Fraction& left = a.chain.fractions.back();
    const Fraction& right = b.chain.fractions.front();
    auto trivial = [](const Fraction& f) { return f.pole.is_zero(); };
    Fraction joined;
    if (trivial(left))
        joined = right;
    else if (trivial(right))
        joined = left;
    else if (left.pole == right.pole)
        joined = Fraction{left.pole, left.exponent + right.exponent};
    else
        throw std::invalid_argument("concatenation joins two distinct nontrivial fractions");

    SeriesTerm out{a.scalar * b.scalar, Chain{}};
    out.chain.letters = a.chain.letters;
    out.chain.letters.insert(out.chain.letters.end(), b.chain.letters.begin(), b.chain.letters.end());
    out.chain.fractions.assign(a.chain.fractions.begin(), a.chain.fractions.end() - 1);
    out.chain.fractions.push_back(joined);
    out.chain.fractions.insert(out.chain.fractions.end(), b.chain.fractions.begin() + 1, b.chain.fractions.end());
    return out;
}

// 1/(1-cx0)^α = 1/(1-cx0)^(α-1) + c x0 / ((1-cx0)(1-cx0)^(α-1)), applied until
// every exponent is one.
TermList reduce_exponents(const SeriesTerm& s) {
    TermList done;
    TermList work{s};
    while (!work.empty()) {
        SeriesTerm t = std::move(work.back());
        work.pop_back();
        auto& fr = t.chain.fractions;
        auto it = std::find_if(fr.begin(), fr.end(), [](const Fraction& f) { return f.exponent > 1; });
        if (it == fr.end()) {
            done.push_back(std::move(t));
            continue;
        }
        const std::size_t k = static_cast<std::size_t>(it - fr.begin());
        const Fraction f = *it;
        if (f.pole.is_zero()) {
            fr[k].exponent = 1;
            work.push_back(std::move(t));
            continue;
        }
        // Second branch: F_c x0 F_c^(α-1) carrying the factor c.
        SeriesTerm second = t;
        second.chain.fractions[k] = Fraction{f.pole, 1};
        second.chain.fractions.insert(second.chain.fractions.begin() + static_cast<long>(k) + 1,
                                      Fraction{f.pole, f.exponent - 1});
        second.chain.letters.insert(second.chain.letters.begin() + static_cast<long>(k), Letter::x0);
        second.scalar.pole_factors.push_back(f.pole);
        std::sort(second.scalar.pole_factors.begin(), second.scalar.pole_factors.end());

        SeriesTerm first = std::move(t);
        first.chain.fractions[k].exponent = f.exponent - 1;
        // Pushed in reverse so the first branch is finished first.
        work.push_back(std::move(second));
        work.push_back(std::move(first));
    }
    return done;
}

WordPolynomial expand_to_words(const SeriesTerm& s, long order, const std::vector<Rational>& pole_values) {
    if (order < 0) throw std::invalid_argument("expansion order must be nonnegative");
    const std::size_t max_len = static_cast<std::size_t>(order);
    auto value_of = [&](const PoleCombo& c) {
        if (c.dim() > pole_values.size()) throw std::invalid_argument("missing pole values for expansion");
        Rational v = 0;
        for (std::size_t i = 0; i < c.dim(); ++i) v += Rational(c[i]) * pole_values[i];
        return v;
    };

    // Current partial expansion: map from word to coefficient.
    WordPolynomial acc(Word{}, 1);
    const auto& ch = s.chain;
    for (std::size_t k = 0; k < ch.fractions.size(); ++k) {
        const Fraction& f = ch.fractions[k];
        const Rational c = value_of(f.pole);
        WordPolynomial next;
        for (const auto& [w, coef] : acc.terms()) {
            Rational ck = 1;  // c^j
            for (std::size_t j = 0; w.size() + j <= max_len; ++j) {
                if (j > 0) {
                    ck *= c;
                    if (ck == 0) break;
                }
                Rational mult = binomial(static_cast<long>(j) + f.exponent - 1, static_cast<long>(j)) * ck;
                next.add(concat(w, Word::power(Letter::x0, j)), coef * mult);
            }
        }
        acc = std::move(next);
        if (k < ch.letters.size()) {
            WordPolynomial with_letter;
            for (const auto& [w, coef] : acc.terms())
                if (w.size() + 1 <= max_len) with_letter.add(concat(w, Word{ch.letters[k]}), coef);
            acc = std::move(with_letter);
        }
    }
    Rational scale = s.scalar.value;
    for (const auto& pf : s.scalar.pole_factors) scale *= value_of(pf);
    acc *= scale;
    return acc;
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

std::vector<std::pair<std::string, std::string>> array_columns(const Chain& c) {
    std::vector<std::pair<std::string, std::string>> cols;
    for (std::size_t k = 0; k < c.letters.size(); ++k) {
        std::string pole = c.fractions[k].pole.to_string(true);
        if (c.fractions[k].exponent != 1) pole = "(" + pole + ")^" + std::to_string(c.fractions[k].exponent);
        cols.emplace_back(letter_name(c.letters[k]), pole);
    }
    const Fraction& last = c.fractions.back();
    if (!last.pole.is_zero() || last.exponent != 1 || c.letters.empty()) {
        std::string pole = last.pole.to_string(true);
        if (last.exponent != 1) pole = "(" + pole + ")^" + std::to_string(last.exponent);
        cols.emplace_back("·", pole);
    }
    return cols;
}

}  // namespace

std::string render_array(const SeriesTerm& s) {
    const auto cols = array_columns(s.chain);
    std::string prefix = s.scalar.to_string() + " ";
    std::string top = "[ ";
    std::string bottom = "[ ";
    for (std::size_t k = 0; k < cols.size(); ++k) {
        std::size_t w = std::max(display_width(cols[k].first), display_width(cols[k].second));
        bool last = k + 1 == cols.size();
        top += last ? pad(cols[k].first, w) : pad(cols[k].first, w + 2);
        bottom += last ? pad(cols[k].second, w) : pad(cols[k].second, w + 2);
    }
    top += " ]";
    bottom += " ]";
    return prefix + top + "\n" + std::string(display_width(prefix), ' ') + bottom;
}

std::string render_inline(const SeriesTerm& s) {
    const auto cols = array_columns(s.chain);
    std::string letters, poles;
    for (std::size_t k = 0; k < cols.size(); ++k) {
        letters += (k ? " " : "") + cols[k].first;
        poles += (k ? ", " : "") + cols[k].second;
    }
    return s.scalar.to_string() + " [" + letters + "; " + poles + "]";
}

// ---------------------------------------------------------------------------
// Dump format: one "term" record per line, fields as key=value.

namespace {

std::string combo_csv(const PoleCombo& c) {
    std::string s;
    for (std::size_t i = 0; i < c.dim(); ++i) s += (i ? "," : "") + std::to_string(c[i]);
    return s;
}

PoleCombo parse_combo(const std::string& text, std::size_t dim, int line) {
    PoleCombo c(dim);
    std::stringstream ss(text);
    std::string part;
    std::size_t i = 0;
    while (std::getline(ss, part, ',')) {
        if (i >= dim) throw ParseError("line " + std::to_string(line) + ": pole combo longer than dim");
        try {
            c.set(i++, std::stoi(part));
        } catch (const std::invalid_argument&) {
            throw ParseError("line " + std::to_string(line) + ": bad pole coefficient '" + part + "'");
        }
    }
    if (i != dim) throw ParseError("line " + std::to_string(line) + ": pole combo shorter than dim");
    return c;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, sep)) out.push_back(part);
    return out;
}

}  // namespace

std::string dump(const GeneratingSeries& series) {
    std::ostringstream os;
    os << "dim " << series.dim << "\n";
    for (std::size_t i = 0; i < series.orders.size(); ++i) {
        os << "order " << i << "\n";
        for (const auto& t : series.orders[i]) {
            os << "term value=" << t.scalar.value.get_str() << " eps=";
            int last = 0;
            for (std::size_t k = 0; k < kMaxNonlinear; ++k)
                if (t.scalar.eps[k]) last = static_cast<int>(k) + 1;
            for (int k = 0; k < std::max(last, 1); ++k) os << (k ? "," : "") << t.scalar.eps[static_cast<std::size_t>(k)];
            os << " noise=" << t.scalar.noise_power << " factors=";
            if (t.scalar.pole_factors.empty()) os << "-";
            for (std::size_t k = 0; k < t.scalar.pole_factors.size(); ++k)
                os << (k ? "/" : "") << combo_csv(t.scalar.pole_factors[k]);
            os << " letters=" << (t.chain.letters.empty() ? "-" : t.chain.word().to_string()) << " poles=";
            for (std::size_t k = 0; k < t.chain.fractions.size(); ++k)
                os << (k ? "/" : "") << combo_csv(t.chain.fractions[k].pole);
            os << " exps=";
            for (std::size_t k = 0; k < t.chain.fractions.size(); ++k)
                os << (k ? "," : "") << t.chain.fractions[k].exponent;
            os << "\n";
        }
    }
    return os.str();
}

GeneratingSeries parse_dump(const std::string& text) {
    GeneratingSeries out;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    bool have_dim = false;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string kind;
        ls >> kind;
        auto fail = [&](const std::string& what) { throw ParseError("line " + std::to_string(lineno) + ": " + what); };
        if (kind == "dim") {
            if (!(ls >> out.dim)) fail("bad dim");
            have_dim = true;
        } else if (kind == "order") {
            std::size_t i = 0;
            if (!(ls >> i) || i != out.orders.size()) fail("orders must be consecutive from 0");
            out.orders.emplace_back();
        } else if (kind == "term") {
            if (!have_dim || out.orders.empty()) fail("term before dim/order header");
            SeriesTerm t;
            std::string field;
            std::vector<std::string> letters_field, poles_field, exps_field;
            bool seen_letters = false, seen_poles = false, seen_exps = false;
            while (ls >> field) {
                auto eq = field.find('=');
                if (eq == std::string::npos) fail("field without '=': " + field);
                std::string key = field.substr(0, eq);
                std::string val = field.substr(eq + 1);
                if (key == "value") {
                    t.scalar.value = parse_rational(val);
                } else if (key == "eps") {
                    auto parts = split(val, ',');
                    if (parts.size() > kMaxNonlinear) fail("too many ε slots");
                    for (std::size_t k = 0; k < parts.size(); ++k) t.scalar.eps.bump(k, std::stoi(parts[k]));
                } else if (key == "noise") {
                    t.scalar.noise_power = std::stoi(val);
                } else if (key == "factors") {
                    if (val != "-")
                        for (const auto& part : split(val, '/'))
                            t.scalar.pole_factors.push_back(parse_combo(part, out.dim, lineno));
                } else if (key == "letters") {
                    seen_letters = true;
                    if (val != "-") t.chain.letters = Word::parse(val).letters();
                } else if (key == "poles") {
                    seen_poles = true;
                    poles_field = split(val, '/');
                } else if (key == "exps") {
                    seen_exps = true;
                    exps_field = split(val, ',');
                } else {
                    fail("unknown field '" + key + "'");
                }
            }
            if (!seen_letters || !seen_poles || !seen_exps) fail("term record is missing letters/poles/exps");
            if (poles_field.size() != t.chain.letters.size() + 1 || exps_field.size() != poles_field.size())
                fail("fraction slot count must be letters + 1");
            for (std::size_t k = 0; k < poles_field.size(); ++k)
                t.chain.fractions.push_back(Fraction{parse_combo(poles_field[k], out.dim, lineno), std::stoi(exps_field[k])});
            out.orders.back().push_back(std::move(t));
        } else {
            fail("unknown record '" + kind + "'");
        }
    }
    if (!have_dim) throw ParseError("dump has no dim header");
    return out;
}

}  // namespace fliess
