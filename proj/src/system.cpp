#include "fliess/system.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace fliess {

BudgetExceeded::BudgetExceeded(int order, std::uint64_t budget, std::uint64_t reached)
    : std::runtime_error("term budget of " + std::to_string(budget) + " exceeded while generating order " +
                         std::to_string(order) + " (" + std::to_string(reached) + " terms so far); raise " +
                         kBudgetEnvVar + " or lower the order"),
      order_(order) {}

std::vector<int> SystemSpec::active_degrees() const {
    std::vector<int> out;
    for (const auto& [deg, eps] : nonlinear)
        if (eps != 0) out.push_back(deg);
    return out;
}

long double SystemSpec::epsilon(int degree) const {
    auto it = nonlinear.find(degree);
    return it == nonlinear.end() ? 0.0L : to_long_double(it->second);
}

long double SystemSpec::eps_weight(const EpsMonomial& e) const {
    long double w = 1;
    for (std::size_t slot = 0; slot < kMaxNonlinear; ++slot)
        for (int r = 0; r < e[slot]; ++r) w *= epsilon(static_cast<int>(slot) + 2);
    return w;
}

std::vector<Complex> SystemSpec::pole_values() const {
    if (exact_poles.empty()) return numeric_poles;
    std::vector<Complex> out;
    for (const auto& p : exact_poles) out.push_back(p.to_complex());
    return out;
}

namespace {

// Coefficients of ∏(1 - a x)^α in ascending powers of x.
template <class K>
std::vector<K> expand_factors(const std::vector<K>& poles, const std::vector<int>& mult) {
    std::vector<K> poly{FieldTraits<K>::from_rational(1)};
    for (std::size_t i = 0; i < poles.size(); ++i)
        for (int r = 0; r < mult[i]; ++r) {
            std::vector<K> next(poly.size() + 1, FieldTraits<K>::from_rational(0));
            for (std::size_t k = 0; k < poly.size(); ++k) {
                next[k] += poly[k];
                next[k + 1] -= poly[k] * poles[i];
            }
            poly = std::move(next);
        }
    return poly;
}

std::vector<Complex> numeric_roots(const std::vector<Rational>& linear) {
    const int n = static_cast<int>(linear.size());
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) companion(i, n - 1) = -static_cast<double>(to_long_double(linear[static_cast<std::size_t>(i)]));
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    if (solver.info() != Eigen::Success) throw FactorizationError("companion eigenvalue solver did not converge");

    std::vector<Complex> coeff(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i < n; ++i) coeff[static_cast<std::size_t>(i)] = to_long_double(linear[static_cast<std::size_t>(i)]);
    coeff[static_cast<std::size_t>(n)] = 1.0L;
    auto eval = [&](Complex z, Complex& deriv) {
        Complex v = 0, d = 0;
        for (std::size_t k = coeff.size(); k-- > 0;) {
            d = d * z + v;
            v = v * z + coeff[k];
        }
        deriv = d;
        return v;
    };
    std::vector<Complex> roots;
    for (int i = 0; i < n; ++i) {
        Complex z(solver.eigenvalues()[i].real(), solver.eigenvalues()[i].imag());
        for (int it = 0; it < 20; ++it) {
            Complex d;
            Complex v = eval(z, d);
            if (std::abs(d) < 1e-30L) break;
            Complex step = v / d;
            z -= step;
            if (std::abs(step) < 1e-19L * std::max(1.0L, std::abs(z))) break;
        }
        roots.push_back(z);
    }
    return roots;
}

// A root of multiplicity m is a simple root of the (m-1)-th derivative, where
// Newton converges quadratically again.
Complex polish_multiple_root(const std::vector<Rational>& linear, Complex z, int m) {
    if (m == 1) return z;
    std::vector<Complex> c(linear.size() + 1);
    for (std::size_t i = 0; i < linear.size(); ++i) c[i] = to_long_double(linear[i]);
    c.back() = 1.0L;
    for (int r = 0; r < m - 1; ++r) {
        std::vector<Complex> d(c.size() - 1);
        for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = c[k] * static_cast<long double>(k);
        c = std::move(d);
    }
    for (int it = 0; it < 30; ++it) {
        Complex v = 0, d = 0;
        for (std::size_t k = c.size(); k-- > 0;) {
            d = d * z + v;
            v = v * z + c[k];
        }
        if (std::abs(d) < 1e-30L) break;
        Complex step = v / d;
        z -= step;
        if (std::abs(step) < 1e-19L * std::max(1.0L, std::abs(z))) break;
    }
    return z;
}

}  // namespace

SystemSpec make_system(int n, std::vector<Rational> linear, std::map<int, Rational> nonlinear) {
    if (n < 1) throw std::invalid_argument("system order n must be at least 1");
    if (static_cast<int>(linear.size()) != n)
        throw std::invalid_argument("expected " + std::to_string(n) + " linear coefficients, got " +
                                    std::to_string(linear.size()));
    for (const auto& [deg, eps] : nonlinear) {
        if (deg < 2 || deg >= 2 + static_cast<int>(kMaxNonlinear))
            throw std::invalid_argument("nonlinear degree " + std::to_string(deg) + " outside 2.." +
                                        std::to_string(1 + kMaxNonlinear));
    }
    SystemSpec spec;
    spec.n = n;
    spec.linear = std::move(linear);
    spec.nonlinear = std::move(nonlinear);

    if (n == 1) {
        spec.exact_poles = {QuadSurd(Rational(-spec.linear[0]))};
        spec.multiplicities = {1};
    } else if (n == 2) {
        const Rational& l0 = spec.linear[0];
        const Rational& l1 = spec.linear[1];
        Rational disc = l1 * l1 - 4 * l0;
        QuadSurd half_neg_l1(Rational(-l1 / 2));
        if (disc == 0) {
            spec.exact_poles = {half_neg_l1};
            spec.multiplicities = {2};
        } else {
            QuadSurd root = QuadSurd::sqrt_of(disc) / QuadSurd(2);
            spec.exact_poles = {half_neg_l1 + root, half_neg_l1 - root};
            spec.multiplicities = {1, 1};
        }
    } else {
        std::vector<Complex> roots = numeric_roots(spec.linear);
        std::sort(roots.begin(), roots.end(), [](const Complex& a, const Complex& b) {
            if (a.real() != b.real()) return a.real() > b.real();
            return a.imag() > b.imag();
        });
        // Repeated roots come back from the eigensolver split by roughly
        // eps^(1/m); a cluster is replaced by its centroid.
        std::vector<bool> used(roots.size(), false);
        for (std::size_t i = 0; i < roots.size(); ++i) {
            if (used[i]) continue;
            Complex sum = roots[i];
            int m = 1;
            used[i] = true;
            for (std::size_t j = i + 1; j < roots.size(); ++j)
                if (!used[j] && std::abs(roots[j] - roots[i]) < 1e-4L * std::max(1.0L, std::abs(roots[i]))) {
                    used[j] = true;
                    sum += roots[j];
                    ++m;
                }
            spec.numeric_poles.push_back(polish_multiple_root(spec.linear, sum / static_cast<long double>(m), m));
            spec.multiplicities.push_back(m);
        }
        if (spec.dim() > kMaxPoles) throw std::invalid_argument("too many distinct poles");
        validate(spec);
        return spec;
    }
    for (const auto& p : spec.exact_poles) spec.numeric_poles.push_back(p.to_complex());
    validate(spec);
    return spec;
}

void set_exact_poles(SystemSpec& spec, std::vector<QuadSurd> poles, std::vector<int> multiplicities) {
    if (poles.size() != multiplicities.size()) throw std::invalid_argument("one multiplicity per pole required");
    if (poles.size() > kMaxPoles) throw std::invalid_argument("too many distinct poles");
    spec.exact_poles = std::move(poles);
    spec.multiplicities = std::move(multiplicities);
    spec.numeric_poles.clear();
    for (const auto& p : spec.exact_poles) spec.numeric_poles.push_back(p.to_complex());
    validate(spec);
}

void validate(const SystemSpec& spec) {
    int total = std::accumulate(spec.multiplicities.begin(), spec.multiplicities.end(), 0);
    if (total != spec.n)
        throw FactorizationError("pole multiplicities sum to " + std::to_string(total) + " but the system order is " +
                                 std::to_string(spec.n));
    if (std::any_of(spec.multiplicities.begin(), spec.multiplicities.end(), [](int m) { return m < 1; }))
        throw FactorizationError("pole multiplicities must be positive");
    // Target: 1 + l_{n-1} x + ... + l_0 x^n.
    if (!spec.exact_poles.empty()) {
        std::vector<QuadSurd> poly = expand_factors(spec.exact_poles, spec.multiplicities);
        for (int k = 1; k <= spec.n; ++k) {
            QuadSurd want(spec.linear[static_cast<std::size_t>(spec.n - k)]);
            if (poly[static_cast<std::size_t>(k)] != want)
                throw FactorizationError("factorization check failed at x^" + std::to_string(k) + ": poles give " +
                                         poly[static_cast<std::size_t>(k)].to_string() + ", linear operator has " +
                                         want.to_string());
        }
    } else {
        std::vector<Complex> poly = expand_factors(spec.numeric_poles, spec.multiplicities);
        for (int k = 1; k <= spec.n; ++k) {
            long double want = to_long_double(spec.linear[static_cast<std::size_t>(spec.n - k)]);
            Complex got = poly[static_cast<std::size_t>(k)];
            if (std::abs(got - want) > 1e-9L * std::max(1.0L, std::abs(want)))
                throw FactorizationError("numeric factorization check failed at x^" + std::to_string(k));
        }
    }
}

namespace {

// Best rational approximation with denominator up to max_den (continued fractions).
Rational rationalize(long double x, long max_den = 1000000000L) {
    long double v = x;
    long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    for (int it = 0; it < 64; ++it) {
        long double a = std::floor(v);
        long ai = static_cast<long>(a);
        long p2 = ai * p1 + p0;
        long q2 = ai * q1 + q0;
        if (q2 > max_den) break;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        long double frac = v - a;
        if (frac < 1e-18L) break;
        v = 1.0L / frac;
    }
    Rational r(p1, q1);
    r.canonicalize();
    return r;
}

}  // namespace

CanonicalDuffing canonicalize_duffing(const PhysicalDuffingParams& p, std::optional<Rational> amplitude_scale) {
    if (p.m <= 0) throw std::invalid_argument("mass must be positive");
    if (p.k1 <= 0) throw std::invalid_argument("linear stiffness k1 must be positive");
    CanonicalDuffing out;
    // t = T τ with T = √(m/k1); dividing by k1 leaves a = c/√(m k1).
    QuadSurd root_mk1 = QuadSurd::sqrt_of(Rational(p.m * p.k1));
    Rational a;
    if (root_mk1.is_rational()) {
        a = p.c / root_mk1.rational_part();
    } else {
        a = rationalize(to_long_double(p.c) / std::sqrt(to_long_double(Rational(p.m * p.k1))));
        out.damping_exact = p.c == 0;
    }
    out.time_scale = std::sqrt(to_long_double(Rational(p.m / p.k1)));

    Rational beta = 1;
    if (amplitude_scale) {
        if (*amplitude_scale <= 0) throw std::invalid_argument("amplitude scale must be positive");
        beta = *amplitude_scale;
    } else if (p.k2 != 0) {
        beta = abs(Rational(p.k1 / p.k2));
    } else if (p.k3 != 0) {
        QuadSurd b = QuadSurd::sqrt_of(abs(Rational(p.k1 / p.k3)));
        if (b.is_rational()) beta = b.rational_part();
    }
    out.amplitude_scale = beta;
    out.force_scale = p.k1 * beta;

    std::map<int, Rational> nonlinear;
    Rational e1 = p.k2 * beta / p.k1;
    Rational e2 = p.k3 * beta * beta / p.k1;
    if (e1 != 0) nonlinear[2] = e1;
    if (e2 != 0) nonlinear[3] = e2;
    out.spec = make_system(2, {Rational(1), a}, nonlinear);
    out.spec.physical = p;
    return out;
}

IntegralForm to_integral_form(const SystemSpec& spec) {
    validate(spec);
    const std::size_t dim = spec.dim();
    // One fraction per x0: x0^n / ∏(1 - a_i x0)^α_i = F_{p1} x0 F_{p2} x0 ... F_{pn} x0,
    // since Σα = n and all factors are series in x0 alone.
    std::vector<PoleCombo> seq;
    for (std::size_t i = 0; i < dim; ++i)
        for (int r = 0; r < spec.multiplicities[i]; ++r) seq.push_back(PoleCombo::unit(dim, i));

    IntegralForm form;
    std::vector<Letter> g0_letters(seq.size(), Letter::x0);
    g0_letters.back() = Letter::x1;
    std::vector<PoleCombo> poles = seq;
    poles.push_back(PoleCombo(dim));
    form.g0.chain = Chain::build(g0_letters, poles);
    form.g0.scalar.value = 1;

    form.prefactor.chain = Chain::build(std::vector<Letter>(seq.size(), Letter::x0), poles);
    form.prefactor.scalar.value = -1;
    return form;
}

std::uint64_t default_term_budget() {
    if (const char* env = std::getenv(kBudgetEnvVar)) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return v;
    }
    return kDefaultTermBudget;
}

std::vector<std::vector<int>> compositions(int total, int parts) {
    std::vector<std::vector<int>> out;
    if (parts <= 0) return out;
    std::vector<int> cur(static_cast<std::size_t>(parts), 0);
    auto rec = [&](auto&& self, int pos, int left) -> void {
        if (pos == parts - 1) {
            cur[static_cast<std::size_t>(pos)] = left;
            out.push_back(cur);
            return;
        }
        for (int v = left; v >= 0; --v) {
            cur[static_cast<std::size_t>(pos)] = v;
            self(self, pos + 1, left - v);
        }
    };
    rec(rec, 0, total);
    return out;
}

namespace {

std::uint64_t multinomial_interleavings(const std::vector<const SeriesTerm*>& tuple) {
    std::uint64_t total = 1;
    long len = 0;
    for (const auto* t : tuple) {
        long l = static_cast<long>(t->chain.length());
        Rational b = binomial(len + l, l);
        len += l;
        if (!b.get_num().fits_ulong_p()) return UINT64_MAX;
        unsigned long long r = 0;
        if (__builtin_mul_overflow(total, static_cast<std::uint64_t>(b.get_num().get_ui()), &r)) return UINT64_MAX;
        total = r;
    }
    return total;
}

}  // namespace

Expansion iterate(const SystemSpec& spec, int max_order, std::uint64_t budget, bool keep_listing) {
    if (max_order < 0) throw std::invalid_argument("max_order must be nonnegative");
    Expansion ex;
    ex.spec = spec;
    ex.form = to_integral_form(spec);
    ex.series.dim = spec.dim();
    ex.series.orders.push_back({ex.form.g0});

    OrderReport zero;
    zero.order = 0;
    zero.listed = zero.merged = zero.published_count = 1;
    zero.listing = {ex.form.g0};
    ex.reports.push_back(std::move(zero));

    const std::vector<int> degrees = spec.active_degrees();
    for (int i = 0; i < max_order; ++i) {
        OrderReport rep;
        rep.order = i + 1;
        TermList listing;
        for (int degree : degrees) {
            const std::size_t slot = static_cast<std::size_t>(degree - 2);
            for (const auto& comp : compositions(i, degree)) {
                ProductReport pr;
                pr.degree = degree;
                pr.composition = comp;
                pr.first_index = listing.size();
                std::vector<const TermList*> ops;
                bool empty = false;
                for (int nu : comp) {
                    ops.push_back(&ex.series.orders[static_cast<std::size_t>(nu)]);
                    if (ops.back()->empty()) empty = true;
                }
                if (!empty) {
                    // Odometer over operand tuples, first operand slowest.
                    std::vector<std::size_t> idx(ops.size(), 0);
                    while (true) {
                        std::vector<const SeriesTerm*> tuple;
                        TermList operands;
                        for (std::size_t k = 0; k < ops.size(); ++k) {
                            tuple.push_back(&(*ops[k])[idx[k]]);
                            operands.push_back(*tuple.back());
                        }
                        std::uint64_t inter = multinomial_interleavings(tuple);
                        pr.interleavings = pr.interleavings > UINT64_MAX - inter ? UINT64_MAX : pr.interleavings + inter;
                        for (auto& term : shuffle_many(operands)) {
                            SeriesTerm full = concat_terms(ex.form.prefactor, term);
                            full.scalar.eps.bump(slot);
                            listing.push_back(std::move(full));
                        }
                        if (listing.size() > budget) throw BudgetExceeded(i + 1, budget, listing.size());
                        std::size_t k = ops.size();
                        while (k-- > 0) {
                            if (++idx[k] < ops[k]->size()) break;
                            idx[k] = 0;
                        }
                        if (k == static_cast<std::size_t>(-1)) break;
                    }
                }
                pr.listed = listing.size() - pr.first_index;
                pr.merged =
                    merge_terms(TermList(listing.begin() + static_cast<long>(pr.first_index), listing.end())).size();
                rep.interleavings =
                    rep.interleavings > UINT64_MAX - pr.interleavings ? UINT64_MAX : rep.interleavings + pr.interleavings;
                rep.products.push_back(std::move(pr));
            }
        }
        rep.listed = listing.size();
        TermList merged = merge_terms(listing);
        rep.merged = merged.size();

        const ProductReport* quad = nullptr;
        const ProductReport* cubic = nullptr;
        for (const auto& pr : rep.products) {
            bool leading = pr.composition.front() == i;
            if (pr.degree == 2 && leading && !quad) quad = &pr;
            if (pr.degree == 3 && leading && !cubic) cubic = &pr;
        }
        if (quad && cubic) rep.published_count = quad->listed + cubic->merged;

        if (keep_listing) rep.listing = std::move(listing);
        ex.series.orders.push_back(std::move(merged));
        ex.reports.push_back(std::move(rep));
    }
    return ex;
}

// ---------------------------------------------------------------------------
// Spec files

namespace {

std::string trim_copy(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> tokens(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string t;
    while (is >> t) out.push_back(t);
    return out;
}

}  // namespace

SystemSpec parse_spec(const std::string& text) {
    std::map<std::string, std::pair<std::string, int>> fields;  // key -> (value, line)
    std::istringstream is(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim_copy(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError("line " + std::to_string(lineno) + ": unterminated section header");
            section = trim_copy(line.substr(1, line.size() - 2));
            if (section != "physical")
                throw ParseError("line " + std::to_string(lineno) + ": unknown section [" + section + "]");
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim_copy(line.substr(0, eq));
        std::string value = trim_copy(line.substr(eq + 1));
        if (!section.empty()) key = section + "." + key;
        if (fields.count(key)) throw ParseError("line " + std::to_string(lineno) + ": duplicate field '" + key + "'");
        fields[key] = {value, lineno};
    }

    auto fail = [&](const std::string& key, const std::string& what) -> ParseError {
        int ln = fields.count(key) ? fields[key].second : 0;
        return ParseError("line " + std::to_string(ln) + ", field '" + key + "': " + what);
    };
    auto rational_field = [&](const std::string& key) {
        try {
            return parse_rational(fields.at(key).first);
        } catch (const ParseError& e) {
            throw fail(key, e.what());
        }
    };

    std::optional<PhysicalDuffingParams> phys;
    std::optional<Rational> beta;
    for (const auto& [key, val] : fields) {
        if (key.rfind("physical.", 0) != 0) continue;
        if (!phys) phys = PhysicalDuffingParams{};
        std::string sub = key.substr(9);
        Rational v = rational_field(key);
        if (sub == "m") phys->m = v;
        else if (sub == "c") phys->c = v;
        else if (sub == "k1") phys->k1 = v;
        else if (sub == "k2") phys->k2 = v;
        else if (sub == "k3") phys->k3 = v;
        else if (sub == "amplitude_scale") beta = v;
        else throw fail(key, "unknown physical parameter");
    }

    int n = 0;
    std::vector<Rational> linear;
    std::map<int, Rational> nonlinear;
    if (phys) {
        CanonicalDuffing cd;
        try {
            cd = canonicalize_duffing(*phys, beta);
        } catch (const std::invalid_argument& e) {
            throw ParseError(std::string("physical block: ") + e.what());
        }
        n = 2;
        linear = cd.spec.linear;
        nonlinear = cd.spec.nonlinear;
    }
    if (fields.count("n")) {
        try {
            n = std::stoi(fields["n"].first);
        } catch (const std::exception&) {
            throw fail("n", "not an integer");
        }
        if (n < 1) throw fail("n", "must be at least 1");
    } else if (!phys) {
        throw ParseError("missing field 'n'");
    }
    if (fields.count("linear")) {
        linear.clear();
        for (const auto& t : tokens(fields["linear"].first)) {
            try {
                linear.push_back(parse_rational(t));
            } catch (const ParseError& e) {
                throw fail("linear", e.what());
            }
        }
    } else if (!phys) {
        throw ParseError("missing field 'linear'");
    }
    if (static_cast<int>(linear.size()) != n)
        throw fail("linear", "expected " + std::to_string(n) + " coefficients l0 .. l" + std::to_string(n - 1));
    for (const auto& [key, val] : fields) {
        if (key.rfind("nonlinear.", 0) != 0) continue;
        int deg = 0;
        try {
            deg = std::stoi(key.substr(10));
        } catch (const std::exception&) {
            throw fail(key, "degree must be an integer");
        }
        if (deg < 2 || deg >= 2 + static_cast<int>(kMaxNonlinear)) throw fail(key, "degree out of range");
        nonlinear[deg] = rational_field(key);
    }
    for (const auto& [key, val] : fields) {
        bool known = key == "n" || key == "linear" || key == "poles" || key.rfind("nonlinear.", 0) == 0 ||
                     key.rfind("physical.", 0) == 0;
        if (!known) throw fail(key, "unknown field");
    }

    SystemSpec spec = make_system(n, linear, nonlinear);
    spec.physical = phys;
    if (fields.count("poles")) {
        std::vector<QuadSurd> poles;
        std::vector<int> mult;
        for (const auto& t : tokens(fields["poles"].first)) {
            QuadSurd v;
            try {
                v = QuadSurd::parse(t);
            } catch (const std::exception& e) {
                throw fail("poles", e.what());
            }
            auto it = std::find(poles.begin(), poles.end(), v);
            if (it == poles.end()) {
                poles.push_back(v);
                mult.push_back(1);
            } else {
                ++mult[static_cast<std::size_t>(it - poles.begin())];
            }
        }
        set_exact_poles(spec, std::move(poles), std::move(mult));
    }
    return spec;
}

SystemSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open spec file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_spec(ss.str());
}

std::string format_spec(const SystemSpec& spec) {
    std::ostringstream os;
    os << "n = " << spec.n << "\n";
    os << "linear =";
    for (const auto& l : spec.linear) os << " " << l.get_str();
    os << "\n";
    for (const auto& [deg, eps] : spec.nonlinear) os << "nonlinear." << deg << " = " << eps.get_str() << "\n";
    if (!spec.exact_poles.empty()) {
        os << "poles =";
        for (std::size_t i = 0; i < spec.exact_poles.size(); ++i)
            for (int r = 0; r < spec.multiplicities[i]; ++r) os << " " << spec.exact_poles[i].to_string();
        os << "\n";
    }
    return os.str();
}

}  // namespace fliess
