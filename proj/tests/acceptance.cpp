// Prints one PASS/FAIL line per acceptance criterion. The exit status is
// nonzero only when a check could not run at all.

#include <bit>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "fliess/borel.hpp"
#include "fliess/diagrams.hpp"
#include "fliess/oracles.hpp"
#include "fliess/residual.hpp"
#include "fliess/stochastic.hpp"
#include "printed_arrays.hpp"

using namespace fliess;
using testutil::PrintedArray;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

SystemSpec duffing() { return make_system(2, {1, 3}, {{2, 1}, {3, Rational(1, 2)}}); }

const Expansion& duffing_order2() {
    static const Expansion ex = iterate(duffing(), 2);
    return ex;
}

// ---------------------------------------------------------------- 1

std::vector<Word> words_up_to(std::size_t max_len) {
    std::vector<Word> out{Word{}};
    for (std::size_t len = 1; len <= max_len; ++len)
        for (std::uint32_t bits = 0; bits < (1u << len); ++bits) {
            std::vector<Letter> ls;
            for (std::size_t i = 0; i < len; ++i) ls.push_back((bits >> (len - 1 - i)) & 1u ? Letter::x1 : Letter::x0);
            out.emplace_back(ls);
        }
    return out;
}

WordPolynomial prefixed(Letter l, const WordPolynomial& p) {
    WordPolynomial out;
    for (const auto& [w, c] : p.terms()) out.add(concat(Word{l}, w), c);
    return out;
}

void criterion1(Outcome& o) {
    const auto words = words_up_to(5);
    std::size_t checked = 0;
    bool unit = shuffle_words(Word{}, Word{}) == WordPolynomial(Word{});
    bool identity = true, recursion = true, powers = true;
    for (const auto& u : words) {
        identity = identity && shuffle_words(Word{}, u) == WordPolynomial(u) && shuffle_words(u, Word{}) == WordPolynomial(u);
        if (u.empty()) continue;
        for (const auto& v : words) {
            if (v.empty()) continue;
            ++checked;
            recursion = recursion && shuffle_words(u, v) == prefixed(u[0], shuffle_words(u.tail(), v)) +
                                                              prefixed(v[0], shuffle_words(u, v.tail()));
        }
    }
    for (Letter l : {Letter::x0, Letter::x1})
        for (long n = 0; n <= 10; ++n)
            for (long k = 0; k <= n; ++k)
                powers = powers && shuffle_words(Word::power(l, static_cast<std::size_t>(k)),
                                                 Word::power(l, static_cast<std::size_t>(n - k))) ==
                                       WordPolynomial(Word::power(l, static_cast<std::size_t>(n)), binomial(n, k));
    auto abcd = shuffle_sequences<char>({'a', 'b'}, {'c', 'd'});
    std::map<std::vector<char>, std::uint64_t> expected;
    for (const char* w : {"abcd", "acbd", "acdb", "cabd", "cadb", "cdab"}) expected[std::vector<char>(w, w + 4)] = 1;
    o.require(unit, "1 ⧢ 1 = 1");
    o.require(identity, "1 ⧢ w = w ⧢ 1 = w");
    o.require(recursion, "first-letter recursion");
    o.require(powers, "x^k ⧢ x^(n-k) = C(n,k) x^n");
    o.require(abcd == expected, "ab ⧢ cd");
    o.detail << "identities 1-4 over " << words.size() << " words (" << checked << " nonempty pairs), ab⧢cd has "
             << abcd.size() << " unit words";
}

// ---------------------------------------------------------------- 2

void criterion2(Outcome& o) {
    const std::vector<PrintedArray> printed = {
        {-2, 1, 0, "x0 x0 x0 x1 x0 x1", {"-a1", "-a2", "-2a1", "-a1 - a2", "-a1", "-a2"}},
        {-4, 1, 0, "x0 x0 x0 x0 x1 x1", {"-a1", "-a2", "-2a1", "-a1 - a2", "-2a2", "-a2"}},
        {-6, 0, 1, "x0 x0 x0 x1 x0 x1 x0 x1", {"-a1", "-a2", "-3a1", "-2a1 - a2", "-2a1", "-a1 - a2", "-a1", "-a2"}},
        {-12, 0, 1, "x0 x0 x0 x1 x0 x0 x1 x1", {"-a1", "-a2", "-3a1", "-2a1 - a2", "-2a1", "-a1 - a2", "-2a2", "-a2"}},
        {-24, 0, 1, "x0 x0 x0 x0 x1 x0 x1 x1",
         {"-a1", "-a2", "-3a1", "-2a1 - a2", "-a1 - 2a2", "-a1 - a2", "-2a2", "-a2"}},
        {-12, 0, 1, "x0 x0 x0 x0 x1 x1 x0 x1",
         {"-a1", "-a2", "-3a1", "-2a1 - a2", "-a1 - 2a2", "-a1 - a2", "-a1", "-a2"}},
        {-36, 0, 1, "x0 x0 x0 x0 x0 x1 x1 x1",
         {"-a1", "-a2", "-3a1", "-2a1 - a2", "-a1 - 2a2", "-3a2", "-2a2", "-a2"}},
    };
    const auto& g1 = duffing_order2().series.orders[1];
    o.require(g1.size() == printed.size(), "seven terms");
    std::size_t matched = 0;
    for (std::size_t i = 0; i < std::min(g1.size(), printed.size()); ++i) {
        std::string why;
        if (testutil::matches(g1[i], printed[i], &why))
            ++matched;
        else
            o.require(false, "array " + std::to_string(i + 1) + ": " + why);
    }
    o.detail << matched << "/7 arrays identical (multiplier, letters, pole columns)";
}

// ---------------------------------------------------------------- 3

void criterion3(Outcome& o) {
    const OrderReport& r = duffing_order2().reports[2];
    auto cols = [](std::initializer_list<const char*> tail) {
        std::vector<std::string> out{"-a1", "-a2", "-2a1", "-a1 - a2"};
        for (const char* c : tail) out.emplace_back(c);
        return out;
    };
    const PrintedArray six{6, 2, 0, "x0 x0 x0 x0 x0 x1 x0 x1 x0 x1",
                           cols({"-3a1", "-2a1 - a2", "-2a1", "-a1 - a2", "-a1", "-a2"})};
    const PrintedArray eight{8, 2, 0, "x0 x0 x0 x0 x0 x1 x0 x0 x1 x1",
                             cols({"-3a1", "-2a1 - a2", "-2a1", "-a1 - a2", "-2a2", "-a2"})};
    o.require(r.published_count == 360, "360 raw terms");
    o.require(r.listing.size() >= 2 && testutil::matches(r.listing[0], six), "6ε1² array first");
    o.require(r.listing.size() >= 2 && testutil::matches(r.listing[1], eight), "8ε1² array second");
    o.detail << "raw " << r.published_count << " (leading products, per operand pair), listed " << r.listed
             << ", merged " << r.merged << ", interleavings " << r.interleavings << "; 6ε1² and 8ε1² open the listing";
}

// ---------------------------------------------------------------- 4

void criterion4(Outcome& o) {
    auto survivors = audit_expectation(duffing_order2());
    o.require(!survivors.empty(), "some survivor");
    if (survivors.empty()) return;
    const PrintedArray first{-4, 1, 0, "x0 x0 x0 x0 x0", {"-a1", "-a2", "-2a1", "-a1 - a2", "-2a2"}};
    std::string why;
    o.require(testutil::matches(survivors.front().mean, first, &why) && survivors.front().mean.scalar.noise_power == 1,
              "first term: " + why);
    std::size_t from_g1 = 0, index = 0;
    long order2_first = -1;
    for (const auto& s : survivors) {
        if (s.order == 1) {
            ++from_g1;
            index = s.index;
        }
        if (s.order == 2 && order2_first < 0) order2_first = static_cast<long>(s.index);
    }
    o.require(from_g1 == 1, "one first-order survivor");
    o.detail << "<g> opens with -4ε1(σ²/2)[x0^5; a1 a2 2a1 a1+a2 2a2]; " << from_g1
             << " first-order survivor at g1 position " << index + 1 << " of 7; first second-order survivor at "
             << "listing position " << order2_first << " (0-based)";
}

// ---------------------------------------------------------------- 5

bool within_two_units(double ours, double printed) {
    const double unit = std::pow(10.0, std::floor(std::log10(std::abs(printed))) - 3);
    return std::abs(ours - printed) <= 2 * unit + 1e-15;
}

void criterion5(Outcome& o) {
    MomentExpansion m = moment_expansion(duffing_order2(), 1, 1);
    const MomentGroup* g = nullptr;
    for (const auto& grp : m.groups)
        if (grp.eps[0] == 1 && grp.eps[1] == 0 && grp.noise_power == 1) g = &grp;
    o.require(g != nullptr, "ε1 (σ²/2) group present");
    if (!g) return;

    // Residue oracle for 1/(s ∏ (s - v)), v = {a1, a2, 2a1, a1 + a2, 2a2}.
    const long double r5 = std::sqrt(5.0L);
    const long double a1 = (-3 + r5) / 2, a2 = (-3 - r5) / 2;
    const std::vector<long double> v = {a1, a2, 2 * a1, a1 + a2, 2 * a2};
    long double prod = 1;
    for (long double x : v) prod *= -x;
    const long double steady_oracle = 1 / prod;
    const long double steady = g->bracket.constant().real();
    o.require(std::abs(steady - steady_oracle) < 1e-6L && std::abs(steady_oracle - 1.0L / 12) < 1e-15L,
              "steady state 1/12");

    // Printed as (p/τ) e^{-t/τ}; compare p = coefficient · τ.
    const std::vector<std::pair<double, double>> printed = {
        {0.1910, -0.0005835}, {0.3333, 0.02288}, {2.618, -0.6315}, {0.3820, -0.03514}, {1.309, 0.2409}};
    o.detail << std::setprecision(4) << "steady " << static_cast<double>(steady) << " vs 0.08332 "
             << (within_two_units(static_cast<double>(steady), 0.08332) ? "ok" : "off");
    o.require(within_two_units(static_cast<double>(steady), 0.08332), "steady coefficient");
    for (const auto& [tau, p] : printed) {
        const TimeTerm<Complex>* match = nullptr;
        for (const auto& t : g->bracket.terms())
            if (t.power == 0 && std::abs(t.rate) > 0 && within_two_units(static_cast<double>(-1 / t.rate.real()), tau))
                match = &t;
        if (!match) {
            o.require(false, "time constant " + std::to_string(tau));
            continue;
        }
        const double ours = static_cast<double>(match->coeff.real() * (-1 / match->rate.real()));
        const bool ok = within_two_units(ours, p);
        o.detail << "; τ=" << tau << ": " << ours << " vs " << p << (ok ? " ok" : " off");
        if (!ok) {
            std::ostringstream what;
            what << std::setprecision(4) << "coefficient at τ=" << tau;
            o.require(false, what.str());
        }
    }
    long double printed_at_zero = 0.08332;
    for (const auto& [tau, p] : printed) printed_at_zero += p / tau;
    o.detail << "; bracket at t=0: ours " << static_cast<double>(g->bracket.evaluate(0)) << ", printed "
             << static_cast<double>(printed_at_zero);
}

// ---------------------------------------------------------------- 6

void criterion6(Outcome& o) {
    const SystemSpec spec = duffing();
    const NoiseSpec noise{Rational(1, 10)};
    TimeFunction<Complex> mean = mean_response(spec, noise, 2);
    SimulationConfig cfg;
    cfg.dt = 0.005;
    cfg.t_end = 10;
    cfg.ensemble_size = 100000;
    cfg.rng_seed = 12345;
    std::vector<double> times;
    for (int k = 1; k <= 50; ++k) times.push_back(0.2 * k);
    MonteCarloResult mc = monte_carlo_mean(spec, noise, cfg, times);
    double worst = 0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double z = (mc.mean[k] - static_cast<double>(mean.evaluate(times[k]))) / mc.std_error[k];
        worst = std::max(worst, std::abs(z));
    }
    o.require(worst <= 3, "within 3 standard errors");
    o.detail << std::setprecision(4) << "σ²=0.1, " << mc.paths << " paths (seed 12345, dt 0.005, " << mc.diverged
             << " diverged), 50 times on (0,10]: max |z| = " << worst;
}

// ---------------------------------------------------------------- 7

void criterion7(Outcome& o) {
    std::vector<double> eps = {0.02, 0.01, 0.005}, residual;
    for (double e : eps) {
        const Rational e1(static_cast<long>(std::lround(e * 1000)), 1000);
        const SystemSpec s = make_system(2, {1, 3}, {{2, e1}, {3, e1 / 2}});
        Expansion ex = iterate(s, 2);
        TimeFunction<Complex> series = series_step_response(ex, 1, 0, 2);
        SimulationConfig cfg;
        cfg.dt = 0.005;
        cfg.t_end = 10;
        TimeSeries ode = integrate_ode(s, [](double) { return 1.0; }, cfg);
        double worst = 0;
        for (std::size_t k = 0; k < ode.t.size(); ++k)
            worst = std::max(worst, std::abs(ode.y[k] - static_cast<double>(series.evaluate(ode.t[k]))));
        residual.push_back(worst);
    }
    const double slope = loglog_slope(eps, residual);
    o.require(std::abs(slope - 3) <= 0.5, "slope 3 ± 0.5");
    o.detail << std::setprecision(4) << "unit step, max residual " << residual[0] << ", " << residual[1] << ", "
             << residual[2] << "; log-log slope " << slope;
}

// ---------------------------------------------------------------- 8

void criterion8(Outcome& o) {
    using Q = QuadSurd;
    long double worst = 0;
    bool symbolic = true;
    std::size_t rows = 0;
    auto grid_check = [&](const TimeFunction<Complex>& tf, const std::function<long double(long double)>& f) {
        for (int k = 0; k <= 400; ++k) {
            const long double t = 0.025L * k;
            worst = std::max(worst, std::abs(tf.evaluate(t) - f(t)));
        }
    };
    auto over = [](std::size_t k, std::vector<std::pair<Q, int>> factors) {
        X0Rational<Q> g;
        g.numerator.assign(k + 1, Q(Rational(0)));
        g.numerator[k] = Q(Rational(1));
        g.factors = std::move(factors);
        return g;
    };
    auto fact = [](int n) {
        long double f = 1;
        for (int i = 2; i <= n; ++i) f *= i;
        return f;
    };
    // x0^n <-> t^n / n!, n = 0 is the step.
    for (int n = 0; n <= 4; ++n, ++rows) {
        TimeFunction<Q> tf = inverse_laplace_borel(over(static_cast<std::size_t>(n), {}));
        TimeFunction<Q> expected;
        expected.add(Q(Rational(1) / factorial(n)), n, Q(Rational(0)));
        symbolic = symbolic && tf == expected;
        PartialFractions<Q> back = laplace_borel(tf);
        symbolic = symbolic && back.parts.empty() && back.polynomial.size() == static_cast<std::size_t>(n) + 1 &&
                   back.polynomial.back() == Q(Rational(1));
        grid_check(tf.to_numeric(), [&](long double t) { return std::pow(t, n) / fact(n); });
    }
    // (1 - a x0)^-α <-> f_a^α for α <= 4, rational and surd a.
    for (const Q& a : {Q(Rational(-2)), Q::parse("-3/2+1/2*sqrt(5)"), Q::parse("-3/2-1/2*sqrt(5)")})
        for (int alpha = 1; alpha <= 4; ++alpha, ++rows) {
            TimeFunction<Q> tf = inverse_laplace_borel(over(0, {{a, alpha}}));
            symbolic = symbolic && tf == f_a_alpha(a, alpha);
            PartialFractions<Q> back = laplace_borel(tf);
            symbolic = symbolic && back.polynomial.empty() && back.parts.size() == 1 && back.parts[0].order == alpha &&
                       back.parts[0].residue == Q(Rational(1));
            const long double av = a.to_complex().real();
            grid_check(tf.to_numeric(), [&](long double t) {
                long double s = 0;
                for (int j = 0; j < alpha; ++j) s += to_long_double(binomial(alpha - 1, j)) * std::pow(av * t, j) / fact(j);
                return s * std::exp(av * t);
            });
        }
    // (1 + ω² x0²)^-1 <-> cos ωt.
    for (long w : {1L, 3L}) {
        ++rows;
        X0Rational<Q> g = quadratic_denominator({Q(Rational(1))}, Rational(0), Rational(w * w));
        TimeFunction<Q> tf = inverse_laplace_borel(g);
        std::vector<Q> lhs = taylor(g, 12), rhs = taylor(laplace_borel(tf), 12);
        symbolic = symbolic && lhs == rhs;
        grid_check(tf.to_numeric(), [w](long double t) { return std::cos(static_cast<long double>(w) * t); });
    }
    o.require(symbolic, "symbolic round trips");
    o.require(worst < 1e-8L, "grid error < 1e-8");
    o.detail << rows << " table instances (step, t^n/n!, f_a^α for α ≤ 4, cos ωt), symbolic round trips "
             << (symbolic ? "exact" : "broken") << ", max grid error " << std::setprecision(3)
             << static_cast<double>(worst);
}

// ---------------------------------------------------------------- 9

void criterion9(Outcome& o) {
    const std::map<std::string, std::vector<long>> figure = {
        {"Y10", {1}},    {"Y01", {1}},       {"Y20", {2}},          {"Y11", {2, 3}},   {"Y02", {3}},
        {"Y30", {4, 1}}, {"Y21", {4, 6, 2, 6, 3}}, {"Y12", {6, 1, 6, 6, 9}}, {"Y03", {9, 3}},
    };
    std::size_t exact_order = 0, same_multiset = 0;
    for (const auto& [name, mults] : figure) {
        GradePair g{name[1] - '0', name[2] - '0'};
        std::vector<long> ours;
        for (const auto& t : consolidated_terms(g)) ours.push_back(t.multiplicity.get_si());
        if (ours == mults) ++exact_order;
        auto a = ours, b = mults;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a == b)
            ++same_multiset;
        else
            o.require(false, name + " multipliers");
    }
    // Printed right-hand sides: (vertex slots, children) -> coefficient.
    const std::map<std::string, std::map<std::pair<int, std::string>, long>> printed = {
        {"Y10", {{{2, "Y00 Y00"}, 1}}},
        {"Y01", {{{3, "Y00 Y00 Y00"}, 1}}},
        {"Y20", {{{2, "Y00 Y10"}, 2}}},
        {"Y11", {{{2, "Y00 Y01"}, 2}, {{3, "Y00 Y00 Y10"}, 3}}},
        {"Y02", {{{3, "Y00 Y00 Y01"}, 3}}},
        {"Y30", {{{2, "Y00 Y20"}, 2}, {{2, "Y10 Y10"}, 1}}},
        {"Y21", {{{2, "Y00 Y11"}, 2}, {{2, "Y10 Y01"}, 2}, {{3, "Y00 Y00 Y20"}, 3}, {{3, "Y00 Y10 Y10"}, 3}}},
        {"Y12", {{{2, "Y00 Y02"}, 2}, {{2, "Y01 Y01"}, 1}, {{3, "Y00 Y10 Y01"}, 6}, {{3, "Y00 Y00 Y11"}, 3}}},
        {"Y03", {{{3, "Y00 Y00 Y02"}, 3}, {{3, "Y00 Y01 Y01"}, 3}}},
    };
    std::map<std::string, std::map<std::pair<int, std::string>, long>> ours;
    for (const auto& t : consolidated_equations(3)) {
        std::string kids;
        for (const auto& c : t.children) kids += (kids.empty() ? "" : " ") + c.name();
        ours[t.grade.name()][{t.slots, kids}] = t.coefficient.get_si();
    }
    std::size_t equations = 0;
    for (const auto& [name, rhs] : printed) {
        if (ours[name] == rhs)
            ++equations;
        else
            o.require(false, name + " equation");
    }
    std::size_t trees = 0, violations = 0;
    for (const auto& t : expand_consolidated(6)) {
        ++trees;
        if (!check_rules(term_to_diagram(t)).empty()) ++violations;
    }
    o.require(violations == 0, "rules");
    o.detail << equations << "/9 equations, " << same_multiset << "/9 multiplier sets (" << exact_order
             << " in printed order; Y12 lists its two ε2 shapes the other way round), " << trees
             << " trees through total order 6 checked against rules 1-5, " << violations << " violations";
}

// ---------------------------------------------------------------- 10

void criterion10(Outcome& o) {
    const Expansion& ex = duffing_order2();
    ResidualReport lit = fixed_point_residual(ex, 2, 6);
    ResidualReport ext = fixed_point_residual(ex, 2, 12);
    o.require(lit.exact && lit.nonzero == 0, "length ≤ 6");
    o.require(ext.exact && ext.nonzero == 0, "length ≤ 12");
    o.detail << "exact rational residual zero on " << lit.coefficients_checked << " coefficients (words ≤ 6); "
             << "extended to words ≤ 12: " << ext.nonzero << " nonzero of " << ext.coefficients_checked
             << " (second-order words have 10 or more letters, so only the longer check reaches them)";
}

}  // namespace

int main() {
    const std::vector<std::pair<int, void (*)(Outcome&)>> criteria = {
        {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4}, {5, criterion5},
        {6, criterion6}, {7, criterion7}, {8, criterion8}, {9, criterion9}, {10, criterion10},
    };
    int errors = 0;
    for (const auto& [n, fn] : criteria) {
        Outcome o;
        const auto start = Clock::now();
        try {
            fn(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " [error: " << e.what() << "]";
            ++errors;
        }
        const double secs = std::chrono::duration<double>(Clock::now() - start).count();
        std::cout << "criterion " << n << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail.str() << " ("
                  << std::fixed << std::setprecision(2) << secs << " s)" << std::defaultfloat << std::endl;
    }
    return errors == 0 ? 0 : 1;
}
