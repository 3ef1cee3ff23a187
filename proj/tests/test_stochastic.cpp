#include "doctest.h"

#include <cmath>

#include "fliess/stochastic.hpp"
#include "printed_arrays.hpp"

using namespace fliess;

namespace {

SystemSpec duffing() { return make_system(2, {1, 3}, {{2, 1}, {3, Rational(1, 2)}}); }

const Expansion& duffing_order2() {
    static const Expansion ex = iterate(duffing(), 2);
    return ex;
}

const MomentGroup* find_group(const MomentExpansion& m, int e1, int e2, int noise) {
    for (const auto& g : m.groups)
        if (g.eps[0] == e1 && g.eps[1] == e2 && g.noise_power == noise) return &g;
    return nullptr;
}

// Σ c e^{λu} on u >= 0, enough to integrate products of decaying exponentials
// in closed form.
struct ExpSum {
    std::vector<std::pair<long double, long double>> terms;  // (c, λ)

    ExpSum operator*(const ExpSum& o) const {
        ExpSum out;
        for (auto [c, l] : terms)
            for (auto [d, m] : o.terms) out.terms.emplace_back(c * d, l + m);
        return out;
    }
    long double integral() const {
        long double s = 0;
        for (auto [c, l] : terms) s += c / -l;
        return s;
    }
    long double at(long double u) const {
        long double s = 0;
        for (auto [c, l] : terms) s += c * std::exp(l * u);
        return s;
    }
};

struct LinearOracle {
    ExpSum h;  // impulse response of y'' + 3y' + y
    ExpSum R;  // stationary autocovariance for u >= 0
    long double R0 = 0;

    explicit LinearOracle(long double sigma2) {
        const long double r5 = std::sqrt(5.0L);
        const long double a1 = (-3 + r5) / 2, a2 = (-3 - r5) / 2;
        h.terms = {{1 / (a1 - a2), a1}, {-1 / (a1 - a2), a2}};
        // R(u) = σ² ∫ h(s) h(s + u) ds
        for (auto [c, l] : h.terms)
            for (auto [d, m] : h.terms) R.terms.emplace_back(sigma2 * c * d / -(l + m), m);
        R0 = R.at(0);
    }
};

}  // namespace

TEST_CASE("expectation reads the chain from the left") {
    auto term = [](const char* letters, std::vector<PoleCombo> poles) {
        const Word w = Word::parse(letters);
        return SeriesTerm{ScalarCoefficient{}, Chain::build(w.letters(), poles)};
    };
    const PoleCombo z{0, 0}, a{1, 0}, b{0, 1}, ab{1, 1};

    SUBCASE("a lone input letter averages to zero") {
        CHECK(expectation(term("x0x1", {a, b, z})).empty());
        CHECK(expectation(term("x1", {a, z})).empty());
    }
    SUBCASE("an adjacent pair contracts to sigma squared over two") {
        TermList out = expectation(term("x1x1", {a, b, z}));
        REQUIRE(out.size() == 1);
        CHECK(out[0].scalar.noise_power == 1);
        CHECK(out[0].chain.all_x0());
        CHECK(out[0].chain.length() == 1);
        CHECK(out[0].chain.fractions[0].pole == a);
    }
    SUBCASE("a pair split by a time letter vanishes") {
        CHECK(expectation(term("x1x0x1", {a, b, ab, z})).empty());
    }
    SUBCASE("all-x0 chains are deterministic") {
        TermList out = expectation(term("x0x0", {a, b, z}));
        REQUIRE(out.size() == 1);
        CHECK(out[0].scalar.noise_power == 0);
    }
}

TEST_CASE("first mean term is -4 eps1 sigma^2/2 over five poles") {
    auto survivors = audit_expectation(duffing_order2());
    REQUIRE_FALSE(survivors.empty());
    const Survivor& first = survivors.front();
    CHECK(first.order == 1);
    CHECK(first.mean.scalar.noise_power == 1);
    std::string why;
    CHECK_MESSAGE(testutil::matches(first.mean, {-4, 1, 0, "x0 x0 x0 x0 x0", {"-a1", "-a2", "-2a1", "-a1 - a2", "-2a2"}},
                                    &why),
                  why);
}

TEST_CASE("exactly one first-order term survives") {
    auto survivors = audit_expectation(duffing_order2());
    std::size_t count = 0;
    for (const auto& s : survivors)
        if (s.order == 1) {
            ++count;
            CHECK(s.index == 1);
            CHECK(s.source == duffing_order2().series.orders[1][1]);
        }
    CHECK(count == 1);
    for (const auto& s : survivors) CHECK(s.order != 0);
}

TEST_CASE("first second-order survivor sits at listing position 39") {
    auto survivors = audit_expectation(duffing_order2());
    const Survivor* first = nullptr;
    for (const auto& s : survivors)
        if (s.order == 2) {
            first = &s;
            break;
        }
    REQUIRE(first != nullptr);
    CHECK(first->index == 39);
    CHECK(first->mean.scalar.eps[0] == 1);
    CHECK(first->mean.scalar.eps[1] == 1);
    CHECK(first->mean.scalar.noise_power == 2);
    CHECK(first->mean.scalar.value == 48);
}

TEST_CASE("every survivor has an even number of input letters") {
    for (const auto& s : audit_expectation(duffing_order2())) {
        CHECK(s.source.chain.count(Letter::x1) % 2 == 0);
        CHECK(s.mean.chain.all_x0());
        CHECK(2 * s.mean.scalar.noise_power == static_cast<int>(s.source.chain.count(Letter::x1)));
    }
}

TEST_CASE("first-order bracket equals the residue sum") {
    MomentExpansion m = moment_expansion(duffing_order2(), 1, 2);
    const MomentGroup* g = find_group(m, 1, 0, 1);
    REQUIRE(g != nullptr);
    CHECK(g->multiplier == -4);
    CHECK(g->term_count == 1);

    // Y(s) = 1 / (s ∏ (s - v_i)) with v = {a1, a2, 2a1, a1 + a2, 2a2}.
    const long double r5 = std::sqrt(5.0L);
    const long double a1 = (-3 + r5) / 2, a2 = (-3 - r5) / 2;
    const std::vector<long double> v = {a1, a2, 2 * a1, a1 + a2, 2 * a2};
    auto oracle = [&](long double t) {
        long double prod = 1;
        for (long double x : v) prod *= -x;
        long double y = 1 / prod;
        for (std::size_t j = 0; j < v.size(); ++j) {
            long double d = v[j];
            for (std::size_t i = 0; i < v.size(); ++i)
                if (i != j) d *= v[j] - v[i];
            y += std::exp(v[j] * t) / d;
        }
        return y;
    };
    for (int k = 0; k <= 200; ++k) {
        const long double t = 0.05L * k;
        CHECK(g->bracket.evaluate(t) == doctest::Approx(static_cast<double>(oracle(t))).epsilon(1e-10).scale(1));
    }
    CHECK(std::abs(g->bracket.constant().real() - 1.0L / 12) < 1e-15L);
    REQUIRE(g->exact_bracket.has_value());
    CHECK(g->exact_bracket->constant() == QuadSurd(Rational(1, 12)));
}

TEST_CASE("bracket time constants are the printed ones") {
    MomentExpansion m = moment_expansion(duffing_order2(), 1, 1);
    const MomentGroup* g = find_group(m, 1, 0, 1);
    REQUIRE(g != nullptr);
    std::vector<double> taus;
    for (const auto& t : g->bracket.terms())
        if (std::abs(t.rate) > 0) taus.push_back(static_cast<double>(-1 / t.rate.real()));
    std::sort(taus.begin(), taus.end());
    const std::vector<double> printed = {0.1910, 0.3333, 0.3820, 1.309, 2.618};
    REQUIRE(taus.size() == printed.size());
    for (std::size_t i = 0; i < printed.size(); ++i) CHECK(taus[i] == doctest::Approx(printed[i]).epsilon(2e-4));
}

TEST_CASE("first-order steady mean is minus the linear variance") {
    // E[y1] = -H(0) E[y0²] in the stationary limit, and H(0) = 1.
    LinearOracle lin(1.0L);
    TimeFunction<Complex> mean = mean_response(make_system(2, {1, 3}, {{2, 1}}), NoiseSpec{1}, 1);
    CHECK(static_cast<double>(mean.constant().real()) == doctest::Approx(static_cast<double>(-lin.R0)).epsilon(1e-12));
}

TEST_CASE("second-order mixed coefficient matches the Gaussian moment oracle") {
    MomentExpansion m = moment_expansion(duffing_order2(), 1, 2);
    const MomentGroup* g = find_group(m, 1, 1, 2);
    REQUIRE(g != nullptr);
    CHECK(g->multiplier == 192);
    CHECK(g->term_count == 17);
    REQUIRE(g->exact_bracket.has_value());
    CHECK(g->exact_bracket->constant() == QuadSurd(Rational(1, 216)));

    // L y12 = -(2 y0 y2 + 3 y0² y1), with L y1 = -y0², L y2 = -y0³ and Gaussian y0.
    // (σ²/2)² = 1 at σ² = 2.
    LinearOracle lin(2.0L);
    const long double e_y0y2 = -3 * lin.R0 * (lin.h * lin.R).integral();
    ExpSum r0sq;
    r0sq.terms = {{lin.R0 * lin.R0, 0}};
    const long double e_y0sq_y1 = -((lin.h * r0sq).integral() + 2 * (lin.h * lin.R * lin.R).integral());
    const long double steady = -(2 * e_y0y2 + 3 * e_y0sq_y1);
    CHECK(static_cast<double>(steady) == doctest::Approx(8.0 / 9.0).epsilon(1e-12));
    CHECK(static_cast<double>((g->multiplier.get_d()) * g->bracket.constant().real()) ==
          doctest::Approx(static_cast<double>(steady)).epsilon(1e-12));
}

TEST_CASE("only the eps1 and eps1 eps2 classes survive through order two") {
    MomentExpansion m = moment_expansion(duffing_order2(), 1, 2);
    for (const auto& g : m.groups) {
        const bool known = (g.eps[0] == 1 && g.eps[1] == 0 && g.noise_power == 1) ||
                           (g.eps[0] == 1 && g.eps[1] == 1 && g.noise_power == 2);
        CHECK_MESSAGE(known, g.eps.to_string());
    }
}

TEST_CASE("mean scales with the noise power class by class") {
    SystemSpec s = duffing();
    TimeFunction<Complex> m1 = mean_response(s, NoiseSpec{Rational(1, 10)}, 1);
    TimeFunction<Complex> m2 = mean_response(s, NoiseSpec{Rational(2, 10)}, 1);
    for (int k = 0; k <= 50; ++k) {
        const long double t = 0.2L * k;
        CHECK(static_cast<double>(m2.evaluate(t)) == doctest::Approx(static_cast<double>(2 * m1.evaluate(t))));
    }
    CHECK(mean_response(s, NoiseSpec{0}, 2).evaluate(3.0L) == 0);
}

TEST_CASE("linear second moment is the stationary variance") {
    SystemSpec lin = make_system(2, {1, 3});
    TimeFunction<Complex> m2 = equal_time_moment(lin, NoiseSpec{2}, 2, 0);
    CHECK(std::abs(m2.constant().real() - 1.0L / 3) < 1e-15L);
    CHECK(std::abs(m2.evaluate(0)) < 1e-15L);
    CHECK(std::abs(m2.constant().real() - LinearOracle(2.0L).R0) < 1e-15L);
    // Odd moments of a Gaussian response vanish.
    CHECK(equal_time_moment(lin, NoiseSpec{2}, 3, 0).empty());
}

TEST_CASE("shuffle powers are graded") {
    const GeneratingSeries& g = duffing_order2().series;
    auto p1 = shuffle_power(g, 1, 2);
    REQUIRE(p1.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) CHECK(p1[k].size() == g.orders[k].size());
    auto p2 = shuffle_power(g, 2, 1);
    REQUIRE(p2.size() == 2);
    for (const auto& t : p2[1]) CHECK(t.scalar.eps.total() == 1);
    for (const auto& t : p2[0]) CHECK(t.chain.count(Letter::x1) == 2);
}
