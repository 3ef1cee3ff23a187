#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fliess/number.hpp"
#include "fliess/series.hpp"

namespace fliess {

class FactorizationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(int order, std::uint64_t budget, std::uint64_t reached);
    int order() const { return order_; }

private:
    int order_;
};

struct PhysicalDuffingParams {
    Rational m{1}, c{0}, k1{1}, k2{0}, k3{0};
};

// y^(n) + l_{n-1} y^(n-1) + ... + l_0 y + Σ_k eps_k y^k = u, zero initial state.
struct SystemSpec {
    int n = 0;
    std::vector<Rational> linear;       // l_0 .. l_{n-1}
    std::map<int, Rational> nonlinear;  // stiffness degree (>= 2) -> coefficient
    std::vector<int> multiplicities;    // α_i per distinct pole
    std::vector<QuadSurd> exact_poles;  // filled when the poles are exact (n <= 2 or supplied)
    std::vector<Complex> numeric_poles; // always filled
    std::optional<PhysicalDuffingParams> physical;

    std::size_t dim() const { return multiplicities.size(); }
    bool exact() const { return !exact_poles.empty() || multiplicities.empty(); }
    // Degrees with a nonzero coefficient, ascending.
    std::vector<int> active_degrees() const;
    long double epsilon(int degree) const;
    // Numeric value of an ε monomial for this system.
    long double eps_weight(const EpsMonomial& e) const;
    // Numeric pole values, from the exact ones when available.
    std::vector<Complex> pole_values() const;
};

// Builds a spec and derives its poles: exact surds for n <= 2, numeric
// companion-matrix roots polished in extended precision otherwise.
SystemSpec make_system(int n, std::vector<Rational> linear, std::map<int, Rational> nonlinear = {});

// Replaces the derived poles with user-supplied ones; runs validate().
void set_exact_poles(SystemSpec& spec, std::vector<QuadSurd> poles, std::vector<int> multiplicities);

// Σα = n and ∏(1 - a_i x)^α_i = 1 + Σ l_j x^(n-j), exactly for surd poles and to
// 1e-9 relative for numeric ones.
void validate(const SystemSpec& spec);

struct CanonicalDuffing {
    SystemSpec spec;
    long double time_scale = 1;  // physical t = time_scale * τ
    Rational amplitude_scale{1}; // physical y = amplitude_scale * ŷ
    Rational force_scale{1};     // physical x = force_scale * x̂
    bool damping_exact = true;   // false when c/√(m k1) had to be rounded to a rational
};

// Unit-mass, unit-frequency form ŷ'' + a ŷ' + ŷ + ε1 ŷ² + ε2 ŷ³ = x̂. By default the
// amplitude scale makes ε1 = 1 when k2 != 0, else ε2 = 1 when k1/k3 is a
// rational square, else it is 1.
CanonicalDuffing canonicalize_duffing(const PhysicalDuffingParams& p, std::optional<Rational> amplitude_scale = {});

struct IntegralForm {
    SeriesTerm g0;         // x0^(n-1) x1 / ∏(1 - a_i x0)^α_i
    SeriesTerm prefactor;  // -x0^n / ∏(1 - a_i x0)^α_i
};

IntegralForm to_integral_form(const SystemSpec& spec);

// One composition product g_ν1 ⧢ ... ⧢ g_νk within an order.
struct ProductReport {
    int degree = 0;
    std::vector<int> composition;
    std::uint64_t interleavings = 0;  // elementary interleavings visited
    std::size_t listed = 0;           // terms after merging within each operand tuple
    std::size_t merged = 0;           // distinct terms of the whole composition product
    std::size_t first_index = 0;      // offset of its first term in the order listing
};

struct OrderReport {
    int order = 0;
    std::uint64_t interleavings = 0;
    std::size_t listed = 0;
    std::size_t merged = 0;
    // Reference count matching the published total at order 2: the leading
    // quadratic product counted per operand pair plus the leading cubic
    // product merged. Zero when either product is absent.
    std::size_t published_count = 0;
    std::vector<ProductReport> products;
    TermList listing;  // generation order, before merging across operand tuples
};

struct Expansion {
    SystemSpec spec;
    IntegralForm form;
    GeneratingSeries series;  // g_0 .. g_max, merged, first-occurrence order
    std::vector<OrderReport> reports;
};

inline constexpr std::uint64_t kDefaultTermBudget = 1000000;
inline constexpr const char* kBudgetEnvVar = "FLIESS_TERM_BUDGET";

// kDefaultTermBudget unless the environment variable holds a positive integer.
std::uint64_t default_term_budget();

// keep_listing = false drops the per-order generation listings to save memory.
Expansion iterate(const SystemSpec& spec, int max_order, std::uint64_t budget = default_term_budget(),
                  bool keep_listing = true);

// Ordered compositions of `total` into `parts` nonnegative parts, in
// lexicographically decreasing order ((total,0,..) first).
std::vector<std::vector<int>> compositions(int total, int parts);

// Flat "key = value" spec files (format described in README.md).
SystemSpec parse_spec(const std::string& text);
SystemSpec load_spec(const std::string& path);
std::string format_spec(const SystemSpec& spec);

}  // namespace fliess
