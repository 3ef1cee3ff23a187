#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fliess/borel.hpp"
#include "fliess/stochastic.hpp"
#include "fliess/system.hpp"

namespace fliess {

struct SimulationConfig {
    double dt = 0.01;
    double t_end = 10;
    std::size_t ensemble_size = 1;
    std::uint64_t rng_seed = 0;
    double blowup_bound = 1e6;
    unsigned threads = 0;  // 0 picks the hardware concurrency
};

void validate(const SimulationConfig& cfg);

class BlowUp : public std::runtime_error {
public:
    BlowUp(double time, double value);
    double time() const { return time_; }

private:
    double time_;
};

// Uniform grid t_k = k dt, k = 0 .. round(t_end / dt).
struct TimeSeries {
    std::vector<double> t;
    std::vector<double> y;
};

// Piecewise-linear input signal, zero before the first sample and held at the
// last value after the final one.
struct SampledSignal {
    std::vector<double> t;
    std::vector<double> x;

    double at(double time) const;
    static SampledSignal from_function(const std::function<double(double)>& f, double t_end, double dt);
    // Two columns "t,x"; a non-numeric first line is taken as a header.
    static SampledSignal parse_csv(const std::string& text);
    static SampledSignal load_csv(const std::string& path);
};

using InputFunction = std::function<double(double)>;

// Classical fixed-step RK4 from rest. Throws BlowUp when |y| exceeds the bound.
TimeSeries integrate_ode(const SystemSpec& spec, const InputFunction& input, const SimulationConfig& cfg);
TimeSeries integrate_ode(const SystemSpec& spec, const SampledSignal& input, const SimulationConfig& cfg);
// m y'' + c y' + k1 y + k2 y² + k3 y³ = x in physical units.
TimeSeries integrate_ode(const PhysicalDuffingParams& p, const InputFunction& input, const SimulationConfig& cfg);

// Response of the series orders [min_order, max_order] (max_order < 0: all
// available) to a sampled input. Each term's iterated integral is evaluated
// innermost first with the exponential-convolution recurrence
//   z(t + h) = e^{ch} z(t) + h/2 (e^{ch} f(t) + f(t + h)),
// which is the nested trapezoid rule evaluated in linear time per term.
TimeSeries volterra_response(const Expansion& ex, const SampledSignal& input, const SimulationConfig& cfg,
                             int min_order = 0, int max_order = -1);

// Closed-form response of the series orders [min_order, max_order] to a step
// of height A switched on at t = 0.
TimeFunction<Complex> series_step_response(const Expansion& ex, const Rational& amplitude, int min_order, int max_order);

struct MonteCarloResult {
    std::vector<double> t;
    std::vector<double> mean;
    std::vector<double> std_error;
    std::size_t paths = 0;      // paths kept in the statistics
    std::size_t diverged = 0;   // paths dropped for crossing the blow-up bound
};

// Euler-Maruyama ensemble for the system driven by white noise of power σ²
// (Itô increments of variance σ² dt) switched on at t = 0. Statistics are taken
// at the grid points nearest to sample_times. Path p draws from its own
// generator seeded by (rng_seed, p), and partial sums are combined in a fixed
// chunk order, so the result does not depend on the thread count.
MonteCarloResult monte_carlo_mean(const SystemSpec& spec, const NoiseSpec& noise, const SimulationConfig& cfg,
                                  const std::vector<double>& sample_times);

// Thrown when more than 0.1% of the ensemble diverges.
class EnsembleDiverged : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Per-path seed derivation (splitmix64 of the pair).
std::uint64_t path_seed(std::uint64_t seed, std::uint64_t path);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace fliess
