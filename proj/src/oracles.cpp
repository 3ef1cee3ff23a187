#include "fliess/oracles.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

namespace fliess {

void validate(const SimulationConfig& cfg) {
    if (!(cfg.dt > 0)) throw std::invalid_argument("dt must be positive");
    if (!(cfg.t_end >= 0)) throw std::invalid_argument("t_end must be nonnegative");
    if (cfg.ensemble_size < 1) throw std::invalid_argument("ensemble_size must be at least 1");
}

BlowUp::BlowUp(double time, double value)
    : std::runtime_error("response blew up at t = " + format_sig(time, 6) + " (|y| = " + format_sig(value, 6) + ")"),
      time_(time) {}

double SampledSignal::at(double time) const {
    if (t.empty()) return 0;
    if (time < t.front()) return 0;
    if (time >= t.back()) return x.back();
    auto it = std::upper_bound(t.begin(), t.end(), time);
    std::size_t k = static_cast<std::size_t>(it - t.begin());
    double t0 = t[k - 1], t1 = t[k];
    if (t1 == t0) return x[k];
    double w = (time - t0) / (t1 - t0);
    return (1 - w) * x[k - 1] + w * x[k];
}

SampledSignal SampledSignal::from_function(const std::function<double(double)>& f, double t_end, double dt) {
    SampledSignal s;
    const long n = std::lround(t_end / dt);
    for (long k = 0; k <= n; ++k) {
        s.t.push_back(k * dt);
        s.x.push_back(f(k * dt));
    }
    return s;
}

SampledSignal SampledSignal::parse_csv(const std::string& text) {
    SampledSignal s;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos || line[0] == '#') continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) throw ParseError("input CSV line " + std::to_string(lineno) + ": expected t,x");
        try {
            std::size_t used = 0;
            double tv = std::stod(line.substr(0, comma), &used);
            double xv = std::stod(line.substr(comma + 1));
            if (!s.t.empty() && tv < s.t.back())
                throw ParseError("input CSV line " + std::to_string(lineno) + ": times must be nondecreasing");
            s.t.push_back(tv);
            s.x.push_back(xv);
        } catch (const std::invalid_argument&) {
            if (s.t.empty() && lineno == 1) continue;  // header
            throw ParseError("input CSV line " + std::to_string(lineno) + ": not a number");
        }
    }
    return s;
}

SampledSignal SampledSignal::load_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    return parse_csv(buf.str());
}

namespace {

// y^(n) = gain * u - Σ lin_k y^(k) - Σ c_d y^d
struct Dynamics {
    std::vector<double> lin;
    std::vector<std::pair<int, double>> poly;
    double gain = 1;

    double top(const std::vector<double>& s, double u) const {
        double acc = gain * u;
        for (std::size_t k = 0; k < lin.size(); ++k) acc -= lin[k] * s[k];
        for (const auto& [d, c] : poly) acc -= c * std::pow(s[0], d);
        return acc;
    }
};

Dynamics dynamics_of(const SystemSpec& spec) {
    if (spec.n < 1) throw std::invalid_argument("system order must be at least 1");
    Dynamics d;
    for (const auto& l : spec.linear) d.lin.push_back(static_cast<double>(to_long_double(l)));
    for (const auto& [deg, c] : spec.nonlinear)
        if (c != 0) d.poly.emplace_back(deg, static_cast<double>(to_long_double(c)));
    return d;
}

TimeSeries rk4(const Dynamics& dyn, const InputFunction& input, const SimulationConfig& cfg) {
    validate(cfg);
    const std::size_t n = dyn.lin.size();
    const long steps = std::lround(cfg.t_end / cfg.dt);
    const double h = cfg.dt;
    TimeSeries out;
    out.t.reserve(static_cast<std::size_t>(steps) + 1);
    out.y.reserve(static_cast<std::size_t>(steps) + 1);
    std::vector<double> s(n, 0.0), k1(n), k2(n), k3(n), k4(n), tmp(n);
    auto deriv = [&](const std::vector<double>& st, double u, std::vector<double>& d) {
        for (std::size_t k = 0; k + 1 < n; ++k) d[k] = st[k + 1];
        d[n - 1] = dyn.top(st, u);
    };
    out.t.push_back(0);
    out.y.push_back(0);
    for (long step = 0; step < steps; ++step) {
        const double t = step * h;
        const double u0 = input(t), um = input(t + h / 2), u1 = input(t + h);
        deriv(s, u0, k1);
        for (std::size_t k = 0; k < n; ++k) tmp[k] = s[k] + h / 2 * k1[k];
        deriv(tmp, um, k2);
        for (std::size_t k = 0; k < n; ++k) tmp[k] = s[k] + h / 2 * k2[k];
        deriv(tmp, um, k3);
        for (std::size_t k = 0; k < n; ++k) tmp[k] = s[k] + h * k3[k];
        deriv(tmp, u1, k4);
        for (std::size_t k = 0; k < n; ++k) s[k] += h / 6 * (k1[k] + 2 * k2[k] + 2 * k3[k] + k4[k]);
        const double tn = (step + 1) * h;
        if (!std::isfinite(s[0]) || std::abs(s[0]) > cfg.blowup_bound) throw BlowUp(tn, std::abs(s[0]));
        out.t.push_back(tn);
        out.y.push_back(s[0]);
    }
    return out;
}

}  // namespace

TimeSeries integrate_ode(const SystemSpec& spec, const InputFunction& input, const SimulationConfig& cfg) {
    return rk4(dynamics_of(spec), input, cfg);
}

TimeSeries integrate_ode(const SystemSpec& spec, const SampledSignal& input, const SimulationConfig& cfg) {
    return rk4(dynamics_of(spec), [&input](double t) { return input.at(t); }, cfg);
}

TimeSeries integrate_ode(const PhysicalDuffingParams& p, const InputFunction& input, const SimulationConfig& cfg) {
    if (p.m <= 0) throw std::invalid_argument("mass must be positive");
    const double m = static_cast<double>(to_long_double(p.m));
    Dynamics d;
    d.lin = {static_cast<double>(to_long_double(p.k1)) / m, static_cast<double>(to_long_double(p.c)) / m};
    if (p.k2 != 0) d.poly.emplace_back(2, static_cast<double>(to_long_double(p.k2)) / m);
    if (p.k3 != 0) d.poly.emplace_back(3, static_cast<double>(to_long_double(p.k3)) / m);
    d.gain = 1 / m;
    return rk4(d, input, cfg);
}

namespace {

std::pair<int, int> order_range(const Expansion& ex, int min_order, int max_order) {
    const int available = static_cast<int>(ex.series.orders.size()) - 1;
    if (max_order < 0 || max_order > available) max_order = available;
    if (min_order < 0) min_order = 0;
    return {min_order, max_order};
}

}  // namespace

TimeSeries volterra_response(const Expansion& ex, const SampledSignal& input, const SimulationConfig& cfg, int min_order,
                             int max_order) {
    validate(cfg);
    auto [lo, hi] = order_range(ex, min_order, max_order);
    const long steps = std::lround(cfg.t_end / cfg.dt);
    const std::size_t len = static_cast<std::size_t>(steps) + 1;
    const double h = cfg.dt;
    const std::vector<Complex> poles = ex.spec.pole_values();

    std::vector<double> u(len);
    TimeSeries out;
    for (std::size_t k = 0; k < len; ++k) {
        out.t.push_back(static_cast<double>(k) * h);
        u[k] = input.at(static_cast<double>(k) * h);
    }
    std::vector<std::complex<double>> acc(len, 0.0);
    std::vector<std::complex<double>> z(len), f(len);

    for (int order = lo; order <= hi; ++order)
        for (const auto& raw : ex.series.orders[static_cast<std::size_t>(order)]) {
            if (raw.scalar.noise_power != 0) throw std::invalid_argument("volterra_response needs a deterministic series");
            TermList pieces = raw.chain.is_reduced() ? TermList{raw} : reduce_exponents(raw);
            for (const auto& term : pieces) {
                Complex scale = Complex(to_long_double(term.scalar.value) * ex.spec.eps_weight(term.scalar.eps), 0);
                for (const auto& pf : term.scalar.pole_factors) scale *= pf.evaluate(poles);
                const Chain& c = term.chain;
                const std::size_t q = c.length();
                // Innermost: the last fraction applied to the constant 1.
                std::complex<double> lam = std::complex<double>(c.fractions[q].pole.evaluate(poles));
                for (std::size_t k = 0; k < len; ++k) z[k] = std::exp(lam * (static_cast<double>(k) * h));
                for (std::size_t pos = q; pos-- > 0;) {
                    const bool with_input = c.letters[pos] == Letter::x1;
                    for (std::size_t k = 0; k < len; ++k) f[k] = with_input ? z[k] * u[k] : z[k];
                    lam = std::complex<double>(c.fractions[pos].pole.evaluate(poles));
                    const std::complex<double> decay = std::exp(lam * h);
                    z[0] = 0;
                    for (std::size_t k = 0; k + 1 < len; ++k) z[k + 1] = decay * z[k] + h / 2 * (decay * f[k] + f[k + 1]);
                }
                const std::complex<double> s(scale);
                for (std::size_t k = 0; k < len; ++k) acc[k] += s * z[k];
            }
        }
    out.y.resize(len);
    for (std::size_t k = 0; k < len; ++k) out.y[k] = acc[k].real();
    return out;
}

TimeFunction<Complex> series_step_response(const Expansion& ex, const Rational& amplitude, int min_order, int max_order) {
    auto [lo, hi] = order_range(ex, min_order, max_order);
    TimeFunction<Complex> out;
    for (int order = lo; order <= hi; ++order)
        for (const auto& term : ex.series.orders[static_cast<std::size_t>(order)]) {
            if (term.scalar.noise_power != 0) throw std::invalid_argument("step response needs a deterministic series");
            SeriesTerm s = substitute_step(term, amplitude);
            TimeFunction<Complex> tf;
            if (!ex.spec.exact_poles.empty())
                tf = inverse_laplace_borel(s, ex.spec.exact_poles).to_numeric();
            else
                tf = inverse_laplace_borel(s, ex.spec.numeric_poles);
            out += tf.scaled(Complex(ex.spec.eps_weight(term.scalar.eps), 0));
        }
    return out;
}

std::uint64_t path_seed(std::uint64_t seed, std::uint64_t path) {
    auto mix = [](std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    };
    return mix(mix(seed) ^ path);
}

MonteCarloResult monte_carlo_mean(const SystemSpec& spec, const NoiseSpec& noise, const SimulationConfig& cfg,
                                  const std::vector<double>& sample_times) {
    validate(cfg);
    if (noise.sigma_squared < 0) throw std::invalid_argument("noise power must be nonnegative");
    const Dynamics dyn = dynamics_of(spec);
    const std::size_t n = dyn.lin.size();
    const double h = cfg.dt;
    const double sd = std::sqrt(static_cast<double>(to_long_double(noise.sigma_squared)) * h);

    std::vector<long> sample_step;
    for (double t : sample_times) {
        if (t < 0) throw std::invalid_argument("sample times must be nonnegative");
        sample_step.push_back(std::lround(t / h));
    }
    const std::size_t ns = sample_step.size();
    const long steps = sample_step.empty() ? 0 : *std::max_element(sample_step.begin(), sample_step.end());
    // Slots hit at each step, so that repeated or unsorted sample times work.
    std::vector<std::vector<std::size_t>> hits(static_cast<std::size_t>(steps) + 1);
    for (std::size_t k = 0; k < ns; ++k) hits[static_cast<std::size_t>(sample_step[k])].push_back(k);

    struct Chunk {
        std::vector<double> sum, sumsq;
        std::size_t kept = 0, diverged = 0;
    };
    constexpr std::size_t kChunk = 1024;
    const std::size_t nchunks = (cfg.ensemble_size + kChunk - 1) / kChunk;
    std::vector<Chunk> chunks(nchunks);

    auto run_chunk = [&](std::size_t ci) {
        Chunk& ch = chunks[ci];
        ch.sum.assign(ns, 0.0);
        ch.sumsq.assign(ns, 0.0);
        std::vector<double> path_values(ns);
        std::vector<double> s(n), ds(n);
        const std::size_t first = ci * kChunk;
        const std::size_t last = std::min(cfg.ensemble_size, first + kChunk);
        for (std::size_t p = first; p < last; ++p) {
            std::mt19937_64 gen(path_seed(cfg.rng_seed, p));
            std::normal_distribution<double> normal(0.0, 1.0);
            std::fill(s.begin(), s.end(), 0.0);
            bool ok = true;
            for (std::size_t k : hits[0]) path_values[k] = 0;
            for (long step = 1; step <= steps; ++step) {
                for (std::size_t k = 0; k + 1 < n; ++k) ds[k] = s[k + 1] * h;
                ds[n - 1] = dyn.top(s, 0.0) * h + (sd > 0 ? sd * normal(gen) : 0.0);
                for (std::size_t k = 0; k < n; ++k) s[k] += ds[k];
                if (!std::isfinite(s[0]) || std::abs(s[0]) > cfg.blowup_bound) {
                    ok = false;
                    break;
                }
                for (std::size_t k : hits[static_cast<std::size_t>(step)]) path_values[k] = s[0];
            }
            if (!ok) {
                ++ch.diverged;
                continue;
            }
            ++ch.kept;
            for (std::size_t k = 0; k < ns; ++k) {
                ch.sum[k] += path_values[k];
                ch.sumsq[k] += path_values[k] * path_values[k];
            }
        }
    };

    unsigned workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, nchunks));
    if (workers <= 1) {
        for (std::size_t ci = 0; ci < nchunks; ++ci) run_chunk(ci);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t ci; (ci = next.fetch_add(1)) < nchunks;) run_chunk(ci);
            });
        for (auto& th : pool) th.join();
    }

    MonteCarloResult r;
    std::vector<double> sum(ns, 0.0), sumsq(ns, 0.0);
    for (const auto& ch : chunks) {
        r.paths += ch.kept;
        r.diverged += ch.diverged;
        for (std::size_t k = 0; k < ns; ++k) {
            sum[k] += ch.sum[k];
            sumsq[k] += ch.sumsq[k];
        }
    }
    if (static_cast<double>(r.diverged) > 0.001 * static_cast<double>(cfg.ensemble_size))
        throw EnsembleDiverged(std::to_string(r.diverged) + " of " + std::to_string(cfg.ensemble_size) +
                               " paths diverged (more than 0.1%)");
    r.t.resize(ns);
    r.mean.assign(ns, 0.0);
    r.std_error.assign(ns, 0.0);
    for (std::size_t k = 0; k < ns; ++k) {
        r.t[k] = static_cast<double>(sample_step[k]) * h;
        if (r.paths == 0) continue;
        const double m = sum[k] / static_cast<double>(r.paths);
        r.mean[k] = m;
        if (r.paths > 1) {
            double var = (sumsq[k] - static_cast<double>(r.paths) * m * m) / static_cast<double>(r.paths - 1);
            r.std_error[k] = std::sqrt(std::max(0.0, var) / static_cast<double>(r.paths));
        }
    }
    return r;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope fit needs at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        double lx = std::log(x[k]), ly = std::log(y[k]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace fliess
