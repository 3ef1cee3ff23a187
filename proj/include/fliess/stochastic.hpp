#pragma once

#include <optional>
#include <vector>

#include "fliess/borel.hpp"
#include "fliess/series.hpp"
#include "fliess/system.hpp"

namespace fliess {

// White noise with E[x(t)x(s)] = σ² δ(t - s).
struct NoiseSpec {
    Rational sigma_squared{0};
};

// Expectation of a standard-form term under white noise, read from the left:
//   F_b0 x0 ...      -> F_b0 x0 <rest>
//   F_b0 x1 F_b1 x1 ... -> (σ²/2) F_b0 x0 <rest from F_b2>
//   anything else     -> 0
// The result is empty or a single all-x0 term; σ²/2 is tracked as noise_power.
TermList expectation(const SeriesTerm& term);

// Surviving terms of one (ε monomial, noise power) class: the inverse transform
// of their sum, written as multiplier × bracket with the multiplier taken from
// the first surviving term (the way the closed form is usually printed).
struct MomentGroup {
    EpsMonomial eps;
    int noise_power = 0;
    Rational multiplier{1};
    std::size_t term_count = 0;
    TimeFunction<Complex> bracket;
    std::optional<TimeFunction<QuadSurd>> exact_bracket;
};

struct MomentExpansion {
    std::vector<MomentGroup> groups;

    // Substitutes the ε values of the spec and the noise power.
    TimeFunction<Complex> total(const SystemSpec& spec, const NoiseSpec& noise) const;
};

// Survivor audit: which generated terms have nonzero expectation.
struct Survivor {
    int order = 0;
    std::size_t index = 0;  // 0-based position in that order's generation listing
    SeriesTerm source;
    SeriesTerm mean;
};

std::vector<Survivor> audit_expectation(const Expansion& ex);

// <g^{⧢n}> truncated at total ε-grade max_order, grouped and transformed.
MomentExpansion moment_expansion(const Expansion& ex, int n, int max_order);

TimeFunction<Complex> mean_response(const SystemSpec& spec, const NoiseSpec& noise, int max_order);
TimeFunction<Complex> equal_time_moment(const SystemSpec& spec, const NoiseSpec& noise, int n, int max_order);

// Shuffle powers of a graded series, truncated by grade: result[d] holds the
// grade-d part of g^{⧢n}.
std::vector<TermList> shuffle_power(const GeneratingSeries& g, int n, int max_order);

}  // namespace fliess
