#include "fliess/stochastic.hpp"

#include <map>

namespace fliess {

TermList expectation(const SeriesTerm& term) {
    const Chain& c = term.chain;
    if (!c.is_reduced()) throw std::invalid_argument("expectation requires a reduced term");
    SeriesTerm out{term.scalar, Chain{}};
    std::size_t k = 0;
    const std::size_t q = c.length();
    while (k < q) {
        if (c.letters[k] == Letter::x0) {
            out.chain.fractions.push_back(c.fractions[k]);
            out.chain.letters.push_back(Letter::x0);
            k += 1;
        } else if (k + 1 < q && c.letters[k + 1] == Letter::x1) {
            // The fraction between the paired inputs drops out.
            out.chain.fractions.push_back(c.fractions[k]);
            out.chain.letters.push_back(Letter::x0);
            out.scalar.noise_power += 1;
            k += 2;
        } else {
            return {};
        }
    }
    out.chain.fractions.push_back(c.fractions[k]);
    return {out};
}

std::vector<Survivor> audit_expectation(const Expansion& ex) {
    std::vector<Survivor> out;
    for (const auto& rep : ex.reports)
        for (std::size_t i = 0; i < rep.listing.size(); ++i) {
            TermList e = expectation(rep.listing[i]);
            if (!e.empty()) out.push_back({rep.order, i, rep.listing[i], e.front()});
        }
    return out;
}

std::vector<TermList> shuffle_power(const GeneratingSeries& g, int n, int max_order) {
    if (n < 1) throw std::invalid_argument("moment order must be at least 1");
    const std::size_t grades = static_cast<std::size_t>(max_order) + 1;
    std::vector<TermList> base(grades);
    for (std::size_t d = 0; d < grades && d < g.orders.size(); ++d) base[d] = g.orders[d];
    std::vector<TermList> acc = base;
    for (int k = 1; k < n; ++k) {
        std::vector<TermList> next(grades);
        for (std::size_t d1 = 0; d1 < grades; ++d1)
            for (std::size_t d2 = 0; d1 + d2 < grades; ++d2)
                for (const auto& s : acc[d1])
                    for (const auto& t : base[d2]) {
                        TermList p = shuffle_terms(s, t);
                        next[d1 + d2].insert(next[d1 + d2].end(), p.begin(), p.end());
                    }
        for (auto& level : next) level = merge_terms(level);
        acc = std::move(next);
    }
    return acc;
}

namespace {

struct GroupKey {
    EpsMonomial eps;
    int noise;
    friend auto operator<=>(const GroupKey&, const GroupKey&) = default;
};

template <class K>
std::vector<MomentGroup> group_means(const std::vector<TermList>& graded, const std::vector<K>& poles) {
    std::map<GroupKey, std::size_t> index;
    std::vector<MomentGroup> groups;
    std::vector<TimeFunction<K>> brackets;
    for (const auto& level : graded)
        for (const auto& term : level)
            for (const auto& m : expectation(term)) {
                GroupKey key{m.scalar.eps, m.scalar.noise_power};
                auto [it, inserted] = index.try_emplace(key, groups.size());
                if (inserted) {
                    MomentGroup g;
                    g.eps = key.eps;
                    g.noise_power = key.noise;
                    g.multiplier = m.scalar.value;
                    groups.push_back(g);
                    brackets.emplace_back();
                }
                MomentGroup& g = groups[it->second];
                ++g.term_count;
                SeriesTerm unit = m;
                unit.scalar.value = m.scalar.value / g.multiplier;
                brackets[it->second] += inverse_laplace_borel(unit, poles);
            }
    for (std::size_t i = 0; i < groups.size(); ++i) {
        groups[i].bracket = brackets[i].to_numeric();
        if constexpr (FieldTraits<K>::exact) groups[i].exact_bracket = brackets[i];
    }
    return groups;
}

}  // namespace

MomentExpansion moment_expansion(const Expansion& ex, int n, int max_order) {
    if (max_order + 1 > static_cast<int>(ex.series.orders.size()))
        throw std::invalid_argument("expansion computed to fewer orders than requested");
    std::vector<TermList> graded = shuffle_power(ex.series, n, max_order);
    MomentExpansion out;
    if (ex.spec.exact())
        out.groups = group_means(graded, ex.spec.exact_poles);
    else
        out.groups = group_means(graded, ex.spec.numeric_poles);
    return out;
}

TimeFunction<Complex> MomentExpansion::total(const SystemSpec& spec, const NoiseSpec& noise) const {
    TimeFunction<Complex> out;
    const long double half_sigma2 = to_long_double(noise.sigma_squared) / 2;
    for (const auto& g : groups) {
        long double w = to_long_double(g.multiplier) * spec.eps_weight(g.eps);
        for (int r = 0; r < g.noise_power; ++r) w *= half_sigma2;
        if (w != 0) out += g.bracket.scaled(Complex(w, 0));
    }
    return out;
}

TimeFunction<Complex> mean_response(const SystemSpec& spec, const NoiseSpec& noise, int max_order) {
    return equal_time_moment(spec, noise, 1, max_order);
}

TimeFunction<Complex> equal_time_moment(const SystemSpec& spec, const NoiseSpec& noise, int n, int max_order) {
    if (noise.sigma_squared < 0) throw std::invalid_argument("noise power must be nonnegative");
    Expansion ex = iterate(spec, max_order, default_term_budget(), false);
    return moment_expansion(ex, n, max_order).total(spec, noise);
}

}  // namespace fliess
