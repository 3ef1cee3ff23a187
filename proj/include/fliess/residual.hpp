#pragma once

#include <string>
#include <vector>

#include "fliess/system.hpp"

namespace fliess {

// Check that a truncated expansion satisfies its own fixed-point equation
//   g = g0 + Σ_d ε_d P (g ⧢ ... ⧢ g)     (d factors, P the prefactor)
// coefficient by coefficient for every ε monomial of total grade <= max_grade
// and every word of length <= max_len. With exact poles the comparison is
// exact; with numeric poles it is relative to the largest coefficient.
struct ResidualReport {
    bool exact = false;
    std::size_t coefficients_checked = 0;
    std::size_t nonzero = 0;            // exact mode: coefficients that differ
    long double max_abs = 0;            // largest |lhs - rhs|
    long double scale = 0;              // largest |lhs| seen
    std::vector<std::string> examples;  // a few offending (ε, word) entries

    bool ok(long double rel_tol = 1e-9L) const {
        return exact ? nonzero == 0 : max_abs <= rel_tol * std::max<long double>(1, scale);
    }
};

ResidualReport fixed_point_residual(const Expansion& ex, int max_grade, std::size_t max_len);

}  // namespace fliess
