#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "fliess/number.hpp"

namespace fliess {

// Frequency-domain perturbation expansion of
//   Y = H X - ε1 H ∫ Y Y dμ2 - ε2 H ∫ Y Y Y dμ3
// in powers ε1^i ε2^j, and its tree diagrams.

class DiagramError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct GradePair {
    int i = 0;
    int j = 0;
    friend auto operator<=>(const GradePair&, const GradePair&) = default;
    int total() const { return i + j; }
    std::string name() const;  // "Y21"
};

// A Y-reference tree. A leaf stands for Y00 = H X; an internal node is a
// quadratic (2 slots, ε1) or cubic (3 slots, ε2) vertex whose slots carry
// lower-order Y's. Children are kept in canonical order.
struct YTree {
    int slots = 0;  // 0 leaf, 2 quadratic, 3 cubic
    std::vector<YTree> children;

    GradePair grade() const;
    std::string key() const;  // canonical text, e.g. "Q(0,C(0,0,0))"
    std::size_t leaves() const;
    friend bool operator==(const YTree& a, const YTree& b) { return a.key() == b.key(); }
};

// One term of the once-substituted equation for Y_ij, e.g. 3 Y00 Y00 Y20.
struct EquationTerm {
    GradePair grade;
    int slots = 0;                      // vertex kind at the root
    std::vector<GradePair> children;    // sorted multiset of slot orders
    Integer coefficient;                // number of ordered slot assignments
};

// A fully substituted term: multiplicity times a single tree.
struct ExpansionTerm {
    GradePair grade;
    Integer multiplicity;
    YTree tree;
};

struct ExpansionOptions {
    bool quadratic = true;
    bool cubic = true;
};

// Right-hand sides of the Y_ij equations for 1 <= i + j <= max_total_order,
// ε1 vertex first, then ε2.
std::vector<EquationTerm> consolidated_equations(int max_total_order, ExpansionOptions opts = {});

// All trees with their multiplicities, grouped by grade in increasing total
// order (then decreasing i). Grade (0,0) is not listed.
std::vector<ExpansionTerm> expand_consolidated(int max_total_order, ExpansionOptions opts = {});

// Terms of one grade.
std::vector<ExpansionTerm> consolidated_terms(GradePair grade, ExpansionOptions opts = {});

std::string render_equation(GradePair grade, const std::vector<EquationTerm>& terms);

// Drawable form: vertices, solid lines (propagators H, child vertex -> parent,
// the root's line goes to the output) and dashed legs (Y00 inputs).
struct TreeDiagram {
    GradePair grade;
    std::vector<int> valence;                 // 3 quadratic, 4 cubic
    std::vector<int> solid_parent;            // per vertex: parent vertex, -1 for the output
    std::vector<int> dashed_target;           // per leg: vertex it enters
    // Symbolic frequency bookkeeping: the legs summed on each solid line.
    std::vector<std::vector<int>> solid_frequencies;

    bool empty() const { return valence.empty() && dashed_target.empty(); }
};

// Rule violations in plain words; empty when all five rules hold.
std::vector<std::string> check_rules(const TreeDiagram& d);

// Throws DiagramError if the result breaks a rule.
TreeDiagram term_to_diagram(const ExpansionTerm& t);

// Graphviz text. Quadratic vertices red, cubic blue, legs dashed.
std::string render_dot(const TreeDiagram& d, const std::string& name = "");

}  // namespace fliess
