#include "fliess/diagrams.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

namespace fliess {

std::string GradePair::name() const { return "Y" + std::to_string(i) + std::to_string(j); }

GradePair YTree::grade() const {
    GradePair g;
    if (slots == 2) g.i = 1;
    if (slots == 3) g.j = 1;
    for (const auto& c : children) {
        GradePair h = c.grade();
        g.i += h.i;
        g.j += h.j;
    }
    return g;
}

std::string YTree::key() const {
    if (slots == 0) return "0";
    std::string out = slots == 2 ? "Q(" : "C(";
    for (std::size_t k = 0; k < children.size(); ++k) {
        if (k) out += ',';
        out += children[k].key();
    }
    return out + ")";
}

std::size_t YTree::leaves() const {
    if (slots == 0) return 1;
    std::size_t n = 0;
    for (const auto& c : children) n += c.leaves();
    return n;
}

namespace {

// Lower totals first; within a total, larger ε1 power first.
bool grade_before(const GradePair& a, const GradePair& b) {
    if (a.total() != b.total()) return a.total() < b.total();
    return a.i > b.i;
}

std::vector<GradePair> grades_up_to(const GradePair& r) {
    std::vector<GradePair> out;
    for (int a = 0; a <= r.i; ++a)
        for (int b = 0; b <= r.j; ++b) out.push_back({a, b});
    std::sort(out.begin(), out.end(), grade_before);
    return out;
}

bool tree_before(const YTree& a, const YTree& b) {
    GradePair ga = a.grade(), gb = b.grade();
    if (ga != gb) return grade_before(ga, gb);
    return a.key() < b.key();
}

// Calls visit(tuple) for every ordered tuple of `slots` grades summing to r.
void for_each_grade_tuple(const GradePair& r, int slots, const std::function<void(const std::vector<GradePair>&)>& visit) {
    std::vector<GradePair> tuple;
    std::function<void(GradePair, int)> rec = [&](GradePair left, int remaining) {
        if (remaining == 1) {
            tuple.push_back(left);
            visit(tuple);
            tuple.pop_back();
            return;
        }
        for (const auto& g : grades_up_to(left)) {
            tuple.push_back(g);
            rec({left.i - g.i, left.j - g.j}, remaining - 1);
            tuple.pop_back();
        }
    };
    rec(r, slots);
}

struct Vertex {
    int slots;
    GradePair own;
};

std::vector<Vertex> vertices_for(const GradePair& g, const ExpansionOptions& opts) {
    std::vector<Vertex> out;
    if ((g.i > 0 && !opts.quadratic) || (g.j > 0 && !opts.cubic)) return out;
    if (g.i >= 1) out.push_back({2, {1, 0}});
    if (g.j >= 1) out.push_back({3, {0, 1}});
    return out;
}

class TreeTable {
public:
    explicit TreeTable(ExpansionOptions opts) : opts_(opts) {}

    const std::vector<ExpansionTerm>& at(const GradePair& g) {
        auto it = memo_.find(g);
        if (it != memo_.end()) return it->second;
        std::vector<ExpansionTerm> terms;
        if (g.total() == 0) {
            terms.push_back({g, Integer(1), YTree{}});
        } else {
            std::map<std::string, std::size_t> index;
            for (const auto& v : vertices_for(g, opts_)) {
                GradePair rest{g.i - v.own.i, g.j - v.own.j};
                for_each_grade_tuple(rest, v.slots, [&](const std::vector<GradePair>& tuple) {
                    // Cartesian product over the trees available in each slot.
                    std::vector<const std::vector<ExpansionTerm>*> lists;
                    for (const auto& h : tuple) {
                        lists.push_back(&at(h));
                        if (lists.back()->empty()) return;
                    }
                    std::vector<std::size_t> pick(tuple.size(), 0);
                    for (;;) {
                        YTree t;
                        t.slots = v.slots;
                        Integer mult = 1;
                        for (std::size_t s = 0; s < tuple.size(); ++s) {
                            const ExpansionTerm& c = (*lists[s])[pick[s]];
                            t.children.push_back(c.tree);
                            mult *= c.multiplicity;
                        }
                        std::sort(t.children.begin(), t.children.end(), tree_before);
                        std::string k = t.key();
                        auto [pos, fresh] = index.try_emplace(k, terms.size());
                        if (fresh)
                            terms.push_back({g, mult, std::move(t)});
                        else
                            terms[pos->second].multiplicity += mult;
                        std::size_t s = tuple.size();
                        while (s > 0) {
                            --s;
                            if (++pick[s] < lists[s]->size()) break;
                            pick[s] = 0;
                            if (s == 0) return;
                        }
                    }
                });
            }
        }
        return memo_.emplace(g, std::move(terms)).first->second;
    }

private:
    ExpansionOptions opts_;
    std::map<GradePair, std::vector<ExpansionTerm>> memo_;
};

std::vector<GradePair> grades_in_order(int max_total_order) {
    std::vector<GradePair> out;
    for (int total = 1; total <= max_total_order; ++total)
        for (int i = total; i >= 0; --i) out.push_back({i, total - i});
    return out;
}

}  // namespace

std::vector<ExpansionTerm> consolidated_terms(GradePair grade, ExpansionOptions opts) {
    if (grade.i < 0 || grade.j < 0) throw std::invalid_argument("negative perturbation order");
    if (grade.total() == 0) return {};
    TreeTable table(opts);
    return table.at(grade);
}

std::vector<ExpansionTerm> expand_consolidated(int max_total_order, ExpansionOptions opts) {
    if (max_total_order < 0) throw std::invalid_argument("max_total_order must be nonnegative");
    TreeTable table(opts);
    std::vector<ExpansionTerm> out;
    for (const auto& g : grades_in_order(max_total_order)) {
        const auto& terms = table.at(g);
        out.insert(out.end(), terms.begin(), terms.end());
    }
    return out;
}

std::vector<EquationTerm> consolidated_equations(int max_total_order, ExpansionOptions opts) {
    if (max_total_order < 0) throw std::invalid_argument("max_total_order must be nonnegative");
    std::vector<EquationTerm> out;
    for (const auto& g : grades_in_order(max_total_order)) {
        for (const auto& v : vertices_for(g, opts)) {
            std::size_t first = out.size();
            GradePair rest{g.i - v.own.i, g.j - v.own.j};
            for_each_grade_tuple(rest, v.slots, [&](const std::vector<GradePair>& tuple) {
                // A grade is usable in a slot only if it can actually be built.
                for (const auto& h : tuple)
                    if ((h.i > 0 && !opts.quadratic) || (h.j > 0 && !opts.cubic)) return;
                std::vector<GradePair> sorted = tuple;
                std::sort(sorted.begin(), sorted.end(), grade_before);
                for (std::size_t k = first; k < out.size(); ++k)
                    if (out[k].children == sorted) {
                        out[k].coefficient += 1;
                        return;
                    }
                out.push_back({g, v.slots, sorted, Integer(1)});
            });
        }
    }
    return out;
}

std::string render_equation(GradePair grade, const std::vector<EquationTerm>& terms) {
    std::ostringstream os;
    os << grade.name() << " =";
    bool any = false;
    for (int slots : {2, 3}) {
        std::vector<const EquationTerm*> part;
        for (const auto& t : terms)
            if (t.grade == grade && t.slots == slots) part.push_back(&t);
        if (part.empty()) continue;
        os << (slots == 2 ? " - ε1 H ∫ [" : " - ε2 H ∫ [");
        for (std::size_t k = 0; k < part.size(); ++k) {
            if (k) os << " + ";
            if (part[k]->coefficient != 1) os << part[k]->coefficient.get_str() << " ";
            for (std::size_t c = 0; c < part[k]->children.size(); ++c) os << (c ? " " : "") << part[k]->children[c].name();
        }
        os << "] dμ" << slots;
        any = true;
    }
    if (!any) os << (grade.total() == 0 ? " H X" : " 0");
    return os.str();
}

TreeDiagram term_to_diagram(const ExpansionTerm& t) {
    TreeDiagram d;
    d.grade = t.grade;
    if (t.tree.slots == 0) return d;
    std::function<int(const YTree&, int)> place = [&](const YTree& node, int parent) {
        int v = static_cast<int>(d.valence.size());
        d.valence.push_back(node.slots + 1);
        d.solid_parent.push_back(parent);
        d.solid_frequencies.emplace_back();
        std::vector<int> freq;
        for (const auto& c : node.children) {
            if (c.slots == 0) {
                freq.push_back(static_cast<int>(d.dashed_target.size()));
                d.dashed_target.push_back(v);
            } else {
                int w = place(c, v);
                freq.insert(freq.end(), d.solid_frequencies[w].begin(), d.solid_frequencies[w].end());
            }
        }
        std::sort(freq.begin(), freq.end());
        d.solid_frequencies[v] = freq;
        return v;
    };
    place(t.tree, -1);
    auto problems = check_rules(d);
    if (!problems.empty()) throw DiagramError(t.grade.name() + " diagram breaks a rule: " + problems.front());
    return d;
}

std::vector<std::string> check_rules(const TreeDiagram& d) {
    std::vector<std::string> bad;
    if (d.empty()) return bad;
    const int nv = static_cast<int>(d.valence.size());
    const int nl = static_cast<int>(d.dashed_target.size());
    const int i = d.grade.i, j = d.grade.j;
    if (static_cast<int>(d.solid_parent.size()) != nv || static_cast<int>(d.solid_frequencies.size()) != nv) {
        bad.push_back("vertex arrays have inconsistent sizes");
        return bad;
    }
    for (int p : d.solid_parent)
        if (p < -1 || p >= nv) {
            bad.push_back("solid line points to a missing vertex");
            return bad;
        }
    for (int v : d.dashed_target)
        if (v < 0 || v >= nv) {
            bad.push_back("dashed leg points to a missing vertex");
            return bad;
        }

    // Rule 1: i trivalent and j tetravalent vertices, valence matching the lines.
    std::vector<int> degree(nv, 1);
    for (int v = 0; v < nv; ++v)
        if (d.solid_parent[v] >= 0) ++degree[d.solid_parent[v]];
    for (int v : d.dashed_target) ++degree[v];
    int n3 = 0, n4 = 0;
    for (int v = 0; v < nv; ++v) {
        if (degree[v] != d.valence[v]) bad.push_back("vertex " + std::to_string(v) + " has the wrong number of lines");
        if (d.valence[v] == 3) ++n3;
        else if (d.valence[v] == 4) ++n4;
        else bad.push_back("vertex " + std::to_string(v) + " is neither trivalent nor tetravalent");
    }
    if (n3 != i || n4 != j) bad.push_back("vertex counts do not match the order");

    // Rule 2: i+j vertices and i+j solid lines.
    if (nv != i + j) bad.push_back("expected " + std::to_string(i + j) + " vertices");

    // Rule 3: i+2j+1 dashed legs.
    if (nl != i + 2 * j + 1) bad.push_back("expected " + std::to_string(i + 2 * j + 1) + " dashed legs");

    // Rule 4: connected and acyclic, with the output as an extra node.
    std::vector<int> parent(nv + nl + 1);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    const int out_node = nv + nl;
    bool cycle = false;
    auto join = [&](int a, int b) {
        int ra = find(a), rb = find(b);
        if (ra == rb) cycle = true;
        parent[ra] = rb;
    };
    int roots = 0;
    for (int v = 0; v < nv; ++v) {
        if (d.solid_parent[v] < 0) ++roots;
        join(v, d.solid_parent[v] < 0 ? out_node : d.solid_parent[v]);
    }
    for (int l = 0; l < nl; ++l) join(nv + l, d.dashed_target[l]);
    bool connected = true;
    for (int x = 0; x <= out_node; ++x)
        if (find(x) != find(out_node)) connected = false;
    if (cycle || !connected || roots != 1) bad.push_back("diagram is not a single tree ending at the output");

    // Rule 5: each solid line carries the sum of the frequencies entering its vertex.
    if (bad.empty()) {
        std::vector<std::vector<int>> incoming(nv);
        for (int l = 0; l < nl; ++l) incoming[d.dashed_target[l]].push_back(l);
        for (int v = 0; v < nv; ++v)
            if (d.solid_parent[v] >= 0)
                incoming[d.solid_parent[v]].insert(incoming[d.solid_parent[v]].end(), d.solid_frequencies[v].begin(),
                                                   d.solid_frequencies[v].end());
        for (int v = 0; v < nv; ++v) {
            std::sort(incoming[v].begin(), incoming[v].end());
            if (incoming[v] != d.solid_frequencies[v])
                bad.push_back("frequency is not conserved at vertex " + std::to_string(v));
            if (d.solid_parent[v] < 0) {
                std::vector<int> all(nl);
                std::iota(all.begin(), all.end(), 0);
                if (d.solid_frequencies[v] != all) bad.push_back("output frequency is not the sum of all legs");
            }
        }
    }
    return bad;
}

std::string render_dot(const TreeDiagram& d, const std::string& name) {
    std::string title = name.empty() && !d.empty() ? d.grade.name() : name;
    std::ostringstream os;
    os << "digraph" << (title.empty() ? "" : " " + title) << " {\n";
    const int nv = static_cast<int>(d.valence.size());
    for (int v = 0; v < nv; ++v)
        os << "  v" << v << " [shape=point, width=0.15, color=" << (d.valence[v] == 3 ? "red" : "blue") << "];\n";
    for (int v = 0; v < nv; ++v) {
        os << "  v" << v << " -> ";
        if (d.solid_parent[v] < 0)
            os << "out";
        else
            os << "v" << d.solid_parent[v];
        os << " [label=\"";
        for (std::size_t k = 0; k < d.solid_frequencies[v].size(); ++k)
            os << (k ? "+" : "") << "w" << d.solid_frequencies[v][k] + 1;
        os << "\"];\n";
    }
    for (std::size_t l = 0; l < d.dashed_target.size(); ++l)
        os << "  l" << l << " -> v" << d.dashed_target[l] << " [style=dashed];\n";
    os << "}\n";
    return os.str();
}

}  // namespace fliess
