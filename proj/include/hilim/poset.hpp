#ifndef HILIM_POSET_HPP
#define HILIM_POSET_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hilim/errors.hpp"
#include "hilim/rng.hpp"

namespace hilim {

/// A finite filtered poset given by its Hasse diagram.
///
/// Elements keep their input order; covers are stored as (lower, upper) index
/// pairs. Degrees are always recomputed as longest chain lengths, so the
/// filtration is canonical. Values are immutable after construction.
class Poset {
public:
    struct Cover {
        int lower;
        int upper;
        bool operator==(const Cover&) const = default;
    };

    /// Builds and validates a poset. Throws if identifiers are duplicated,
    /// a cover endpoint is unknown, the cover graph has a directed cycle, or
    /// a listed pair is implied transitively by the others (not a cover).
    static Poset build(const std::vector<std::string>& elements,
                       const std::vector<std::pair<std::string, std::string>>& covers) {
        Poset p;
        p.elements_ = elements;
        for (int i = 0; i < static_cast<int>(elements.size()); ++i) {
            if (!p.index_.emplace(elements[static_cast<std::size_t>(i)], i).second)
                throw InputError(InputError::Code::DuplicateElement,
                                 "duplicate element: " + elements[static_cast<std::size_t>(i)]);
        }
        for (const auto& [lo, hi] : covers)
            p.covers_.push_back({p.index_of(lo), p.index_of(hi)});
        p.finish();
        return p;
    }

    /// Same, but from index pairs already known to reference valid elements.
    static Poset build_indexed(std::vector<std::string> elements, std::vector<Cover> covers) {
        Poset p;
        p.elements_ = std::move(elements);
        for (int i = 0; i < p.size(); ++i) {
            if (!p.index_.emplace(p.elements_[static_cast<std::size_t>(i)], i).second)
                throw InputError(InputError::Code::DuplicateElement,
                                 "duplicate element: " + p.elements_[static_cast<std::size_t>(i)]);
        }
        p.covers_ = std::move(covers);
        p.finish();
        return p;
    }

    int size() const { return static_cast<int>(elements_.size()); }
    const std::vector<std::string>& elements() const { return elements_; }
    const std::string& name(int i) const { return elements_[static_cast<std::size_t>(i)]; }
    const std::vector<Cover>& covers() const { return covers_; }

    int index_of(const std::string& id) const {
        auto it = index_.find(id);
        if (it == index_.end())
            throw InputError(InputError::Code::UnknownElement, "unknown element: " + id);
        return it->second;
    }
    bool contains(const std::string& id) const { return index_.count(id) != 0; }

    bool leq(int a, int b) const { return leq_[idx(a, b)]; }
    bool less(int a, int b) const { return a != b && leq(a, b); }
    int degree(int a) const { return degree_[static_cast<std::size_t>(a)]; }

    /// length() is the maximum degree; empty poset has none.
    std::optional<int> length() const {
        if (elements_.empty()) return std::nullopt;
        return *std::max_element(degree_.begin(), degree_.end());
    }

    /// Elements sorted by (degree, input order) — the construction order used
    /// by every inductive procedure in this library.
    std::vector<int> by_degree() const {
        std::vector<int> order(static_cast<std::size_t>(size()));
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return degree(a) < degree(b); });
        return order;
    }

    /// The strict down-set P_{<p} as an induced subposet. Down-sets are lower
    /// sets, so induced covers are exactly the covers with both ends inside.
    Poset strict_down_set(int p) const {
        std::vector<int> keep;
        for (int q = 0; q < size(); ++q)
            if (less(q, p)) keep.push_back(q);
        return induced_lower(keep);
    }
    Poset strict_down_set(const std::string& id) const { return strict_down_set(index_of(id)); }

    /// Members of P_{<p}, in input order.
    std::vector<int> below(int p) const {
        std::vector<int> keep;
        for (int q = 0; q < size(); ++q)
            if (less(q, p)) keep.push_back(q);
        return keep;
    }

    /// Induced subposet on an arbitrary subset; covers are recomputed from
    /// the restricted order relation.
    Poset induced(const std::vector<int>& subset) const {
        std::vector<std::string> names;
        names.reserve(subset.size());
        for (int i : subset) names.push_back(name(i));
        std::vector<Cover> cov;
        const int n = static_cast<int>(subset.size());
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                if (!less(subset[static_cast<std::size_t>(a)], subset[static_cast<std::size_t>(b)]))
                    continue;
                bool covering = true;
                for (int c = 0; c < n && covering; ++c)
                    if (less(subset[static_cast<std::size_t>(a)], subset[static_cast<std::size_t>(c)]) &&
                        less(subset[static_cast<std::size_t>(c)], subset[static_cast<std::size_t>(b)]))
                        covering = false;
                if (covering) cov.push_back({a, b});
            }
        }
        Poset out;
        out.elements_ = std::move(names);
        for (int i = 0; i < out.size(); ++i) out.index_.emplace(out.elements_[static_cast<std::size_t>(i)], i);
        out.covers_ = std::move(cov);
        out.finish();
        return out;
    }

    /// True iff the undirected Hasse graph is acyclic.
    bool is_filtered_tree() const {
        return static_cast<int>(covers_.size()) == size() - undirected_components();
    }

    int undirected_components() const {
        UnionFind uf(size());
        for (const Cover& c : covers_) uf.unite(c.lower, c.upper);
        return uf.components();
    }

    /// Whether p closes a circuit in S: some connected component of the
    /// induced subposet on S has at least two maximal elements. Connectivity
    /// is taken in the comparability graph of S, which coincides with the
    /// connectivity of its own Hasse diagram.
    bool closes_circuit(int p, const std::vector<int>& s) const {
        for (int q : s)
            if (!less(q, p))
                throw InputError(InputError::Code::SNotBelowP,
                                 "element " + name(q) + " is not below " + name(p));
        const int n = static_cast<int>(s.size());
        UnionFind uf(n);
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                if (leq(s[static_cast<std::size_t>(a)], s[static_cast<std::size_t>(b)]) ||
                    leq(s[static_cast<std::size_t>(b)], s[static_cast<std::size_t>(a)]))
                    uf.unite(a, b);
        std::map<int, int> maximal_count;
        for (int a = 0; a < n; ++a) {
            bool maximal = true;
            for (int b = 0; b < n && maximal; ++b)
                if (less(s[static_cast<std::size_t>(a)], s[static_cast<std::size_t>(b)])) maximal = false;
            if (maximal && ++maximal_count[uf.find(a)] >= 2) return true;
        }
        return false;
    }

    bool closes_circuit(const std::string& p, const std::vector<std::string>& s) const {
        std::vector<int> idxs;
        idxs.reserve(s.size());
        for (const auto& id : s) idxs.push_back(index_of(id));
        return closes_circuit(index_of(p), idxs);
    }

private:
    struct UnionFind {
        explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
            std::iota(parent.begin(), parent.end(), 0);
        }
        int find(int x) {
            while (parent[static_cast<std::size_t>(x)] != x) {
                parent[static_cast<std::size_t>(x)] =
                    parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
                x = parent[static_cast<std::size_t>(x)];
            }
            return x;
        }
        bool unite(int a, int b) {
            a = find(a);
            b = find(b);
            if (a == b) return false;
            parent[static_cast<std::size_t>(a)] = b;
            return true;
        }
        int components() {
            int c = 0;
            for (int i = 0; i < static_cast<int>(parent.size()); ++i)
                if (find(i) == i) ++c;
            return c;
        }
        std::vector<int> parent;
    };

    std::size_t idx(int a, int b) const {
        return static_cast<std::size_t>(a) * static_cast<std::size_t>(size()) +
               static_cast<std::size_t>(b);
    }

    // Lower sets inherit their covers verbatim.
    Poset induced_lower(const std::vector<int>& keep) const {
        std::vector<int> pos(static_cast<std::size_t>(size()), -1);
        std::vector<std::string> names;
        for (int i = 0; i < static_cast<int>(keep.size()); ++i) {
            pos[static_cast<std::size_t>(keep[static_cast<std::size_t>(i)])] = i;
            names.push_back(name(keep[static_cast<std::size_t>(i)]));
        }
        std::vector<Cover> cov;
        for (const Cover& c : covers_)
            if (pos[static_cast<std::size_t>(c.lower)] >= 0 && pos[static_cast<std::size_t>(c.upper)] >= 0)
                cov.push_back({pos[static_cast<std::size_t>(c.lower)], pos[static_cast<std::size_t>(c.upper)]});
        Poset out;
        out.elements_ = std::move(names);
        for (int i = 0; i < out.size(); ++i) out.index_.emplace(out.elements_[static_cast<std::size_t>(i)], i);
        out.covers_ = std::move(cov);
        out.finish();
        return out;
    }

    void finish() {
        const int n = size();
        // Reachability closure of the cover graph, plus cycle detection via
        // topological order.
        std::vector<std::vector<int>> up(static_cast<std::size_t>(n));
        std::vector<int> indeg(static_cast<std::size_t>(n), 0);
        for (const Cover& c : covers_) {
            up[static_cast<std::size_t>(c.lower)].push_back(c.upper);
            ++indeg[static_cast<std::size_t>(c.upper)];
        }
        std::vector<int> topo;
        std::vector<int> stack;
        for (int i = 0; i < n; ++i)
            if (indeg[static_cast<std::size_t>(i)] == 0) stack.push_back(i);
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            topo.push_back(v);
            for (int w : up[static_cast<std::size_t>(v)])
                if (--indeg[static_cast<std::size_t>(w)] == 0) stack.push_back(w);
        }
        if (static_cast<int>(topo.size()) != n)
            throw InputError(InputError::Code::CycleDetected, "covers contain a directed cycle");

        leq_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), false);
        for (int i = 0; i < n; ++i) leq_[idx(i, i)] = true;
        for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
            int v = *it;
            for (int w : up[static_cast<std::size_t>(v)])
                for (int t = 0; t < n; ++t)
                    if (leq_[idx(w, t)]) leq_[idx(v, t)] = true;
        }

        // Each listed pair must be a genuine cover.
        for (const Cover& c : covers_) {
            if (c.lower == c.upper)
                throw InputError(InputError::Code::NotACover,
                                 "reflexive pair on " + name(c.lower));
            for (int r = 0; r < n; ++r)
                if (r != c.lower && r != c.upper && leq_[idx(c.lower, r)] && leq_[idx(r, c.upper)])
                    throw InputError(InputError::Code::NotACover,
                                     "(" + name(c.lower) + ", " + name(c.upper) +
                                         ") is implied transitively via " + name(r));
        }
        // Duplicate covers collapse the above check, reject them explicitly.
        std::set<std::pair<int, int>> seen;
        for (const Cover& c : covers_)
            if (!seen.emplace(c.lower, c.upper).second)
                throw InputError(InputError::Code::NotACover,
                                 "duplicate cover (" + name(c.lower) + ", " + name(c.upper) + ")");

        // Longest-path degrees over the DAG.
        degree_.assign(static_cast<std::size_t>(n), 0);
        for (int v : topo)
            for (int w : up[static_cast<std::size_t>(v)])
                degree_[static_cast<std::size_t>(w)] =
                    std::max(degree_[static_cast<std::size_t>(w)], degree_[static_cast<std::size_t>(v)] + 1);
    }

    std::vector<std::string> elements_;
    std::map<std::string, int> index_;
    std::vector<Cover> covers_;
    std::vector<bool> leq_;
    std::vector<int> degree_;
};

/// A maximal tree T of the Hasse graph together with D(P, T).
struct TreeDecomposition {
    std::vector<Poset::Cover> tree_covers;
    std::vector<Poset::Cover> removed_covers;
    std::set<int> degree_set;   // degrees of upper endpoints of removed covers

    int bound() const { return 2 * static_cast<int>(degree_set.size()) + 1; }
};

namespace detail {

inline TreeDecomposition scan_tree(const Poset& p, const std::vector<std::size_t>& order) {
    struct UF {
        explicit UF(int n) : parent(static_cast<std::size_t>(n)) {
            std::iota(parent.begin(), parent.end(), 0);
        }
        int find(int x) {
            while (parent[static_cast<std::size_t>(x)] != x)
                x = parent[static_cast<std::size_t>(x)] =
                        parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            return x;
        }
        bool unite(int a, int b) {
            a = find(a);
            b = find(b);
            if (a == b) return false;
            parent[static_cast<std::size_t>(a)] = b;
            return true;
        }
        std::vector<int> parent;
    } uf(p.size());
    TreeDecomposition out;
    for (std::size_t i : order) {
        const Poset::Cover& c = p.covers()[i];
        if (uf.unite(c.lower, c.upper)) {
            out.tree_covers.push_back(c);
        } else {
            out.removed_covers.push_back(c);
            out.degree_set.insert(p.degree(c.upper));
        }
    }
    return out;
}

} // namespace detail

/// Deterministic maximal tree: scan covers by (degree of upper endpoint,
/// input order) and keep each cover that joins two forest components.
inline TreeDecomposition maximal_tree(const Poset& p) {
    std::vector<std::size_t> order(p.covers().size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return p.degree(p.covers()[a].upper) < p.degree(p.covers()[b].upper);
    });
    return detail::scan_tree(p, order);
}

/// Sampled maximal tree: permute the scan order `trials` times and keep the
/// decomposition with the smallest D(P, T). Every spanning forest removes the
/// same number of covers, so #degree_set is the only thing to optimize.
inline TreeDecomposition maximal_tree_sampled(const Poset& p, std::uint64_t seed, int trials) {
    TreeDecomposition best = maximal_tree(p);
    Rng rng(seed);
    std::vector<std::size_t> order(p.covers().size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (int t = 0; t < trials; ++t) {
        rng.shuffle(order);
        TreeDecomposition cand = detail::scan_tree(p, order);
        if (cand.degree_set.size() < best.degree_set.size()) best = std::move(cand);
    }
    return best;
}

/// The labelling function B and its supremum.
struct Labelling {
    std::vector<int> label;   // by element index
    int sup_label = 0;        // 0 for the empty poset
};

/// B(p) = degree(p) for degrees 0 and 1; otherwise with m = max_{q<p} B(q)
/// and B_p = { s < p | m-1 <= B(s) <= m }, B(p) = m+1 if p closes a circuit
/// in B_p, else m. Processed in nondecreasing degree.
inline Labelling labelling(const Poset& p) {
    Labelling out;
    out.label.assign(static_cast<std::size_t>(p.size()), 0);
    for (int e : p.by_degree()) {
        if (p.degree(e) <= 1) {
            out.label[static_cast<std::size_t>(e)] = p.degree(e);
        } else {
            int m = 0;
            for (int q : p.below(e)) m = std::max(m, out.label[static_cast<std::size_t>(q)]);
            std::vector<int> bp;
            for (int q : p.below(e))
                if (out.label[static_cast<std::size_t>(q)] >= m - 1 &&
                    out.label[static_cast<std::size_t>(q)] <= m)
                    bp.push_back(q);
            out.label[static_cast<std::size_t>(e)] = p.closes_circuit(e, bp) ? m + 1 : m;
        }
        out.sup_label = std::max(out.sup_label, out.label[static_cast<std::size_t>(e)]);
    }
    return out;
}

/// Hasse diagram in DOT format. Nodes show the degree and, when a labelling
/// is given, the label B; covers removed by the tree decomposition are dashed.
inline std::string to_dot(const Poset& p, const Labelling* lab = nullptr,
                          const TreeDecomposition* tree = nullptr) {
    std::ostringstream os;
    os << "digraph hasse {\n  rankdir=BT;\n";
    for (int i = 0; i < p.size(); ++i) {
        os << "  \"" << p.name(i) << "\" [label=\"" << p.name(i) << " (d=" << p.degree(i);
        if (lab) os << ", B=" << lab->label[static_cast<std::size_t>(i)];
        os << ")\"];\n";
    }
    std::set<std::pair<int, int>> removed;
    if (tree)
        for (const Poset::Cover& c : tree->removed_covers) removed.emplace(c.lower, c.upper);
    for (const Poset::Cover& c : p.covers()) {
        os << "  \"" << p.name(c.lower) << "\" -> \"" << p.name(c.upper) << "\"";
        if (removed.count({c.lower, c.upper})) os << " [style=dashed]";
        os << ";\n";
    }
    os << "}\n";
    return os.str();
}

} // namespace hilim

#endif
