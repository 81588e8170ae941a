#ifndef HILIM_BOUNDS_HPP
#define HILIM_BOUNDS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hilim/diagram.hpp"
#include "hilim/oracle.hpp"

namespace hilim {

/// The three vanishing bounds, as guarantees about vanishing degrees:
/// H^k(P; F) = 0 for k > sup_B, for k > max_degree, and for k > tree_bound.
struct BoundsReport {
    int sup_b = 0;
    int max_degree = 0;
    int tree_bound = 1;                       // 2 #D + 1, minimized over sampled trees
    TreeDecomposition tree;
    std::optional<int> realized_height;       // h(RF), when a functor is supplied
    std::map<std::string, int> per_element_heights;
};

template <class Scalar>
BoundsReport vanishing_bounds(const Poset& p, const ModuleDiagram<Scalar>* f,
                              int tree_trials = 0, std::uint64_t tree_seed = 1) {
    BoundsReport out;
    out.sup_b = labelling(p).sup_label;
    out.max_degree = p.length().value_or(0);
    out.tree = tree_trials > 0 ? maximal_tree_sampled(p, tree_seed, tree_trials)
                               : maximal_tree(p);
    out.tree_bound = out.tree.bound();
    if (f) {
        FibrantReplacement<Scalar> r = fibrant_replacement<Scalar>(*f);
        out.realized_height = std::max(0, r.max_rf_height());
        for (int q = 0; q < p.size(); ++q)
            out.per_element_heights[p.name(q)] =
                r.rf.value[static_cast<std::size_t>(q)].height();
    }
    return out;
}

inline BoundsReport vanishing_bounds(const Poset& p, int tree_trials = 0,
                                     std::uint64_t tree_seed = 1) {
    return vanishing_bounds<Rational>(p, nullptr, tree_trials, tree_seed);
}

/// Shared work for the inductive-equivalence checker: higher limits over
/// every strict down-set plus the replacement height, computed once.
template <class Scalar>
struct InductiveContext {
    std::vector<std::vector<Index>> below_limits;   // per element
    int rf_height = 0;

    static InductiveContext compute(const ModuleDiagram<Scalar>& f, bool cross_check_oracle) {
        FibrantReplacement<Scalar> r = fibrant_replacement<Scalar>(f);
        InductiveContext out;
        out.rf_height = std::max(0, r.max_rf_height());
        for (int p = 0; p < f.poset.size(); ++p) {
            std::vector<Index> h = higher_limits<Scalar>(r, p);
            if (cross_check_oracle && h != oracle_higher_limits<Scalar>(f, p))
                throw InternalError(InternalError::Code::OracleDisagreement,
                                    "down-set higher limits disagree with the oracle at " +
                                        f.poset.name(p));
            out.below_limits.push_back(std::move(h));
        }
        return out;
    }
};

/// Result of the three-way equivalence check for a given n:
///  (1) H^k(P_{<p}; F) = 0 for all p and all k >= n,
///  (2) H^n(P_{<p}; F) = 0 for all p,
///  (3) h(RF) <= n.
/// The three are equivalent; disagreement indicates an implementation bug.
struct InductiveReport {
    bool holds = false;
    bool cond_all_degrees = false;
    bool cond_degree_n = false;
    bool cond_height = false;
    std::vector<std::string> witnesses;   // elements violating (1)/(2)
};

template <class Scalar>
InductiveReport inductive_check(const ModuleDiagram<Scalar>& f, int n,
                                const InductiveContext<Scalar>& ctx) {
    if (n < 1)
        throw InputError(InputError::Code::ParseError, "inductive check needs n >= 1");
    InductiveReport out;
    out.cond_all_degrees = true;
    out.cond_degree_n = true;
    for (int p = 0; p < f.poset.size(); ++p) {
        const auto& h = ctx.below_limits[static_cast<std::size_t>(p)];
        bool bad_any = false;
        for (int k = n; k < static_cast<int>(h.size()); ++k)
            if (h[static_cast<std::size_t>(k)] != 0) bad_any = true;
        bool bad_n = n < static_cast<int>(h.size()) && h[static_cast<std::size_t>(n)] != 0;
        if (bad_any || bad_n) out.witnesses.push_back(f.poset.name(p));
        out.cond_all_degrees = out.cond_all_degrees && !bad_any;
        out.cond_degree_n = out.cond_degree_n && !bad_n;
    }
    out.cond_height = ctx.rf_height <= n;
    if (out.cond_all_degrees != out.cond_degree_n || out.cond_degree_n != out.cond_height)
        throw InternalError(InternalError::Code::EquivalenceViolated,
                            "inductive equivalence violated at n = " + std::to_string(n));
    out.holds = out.cond_height;
    return out;
}

template <class Scalar>
InductiveReport inductive_check(const ModuleDiagram<Scalar>& f, int n,
                                bool cross_check_oracle = false) {
    return inductive_check<Scalar>(f, n, InductiveContext<Scalar>::compute(f, cross_check_oracle));
}

} // namespace hilim

#endif
