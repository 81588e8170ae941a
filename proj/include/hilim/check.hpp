#ifndef HILIM_CHECK_HPP
#define HILIM_CHECK_HPP

#include <optional>
#include <string>
#include <vector>

#include "hilim/bounds.hpp"
#include "hilim/diagram.hpp"
#include "hilim/oracle.hpp"

namespace hilim {

/// One failed randomized trial: the seed to replay and what broke.
struct CheckFailure {
    std::uint64_t seed = 0;
    std::string what;
};

struct CheckSummary {
    int trials = 0;
    std::vector<CheckFailure> failures;
    bool ok() const { return failures.empty(); }
};

namespace detail {

inline void check_that(bool cond, const std::string& what) {
    if (!cond) throw InternalError(InternalError::Code::OracleDisagreement, what);
}

} // namespace detail

/// Verifies every spec invariant on one instance; throws on violation.
/// Covers: oracle agreement (whole poset and every strict down-set),
/// fibrancy and quasi-iso certificates, the three vanishing bounds, the
/// no-jump property, the inductive equivalences, and the cutoff variant.
template <class Scalar>
void verify_instance(const ModuleDiagram<Scalar>& f, std::uint64_t tree_seed = 1) {
    using detail::check_that;
    validate_functor<Scalar>(f);
    const Poset& poset = f.poset;
    FibrantReplacement<Scalar> r = fibrant_replacement<Scalar>(f);

    // Certificates. Matching epis and limit membership are asserted during
    // construction; re-check the observable halves here.
    Labelling lab = labelling(poset);
    for (int p = 0; p < poset.size(); ++p) {
        check_that(r.matching[static_cast<std::size_t>(p)].is_degreewise_epi(),
                   "matching map not epi at " + poset.name(p));
        check_that(is_quasi_iso<Scalar>(r.comparison[static_cast<std::size_t>(p)]),
                   "comparison map not a quasi-iso at " + poset.name(p));
        std::vector<Index> expect;
        if (f.dim_of(p) > 0) expect.push_back(f.dim_of(p));
        check_that(cohomology_dims<Scalar>(r.rf.value[static_cast<std::size_t>(p)]) == expect,
                   "rf(p) has wrong cohomology at " + poset.name(p));
        int h = r.rf.value[static_cast<std::size_t>(p)].height();
        check_that(h <= poset.degree(p),
                   "height(rf(p)) exceeds degree at " + poset.name(p));
        check_that(h <= lab.label[static_cast<std::size_t>(p)],
                   "height(rf(p)) exceeds B(p) at " + poset.name(p));
    }

    // Oracle agreement, whole poset and every strict down-set.
    std::vector<Index> h = higher_limits<Scalar>(r);
    check_that(h == oracle_higher_limits<Scalar>(f), "backends disagree on the whole poset");
    std::vector<std::vector<Index>> below;
    for (int p = 0; p < poset.size(); ++p) {
        below.push_back(higher_limits<Scalar>(r, p));
        check_that(below.back() == oracle_higher_limits<Scalar>(f, p),
                   "backends disagree below " + poset.name(p));
    }

    // Vanishing bounds. h is trimmed, so its top index is the top nonzero
    // degree.
    const int len = poset.length().value_or(0);
    TreeDecomposition tree = maximal_tree_sampled(poset, tree_seed, 8);
    int top = static_cast<int>(h.size()) - 1;
    check_that(top <= lab.sup_label, "nonzero higher limit above sup B");
    check_that(top <= len, "nonzero higher limit above length");
    check_that(top <= tree.bound(), "nonzero higher limit above the tree bound");
    check_that(lab.sup_label <= tree.bound(), "sup B exceeds 2#D+1");

    // No-jump: every height between 0 and the realized maximum is attained.
    int m = r.max_rf_height();
    if (poset.size() > 0 && m >= 0) {
        std::vector<bool> attained(static_cast<std::size_t>(m) + 1, false);
        for (int p = 0; p < poset.size(); ++p) {
            int hp = r.rf.value[static_cast<std::size_t>(p)].height();
            if (hp >= 0) attained[static_cast<std::size_t>(hp)] = true;
        }
        for (int k = 0; k <= m; ++k)
            check_that(attained[static_cast<std::size_t>(k)],
                       "no-jump violated: no element of height " + std::to_string(k));
    }

    // Inductive equivalences for every n up to length + 1. inductive_check
    // itself throws if the three conditions disagree.
    InductiveContext<Scalar> ctx;
    ctx.below_limits = below;
    ctx.rf_height = std::max(0, m);
    for (int n = 1; n <= len + 1; ++n) {
        InductiveReport rep = inductive_check<Scalar>(f, n, ctx);
        if (rep.holds)
            for (int k = n + 1; k < static_cast<int>(h.size()); ++k)
                check_that(h[static_cast<std::size_t>(k)] == 0,
                           "nonzero higher limit above n = " + std::to_string(n));
    }

    // Cutoff variant: with the least n making the hypothesis hold for each m,
    // the modified replacement stays within n + length - m.
    for (int cm = 0; cm <= len; ++cm) {
        int n = 1;
        for (int p = 0; p < poset.size(); ++p)
            if (poset.degree(p) <= cm)
                n = std::max(n, static_cast<int>(below[static_cast<std::size_t>(p)].size()));
        FibrantReplacement<Scalar> rc = fibrant_replacement<Scalar>(f, cm);
        check_that(std::max(0, rc.max_rf_height()) <= n + len - cm,
                   "cutoff replacement too tall at m = " + std::to_string(cm));
        check_that(higher_limits<Scalar>(rc) == h,
                   "cutoff replacement changes higher limits at m = " + std::to_string(cm));
    }
}

/// Runs `trials` randomized instances (seeds seed, seed+1, ...) through
/// verify_instance; failures are collected, not thrown.
template <class Scalar>
CheckSummary run_checks(int trials, std::uint64_t seed, const RandomParams& params) {
    CheckSummary out;
    out.trials = trials;
    for (int t = 0; t < trials; ++t) {
        std::uint64_t s = seed + static_cast<std::uint64_t>(t);
        try {
            verify_instance<Scalar>(random_instance<Scalar>(s, params), s);
        } catch (const Error& e) {
            out.failures.push_back({s, e.what()});
        }
    }
    return out;
}

} // namespace hilim

#endif
