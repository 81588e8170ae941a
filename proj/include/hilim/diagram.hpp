#ifndef HILIM_DIAGRAM_HPP
#define HILIM_DIAGRAM_HPP

#include <optional>
#include <string>
#include <vector>

#include "hilim/complex.hpp"
#include "hilim/poset.hpp"
#include "hilim/rng.hpp"

namespace hilim {

/// A functor P^op -> R-Mod: a module dimension per element and, per cover
/// p < q, the restriction matrix F(p <= q): F(q) -> F(p), of shape
/// dim(p) x dim(q). Restrictions are indexed like poset.covers().
template <class Scalar>
struct ModuleDiagram {
    Poset poset;
    FieldSpec field;
    std::vector<Index> dim;
    std::vector<DenseMatrix<Scalar>> restriction;

    Index dim_of(int p) const { return dim[static_cast<std::size_t>(p)]; }
    const DenseMatrix<Scalar>& restriction_of(std::size_t cover) const {
        return restriction[cover];
    }
};

/// Composite restrictions F(q <= top): F(top) -> F(q) for every q <= top,
/// computed along cover paths (well-defined once the functor is validated).
template <class Scalar>
std::vector<std::optional<DenseMatrix<Scalar>>> composites_to(const ModuleDiagram<Scalar>& f,
                                                              int top) {
    std::vector<std::optional<DenseMatrix<Scalar>>> comp(
        static_cast<std::size_t>(f.poset.size()));
    comp[static_cast<std::size_t>(top)] = identity_matrix<Scalar>(f.dim_of(top));
    std::vector<int> order = f.poset.by_degree();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int q = *it;
        if (comp[static_cast<std::size_t>(q)] || !f.poset.less(q, top)) continue;
        for (std::size_t ci = 0; ci < f.poset.covers().size(); ++ci) {
            const Poset::Cover& c = f.poset.covers()[ci];
            if (c.lower != q || !f.poset.leq(c.upper, top)) continue;
            if (!comp[static_cast<std::size_t>(c.upper)]) continue;
            comp[static_cast<std::size_t>(q)] =
                compose<Scalar>(f.restriction[ci], *comp[static_cast<std::size_t>(c.upper)]);
            break;
        }
    }
    return comp;
}

/// Checks shapes and that every pair of cover-factorizations of F(p <= q)
/// yields the same composite.
template <class Scalar>
void validate_functor(const ModuleDiagram<Scalar>& f) {
    const Poset& p = f.poset;
    if (f.dim.size() != static_cast<std::size_t>(p.size()) ||
        f.restriction.size() != p.covers().size())
        throw InputError(InputError::Code::ShapeMismatch, "diagram size mismatch");
    for (std::size_t ci = 0; ci < p.covers().size(); ++ci) {
        const Poset::Cover& c = p.covers()[ci];
        if (f.restriction[ci].rows() != f.dim_of(c.lower) ||
            f.restriction[ci].cols() != f.dim_of(c.upper))
            throw InputError(InputError::Code::ShapeMismatch,
                             "restriction for cover (" + p.name(c.lower) + ", " +
                                 p.name(c.upper) + ") has wrong shape");
    }
    std::vector<int> order = p.by_degree();
    for (int top = 0; top < p.size(); ++top) {
        std::vector<std::optional<DenseMatrix<Scalar>>> comp(static_cast<std::size_t>(p.size()));
        std::vector<int> via(static_cast<std::size_t>(p.size()), -1);
        comp[static_cast<std::size_t>(top)] = identity_matrix<Scalar>(f.dim_of(top));
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            int q = *it;
            if (q == top || !p.less(q, top)) continue;
            for (std::size_t ci = 0; ci < p.covers().size(); ++ci) {
                const Poset::Cover& c = p.covers()[ci];
                if (c.lower != q || !p.leq(c.upper, top)) continue;
                DenseMatrix<Scalar> cand =
                    compose<Scalar>(f.restriction[ci], *comp[static_cast<std::size_t>(c.upper)]);
                if (!comp[static_cast<std::size_t>(q)]) {
                    comp[static_cast<std::size_t>(q)] = std::move(cand);
                    via[static_cast<std::size_t>(q)] = c.upper;
                } else if (!matrix_equal<Scalar>(cand, *comp[static_cast<std::size_t>(q)])) {
                    throw InputError(InputError::Code::NonCommutingSquare,
                                     "factorizations of F(" + p.name(q) + " <= " + p.name(top) +
                                         ") via " + p.name(via[static_cast<std::size_t>(q)]) +
                                         " and " + p.name(c.upper) + " disagree");
                }
            }
        }
    }
}

/// A functor P^op -> Ch(R): a cochain complex per element, a chain map
/// value(upper) -> value(lower) per cover.
template <class Scalar>
struct ComplexDiagram {
    Poset poset;
    FieldSpec field;
    std::vector<CochainComplex<Scalar>> value;
    std::vector<ChainMap<Scalar>> restriction;

    int max_height() const {
        int h = kHeightOfZero;
        for (const auto& v : value) h = std::max(h, v.height());
        return h;
    }

    /// Restriction to a lower set (given by original indices, in input
    /// order). Lower sets keep their covers verbatim.
    ComplexDiagram restrict_to_lower(const std::vector<int>& keep) const {
        std::vector<int> pos(static_cast<std::size_t>(poset.size()), -1);
        std::vector<std::string> names;
        for (int i = 0; i < static_cast<int>(keep.size()); ++i) {
            pos[static_cast<std::size_t>(keep[static_cast<std::size_t>(i)])] = i;
            names.push_back(poset.name(keep[static_cast<std::size_t>(i)]));
        }
        ComplexDiagram out;
        out.field = field;
        std::vector<Poset::Cover> cov;
        for (std::size_t ci = 0; ci < poset.covers().size(); ++ci) {
            const Poset::Cover& c = poset.covers()[ci];
            if (pos[static_cast<std::size_t>(c.lower)] < 0 ||
                pos[static_cast<std::size_t>(c.upper)] < 0)
                continue;
            cov.push_back({pos[static_cast<std::size_t>(c.lower)],
                           pos[static_cast<std::size_t>(c.upper)]});
            out.restriction.push_back(restriction[ci]);
        }
        out.poset = Poset::build_indexed(std::move(names), std::move(cov));
        for (int i : keep) out.value.push_back(value[static_cast<std::size_t>(i)]);
        return out;
    }
};

/// Views a module diagram as a diagram of degree-0 complexes.
template <class Scalar>
ComplexDiagram<Scalar> as_complex_diagram(const ModuleDiagram<Scalar>& f) {
    ComplexDiagram<Scalar> out;
    out.poset = f.poset;
    out.field = f.field;
    for (int p = 0; p < f.poset.size(); ++p)
        out.value.push_back(CochainComplex<Scalar>::concentrated(f.dim_of(p)));
    for (std::size_t ci = 0; ci < f.poset.covers().size(); ++ci) {
        const Poset::Cover& c = f.poset.covers()[ci];
        out.restriction.push_back(ChainMap<Scalar>(
            out.value[static_cast<std::size_t>(c.upper)],
            out.value[static_cast<std::size_t>(c.lower)], {f.restriction[ci]}));
    }
    return out;
}

/// The limit of a complex diagram, presented degreewise as the kernel of the
/// cover-compatibility map on the product of the values. The inclusion bases
/// are in reduced column echelon form, so the presentation is deterministic.
/// Compatibility over covers suffices: every relation in a finite poset
/// factors through covers and the diagram is functorial.
template <class Scalar>
struct LimitPresentation {
    CochainComplex<Scalar> limit;
    std::vector<KernelResult<Scalar>> basis;    // per degree: inclusion into the product
    std::vector<std::vector<Index>> offsets;    // per degree, per element: block start
    std::vector<ChainMap<Scalar>> projections;  // per element: limit -> value(q)
};

template <class Scalar>
LimitPresentation<Scalar> limit_over(const ComplexDiagram<Scalar>& d) {
    const Poset& poset = d.poset;
    const int n = poset.size();
    const int max_h = d.max_height();

    LimitPresentation<Scalar> out;
    std::vector<Index> limit_dims;
    for (int k = 0; k <= max_h; ++k) {
        std::vector<Index> off(static_cast<std::size_t>(n), 0);
        Index prod = 0;
        for (int q = 0; q < n; ++q) {
            off[static_cast<std::size_t>(q)] = prod;
            prod += d.value[static_cast<std::size_t>(q)].dim(k);
        }
        Index rows = 0;
        for (const Poset::Cover& c : poset.covers())
            rows += d.value[static_cast<std::size_t>(c.lower)].dim(k);
        DenseMatrix<Scalar> phi = zero_matrix<Scalar>(rows, prod);
        Index roff = 0;
        for (std::size_t ci = 0; ci < poset.covers().size(); ++ci) {
            const Poset::Cover& c = poset.covers()[ci];
            Index dlo = d.value[static_cast<std::size_t>(c.lower)].dim(k);
            Index dhi = d.value[static_cast<std::size_t>(c.upper)].dim(k);
            phi.block(roff, off[static_cast<std::size_t>(c.lower)], dlo, dlo) =
                identity_matrix<Scalar>(dlo);
            phi.block(roff, off[static_cast<std::size_t>(c.upper)], dlo, dhi) -=
                d.restriction[ci].component(k);
            roff += dlo;
        }
        out.basis.push_back(rank_and_kernel<Scalar>(phi));
        out.offsets.push_back(std::move(off));
        limit_dims.push_back(out.basis.back().kernel.cols());
    }

    // Induced differentials: the product differential must preserve the
    // kernel subspace; this is asserted, not assumed.
    std::vector<DenseMatrix<Scalar>> limit_diffs;
    for (int k = 0; k < max_h; ++k) {
        Index rows = 0;
        for (int q = 0; q < n; ++q) rows += d.value[static_cast<std::size_t>(q)].dim(k + 1);
        DenseMatrix<Scalar> dprod =
            zero_matrix<Scalar>(rows, out.basis[static_cast<std::size_t>(k)].kernel.rows());
        for (int q = 0; q < n; ++q) {
            const auto& v = d.value[static_cast<std::size_t>(q)];
            dprod.block(out.offsets[static_cast<std::size_t>(k + 1)][static_cast<std::size_t>(q)],
                        out.offsets[static_cast<std::size_t>(k)][static_cast<std::size_t>(q)],
                        v.dim(k + 1), v.dim(k)) = v.diff(k);
        }
        DenseMatrix<Scalar> image =
            compose<Scalar>(dprod, out.basis[static_cast<std::size_t>(k)].kernel);
        DenseMatrix<Scalar> coords;
        if (!coords_in_basis<Scalar>(out.basis[static_cast<std::size_t>(k + 1)], image, coords))
            throw InternalError(InternalError::Code::LimitNotPreserved,
                                "limit differential leaves the kernel subspace at degree " +
                                    std::to_string(k));
        limit_diffs.push_back(std::move(coords));
    }
    out.limit = CochainComplex<Scalar>(limit_dims, limit_diffs);

    for (int q = 0; q < n; ++q) {
        std::vector<DenseMatrix<Scalar>> comps;
        for (int k = 0; k <= max_h; ++k) {
            Index dq = d.value[static_cast<std::size_t>(q)].dim(k);
            comps.push_back(out.basis[static_cast<std::size_t>(k)].kernel.middleRows(
                out.offsets[static_cast<std::size_t>(k)][static_cast<std::size_t>(q)], dq));
        }
        out.projections.push_back(ChainMap<Scalar>(
            out.limit, d.value[static_cast<std::size_t>(q)], std::move(comps)));
    }
    return out;
}

/// dim lim F for a module diagram, computed directly as a kernel dimension.
template <class Scalar>
Index dim_lim(const ModuleDiagram<Scalar>& f) {
    return limit_over<Scalar>(as_complex_diagram<Scalar>(f)).limit.dim(0);
}

enum class ReplacementCase { Trivial, Truncated, Cocylinder };

inline const char* to_string(ReplacementCase c) {
    switch (c) {
        case ReplacementCase::Trivial: return "trivial";
        case ReplacementCase::Truncated: return "truncated";
        default: return "cocylinder";
    }
}

/// The inductively constructed fibrant replacement RF of a module diagram,
/// with its per-element certificates: the case chosen, the objectwise
/// quasi-iso F(p) -> RF(p), the degreewise-epi matching map
/// RF(p) -> lim_{P_<p} RF, and the limit presentation over each down-set.
template <class Scalar>
struct FibrantReplacement {
    ComplexDiagram<Scalar> rf;
    std::vector<ReplacementCase> cases;
    std::vector<ChainMap<Scalar>> comparison;
    std::vector<ChainMap<Scalar>> matching;
    std::vector<ChainMap<Scalar>> epsilon;            // matching o comparison
    std::vector<LimitPresentation<Scalar>> below;     // limit over P_{<p} of rf
    std::vector<std::vector<int>> below_elements;     // original indices of P_{<p}

    int max_rf_height() const { return rf.max_height(); }
};

namespace detail {

/// Module-level matching map F(p) -> lim_{P_<p} F expressed in the limit
/// basis; used by the local-fibrancy test.
template <class Scalar>
DenseMatrix<Scalar> module_matching(const ModuleDiagram<Scalar>& f, int p) {
    std::vector<int> sub = f.poset.below(p);
    ComplexDiagram<Scalar> cd = as_complex_diagram<Scalar>(f).restrict_to_lower(sub);
    LimitPresentation<Scalar> lim = limit_over<Scalar>(cd);
    auto comp = composites_to<Scalar>(f, p);
    Index prod = 0;
    for (int q : sub) prod += f.dim_of(q);
    DenseMatrix<Scalar> tuple = zero_matrix<Scalar>(prod, f.dim_of(p));
    Index roff = 0;
    for (int q : sub) {
        tuple.middleRows(roff, f.dim_of(q)) = *comp[static_cast<std::size_t>(q)];
        roff += f.dim_of(q);
    }
    DenseMatrix<Scalar> coords;
    if (lim.basis.empty()) return zero_matrix<Scalar>(0, f.dim_of(p));
    if (!coords_in_basis<Scalar>(lim.basis[0], tuple, coords))
        throw InternalError(InternalError::Code::NotInLimit,
                            "module matching tuple not in the limit at " + f.poset.name(p));
    return coords;
}

} // namespace detail

/// True iff the module-level matching map F(q) -> lim_{P_<q} F is an
/// epimorphism for every q <= p.
template <class Scalar>
bool is_locally_fibrant(const ModuleDiagram<Scalar>& f, int p) {
    for (int q = 0; q < f.poset.size(); ++q)
        if (f.poset.leq(q, p) && !is_epimorphism<Scalar>(detail::module_matching<Scalar>(f, q)))
            return false;
    return true;
}

template <class Scalar>
bool is_locally_fibrant(const ModuleDiagram<Scalar>& f, const std::string& p) {
    return is_locally_fibrant<Scalar>(f, f.poset.index_of(p));
}

/// The matching composite eps_p: F(p) -> lim_{P_<p} RF for a replacement
/// already defined on the whole down-set: x maps to the tuple
/// (comparison_q(F(q <= p)(x)))_q, expressed in the limit basis. Membership
/// in the limit subspace is asserted exactly.
template <class Scalar>
ChainMap<Scalar> matching_map(const ModuleDiagram<Scalar>& f, const FibrantReplacement<Scalar>& r,
                              int p, const LimitPresentation<Scalar>& lim,
                              const std::vector<int>& sub) {
    auto comp = composites_to<Scalar>(f, p);
    Index prod = 0;
    for (int q : sub) prod += r.rf.value[static_cast<std::size_t>(q)].dim(0);
    DenseMatrix<Scalar> tuple = zero_matrix<Scalar>(prod, f.dim_of(p));
    Index roff = 0;
    for (int q : sub) {
        Index dq = r.rf.value[static_cast<std::size_t>(q)].dim(0);
        tuple.middleRows(roff, dq) =
            compose<Scalar>(r.comparison[static_cast<std::size_t>(q)].component(0),
                            *comp[static_cast<std::size_t>(q)]);
        roff += dq;
    }
    CochainComplex<Scalar> src = CochainComplex<Scalar>::concentrated(f.dim_of(p));
    if (lim.basis.empty())
        return ChainMap<Scalar>(src, lim.limit, {});
    DenseMatrix<Scalar> coords;
    if (!coords_in_basis<Scalar>(lim.basis[0], tuple, coords))
        throw InternalError(InternalError::Code::NotInLimit,
                            "matching tuple not in the limit at " + f.poset.name(p));
    return ChainMap<Scalar>(src, lim.limit, {coords});
}

/// Convenience overload recomputing the down-set limit.
template <class Scalar>
ChainMap<Scalar> matching_map(const ModuleDiagram<Scalar>& f, const FibrantReplacement<Scalar>& r,
                              int p) {
    std::vector<int> sub = f.poset.below(p);
    LimitPresentation<Scalar> lim = limit_over<Scalar>(r.rf.restrict_to_lower(sub));
    return matching_map<Scalar>(f, r, p, lim, sub);
}

/// Builds the fibrant replacement, processing elements in nondecreasing
/// degree. At each p the case is Trivial if F is locally fibrant at p,
/// Truncated if eps_p is truncatable (restricted to degree(p) <= cutoff when
/// a cutoff is supplied), and Cocylinder otherwise.
template <class Scalar>
FibrantReplacement<Scalar> fibrant_replacement(const ModuleDiagram<Scalar>& f,
                                               std::optional<int> cutoff = std::nullopt) {
    validate_functor<Scalar>(f);
    const Poset& poset = f.poset;
    const int n = poset.size();

    // Local fibrancy memo: lf(p) = epi(p) and lf(x) for every cover x < p.
    std::vector<bool> epi_at(static_cast<std::size_t>(n), false);
    std::vector<bool> lf(static_cast<std::size_t>(n), false);
    for (int p : poset.by_degree()) {
        epi_at[static_cast<std::size_t>(p)] =
            is_epimorphism<Scalar>(detail::module_matching<Scalar>(f, p));
        bool below_ok = true;
        for (const Poset::Cover& c : poset.covers())
            if (c.upper == p && !lf[static_cast<std::size_t>(c.lower)]) below_ok = false;
        lf[static_cast<std::size_t>(p)] = epi_at[static_cast<std::size_t>(p)] && below_ok;
    }

    FibrantReplacement<Scalar> r;
    r.rf.poset = poset;
    r.rf.field = f.field;
    r.rf.value.resize(static_cast<std::size_t>(n));
    r.rf.restriction.resize(poset.covers().size());
    r.cases.resize(static_cast<std::size_t>(n));
    r.comparison.resize(static_cast<std::size_t>(n));
    r.matching.resize(static_cast<std::size_t>(n));
    r.epsilon.resize(static_cast<std::size_t>(n));
    r.below.resize(static_cast<std::size_t>(n));
    r.below_elements.resize(static_cast<std::size_t>(n));

    for (int p : poset.by_degree()) {
        std::vector<int> sub = poset.below(p);
        LimitPresentation<Scalar> lim = limit_over<Scalar>(r.rf.restrict_to_lower(sub));
        ChainMap<Scalar> eps = matching_map<Scalar>(f, r, p, lim, sub);

        ReplacementCase chosen;
        if (lf[static_cast<std::size_t>(p)]) {
            chosen = ReplacementCase::Trivial;
            r.rf.value[static_cast<std::size_t>(p)] = eps.source();
            r.comparison[static_cast<std::size_t>(p)] = ChainMap<Scalar>::identity(eps.source());
            r.matching[static_cast<std::size_t>(p)] = eps;
        } else {
            bool truncate = is_truncatable<Scalar>(eps) &&
                            (!cutoff.has_value() || poset.degree(p) <= *cutoff);
            chosen = truncate ? ReplacementCase::Truncated : ReplacementCase::Cocylinder;
            Factorization<Scalar> fact = truncate ? truncated_mapping_cocylinder<Scalar>(eps)
                                                  : mapping_cocylinder<Scalar>(eps);
            r.rf.value[static_cast<std::size_t>(p)] = fact.cocyl;
            r.comparison[static_cast<std::size_t>(p)] = fact.i;
            r.matching[static_cast<std::size_t>(p)] = fact.pi;
        }
        r.cases[static_cast<std::size_t>(p)] = chosen;
        r.epsilon[static_cast<std::size_t>(p)] = eps;
        if (!r.matching[static_cast<std::size_t>(p)].is_degreewise_epi())
            throw InternalError(InternalError::Code::FibrancyCertificate,
                                "matching map not epi at " + poset.name(p));

        // Restrictions of RF out of p: limit projection after the matching epi.
        std::vector<int> pos_in_sub(static_cast<std::size_t>(n), -1);
        for (int i = 0; i < static_cast<int>(sub.size()); ++i)
            pos_in_sub[static_cast<std::size_t>(sub[static_cast<std::size_t>(i)])] = i;
        for (std::size_t ci = 0; ci < poset.covers().size(); ++ci) {
            const Poset::Cover& c = poset.covers()[ci];
            if (c.upper != p) continue;
            int j = pos_in_sub[static_cast<std::size_t>(c.lower)];
            r.rf.restriction[ci] = compose<Scalar>(
                lim.projections[static_cast<std::size_t>(j)],
                r.matching[static_cast<std::size_t>(p)]);
        }
        r.below[static_cast<std::size_t>(p)] = std::move(lim);
        r.below_elements[static_cast<std::size_t>(p)] = std::move(sub);
    }
    return r;
}

/// Higher limits H^*(P; F) as cohomology of lim RF; with `at`, higher limits
/// of the restriction to the strict down-set P_{<at}.
template <class Scalar>
std::vector<Index> higher_limits(const FibrantReplacement<Scalar>& r,
                                 std::optional<int> at = std::nullopt) {
    if (at.has_value()) return cohomology_dims<Scalar>(r.below[static_cast<std::size_t>(*at)].limit);
    return cohomology_dims<Scalar>(limit_over<Scalar>(r.rf).limit);
}

template <class Scalar>
std::vector<Index> higher_limits(const ModuleDiagram<Scalar>& f,
                                 std::optional<int> at = std::nullopt,
                                 std::optional<int> cutoff = std::nullopt) {
    return higher_limits<Scalar>(fibrant_replacement<Scalar>(f, cutoff), at);
}

/// Parameters for the random instance generator.
struct RandomParams {
    int max_elements = 8;
    int max_dim = 3;
    FieldSpec field = FieldSpec::rationals();
    int atoms = -1;   // -1: pick uniformly in [0, max_dim]
};

/// A random module diagram: a layered DAG poset (edges deduplicated to
/// genuine covers) carrying a direct sum of upper- or lower-set indicator
/// functors, conjugated at every element by a random change of basis.
/// Functoriality holds by construction and is re-validated.
template <class Scalar>
ModuleDiagram<Scalar> random_instance(std::uint64_t seed, const RandomParams& params) {
    Rng rng(seed);
    const int n = static_cast<int>(rng.range(1, std::max(1, params.max_elements)));
    const int layers = static_cast<int>(rng.range(1, std::max(1, std::min(n, 5))));
    std::vector<int> layer(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) layer[static_cast<std::size_t>(i)] = static_cast<int>(rng.below(
        static_cast<std::uint64_t>(layers)));

    // Random edges upward between layers, then transitive reduction.
    std::vector<std::vector<bool>> rel(static_cast<std::size_t>(n),
                                       std::vector<bool>(static_cast<std::size_t>(n), false));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (layer[static_cast<std::size_t>(a)] >= layer[static_cast<std::size_t>(b)]) continue;
            int gap = layer[static_cast<std::size_t>(b)] - layer[static_cast<std::size_t>(a)];
            if (rng.chance(gap == 1 ? 45 : 15, 100)) rel[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = true;
        }
    // Close transitively, then keep only covers.
    for (int m = 0; m < n; ++m)
        for (int a = 0; a < n; ++a)
            if (rel[static_cast<std::size_t>(a)][static_cast<std::size_t>(m)])
                for (int b = 0; b < n; ++b)
                    if (rel[static_cast<std::size_t>(m)][static_cast<std::size_t>(b)])
                        rel[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = true;
    std::vector<std::pair<std::string, std::string>> covers;
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (!rel[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]) continue;
            bool covering = true;
            for (int m = 0; m < n && covering; ++m)
                if (rel[static_cast<std::size_t>(a)][static_cast<std::size_t>(m)] &&
                    rel[static_cast<std::size_t>(m)][static_cast<std::size_t>(b)])
                    covering = false;
            if (covering) covers.emplace_back(names[static_cast<std::size_t>(a)],
                                              names[static_cast<std::size_t>(b)]);
        }
    Poset poset = Poset::build(names, covers);

    // Atoms: indicators of random upper or lower sets.
    const int atoms = params.atoms >= 0
                          ? params.atoms
                          : static_cast<int>(rng.range(0, std::max(0, params.max_dim)));
    std::vector<std::vector<bool>> member(static_cast<std::size_t>(atoms),
                                          std::vector<bool>(static_cast<std::size_t>(n), false));
    for (int t = 0; t < atoms; ++t) {
        bool upper = rng.chance(1, 2);
        std::vector<bool> seeds(static_cast<std::size_t>(n), false);
        for (int i = 0; i < n; ++i) seeds[static_cast<std::size_t>(i)] = rng.chance(2, 5);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (seeds[static_cast<std::size_t>(j)] &&
                    (upper ? poset.leq(j, i) : poset.leq(i, j)))
                    member[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)] = true;
    }

    auto random_scalar = [&]() {
        if (params.field.kind == FieldSpec::Kind::Rationals)
            return FieldTraits<Scalar>::from_integer(params.field, rng.range(-3, 3));
        return FieldTraits<Scalar>::from_integer(params.field,
                                                 rng.range(0, params.field.p - 1));
    };

    ModuleDiagram<Scalar> f;
    f.poset = poset;
    f.field = params.field;
    std::vector<std::vector<int>> slots(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        for (int t = 0; t < atoms; ++t)
            if (member[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)])
                slots[static_cast<std::size_t>(i)].push_back(t);
        f.dim.push_back(static_cast<Index>(slots[static_cast<std::size_t>(i)].size()));
    }

    // Random invertible change of basis per element.
    std::vector<DenseMatrix<Scalar>> g(static_cast<std::size_t>(n)),
        ginv(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Index d = f.dim_of(i);
        DenseMatrix<Scalar> m;
        do {
            m = zero_matrix<Scalar>(d, d);
            for (Index r = 0; r < d; ++r)
                for (Index c = 0; c < d; ++c) m(r, c) = random_scalar();
        } while (rank<Scalar>(m) < d);
        // Invert by solving m * x = I via RREF of [m | I].
        DenseMatrix<Scalar> aug = zero_matrix<Scalar>(d, 2 * d);
        aug.block(0, 0, d, d) = m;
        aug.block(0, d, d, d) = identity_matrix<Scalar>(d);
        rref_in_place<Scalar>(aug);
        g[static_cast<std::size_t>(i)] = m;
        ginv[static_cast<std::size_t>(i)] = aug.block(0, d, d, d);
    }

    for (const Poset::Cover& c : poset.covers()) {
        const auto& lo = slots[static_cast<std::size_t>(c.lower)];
        const auto& hi = slots[static_cast<std::size_t>(c.upper)];
        DenseMatrix<Scalar> base =
            zero_matrix<Scalar>(static_cast<Index>(lo.size()), static_cast<Index>(hi.size()));
        for (std::size_t a = 0; a < lo.size(); ++a)
            for (std::size_t b = 0; b < hi.size(); ++b)
                if (lo[a] == hi[b])
                    base(static_cast<Index>(a), static_cast<Index>(b)) =
                        FieldTraits<Scalar>::from_integer(params.field, 1);
        f.restriction.push_back(compose<Scalar>(
            compose<Scalar>(g[static_cast<std::size_t>(c.lower)], base),
            ginv[static_cast<std::size_t>(c.upper)]));
    }
    validate_functor<Scalar>(f);
    return f;
}

} // namespace hilim

#endif
