#ifndef HILIM_ORACLE_HPP
#define HILIM_ORACLE_HPP

#include <map>
#include <optional>
#include <vector>

#include "hilim/diagram.hpp"

namespace hilim {

/// Per degree n, the strict chains p_0 < p_1 < ... < p_n, lexicographic in
/// element order. Degree-0 chains enumerate the elements.
struct ChainBasis {
    std::vector<std::vector<std::vector<int>>> chains;   // [degree][chain][position]

    static ChainBasis enumerate(const Poset& p) {
        ChainBasis out;
        std::vector<std::vector<int>> current;
        for (int i = 0; i < p.size(); ++i) current.push_back({i});
        while (!current.empty()) {
            out.chains.push_back(current);
            std::vector<std::vector<int>> next;
            for (const auto& chain : current)
                for (int q = 0; q < p.size(); ++q)
                    if (p.less(chain.back(), q)) {
                        next.push_back(chain);
                        next.back().push_back(q);
                    }
            current = std::move(next);
        }
        return out;
    }
};

/// The classical cochain complex of the order complex computing H^*(P; F):
/// C^n is the direct sum over strict n-chains of F(p_0), with coboundary
/// (d phi)(p_0 < ... < p_{n+1}) = F(p_0 <= p_1)(phi(p_1 < ... < p_{n+1}))
///                               + sum_{i>=1} (-1)^i phi(chain with p_i omitted).
/// Only nondegenerate chains appear (the normalized complex).
template <class Scalar>
CochainComplex<Scalar> order_cochain(const ModuleDiagram<Scalar>& f) {
    const Poset& p = f.poset;
    ChainBasis basis = ChainBasis::enumerate(p);
    const int top = static_cast<int>(basis.chains.size()) - 1;

    // Composite restrictions for the face-0 term.
    std::vector<std::vector<std::optional<DenseMatrix<Scalar>>>> comp(
        static_cast<std::size_t>(p.size()));
    for (int q = 0; q < p.size(); ++q) comp[static_cast<std::size_t>(q)] = composites_to<Scalar>(f, q);

    auto degree_dims = [&](int n) {
        std::vector<Index> offs;
        Index total = 0;
        if (n >= 0 && n <= top)
            for (const auto& chain : basis.chains[static_cast<std::size_t>(n)]) {
                offs.push_back(total);
                total += f.dim_of(chain.front());
            }
        offs.push_back(total);
        return offs;
    };

    std::vector<Index> dims;
    for (int n = 0; n <= top; ++n) dims.push_back(degree_dims(n).back());

    std::vector<DenseMatrix<Scalar>> diffs;
    for (int n = 0; n < top; ++n) {
        const auto& rows_chains = basis.chains[static_cast<std::size_t>(n + 1)];
        const auto& cols_chains = basis.chains[static_cast<std::size_t>(n)];
        std::vector<Index> roff = degree_dims(n + 1);
        std::vector<Index> coff = degree_dims(n);
        // Locate a degree-n chain by content.
        std::map<std::vector<int>, std::size_t> where;
        for (std::size_t j = 0; j < cols_chains.size(); ++j) where[cols_chains[j]] = j;

        DenseMatrix<Scalar> d = zero_matrix<Scalar>(roff.back(), coff.back());
        for (std::size_t r = 0; r < rows_chains.size(); ++r) {
            const std::vector<int>& chain = rows_chains[r];
            Index dim0 = f.dim_of(chain.front());
            {
                // Face 0 applies the restriction F(p_0 <= p_1).
                std::vector<int> face(chain.begin() + 1, chain.end());
                std::size_t j = where.at(face);
                d.block(roff[r], coff[j], dim0, f.dim_of(face.front())) +=
                    *comp[static_cast<std::size_t>(chain[1])][static_cast<std::size_t>(chain[0])];
            }
            Scalar sign = Scalar(1);
            for (std::size_t i = 1; i < chain.size(); ++i) {
                sign = -sign;
                std::vector<int> face;
                for (std::size_t k = 0; k < chain.size(); ++k)
                    if (k != i) face.push_back(chain[k]);
                std::size_t j = where.at(face);
                d.block(roff[r], coff[j], dim0, dim0) +=
                    sign * identity_matrix<Scalar>(dim0);
            }
        }
        diffs.push_back(std::move(d));
    }
    // The constructor asserts d o d = 0.
    return CochainComplex<Scalar>(dims, diffs);
}

/// Ground-truth higher limits via the order-complex cochain complex;
/// with `at`, over the strict down-set P_{<at}.
template <class Scalar>
std::vector<Index> oracle_higher_limits(const ModuleDiagram<Scalar>& f,
                                        std::optional<int> at = std::nullopt) {
    if (!at.has_value()) return cohomology_dims<Scalar>(order_cochain<Scalar>(f));
    std::vector<int> sub = f.poset.below(*at);
    ModuleDiagram<Scalar> g;
    g.field = f.field;
    std::vector<int> pos(static_cast<std::size_t>(f.poset.size()), -1);
    std::vector<std::string> names;
    for (int i = 0; i < static_cast<int>(sub.size()); ++i) {
        pos[static_cast<std::size_t>(sub[static_cast<std::size_t>(i)])] = i;
        names.push_back(f.poset.name(sub[static_cast<std::size_t>(i)]));
        g.dim.push_back(f.dim_of(sub[static_cast<std::size_t>(i)]));
    }
    std::vector<Poset::Cover> cov;
    for (std::size_t ci = 0; ci < f.poset.covers().size(); ++ci) {
        const Poset::Cover& c = f.poset.covers()[ci];
        if (pos[static_cast<std::size_t>(c.lower)] < 0 || pos[static_cast<std::size_t>(c.upper)] < 0)
            continue;
        cov.push_back({pos[static_cast<std::size_t>(c.lower)], pos[static_cast<std::size_t>(c.upper)]});
        g.restriction.push_back(f.restriction[ci]);
    }
    g.poset = Poset::build_indexed(std::move(names), std::move(cov));
    return cohomology_dims<Scalar>(order_cochain<Scalar>(g));
}

} // namespace hilim

#endif
