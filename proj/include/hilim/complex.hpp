#ifndef HILIM_COMPLEX_HPP
#define HILIM_COMPLEX_HPP

#include <array>
#include <string>
#include <vector>

#include "hilim/exactla.hpp"

namespace hilim {

/// Height of the zero complex; ordered below every actual degree.
inline constexpr int kHeightOfZero = -1;

/// A bounded, nonnegatively graded cochain complex over an exact field,
/// given by its degree dimensions and differential matrices.
/// Trailing zero degrees are trimmed, so dims is empty exactly for the zero
/// complex. The composite of consecutive differentials is checked at build.
template <class Scalar>
class CochainComplex {
public:
    CochainComplex() = default;

    CochainComplex(std::vector<Index> dims, std::vector<DenseMatrix<Scalar>> diffs) {
        while (!dims.empty() && dims.back() == 0) dims.pop_back();
        dims_ = std::move(dims);
        diffs_.clear();
        for (std::size_t k = 0; k + 1 < dims_.size(); ++k) {
            DenseMatrix<Scalar> d = k < diffs.size()
                                        ? diffs[k]
                                        : zero_matrix<Scalar>(dims_[k + 1], dims_[k]);
            if (d.rows() != dims_[k + 1] || d.cols() != dims_[k])
                throw InputError(InputError::Code::InvalidComplex,
                                 "differential " + std::to_string(k) + " has wrong shape");
            diffs_.push_back(std::move(d));
        }
        for (std::size_t k = 0; k + 1 < diffs_.size(); ++k)
            if (!matrix_is_zero<Scalar>(compose<Scalar>(diffs_[k + 1], diffs_[k])))
                throw InputError(InputError::Code::InvalidComplex,
                                 "d o d != 0 at degree " + std::to_string(k));
    }

    /// The zero complex.
    static CochainComplex zero() { return CochainComplex(); }

    /// A module placed in degree 0.
    static CochainComplex concentrated(Index dim0) {
        return CochainComplex(std::vector<Index>{dim0}, {});
    }

    int num_degrees() const { return static_cast<int>(dims_.size()); }
    const std::vector<Index>& dims() const { return dims_; }

    Index dim(int k) const {
        if (k < 0 || k >= num_degrees()) return 0;
        return dims_[static_cast<std::size_t>(k)];
    }

    /// Differential in degree k, of shape dim(k+1) x dim(k).
    DenseMatrix<Scalar> diff(int k) const {
        if (k < 0 || k + 1 >= num_degrees()) return zero_matrix<Scalar>(dim(k + 1), dim(k));
        return diffs_[static_cast<std::size_t>(k)];
    }

    /// Top nonzero degree; kHeightOfZero for the zero complex.
    int height() const { return num_degrees() - 1; }

    bool is_zero() const { return dims_.empty(); }

    bool operator==(const CochainComplex& o) const {
        if (dims_ != o.dims_) return false;
        for (std::size_t k = 0; k < diffs_.size(); ++k)
            if (!matrix_equal<Scalar>(diffs_[k], o.diffs_[k])) return false;
        return true;
    }

private:
    std::vector<Index> dims_;
    std::vector<DenseMatrix<Scalar>> diffs_;
};

template <class Scalar>
int height(const CochainComplex<Scalar>& c) {
    return c.height();
}

/// A degreewise matrix map between two cochain complexes, commuting with the
/// differentials (checked at build). Missing degrees are zero.
template <class Scalar>
class ChainMap {
public:
    ChainMap() = default;

    ChainMap(CochainComplex<Scalar> source, CochainComplex<Scalar> target,
             std::vector<DenseMatrix<Scalar>> components)
        : source_(std::move(source)), target_(std::move(target)) {
        int top = std::max(source_.height(), target_.height());
        for (int k = 0; k <= top; ++k) {
            DenseMatrix<Scalar> c = k < static_cast<int>(components.size())
                                        ? components[static_cast<std::size_t>(k)]
                                        : zero_matrix<Scalar>(target_.dim(k), source_.dim(k));
            if (c.rows() != target_.dim(k) || c.cols() != source_.dim(k))
                throw InputError(InputError::Code::InvalidChainMap,
                                 "component " + std::to_string(k) + " has wrong shape");
            comps_.push_back(std::move(c));
        }
        for (int k = 0; k <= top; ++k) {
            DenseMatrix<Scalar> lhs = compose<Scalar>(component(k + 1), source_.diff(k));
            DenseMatrix<Scalar> rhs = compose<Scalar>(target_.diff(k), component(k));
            if (!matrix_equal<Scalar>(lhs, rhs))
                throw InputError(InputError::Code::InvalidChainMap,
                                 "does not commute with differentials at degree " +
                                     std::to_string(k));
        }
    }

    static ChainMap identity(const CochainComplex<Scalar>& c) {
        std::vector<DenseMatrix<Scalar>> comps;
        for (int k = 0; k <= c.height(); ++k) comps.push_back(identity_matrix<Scalar>(c.dim(k)));
        return ChainMap(c, c, std::move(comps));
    }

    static ChainMap zero(const CochainComplex<Scalar>& source,
                         const CochainComplex<Scalar>& target) {
        return ChainMap(source, target, {});
    }

    const CochainComplex<Scalar>& source() const { return source_; }
    const CochainComplex<Scalar>& target() const { return target_; }

    DenseMatrix<Scalar> component(int k) const {
        if (k < 0 || k >= static_cast<int>(comps_.size()))
            return zero_matrix<Scalar>(target_.dim(k), source_.dim(k));
        return comps_[static_cast<std::size_t>(k)];
    }

    bool is_degreewise_epi() const {
        for (int k = 0; k <= target_.height(); ++k)
            if (!is_epimorphism<Scalar>(component(k))) return false;
        return true;
    }

private:
    CochainComplex<Scalar> source_;
    CochainComplex<Scalar> target_;
    std::vector<DenseMatrix<Scalar>> comps_;
};

/// g after f.
template <class Scalar>
ChainMap<Scalar> compose(const ChainMap<Scalar>& g, const ChainMap<Scalar>& f) {
    std::vector<DenseMatrix<Scalar>> comps;
    int top = std::max(f.source().height(), g.target().height());
    for (int k = 0; k <= top; ++k)
        comps.push_back(compose<Scalar>(g.component(k), f.component(k)));
    return ChainMap<Scalar>(f.source(), g.target(), std::move(comps));
}

template <class Scalar>
bool chain_maps_equal(const ChainMap<Scalar>& a, const ChainMap<Scalar>& b) {
    if (!(a.source() == b.source()) || !(a.target() == b.target())) return false;
    int top = std::max(a.source().height(), a.target().height());
    for (int k = 0; k <= top; ++k)
        if (!matrix_equal<Scalar>(a.component(k), b.component(k))) return false;
    return true;
}

/// Cohomology dimensions: H^k = dim ker d^k - rank d^{k-1}, trailing zeros
/// trimmed.
template <class Scalar>
std::vector<Index> cohomology_dims(const CochainComplex<Scalar>& c) {
    std::vector<Index> h;
    for (int k = 0; k <= c.height(); ++k) {
        Index ker = c.dim(k) - rank<Scalar>(c.diff(k));
        Index im = rank<Scalar>(c.diff(k - 1));
        h.push_back(ker - im);
    }
    while (!h.empty() && h.back() == 0) h.pop_back();
    return h;
}

/// Result of factoring a chain map as a quasi-isomorphism i followed by an
/// epimorphism pi, with pi o i equal to the original map.
template <class Scalar>
struct Factorization {
    CochainComplex<Scalar> cocyl;
    ChainMap<Scalar> i;    // source -> cocyl
    ChainMap<Scalar> pi;   // cocyl -> target
};

/// Mapping cocylinder of f: C -> D, with cocyl^k = C^k x D^{k-1} x D^k and
/// differential (c, d, d') -> (dc, d' - f(c) - dd, dd'). Blocks are ordered
/// (C, shifted D, D).
template <class Scalar>
Factorization<Scalar> mapping_cocylinder(const ChainMap<Scalar>& f) {
    const CochainComplex<Scalar>& c = f.source();
    const CochainComplex<Scalar>& d = f.target();
    const int top = std::max(c.height(), d.height() + 1);

    std::vector<Index> dims;
    std::vector<DenseMatrix<Scalar>> diffs;
    auto block_dims = [&](int k) {
        return std::array<Index, 3>{c.dim(k), d.dim(k - 1), d.dim(k)};
    };
    for (int k = 0; k <= top; ++k) {
        auto bd = block_dims(k);
        dims.push_back(bd[0] + bd[1] + bd[2]);
    }
    for (int k = 0; k + 1 <= top; ++k) {
        auto src = block_dims(k);
        auto dst = block_dims(k + 1);
        DenseMatrix<Scalar> m =
            zero_matrix<Scalar>(dst[0] + dst[1] + dst[2], src[0] + src[1] + src[2]);
        // (dc, d' - f(c) - dd, dd')
        m.block(0, 0, dst[0], src[0]) = c.diff(k);
        m.block(dst[0], 0, dst[1], src[0]) = -f.component(k);
        m.block(dst[0], src[0], dst[1], src[1]) = -d.diff(k - 1);
        m.block(dst[0], src[0] + src[1], dst[1], src[2]) = identity_matrix<Scalar>(d.dim(k));
        m.block(dst[0] + dst[1], src[0] + src[1], dst[2], src[2]) = d.diff(k);
        diffs.push_back(std::move(m));
    }
    CochainComplex<Scalar> cocyl(dims, diffs);

    std::vector<DenseMatrix<Scalar>> i_comps, pi_comps;
    for (int k = 0; k <= top; ++k) {
        auto bd = block_dims(k);
        DenseMatrix<Scalar> ik = zero_matrix<Scalar>(bd[0] + bd[1] + bd[2], c.dim(k));
        ik.block(0, 0, bd[0], c.dim(k)) = identity_matrix<Scalar>(c.dim(k));
        ik.block(bd[0] + bd[1], 0, bd[2], c.dim(k)) = f.component(k);
        i_comps.push_back(std::move(ik));

        DenseMatrix<Scalar> pk = zero_matrix<Scalar>(d.dim(k), bd[0] + bd[1] + bd[2]);
        pk.block(0, bd[0] + bd[1], d.dim(k), bd[2]) = identity_matrix<Scalar>(d.dim(k));
        pi_comps.push_back(std::move(pk));
    }
    Factorization<Scalar> out;
    out.cocyl = cocyl;
    out.i = ChainMap<Scalar>(c, cocyl, std::move(i_comps));
    out.pi = ChainMap<Scalar>(cocyl, d, std::move(pi_comps));
    if (!chain_maps_equal<Scalar>(compose<Scalar>(out.pi, out.i), f))
        throw InternalError(InternalError::Code::BoundaryNotZero,
                            "mapping_cocylinder: pi o i != f");
    return out;
}

/// A map f: C -> D is truncatable when h(C) < h(D) and the last nonzero
/// differential of D is an epimorphism. The zero target is never truncatable.
template <class Scalar>
bool is_truncatable(const ChainMap<Scalar>& f) {
    const int h = f.target().height();
    if (h == kHeightOfZero || f.source().height() >= h) return false;
    return is_epimorphism<Scalar>(f.target().diff(h - 1));
}

/// Truncated mapping cocylinder: the cocylinder of the truncation of f, with
/// the projection replaced in top degree by the differential of D acting on
/// the shifted block. Factors f as a quasi-iso followed by an epimorphism
/// without increasing the height past h(D).
template <class Scalar>
Factorization<Scalar> truncated_mapping_cocylinder(const ChainMap<Scalar>& f) {
    if (!is_truncatable<Scalar>(f))
        throw InputError(InputError::Code::NotTruncatable, "map is not truncatable");
    const CochainComplex<Scalar>& c = f.source();
    const CochainComplex<Scalar>& d = f.target();
    const int n = d.height() - 1;   // h(D) = n + 1

    std::vector<Index> tdims;
    std::vector<DenseMatrix<Scalar>> tdiffs;
    for (int k = 0; k <= n; ++k) tdims.push_back(d.dim(k));
    for (int k = 0; k < n; ++k) tdiffs.push_back(d.diff(k));
    CochainComplex<Scalar> td(tdims, tdiffs);

    std::vector<DenseMatrix<Scalar>> tf_comps;
    for (int k = 0; k <= n; ++k) tf_comps.push_back(f.component(k));
    ChainMap<Scalar> tf(c, td, std::move(tf_comps));

    Factorization<Scalar> base = mapping_cocylinder<Scalar>(tf);

    // pi into the untruncated D: projection below degree n+1, the last
    // differential of D applied to the shifted block at degree n+1.
    std::vector<DenseMatrix<Scalar>> pi_comps;
    for (int k = 0; k <= n; ++k) {
        DenseMatrix<Scalar> pk = zero_matrix<Scalar>(d.dim(k), base.cocyl.dim(k));
        pk.block(0, c.dim(k) + td.dim(k - 1), d.dim(k), td.dim(k)) =
            identity_matrix<Scalar>(d.dim(k));
        pi_comps.push_back(std::move(pk));
    }
    {
        // cocyl^{n+1} = C^{n+1} x TD^n x 0, and C^{n+1} = 0 since h(C) <= n.
        DenseMatrix<Scalar> pk = zero_matrix<Scalar>(d.dim(n + 1), base.cocyl.dim(n + 1));
        pk.block(0, c.dim(n + 1), d.dim(n + 1), td.dim(n)) = d.diff(n);
        pi_comps.push_back(std::move(pk));
    }
    Factorization<Scalar> out;
    out.cocyl = base.cocyl;
    out.i = ChainMap<Scalar>(c, out.cocyl, [&] {
        std::vector<DenseMatrix<Scalar>> comps;
        for (int k = 0; k <= out.cocyl.height(); ++k) comps.push_back(base.i.component(k));
        return comps;
    }());
    out.pi = ChainMap<Scalar>(out.cocyl, d, std::move(pi_comps));
    if (!chain_maps_equal<Scalar>(compose<Scalar>(out.pi, out.i), f))
        throw InternalError(InternalError::Code::BoundaryNotZero,
                            "truncated_mapping_cocylinder: pi o i != f");
    return out;
}

/// Quasi-isomorphism test via acyclicity of the mapping cone. The cone is
/// realized shifted into nonnegative degrees, cone^k = C^k x D^{k-1}, with
/// differential (c, d) -> (-dc, f(c) + dd); the shift does not affect
/// acyclicity.
template <class Scalar>
bool is_quasi_iso(const ChainMap<Scalar>& f) {
    const CochainComplex<Scalar>& c = f.source();
    const CochainComplex<Scalar>& d = f.target();
    const int top = std::max(c.height(), d.height() + 1);
    std::vector<Index> dims;
    std::vector<DenseMatrix<Scalar>> diffs;
    for (int k = 0; k <= top; ++k) dims.push_back(c.dim(k) + d.dim(k - 1));
    for (int k = 0; k + 1 <= top; ++k) {
        DenseMatrix<Scalar> m =
            zero_matrix<Scalar>(c.dim(k + 1) + d.dim(k), c.dim(k) + d.dim(k - 1));
        m.block(0, 0, c.dim(k + 1), c.dim(k)) = -c.diff(k);
        m.block(c.dim(k + 1), 0, d.dim(k), c.dim(k)) = f.component(k);
        m.block(c.dim(k + 1), c.dim(k), d.dim(k), d.dim(k - 1)) = d.diff(k - 1);
        diffs.push_back(std::move(m));
    }
    return cohomology_dims<Scalar>(CochainComplex<Scalar>(dims, diffs)).empty();
}

} // namespace hilim

#endif
