#ifndef HILIM_EXACTLA_HPP
#define HILIM_EXACTLA_HPP

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hilim/errors.hpp"
#include "hilim/fields.hpp"

namespace hilim {

template <class Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Eigen::Index;

template <class Scalar>
DenseMatrix<Scalar> zero_matrix(Index rows, Index cols) {
    return DenseMatrix<Scalar>::Constant(rows, cols, Scalar(0));
}

template <class Scalar>
DenseMatrix<Scalar> identity_matrix(Index n) {
    DenseMatrix<Scalar> m = zero_matrix<Scalar>(n, n);
    for (Index i = 0; i < n; ++i) m(i, i) = Scalar(1);
    return m;
}

/// Reduced row echelon form, in place. Returns the pivot columns.
/// Pivoting picks the first nonzero entry in each column; with exact
/// arithmetic this is stable and makes the result deterministic.
template <class Scalar>
std::vector<Index> rref_in_place(DenseMatrix<Scalar>& a) {
    std::vector<Index> pivots;
    Index row = 0;
    for (Index col = 0; col < a.cols() && row < a.rows(); ++col) {
        Index pr = -1;
        for (Index r = row; r < a.rows(); ++r)
            if (a(r, col) != Scalar(0)) { pr = r; break; }
        if (pr < 0) continue;
        if (pr != row) a.row(pr).swap(a.row(row));
        Scalar inv = FieldTraits<Scalar>::inverse(a(row, col));
        for (Index c = col; c < a.cols(); ++c) a(row, c) = a(row, c) * inv;
        for (Index r = 0; r < a.rows(); ++r) {
            if (r == row || a(r, col) == Scalar(0)) continue;
            Scalar factor = a(r, col);
            for (Index c = col; c < a.cols(); ++c)
                a(r, c) = a(r, c) - factor * a(row, c);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

template <class Scalar>
Index rank(DenseMatrix<Scalar> m) {
    return static_cast<Index>(rref_in_place(m).size());
}

/// rank(M) plus a null-space basis in reduced column echelon form.
///
/// Column j of the kernel corresponds to the j-th free column of M: its
/// bottom-most nonzero entry is a 1 sitting in that free row, and every other
/// kernel column vanishes there. Free rows double as the pivot rows needed to
/// read coordinates off the basis (see coords_in_basis).
template <class Scalar>
struct KernelResult {
    Index rank = 0;
    DenseMatrix<Scalar> kernel;         // cols(M) x (cols(M) - rank)
    std::vector<Index> pivot_rows;      // per kernel column, its unit row
};

template <class Scalar>
KernelResult<Scalar> rank_and_kernel(DenseMatrix<Scalar> m) {
    const Index n = m.cols();
    std::vector<Index> pivots = rref_in_place(m);
    KernelResult<Scalar> out;
    out.rank = static_cast<Index>(pivots.size());

    std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
    for (Index p : pivots) is_pivot[static_cast<std::size_t>(p)] = true;

    out.kernel = zero_matrix<Scalar>(n, n - out.rank);
    Index k = 0;
    for (Index j = 0; j < n; ++j) {
        if (is_pivot[static_cast<std::size_t>(j)]) continue;
        out.kernel(j, k) = Scalar(1);
        for (Index i = 0; i < out.rank; ++i)
            out.kernel(pivots[static_cast<std::size_t>(i)], k) = -m(i, j);
        out.pivot_rows.push_back(j);
        ++k;
    }
    return out;
}

/// Surjectivity of M as a map from cols-space to rows-space.
template <class Scalar>
bool is_epimorphism(const DenseMatrix<Scalar>& m) {
    return rank<Scalar>(m) == m.rows();
}

/// Exact product with an explicit shape check.
template <class Scalar>
DenseMatrix<Scalar> compose(const DenseMatrix<Scalar>& a, const DenseMatrix<Scalar>& b) {
    if (a.cols() != b.rows())
        throw InputError(InputError::Code::ShapeMismatch,
                         "compose: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                             " * " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    if (a.rows() == 0 || b.cols() == 0 || a.cols() == 0)
        return zero_matrix<Scalar>(a.rows(), b.cols());
    return a * b;
}

/// Coordinates X with basis * X = target, for a basis produced by
/// rank_and_kernel. Returns false if target is not in the span.
template <class Scalar>
bool coords_in_basis(const KernelResult<Scalar>& basis, const DenseMatrix<Scalar>& target,
                     DenseMatrix<Scalar>& coords) {
    const Index dim = basis.kernel.cols();
    coords = zero_matrix<Scalar>(dim, target.cols());
    for (Index i = 0; i < dim; ++i)
        coords.row(i) = target.row(basis.pivot_rows[static_cast<std::size_t>(i)]);
    DenseMatrix<Scalar> residual = compose<Scalar>(basis.kernel, coords) - target;
    for (Index r = 0; r < residual.rows(); ++r)
        for (Index c = 0; c < residual.cols(); ++c)
            if (residual(r, c) != Scalar(0)) return false;
    return true;
}

template <class Scalar>
bool matrix_is_zero(const DenseMatrix<Scalar>& m) {
    for (Index r = 0; r < m.rows(); ++r)
        for (Index c = 0; c < m.cols(); ++c)
            if (m(r, c) != Scalar(0)) return false;
    return true;
}

template <class Scalar>
bool matrix_equal(const DenseMatrix<Scalar>& a, const DenseMatrix<Scalar>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    return matrix_is_zero<Scalar>(a - b);
}

} // namespace hilim

#endif
