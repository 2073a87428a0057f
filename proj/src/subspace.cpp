#include "altproj/subspace.hpp"

#include <algorithm>
#include <cmath>

#include "altproj/errors.hpp"

namespace altproj {

Real spectral_norm(const Matrix& a)
{
    if (a.size() == 0)
        return 0.0;
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues()(0);
}

Subspace orthonormal_columns_unchecked(Matrix basis)
{
    return Subspace(std::move(basis), Subspace::Unchecked{});
}

namespace {

Subspace range_basis(const Matrix& columns, Real rank_tol)
{
    const Index d = columns.rows();
    if (columns.cols() == 0)
        return Subspace::zero(d);
    Eigen::BDCSVD<Matrix> svd(columns, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    const Real smax = sv.size() ? sv(0) : 0.0;
    Index r = 0;
    if (smax > 0.0) {
        while (r < sv.size() && sv(r) > rank_tol * smax)
            ++r;
    }
    return orthonormal_columns_unchecked(svd.matrixU().leftCols(r));
}

}  // namespace

Subspace::Subspace(Matrix basis) : basis_(std::move(basis))
{
    if (basis_.cols() > basis_.rows())
        throw InputError("Subspace: rank exceeds ambient dimension");
    if (basis_.rows() < 1)
        throw InputError("Subspace: ambient dimension must be positive");
    const Matrix gram = basis_.adjoint() * basis_;
    const Matrix id = Matrix::Identity(basis_.cols(), basis_.cols());
    if (gram.size() && (gram - id).cwiseAbs().maxCoeff() > 1e-12)
        throw InputError("Subspace: basis columns are not orthonormal");
}

Subspace Subspace::zero(Index dim)
{
    if (dim < 1)
        throw InputError("Subspace: ambient dimension must be positive");
    return Subspace(Matrix(dim, 0), Unchecked{});
}

Subspace Subspace::whole(Index dim)
{
    if (dim < 1)
        throw InputError("Subspace: ambient dimension must be positive");
    return Subspace(Matrix::Identity(dim, dim), Unchecked{});
}

Projector::Projector(Matrix matrix) : matrix_(std::move(matrix))
{
    if (matrix_.rows() != matrix_.cols())
        throw InputError("Projector: matrix must be square");
    if (matrix_.size() == 0)
        return;
    if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw InputError("Projector: matrix is not Hermitian");
    if ((matrix_ * matrix_ - matrix_).cwiseAbs().maxCoeff() > 1e-10)
        throw InputError("Projector: matrix is not idempotent");
}

Subspace orthonormalize(std::span<const Vector> vectors, Index dim, Real rank_tol)
{
    if (rank_tol <= 0.0)
        throw InputError("orthonormalize: rank_tol must be positive");
    Matrix stacked(dim, static_cast<Index>(vectors.size()));
    for (std::size_t j = 0; j < vectors.size(); ++j) {
        if (vectors[j].size() != dim)
            throw InputError("orthonormalize: vector length does not match ambient dimension");
        stacked.col(static_cast<Index>(j)) = vectors[j];
    }
    return range_basis(stacked, rank_tol);
}

Subspace orthonormalize(const Matrix& columns, Real rank_tol)
{
    if (rank_tol <= 0.0)
        throw InputError("orthonormalize: rank_tol must be positive");
    if (columns.rows() < 1)
        throw InputError("orthonormalize: ambient dimension must be positive");
    return range_basis(columns, rank_tol);
}

Projector projector(const Subspace& s)
{
    Matrix p = s.basis() * s.basis().adjoint();
    return Projector(hermitian_part(p));
}

Subspace intersection(std::span<const Subspace> subspaces, Real eig_tol)
{
    if (subspaces.size() < 2)
        throw InputError("intersection: need at least two subspaces");
    if (eig_tol <= 0.0)
        throw InputError("intersection: eig_tol must be positive");
    const Index d = subspaces.front().dim();
    for (const auto& s : subspaces) {
        if (s.dim() != d)
            throw InputError("intersection: subspaces live in different ambient spaces");
    }
    for (const auto& s : subspaces) {
        if (s.is_zero())
            return Subspace::zero(d);
    }

    Matrix avg = Matrix::Zero(d, d);
    for (const auto& s : subspaces)
        avg += s.basis() * s.basis().adjoint();
    avg /= static_cast<Real>(subspaces.size());

    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(avg));
    const auto& ev = es.eigenvalues();  // ascending
    Index keep = 0;
    while (keep < d && ev(d - 1 - keep) > 1.0 - eig_tol)
        ++keep;
    Matrix basis = es.eigenvectors().rightCols(keep);

    const Real cross_tol = std::sqrt(eig_tol);
    for (const auto& s : subspaces) {
        for (Index j = 0; j < basis.cols(); ++j) {
            const Vector v = basis.col(j);
            const Vector pv = s.basis() * (s.basis().adjoint() * v);
            if ((pv - v).norm() > cross_tol)
                throw NumericalError(
                    "ill-conditioned intersection; reduce eig_tol or rescale instance");
        }
    }
    // Re-orthonormalize to remove eigen-solver drift below the Subspace check.
    return range_basis(basis, kRankTol);
}

Subspace complement_within(const Subspace& mk, const Subspace& m, Real rank_tol)
{
    if (mk.dim() != m.dim())
        throw InputError("complement_within: ambient dimensions differ");
    if (!contains(mk, m.basis(), 1e-10))
        throw InputError("complement_within: M is not contained in M_k");
    if (m.is_zero())
        return mk;
    const Matrix& b = mk.basis();
    const Matrix residual = b - m.basis() * (m.basis().adjoint() * b);
    if (mk.rank() == 0)
        return Subspace::zero(mk.dim());
    // The range has dimension r_k - dim M; fix it instead of trusting a noisy threshold.
    const Index expected = mk.rank() - m.rank();
    Eigen::BDCSVD<Matrix> svd(residual, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    Index r = 0;
    const Real smax = sv.size() ? sv(0) : 0.0;
    while (r < sv.size() && smax > 0.0 && sv(r) > rank_tol * smax)
        ++r;
    r = std::min(r, expected);
    return range_basis(svd.matrixU().leftCols(r), kRankTol);
}

Subspace orthogonal_complement(const Subspace& s)
{
    const Index d = s.dim();
    if (s.is_zero())
        return Subspace::whole(d);
    if (s.is_whole())
        return Subspace::zero(d);
    const Matrix q = Matrix::Identity(d, d) - s.basis() * s.basis().adjoint();
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(q));
    const Index r = d - s.rank();
    return range_basis(es.eigenvectors().rightCols(r), kRankTol);
}

Real subspace_distance(const Subspace& a, const Subspace& b)
{
    if (a.dim() != b.dim())
        throw InputError("subspace_distance: ambient dimensions differ");
    const Matrix pa = a.basis() * a.basis().adjoint();
    const Matrix pb = b.basis() * b.basis().adjoint();
    return spectral_norm(pa - pb);
}

bool contains(const Subspace& s, const Matrix& v, Real tol)
{
    if (v.cols() == 0)
        return true;
    const Matrix residual = v - s.basis() * (s.basis().adjoint() * v);
    for (Index j = 0; j < v.cols(); ++j) {
        if (residual.col(j).norm() > tol)
            return false;
    }
    return true;
}

}  // namespace altproj
