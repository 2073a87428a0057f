#pragma once

#include <span>
#include <vector>

#include "altproj/types.hpp"

namespace altproj {

/**
 * Closed subspace of C^d stored through an orthonormal basis (d x r).
 *
 * Rank zero is a valid value: the basis is d x 0 and the projector is the
 * zero matrix, so M = {0} flows through every downstream computation.
 */
class Subspace {
  public:
    /// Validates orthonormality of the columns (1e-12 entrywise).
    explicit Subspace(Matrix basis);

    static Subspace zero(Index dim);
    static Subspace whole(Index dim);

    Index dim() const noexcept { return basis_.rows(); }
    Index rank() const noexcept { return basis_.cols(); }
    bool is_zero() const noexcept { return basis_.cols() == 0; }
    bool is_whole() const noexcept { return basis_.cols() == basis_.rows(); }
    const Matrix& basis() const noexcept { return basis_; }

  private:
    struct Unchecked {};
    Subspace(Matrix basis, Unchecked) : basis_(std::move(basis)) {}
    friend Subspace orthonormal_columns_unchecked(Matrix);

    Matrix basis_;
};

/// Hermitian idempotent d x d matrix.
class Projector {
  public:
    /// Validates Hermitian (1e-12), idempotent (1e-10).
    explicit Projector(Matrix matrix);

    Index dim() const noexcept { return matrix_.rows(); }
    const Matrix& matrix() const noexcept { return matrix_; }
    Vector apply(const Vector& x) const { return matrix_ * x; }

  private:
    Matrix matrix_;
};

/// Span of the given vectors; rank decided by sigma > rank_tol * sigma_max.
Subspace orthonormalize(std::span<const Vector> vectors, Index dim, Real rank_tol = kRankTol);

/// Column span of a d x m matrix.
Subspace orthonormalize(const Matrix& columns, Real rank_tol = kRankTol);

Projector projector(const Subspace& s);

/**
 * M_1 ∩ ... ∩ M_N as the eigenvalue-1 eigenspace of (1/N) Σ P_k.
 *
 * Eigenvalues above 1 - eig_tol are kept. Each kept vector must also satisfy
 * ||P_k v - v|| <= sqrt(eig_tol) for every k, otherwise NumericalError.
 */
Subspace intersection(std::span<const Subspace> subspaces, Real eig_tol = 1e-10);

/// M_k ∩ M^⊥ for M ⊆ M_k, as the numerical range of (I - P_M) basis(M_k).
Subspace complement_within(const Subspace& mk, const Subspace& m, Real rank_tol = kRankTol);

/// S^⊥ in the ambient space.
Subspace orthogonal_complement(const Subspace& s);

/// Largest principal-angle sine between two subspaces of equal rank; 0 when they coincide.
Real subspace_distance(const Subspace& a, const Subspace& b);

/// Checks that every column of v lies in s within tol.
bool contains(const Subspace& s, const Matrix& v, Real tol);

}  // namespace altproj
