#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "altproj/subspace.hpp"

namespace altproj {

/**
 * T = P_N ... P_1 together with its factors and the projector onto
 * M = M_1 ∩ ... ∩ M_N.
 *
 * Factors whose pattern is sparse (block-structured model instances) are
 * also kept in compressed form so that long iterations stay cheap; the
 * arithmetic is the same either way.
 */
class CyclicProduct {
  public:
    CyclicProduct(std::vector<Projector> factors, Subspace intersection);

    int N() const noexcept { return static_cast<int>(factors_.size()); }
    Index dim() const noexcept { return T_.rows(); }
    const std::vector<Projector>& factors() const noexcept { return factors_; }
    const Matrix& T() const noexcept { return T_; }
    const Projector& PM() const noexcept { return pm_; }
    const Subspace& M() const noexcept { return m_; }

    /// One sweep x -> P_N(...(P_1 x)), factor by factor.
    Vector sweep(const Vector& x) const;

    /// P_k ... P_1 x for k = 0..N (entry 0 is x itself).
    std::vector<Vector> partial_sweeps(const Vector& x) const;

  private:
    Vector apply_factor(std::size_t k, const Vector& x) const;

    std::vector<Projector> factors_;
    std::vector<Eigen::SparseMatrix<Complex>> sparse_;  // empty when dense is used
    Matrix T_;
    Subspace m_;
    Projector pm_;
};

CyclicProduct build_cyclic(std::span<const Subspace> subspaces, Real eig_tol = 1e-10);

/// Per-step errors e_n = ||x_n - P_M x|| with the two theoretical envelopes.
struct IterationTrace {
    std::vector<Real> errors;
    std::vector<Real> bound_c;      ///< rate_bound(c, N, n) * e_0
    std::vector<Real> bound_iota2;  ///< iota2_rate_bound(iota2, N, n) * e_0
    Real x0_norm = 0.0;             ///< ||x - P_M x||
};

/// Geometry feeding the bound columns; the defaults give the vacuous envelope e_0.
struct BoundInputs {
    Real c = 1.0;
    Real iota2 = 0.0;
};

IterationTrace iterate(const CyclicProduct& cp, const Vector& x, int n_max,
                       const BoundInputs& bounds = {});

/// Spectral norm ||T^n - P_M||.
Real operator_error_norm(const CyclicProduct& cp, int n);

/// (1 - 3(N-1)(1-c)/N^3)^{n/2}.
Real rate_bound(Real c, int n_subspaces, int n);

/// (1 - 3 iota2^2 / N^3)^{n/2}.
Real iota2_rate_bound(Real iota2, int n_subspaces, int n);

/// ||u_{k-1} - u_k||^2 for k = 1..N, u_k = P_k...P_1 x - P_M x.
std::vector<Real> sweep_diagnostic(const CyclicProduct& cp, const Vector& x);

/// Right-hand side ||x - P_M x||^2 - ||Tx - P_M x||^2 of the sweep inequality.
Real sweep_budget(const CyclicProduct& cp, const Vector& x);

struct UnconditionalSumReport {
    int K = 0;                       ///< truncation level
    Real tail_estimate = 0.0;        ///< estimated Σ_{n>=K} ||y_n||
    Real telescoping_error = 0.0;    ///< ||Σ_{n<K} y_n - (x - T^K x)||
    Real max_permuted_deviation = 0.0;
    bool permutations_ok = false;    ///< every deviation <= 2 trunc_tol
    Real sign_ratio = 0.0;           ///< max ||Σ a_k y_k|| / (max|a_k| ||x||) over sign patterns
    Real ritt_constant_bound = 0.0;  ///< Σ_{k<K} ||T^k (I - T)||
    bool sign_ok = false;
};

/**
 * Unconditional convergence of Σ T^n (I-T) x to x - P_M x.
 *
 * K is the first index whose estimated tail, times a safety factor 10, drops
 * below trunc_tol. Each permutation reorders the first 2K terms; once all
 * indices below K have appeared, every partial sum must sit within
 * 2 trunc_tol of x - P_M x.
 */
UnconditionalSumReport unconditional_sum_test(const CyclicProduct& cp, const Vector& x,
                                              int num_perms, Real trunc_tol, Seed seed,
                                              int max_terms = 100000);

struct WeakCauchyResult {
    Real sum = 0.0;
    bool converged = false;
};

/// Σ_{n<=n_max} |<T^n (I-T) x, w>|; converged when the last 10% of terms add <= 1e-8.
WeakCauchyResult weak_cauchy_sum(const CyclicProduct& cp, const Vector& x, const Vector& w,
                                 int n_max);

/// (1/(n+1)) Σ_{k<=n} T^k x.
Vector cesaro_average(const CyclicProduct& cp, const Vector& x, int n);

}  // namespace altproj
