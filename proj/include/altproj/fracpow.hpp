#pragma once

#include <span>
#include <vector>

#include "altproj/cyclic.hpp"

namespace altproj {

/**
 * Truncated binomial series (I - T)^α = Σ c_n T^n with c_n = (-1)^n binom(α, n).
 *
 * For n >= ceil(α) the coefficients share one sign and sum to zero overall, so
 * the tail Σ_{n>K} |c_n| equals |c_K| |K - α| / α exactly.
 */
struct FracPowerPlan {
    Real alpha = 0.0;
    int trunc = 0;
    std::vector<Real> coefficients;  ///< c_0 .. c_trunc
    Real tail_bound = 0.0;           ///< Σ_{n>trunc} |c_n|
};

/// Σ_{n>K} |c_n| for the given α >= 0.
Real binomial_tail(Real alpha, int K);

/// Smallest plan whose coefficient tail is <= coef_tol (hard cap 10^6 terms).
FracPowerPlan plan_frac_power(Real alpha, Real coef_tol);

struct FracPowerOptions {
    int series_cap = 1000000;
    /// Term budget for the series cross-check when the eigenvector path is available.
    int crosscheck_budget = 100000;
    Real max_condition = 1e6;
};

struct FracPowerResult {
    Vector value;
    int blocks = 0;           ///< independent diagonal blocks of T
    int eigen_blocks = 0;     ///< blocks evaluated through the eigenvector path
    int crosschecked = 0;     ///< eigen blocks confirmed by the series within 10 tol
    int series_terms = 0;     ///< largest series length used
    Real max_crosscheck_diff = 0.0;
};

/**
 * (I - T)^α x for a contraction T.
 *
 * T is split into independent diagonal blocks. On each block the component
 * in Fix(T) is removed (it is annihilated for α > 0) and the series is run
 * until |c|-tail times ||T^n x|| falls below the block's share of tol. When the
 * block is diagonalizable with eigenvector condition below max_condition,
 * the eigen path is used and the series serves as a cross-check.
 */
FracPowerResult frac_power(const Matrix& T, Real alpha, const Vector& x, Real tol,
                           const FracPowerOptions& options = {});

Vector frac_power_apply(const Matrix& T, Real alpha, const Vector& x, Real tol);

/// Series-only evaluation (no eigen path, no block split); the reference route.
Vector frac_power_series(const Matrix& T, Real alpha, const Vector& x, Real tol,
                         int cap = 1000000);

/// x = (I - T)^α y + P_M z, an element of X_α = Fix(T) ⊕ Ran(I - T)^α.
struct AlphaVector {
    Real alpha = 0.0;
    Vector x;
    Vector y;
    Vector z;
};

AlphaVector make_alpha_vector(const CyclicProduct& cp, Real alpha, const Vector& y,
                              const Vector& z, Real tol = 1e-13);

/**
 * Seeded construction: y and z are unit vectors drawn from a Gaussian whose
 * coordinates are scaled by weights (empty = isotropic).
 */
AlphaVector make_alpha_vector(const CyclicProduct& cp, Real alpha, Seed seed,
                              std::span<const Real> weights = {});

/// Least-squares slope of log e_n against log n over [n_lo, n_hi]; -inf if some e_n = 0.
Real decay_slope(const IterationTrace& trace, int n_lo, int n_hi);

struct DecayReport {
    Real alpha = 0.0;
    int n_lo = 0;
    int n_hi = 0;
    Real slope = 0.0;
    Real sup_n_alpha_e_n = 0.0;       ///< sup of n^α e_n on the window
    bool scaled_nonincreasing = false; ///< n^α e_n non-increasing on the window
};

DecayReport decay_report(const IterationTrace& trace, Real alpha, int n_lo, int n_hi);

struct PartialSumResult {
    Real sup = 0.0;
    Real sup_at_last_decade = 0.0;  ///< sup over n <= n_max/10
    bool bounded = false;           ///< sup grew by < 1e-6 over the last decade
};

/// sup_{n<=n_max} ||Σ_{k=1}^n k^{-(1-α)} T^k x||.
PartialSumResult partial_sum_characterization(const CyclicProduct& cp, const Vector& x,
                                              Real alpha, int n_max);

/// (I - T)^{max α} y + P_M z.
Vector super_poly_vector(const CyclicProduct& cp, std::span<const Real> alphas, Seed seed,
                         std::span<const Real> weights = {});

}  // namespace altproj
