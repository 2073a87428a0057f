#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "altproj/subspace.hpp"

namespace altproj {

/// Geometric constants of a subspace family and the rate base they imply.
struct GeometryReport {
    int N = 0;
    Real c = 0.0;         ///< Friedrichs number
    Real ell2 = 0.0;      ///< ℓ²-inclination, sqrt((N-1)(1-c))
    Real iota2 = 0.0;     ///< inner ℓ²-inclination (+inf when every M_n = M)
    Real ell_est = 0.0;   ///< upper estimate of the inclination ℓ
    Real iota_est = 0.0;  ///< upper estimate of the inner inclination ι
    Real theta0 = 0.0;    ///< Stolz half-angle; π/2 flags the aligned limit c = 1
    Real rate_base = 1.0; ///< (1 - 3(N-1)(1-c)/N^3)^{1/2}
};

/// Gram matrix of the stacked bases of M_k ∩ M^⊥.
struct GramBlock {
    Matrix G;
    std::vector<Index> offsets;  ///< first row of block k; offsets.back() == R
};

GramBlock gram_block(std::span<const Subspace> subspaces, const Subspace& m);

/**
 * Friedrichs number (λ_max(G) - 1)/(N - 1), clamped to [0, 1].
 *
 * The supremum over an empty constraint set (every M_k = M) is taken as 0.
 */
Real friedrichs_number(std::span<const Subspace> subspaces, const Subspace& m);

/// sqrt((N-1)(1-c)).
Real ell2(Real c, int n_subspaces);

/// sqrt(λ_min(Q^H Σ(I-P_k) Q)) over an orthonormal basis Q of M^⊥.
Real ell2_direct(std::span<const Subspace> subspaces, const Subspace& m);

struct Iota2Result {
    Real value = std::numeric_limits<Real>::infinity();
    bool empty = true;  ///< every M_n coincides with M
};

Iota2Result iota2(std::span<const Subspace> subspaces, const Subspace& m);

enum class InclinationKind { inner, global };

/// Best value of max_k dist(x,M_k)/dist(x,M) found by seeded multi-start local search.
Real minimax_inclination_estimate(std::span<const Subspace> subspaces, const Subspace& m,
                                  InclinationKind kind, int restarts, Seed seed);

/// (1 - 3(N-1)(1-c)/N^3)^{1/2}, clamped to [0, 1].
Real rate_base(Real c, int n_subspaces);

struct InequalityCheck {
    std::string name;
    bool satisfied = false;
    Real slack = 0.0;       ///< lhs - rhs in the direction of the inequality
    bool heuristic = false; ///< compares two estimates, reported only
};

std::vector<InequalityCheck> sandwich_check(const GeometryReport& report, Real tol = 1e-6);

struct GeometryOptions {
    int restarts = 8;
    Seed seed = 0;
};

GeometryReport analyze_geometry(std::span<const Subspace> subspaces, const Subspace& m,
                                const GeometryOptions& options);

}  // namespace altproj
