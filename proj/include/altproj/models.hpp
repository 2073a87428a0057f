#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "altproj/cyclic.hpp"

namespace altproj {

/// N random subspaces, M_k spanned by rank_k seeded real Gaussian vectors.
std::vector<Subspace> random_instance(Index dim, const std::vector<Index>& ranks, Seed seed);

/// Lines span{(1,0)} and span{(cos θ, sin θ)} in C^2.
std::pair<Subspace, Subspace> two_lines(Real theta);

enum class AngleRule { inverse, inverse_sqrt, custom };

/**
 * Two subspaces of C^{2K} built from K planar blocks: M_1 takes (1,0) and
 * M_2 takes (cos θ_k, sin θ_k) in block k. M_1 ∩ M_2 = {0} and
 * c(M_1, M_2) = max_k cos θ_k, which approaches 1 as the angles shrink.
 */
class BlockAlignedModel {
  public:
    BlockAlignedModel(std::vector<Real> angles, AngleRule rule);

    int blocks() const noexcept { return static_cast<int>(angles_.size()); }
    Index dim() const noexcept { return 2 * static_cast<Index>(angles_.size()); }
    const std::vector<Real>& angles() const noexcept { return angles_; }
    AngleRule rule() const noexcept { return rule_; }
    const Subspace& M1() const noexcept { return m1_; }
    const Subspace& M2() const noexcept { return m2_; }
    std::vector<Subspace> subspaces() const { return {m1_, m2_}; }

    /// max_k cos θ_k.
    Real friedrichs() const;

    /// Unit vector along the M_1 direction of block k (0-based).
    Vector m1_direction(int k) const;

    /// ||T^n x|| for x = Σ a_k (M_1 direction of block k): n = 0 gives ||a||,
    /// n >= 1 gives (Σ a_k^2 cos^{2(2n-1)} θ_k)^{1/2}.
    Real predicted_error(const std::vector<Real>& coefficients, int n) const;

    /// Per-block factor ||T^n e|| for the unit M_1 direction e (1 at n = 0).
    Real geometry_factor(int k, int n) const;

    /// Per-coordinate weights (k+1)^{-order} for block k, the profile of a
    /// fixed square-summable sequence truncated to K blocks.
    std::vector<Real> square_summable_weights(Real order) const;

  private:
    std::vector<Real> angles_;
    AngleRule rule_;
    Subspace m1_;
    Subspace m2_;
};

/// θ_k = 1/k or 1/sqrt(k), k = 1..K (θ_1 capped at π/2), or a custom decreasing list.
BlockAlignedModel block_aligned(int K, AngleRule rule, const std::vector<Real>& custom = {});

/// Angle of block k (1-based) under a preset rule.
Real preset_angle(AngleRule rule, int k);

struct SlowVectorResult {
    Vector x;
    std::vector<int> blocks_used;
    std::vector<Real> coefficients;  ///< one per used block
};

/**
 * x supported on M_1 directions with ||T^n x|| >= r_n for n <= horizon and
 * ||x|| < (1 + eps) r_0.
 *
 * Greedy: starting at n_s = 0 take the slowest unused block with coefficient
 * (1 + eps/2) r_{n_s}; it serves every later n where its own decay still
 * dominates r_n. Repeat from the first uncovered n.
 */
SlowVectorResult slow_vector(const BlockAlignedModel& model, const std::function<Real(int)>& r,
                             int horizon, Real eps);

/// Σ w_i T_i for weights on the simplex (tolerance 1e-12).
Matrix convex_combination(const std::vector<const CyclicProduct*>& products,
                          const std::vector<Real>& weights);

}  // namespace altproj
