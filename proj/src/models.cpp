#include "altproj/models.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "altproj/errors.hpp"

namespace altproj {

std::vector<Subspace> random_instance(Index dim, const std::vector<Index>& ranks, Seed seed)
{
    if (dim < 1)
        throw InputError("random_instance: dimension must be positive");
    if (ranks.size() < 2)
        throw InputError("random_instance: need N >= 2 subspaces");
    bool all_whole = true;
    for (Index r : ranks) {
        if (r < 1 || r > dim)
            throw InputError("random_instance: every rank must lie in [1, d]");
        all_whole = all_whole && r == dim;
    }
    if (all_whole)
        throw InputError("random_instance: every subspace coincides with X; nothing to project");

    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      0x5eedu};
    std::mt19937_64 rng(seq);
    std::normal_distribution<Real> gauss;
    std::vector<Subspace> out;
    out.reserve(ranks.size());
    for (Index r : ranks) {
        Matrix g(dim, r);
        for (Index j = 0; j < r; ++j) {
            for (Index i = 0; i < dim; ++i)
                g(i, j) = gauss(rng);
        }
        out.push_back(orthonormalize(g));
    }
    return out;
}

std::pair<Subspace, Subspace> two_lines(Real theta)
{
    if (!(theta > 0.0) || theta > kPi / 2 + 1e-15)
        throw InputError("two_lines: theta must lie in (0, pi/2]");
    Matrix a(2, 1), b(2, 1);
    a << 1.0, 0.0;
    b << std::cos(theta), std::sin(theta);
    return {Subspace(a), Subspace(b)};
}

Real preset_angle(AngleRule rule, int k)
{
    if (k < 1)
        throw InputError("preset_angle: block index is 1-based");
    Real theta = 0.0;
    switch (rule) {
    case AngleRule::inverse:
        theta = 1.0 / k;
        break;
    case AngleRule::inverse_sqrt:
        theta = 1.0 / std::sqrt(static_cast<Real>(k));
        break;
    case AngleRule::custom:
        throw InputError("preset_angle: custom rule has no formula");
    }
    return std::min(theta, kPi / 2);
}

BlockAlignedModel::BlockAlignedModel(std::vector<Real> angles, AngleRule rule)
    : angles_(std::move(angles)), rule_(rule), m1_(Subspace::zero(1)), m2_(Subspace::zero(1))
{
    if (angles_.empty())
        throw InputError("block_aligned: need at least one block");
    for (std::size_t k = 0; k < angles_.size(); ++k) {
        if (!(angles_[k] > 0.0) || angles_[k] > kPi / 2 + 1e-15)
            throw InputError("block_aligned: angles must lie in (0, pi/2]");
        if (k > 0 && angles_[k] > angles_[k - 1])
            throw InputError("block_aligned: angles must be non-increasing");
    }
    const Index K = static_cast<Index>(angles_.size());
    Matrix b1 = Matrix::Zero(2 * K, K);
    Matrix b2 = Matrix::Zero(2 * K, K);
    for (Index k = 0; k < K; ++k) {
        b1(2 * k, k) = 1.0;
        b2(2 * k, k) = std::cos(angles_[k]);
        b2(2 * k + 1, k) = std::sin(angles_[k]);
    }
    m1_ = Subspace(std::move(b1));
    m2_ = Subspace(std::move(b2));
}

Real BlockAlignedModel::friedrichs() const
{
    Real c = 0.0;
    for (Real t : angles_)
        c = std::max(c, std::cos(t));
    return c;
}

Vector BlockAlignedModel::m1_direction(int k) const
{
    if (k < 0 || k >= blocks())
        throw InputError("m1_direction: block index out of range");
    Vector e = Vector::Zero(dim());
    e(2 * k) = 1.0;
    return e;
}

Real BlockAlignedModel::geometry_factor(int k, int n) const
{
    if (n == 0)
        return 1.0;
    return std::pow(std::cos(angles_.at(k)), 2 * n - 1);
}

Real BlockAlignedModel::predicted_error(const std::vector<Real>& coefficients, int n) const
{
    if (static_cast<int>(coefficients.size()) != blocks())
        throw InputError("predicted_error: need one coefficient per block");
    Real s = 0.0;
    for (int k = 0; k < blocks(); ++k) {
        const Real v = coefficients[k] * geometry_factor(k, n);
        s += v * v;
    }
    return std::sqrt(s);
}

std::vector<Real> BlockAlignedModel::square_summable_weights(Real order) const
{
    std::vector<Real> w(static_cast<std::size_t>(dim()));
    for (int k = 0; k < blocks(); ++k) {
        const Real v = std::pow(static_cast<Real>(k + 1), -order);
        w[2 * k] = v;
        w[2 * k + 1] = v;
    }
    return w;
}

BlockAlignedModel block_aligned(int K, AngleRule rule, const std::vector<Real>& custom)
{
    if (K < 1)
        throw InputError("block_aligned: K must be >= 1");
    if (rule == AngleRule::custom) {
        if (static_cast<int>(custom.size()) != K)
            throw InputError("block_aligned: custom angle list must have K entries");
        return BlockAlignedModel(custom, rule);
    }
    std::vector<Real> angles(K);
    for (int k = 1; k <= K; ++k)
        angles[k - 1] = preset_angle(rule, k);
    return BlockAlignedModel(std::move(angles), rule);
}

namespace {

/// Smallest preset model whose slowest block alone serves the whole horizon.
int smallest_sufficient_blocks(AngleRule rule, const std::vector<Real>& r, Real eps)
{
    const int horizon = static_cast<int>(r.size()) - 1;
    auto enough = [&](int K) {
        const Real c = std::cos(preset_angle(rule, K));
        const Real a = (1.0 + eps / 2) * r[0];
        for (int n = 1; n <= horizon; ++n) {
            if (a * std::pow(c, 2 * n - 1) < r[n])
                return false;
        }
        return true;
    };
    int hi = 1;
    while (!enough(hi)) {
        if (hi > (1 << 26))
            return -1;
        hi *= 2;
    }
    int lo = hi / 2;
    while (hi - lo > 1) {
        const int mid = lo + (hi - lo) / 2;
        (enough(mid) ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace

SlowVectorResult slow_vector(const BlockAlignedModel& model, const std::function<Real(int)>& rfun,
                             int horizon, Real eps)
{
    if (horizon < 0)
        throw InputError("slow_vector: horizon must be >= 0");
    if (!(eps > 0.0))
        throw InputError("slow_vector: eps must be positive");
    std::vector<Real> r(horizon + 1);
    for (int n = 0; n <= horizon; ++n) {
        r[n] = rfun(n);
        if (!(r[n] > 0.0))
            throw InputError("slow_vector: r_n must be positive");
        if (n > 0 && r[n] > r[n - 1])
            throw InputError("slow_vector: r_n must be non-increasing");
    }

    auto capacity_error = [&]() {
        std::ostringstream msg;
        msg << "increase K or relax horizon";
        if (model.rule() != AngleRule::custom) {
            const int k = smallest_sufficient_blocks(model.rule(), r, eps);
            if (k > 0)
                msg << " (smallest sufficient K = " << k << ")";
        }
        return CapacityError(msg.str());
    };

    const int K = model.blocks();
    std::vector<Real> coeff(K, 0.0);
    SlowVectorResult out;
    int next_block = K - 1;  // angles are non-increasing: the last block decays slowest
    int n_start = 0;
    while (n_start <= horizon) {
        if (next_block < 0)
            throw capacity_error();
        const int k = next_block--;
        coeff[k] = (1.0 + eps / 2) * r[n_start];
        out.blocks_used.push_back(k);
        out.coefficients.push_back(coeff[k]);
        int n = n_start;
        while (n <= horizon && model.predicted_error(coeff, n) >= r[n])
            ++n;
        if (n == n_start)
            throw capacity_error();
        n_start = n;
    }

    Real norm2 = 0.0;
    for (Real a : coeff)
        norm2 += a * a;
    if (!(std::sqrt(norm2) < (1.0 + eps) * r[0]))
        throw capacity_error();

    out.x = Vector::Zero(model.dim());
    for (int k = 0; k < K; ++k)
        out.x(2 * k) = coeff[k];
    return out;
}

Matrix convex_combination(const std::vector<const CyclicProduct*>& products,
                          const std::vector<Real>& weights)
{
    if (products.empty() || products.size() != weights.size())
        throw InputError("convex_combination: need one weight per product");
    Real total = 0.0;
    for (Real w : weights) {
        if (!(w > 0.0))
            throw InputError("convex_combination: weights must be positive");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw InputError("convex_combination: weights must sum to 1");
    const Index d = products.front()->dim();
    Matrix out = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < products.size(); ++i) {
        if (products[i]->dim() != d)
            throw InputError("convex_combination: products live in different ambient spaces");
        out += weights[i] * products[i]->T();
    }
    return out;
}

}  // namespace altproj
