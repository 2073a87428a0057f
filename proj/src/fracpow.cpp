#include "altproj/fracpow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "altproj/errors.hpp"

namespace altproj {

namespace {

/// Connected components of the nonzero pattern of a square matrix.
std::vector<std::vector<Index>> independent_blocks(const Matrix& T)
{
    const Index d = T.rows();
    std::vector<Index> parent(d);
    std::iota(parent.begin(), parent.end(), Index{0});
    auto find = [&](Index i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    };
    for (Index j = 0; j < d; ++j) {
        for (Index i = 0; i < d; ++i) {
            if (i != j && T(i, j) != Complex(0.0, 0.0)) {
                const Index a = find(i), b = find(j);
                if (a != b)
                    parent[std::max(a, b)] = std::min(a, b);
            }
        }
    }
    std::vector<std::vector<Index>> groups;
    std::vector<Index> slot(d, -1);
    for (Index i = 0; i < d; ++i) {
        const Index r = find(i);
        if (slot[r] < 0) {
            slot[r] = static_cast<Index>(groups.size());
            groups.emplace_back();
        }
        groups[slot[r]].push_back(i);
    }
    return groups;
}

/// Orthogonal projector onto Ker(I - T); for a contraction it commutes with T.
Matrix fixed_projector(const Matrix& T)
{
    const Index d = T.rows();
    Eigen::JacobiSVD<Matrix> svd(Matrix::Identity(d, d) - T, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const Real scale = std::max<Real>(1.0, sv.size() ? sv(0) : 0.0);
    Index k = 0;
    while (k < sv.size() && sv(sv.size() - 1 - k) <= 1e-10 * scale)
        ++k;
    const Matrix v0 = svd.matrixV().rightCols(k);
    return v0 * v0.adjoint();
}

struct SeriesOutcome {
    Vector value;
    int terms = 0;
    bool converged = false;
};

/// Σ c_n T^n x on a vector with no Fix(T) component, compensated accumulation.
SeriesOutcome run_series(const Matrix& T, Real alpha, const Vector& x, Real tol, int cap)
{
    SeriesOutcome out;
    Vector sum = x;
    Vector comp = Vector::Zero(x.size());
    Vector v = x;
    Real c = 1.0;
    const int first_tail = static_cast<int>(std::ceil(alpha));
    for (int n = 0;; ++n) {
        const Real vnorm = v.norm();
        const Real tail = std::abs(c) * std::abs(static_cast<Real>(n) - alpha) / alpha;
        if (vnorm == 0.0 || (n >= first_tail && tail * vnorm <= tol)) {
            out.terms = n;
            out.converged = true;
            break;
        }
        if (n >= cap) {
            out.terms = n;
            break;
        }
        c *= (static_cast<Real>(n) - alpha) / static_cast<Real>(n + 1);
        v = T * v;
        const Vector term = c * v - comp;
        const Vector next = sum + term;
        comp = (next - sum) - term;
        sum = next;
    }
    out.value = std::move(sum);
    return out;
}

std::mt19937_64 engine(Seed seed, std::uint32_t stream)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      stream};
    return std::mt19937_64(seq);
}

Vector weighted_unit(Index d, std::mt19937_64& rng, std::span<const Real> weights)
{
    if (!weights.empty() && static_cast<Index>(weights.size()) != d)
        throw InputError("weights must have one entry per coordinate");
    std::normal_distribution<Real> gauss;
    Vector v(d);
    for (Index i = 0; i < d; ++i)
        v(i) = gauss(rng) * (weights.empty() ? 1.0 : weights[i]);
    const Real n = v.norm();
    if (n == 0.0)
        throw InputError("weights annihilate every coordinate");
    return v / n;
}

}  // namespace

Real binomial_tail(Real alpha, int K)
{
    if (alpha < 0.0 || K < 0)
        throw InputError("binomial_tail: need alpha >= 0 and K >= 0");
    const int first = static_cast<int>(std::ceil(alpha));
    Real c = 1.0;
    Real head = 0.0;  // Σ_{K<n<first} |c_n| when K is below the one-sign regime
    for (int n = 0; n < std::max(K, first); ++n) {
        c *= (static_cast<Real>(n) - alpha) / static_cast<Real>(n + 1);
        if (n + 1 > K && n + 1 < first)
            head += std::abs(c);
    }
    // c is now c_max(K, first).
    const int base = std::max(K, first);
    if (alpha == 0.0)
        return 0.0;
    Real tail = std::abs(c) * std::abs(static_cast<Real>(base) - alpha) / alpha;
    if (base > K)
        tail += std::abs(c);
    return head + tail;
}

FracPowerPlan plan_frac_power(Real alpha, Real coef_tol)
{
    if (alpha < 0.0)
        throw InputError("plan_frac_power: alpha must be >= 0");
    if (coef_tol <= 0.0)
        throw InputError("plan_frac_power: tolerance must be positive");
    constexpr int kCap = 1000000;
    FracPowerPlan plan;
    plan.alpha = alpha;
    plan.coefficients.push_back(1.0);
    const int first = static_cast<int>(std::ceil(alpha));
    for (int n = 0;; ++n) {
        if (n >= first) {
            const Real tail = std::abs(plan.coefficients[n]) *
                              std::abs(static_cast<Real>(n) - alpha) /
                              (alpha > 0.0 ? alpha : 1.0);
            if (alpha == 0.0 || tail <= coef_tol) {
                plan.trunc = n;
                plan.tail_bound = alpha == 0.0 ? 0.0 : tail;
                return plan;
            }
        }
        if (n >= kCap)
            throw CapacityError("alpha too small / tol too tight");
        plan.coefficients.push_back(plan.coefficients[n] * (static_cast<Real>(n) - alpha) /
                                    static_cast<Real>(n + 1));
    }
}

Vector frac_power_series(const Matrix& T, Real alpha, const Vector& x, Real tol, int cap)
{
    if (alpha < 0.0)
        throw InputError("frac_power: alpha must be >= 0");
    if (tol <= 0.0)
        throw InputError("frac_power: tol must be positive");
    if (alpha == 0.0)
        return x;
    const Matrix pfix = fixed_projector(T);
    const Vector xperp = x - pfix * x;
    const auto out = run_series(T, alpha, xperp, tol, cap);
    if (!out.converged)
        throw CapacityError("alpha too small / tol too tight");
    return out.value;
}

FracPowerResult frac_power(const Matrix& T, Real alpha, const Vector& x, Real tol,
                           const FracPowerOptions& options)
{
    if (T.rows() != T.cols() || T.rows() != x.size())
        throw InputError("frac_power: dimension mismatch");
    if (alpha < 0.0)
        throw InputError("frac_power: alpha must be >= 0");
    if (tol <= 0.0)
        throw InputError("frac_power: tol must be positive");

    FracPowerResult res;
    res.value = Vector::Zero(x.size());
    const auto blocks = independent_blocks(T);
    res.blocks = static_cast<int>(blocks.size());
    const Real xnorm = x.norm();
    if (alpha == 0.0) {
        res.value = x;
        return res;
    }

    for (const auto& idx : blocks) {
        const Index b = static_cast<Index>(idx.size());
        Matrix tb(b, b);
        Vector xb(b);
        for (Index i = 0; i < b; ++i) {
            xb(i) = x(idx[i]);
            for (Index j = 0; j < b; ++j)
                tb(i, j) = T(idx[i], idx[j]);
        }
        if (spectral_norm(tb) > 1.0 + 1e-10)
            throw InputError("frac_power: T is not a contraction");
        const Real xbn = xb.norm();
        if (xbn == 0.0)
            continue;
        const Real tol_b = xnorm > 0.0 ? tol * xbn / xnorm : tol;
        const Vector xperp = xb - fixed_projector(tb) * xb;

        Vector eig_value;
        bool have_eig = false;
        Eigen::ComplexEigenSolver<Matrix> ces(tb);
        if (ces.info() == Eigen::Success) {
            const Matrix& V = ces.eigenvectors();
            Eigen::JacobiSVD<Matrix> svd(V);
            const auto& sv = svd.singularValues();
            const Real cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                                      : std::numeric_limits<Real>::infinity();
            if (cond < options.max_condition) {
                Vector coords = V.partialPivLu().solve(xperp);
                for (Index i = 0; i < b; ++i) {
                    const Complex one_minus = Complex(1.0, 0.0) - ces.eigenvalues()(i);
                    coords(i) *= std::abs(one_minus) < 1e-12 ? Complex(0.0, 0.0)
                                                             : std::pow(one_minus, alpha);
                }
                eig_value = V * coords;
                have_eig = true;
            }
        }

        const int cap = have_eig ? options.crosscheck_budget : options.series_cap;
        const auto series = run_series(tb, alpha, xperp, tol_b, cap);
        res.series_terms = std::max(res.series_terms, series.terms);
        Vector chosen;
        if (have_eig) {
            ++res.eigen_blocks;
            chosen = eig_value;
            if (series.converged) {
                const Real diff = (eig_value - series.value).norm();
                res.max_crosscheck_diff = std::max(res.max_crosscheck_diff, diff);
                if (diff > 10.0 * tol_b + 1e-14 * xbn)
                    throw NumericalError("frac_power: eigen path disagrees with the series");
                ++res.crosschecked;
            }
        } else {
            if (!series.converged)
                throw CapacityError("alpha too small / tol too tight");
            chosen = series.value;
        }
        for (Index i = 0; i < b; ++i)
            res.value(idx[i]) = chosen(i);
    }
    return res;
}

Vector frac_power_apply(const Matrix& T, Real alpha, const Vector& x, Real tol)
{
    return frac_power(T, alpha, x, tol).value;
}

AlphaVector make_alpha_vector(const CyclicProduct& cp, Real alpha, const Vector& y,
                              const Vector& z, Real tol)
{
    if (!(alpha > 0.0))
        throw InputError("make_alpha_vector: alpha must be positive");
    AlphaVector out;
    out.alpha = alpha;
    out.y = y;
    out.z = z;
    out.x = frac_power_apply(cp.T(), alpha, y, tol) + cp.PM().apply(z);
    return out;
}

AlphaVector make_alpha_vector(const CyclicProduct& cp, Real alpha, Seed seed,
                              std::span<const Real> weights)
{
    auto rng = engine(seed, 1);
    const Vector y = weighted_unit(cp.dim(), rng, weights);
    const Vector z = weighted_unit(cp.dim(), rng, weights);
    return make_alpha_vector(cp, alpha, y, z);
}

Real decay_slope(const IterationTrace& trace, int n_lo, int n_hi)
{
    if (n_lo < 1 || n_hi <= n_lo)
        throw InputError("decay_slope: need 1 <= n_lo < n_hi");
    if (n_hi >= static_cast<int>(trace.errors.size()))
        throw InputError("decay_slope: window exceeds the trace");
    if (n_hi - n_lo + 1 < 5)
        throw InputError("decay_slope: fewer than 5 usable points");
    Real sx = 0, sy = 0, sxx = 0, sxy = 0;
    const Real m = n_hi - n_lo + 1;
    for (int n = n_lo; n <= n_hi; ++n) {
        const Real e = trace.errors[n];
        if (!(e > 0.0))
            return -std::numeric_limits<Real>::infinity();
        const Real lx = std::log(static_cast<Real>(n));
        const Real ly = std::log(e);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

DecayReport decay_report(const IterationTrace& trace, Real alpha, int n_lo, int n_hi)
{
    DecayReport r;
    r.alpha = alpha;
    r.n_lo = n_lo;
    r.n_hi = n_hi;
    r.slope = decay_slope(trace, n_lo, n_hi);
    r.scaled_nonincreasing = true;
    Real prev = std::numeric_limits<Real>::infinity();
    for (int n = n_lo; n <= n_hi; ++n) {
        const Real v = std::pow(static_cast<Real>(n), alpha) * trace.errors[n];
        r.sup_n_alpha_e_n = std::max(r.sup_n_alpha_e_n, v);
        if (v > prev * (1.0 + 1e-12))
            r.scaled_nonincreasing = false;
        prev = v;
    }
    return r;
}

PartialSumResult partial_sum_characterization(const CyclicProduct& cp, const Vector& x,
                                              Real alpha, int n_max)
{
    if (!(alpha > 0.0) || alpha > 1.0)
        throw InputError("partial_sum_characterization: need 0 < alpha <= 1");
    if (n_max < 10)
        throw InputError("partial_sum_characterization: n_max must be >= 10");
    PartialSumResult out;
    Vector v = x;
    Vector sum = Vector::Zero(x.size());
    const int decade = n_max / 10;
    for (int k = 1; k <= n_max; ++k) {
        v = cp.sweep(v);
        sum += std::pow(static_cast<Real>(k), alpha - 1.0) * v;
        out.sup = std::max(out.sup, sum.norm());
        if (k == decade)
            out.sup_at_last_decade = out.sup;
    }
    out.bounded = out.sup - out.sup_at_last_decade < 1e-6;
    return out;
}

Vector super_poly_vector(const CyclicProduct& cp, std::span<const Real> alphas, Seed seed,
                         std::span<const Real> weights)
{
    if (alphas.empty())
        throw InputError("super_poly_vector: need at least one alpha");
    const Real amax = *std::max_element(alphas.begin(), alphas.end());
    return make_alpha_vector(cp, amax, seed, weights).x;
}

}  // namespace altproj
