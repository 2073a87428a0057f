#include "altproj/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "altproj/errors.hpp"
#include "altproj/spectral.hpp"

namespace altproj {

namespace {

void require_family(std::span<const Subspace> subspaces, const Subspace& m)
{
    if (subspaces.size() < 2)
        throw InputError("need at least two subspaces");
    for (const auto& s : subspaces) {
        if (s.dim() != m.dim())
            throw InputError("subspaces live in different ambient spaces");
    }
}

/// Σ_k (I - P_k).
Matrix distance_form(std::span<const Subspace> subspaces)
{
    const Index d = subspaces.front().dim();
    Matrix s = Matrix::Zero(d, d);
    for (const auto& mk : subspaces)
        s += Matrix::Identity(d, d) - mk.basis() * mk.basis().adjoint();
    return s;
}

Real min_eigenvalue(const Matrix& a)
{
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(a), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

std::mt19937_64 restart_engine(Seed seed, int restart)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(restart)};
    return std::mt19937_64(seq);
}

Vector random_unit(Index r, std::mt19937_64& rng)
{
    std::normal_distribution<Real> gauss;
    Vector v(r);
    for (Index i = 0; i < r; ++i)
        v(i) = Complex(gauss(rng), gauss(rng));
    return v / v.norm();
}

class MaxDistanceObjective {
  public:
    MaxDistanceObjective(std::span<const Subspace> subspaces, const Matrix& q)
    {
        const Index d = q.rows();
        forms_.reserve(subspaces.size());
        for (const auto& mk : subspaces) {
            const Matrix comp = Matrix::Identity(d, d) - mk.basis() * mk.basis().adjoint();
            forms_.push_back(hermitian_part(q.adjoint() * comp * q));
        }
    }

    /// Value and index of the active form at a unit coefficient vector.
    std::pair<Real, std::size_t> operator()(const Vector& a) const
    {
        Real best = -1.0;
        std::size_t arg = 0;
        for (std::size_t k = 0; k < forms_.size(); ++k) {
            const Real v = std::max(0.0, a.dot(forms_[k] * a).real());
            if (v > best) {
                best = v;
                arg = k;
            }
        }
        return {std::sqrt(best), arg};
    }

    const Matrix& form(std::size_t k) const { return forms_[k]; }

  private:
    std::vector<Matrix> forms_;
};

Real local_search(const MaxDistanceObjective& f, Index r, std::mt19937_64& rng)
{
    Vector a = random_unit(r, rng);
    auto [fa, active] = f(a);
    Real step = 0.5;
    std::normal_distribution<Real> gauss;
    int guard = 0;
    while (step > 1e-10 && ++guard < 200000) {
        std::vector<Vector> dirs;
        dirs.reserve(4 * r + 5);
        Vector g = f.form(active) * a;
        g -= a.dot(g) * a;
        if (g.norm() > 0.0)
            dirs.push_back(-g / g.norm());
        for (Index i = 0; i < r; ++i) {
            for (Complex unit : {Complex(1, 0), Complex(-1, 0), Complex(0, 1), Complex(0, -1)}) {
                Vector e = Vector::Zero(r);
                e(i) = unit;
                dirs.push_back(std::move(e));
            }
        }
        for (int j = 0; j < 4; ++j)
            dirs.push_back(random_unit(r, rng));

        bool improved = false;
        for (const auto& dir : dirs) {
            Vector cand = a + step * dir;
            const Real nrm = cand.norm();
            if (nrm == 0.0)
                continue;
            cand /= nrm;
            auto [fc, ac] = f(cand);
            if (fc < fa - 1e-15) {
                a = std::move(cand);
                fa = fc;
                active = ac;
                improved = true;
                break;
            }
        }
        if (!improved)
            step *= 0.5;
    }
    return fa;
}

Real search_on(std::span<const Subspace> subspaces, const Matrix& q, int restarts, Seed seed,
               int stream)
{
    const MaxDistanceObjective f(subspaces, q);
    Real best = std::numeric_limits<Real>::infinity();
    for (int i = 0; i < restarts; ++i) {
        auto rng = restart_engine(seed, stream * 100003 + i);
        best = std::min(best, local_search(f, q.cols(), rng));
    }
    return best;
}

}  // namespace

GramBlock gram_block(std::span<const Subspace> subspaces, const Subspace& m)
{
    require_family(subspaces, m);
    std::vector<Matrix> bases;
    GramBlock out;
    out.offsets.push_back(0);
    for (const auto& mk : subspaces) {
        bases.push_back(complement_within(mk, m).basis());
        out.offsets.push_back(out.offsets.back() + bases.back().cols());
    }
    const Index d = m.dim();
    Matrix stacked(d, out.offsets.back());
    for (std::size_t k = 0; k < bases.size(); ++k)
        stacked.middleCols(out.offsets[k], bases[k].cols()) = bases[k];
    out.G = hermitian_part(stacked.adjoint() * stacked);
    return out;
}

Real friedrichs_number(std::span<const Subspace> subspaces, const Subspace& m)
{
    const GramBlock gb = gram_block(subspaces, m);
    if (gb.G.rows() == 0)
        return 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(gb.G, Eigen::EigenvaluesOnly);
    const Real lmax = es.eigenvalues()(gb.G.rows() - 1);
    const Real c = (lmax - 1.0) / static_cast<Real>(subspaces.size() - 1);
    return std::clamp(c, 0.0, 1.0);
}

Real ell2(Real c, int n_subspaces)
{
    if (n_subspaces < 2)
        throw InputError("ell2: need N >= 2");
    return std::sqrt(static_cast<Real>(n_subspaces - 1) * std::max(0.0, 1.0 - c));
}

Real ell2_direct(std::span<const Subspace> subspaces, const Subspace& m)
{
    require_family(subspaces, m);
    if (m.is_whole())
        throw InputError("ell2_direct: M is the whole space, infimum over an empty set");
    const Matrix q = orthogonal_complement(m).basis();
    const Real lmin = min_eigenvalue(q.adjoint() * distance_form(subspaces) * q);
    return std::sqrt(std::max(0.0, lmin));
}

Iota2Result iota2(std::span<const Subspace> subspaces, const Subspace& m)
{
    require_family(subspaces, m);
    const Matrix s = distance_form(subspaces);
    Iota2Result out;
    for (const auto& mn : subspaces) {
        const Subspace inner = complement_within(mn, m);
        if (inner.is_zero())
            continue;
        const Matrix& b = inner.basis();
        const Real v = std::sqrt(std::max(0.0, min_eigenvalue(b.adjoint() * s * b)));
        out.value = out.empty ? v : std::min(out.value, v);
        out.empty = false;
    }
    return out;
}

Real minimax_inclination_estimate(std::span<const Subspace> subspaces, const Subspace& m,
                                  InclinationKind kind, int restarts, Seed seed)
{
    require_family(subspaces, m);
    if (restarts < 1)
        throw InputError("minimax_inclination_estimate: restarts must be >= 1");
    constexpr Real inf = std::numeric_limits<Real>::infinity();
    if (kind == InclinationKind::global) {
        if (m.is_whole())
            return inf;
        return search_on(subspaces, orthogonal_complement(m).basis(), restarts, seed, 0);
    }
    Real best = inf;
    int stream = 1;
    for (const auto& mn : subspaces) {
        const Subspace inner = complement_within(mn, m);
        if (!inner.is_zero())
            best = std::min(best, search_on(subspaces, inner.basis(), restarts, seed, stream));
        ++stream;
    }
    return best;
}

Real rate_base(Real c, int n_subspaces)
{
    if (n_subspaces < 2)
        throw InputError("rate_base: need N >= 2");
    const Real n = static_cast<Real>(n_subspaces);
    const Real sq = 1.0 - 3.0 * (n - 1.0) * (1.0 - c) / (n * n * n);
    return std::sqrt(std::clamp(sq, 0.0, 1.0));
}

std::vector<InequalityCheck> sandwich_check(const GeometryReport& r, Real tol)
{
    const Real n = static_cast<Real>(r.N);
    std::vector<InequalityCheck> out;
    const Real lower = (n - 1.0) * (1.0 - r.c) / (2.0 * n);
    // ell_est >= ℓ >= lower, so this comparison is sound for an upper estimate.
    out.push_back({"ell_est >= (N-1)(1-c)/(2N)", r.ell_est >= lower - tol, r.ell_est - lower, false});
    const Real upper = std::sqrt((n - 1.0) * std::max(0.0, 1.0 - r.c));
    out.push_back({"ell_est <= sqrt((N-1)(1-c))", r.ell_est <= upper + tol, upper - r.ell_est, true});
    out.push_back({"iota_est >= ell_est", r.iota_est >= r.ell_est - tol, r.iota_est - r.ell_est, true});
    out.push_back({"iota2 >= ell2", r.iota2 >= r.ell2 - 1e-9, r.iota2 - r.ell2, false});
    return out;
}

GeometryReport analyze_geometry(std::span<const Subspace> subspaces, const Subspace& m,
                                const GeometryOptions& options)
{
    require_family(subspaces, m);
    GeometryReport r;
    r.N = static_cast<int>(subspaces.size());
    r.c = friedrichs_number(subspaces, m);
    r.ell2 = ell2(r.c, r.N);
    r.iota2 = iota2(subspaces, m).value;
    r.ell_est = minimax_inclination_estimate(subspaces, m, InclinationKind::global,
                                             options.restarts, options.seed);
    r.iota_est = minimax_inclination_estimate(subspaces, m, InclinationKind::inner,
                                              options.restarts, options.seed);
    r.rate_base = rate_base(r.c, r.N);
    r.theta0 = theta0(r.c, r.N);
    return r;
}

}  // namespace altproj
