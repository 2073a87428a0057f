#include "altproj/cyclic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "altproj/errors.hpp"

namespace altproj {

namespace {

constexpr Real kSparseFill = 0.1;

std::mt19937_64 stream_engine(Seed seed, std::uint32_t stream)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      stream};
    return std::mt19937_64(seq);
}

Eigen::SparseMatrix<Complex> to_sparse(const Matrix& m)
{
    std::vector<Eigen::Triplet<Complex>> trip;
    for (Index j = 0; j < m.cols(); ++j) {
        for (Index i = 0; i < m.rows(); ++i) {
            if (m(i, j) != Complex(0.0, 0.0))
                trip.emplace_back(i, j, m(i, j));
        }
    }
    Eigen::SparseMatrix<Complex> s(m.rows(), m.cols());
    s.setFromTriplets(trip.begin(), trip.end());
    s.makeCompressed();
    return s;
}

}  // namespace

CyclicProduct::CyclicProduct(std::vector<Projector> factors, Subspace intersection)
    : factors_(std::move(factors)), m_(std::move(intersection)), pm_(projector(m_))
{
    if (factors_.size() < 2)
        throw InputError("CyclicProduct: need at least two factors");
    const Index d = m_.dim();
    for (const auto& p : factors_) {
        if (p.dim() != d)
            throw InputError("CyclicProduct: factor dimension mismatch");
    }

    bool all_sparse = true;
    for (const auto& p : factors_) {
        const Index nnz = (p.matrix().array() != Complex(0.0, 0.0)).count();
        all_sparse = all_sparse && static_cast<Real>(nnz) < kSparseFill * static_cast<Real>(d * d);
    }
    if (all_sparse && d > 16) {
        for (const auto& p : factors_)
            sparse_.push_back(to_sparse(p.matrix()));
        Eigen::SparseMatrix<Complex> t = sparse_.front();
        for (std::size_t k = 1; k < sparse_.size(); ++k)
            t = (sparse_[k] * t).pruned();
        T_ = Matrix(t);
    } else {
        T_ = factors_.front().matrix();
        for (std::size_t k = 1; k < factors_.size(); ++k)
            T_ = factors_[k].matrix() * T_;
    }

    const Matrix& b = m_.basis();
    if (b.cols() > 0) {
        const Real right = (T_ * b - b).cwiseAbs().maxCoeff();
        const Real left = (b.adjoint() * T_ - b.adjoint()).cwiseAbs().maxCoeff();
        if (right > 1e-9 || left > 1e-9)
            throw NumericalError("CyclicProduct: T does not fix the intersection");
    }
}

Vector CyclicProduct::apply_factor(std::size_t k, const Vector& x) const
{
    if (!sparse_.empty())
        return sparse_[k] * x;
    return factors_[k].matrix() * x;
}

Vector CyclicProduct::sweep(const Vector& x) const
{
    Vector v = x;
    for (std::size_t k = 0; k < factors_.size(); ++k)
        v = apply_factor(k, v);
    return v;
}

std::vector<Vector> CyclicProduct::partial_sweeps(const Vector& x) const
{
    std::vector<Vector> out;
    out.reserve(factors_.size() + 1);
    out.push_back(x);
    for (std::size_t k = 0; k < factors_.size(); ++k)
        out.push_back(apply_factor(k, out.back()));
    return out;
}

CyclicProduct build_cyclic(std::span<const Subspace> subspaces, Real eig_tol)
{
    if (subspaces.size() < 2)
        throw InputError("build_cyclic: need at least two subspaces");
    std::vector<Projector> factors;
    factors.reserve(subspaces.size());
    for (const auto& s : subspaces)
        factors.push_back(projector(s));
    return CyclicProduct(std::move(factors), intersection(subspaces, eig_tol));
}

IterationTrace iterate(const CyclicProduct& cp, const Vector& x, int n_max,
                       const BoundInputs& bounds)
{
    if (n_max < 1)
        throw InputError("iterate: n_max must be >= 1");
    if (x.size() != cp.dim())
        throw InputError("iterate: vector length does not match ambient dimension");
    const Vector target = cp.PM().apply(x);
    IterationTrace tr;
    tr.errors.reserve(n_max + 1);
    Vector xn = x;
    tr.x0_norm = (x - target).norm();
    for (int n = 0; n <= n_max; ++n) {
        if (n > 0)
            xn = cp.sweep(xn);
        const Real e = (xn - target).norm();
        tr.errors.push_back(e);
        tr.bound_c.push_back(rate_bound(bounds.c, cp.N(), n) * tr.x0_norm);
        tr.bound_iota2.push_back(iota2_rate_bound(bounds.iota2, cp.N(), n) * tr.x0_norm);
    }
    return tr;
}

Real operator_error_norm(const CyclicProduct& cp, int n)
{
    if (n < 0)
        throw InputError("operator_error_norm: n must be >= 0");
    const Index d = cp.dim();
    Matrix tn = Matrix::Identity(d, d);
    for (int k = 0; k < n; ++k)
        tn = cp.T() * tn;
    return spectral_norm(tn - cp.PM().matrix());
}

Real rate_bound(Real c, int n_subspaces, int n)
{
    if (n_subspaces < 2 || n < 0)
        throw InputError("rate_bound: need N >= 2 and n >= 0");
    const Real nn = static_cast<Real>(n_subspaces);
    const Real base = std::clamp(1.0 - 3.0 * (nn - 1.0) * (1.0 - c) / (nn * nn * nn), 0.0, 1.0);
    return std::pow(base, 0.5 * n);
}

Real iota2_rate_bound(Real iota2, int n_subspaces, int n)
{
    if (n_subspaces < 2 || n < 0 || iota2 < 0.0)
        throw InputError("iota2_rate_bound: need iota2 >= 0, N >= 2 and n >= 0");
    const Real nn = static_cast<Real>(n_subspaces);
    const Real base = std::clamp(1.0 - 3.0 * iota2 * iota2 / (nn * nn * nn), 0.0, 1.0);
    return std::pow(base, 0.5 * n);
}

std::vector<Real> sweep_diagnostic(const CyclicProduct& cp, const Vector& x)
{
    const auto stages = cp.partial_sweeps(x);
    std::vector<Real> out;
    out.reserve(cp.factors().size());
    // u_{k-1} - u_k = stage_{k-1} - stage_k: the P_M x shift cancels.
    for (std::size_t k = 1; k < stages.size(); ++k)
        out.push_back((stages[k - 1] - stages[k]).squaredNorm());
    return out;
}

Real sweep_budget(const CyclicProduct& cp, const Vector& x)
{
    const Vector target = cp.PM().apply(x);
    return (x - target).squaredNorm() - (cp.sweep(x) - target).squaredNorm();
}

UnconditionalSumReport unconditional_sum_test(const CyclicProduct& cp, const Vector& x,
                                              int num_perms, Real trunc_tol, Seed seed,
                                              int max_terms)
{
    if (num_perms < 1)
        throw InputError("unconditional_sum_test: num_perms must be >= 1");
    if (trunc_tol <= 0.0)
        throw InputError("unconditional_sum_test: trunc_tol must be positive");
    constexpr Real kSafety = 10.0;
    constexpr int kRatioWindow = 10;

    const Matrix& T = cp.T();
    std::vector<Vector> terms;
    std::vector<Real> norms;
    terms.push_back(x - T * x);
    norms.push_back(terms.back().norm());

    UnconditionalSumReport rep;
    int K = -1;
    for (int n = 0;; ++n) {
        if (norms[n] == 0.0) {
            K = n;
            rep.tail_estimate = 0.0;
            break;
        }
        if (n >= 1) {
            Real ratio = 0.0;
            for (int j = std::max(1, n - kRatioWindow + 1); j <= n; ++j)
                ratio = std::max(ratio, norms[j] / norms[j - 1]);
            if (ratio < 1.0) {
                const Real tail = norms[n] * ratio / (1.0 - ratio);
                if (kSafety * tail < trunc_tol) {
                    K = n + 1;
                    rep.tail_estimate = tail;
                    break;
                }
            }
        }
        if (n + 1 >= max_terms)
            throw CapacityError(
                "aligned or near-aligned instance; increase cap or tolerance");
        terms.push_back(T * terms.back());
        norms.push_back(terms.back().norm());
    }
    rep.K = K;
    while (static_cast<int>(terms.size()) < 2 * std::max(K, 1))
        terms.push_back(T * terms.back());

    // Telescoping: Σ_{n<K} y_n = x - T^K x.
    Vector partial = Vector::Zero(x.size());
    Vector tk = x;
    for (int n = 0; n < K; ++n) {
        partial += terms[n];
        tk = T * tk;
    }
    rep.telescoping_error = (partial - (x - tk)).norm();

    const Vector limit = x - cp.PM().apply(x);
    const int total = static_cast<int>(terms.size());
    std::vector<int> order(total);
    Real worst = 0.0;
    for (int p = 0; p < num_perms; ++p) {
        std::iota(order.begin(), order.end(), 0);
        auto rng = stream_engine(seed, static_cast<std::uint32_t>(p));
        std::shuffle(order.begin(), order.end(), rng);
        Vector s = Vector::Zero(x.size());
        int seen_head = 0;
        for (int m = 0; m < total; ++m) {
            s += terms[order[m]];
            if (order[m] < K)
                ++seen_head;
            if (seen_head == K)
                worst = std::max(worst, (s - limit).norm());
        }
        if (K == 0)
            worst = std::max(worst, limit.norm());
    }
    rep.max_permuted_deviation = worst;
    rep.permutations_ok = worst <= 2.0 * trunc_tol;

    // Sign-flip sums against Σ ||T^k (I - T)||.
    const Index d = cp.dim();
    Matrix tk_res = Matrix::Identity(d, d) - T;
    Real bound = 0.0;
    for (int k = 0; k < K; ++k) {
        bound += spectral_norm(tk_res);
        tk_res = T * tk_res;
    }
    rep.ritt_constant_bound = bound;
    const Real xn = x.norm();
    Real ratio = 0.0;
    auto rng = stream_engine(seed, 0xffffu);
    std::bernoulli_distribution coin(0.5);
    for (int pattern = 0; pattern < 10; ++pattern) {
        Vector s = Vector::Zero(x.size());
        for (int k = 0; k < K; ++k)
            s += (coin(rng) ? 1.0 : -1.0) * terms[k];
        if (xn > 0.0)
            ratio = std::max(ratio, s.norm() / xn);
    }
    rep.sign_ratio = ratio;
    rep.sign_ok = ratio <= bound + 1e-12;
    return rep;
}

WeakCauchyResult weak_cauchy_sum(const CyclicProduct& cp, const Vector& x, const Vector& w,
                                 int n_max)
{
    if (n_max < 0)
        throw InputError("weak_cauchy_sum: n_max must be >= 0");
    Vector y = x - cp.T() * x;
    const int late = n_max - n_max / 10;
    WeakCauchyResult out;
    Real late_sum = 0.0;
    for (int n = 0; n <= n_max; ++n) {
        const Real term = std::abs(w.dot(y));
        out.sum += term;
        if (n > late)
            late_sum += term;
        y = cp.T() * y;
    }
    out.converged = late_sum <= 1e-8;
    return out;
}

Vector cesaro_average(const CyclicProduct& cp, const Vector& x, int n)
{
    if (n < 0)
        throw InputError("cesaro_average: n must be >= 0");
    Vector acc = Vector::Zero(x.size());
    Vector tk = x;
    for (int k = 0; k <= n; ++k) {
        acc += tk;
        if (k < n)
            tk = cp.sweep(tk);
    }
    return acc / static_cast<Real>(n + 1);
}

}  // namespace altproj
