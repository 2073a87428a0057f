#include "doctest.h"

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "altproj/errors.hpp"
#include "altproj/fracpow.hpp"
#include "altproj/models.hpp"

using namespace altproj;

namespace {

Vector random_unit(Index d, Seed seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<Real> g;
    Vector v(d);
    for (Index i = 0; i < d; ++i)
        v(i) = Complex(g(rng), g(rng));
    return v / v.norm();
}

// (-1)^n binom(alpha, n) from the product formula.
Real coefficient(Real alpha, int n)
{
    Real c = 1.0;
    for (int j = 0; j < n; ++j)
        c *= (alpha - j) / (j + 1);
    return (n % 2 ? -1.0 : 1.0) * c;
}

Matrix random_product(Index d, Seed seed)
{
    const auto fam = random_instance(d, {d - 2, d - 1, d - 3}, seed);
    return build_cyclic(fam).T();
}

IterationTrace synthetic(const std::function<Real(int)>& e, int n_max)
{
    IterationTrace tr;
    for (int n = 0; n <= n_max; ++n)
        tr.errors.push_back(e(n));
    return tr;
}

}  // namespace

TEST_CASE("binomial coefficients")
{
    const auto plan = plan_frac_power(0.5, 1e-3);
    REQUIRE(plan.coefficients.size() >= 4);
    CHECK(plan.coefficients[0] == 1.0);
    CHECK(plan.coefficients[1] == -0.5);
    CHECK(plan.coefficients[2] == doctest::Approx(-0.125).epsilon(1e-15));
    CHECK(plan.coefficients[3] == doctest::Approx(-0.0625).epsilon(1e-15));
    for (int n = 0; n < 40; ++n)
        CHECK(plan_frac_power(1.7, 1e-8).coefficients[n] ==
              doctest::Approx(coefficient(1.7, n)).epsilon(1e-12));
    CHECK(plan.tail_bound <= 1e-3);
}

TEST_CASE("tail formula matches direct partial sums")
{
    for (Real alpha : {0.25, 0.5, 1.5, 2.5}) {
        const int K = 10;
        Real direct = 0.0;
        for (int n = K + 1; n <= K + 500; ++n)
            direct += std::abs(coefficient(alpha, n));
        CHECK(binomial_tail(alpha, K) - binomial_tail(alpha, K + 500) ==
              doctest::Approx(direct).epsilon(1e-10));
    }
}

TEST_CASE("integer powers and alpha = 0")
{
    const Matrix T = random_product(6, 3);
    const Vector x = random_unit(6, 1);
    const Matrix id = Matrix::Identity(6, 6);
    CHECK((frac_power_apply(T, 0.0, x, 1e-12) - x).norm() < 1e-14);
    CHECK((frac_power_apply(T, 1.0, x, 1e-12) - (x - T * x)).norm() < 1e-12);
    CHECK((frac_power_apply(T, 2.0, x, 1e-12) - (id - T) * ((id - T) * x)).norm() < 1e-10);
}

TEST_CASE("semigroup property")
{
    for (Seed seed = 1; seed <= 5; ++seed) {
        const Matrix T = random_product(6, seed);
        const Vector x = random_unit(6, seed + 10);
        const Real tol = 1e-9;
        for (Real a : {0.25, 0.5, 1.0})
            for (Real b : {0.25, 0.5, 1.0}) {
                const Vector lhs = frac_power_apply(T, a, frac_power_apply(T, b, x, tol), tol);
                CHECK((lhs - frac_power_apply(T, a + b, x, tol)).norm() <= 20 * tol);
            }
    }
}

TEST_CASE("Hermitian operators against the spectral oracle")
{
    const auto fam = random_instance(7, {4, 5}, 2);
    const Matrix T = 0.5 * (projector(fam[0]).matrix() + projector(fam[1]).matrix());
    Eigen::SelfAdjointEigenSolver<Matrix> es(T);
    const Vector x = random_unit(7, 4);
    for (Real alpha : {0.3, 0.5, 1.5}) {
        Vector coeff = es.eigenvectors().adjoint() * x;
        for (Index i = 0; i < 7; ++i) {
            const Real lam = es.eigenvalues()(i);
            coeff(i) *= lam > 1.0 - 1e-12 ? 0.0 : std::pow(1.0 - lam, alpha);
        }
        const Vector oracle = es.eigenvectors() * coeff;
        CHECK((frac_power_apply(T, alpha, x, 1e-10) - oracle).norm() < 1e-8);
    }
}

TEST_CASE("series reference route agrees with the blocked evaluation")
{
    const Matrix T = random_product(8, 6);
    const Vector x = random_unit(8, 2);
    const auto res = frac_power(T, 0.5, x, 1e-8);
    CHECK((res.value - frac_power_series(T, 0.5, x, 1e-8)).norm() < 1e-7);
}

TEST_CASE("nilpotent product uses the series")
{
    Matrix T = Matrix::Zero(2, 2);
    T(1, 0) = 0.5;
    const Vector x = random_unit(2, 1);
    const Vector expect = x - 0.5 * (T * x);  // (I - T)^{1/2} = I - T/2 when T^2 = 0
    CHECK((frac_power_apply(T, 0.5, x, 1e-12) - expect).norm() < 1e-12);
}

TEST_CASE("decay slope")
{
    const auto sq = synthetic([](int n) { return n == 0 ? 1.0 : 1.0 / (Real(n) * n); }, 100);
    CHECK(decay_slope(sq, 10, 100) == doctest::Approx(-2.0).epsilon(1e-9));
    const auto flat = synthetic([](int) { return 0.3; }, 20);
    CHECK(std::abs(decay_slope(flat, 1, 20)) < 1e-12);
    CHECK_THROWS_AS(decay_slope(flat, 1, 4), InputError);
    const auto dead = synthetic([](int n) { return n < 5 ? 1.0 : 0.0; }, 20);
    CHECK(std::isinf(decay_slope(dead, 1, 20)));
}

TEST_CASE("alpha vectors")
{
    const auto fam = random_instance(6, {5, 4}, 3);
    const CyclicProduct cp = build_cyclic(fam);
    const AlphaVector av = make_alpha_vector(cp, 0.5, 7);
    const Vector r = av.x - cp.PM().apply(av.x);
    CHECK((cp.M().basis().adjoint() * r).norm() < 1e-10);
    CHECK((cp.PM().apply(av.x) - cp.PM().apply(av.z)).norm() < 1e-10);
    const AlphaVector same = make_alpha_vector(cp, 0.5, 7);
    CHECK(same.x == av.x);

    const AlphaVector fixed = make_alpha_vector(cp, 0.5, Vector::Zero(6), av.z);
    const auto tr = iterate(cp, fixed.x, 5);
    for (Real e : tr.errors)
        CHECK(e < 1e-12);
}

TEST_CASE("T = 0: alpha vector is y + P_M z")
{
    auto [a, b] = two_lines(kPi / 2);
    std::vector<Subspace> fam{a, b};
    const CyclicProduct cp = build_cyclic(fam);
    const AlphaVector av = make_alpha_vector(cp, 0.5, 2);
    CHECK((av.x - av.y).norm() < 1e-14);
    const auto ps = partial_sum_characterization(cp, av.x, 0.5, 100);
    CHECK(ps.sup < 1e-15);
    const Vector sp = super_poly_vector(cp, std::vector<Real>{1.0, 3.0}, 4);
    CHECK(iterate(cp, sp, 2).errors[1] < 1e-14);
}

TEST_CASE("partial sums diverge on M")
{
    const auto fam = random_instance(5, {4, 4}, 1);
    const CyclicProduct cp = build_cyclic(fam);
    REQUIRE(cp.M().rank() > 0);
    const auto ps = partial_sum_characterization(cp, cp.M().basis().col(0), 0.5, 10000);
    CHECK_FALSE(ps.bounded);
}

TEST_CASE("block model decay for alpha = 1")
{
    const BlockAlignedModel model = block_aligned(100, AngleRule::inverse);
    const auto fam = model.subspaces();
    const CyclicProduct cp = build_cyclic(fam);
    const AlphaVector av = make_alpha_vector(cp, 1.0, 5, model.square_summable_weights(2.0));
    const auto tr = iterate(cp, av.x, 1000);
    CHECK(decay_slope(tr, 100, 1000) <= -1.0 + 0.1);
}
