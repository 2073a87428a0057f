#include "doctest.h"

#include <cmath>
#include <random>

#include "altproj/cyclic.hpp"
#include "altproj/errors.hpp"
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

CyclicProduct lines(Real theta)
{
    auto [a, b] = two_lines(theta);
    std::vector<Subspace> fam{a, b};
    return build_cyclic(fam);
}

}  // namespace

TEST_CASE("two lines follow cos^(2n-1)")
{
    const CyclicProduct cp = lines(kPi / 6);
    CHECK(operator_error_norm(cp, 0) == doctest::Approx(1.0));
    for (int n = 1; n <= 20; ++n)
        CHECK(std::abs(operator_error_norm(cp, n) - std::pow(std::sqrt(3.0) / 2.0, 2 * n - 1)) < 1e-12);
}

TEST_CASE("orthogonal lines give T = 0")
{
    const CyclicProduct cp = lines(kPi / 2);
    CHECK(cp.T().norm() < 1e-15);
}

TEST_CASE("iterate matches dense matrix powers")
{
    const auto fam = random_instance(7, {5, 4, 6}, 12);
    const CyclicProduct cp = build_cyclic(fam);
    const Vector x = random_unit(7, 3);
    const auto tr = iterate(cp, x, 30);
    Matrix power = Matrix::Identity(7, 7);
    const Vector px = cp.PM().apply(x);
    for (int n = 0; n <= 30; ++n) {
        CHECK(std::abs(tr.errors[n] - (power * x - px).norm()) < 1e-12);
        power = cp.T() * power;
    }
}

TEST_CASE("sparse factors agree with the dense product")
{
    const BlockAlignedModel model = block_aligned(40, AngleRule::inverse);
    const auto fam = model.subspaces();
    const CyclicProduct cp = build_cyclic(fam);
    const Matrix dense = projector(fam[1]).matrix() * projector(fam[0]).matrix();
    CHECK((cp.T() - dense).norm() < 1e-12);
    const Vector x = random_unit(cp.dim(), 8);
    CHECK((cp.sweep(x) - dense * x).norm() < 1e-12);
}

TEST_CASE("sweep diagnostic")
{
    const auto fam = random_instance(8, {6, 5, 7}, 4);
    const CyclicProduct cp = build_cyclic(fam);

    SUBCASE("x in M gives zeros")
    {
        REQUIRE(cp.M().rank() > 0);
        const Vector x = cp.M().basis().col(0);
        for (Real v : sweep_diagnostic(cp, x))
            CHECK(v < 1e-24);
    }
    SUBCASE("x in M_1 leaves the first entry at zero")
    {
        const Vector x = fam[0].basis() * random_unit(fam[0].rank(), 2);
        CHECK(sweep_diagnostic(cp, x).front() < 1e-24);
    }
    SUBCASE("entries sum to the budget")
    {
        for (Seed s = 0; s < 20; ++s) {
            const Vector x = random_unit(8, s);
            Real total = 0.0;
            const Real budget = sweep_budget(cp, x);
            for (Real v : sweep_diagnostic(cp, x)) {
                CHECK(v <= budget + 1e-10);
                total += v;
            }
            CHECK(total == doctest::Approx(budget).epsilon(1e-9));
        }
    }
}

TEST_CASE("unconditional sums on lines at pi/3")
{
    const CyclicProduct cp = lines(kPi / 3);
    const Vector x = random_unit(2, 5);
    const auto rep = unconditional_sum_test(cp, x, 50, 1e-6, 9);
    CHECK(rep.permutations_ok);
    CHECK(rep.telescoping_error < 1e-12);
    CHECK(rep.max_permuted_deviation <= 2e-6);
    CHECK(rep.sign_ok);
}

TEST_CASE("unconditional sum of x in M is zero")
{
    const auto fam = random_instance(6, {5, 4}, 2);
    const CyclicProduct cp = build_cyclic(fam);
    const Vector x = cp.M().basis().col(0);
    const auto rep = unconditional_sum_test(cp, x, 5, 1e-6, 1);
    CHECK(rep.max_permuted_deviation < 1e-12);
}

TEST_CASE("near-aligned block model exhausts the term cap")
{
    const BlockAlignedModel model = block_aligned(200, AngleRule::inverse);
    const auto fam = model.subspaces();
    const CyclicProduct cp = build_cyclic(fam);
    const Vector x = model.m1_direction(199);
    CHECK_THROWS_AS(unconditional_sum_test(cp, x, 2, 1e-12, 1, 1000), CapacityError);
}

TEST_CASE("rate bounds")
{
    CHECK(rate_bound(0.5, 2, 0) == 1.0);
    CHECK(rate_bound(0.5, 2, 2) == doctest::Approx(1.0 - 3.0 * 0.5 / 8.0));
    CHECK(iota2_rate_bound(1.0, 3, 4) == doctest::Approx(std::pow(1.0 - 3.0 / 27.0, 2.0)));
    CHECK_THROWS_AS(rate_bound(0.5, 1, 1), InputError);
}

TEST_CASE("Cesaro averages approach P_M x")
{
    const auto fam = random_instance(6, {5, 4}, 6);
    const CyclicProduct cp = build_cyclic(fam);
    const Vector x = random_unit(6, 1);
    CHECK((cesaro_average(cp, x, 20000) - cp.PM().apply(x)).norm() < 1e-3);
}

TEST_CASE("weak Cauchy sum converges on a random family")
{
    const auto fam = random_instance(6, {3, 4}, 6);
    const CyclicProduct cp = build_cyclic(fam);
    const auto res = weak_cauchy_sum(cp, random_unit(6, 1), random_unit(6, 2), 2000);
    CHECK(res.converged);
    CHECK(std::isfinite(res.sum));
}
