#include "doctest.h"

#include <cmath>
#include <random>

#include <Eigen/SVD>

#include "altproj/geometry.hpp"
#include "altproj/models.hpp"

using namespace altproj;

namespace {

// Direct minimax of max_k dist(x, M_k) / dist(x, M) over a grid of real unit vectors in R^2.
Real sweep_oracle_plane(const std::vector<Subspace>& fam)
{
    Real best = 1e300;
    for (int j = 0; j < 200000; ++j) {
        const Real t = kPi * j / 200000.0;
        Vector x(2);
        x << std::cos(t), std::sin(t);
        Real worst = 0.0;
        for (const auto& m : fam)
            worst = std::max(worst, (x - m.basis() * (m.basis().adjoint() * x)).norm());
        best = std::min(best, worst);
    }
    return best;
}

}  // namespace

TEST_CASE("two lines: c = cos theta and the inclination identity")
{
    for (Real theta : {kPi / 6, kPi / 4, kPi / 3}) {
        auto [a, b] = two_lines(theta);
        std::vector<Subspace> fam{a, b};
        const Subspace m = Subspace::zero(2);
        const Real c = friedrichs_number(fam, m);
        CHECK(c == doctest::Approx(std::cos(theta)).epsilon(1e-12));
        CHECK(ell2_direct(fam, m) == doctest::Approx(ell2(c, 2)).epsilon(1e-10));
        CHECK(iota2(fam, m).value >= ell2(c, 2) - 1e-9);
    }
}

TEST_CASE("N = 2, M = {0}: c is the top singular value of B1^H B2")
{
    for (Seed seed = 1; seed <= 20; ++seed) {
        const auto fam = random_instance(9, {3, 4}, seed);
        const Subspace m = intersection(fam);
        REQUIRE(m.is_zero());
        const Matrix cross = fam[0].basis().adjoint() * fam[1].basis();
        const Real sv = Eigen::JacobiSVD<Matrix>(cross).singularValues()(0);
        CHECK(std::abs(friedrichs_number(fam, m) - sv) < 1e-9);
    }
}

TEST_CASE("ell2 identity and ordering on random families")
{
    for (Seed seed = 1; seed <= 30; ++seed) {
        const Index d = 4 + static_cast<Index>(seed % 8);
        const auto fam = random_instance(d, {d - 1, d / 2, d - 2}, seed);
        const Subspace m = intersection(fam);
        const Real c = friedrichs_number(fam, m);
        CHECK(c >= 0.0);
        CHECK(c <= 1.0);
        CHECK(std::abs(ell2_direct(fam, m) - ell2(c, 3)) < 1e-8);
        CHECK(iota2(fam, m).value >= ell2(c, 3) - 1e-9);
    }
}

TEST_CASE("orthogonal lines: inner estimate 1, global estimate 1/sqrt 2")
{
    auto [a, b] = two_lines(kPi / 2);
    std::vector<Subspace> fam{a, b};
    const Subspace m = Subspace::zero(2);
    const Real oracle = sweep_oracle_plane(fam);
    CHECK(oracle == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-6));
    const Real global = minimax_inclination_estimate(fam, m, InclinationKind::global, 8, 1);
    CHECK(global == doctest::Approx(oracle).epsilon(1e-6));
    const Real inner = minimax_inclination_estimate(fam, m, InclinationKind::inner, 8, 1);
    CHECK(inner == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("global estimate against the plane sweep oracle")
{
    for (Real theta : {0.3, 0.7, 1.2}) {
        auto [a, b] = two_lines(theta);
        std::vector<Subspace> fam{a, b};
        const Real est = minimax_inclination_estimate(fam, Subspace::zero(2), InclinationKind::global, 8, 5);
        // minimax sits on the bisector: sin(theta/2)
        const Real oracle = std::sin(theta / 2);
        CHECK(sweep_oracle_plane(fam) == doctest::Approx(oracle).epsilon(1e-4));
        CHECK(est >= oracle - 1e-9);
        CHECK(est <= oracle * (1.0 + 1e-3));
    }
}

TEST_CASE("rate base and the sound sandwich inequality")
{
    CHECK(rate_base(1.0, 3) == 1.0);
    CHECK(rate_base(0.0, 2) == doctest::Approx(std::sqrt(1.0 - 3.0 / 8.0)));
    for (Seed seed = 1; seed <= 10; ++seed) {
        const auto fam = random_instance(6, {4, 3, 5}, seed);
        const Subspace m = intersection(fam);
        const GeometryReport rep = analyze_geometry(fam, m, {4, seed});
        for (const auto& chk : sandwich_check(rep))
            if (!chk.heuristic)
                CHECK_MESSAGE(chk.satisfied, chk.name);
    }
}

TEST_CASE("every subspace equal to M gives c = 0 and an empty inner inclination")
{
    const auto fam = random_instance(5, {2, 3}, 3);
    std::vector<Subspace> same{fam[0], fam[0]};
    const Subspace m = intersection(same);
    CHECK(friedrichs_number(same, m) == 0.0);
    CHECK(iota2(same, m).empty);
}
