#include "doctest.h"

#include <Eigen/LU>

#include "altproj/errors.hpp"
#include "altproj/models.hpp"
#include "altproj/subspace.hpp"

using namespace altproj;

namespace {

// dim ker [I-P_1; ...; I-P_N] by full-pivot LU, independent of the eigen route.
Index null_space_dim(const std::vector<Subspace>& fam)
{
    const Index d = fam.front().dim();
    Matrix stacked(d * static_cast<Index>(fam.size()), d);
    for (std::size_t k = 0; k < fam.size(); ++k)
        stacked.middleRows(static_cast<Index>(k) * d, d) =
            Matrix::Identity(d, d) - fam[k].basis() * fam[k].basis().adjoint();
    Eigen::FullPivLU<Matrix> lu(stacked);
    lu.setThreshold(1e-8);
    return d - lu.rank();
}

}  // namespace

TEST_CASE("orthonormalize drops dependent columns")
{
    Matrix a(4, 3);
    a << 1, 0, 1,
         0, 1, 1,
         0, 0, 0,
         0, 0, 0;
    const Subspace s = orthonormalize(a);
    CHECK(s.rank() == 2);
    CHECK((s.basis().adjoint() * s.basis() - Matrix::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("constructors validate their invariants")
{
    Matrix b(2, 1);
    b << 1, 1;
    CHECK_THROWS_AS(Subspace{b}, InputError);
    Matrix p(2, 2);
    p << 1, 1, 0, 1;
    CHECK_THROWS_AS(Projector{p}, InputError);
    CHECK(Subspace::zero(3).is_zero());
    CHECK(Subspace::whole(3).is_whole());
}

TEST_CASE("intersection dimension matches the null-space oracle")
{
    for (Seed seed = 1; seed <= 40; ++seed) {
        const Index d = 3 + static_cast<Index>(seed % 10);
        std::vector<Index> ranks{d - 1, d - 1 - static_cast<Index>(seed % 2), d / 2 + 1};
        const auto fam = random_instance(d, ranks, seed);
        const Subspace m = intersection(fam);
        CHECK(m.rank() == null_space_dim(fam));
        for (const auto& mk : fam)
            CHECK(contains(mk, m.basis(), 1e-10));
    }
}

TEST_CASE("complement within M_k is orthogonal to M and has the right rank")
{
    const auto fam = random_instance(8, {6, 6}, 3);
    const Subspace m = intersection(fam);
    REQUIRE(m.rank() == 4);
    for (const auto& mk : fam) {
        const Subspace c = complement_within(mk, m);
        CHECK(c.rank() == mk.rank() - m.rank());
        CHECK((m.basis().adjoint() * c.basis()).norm() < 1e-10);
        CHECK(contains(mk, c.basis(), 1e-10));
    }
}

TEST_CASE("orthogonal complement and distance")
{
    const auto fam = random_instance(6, {2, 3}, 9);
    const Subspace perp = orthogonal_complement(fam[0]);
    CHECK(perp.rank() == 4);
    CHECK((perp.basis().adjoint() * fam[0].basis()).norm() < 1e-12);
    CHECK(subspace_distance(fam[0], fam[0]) < 1e-12);
    auto [a, b] = two_lines(0.3);
    CHECK(subspace_distance(a, b) == doctest::Approx(std::sin(0.3)).epsilon(1e-12));
}

TEST_CASE("intersection with the whole space and with {0}")
{
    const auto fam = random_instance(5, {3, 2}, 4);
    std::vector<Subspace> with_whole{fam[0], Subspace::whole(5)};
    CHECK(intersection(with_whole).rank() == 3);
    std::vector<Subspace> with_zero{fam[0], Subspace::zero(5)};
    CHECK(intersection(with_zero).is_zero());
}
