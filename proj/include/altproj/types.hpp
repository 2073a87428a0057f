#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace altproj {

// Hilbert-space scalars are complex throughout; real data is promoted on entry.
using Real = double;
using Complex = std::complex<double>;
using Index = Eigen::Index;

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

using Seed = std::uint64_t;

inline constexpr Real kPi = 3.14159265358979323846;

/// Default relative singular-value threshold for every rank decision.
inline constexpr Real kRankTol = 1e-10;

/// Hermitian part (A + A^H)/2, used before every self-adjoint eigen solve.
template <typename Derived>
Matrix hermitian_part(const Eigen::MatrixBase<Derived>& a)
{
    return (a + a.adjoint()) / Real(2);
}

/// Largest singular value of a dense matrix (0 for empty input).
Real spectral_norm(const Matrix& a);

}  // namespace altproj
