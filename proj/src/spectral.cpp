#include "altproj/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "altproj/errors.hpp"

namespace altproj {

namespace {

constexpr int kStolzGrid = 720;

Real segment_distance(Complex z, Complex a, Complex b)
{
    const Complex ab = b - a;
    const Real len2 = std::norm(ab);
    if (len2 == 0.0)
        return std::abs(z - a);
    const Real t = std::clamp(((z - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
    return std::abs(z - (a + t * ab));
}

Real cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

bool in_triangle(Complex z, Complex a, Complex b, Complex c)
{
    const Real d1 = cross(b - a, z - a);
    const Real d2 = cross(c - b, z - b);
    const Real d3 = cross(a - c, z - c);
    const bool has_neg = d1 < 0 || d2 < 0 || d3 < 0;
    const bool has_pos = d1 > 0 || d2 > 0 || d3 > 0;
    return !(has_neg && has_pos);
}

Real grid_slack(const StolzDomain& s, Complex z)
{
    // min_φ (h(φ) - Re(e^{-iφ} z)) on the direction grid.
    Real best = std::numeric_limits<Real>::infinity();
    for (int j = 0; j < kStolzGrid; ++j) {
        const Real phi = 2.0 * kPi * j / kStolzGrid;
        const Real proj = (std::polar(1.0, -phi) * z).real();
        best = std::min(best, s.support(phi) - proj);
    }
    return best;
}

}  // namespace

Real StolzDomain::support(Real phi) const { return std::max(std::sin(theta), std::cos(phi)); }

Real StolzDomain::distance(Complex z) const
{
    const Real s = std::min(1.0, std::sin(theta));
    const Real disc = std::max(0.0, std::abs(z) - s);
    if (disc == 0.0)
        return 0.0;
    if (s >= 1.0)
        return disc;
    const Real psi = std::acos(s);
    const Complex tp = std::polar(s, psi);
    const Complex tm = std::polar(s, -psi);
    const Complex one(1.0, 0.0);
    if (s > 0.0 && in_triangle(z, one, tp, tm))
        return 0.0;
    const Real tri = std::min({segment_distance(z, one, tp), segment_distance(z, one, tm),
                               segment_distance(z, tp, tm)});
    return std::min(disc, tri);
}

Real StolzDomain::margin(Complex z) const
{
    const Real dist = distance(z);
    if (dist > 0.0)
        return -dist;
    return std::max(0.0, grid_slack(*this, z));
}

OmegaRegion OmegaRegion::make(int N)
{
    if (N < 1)
        throw InputError("OmegaRegion: N must be >= 1");
    return OmegaRegion{N, theta_recursion(N)};
}

Real OmegaRegion::margin(Complex z) const
{
    const Real center = std::ldexp(1.0, -N);
    const Real disc = (1.0 - center) - std::abs(z - center);
    const Complex w = Complex(1.0, 0.0) - z;
    const Real r = std::abs(w);
    Real sector = 0.0;
    if (r > 0.0) {
        const Real a = std::abs(std::arg(w));
        if (a <= thetaN)
            sector = r * std::sin(thetaN - a);
        else
            sector = -(a - thetaN >= kPi / 2 ? r : r * std::sin(a - thetaN));
    }
    return std::min(disc, sector);
}

NumericalRangeBoundary numrange_boundary(const Matrix& T, int m)
{
    if (m < 8)
        throw InputError("numrange_boundary: need at least 8 angles");
    if (T.rows() != T.cols() || T.rows() == 0)
        throw InputError("numrange_boundary: T must be square and non-empty");
    NumericalRangeBoundary out;
    out.samples.reserve(m);
    for (int j = 0; j < m; ++j) {
        const Real phi = 2.0 * kPi * j / m;
        const Complex rot = std::polar(1.0, -phi);
        const Matrix h = hermitian_part(rot * T);
        Eigen::SelfAdjointEigenSolver<Matrix> es(h);
        const Index top = h.rows() - 1;
        const Vector x = es.eigenvectors().col(top);
        out.samples.push_back({phi, es.eigenvalues()(top), x.dot(T * x)});
    }
    return out;
}

Real theta_recursion(int N)
{
    if (N < 1)
        throw InputError("theta_recursion: N must be >= 1");
    Real theta = 0.0;
    for (int n = 1; n < N; ++n) {
        const Real q = std::ldexp(1.0, -n);
        theta = std::atan(2.0 * std::tan(theta) / (1.0 + q) + std::sqrt((1.0 - q) / (1.0 + q)));
    }
    return theta;
}

Real theta0(Real c, int N)
{
    if (N < 2)
        throw InputError("theta0: need N >= 2");
    if (c >= 1.0)
        return kPi / 2;
    const Real n = static_cast<Real>(N);
    const Real sq = std::clamp(1.0 - 3.0 * (n - 1.0) * (1.0 - c) / (n * n * n), 0.0, 1.0);
    return std::asin(std::sqrt(sq));
}

bool stolz_contains(Complex z, Real theta, Real slack)
{
    if (theta < 0.0 || theta > kPi / 2 + 1e-15)
        throw InputError("stolz_contains: theta must lie in [0, pi/2]");
    const StolzDomain s{theta};
    return s.distance(z) <= slack && grid_slack(s, z) >= -slack;
}

bool omega_contains(Complex z, const OmegaRegion& region, Real slack)
{
    return region.margin(z) >= -slack;
}

namespace {

ContainmentReport check_points(const Matrix& T, int m, Real slack, const StolzDomain& stolz,
                               const OmegaRegion* omega)
{
    ContainmentReport rep;
    rep.theta0 = stolz.theta;
    if (omega)
        rep.omega = *omega;
    rep.passed = true;
    rep.worst_margin = std::numeric_limits<Real>::infinity();
    for (const auto& s : numrange_boundary(T, m).samples) {
        ContainmentPoint p;
        p.sample = s;
        const Real ms = stolz.margin(s.z);
        const Real mo = omega ? omega->margin(s.z) : std::numeric_limits<Real>::infinity();
        p.in_stolz = stolz_contains(s.z, stolz.theta, slack);
        p.in_omega = omega ? mo >= -slack : true;
        p.margin = std::min(ms, mo);
        if (p.margin < rep.worst_margin) {
            rep.worst_margin = p.margin;
            rep.worst_point = s.z;
        }
        rep.passed = rep.passed && p.in_stolz && p.in_omega;
        rep.points.push_back(p);
    }
    return rep;
}

}  // namespace

ContainmentReport containment_check(const Matrix& T, Real c, int N, int m, Real slack)
{
    const OmegaRegion omega = OmegaRegion::make(N);
    return check_points(T, m, slack, StolzDomain{theta0(c, N)}, &omega);
}

ContainmentReport stolz_containment_check(const Matrix& T, Real theta, int m, Real slack)
{
    return check_points(T, m, slack, StolzDomain{theta}, nullptr);
}

RittPowerProfile ritt_power_diagnostic(const Matrix& T, int n_max)
{
    if (n_max < 1)
        throw InputError("ritt_power_diagnostic: n_max must be >= 1");
    const Index d = T.rows();
    RittPowerProfile out;
    out.profile.reserve(n_max);
    Matrix tn_res = T * (Matrix::Identity(d, d) - T);
    for (int n = 1; n <= n_max; ++n) {
        const Real v = n * spectral_norm(tn_res);
        out.profile.push_back(v);
        if (v > out.sup) {
            out.sup = v;
            out.argmax = n;
        }
        tn_res = T * tn_res;
    }
    if (out.argmax == 0)
        out.argmax = 1;
    // 1e-12 absolute floor: entries of T^n(I - T) at round-off level
    auto rises = [&](int n) { return out.profile[n - 1] > out.profile[n - 2] * (1.0 + 1e-9) + 1e-12; };
    out.tail_monotone = true;
    out.monotone_from = 1;
    for (int n = 2; n <= n_max; ++n) {
        if (!rises(n))
            continue;
        out.monotone_from = n;
        if (n > out.argmax)
            out.tail_monotone = false;
    }
    return out;
}

RittPowerProfile ritt_power_diagnostic(const CyclicProduct& cp, int n_max)
{
    return ritt_power_diagnostic(cp.T(), n_max);
}

std::vector<Real> default_radii()
{
    std::vector<Real> r;
    for (int k = 1; k <= 10; ++k)
        r.push_back(1.0 + std::ldexp(1.0, -k));
    return r;
}

std::vector<ResolventSample> resolvent_profile(const Matrix& T, const std::vector<Real>& radii,
                                               int angles_per_radius)
{
    if (angles_per_radius < 4)
        throw InputError("resolvent_profile: need at least 4 angles per radius");
    const Index d = T.rows();
    std::vector<ResolventSample> out;
    for (Real r : radii) {
        if (!(r > 1.0))
            throw InputError("resolvent_profile: every radius must exceed 1");
        std::vector<Real> angles;
        for (int j = 0; j < angles_per_radius; ++j)
            angles.push_back(2.0 * kPi * j / angles_per_radius);
        // Directions scaled with the distance to 1 resolve the cusp region.
        for (Real t : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) {
            angles.push_back(t * (r - 1.0));
            angles.push_back(-t * (r - 1.0));
        }
        Real best = 0.0;
        for (Real phi : angles) {
            const Complex lambda = std::polar(r, phi);
            const Matrix shifted = lambda * Matrix::Identity(d, d) - T;
            Eigen::JacobiSVD<Matrix> svd(shifted);
            const Real smin = svd.singularValues()(d - 1);
            if (!(smin > 0.0))
                throw NumericalError("resolvent_profile: singular resolvent outside the unit disc");
            best = std::max(best, std::abs(lambda - 1.0) / smin);
        }
        out.push_back({r, best});
    }
    return out;
}

Real resolvent_diagnostic(const Matrix& T, const std::vector<Real>& radii, int angles_per_radius)
{
    Real best = 0.0;
    for (const auto& s : resolvent_profile(T, radii, angles_per_radius))
        best = std::max(best, s.constant);
    return best;
}

}  // namespace altproj
