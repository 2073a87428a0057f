#pragma once

#include <vector>

#include "altproj/cyclic.hpp"

namespace altproj {

/// Convex hull of the disc of radius sin(theta) and the point 1.
struct StolzDomain {
    Real theta = 0.0;

    /// Support function h(φ) = max(sin θ, cos φ).
    Real support(Real phi) const;
    /// Euclidean distance from z to the domain (0 inside).
    Real distance(Complex z) const;
    /// Signed margin on a 720-point direction grid: positive inside, -distance outside.
    Real margin(Complex z) const;
};

/// |λ - 2^{-N}| <= 1 - 2^{-N} and |arg(1 - λ)| <= θ_N, with arg(0) = 0.
struct OmegaRegion {
    int N = 2;
    Real thetaN = 0.0;

    static OmegaRegion make(int N);
    /// Signed margin: min of the disc and sector margins, as distances.
    Real margin(Complex z) const;
};

struct BoundarySample {
    Real phi = 0.0;
    Real h = 0.0;  ///< support value max_{z in W} Re(e^{-iφ} z)
    Complex z;     ///< boundary point attaining it
};

struct NumericalRangeBoundary {
    std::vector<BoundarySample> samples;
};

/// Support-function sampling of W(T) on m equally spaced directions in [0, 2π).
NumericalRangeBoundary numrange_boundary(const Matrix& T, int m);

/// θ_1 = 0, θ_{n+1} = atan(2 tan θ_n/(1+2^{-n}) + sqrt((1-2^{-n})/(1+2^{-n}))).
Real theta_recursion(int N);

/// asin((1 - 3(N-1)(1-c)/N^3)^{1/2}); c = 1 returns π/2, the degenerate domain.
Real theta0(Real c, int N);

bool stolz_contains(Complex z, Real theta, Real slack);
bool omega_contains(Complex z, const OmegaRegion& region, Real slack);

struct ContainmentPoint {
    BoundarySample sample;
    bool in_omega = false;
    bool in_stolz = false;
    Real margin = 0.0;  ///< min of Ω_N and Stolz margins
};

struct ContainmentReport {
    Real theta0 = 0.0;
    OmegaRegion omega;
    std::vector<ContainmentPoint> points;
    bool passed = false;
    Real worst_margin = 0.0;
    Complex worst_point;
};

/// Every sampled boundary point of W(T) must lie in Ω_N ∩ S_{θ0} within slack.
ContainmentReport containment_check(const Matrix& T, Real c, int N, int m, Real slack);

/// W(T) ⊂ S_θ only (used for convex combinations of products).
ContainmentReport stolz_containment_check(const Matrix& T, Real theta, int m, Real slack);

struct RittPowerProfile {
    std::vector<Real> profile;  ///< profile[n-1] = n ||T^n (I - T)||, n = 1..n_max
    Real sup = 0.0;
    int argmax = 0;
    /// profile non-increasing after argmax (relative 1e-9, absolute 1e-12)
    bool tail_monotone = false;
    /// first n from which the profile is non-increasing up to n_max
    int monotone_from = 1;
};

RittPowerProfile ritt_power_diagnostic(const CyclicProduct& cp, int n_max);
RittPowerProfile ritt_power_diagnostic(const Matrix& T, int n_max);

struct ResolventSample {
    Real radius = 0.0;
    Real constant = 0.0;  ///< max over angles of |λ-1| ||(λI - T)^{-1}||
};

/// {1 + 2^{-k} : k = 1..10}.
std::vector<Real> default_radii();

/// Sampled lower estimate of sup_{|λ|>1} |λ-1| ||R(λ,T)||, one entry per radius.
std::vector<ResolventSample> resolvent_profile(const Matrix& T, const std::vector<Real>& radii,
                                               int angles_per_radius);

/// Maximum over resolvent_profile.
Real resolvent_diagnostic(const Matrix& T, const std::vector<Real>& radii,
                          int angles_per_radius);

}  // namespace altproj
