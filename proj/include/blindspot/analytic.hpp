#pragma once

// Closed forms and quadratures for the blind-spot probability: the Poisson
// tail g, the mean visible area, the independent-blocking estimate, and the
// nearest two-obstacle approximation b2+.

#include "blindspot/geometry.hpp"
#include "blindspot/quadrature.hpp"

namespace blindspot {

/// lambda * t0 for the tangent from (0, g(0)) to g (kv = 3), as reported to
/// four digits. solve_t0 recomputes it.
inline constexpr double kTangencyProduct = 3.3836;

struct BlindSpotParams {
    double lambda = 0.0;  // anchor intensity
    int kv = 3;           // visible anchors needed to localize
    EnvParams z;

    BlindSpotParams() = default;
    BlindSpotParams(double lambda_, int kv_, const EnvParams& z_);

    /// Anchor intensity from the mean anchor count lambda*pi*R^2.
    static BlindSpotParams from_mean_anchors(double mean_anchors, int kv, const EnvParams& z);
    double mean_anchor_count() const { return lambda * z.disc_area(); }
};

/// Probability that a Poisson(lambda*t) count is below kv.
double g(double t, double lambda, int kv = 3);

struct GDerivatives {
    double first = 0.0;
    double second = 0.0;
};

/// d/dt and d^2/dt^2 of g for kv = 3.
GDerivatives g_derivatives(double t, double lambda);

/// Abscissa where the line through (0, 1) touches g(.; lambda), kv = 3.
double solve_t0(double lambda);

/// 2 * int_inner^r rho * min(atan(L/(2 rho)), acos(rho/r)) drho, in closed
/// form: the area of midpoints beyond `inner` whose obstacle would block the
/// segment from the origin to a point at radius r.
double blocking_area_between(double inner, double r, const EnvParams& z);

/// Area of the midpoint region that blocks the line of sight to q.
double nu2_SV(const PolarPoint& q, const EnvParams& z);

/// Mean visible area over the disc.
double mean_visible_area(const EnvParams& z, const QuadratureSpec& spec = {1e-10, 1e-14, 30});

double b_ind(const BlindSpotParams& bp);

/// Visible area inside the disc of radius r2 (only the nearest obstacle can
/// cast a shadow there).
double A_n2(const PolarPoint& p1, const PolarPoint& p2, const EnvParams& z);

/// int_r2^R exp(-lambda0 * blocking_area_between(r2, r)) r dr: the mean
/// visible area per radian beyond r2 when only farther obstacles block.
double far_visibility_integral(double r2, const EnvParams& z,
                               const QuadratureSpec& spec = {1e-10, 1e-14, 30});

/// Mean visible area of the annulus beyond r2 outside both nearest shadows,
/// given the nearest two obstacles.
double mean_Vout_area(const PolarPoint& p1, const PolarPoint& p2, const EnvParams& z);

/// Nearest two-obstacle approximation of the visible area.
double Av_2plus(const PolarPoint& p1, const PolarPoint& p2, const EnvParams& z);

double b0(const BlindSpotParams& bp);
double b1(const BlindSpotParams& bp, const QuadratureSpec& spec = {1e-10, 1e-14, 30});

/// Tolerances of the nested (r2, r1, dphi) integration.
struct NearestTwoQuadrature {
    QuadratureSpec outer{1e-7, 1e-9, 20};
    QuadratureSpec middle{1e-8, 1e-11, 20};
    QuadratureSpec inner{1e-9, 1e-12, 20};
};

struct BlindSpotTerms {
    double b0 = 0.0;
    double b1 = 0.0;
    double p0 = 0.0;  // P(no obstacle)
    double p1 = 0.0;  // P(exactly one obstacle)
    double t2 = 0.0;  // contribution of two or more obstacles
    double value = 0.0;
};

BlindSpotTerms b_2plus_terms(const BlindSpotParams& bp, const NearestTwoQuadrature& quad = {});
double b_2plus(const BlindSpotParams& bp, const NearestTwoQuadrature& quad = {});

/// Mean of Av_2plus given at least two obstacles.
double mean_Av_given_K2(const EnvParams& z, const NearestTwoQuadrature& quad = {});

/// Probability of at least two obstacle midpoints in the disc.
double prob_at_least_two(const EnvParams& z);

struct DensitySums {
    double lhs = 0.0;  // truncated series over the obstacle count
    double rhs = 0.0;  // lambda0^2 exp(-lambda0 pi r2^2)
};

/// Sums the nearest/second-nearest location densities over the obstacle count
/// and compares against the collapsed kernel. Test oracle only.
DensitySums density_sum_check(double r1, double r2, const EnvParams& z);

}  // namespace blindspot
