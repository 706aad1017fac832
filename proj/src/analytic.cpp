#include "blindspot/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>

namespace blindspot {

namespace {

void check_order(const PolarPoint& p1, const PolarPoint& p2, const EnvParams& z) {
    if (p1.r > p2.r || p2.r > z.R) {
        throw std::invalid_argument("nearest-two quantities need p1.r <= p2.r <= R");
    }
}

// Antiderivative of rho * atan(c / rho).
double atan_part(double rho, double c) {
    if (rho == 0.0) return 0.0;
    return 0.5 * rho * rho * std::atan(c / rho) + 0.5 * c * (rho - c * std::atan(rho / c));
}

// Antiderivative of rho * acos(rho / r).
double acos_part(double rho, double r) {
    const double x = std::clamp(rho / r, 0.0, 1.0);
    return 0.5 * rho * rho * std::acos(x) + 0.25 * r * r * std::asin(x) -
           0.25 * rho * std::sqrt(std::max(0.0, r * r - rho * rho));
}

// Integrand pieces of the nearest-two integrals for one (r1, r2).
struct PairGeometry {
    double near_area;  // A_n2
    double theta1;
    double theta2;
};

PairGeometry pair_geometry(double r1, double r2, const EnvParams& z) {
    const PolarPoint p1(r1, 0.0);
    const PolarPoint p2(r2, 0.0);
    return {A_n2(p1, p2, z), theta(p1, z), theta(p2, z)};
}

// Integrates 2*pi * K(r2) * r1 * h(Av_2plus) over r1 <= r2 and the relative
// azimuth, where K(r2) = lambda0^2 exp(-lambda0 pi r2^2) r2. The azimuth is
// folded onto [0, pi] (alpha is symmetric) and split where the overlap
// fraction changes slope.
template <class H>
double integrate_nearest_two(const EnvParams& z, const NearestTwoQuadrature& quad, const H& h) {
    const double lambda0 = z.lambda0;
    if (lambda0 == 0.0) return 0.0;
    const double half_L = 0.5 * z.L;

    auto over_r2 = [&](double r2) {
        if (r2 <= 0.0) return 0.0;
        const double far = far_visibility_integral(r2, z);
        const double branch_inner = z.with_radius(r2).branch_radius();

        auto over_r1 = [&](double r1) {
            const PairGeometry pg = pair_geometry(r1, r2, z);
            const PolarPoint p1(r1, 0.0);
            auto over_dphi = [&](double dphi) {
                const double alpha = alpha_overlap(p1, PolarPoint(r2, dphi), z);
                const double span = kTwoPi - pg.theta1 - (1.0 - alpha) * pg.theta2;
                return h(pg.near_area + span * far);
            };
            const auto cuts = breakpoints(0.0, kPi, {0.5 * (pg.theta1 - pg.theta2),
                                                     0.5 * (pg.theta1 + pg.theta2)});
            return 2.0 * r1 * integrate(over_dphi, std::span<const double>(cuts), quad.inner).value;
        };
        const auto cuts = breakpoints(0.0, r2, {z.branch_radius(), branch_inner});
        const double inner = integrate(over_r1, std::span<const double>(cuts), quad.middle).value;
        return lambda0 * lambda0 * std::exp(-lambda0 * kPi * r2 * r2) * r2 * inner;
    };
    const auto cuts = breakpoints(0.0, z.R, {z.branch_radius(), half_L});
    return kTwoPi * integrate(over_r2, std::span<const double>(cuts), quad.outer).value;
}

}  // namespace

BlindSpotParams::BlindSpotParams(double lambda_, int kv_, const EnvParams& z_)
    : lambda(lambda_), kv(kv_), z(z_) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("anchor intensity must be finite and >= 0");
    }
    if (kv < 1) throw std::invalid_argument("kv must be >= 1");
}

BlindSpotParams BlindSpotParams::from_mean_anchors(double mean_anchors, int kv, const EnvParams& z) {
    return BlindSpotParams(mean_anchors / z.disc_area(), kv, z);
}

double g(double t, double lambda, int kv) {
    if (!(t >= 0.0) || !(lambda >= 0.0)) throw std::domain_error("g needs t >= 0 and lambda >= 0");
    if (kv < 1) throw std::domain_error("g needs kv >= 1");
    const double m = lambda * t;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < kv; ++k) {
        term *= m / k;
        sum += term;
    }
    return std::exp(-m) * sum;
}

GDerivatives g_derivatives(double t, double lambda) {
    if (!(t >= 0.0)) throw std::domain_error("g_derivatives needs t >= 0");
    const double l3 = 0.5 * lambda * lambda * lambda;
    const double e = std::exp(-lambda * t);
    return {-l3 * t * t * e, l3 * t * e * (lambda * t - 2.0)};
}

double solve_t0(double lambda) {
    if (!(lambda > 0.0)) throw std::domain_error("solve_t0 needs lambda > 0");
    // 1 = e^{-u} (u^3/2 + u^2/2 + u + 1), u = lambda * t0, root above the
    // inflection at u = 2.
    auto residual = [](double u) {
        return std::exp(-u) * (0.5 * u * u * u + 0.5 * u * u + u + 1.0) - 1.0;
    };
    std::uintmax_t max_iter = 200;
    const auto [lo, hi] = boost::math::tools::toms748_solve(
        residual, 2.0, 20.0, boost::math::tools::eps_tolerance<double>(50), max_iter);
    return 0.5 * (lo + hi) / lambda;
}

double blocking_area_between(double inner, double r, const EnvParams& z) {
    const double c = 0.5 * z.L;
    const double lo = std::max(0.0, inner);
    if (c == 0.0 || r <= 0.0 || lo >= r) return 0.0;
    // atan wins below split, acos above.
    const double split = r > c ? std::sqrt(r * r - c * c) : 0.0;
    double sum = 0.0;
    if (lo < split) sum += atan_part(split, c) - atan_part(lo, c);
    const double from = std::max(lo, split);
    sum += acos_part(r, r) - acos_part(from, r);
    return 2.0 * sum;
}

double nu2_SV(const PolarPoint& q, const EnvParams& z) {
    if (q.r > z.R) throw std::domain_error("nu2_SV needs q.r <= R");
    return blocking_area_between(0.0, q.r, z);
}

double mean_visible_area(const EnvParams& z, const QuadratureSpec& spec) {
    if (z.lambda0 == 0.0 || z.L == 0.0) return z.disc_area();
    auto f = [&](double r) { return std::exp(-z.lambda0 * blocking_area_between(0.0, r, z)) * r; };
    const auto cuts = breakpoints(0.0, z.R, {0.5 * z.L});
    return kTwoPi * integrate(f, std::span<const double>(cuts), spec).value;
}

double b_ind(const BlindSpotParams& bp) {
    return g(mean_visible_area(bp.z), bp.lambda, bp.kv);
}

double A_n2(const PolarPoint& p1, const PolarPoint& p2, const EnvParams& z) {
    check_order(p1, p2, z);
    if (p2.r == 0.0) return 0.0;
    const EnvParams inner = z.with_radius(p2.r);
    return kPi * p2.r * p2.r - shadow_area_single(p1, inner);
}

double far_visibility_integral(double r2, const EnvParams& z, const QuadratureSpec& spec) {
    if (r2 >= z.R) return 0.0;
    auto f = [&](double r) {
        return std::exp(-z.lambda0 * blocking_area_between(r2, r, z)) * r;
    };
    const double c = 0.5 * z.L;
    const auto cuts = breakpoints(r2, z.R, {c, std::sqrt(r2 * r2 + c * c)});
    return integrate(f, std::span<const double>(cuts), spec).value;
}

double mean_Vout_area(const PolarPoint& p1, const PolarPoint& p2, const EnvParams& z) {
    check_order(p1, p2, z);
    const double span = kTwoPi - theta(p1, z) - (1.0 - alpha_overlap(p1, p2, z)) * theta(p2, z);
    return span * far_visibility_integral(p2.r, z);
}

double Av_2plus(const PolarPoint& p1, const PolarPoint& p2, const EnvParams& z) {
    return A_n2(p1, p2, z) + mean_Vout_area(p1, p2, z);
}

double b0(const BlindSpotParams& bp) { return g(bp.z.disc_area(), bp.lambda, bp.kv); }

double b1(const BlindSpotParams& bp, const QuadratureSpec& spec) {
    const EnvParams& z = bp.z;
    const double disc = z.disc_area();
    auto f = [&](double r1) {
        return g(disc - shadow_area_single(PolarPoint(r1, 0.0), z), bp.lambda, bp.kv) * r1;
    };
    const auto cuts = breakpoints(0.0, z.R, {z.branch_radius()});
    return 2.0 / (z.R * z.R) * integrate(f, std::span<const double>(cuts), spec).value;
}

double prob_at_least_two(const EnvParams& z) {
    const double m = z.mean_obstacle_count();
    return -std::expm1(-m) - m * std::exp(-m);
}

BlindSpotTerms b_2plus_terms(const BlindSpotParams& bp, const NearestTwoQuadrature& quad) {
    BlindSpotTerms out;
    const double m = bp.z.mean_obstacle_count();
    out.p0 = std::exp(-m);
    out.p1 = m * std::exp(-m);
    out.b0 = b0(bp);
    out.b1 = out.p1 > 0.0 ? b1(bp) : out.b0;
    if (bp.lambda == 0.0) {
        // g is identically one; the kernel integrates to P(K2).
        out.t2 = prob_at_least_two(bp.z);
    } else {
        out.t2 = integrate_nearest_two(bp.z, quad,
                                       [&](double area) { return g(area, bp.lambda, bp.kv); });
    }
    out.value = std::clamp(out.b0 * out.p0 + out.b1 * out.p1 + out.t2, 0.0, 1.0);
    return out;
}

double b_2plus(const BlindSpotParams& bp, const NearestTwoQuadrature& quad) {
    return b_2plus_terms(bp, quad).value;
}

double mean_Av_given_K2(const EnvParams& z, const NearestTwoQuadrature& quad) {
    if (z.lambda0 == 0.0) throw std::domain_error("mean_Av_given_K2 undefined for lambda0 = 0");
    const double total = integrate_nearest_two(z, quad, [](double area) { return area; });
    return total / prob_at_least_two(z);
}

DensitySums density_sum_check(double r1, double r2, const EnvParams& z) {
    if (!(r1 >= 0.0) || r1 > r2 || r2 > z.R || r1 >= z.R) {
        throw std::invalid_argument("density_sum_check needs 0 <= r1 <= r2 <= R, r1 < R");
    }
    const double R2 = z.R * z.R;
    const double m = z.mean_obstacle_count();
    DensitySums out;
    out.rhs = z.lambda0 * z.lambda0 * std::exp(-z.lambda0 * kPi * r2 * r2);
    if (m == 0.0) return out;

    const double near_shell = (R2 - r1 * r1) / R2;
    const double far_shell = (R2 - r2 * r2) / (R2 - r1 * r1);
    double sum = 0.0;
    for (int k = 2;; ++k) {
        const double f1 = k / (kPi * R2) * std::pow(near_shell, k - 1);
        const double f21 = (k - 1) / (kPi * (R2 - r1 * r1)) * std::pow(far_shell, k - 2);
        const double poisson = std::exp(-m + k * std::log(m) - std::lgamma(k + 1.0));
        const double term = f1 * f21 * poisson;
        sum += term;
        // Past the mode the terms fall at least geometrically.
        if (k > 2.0 * m + 10 && term <= 1e-18 * sum) break;
        if (k > 100000) break;
    }
    out.lhs = sum;
    return out;
}

}  // namespace blindspot
