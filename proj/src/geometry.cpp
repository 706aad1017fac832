#include "blindspot/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace blindspot {

namespace {

double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

Vec2 sub(const Vec2& a, const Vec2& b) { return {a.x - b.x, a.y - b.y}; }

void check_radius(const PolarPoint& p, const EnvParams& z) {
    if (!(p.r >= 0.0) || p.r > z.R) {
        throw std::domain_error("obstacle radius " + std::to_string(p.r) +
                                " outside [0, R=" + std::to_string(z.R) + "]");
    }
}

// Obstacles that can hide anything inside the disc.
bool casts_shadow(const Obstacle& o, const EnvParams& z) { return z.L > 0.0 && o.mid.r <= z.R; }

// Radius along azimuth phi at which obstacle o blocks the ray, or +inf.
double blocking_radius(double phi, const Obstacle& o, const EnvParams& z) {
    const double d = angle_diff(phi, o.mid.phi);
    if (o.mid.r == 0.0) {
        return std::abs(d) < kPi / 2 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    if (std::abs(d) <= 0.5 * theta(o.mid, z)) {
        return o.mid.r / std::cos(d);
    }
    return std::numeric_limits<double>::infinity();
}

}  // namespace

double wrap_angle(double a) {
    double w = std::fmod(a, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    if (w >= kTwoPi) w = 0.0;
    return w;
}

double angle_diff(double a, double b) {
    double d = wrap_angle(a - b);
    if (d > kPi) d -= kTwoPi;
    return d;
}

EnvParams::EnvParams(double lambda0_, double L_, double R_) : lambda0(lambda0_), L(L_), R(R_) {
    if (!(lambda0 >= 0.0) || !std::isfinite(lambda0)) {
        throw std::invalid_argument("lambda0 must be finite and >= 0");
    }
    if (!(L >= 0.0) || !std::isfinite(L)) throw std::invalid_argument("L must be finite and >= 0");
    if (!(R > 0.0) || !std::isfinite(R)) throw std::invalid_argument("R must be finite and > 0");
}

EnvParams EnvParams::from_normalized(double mean_obstacles, double L_over_R, double R) {
    return EnvParams(mean_obstacles / (kPi * R * R), L_over_R * R, R);
}

double EnvParams::branch_radius() const {
    const double half = 0.5 * L;
    if (half >= R) return 0.0;
    return std::sqrt(R * R - half * half);
}

EnvParams EnvParams::with_radius(double radius) const { return EnvParams(lambda0, L, radius); }

PolarPoint::PolarPoint(double r_, double phi_) : r(r_), phi(wrap_angle(phi_)) {
    if (!(r >= 0.0)) throw std::domain_error("polar radius must be >= 0");
}

Vec2 to_cartesian(const PolarPoint& p) { return {p.r * std::cos(p.phi), p.r * std::sin(p.phi)}; }

bool ShadowSector::contains(double azimuth) const {
    return wrap_angle(azimuth - l) <= theta;
}

double theta(const PolarPoint& p, const EnvParams& z) {
    check_radius(p, z);
    if (z.L == 0.0) return 0.0;
    if (p.r == 0.0) return kPi;
    if (p.r <= z.branch_radius()) return 2.0 * std::atan(z.L / (2.0 * p.r));
    return 2.0 * std::acos(std::min(1.0, p.r / z.R));
}

double chord_x(const PolarPoint& p, const EnvParams& z) {
    check_radius(p, z);
    if (p.r <= z.branch_radius()) return z.L;
    // Also covers L > 2R at r = 0, where the whole diameter blocks.
    return std::min(z.L, 2.0 * std::sqrt(std::max(0.0, z.R * z.R - p.r * p.r)));
}

double shadow_area_single(const PolarPoint& p, const EnvParams& z) {
    return 0.5 * theta(p, z) * z.R * z.R - 0.5 * p.r * chord_x(p, z);
}

ShadowSector sector(const PolarPoint& p, const EnvParams& z) {
    const double th = theta(p, z);
    return {th, wrap_angle(p.phi - 0.5 * th), wrap_angle(p.phi + 0.5 * th)};
}

double epsilon_overlap(const ShadowSector& s1, const ShadowSector& s2) {
    if (!s1.wraps() && !s2.wraps()) {
        return std::min(s1.u, s2.u) - std::max(s1.l, s2.l);
    }
    if (s1.wraps() && s2.wraps()) {
        return kTwoPi - (std::max(s1.l, s2.l) - std::min(s1.u, s2.u));
    }
    // One sector straddles azimuth 0. Intersect the plain one with each half
    // of the straddling one; the clamps keep a nested sector from counting
    // more than its own width.
    const ShadowSector& w = s1.wraps() ? s1 : s2;
    const ShadowSector& n = s1.wraps() ? s2 : s1;
    const double low = std::min(w.u, n.u) - n.l;
    const double high = n.u - std::max(w.l, n.l);
    if (low >= 0.0 && high >= 0.0) return low + high;
    return std::max(low, high);
}

double alpha_overlap(const PolarPoint& p1, const PolarPoint& p2, const EnvParams& z) {
    if (p1.r > p2.r) {
        throw std::invalid_argument("alpha_overlap: p1 must be the nearer obstacle");
    }
    const ShadowSector s2 = sector(p2, z);
    if (s2.theta == 0.0) return 0.0;
    const double eps = epsilon_overlap(sector(p1, z), s2);
    return std::clamp(eps / s2.theta, 0.0, 1.0);
}

Segment obstacle_segment(const PolarPoint& p, const EnvParams& z) {
    const Vec2 c = to_cartesian(p);
    const double h = 0.5 * z.L;
    const Vec2 t{-std::sin(p.phi), std::cos(p.phi)};
    return {{c.x - h * t.x, c.y - h * t.y}, {c.x + h * t.x, c.y + h * t.y}};
}

bool is_visible(const PolarPoint& q, std::span<const Obstacle> obstacles, const EnvParams& z) {
    if (q.r == 0.0 || z.L == 0.0) return true;
    const Vec2 qc = to_cartesian(q);
    const Vec2 origin{};
    for (const Obstacle& o : obstacles) {
        if (o.mid.r == 0.0) {
            if (std::abs(angle_diff(q.phi, o.mid.phi)) < kPi / 2) return false;
            continue;
        }
        const Segment s = obstacle_segment(o.mid, z);
        const double d1 = cross(qc, s.a);
        const double d2 = cross(qc, s.b);
        if (d1 * d2 > 0.0) continue;
        const Vec2 ab = sub(s.b, s.a);
        const double d3 = cross(ab, sub(origin, s.a));
        const double d4 = cross(ab, sub(qc, s.a));
        if (d3 * d4 <= 0.0) return false;
    }
    return true;
}

bool is_visible_sector(const PolarPoint& q, std::span<const Obstacle> obstacles,
                       const EnvParams& z) {
    if (q.r == 0.0) return true;
    for (const Obstacle& o : obstacles) {
        if (!casts_shadow(o, z)) continue;
        if (q.r >= blocking_radius(q.phi, o, z)) return false;
    }
    return true;
}

std::vector<AzimuthRange> sector_ranges(const ShadowSector& s) {
    if (s.theta <= 0.0) return {};
    if (s.wraps()) return {{s.l, kTwoPi}, {0.0, s.u}};
    return {{s.l, s.u}};
}

std::vector<AzimuthRange> union_ranges(std::span<const ShadowSector> sectors) {
    std::vector<AzimuthRange> all;
    for (const ShadowSector& s : sectors) {
        for (const AzimuthRange& r : sector_ranges(s)) all.push_back(r);
    }
    std::sort(all.begin(), all.end(),
              [](const AzimuthRange& a, const AzimuthRange& b) { return a.begin < b.begin; });
    std::vector<AzimuthRange> merged;
    for (const AzimuthRange& r : all) {
        if (!merged.empty() && r.begin <= merged.back().end) {
            merged.back().end = std::max(merged.back().end, r.end);
        } else {
            merged.push_back(r);
        }
    }
    return merged;
}

std::vector<AzimuthRange> complement_ranges(std::span<const AzimuthRange> ranges) {
    std::vector<AzimuthRange> out;
    double cursor = 0.0;
    for (const AzimuthRange& r : ranges) {
        if (r.begin > cursor) out.push_back({cursor, r.begin});
        cursor = std::max(cursor, r.end);
    }
    if (cursor < kTwoPi) out.push_back({cursor, kTwoPi});
    return out;
}

double visibility_radius(double phi, std::span<const Obstacle> obstacles, const EnvParams& z) {
    double d = z.R;
    for (const Obstacle& o : obstacles) {
        if (casts_shadow(o, z)) d = std::min(d, blocking_radius(phi, o, z));
    }
    return d;
}

double exact_visible_area(std::span<const Obstacle> obstacles, const EnvParams& z) {
    const AzimuthRange full[] = {kFullCircle};
    return exact_visible_area(obstacles, z, 0.0, full);
}

// The visible boundary along each azimuth is the lower envelope of the chord
// lines r_i sec(phi - phi_i) (each on its own sector) and the rim R. Between
// consecutive breakpoints (sector ends, pairwise line crossings, crossings of
// the inner radius, range ends) a single curve is minimal, and the area under
// r_i sec has the antiderivative r_i^2 tan(dphi) / 2.
double exact_visible_area(std::span<const Obstacle> obstacles, const EnvParams& z,
                          double inner_radius, std::span<const AzimuthRange> ranges) {
    const double rho0 = std::max(0.0, inner_radius);
    if (rho0 >= z.R) return 0.0;

    struct Active {
        double r;
        double phi;
        double half;
    };
    std::vector<Active> active;
    for (const Obstacle& o : obstacles) {
        if (casts_shadow(o, z)) {
            active.push_back({o.mid.r, o.mid.phi, o.mid.r == 0.0 ? kPi / 2 : 0.5 * theta(o.mid, z)});
        }
    }

    std::vector<double> cuts{0.0, kTwoPi};
    for (const AzimuthRange& r : ranges) {
        cuts.push_back(r.begin);
        cuts.push_back(r.end);
    }
    for (std::size_t i = 0; i < active.size(); ++i) {
        const Active& a = active[i];
        cuts.push_back(wrap_angle(a.phi - a.half));
        cuts.push_back(wrap_angle(a.phi + a.half));
        if (a.r > 0.0 && a.r < rho0) {
            const double c = std::acos(a.r / rho0);
            cuts.push_back(wrap_angle(a.phi - c));
            cuts.push_back(wrap_angle(a.phi + c));
        }
        if (a.r == 0.0) continue;
        for (std::size_t j = i + 1; j < active.size(); ++j) {
            const Active& b = active[j];
            if (b.r == 0.0) continue;
            // r_a cos(phi - phi_b) = r_b cos(phi - phi_a) is linear in (cos, sin).
            const double A = a.r * std::cos(b.phi) - b.r * std::cos(a.phi);
            const double B = a.r * std::sin(b.phi) - b.r * std::sin(a.phi);
            if (A == 0.0 && B == 0.0) continue;
            const double root = std::atan2(A, -B);
            cuts.push_back(wrap_angle(root));
            cuts.push_back(wrap_angle(root + kPi));
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto in_ranges = [&](double phi) {
        return std::any_of(ranges.begin(), ranges.end(), [phi](const AzimuthRange& r) {
            return phi >= r.begin && phi <= r.end;
        });
    };

    const double rim = 0.5 * (z.R * z.R - rho0 * rho0);
    double area = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double lo = cuts[k];
        const double hi = cuts[k + 1];
        if (!(hi > lo)) continue;
        const double mid = 0.5 * (lo + hi);
        if (!in_ranges(mid)) continue;

        const Active* blocker = nullptr;
        double best = z.R;
        double best_dphi = 0.0;
        for (const Active& a : active) {
            const double d = angle_diff(mid, a.phi);
            if (std::abs(d) > a.half) continue;
            if (a.r == 0.0 && std::abs(d) >= kPi / 2) continue;
            const double dist = a.r == 0.0 ? 0.0 : a.r / std::cos(d);
            if (dist < best) {
                best = dist;
                blocker = &a;
                best_dphi = d;
            }
        }
        if (blocker == nullptr) {
            area += rim * (hi - lo);
            continue;
        }
        if (best <= rho0) continue;
        const double h = 0.5 * (hi - lo);
        const double r2 = blocker->r * blocker->r;
        area += 0.5 * r2 * (std::tan(best_dphi + h) - std::tan(best_dphi - h)) -
                0.5 * rho0 * rho0 * (hi - lo);
    }
    return area;
}

}  // namespace blindspot
