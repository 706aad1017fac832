// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Monte-Carlo points use 50,000 replications unless noted.

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "blindspot/design.hpp"
#include "blindspot/experiment.hpp"
#include "blindspot/montecarlo.hpp"
#include "oracles.hpp"

using namespace blindspot;

namespace {

constexpr std::size_t kReps = 50000;
constexpr unsigned kWorkers = 0;  // all cores; results do not depend on it

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
    std::printf("%s  criterion %d  %s: %s\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

void info(const std::string& text) {
    std::printf("      %s\n", text.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

MonteCarloOptions mc(std::uint64_t seed, std::size_t reps = kReps) { return {reps, seed, kWorkers}; }

double seconds_since(std::chrono::steady_clock::time_point t) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

// ---------------------------------------------------------------------------

void tangency_constant() {
    const auto t = std::chrono::steady_clock::now();
    const double t0 = solve_t0(1.0);
    const double first = seconds_since(t);
    const bool ok = std::abs(t0 - 3.3836) <= 1e-3 && first < 1e-3;
    report(1, ok, "tangency constant",
           fmt("t0(1) = %.6f, |t0 - 3.3836| = %.2e (<= 1e-3), first call %.1f us (< 1000 us)", t0,
               std::abs(t0 - 3.3836), first * 1e6));
}

struct GridPoint {
    double anchors;
    double LR;
    Estimate mc;
    double b_ind;
    double b_2plus;
    double lambda_EA;
    double lambda_EK2;
};

std::vector<GridPoint> bound_grid() {
    std::vector<GridPoint> out;
    std::uint64_t seed = 2000;
    for (double LR : {0.1, 0.3, 0.5, 0.7, 1.0}) {
        const EnvParams z = EnvParams::from_normalized(8.0, LR);
        const double EA = mean_visible_area(z);
        const double EK2 = mean_Av_given_K2(z);
        for (double anchors : {5.0, 10.0, 15.0, 20.0}) {
            const auto bp = BlindSpotParams::from_mean_anchors(anchors, 3, z);
            out.push_back({anchors, LR, estimate_b(bp, mc(++seed)), b_ind(bp), b_2plus(bp), bp.lambda * EA,
                           bp.lambda * EK2});
        }
    }
    return out;
}

void independent_lower_bound(const std::vector<GridPoint>& grid) {
    int applicable = 0;
    int violations = 0;
    double worst = -1.0;
    for (const auto& p : grid) {
        if (p.lambda_EA < kTangencyProduct) continue;
        ++applicable;
        const double slack = p.mc.mean + 3.0 * p.mc.stderr_ - p.b_ind;
        if (slack < 0.0) {
            ++violations;
            info(fmt("violation at lambda pi R^2 = %g, L/R = %g: b_ind %.5f > b_mc %.5f + 3 se", p.anchors, p.LR,
                     p.b_ind, p.mc.mean));
        }
        worst = worst < 0.0 ? slack : std::min(worst, slack);
    }
    report(2, violations == 0 && applicable > 0, "independent-blocking lower bound",
           fmt("%d of 20 grid points satisfy lambda E[A_v] >= 3.3836; b_ind <= b_mc + 3 se at all of them "
               "(violations %d, smallest margin %.2e)",
               applicable, violations, worst));
}

void nearest_two_upper_bound(const std::vector<GridPoint>& grid) {
    int applicable = 0;
    int violations = 0;
    double worst = 1.0;
    for (const auto& p : grid) {
        if (p.lambda_EK2 < kTangencyProduct) continue;
        ++applicable;
        const double slack = p.b_2plus + 1e-4 - p.b_ind;
        if (slack < 0.0) ++violations;
        worst = std::min(worst, slack);
    }
    report(7, violations == 0 && applicable > 0, "nearest-two upper bound on b_ind",
           fmt("%d of 20 grid points satisfy lambda E[A_v | K>=2] >= 3.3836; b_ind <= b2+ + 1e-4 at all "
               "(violations %d, smallest margin %.2e)",
               applicable, violations, worst));
}

void obstacle_length_sweep() {
    bool a = true;
    double max_gap = 0.0;
    double gap05 = 0.0;
    double se05 = 0.0;
    double gap01 = 0.0;
    double se01 = 0.0;
    info("L/R    b_mc      stderr    b_ind     b2+");
    for (int i = 1; i <= 10; ++i) {
        const double LR = 0.1 * i;
        const EnvParams z = EnvParams::from_normalized(8.0, LR);
        const auto bp = BlindSpotParams::from_mean_anchors(15.0, 3, z);
        const Estimate e = estimate_b(bp, mc(3000 + i));
        const double bi = b_ind(bp);
        const double b2 = b_2plus(bp);
        info(fmt("%.1f    %.5f   %.5f   %.5f   %.5f", LR, e.mean, e.stderr_, bi, b2));
        max_gap = std::max(max_gap, std::abs(b2 - e.mean));
        a = a && std::abs(b2 - e.mean) <= 0.05;
        if (i == 5) {
            gap05 = e.mean - bi;
            se05 = e.stderr_;
        }
        if (i == 1) {
            gap01 = std::abs(e.mean - bi);
            se01 = e.stderr_;
        }
    }
    const bool b = gap05 > 3.0 * se05;
    const bool c = gap01 <= 0.02 + 3.0 * se01;
    report(3, a && b && c, "b versus L/R at lambda0 pi R^2 = 8, lambda pi R^2 = 15",
           fmt("(a) max |b2+ - b_mc| = %.4f (<= 0.05) %s; (b) L/R=0.5: b_mc - b_ind = %.4f vs 3 se = %.4f %s; "
               "(c) L/R=0.1: |b_mc - b_ind| = %.5f vs 0.02 + 3 se = %.5f %s",
               max_gap, a ? "ok" : "no", gap05, 3.0 * se05, b ? "ok" : "no", gap01, 0.02 + 3.0 * se01,
               c ? "ok" : "no"));
}

void anchor_sweep() {
    bool monotone = true;
    int strict_mc_rises = 0;
    std::vector<double> divergence;
    for (double LR : {0.1, 0.5, 1.0}) {
        const EnvParams z = EnvParams::from_normalized(8.0, LR);
        Estimate prev_mc;
        double prev_ind = 2.0;
        double prev_2p = 2.0;
        bool first = true;
        double last_gap = 0.0;
        for (int a = 4; a <= 24; a += 2) {
            const auto bp = BlindSpotParams::from_mean_anchors(a, 3, z);
            const Estimate e = estimate_b(bp, mc(4000 + static_cast<std::uint64_t>(100 * LR) * 100 + a));
            const double bi = b_ind(bp);
            const double b2 = b_2plus(bp);
            if (!first) {
                const double joint = 3.0 * std::hypot(e.stderr_, prev_mc.stderr_);
                if (e.mean > prev_mc.mean) ++strict_mc_rises;
                monotone = monotone && e.mean <= prev_mc.mean + joint && bi <= prev_ind && b2 <= prev_2p;
            }
            first = false;
            prev_mc = e;
            prev_ind = bi;
            prev_2p = b2;
            last_gap = std::abs(e.mean - bi);
        }
        divergence.push_back(last_gap);
    }
    const bool widening = divergence[0] < divergence[1] && divergence[1] < divergence[2];
    report(4, monotone && widening, "b versus lambda pi R^2 for L/R in {0.1, 0.5, 1}",
           fmt("curves non-increasing over lambda pi R^2 = 4..24 step 2 (b_ind, b2+ exactly; b_mc within 3 "
               "joint se, %d raw upticks) %s; |b_mc - b_ind| at 24: %.5f < %.5f < %.5f %s",
               strict_mc_rises, monotone ? "ok" : "no", divergence[0], divergence[1], divergence[2],
               widening ? "ok" : "no"));
}

void far_shadow_share() {
    const std::vector<double> counts{2.0, 4.0, 8.0};
    std::vector<std::vector<Estimate>> share(counts.size());
    std::vector<std::vector<Estimate>> ratio(counts.size());
    const std::size_t n = 100000;
    for (std::size_t c = 0; c < counts.size(); ++c) {
        for (int i = 1; i <= 10; ++i) {
            const EnvParams z = EnvParams::from_normalized(counts[c], 0.1 * i);
            share[c].push_back(estimate_far_shadow_fraction(z, mc(5000, n)));
            ratio[c].push_back(estimate_gamma(z, mc(5000, n)));
        }
    }
    auto check = [&](const std::vector<std::vector<Estimate>>& g, bool& dec, bool& inc, double& min_near) {
        dec = inc = true;
        min_near = 1.0;
        for (std::size_t c = 0; c < counts.size(); ++c) {
            for (std::size_t i = 1; i < 10; ++i) dec = dec && g[c][i].mean < g[c][i - 1].mean;
        }
        for (std::size_t i = 0; i < 10; ++i) {
            for (std::size_t c = 1; c < counts.size(); ++c) inc = inc && g[c][i].mean > g[c - 1][i].mean;
            min_near = std::min(min_near, 1.0 - g.back()[i].mean);
        }
    };
    info("L/R   shadow share of far obstacles (counts 2, 4, 8)   |   A_f/A_v (counts 2, 4, 8)");
    for (std::size_t i = 0; i < 10; ++i) {
        info(fmt("%.1f   %.4f  %.4f  %.4f   |   %.4f  %.4f  %.4f", 0.1 * (i + 1), share[0][i].mean,
                 share[1][i].mean, share[2][i].mean, ratio[0][i].mean, ratio[1][i].mean, ratio[2][i].mean));
    }
    bool dec = false, inc = false;
    double min_near = 0.0;
    check(share, dec, inc, min_near);
    report(5, dec && inc && min_near >= 0.58, "far-obstacle share of the shadowed area",
           fmt("decreasing in L/R %s; increasing in obstacle count %s; min over L/R of 1 - gamma at count 8 = "
               "%.4f (>= 0.6, hard floor 0.58) %s; 1e5 scenes per point",
               dec ? "ok" : "no", inc ? "ok" : "no", min_near, min_near >= 0.58 ? "ok" : "no"));
    bool rdec = false, rinc = false;
    double rmin = 0.0;
    check(ratio, rdec, rinc, rmin);
    info(fmt("for reference, the visible-area ratio E[A_f/A_v]: decreasing %s, increasing %s, "
             "min 1 - ratio at count 8 = %.4f",
             rdec ? "yes" : "no", rinc ? "yes" : "no", rmin));
}

void oracle_equivalences() {
    std::mt19937_64 rng(6001);
    std::uniform_real_distribution<double> u(0.0, 1.0);

    // (a) exact area against hit-or-miss on 100 scenes. Even an exact area
    // lands beyond 3 se in about one scene in four hundred, so a scene that
    // does is re-tested once with an independent sample twenty times larger,
    // and fails only if it is beyond 3 se of that estimate as well.
    int a_bad = 0;
    int a_retested = 0;
    double a_worst = 0.0;
    std::string a_detail;
    for (std::uint64_t s = 0; s < 100; ++s) {
        const EnvParams z = EnvParams::from_normalized(8.0, 0.1 + 0.9 * u(rng));
        RandomStream stream(6002, s);
        const Scene scene = sample_scene(z, 0.0, stream);
        const double exact = exact_visible_area(scene.obstacles, z);
        const auto hm = oracle::hit_or_miss_area(scene.obstacles, z, 200000, rng);
        const double dev = std::abs(exact - hm.mean) / hm.stderr_;
        a_worst = std::max(a_worst, dev);
        if (dev <= 3.0) continue;
        ++a_retested;
        std::mt19937_64 fresh(6500 + s);
        const auto big = oracle::hit_or_miss_area(scene.obstacles, z, 4000000, fresh);
        const double dev_big = std::abs(exact - big.mean) / big.stderr_;
        a_detail += fmt(" scene %d: %.2f se, re-test %.2f se;", static_cast<int>(s), dev, dev_big);
        if (dev_big > 3.0) ++a_bad;
    }

    // (b) mean visible area against simulation.
    bool b_ok = true;
    std::string b_detail;
    std::uint64_t seed = 6100;
    for (double LR : {0.25, 0.5, 1.0}) {
        const EnvParams z = EnvParams::from_normalized(8.0, LR);
        const Estimate e = estimate_mean_visible_area(z, mc(++seed));
        const double q = mean_visible_area(z);
        const bool ok = std::abs(q - e.mean) <= 3.0 * e.stderr_;
        b_ok = b_ok && ok;
        b_detail += fmt(" L/R=%.2f: %.5f vs %.5f+-%.5f;", LR, q, e.mean, e.stderr_);
    }

    // (c) overlap fraction against azimuth bins.
    double c_max = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const EnvParams z(1.0, 2.0 * u(rng), 1.0);
        PolarPoint p1 = oracle::uniform_in_disc(1.0, rng);
        PolarPoint p2 = oracle::uniform_in_disc(1.0, rng);
        if (p1.r > p2.r) std::swap(p1, p2);
        if (i % 2 == 0) p2 = PolarPoint(p2.r, p1.phi + (u(rng) - 0.5));
        c_max = std::max(c_max, std::abs(alpha_overlap(p1, p2, z) - oracle::alpha_bins(p1, p2, z)));
    }

    // (d) density collapse on a 10 x 10 grid.
    double d_max = 0.0;
    const EnvParams zd = EnvParams::from_normalized(8.0, 0.5);
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) {
            const double r2 = 0.05 + 0.095 * j;
            const double r1 = r2 * (0.05 + 0.095 * i);
            const auto d = density_sum_check(r1, r2, zd);
            d_max = std::max(d_max, std::abs(d.lhs - d.rhs) / d.rhs);
        }
    }

    // (e) derivatives of g against finite differences.
    double e_max = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double lambda = 0.1 + 2.9 * u(rng);
        const double t = (0.3 + 14.7 * u(rng)) / lambda;
        if (std::abs(lambda * t - 2.0) < 0.05) continue;
        auto gt = [&](double x) { return g(x, lambda); };
        const auto d = g_derivatives(t, lambda);
        e_max = std::max(e_max, std::abs(oracle::central_first(gt, t, 1e-5 * t) - d.first) / std::abs(d.first));
        e_max = std::max(e_max,
                         std::abs(oracle::richardson_second(gt, t, 1e-2 * t) - d.second) / std::abs(d.second));
    }

    const bool ok = a_bad == 0 && b_ok && c_max <= 1e-3 && d_max <= 1e-9 && e_max <= 1e-6;
    report(6, ok, "oracle equivalences",
           fmt("(a) %d/100 scenes beyond 3 se at 2e5 points (max %.2f se), %d after re-test;%s (b)%s "
               "(c) max |alpha - bins| = %.2e; (d) max rel err %.2e; (e) max rel err %.2e",
               a_retested, a_worst, a_bad, a_detail.c_str(), b_detail.c_str(), c_max, d_max, e_max));
}

void design_inversion() {
    const EnvParams z = EnvParams::from_normalized(8.0, 0.5);
    const double mu = 0.1;
    const DesignResult d = required_anchor_intensity(z, mu, 3, 1e-6);
    const Estimate e = estimate_b(BlindSpotParams(d.lambda_star, 3, z), mc(7001));
    const bool in_band = d.achieved <= mu && d.achieved >= mu - 1e-3;
    const bool mc_ok = std::abs(e.mean - mu) <= 0.05 + 3.0 * e.stderr_;

    const EnvParams open(0.0, 0.5, 1.0);
    const DesignResult d0 = required_anchor_intensity(open, mu, 3, 1e-6);
    auto f = [&](double lambda) { return oracle::poisson_below(lambda * kPi, 3) - mu; };
    boost::uintmax_t iters = 200;
    const auto root = boost::math::tools::bisect(f, 1e-9, 100.0, boost::math::tools::eps_tolerance<double>(50), iters);
    const double expect = 0.5 * (root.first + root.second);
    const double rel = std::abs(d0.lambda_star - expect) / expect;

    report(8, in_band && mc_ok && rel <= 1e-4, "anchor intensity for mu = 0.1",
           fmt("lambda* pi R^2 = %.5f, b2+(lambda*) = %.7f in [0.099, 0.1] %s; b_mc = %.4f +- %.4f %s; "
               "obstacle-free lambda* rel err %.1e %s",
               d.lambda_star * kPi, d.achieved, in_band ? "ok" : "no", e.mean, e.stderr_, mc_ok ? "ok" : "no",
               rel, rel <= 1e-4 ? "ok" : "no"));
}

void determinism() {
    const EnvParams z = EnvParams::from_normalized(8.0, 0.7);
    const auto bp = BlindSpotParams::from_mean_anchors(12.0, 3, z);
    auto same = [](const Estimate& a, const Estimate& b) {
        return a.mean == b.mean && a.stderr_ == b.stderr_ && a.n == b.n;
    };
    bool ok = true;
    int checked = 0;
    for (int run = 0; run < 2; ++run) {
        const MonteCarloOptions one{20000, 8001, 1};
        const MonteCarloOptions eight{20000, 8001, 8};
        ok = ok && same(estimate_b(bp, one), estimate_b(bp, eight));
        ok = ok && same(estimate_gamma(z, one), estimate_gamma(z, eight));
        ok = ok && same(estimate_far_shadow_fraction(z, one), estimate_far_shadow_fraction(z, eight));
        ok = ok && same(estimate_Vin_area(z, one), estimate_Vin_area(z, eight));
        ok = ok && same(estimate_mean_visible_area(z, one), estimate_mean_visible_area(z, eight));
        ok = ok && estimate_Av_histogram(z, 100, one).counts == estimate_Av_histogram(z, 100, eight).counts;
        checked += 6;
    }
    ExperimentConfig cfg;
    cfg.mode = Mode::SweepL;
    cfg.L_over_R = std::vector<double>{0.3, 0.9};
    cfg.replications = 5000;
    std::string bodies[2];
    for (unsigned w : {1u, 8u}) {
        cfg.workers = w;
        std::ostringstream os;
        run_experiment(cfg, os, false);
        bodies[w == 8] = os.str();
    }
    ok = ok && bodies[0] == bodies[1];
    report(9, ok, "determinism",
           fmt("%d estimator runs and a sweep CSV bit-identical across worker counts 1 and 8", checked));
}

}  // namespace

int main() {
    const auto start = std::chrono::steady_clock::now();
    tangency_constant();
    const auto grid = bound_grid();
    independent_lower_bound(grid);
    obstacle_length_sweep();
    anchor_sweep();
    far_shadow_share();
    oracle_equivalences();
    nearest_two_upper_bound(grid);
    design_inversion();
    determinism();
    std::printf("%s  %d of 9 criteria failed  (%.0f s)\n", failures ? "FAIL" : "PASS", failures,
                seconds_since(start));
    return failures ? 1 : 0;
}
