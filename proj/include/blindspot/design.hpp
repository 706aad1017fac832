#pragma once

// Anchor-intensity inversion of the nearest two-obstacle approximation.

#include <vector>

#include "blindspot/analytic.hpp"

namespace blindspot {

struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
};

struct DesignResult {
    double lambda_star = 0.0;
    double achieved = 1.0;  // b2+ at lambda_star
    int iterations = 0;
    std::vector<Bracket> history;
    bool hit_bound = false;  // search stopped on the iteration cap
};

struct DesignOptions {
    int max_doublings = 40;
    int max_bisections = 200;
    NearestTwoQuadrature quad{};
};

/// Smallest anchor intensity with b2+(lambda, z) <= mu, by bisection on the
/// monotone map lambda -> b2+. The upper end starts at 4 kv / E[A_v] and
/// doubles until it falls below mu. Stops once the bracket is narrower than
/// tol * lambda_hi or b2+ is within tol of mu.
DesignResult required_anchor_intensity(const EnvParams& z, double mu, int kv = 3, double tol = 1e-6,
                                       const DesignOptions& options = {});

}  // namespace blindspot
