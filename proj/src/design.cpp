#include "blindspot/design.hpp"

#include <sstream>
#include <stdexcept>

namespace blindspot {

DesignResult required_anchor_intensity(const EnvParams& z, double mu, int kv, double tol,
                                       const DesignOptions& options) {
    if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    if (kv < 1) throw std::invalid_argument("kv must be >= 1");

    DesignResult out;
    if (mu >= 1.0) return out;

    auto b = [&](double lambda) { return b_2plus(BlindSpotParams(lambda, kv, z), options.quad); };

    double lo = 0.0;
    double hi = 4.0 * kv / mean_visible_area(z);
    double b_hi = b(hi);
    int doublings = 0;
    while (!(b_hi < mu)) {
        if (++doublings > options.max_doublings) {
            std::ostringstream msg;
            msg << "required_anchor_intensity: b2+ stays at " << b_hi << " >= mu = " << mu
                << " up to lambda = " << hi << " after " << options.max_doublings << " doublings";
            throw std::runtime_error(msg.str());
        }
        lo = hi;
        hi *= 2.0;
        b_hi = b(hi);
        out.history.push_back({lo, hi});
    }
    out.history.push_back({lo, hi});

    // Invariant: b(lo) > mu >= b(hi), with b(0) = 1 standing in for lo = 0.
    while (mu - b_hi >= tol && hi - lo >= tol * hi) {
        if (out.iterations >= options.max_bisections) {
            out.hit_bound = true;
            break;
        }
        ++out.iterations;
        const double mid = 0.5 * (lo + hi);
        const double b_mid = b(mid);
        if (b_mid <= mu) {
            hi = mid;
            b_hi = b_mid;
        } else {
            lo = mid;
        }
        out.history.push_back({lo, hi});
    }
    out.lambda_star = hi;
    out.achieved = b_hi;
    return out;
}

}  // namespace blindspot
