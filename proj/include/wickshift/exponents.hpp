#pragma once

// Exponent bookkeeping for the renormalized-square norms
//
//   | <D_t>^{-s1} f |_{ H^{-s2} }   with weights tied to sigma and alpha.
//
// The convergence theory pins the pair to
//   s1 = 2 sigma / (alpha - 1)
//   s2 = 2 sigma                          if sigma > 1/4 - 1/(4 alpha)
//   s2 = max(0, 1/2 - s1) + lambda        otherwise, any slack lambda > 0.
//
// That tie is produced (and checked) by for_theorem. Divergence scans probe
// exponents *off* the tie on purpose, so the struct itself also accepts free
// values; the scan entry points validate them against their own regime.

#include <cmath>
#include <stdexcept>

#include "wickshift/fourier.hpp"

namespace wickshift {

struct WickExponents {
    double sigma = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;
    double lambda_slack = 0.0;  // only meaningful in the low-sigma branch

    // The theorem pair for given (sigma, alpha). Requires sigma > 0 and, in
    // the low-sigma branch, a strictly positive slack.
    static WickExponents for_theorem(double sigma, const FlowParams& p,
                                     double lambda_slack = 0.01) {
        if (!(sigma > 0.0) || !std::isfinite(sigma))
            throw std::invalid_argument("WickExponents: sigma must be positive");
        WickExponents e;
        e.sigma = sigma;
        e.s1 = 2.0 * sigma / (p.alpha - 1.0);
        const double threshold = 0.25 - 0.25 / p.alpha;
        if (sigma > threshold) {
            e.s2 = 2.0 * sigma;
            e.lambda_slack = 0.0;
        } else {
            if (!(lambda_slack > 0.0))
                throw std::invalid_argument(
                    "WickExponents: the low-sigma branch needs slack > 0");
            e.s2 = std::max(0.0, 0.5 - e.s1) + lambda_slack;
            e.lambda_slack = lambda_slack;
        }
        return e;
    }

    // True when (s1, s2) sit on the theorem tie for this alpha.
    bool theorem_tied(const FlowParams& p) const {
        const double tol = 1e-12 * (1.0 + std::abs(sigma));
        if (std::abs(s1 * (p.alpha - 1.0) - 2.0 * sigma) > tol) return false;
        const double threshold = 0.25 - 0.25 / p.alpha;
        if (sigma > threshold) return std::abs(s2 - 2.0 * sigma) <= tol;
        return s2 > std::max(0.0, 0.5 - s1) && lambda_slack > 0.0;
    }
};

}  // namespace wickshift
