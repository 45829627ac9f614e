#pragma once

// Sharpness side of the convergence theory: three explicit data families
// whose renormalized squares blow up in the weighted norm once the exponents
// cross the proven thresholds, plus level scans that tabulate the growth.
//
//   - time_regularity: a_n = <n>^{-(1/2 + eps)}, |n| <= N. Slowly decaying
//     and square-summable uniformly in N; the t = 0 norm grows without bound
//     whenever s1 <= (2 sigma - 2 eps)/(alpha - 1), showing the time exponent
//     of the convergence theorem cannot be lowered.
//   - space_regularity: lacunary data a_{+-2^k} = (2^k)^{-(2 sigma - s2)/2}.
//     The stationary pairs (m, -m) alone push the H^{-s2} norm to infinity
//     for any s2 < 2 sigma, showing the space exponent is sharp.
//   - borderline: one-sided data a_n = n^{-1/2} (ln n)^{-3/4} (a_1 = 1),
//     supported on positive modes, witnessing failure on the critical line
//     2(s1 + s2) <= 1 with s1 = 2 sigma / (alpha - 1). Scans evaluate this
//     family at the doubled level so every kept pair (n1, m) = (m - n, m)
//     with m in [2n, 2N] is inside the truncation.
//
// divergence_scan refuses exponent choices outside the regime a family
// actually witnesses, so a produced table is always evidence of sharpness
// rather than an arbitrary norm printout.

#include <cmath>
#include <complex>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "wickshift/exponents.hpp"
#include "wickshift/fourier.hpp"
#include "wickshift/parallel.hpp"
#include "wickshift/wick.hpp"

namespace wickshift {

enum class CounterexampleKind { time_regularity, space_regularity, borderline };

inline std::string kind_to_string(CounterexampleKind kind) {
    switch (kind) {
        case CounterexampleKind::time_regularity: return "time_regularity";
        case CounterexampleKind::space_regularity: return "space_regularity";
        case CounterexampleKind::borderline: return "borderline";
    }
    throw std::invalid_argument("unknown counterexample kind");
}

struct CounterexampleSpec {
    CounterexampleKind kind;
    double sigma = 0.0;
    double epsilon = 0.0;  // time_regularity only
    double s2 = 0.0;       // space_regularity only
};

inline FourierCoeffs gen_time_counterexample(double eps, int N) {
    if (!(eps > 0.0))
        throw std::invalid_argument("time counterexample: need eps > 0");
    if (N < 1) throw std::invalid_argument("time counterexample: need N >= 1");
    FourierCoeffs a;
    for (int n = -N; n <= N; ++n)
        a.set(n, cd{bracket_pow(static_cast<double>(n), -(0.5 + eps)), 0.0});
    return a;
}

inline FourierCoeffs gen_lacunary_counterexample(double sigma, double s2, int N) {
    if (!(sigma > 0.0))
        throw std::invalid_argument("lacunary counterexample: need sigma > 0");
    if (!(s2 < 2.0 * sigma))
        throw std::invalid_argument("lacunary counterexample: need s2 < 2 sigma");
    if (N < 1) throw std::invalid_argument("lacunary counterexample: need N >= 1");
    FourierCoeffs a;
    for (long long mode = 1; mode <= N; mode *= 2) {
        const double amp =
            std::pow(static_cast<double>(mode), -0.5 * (2.0 * sigma - s2));
        a.set(static_cast<int>(mode), cd{amp, 0.0});
        a.set(static_cast<int>(-mode), cd{amp, 0.0});
    }
    return a;
}

inline FourierCoeffs gen_borderline_counterexample(int N) {
    if (N < 1) throw std::invalid_argument("borderline counterexample: need N >= 1");
    FourierCoeffs a;
    a.set(1, cd{1.0, 0.0});
    for (int n = 2; n <= N; ++n)
        a.set(n, cd{std::pow(static_cast<double>(n), -0.5) *
                        std::pow(std::log(static_cast<double>(n)), -0.75),
                    0.0});
    return a;
}

inline FourierCoeffs generate_counterexample(const CounterexampleSpec& spec, int N) {
    switch (spec.kind) {
        case CounterexampleKind::time_regularity:
            return gen_time_counterexample(spec.epsilon, N);
        case CounterexampleKind::space_regularity:
            return gen_lacunary_counterexample(spec.sigma, spec.s2, N);
        case CounterexampleKind::borderline:
            return gen_borderline_counterexample(N);
    }
    throw std::invalid_argument("unknown counterexample kind");
}

struct ScanPoint {
    int level = 0;
    double value = 0.0;
};

namespace detail {

// t = 0 weighted norm of the renormalized square, streamed over support
// pairs without materializing term lists (levels up to 2^12 stay cheap).
// Identical in value to norm_at_time(build_wick_rep(...), 0, s1, s2).
inline double t0_streaming_norm(const FourierCoeffs& a, int L, double sigma,
                                const FlowParams& p, double s1, double s2) {
    std::vector<int> idx;
    std::vector<cd> amp;
    bool real_data = true;
    for (const auto& [n, v] : a.entries()) {
        if (std::abs(n) > L) continue;
        idx.push_back(n);
        amp.push_back(v);
        if (v.imag() != 0.0) real_data = false;
    }
    const std::size_t S = idx.size();
    std::vector<double> weight(S), power(S);
    for (std::size_t i = 0; i < S; ++i) {
        weight[i] = bracket_pow(static_cast<double>(idx[i]), sigma);
        power[i] = abs_pow(static_cast<double>(idx[i]), p.alpha);
    }

    const std::size_t modes = 4 * static_cast<std::size_t>(L) + 1;
    constexpr std::size_t CHUNK = 128;
    const std::size_t nchunks = S == 0 ? 0 : (S + CHUNK - 1) / CHUNK;
    std::vector<std::vector<cd>> partial(nchunks);
    parallel_chunks(S, CHUNK, [&](std::size_t lo, std::size_t hi, std::size_t c) {
        std::vector<cd> acc(modes, cd{0.0, 0.0});
        if (real_data) {
            std::vector<double> racc(modes, 0.0);
            for (std::size_t i = lo; i < hi; ++i) {
                const double wi = weight[i] * amp[i].real();
                for (std::size_t j = 0; j < S; ++j) {
                    if (i == j) continue;
                    racc[static_cast<std::size_t>(idx[i] - idx[j] + 2 * L)] +=
                        wi * weight[j] * amp[j].real() *
                        bracket_pow(power[i] - power[j], -s1);
                }
            }
            for (std::size_t k = 0; k < modes; ++k) acc[k] = cd{racc[k], 0.0};
        } else {
            for (std::size_t i = lo; i < hi; ++i) {
                const cd wi = weight[i] * amp[i];
                for (std::size_t j = 0; j < S; ++j) {
                    if (i == j) continue;
                    acc[static_cast<std::size_t>(idx[i] - idx[j] + 2 * L)] +=
                        wi * weight[j] * std::conj(amp[j]) *
                        bracket_pow(power[i] - power[j], -s1);
                }
            }
        }
        partial[c] = std::move(acc);
    });

    double total = 0.0;
    for (int n = -2 * L; n <= 2 * L; ++n) {
        if (n == 0) continue;
        cd inner{0.0, 0.0};
        for (const auto& acc : partial)
            inner += acc[static_cast<std::size_t>(n + 2 * L)];
        total += bracket_pow(static_cast<double>(n), -2.0 * s2) * std::norm(inner);
    }
    return std::sqrt(total);
}

inline void validate_divergence_regime(const CounterexampleSpec& spec,
                                       const WickExponents& exps, const FlowParams& p) {
    constexpr double TOL = 1e-12;
    if (std::abs(exps.sigma - spec.sigma) > TOL)
        throw std::invalid_argument(
            "divergence_scan: exponent sigma must match the data family sigma");
    switch (spec.kind) {
        case CounterexampleKind::time_regularity: {
            const double bound = (2.0 * spec.sigma - 2.0 * spec.epsilon) / (p.alpha - 1.0);
            if (exps.s1 > bound + TOL)
                throw std::invalid_argument(
                    "divergence_scan: slow-decay family requires s1 <= (2 sigma - 2 "
                    "eps)/(alpha - 1)");
            break;
        }
        case CounterexampleKind::space_regularity:
            if (!(exps.s2 < 2.0 * spec.sigma))
                throw std::invalid_argument(
                    "divergence_scan: lacunary family requires s2 < 2 sigma");
            break;
        case CounterexampleKind::borderline: {
            const double tied = 2.0 * spec.sigma / (p.alpha - 1.0);
            if (std::abs(exps.s1 - tied) > TOL)
                throw std::invalid_argument(
                    "divergence_scan: borderline family requires s1 = 2 sigma/(alpha - 1)");
            if (2.0 * (exps.s1 + exps.s2) > 1.0 + TOL)
                throw std::invalid_argument(
                    "divergence_scan: borderline family requires 2(s1 + s2) <= 1");
            break;
        }
    }
}

}  // namespace detail

// Tabulates the t = 0 weighted norm of the renormalized square along a list
// of truncation levels, after checking the exponents sit inside the regime
// where the chosen family provably diverges.
inline std::vector<ScanPoint> divergence_scan(const CounterexampleSpec& spec,
                                              const WickExponents& exps,
                                              const FlowParams& p,
                                              const std::vector<int>& levels) {
    if (levels.empty())
        throw std::invalid_argument("divergence_scan: need at least one level");
    for (std::size_t i = 0; i < levels.size(); ++i)
        if (levels[i] < 1 || (i > 0 && levels[i] <= levels[i - 1]))
            throw std::invalid_argument(
                "divergence_scan: levels must be strictly increasing and >= 1");
    detail::validate_divergence_regime(spec, exps, p);

    std::vector<ScanPoint> points;
    points.reserve(levels.size());
    for (int N : levels) {
        // the one-sided family is tabulated at the doubled truncation so the
        // whole restricted pair block (m - n, m), m <= 2N, participates
        const int L = spec.kind == CounterexampleKind::borderline ? 2 * N : N;
        const FourierCoeffs a = generate_counterexample(spec, L);
        points.push_back(
            {N, detail::t0_streaming_norm(a, L, spec.sigma, p, exps.s1, exps.s2)});
    }
    return points;
}

inline std::string divergence_csv(CounterexampleKind kind,
                                  const std::vector<ScanPoint>& points) {
    std::string out = "kind,N,value\n";
    const std::string tag = kind_to_string(kind);
    for (const auto& pt : points)
        out += tag + ',' + std::to_string(pt.level) + ',' + detail::fmt_double(pt.value) +
               '\n';
    return out;
}

}  // namespace wickshift
