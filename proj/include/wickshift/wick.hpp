#pragma once

// Frequency-domain representation of the renormalized square
//
//   f_N(t, x) = | <D>^sigma e^{it|D|^alpha} Pi_N u0 (x) |^2 - | Pi_N u0 |_{H^sigma}^2
//             = sum_{0 < |n| <= 2N} e^{inx} sum_{(n1, m): n1 - m = n, |n1|,|m| <= N}
//                   <n1>^sigma <m>^sigma a_{n1} conj(a_m) e^{it(|n1|^alpha - |m|^alpha)},
//
// a finite trigonometric polynomial in both x and t. Every operation below
// works on the exact term lists: the time-weighted negative-Sobolev norm
//
//   |<D_t>^{-s1} f_N(t)|_{H^{-s2}}
//     = ( sum_n <n>^{-2 s2} | sum_k amp_k <omega_k>^{-s1} e^{it omega_k} |^2 )^{1/2}
//
// is evaluated in closed form (the time weight acts mode-by-mode on the
// explicit frequencies omega_k), with no time discretization anywhere except
// the optional sup-in-time lower bound, which samples a bracketing grid.
//
// Renormalization removes the zero mode exactly, the term lists carry the
// mirror symmetry (n, omega, amp) <-> (-n, -omega, conj amp), and terms
// sharing a bit-identical omega within one spatial mode are coalesced at
// construction.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "wickshift/exponents.hpp"
#include "wickshift/fourier.hpp"
#include "wickshift/parallel.hpp"

namespace wickshift {

struct WickTerm {
    double omega;
    cd amp;
};

class WickRep {
  public:
    const std::map<int, std::vector<WickTerm>>& terms() const { return terms_; }
    int level() const { return level_; }
    double sigma() const { return sigma_; }
    double alpha() const { return alpha_; }

    std::size_t term_count() const {
        std::size_t total = 0;
        for (const auto& [n, list] : terms_) total += list.size();
        return total;
    }

  private:
    WickRep(std::map<int, std::vector<WickTerm>> terms, int level, double sigma,
            double alpha)
        : terms_(std::move(terms)), level_(level), sigma_(sigma), alpha_(alpha) {}

    std::map<int, std::vector<WickTerm>> terms_;
    int level_ = 0;
    double sigma_ = 0.0;
    double alpha_ = 0.0;

    friend class WickBuilder;
};

namespace detail {

// Flattened, read-only view of a rep used by the hot loops.
struct FlatRep {
    std::vector<int> modes;
    std::vector<std::size_t> offsets;  // modes.size() + 1 entries
    std::vector<double> omegas;
    std::vector<cd> amps;
    std::vector<double> mode_weight;  // <n>^{-2 s2}

    explicit FlatRep(const WickRep& rep, double s2) {
        offsets.push_back(0);
        for (const auto& [n, list] : rep.terms()) {
            modes.push_back(n);
            mode_weight.push_back(bracket_pow(static_cast<double>(n), -2.0 * s2));
            for (const auto& term : list) {
                omegas.push_back(term.omega);
                amps.push_back(term.amp);
            }
            offsets.push_back(omegas.size());
        }
    }
};

}  // namespace detail

// Assembles the term map for given data/level; shared by the full rep and
// the Cauchy difference rep (which keeps only pairs touching a fresh mode).
class WickBuilder {
  public:
    static WickRep full(const FourierCoeffs& a, int N, double sigma, const FlowParams& p) {
        return build(a, N, sigma, p, /*exclude_below=*/-1);
    }

    // Terms of f_{N2} - f_{N1} for the same data: amplitudes subtracted per
    // (n1, m) key. Shared keys cancel exactly (identical formula and data),
    // leaving the pairs with max(|n1|, |m|) > N1.
    static WickRep difference(const FourierCoeffs& a, int N1, int N2, double sigma,
                              const FlowParams& p) {
        return build(a, N2, sigma, p, /*exclude_below=*/N1);
    }

  private:
    static WickRep build(const FourierCoeffs& a, int N, double sigma, const FlowParams& p,
                         int exclude_below) {
        if (N < 1) throw std::invalid_argument("wick rep: truncation level must be >= 1");

        std::vector<std::pair<int, cd>> support;
        support.reserve(a.support_size());
        for (const auto& [n, amp] : a.entries())
            if (std::abs(n) <= N) support.emplace_back(n, amp);

        std::vector<double> weight(support.size()), power(support.size());
        for (std::size_t i = 0; i < support.size(); ++i) {
            weight[i] = bracket_pow(static_cast<double>(support[i].first), sigma);
            power[i] = abs_pow(static_cast<double>(support[i].first), p.alpha);
        }

        // per-mode buckets indexed by n + 2N
        std::vector<std::vector<WickTerm>> buckets(4 * static_cast<std::size_t>(N) + 1);
        for (std::size_t i = 0; i < support.size(); ++i) {
            const int n1 = support[i].first;
            for (std::size_t j = 0; j < support.size(); ++j) {
                const int m = support[j].first;
                if (n1 == m) continue;
                if (std::max(std::abs(n1), std::abs(m)) <= exclude_below) continue;
                const cd amp = weight[i] * weight[j] * support[i].second *
                               std::conj(support[j].second);
                buckets[static_cast<std::size_t>(n1 - m + 2 * N)].push_back(
                    WickTerm{power[i] - power[j], amp});
            }
        }

        std::map<int, std::vector<WickTerm>> terms;
        for (int n = -2 * N; n <= 2 * N; ++n) {
            auto& list = buckets[static_cast<std::size_t>(n + 2 * N)];
            if (list.empty()) continue;
            std::stable_sort(list.begin(), list.end(),
                             [](const WickTerm& l, const WickTerm& r) {
                                 return l.omega < r.omega;
                             });
            // coalesce bit-identical frequencies
            std::vector<WickTerm> merged;
            merged.reserve(list.size());
            for (const auto& term : list) {
                if (!merged.empty() && merged.back().omega == term.omega)
                    merged.back().amp += term.amp;
                else
                    merged.push_back(term);
            }
            terms.emplace(n, std::move(merged));
        }
        return WickRep(std::move(terms), N, sigma, p.alpha);
    }
};

inline WickRep build_wick_rep(const FourierCoeffs& a, int N, double sigma,
                              const FlowParams& p) {
    return WickBuilder::full(a, N, sigma, p);
}

// | <D_t>^{-s1} f(t) |_{H^{-s2}} evaluated exactly at one time.
inline double norm_at_time(const WickRep& rep, double t, double s1, double s2) {
    const detail::FlatRep flat(rep, s2);
    const std::size_t nmodes = flat.modes.size();
    if (nmodes == 0) return 0.0;

    constexpr std::size_t CHUNK = 64;
    const std::size_t nchunks = (nmodes + CHUNK - 1) / CHUNK;
    std::vector<double> partial(nchunks, 0.0);
    parallel_chunks(nmodes, CHUNK, [&](std::size_t lo, std::size_t hi, std::size_t c) {
        double acc = 0.0;
        for (std::size_t mi = lo; mi < hi; ++mi) {
            cd inner{0.0, 0.0};
            for (std::size_t k = flat.offsets[mi]; k < flat.offsets[mi + 1]; ++k) {
                const double tw = bracket_pow(flat.omegas[k], -s1);
                if (t == 0.0)
                    inner += flat.amps[k] * tw;
                else
                    inner += flat.amps[k] * tw * std::polar(1.0, t * flat.omegas[k]);
            }
            acc += flat.mode_weight[mi] * std::norm(inner);
        }
        partial[c] = acc;
    });
    double total = 0.0;
    for (double v : partial) total += v;  // ordered reduce: bit-stable output
    return std::sqrt(total);
}

// Pointwise values sum_n e^{inx} sum_k amp_k e^{it omega_k}; real up to rounding.
inline std::vector<cd> evaluate_rep_grid(const WickRep& rep, double t,
                                         const std::vector<double>& x_points) {
    if (x_points.empty())
        throw std::invalid_argument("evaluate_rep_grid: need at least one point");
    std::vector<cd> out(x_points.size(), cd{0.0, 0.0});
    for (const auto& [n, list] : rep.terms()) {
        cd time_factor{0.0, 0.0};
        for (const auto& term : list)
            time_factor += term.amp * std::polar(1.0, t * term.omega);
        for (std::size_t j = 0; j < x_points.size(); ++j)
            out[j] += time_factor * std::polar(1.0, n * x_points[j]);
    }
    return out;
}

struct SupBounds {
    double lower = 0.0;
    double upper = 0.0;
};

namespace detail {

// Triangle-inequality upper bound: sqrt( sum_n <n>^{-2s2} (sum_k |amp_k| <omega_k>^{-s1})^2 ).
inline double rep_sup_upper(const WickRep& rep, double s1, double s2) {
    double total = 0.0;
    for (const auto& [n, list] : rep.terms()) {
        double mass = 0.0;
        for (const auto& term : list)
            mass += std::abs(term.amp) * bracket_pow(term.omega, -s1);
        total += bracket_pow(static_cast<double>(n), -2.0 * s2) * mass * mass;
    }
    return std::sqrt(total);
}

}  // namespace detail

// Brackets sup_t | <D_t>^{-s1} f(t) |_{H^{-s2}}. The lower bound is the grid
// maximum over t = 0 plus t_samples uniform points covering K = 8 near-periods
// of the fastest frequency (window 2 pi ceil(W)/W * K for W = max |omega|;
// plain 2 pi when the rep is stationary). The upper bound drops all phases.
inline SupBounds sup_norm_bounds(const WickRep& rep, double s1, double s2,
                                 int t_samples = 512) {
    if (t_samples < 1) throw std::invalid_argument("sup_norm_bounds: need t_samples >= 1");
    SupBounds out;
    out.upper = detail::rep_sup_upper(rep, s1, s2);

    const detail::FlatRep flat(rep, s2);
    const std::size_t nmodes = flat.modes.size();
    if (nmodes == 0) return out;

    double max_omega = 0.0;
    for (double w : flat.omegas) max_omega = std::max(max_omega, std::abs(w));
    constexpr double TWO_PI = 6.28318530717958647692;
    constexpr int WINDOWS = 8;
    const double window =
        max_omega == 0.0 ? TWO_PI : TWO_PI * std::ceil(max_omega) / max_omega * WINDOWS;
    const double dt = window / t_samples;

    // t = 0 sample: reuse the exact-norm path so the reported t0 value can
    // never exceed the lower bound by a rounding step.
    const double at_zero = norm_at_time(rep, 0.0, s1, s2);
    double best_sq = at_zero * at_zero;

    constexpr std::size_t CHUNK = 64;
    const std::size_t nchunks = (nmodes + CHUNK - 1) / CHUNK;
    std::vector<std::vector<double>> partial(nchunks);
    parallel_chunks(nmodes, CHUNK, [&](std::size_t lo, std::size_t hi, std::size_t c) {
        std::vector<double> acc(static_cast<std::size_t>(t_samples), 0.0);
        std::vector<cd> state, rot;
        for (std::size_t mi = lo; mi < hi; ++mi) {
            const std::size_t b = flat.offsets[mi], e = flat.offsets[mi + 1];
            state.resize(e - b);
            rot.resize(e - b);
            for (std::size_t k = b; k < e; ++k) {
                state[k - b] = flat.amps[k] * bracket_pow(flat.omegas[k], -s1);
                rot[k - b] = std::polar(1.0, dt * flat.omegas[k]);
            }
            const double w_n = flat.mode_weight[mi];
            for (int j = 0; j < t_samples; ++j) {
                cd inner{0.0, 0.0};
                for (std::size_t k = 0; k < state.size(); ++k) {
                    state[k] *= rot[k];  // advance to t_{j+1} = (j+1) dt
                    inner += state[k];
                }
                acc[static_cast<std::size_t>(j)] += w_n * std::norm(inner);
            }
        }
        partial[c] = std::move(acc);
    });
    for (int j = 0; j < t_samples; ++j) {
        double total = 0.0;
        for (const auto& acc : partial) total += acc[static_cast<std::size_t>(j)];
        best_sq = std::max(best_sq, total);
    }
    out.lower = std::sqrt(best_sq);
    return out;
}

struct CauchyGap {
    double gap_upper = 0.0;
    double rhs = 0.0;
};

// Certified tail bound for |f_{N2} - f_{N1}| in the sup-in-time norm, paired
// with the bilinear-estimate right-hand side |u0|_{L^2} |Pi_{N2} u0 - Pi_{N1} u0|_{L^2}.
inline CauchyGap cauchy_gap(const FourierCoeffs& a, int N1, int N2,
                            const WickExponents& exps, const FlowParams& p) {
    if (N1 < 0 || N1 >= N2)
        throw std::invalid_argument("cauchy_gap: need 0 <= N1 < N2");
    CauchyGap g;
    const WickRep diff = WickBuilder::difference(a, N1, N2, exps.sigma, p);
    g.gap_upper = detail::rep_sup_upper(diff, exps.s1, exps.s2);
    g.rhs = sobolev_norm(a, 0.0) *
            sobolev_norm(truncate(a, N2) - truncate(a, N1), 0.0);
    return g;
}

struct NormReportRow {
    int level = 0;
    double t0_norm = 0.0;
    double sup_lower = 0.0;
    double sup_upper = 0.0;
    bool has_gap = false;
    double gap_upper = 0.0;
    double rhs = 0.0;
};

namespace detail {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

struct NormReport {
    std::vector<NormReportRow> rows;

    std::string to_csv() const {
        std::string out = "N,t0_norm,sup_lower,sup_upper,gap_upper,rhs\n";
        for (const auto& r : rows) {
            out += std::to_string(r.level) + ',' + detail::fmt_double(r.t0_norm) + ',' +
                   detail::fmt_double(r.sup_lower) + ',' + detail::fmt_double(r.sup_upper) +
                   ',';
            if (r.has_gap)
                out += detail::fmt_double(r.gap_upper) + ',' + detail::fmt_double(r.rhs);
            else
                out += ",";
            out += '\n';
        }
        return out;
    }

    nlohmann::json to_json() const {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& r : rows) {
            nlohmann::json row{{"N", r.level},
                               {"t0_norm", r.t0_norm},
                               {"sup_lower", r.sup_lower},
                               {"sup_upper", r.sup_upper}};
            if (r.has_gap) {
                row["gap_upper"] = r.gap_upper;
                row["rhs"] = r.rhs;
                if (r.rhs > 0.0) row["ratio"] = r.gap_upper / r.rhs;
            }
            j.push_back(row);
        }
        return j;
    }
};

// Per-level norms plus consecutive-level Cauchy certificates; for data in
// l^2 the gap column tends to zero, certifying sup-norm convergence.
inline NormReport convergence_scan(const FourierCoeffs& a, const WickExponents& exps,
                                   const FlowParams& p, const std::vector<int>& levels,
                                   int t_samples = 512) {
    if (levels.empty())
        throw std::invalid_argument("convergence_scan: need at least one level");
    for (std::size_t i = 0; i < levels.size(); ++i)
        if (levels[i] < 1 || (i > 0 && levels[i] <= levels[i - 1]))
            throw std::invalid_argument(
                "convergence_scan: levels must be strictly increasing and >= 1");

    NormReport report;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        NormReportRow row;
        row.level = levels[i];
        const WickRep rep = build_wick_rep(a, levels[i], exps.sigma, p);
        row.t0_norm = norm_at_time(rep, 0.0, exps.s1, exps.s2);
        const SupBounds b = sup_norm_bounds(rep, exps.s1, exps.s2, t_samples);
        row.sup_lower = b.lower;
        row.sup_upper = b.upper;
        if (i > 0) {
            const CauchyGap g = cauchy_gap(a, levels[i - 1], levels[i], exps, p);
            row.has_gap = true;
            row.gap_upper = g.gap_upper;
            row.rhs = g.rhs;
        }
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace wickshift
