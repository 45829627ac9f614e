#pragma once

// Finite-dimensional observability for the fractional flow: Gram matrices
//
//   G(n1, n2) = bhat(n2 - n1) * Int_0^T e^{it(|n1|^a - |n2|^a)} dt,
//
// which represent Int_0^T Int b(x) |e^{it|D|^a} u|^2 dx/(2pi) dt restricted to
// modes |n| <= N. The time integral is T exactly on the resonant pairs
// |n1| = |n2| and ((sin(T d))/d, (1 - cos(T d))/d) off them; entries are
// closed-form, no quadrature. The observability constant is 1/lambda_min of
// the Gram form; forms with lambda_min at the eigensolver noise floor are
// flagged degenerate instead of producing a huge constant.
//
// Also here: the L^inf_x L^2_T ratio sup_x ( Int_0^T |u(t,x)|^2 dt )^{1/2} /
// |u0|_{L^2} (exact in t via the same integrals, sampled on a uniform x
// grid), its randomized supremum probe, a checker for the weakened
// observability inequality with an <n>^{-2a} remainder, and shifted ergodic
// averages (1/n) sum_k f(x - k s) acting diagonally on coefficients.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wickshift/fourier.hpp"

namespace wickshift {

struct ControlProfile {
    FourierCoeffs bhat;
    std::string name;

    static ControlProfile uniform() {
        return ControlProfile{FourierCoeffs{{0, cd{1.0, 0.0}}}, "uniform"};
    }

    // Indicator of the arc [beta, gamma], normalized by 2 pi:
    // bhat(0) = (gamma - beta)/(2 pi), bhat(k) = (e^{-ik beta} - e^{-ik gamma})/(2 pi i k).
    // Coefficients are materialized for |k| <= max_abs_mode, with bhat(-k)
    // set to conj(bhat(k)) so the profile is Hermitian by construction.
    static ControlProfile arc(double beta, double gamma, int max_abs_mode) {
        constexpr double TWO_PI = 6.28318530717958647692;
        if (!(gamma > beta))
            throw std::invalid_argument("arc control: need gamma > beta");
        if (gamma - beta > TWO_PI)
            throw std::invalid_argument("arc control: arc length exceeds the circle");
        if (max_abs_mode < 0)
            throw std::invalid_argument("arc control: need max_abs_mode >= 0");
        FourierCoeffs b;
        b.set(0, cd{(gamma - beta) / TWO_PI, 0.0});
        for (int k = 1; k <= max_abs_mode; ++k) {
            const cd num = std::polar(1.0, -k * beta) - std::polar(1.0, -k * gamma);
            const cd val = num / cd{0.0, TWO_PI * k};
            b.set(k, val);
            b.set(-k, std::conj(val));
        }
        return ControlProfile{std::move(b), "arc"};
    }

    static ControlProfile one_plus_cos() {
        return ControlProfile{FourierCoeffs{{0, cd{1.0, 0.0}},
                                            {1, cd{0.5, 0.0}},
                                            {-1, cd{0.5, 0.0}}},
                              "one_plus_cos"};
    }

    // Accepts any Hermitian-symmetric coefficient list with positive mean.
    static ControlProfile from_coeffs(const FourierCoeffs& coeffs, std::string name) {
        constexpr double TOL = 1e-12;
        const cd mean = coeffs.at(0);
        if (!(mean.real() > 0.0) || std::abs(mean.imag()) > TOL * (1.0 + std::abs(mean)))
            throw std::invalid_argument("control profile: mean coefficient must be real and positive");
        for (const auto& [k, v] : coeffs.entries()) {
            const cd mirror = coeffs.at(-k);
            if (std::abs(mirror - std::conj(v)) > TOL * (1.0 + std::abs(v)))
                throw std::invalid_argument(
                    "control profile: coefficients must be Hermitian-symmetric");
        }
        return ControlProfile{coeffs, std::move(name)};
    }
};

namespace detail {

// Int_0^T e^{it d} dt = (sin(T d) + i (1 - cos(T d))) / d, and T at d = 0;
// the resonant set |n1| = |n2| is decided on the integers, never by
// comparing computed phases.
inline cd flow_time_integral(int n1, int n2, double alpha, double T) {
    if (std::abs(n1) == std::abs(n2)) return cd{T, 0.0};
    const double d = abs_pow(static_cast<double>(n1), alpha) -
                     abs_pow(static_cast<double>(n2), alpha);
    return cd{std::sin(T * d) / d, (1.0 - std::cos(T * d)) / d};
}

}  // namespace detail

class GramMatrix {
  public:
    GramMatrix(Eigen::MatrixXcd m, double T, double alpha)
        : m_(std::move(m)), T_(T), alpha_(alpha) {
        if (m_.rows() != m_.cols() || m_.rows() < 1 || m_.rows() % 2 == 0)
            throw std::invalid_argument("gram matrix: need a square matrix of odd size");
        level_ = static_cast<int>((m_.rows() - 1) / 2);
    }

    cd entry(int n1, int n2) const {
        if (std::abs(n1) > level_ || std::abs(n2) > level_)
            throw std::out_of_range("gram matrix: mode outside the level");
        return m_(n1 + level_, n2 + level_);
    }

    const Eigen::MatrixXcd& matrix() const { return m_; }
    int level() const { return level_; }
    double duration() const { return T_; }
    double alpha() const { return alpha_; }

  private:
    Eigen::MatrixXcd m_;
    double T_ = 0.0;
    double alpha_ = 0.0;
    int level_ = 0;
};

inline GramMatrix assemble_gram(const ControlProfile& b, const FlowParams& p, double T,
                                int N) {
    if (!(T > 0.0)) throw std::invalid_argument("assemble_gram: need T > 0");
    if (N < 1) throw std::invalid_argument("assemble_gram: need N >= 1");
    const int dim = 2 * N + 1;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n1 = -N; n1 <= N; ++n1)
        for (int n2 = -N; n2 <= N; ++n2) {
            const cd c = b.bhat.at(n2 - n1);
            if (c == cd{0.0, 0.0}) continue;
            m(n1 + N, n2 + N) = c * detail::flow_time_integral(n1, n2, p.alpha, T);
        }
    return GramMatrix(std::move(m), T, p.alpha);
}

struct ObservabilityResult {
    double lambda_min = 0.0;
    double C = std::numeric_limits<double>::quiet_NaN();
    bool degenerate = true;
};

// Smallest eigenvalue of the Gram form and the resulting constant
// C = 1/lambda_min. Forms whose smallest eigenvalue is indistinguishable
// from zero at the eigensolver's precision (relative to the spectral norm)
// are reported degenerate with C = NaN.
inline ObservabilityResult observability_constant(const GramMatrix& g) {
    const Eigen::MatrixXcd& m = g.matrix();
    ObservabilityResult res;
    double spectral_norm = 0.0;

    // Exactly diagonal forms (the uniform control, for one) have their
    // eigenvalues on the diagonal; skip the solver so they stay exact.
    bool diagonal = true;
    for (Eigen::Index r = 0; r < m.rows() && diagonal; ++r)
        for (Eigen::Index c = 0; c < m.cols() && diagonal; ++c)
            if ((r == c ? m(r, c).imag() != 0.0 : m(r, c) != cd{0.0, 0.0}))
                diagonal = false;
    if (diagonal) {
        res.lambda_min = m(0, 0).real();
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            res.lambda_min = std::min(res.lambda_min, m(r, r).real());
            spectral_norm = std::max(spectral_norm, std::abs(m(r, r).real()));
        }
        if (res.lambda_min <= 1e-14 * spectral_norm) {
            res.degenerate = true;
            res.C = std::numeric_limits<double>::quiet_NaN();
        } else {
            res.degenerate = false;
            res.C = 1.0 / res.lambda_min;
        }
        return res;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("observability_constant: eigensolver failed");
    const auto& ev = solver.eigenvalues();
    res.lambda_min = ev(0);
    spectral_norm = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
    if (res.lambda_min <= 1e-14 * spectral_norm) {
        res.degenerate = true;
        res.C = std::numeric_limits<double>::quiet_NaN();
    } else {
        res.degenerate = false;
        res.C = 1.0 / res.lambda_min;
    }
    return res;
}

// sup_x ( Int_0^T |e^{it|D|^a} u0|^2(x) dt )^{1/2} / |u0|_{L^2}, with the
// time integral exact per mode pair and the sup taken over a uniform x grid
// dense enough for the trigonometric degree (>= 4 (max_mode + 1) samples).
inline double strichartz_ratio(const FourierCoeffs& u0, const FlowParams& p, double T,
                               int x_samples) {
    if (!(T > 0.0)) throw std::invalid_argument("strichartz_ratio: need T > 0");
    if (u0.empty()) return 0.0;
    if (x_samples < 4 * (u0.max_mode() + 1))
        throw std::invalid_argument(
            "strichartz_ratio: need x_samples >= 4 (max_mode + 1)");

    // diagonal sums G_d = sum_{n1 - n2 = d} a_{n1} conj(a_{n2}) I_T(n1, n2)
    const int M = u0.max_mode();
    std::vector<cd> diag(static_cast<std::size_t>(4 * M + 1), cd{0.0, 0.0});
    for (const auto& [n1, a] : u0.entries())
        for (const auto& [n2, b] : u0.entries())
            diag[static_cast<std::size_t>(n1 - n2 + 2 * M)] +=
                a * std::conj(b) * detail::flow_time_integral(n1, n2, p.alpha, T);

    constexpr double TWO_PI = 6.28318530717958647692;
    std::vector<double> val(static_cast<std::size_t>(x_samples),
                            diag[static_cast<std::size_t>(2 * M)].real());
    for (int d = 1; d <= 2 * M; ++d) {
        // G_{-d} = conj(G_d): fold the pair into one real contribution
        const cd zd = diag[static_cast<std::size_t>(d + 2 * M)];
        if (zd == cd{0.0, 0.0}) continue;
        const cd rot = std::polar(1.0, d * TWO_PI / x_samples);
        cd z = zd;  // G_d e^{i d x_j} advanced by one rotation per grid step
        for (int j = 0; j < x_samples; ++j) {
            val[static_cast<std::size_t>(j)] += 2.0 * z.real();
            z *= rot;
        }
    }
    double best = 0.0;
    for (double v : val) best = std::max(best, v);
    return std::sqrt(std::max(best, 0.0)) / sobolev_norm(u0, 0.0);
}

// Largest ratio over a mixed random ensemble at the given truncation: dense
// Gaussian data, single modes, and +-j resonant pairs (the pairs realize the
// extremal ratio sqrt(2T) at every truncation, so the recorded cap is a
// level-stable envelope rather than a tail statistic of the dense draws,
// whose maxima self-average downward as the mode count grows). Trial i is
// seeded from {seed, i}, so extending the trial budget keeps earlier draws.
inline double strichartz_cap(const FlowParams& p, double T, int max_mode, int trials,
                             std::uint64_t seed) {
    if (max_mode < 0) throw std::invalid_argument("strichartz_cap: need max_mode >= 0");
    if (trials < 1) throw std::invalid_argument("strichartz_cap: need trials >= 1");
    // finer than the 4(max_mode+1) minimum so grid capture of the peak is
    // not the bottleneck for high-frequency pairs
    const int x_samples = std::max(4 * (max_mode + 1), 8192);
    double best = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                          static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(trial)};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> amp(0.0, 1.0);
        FourierCoeffs u;
        const int kind = trial % 4;
        if (kind == 0) {
            for (int n = -max_mode; n <= max_mode; ++n) {
                const double re = amp(rng), im = amp(rng);
                u.set(n, cd{re, im});
            }
        } else if (kind == 1 || max_mode < 1) {
            std::uniform_int_distribution<int> any_mode(-max_mode, max_mode);
            u.set(any_mode(rng), cd{amp(rng), amp(rng)});
        } else {
            std::uniform_int_distribution<int> pos_mode(1, max_mode);
            const int j = pos_mode(rng);
            u.set(j, cd{amp(rng), amp(rng)});
            u.set(-j, cd{amp(rng), amp(rng)});
        }
        best = std::max(best, strichartz_ratio(u, p, T, x_samples));
    }
    return best;
}

// Weakened observability: |u0|^2_{L^2} <= C ( <G u0, u0> + |u0|^2_{H^{-a}} ),
// the Gram form plus an <n>^{-2a} remainder absorbing the low-frequency
// leakage. Returns whether the inequality holds (tiny relative slack for
// rounding).
inline bool weak_obs_check(const FourierCoeffs& u0, const ControlProfile& b,
                           const FlowParams& p, double T, double C) {
    if (!(C > 0.0)) throw std::invalid_argument("weak_obs_check: need C > 0");
    const int N = std::max(1, u0.max_mode());
    const GramMatrix g = assemble_gram(b, p, T, N);
    cd form{0.0, 0.0};
    for (const auto& [n1, a] : u0.entries())
        for (const auto& [n2, c2] : u0.entries())
            form += g.entry(n1, n2) * a * std::conj(c2);
    double remainder = 0.0, mass = 0.0;
    for (const auto& [n, a] : u0.entries()) {
        remainder +=
            std::norm(a) * std::pow(bracket_pow(static_cast<double>(n), -p.alpha), 2.0);
        mass += std::norm(a);
    }
    return mass <= C * (form.real() + remainder) * (1.0 + 1e-12);
}

// (1/n) sum_{k=0}^{n-1} f(x - k s): multiplies mode m by the literal average
// (1/n) sum_k e^{-i m k s}; the zero mode is returned untouched.
inline FourierCoeffs ergodic_average(const FourierCoeffs& f, double shift, int n) {
    if (n < 1) throw std::invalid_argument("ergodic_average: need n >= 1");
    if (n == 1) return f;
    FourierCoeffs out;
    for (const auto& [m, a] : f.entries()) {
        if (m == 0) {
            out.set(0, a);
            continue;
        }
        cd sum{1.0, 0.0};  // k = 0 term
        for (int k = 1; k < n; ++k)
            sum += std::polar(1.0, -static_cast<double>(m) * k * shift);
        out.set(m, a * (sum / static_cast<double>(n)));
    }
    return out;
}

}  // namespace wickshift
