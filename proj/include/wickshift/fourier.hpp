#pragma once

// Spectral core for dispersive flows on the circle.
//
//   u0(x)       = sum_n a_n e^{inx}          finite Fourier support
//   e^{it|D|^a} : a_n -> e^{it|n|^a} a_n     fractional flow, a > 1, |0|^a := 0
//   Pi_N        : keep modes |n| <= N
//   <n>         = (1 + n^2)^{1/2}            bracket weight
//   |u|_{H^s}   = ( sum_n <n>^{2s} |a_n|^2 )^{1/2}
//
// The measure on the circle is normalized to unit total mass, so the L^2
// norm of u0 is the plain l^2 norm of its coefficients and the mean of
// |u0|^2 over x equals sum_n |a_n|^2.
//
// Coefficient maps are sparse, sorted by mode, and never store an exact
// zero; all stored amplitudes are finite. Serialization is a JSON array of
// [n, re, im] triples sorted by n.

#include <cmath>
#include <complex>
#include <initializer_list>
#include <limits>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include <json.hpp>

namespace wickshift {

using cd = std::complex<double>;

// |x|^alpha with the flow's convention |0|^alpha := 0 (exact zero, no pow call).
inline double abs_pow(double x, double alpha) {
    return x == 0.0 ? 0.0 : std::pow(std::abs(x), alpha);
}

// <x>^s = (1 + x^2)^{s/2}
inline double bracket_pow(double x, double s) {
    if (s == 0.0) return 1.0;
    return std::pow(1.0 + x * x, 0.5 * s);
}

// Dispersion parameters of the flow e^{it|D|^alpha}; only alpha > 1 is admissible.
struct FlowParams {
    double alpha;
    explicit FlowParams(double a) : alpha(a) {
        if (!std::isfinite(a) || a <= 1.0)
            throw std::invalid_argument("FlowParams: alpha must be finite and > 1");
    }
};

// Sparse complex coefficient map n -> a_n.
class FourierCoeffs {
  public:
    FourierCoeffs() = default;
    FourierCoeffs(std::initializer_list<std::pair<const int, cd>> init) {
        for (const auto& [n, amp] : init) set(n, amp);
    }

    // Stores a_n = amp; exact zeros erase the entry, non-finite values throw.
    void set(int n, cd amp) {
        if (!std::isfinite(amp.real()) || !std::isfinite(amp.imag()))
            throw std::invalid_argument("FourierCoeffs: amplitude must be finite");
        if (amp == cd{0.0, 0.0})
            entries_.erase(n);
        else
            entries_[n] = amp;
    }

    // a_n, defaulting to 0 outside the stored support.
    cd at(int n) const {
        const auto it = entries_.find(n);
        return it == entries_.end() ? cd{0.0, 0.0} : it->second;
    }

    const std::map<int, cd>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    std::size_t support_size() const { return entries_.size(); }

    // Largest |n| carrying a nonzero amplitude; 0 for empty data.
    int max_mode() const {
        if (entries_.empty()) return 0;
        return std::max(std::abs(entries_.begin()->first),
                        std::abs(entries_.rbegin()->first));
    }

    friend FourierCoeffs operator+(const FourierCoeffs& a, const FourierCoeffs& b) {
        FourierCoeffs out = a;
        for (const auto& [n, amp] : b.entries_) out.set(n, out.at(n) + amp);
        return out;
    }
    friend FourierCoeffs operator-(const FourierCoeffs& a, const FourierCoeffs& b) {
        FourierCoeffs out = a;
        for (const auto& [n, amp] : b.entries_) out.set(n, out.at(n) - amp);
        return out;
    }

  private:
    std::map<int, cd> entries_;
};

// One flow step: multiplies every mode by the exact phase e^{it|n|^alpha}.
// Unitary on every H^s; the zero mode is a fixed point.
inline FourierCoeffs evolve(const FourierCoeffs& a, const FlowParams& p, double t) {
    FourierCoeffs out;
    for (const auto& [n, amp] : a.entries())
        out.set(n, amp * std::polar(1.0, t * abs_pow(static_cast<double>(n), p.alpha)));
    return out;
}

// Pi_N: keeps modes |n| <= N verbatim. N must be >= 0.
inline FourierCoeffs truncate(const FourierCoeffs& a, int N) {
    if (N < 0) throw std::invalid_argument("truncate: level must be >= 0");
    FourierCoeffs out;
    for (const auto& [n, amp] : a.entries())
        if (std::abs(n) <= N) out.set(n, amp);
    return out;
}

// |a|_{H^s} = sqrt( sum_n <n>^{2s} |a_n|^2 ); s = 0 is the L^2 norm.
inline double sobolev_norm(const FourierCoeffs& a, double s) {
    double total = 0.0;
    for (const auto& [n, amp] : a.entries())
        total += bracket_pow(static_cast<double>(n), 2.0 * s) * std::norm(amp);
    return std::sqrt(total);
}

// Pointwise values of e^{it|D|^alpha} u0 at the given x points.
inline std::vector<cd> evaluate_grid(const FourierCoeffs& a, const FlowParams& p, double t,
                                     const std::vector<double>& x_points) {
    if (x_points.empty())
        throw std::invalid_argument("evaluate_grid: need at least one point");
    std::vector<cd> out(x_points.size(), cd{0.0, 0.0});
    for (const auto& [n, amp] : a.entries()) {
        const double phase_t = t * abs_pow(static_cast<double>(n), p.alpha);
        for (std::size_t j = 0; j < x_points.size(); ++j)
            out[j] += amp * std::polar(1.0, phase_t + n * x_points[j]);
    }
    return out;
}

// JSON: array of [n, re, im], sorted by n (the map order).
inline void to_json(nlohmann::json& j, const FourierCoeffs& a) {
    j = nlohmann::json::array();
    for (const auto& [n, amp] : a.entries())
        j.push_back(nlohmann::json::array({n, amp.real(), amp.imag()}));
}

inline void from_json(const nlohmann::json& j, FourierCoeffs& a) {
    if (!j.is_array()) throw std::invalid_argument("FourierCoeffs: expected JSON array");
    a = FourierCoeffs{};
    for (const auto& triple : j) {
        if (!triple.is_array() || triple.size() != 3)
            throw std::invalid_argument("FourierCoeffs: expected [n, re, im] triples");
        a.set(triple[0].get<int>(), cd{triple[1].get<double>(), triple[2].get<double>()});
    }
}

}  // namespace wickshift
