#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "dpolar/codespec.hpp"

namespace dpolar {
namespace ga {

// Gaussian-approximation construction.
//
// Densities are summarized by the mean m of a consistent Gaussian LLR
// N(m, 2m). The check-side degradation uses the standard two-segment proxy
//
//   phi(x) = exp(-0.4527 x^0.86 + 0.0218)              for 0 < x <= 10
//   phi(x) = sqrt(pi/x) e^{-x/4} (1 - 10/(7x))         for x > 10
//
// with switch point x* = 10, phi(0) = 1. One polarization step maps a mean m
// to the pair
//
//   m- = phi^{-1}(1 - (1 - phi(m))^2)     (check branch, first half)
//   m+ = 2 m                              (variable branch, second half)
//
// Everything below runs on ln phi rather than phi so that the recursion stays
// meaningful when means reach the thousands (phi underflows around x ~ 1490).

inline constexpr double kPhiSwitch = 10.0;

inline double log_phi(double x) {
    if (x < 0.0) throw std::invalid_argument("log_phi: negative mean");
    if (x == 0.0) return 0.0;
    if (x <= kPhiSwitch) return -0.4527 * std::pow(x, 0.86) + 0.0218;
    return 0.5 * (std::log(std::numbers::pi) - std::log(x)) - 0.25 * x +
           std::log(1.0 - 10.0 / (7.0 * x));
}

// Inverse of log_phi. The first segment inverts in closed form; the second is
// monotone decreasing on [10, inf) and is bisected.
inline double log_phi_inv(double lz) {
    static const double switch_lz = -0.4527 * std::pow(kPhiSwitch, 0.86) + 0.0218;
    if (lz >= switch_lz) {
        double t = (0.0218 - lz) / 0.4527;
        if (t <= 0.0) return 0.0;
        return std::pow(t, 1.0 / 0.86);
    }
    double lo = kPhiSwitch;
    double hi = std::max(12.0, -4.0 * lz + 64.0);
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (log_phi(mid) > lz)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-12 * hi) break;
    }
    return 0.5 * (lo + hi);
}

inline double check_step(double m) {
    double lp = log_phi(m);
    // ln(1 - (1 - phi)^2) = ln phi + ln(2 - phi), exact in the log domain.
    double lz = lp + std::log(2.0 - std::exp(lp));
    return log_phi_inv(lz);
}

// Evolved means for all N = 2^n indices in natural order. Entry j (0-based)
// applies the branches named by the bits of j from most to least significant:
// 0 takes the check branch, 1 the variable branch. Index 0 is always the
// weakest position and index N-1 the strongest.
inline std::vector<double> evolve_means(int n, double initial_mean) {
    if (n < 0 || n > 30) throw std::invalid_argument("evolve_means: bad exponent");
    if (!(initial_mean > 0.0)) throw std::invalid_argument("evolve_means: mean must be positive");
    std::vector<double> m{initial_mean};
    for (int level = 0; level < n; ++level) {
        std::vector<double> next(m.size() * 2);
        for (std::size_t i = 0; i < m.size(); ++i) {
            next[2 * i] = check_step(m[i]);
            next[2 * i + 1] = 2.0 * m[i];
        }
        m.swap(next);
    }
    return m;
}

}  // namespace ga

// Information set for the channel code: the K most reliable positions under a
// Gaussian-approximation run from initial mean 4 R 10^{snr/10} (the mean of
// the matched-filter LLR 2y/sigma^2 at the design point, with R the overall
// source-bits-per-channel-bit rate entering the noise variance). Ties go to
// the larger index. Frozen values default to zero.
inline ChannelCodeSpec construct_channel_code(int n_c, int k, double design_snr_db,
                                              double overall_rate = 1.0) {
    if (n_c < 1 || n_c > 20) throw std::invalid_argument("construct_channel_code: bad n_c");
    std::size_t n = std::size_t{1} << n_c;
    if (k < 1 || static_cast<std::size_t>(k) > n)
        throw std::invalid_argument("construct_channel_code: K out of range");
    if (!(overall_rate > 0.0))
        throw std::invalid_argument("construct_channel_code: rate must be positive");
    double m0 = 4.0 * overall_rate * std::pow(10.0, design_snr_db / 10.0);
    auto means = ga::evolve_means(n_c, m0);

    std::vector<int> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<int>(i) + 1;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        double ma = means[a - 1], mb = means[b - 1];
        if (ma != mb) return ma > mb;
        return a > b;
    });
    std::vector<int> info(order.begin(), order.begin() + k);
    std::sort(info.begin(), info.end());

    ChannelCodeSpec spec;
    spec.n = n;
    spec.k = k;
    spec.info_set = std::move(info);
    spec.frozen_values.assign(n - static_cast<std::size_t>(k), 0);
    spec.validate();
    return spec;
}

// High-entropy set for the source code: the K least reliable positions under
// the same recursion, started from the constant prior LLR ln((1-p)/p) doubled
// to a consistent-Gaussian mean. Ties go to the smaller index.
inline SourceCodeSpec construct_source_code(int n_s, int k, double p) {
    if (n_s < 1 || n_s > 20) throw std::invalid_argument("construct_source_code: bad n_s");
    std::size_t n = std::size_t{1} << n_s;
    if (k < 1 || static_cast<std::size_t>(k) > n)
        throw std::invalid_argument("construct_source_code: K out of range");
    if (!(p > 0.0 && p <= 0.5))
        throw std::invalid_argument("construct_source_code: p must lie in (0, 0.5]");
    // p = 0.5 degenerates to a full bit of entropy everywhere; the proxy has
    // the wrong 0+ limit, so tie all means instead of evolving them.
    double m0 = 2.0 * std::log((1.0 - p) / p);
    std::vector<double> means =
        m0 == 0.0 ? std::vector<double>(n, 0.0) : ga::evolve_means(n_s, m0);

    std::vector<int> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<int>(i) + 1;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        double ma = means[a - 1], mb = means[b - 1];
        if (ma != mb) return ma < mb;
        return a < b;
    });
    std::vector<int> high(order.begin(), order.begin() + k);
    std::sort(high.begin(), high.end());

    SourceCodeSpec spec;
    spec.n = n;
    spec.k = k;
    spec.high_set = std::move(high);
    spec.p = p;
    spec.validate();
    return spec;
}

}  // namespace dpolar
