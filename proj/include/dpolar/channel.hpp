#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "dpolar/bits.hpp"
#include "dpolar/llr.hpp"
#include "dpolar/rng.hpp"

namespace dpolar {

// Eb/N0 accounting is per source bit: with N_s source bits carried by N_c
// channel uses the overall rate is R = N_s / N_c and sigma^2 = 1 / (2 R
// 10^(EbN0/10)) for unit-energy BPSK.
inline double sigma2_from_ebn0(double ebn0_db, double overall_rate) {
    if (!(overall_rate > 0.0)) throw std::invalid_argument("sigma2_from_ebn0: rate must be > 0");
    return 1.0 / (2.0 * overall_rate * std::pow(10.0, ebn0_db / 10.0));
}

// BPSK (0 -> +1, 1 -> -1) over AWGN, returned directly as channel LLRs
// 2 y / sigma^2, saturated like everything else downstream.
inline std::vector<double> bpsk_awgn_llrs(const BitBlock& x, double sigma2, FrameRng& rng) {
    if (!(sigma2 > 0.0)) throw std::invalid_argument("bpsk_awgn_llrs: sigma2 must be > 0");
    double sigma = std::sqrt(sigma2);
    double scale = 2.0 / sigma2;
    std::vector<double> llr(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double y = (x[i] ? -1.0 : 1.0) + sigma * rng.gaussian();
        llr[i] = clamp_llr(scale * y);
    }
    return llr;
}

// Noise-free observation at the given sigma2 scaling (sends every LLR to the
// saturation rail).
inline std::vector<double> bpsk_clean_llrs(const BitBlock& x, double sigma2) {
    double scale = 2.0 / sigma2;
    std::vector<double> llr(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) llr[i] = clamp_llr(scale * (x[i] ? -1.0 : 1.0));
    return llr;
}

}  // namespace dpolar
