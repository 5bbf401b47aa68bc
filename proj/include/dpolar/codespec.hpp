#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "dpolar/bits.hpp"
#include "dpolar/transform.hpp"

namespace dpolar {

// Index sets are 1-based and sorted ascending, matching how codes are quoted
// everywhere else in this project (CLI output, JSON, test vectors).

inline void validate_index_set(const std::vector<int>& set, std::size_t n, const char* what) {
    if (set.empty()) throw std::invalid_argument(std::string(what) + ": empty index set");
    int prev = 0;
    for (int idx : set) {
        if (idx < 1 || static_cast<std::size_t>(idx) > n)
            throw std::invalid_argument(std::string(what) + ": index out of range");
        if (idx <= prev)
            throw std::invalid_argument(std::string(what) + ": indices must be strictly increasing");
        prev = idx;
    }
}

// Source code: length N_s, the K high-entropy positions H survive compression.
struct SourceCodeSpec {
    std::size_t n = 0;           // block length N_s, power of two
    int k = 0;                   // |H|
    std::vector<int> high_set;   // H, 1-based ascending
    double p = 0.0;              // Bernoulli parameter of the source

    void validate() const {
        (void)log2_exact(n);
        if (k < 1 || static_cast<std::size_t>(k) > n)
            throw std::invalid_argument("SourceCodeSpec: K out of range");
        if (high_set.size() != static_cast<std::size_t>(k))
            throw std::invalid_argument("SourceCodeSpec: |H| != K");
        validate_index_set(high_set, n, "SourceCodeSpec.H");
        if (!(p > 0.0 && p <= 0.5))
            throw std::invalid_argument("SourceCodeSpec: p must lie in (0, 0.5]");
    }

    // Prior LLR ln((1-p)/p) of a single source bit.
    double prior_llr() const { return std::log((1.0 - p) / p); }
};

// Channel code: length N_c, information positions A, everything else frozen
// to frozen_values (aligned with the sorted complement of A).
struct ChannelCodeSpec {
    std::size_t n = 0;           // block length N_c, power of two
    int k = 0;                   // |A|
    std::vector<int> info_set;   // A, 1-based ascending
    std::vector<std::uint8_t> frozen_values;  // size N_c - K, may be all zero

    void validate() const {
        (void)log2_exact(n);
        if (k < 1 || static_cast<std::size_t>(k) > n)
            throw std::invalid_argument("ChannelCodeSpec: K out of range");
        if (info_set.size() != static_cast<std::size_t>(k))
            throw std::invalid_argument("ChannelCodeSpec: |A| != K");
        validate_index_set(info_set, n, "ChannelCodeSpec.A");
        if (frozen_values.size() != n - static_cast<std::size_t>(k))
            throw std::invalid_argument("ChannelCodeSpec: frozen_values size mismatch");
        for (auto b : frozen_values)
            if (b > 1) throw std::invalid_argument("ChannelCodeSpec: frozen value not a bit");
    }

    // Frozen value spread over the full block (0 at info positions).
    std::vector<std::uint8_t> frozen_by_position() const {
        std::vector<std::uint8_t> out(n, 0);
        std::size_t fi = 0;
        std::size_t ai = 0;
        for (std::size_t pos = 1; pos <= n; ++pos) {
            if (ai < info_set.size() && static_cast<std::size_t>(info_set[ai]) == pos) {
                ++ai;
            } else {
                out[pos - 1] = frozen_values.at(fi++);
            }
        }
        return out;
    }
};

// c = s * G_{N_s}; returns the kept coordinates c_H in ascending H order.
inline BitBlock compress_source(const BitBlock& s, const SourceCodeSpec& spec) {
    spec.validate();
    if (s.size() != spec.n) throw std::invalid_argument("compress_source: length mismatch");
    BitBlock c = polar_transform(s);
    BitBlock kept(spec.high_set.size());
    for (std::size_t i = 0; i < spec.high_set.size(); ++i)
        kept[i] = c[static_cast<std::size_t>(spec.high_set[i]) - 1];
    return kept;
}

// Wraps info bits (the compressed word) into u, applies the transform.
inline BitBlock channel_encode(const BitBlock& info, const ChannelCodeSpec& spec) {
    spec.validate();
    if (info.size() != static_cast<std::size_t>(spec.k))
        throw std::invalid_argument("channel_encode: info length != K");
    BitBlock u = BitBlock(spec.n);
    auto frozen = spec.frozen_by_position();
    for (std::size_t i = 0; i < spec.n; ++i) u[i] = frozen[i];
    for (std::size_t i = 0; i < info.size(); ++i)
        u[static_cast<std::size_t>(spec.info_set[i]) - 1] = info[i];
    polar_transform_inplace(u);
    return u;
}

}  // namespace dpolar
