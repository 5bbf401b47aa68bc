#pragma once

#include <cstddef>
#include <vector>

// Independent simulation of the schedule merge, written against boolean
// membership arrays rather than set walks: step through pending source and
// channel positions, emitting a combined level only when both sides sit on a
// transmitted position.
namespace oracle {

struct MergeOut {
    std::vector<int> j;
    std::vector<int> w;
    std::size_t total = 0;
};

inline MergeOut merge_walk(const std::vector<int>& high_set, const std::vector<int>& info_set,
                           std::size_t n_s, std::size_t n_c) {
    std::vector<char> in_high(n_s + 1, 0), in_info(n_c + 1, 0);
    for (int h : high_set) in_high[h] = 1;
    for (int a : info_set) in_info[a] = 1;
    MergeOut out;
    std::size_t is = 1, ic = 1;
    int level = 0;
    while (is <= n_s || ic <= n_c) {
        ++level;
        if (is <= n_s && !in_high[is]) {
            out.w.push_back(level);
            ++is;
        } else if (ic <= n_c && !in_info[ic]) {
            ++ic;
        } else {
            out.j.push_back(level);
            ++is;
            ++ic;
        }
    }
    out.total = static_cast<std::size_t>(level);
    return out;
}

}  // namespace oracle
