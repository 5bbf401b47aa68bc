#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpolar/codespec.hpp"

namespace dpolar {

enum class LevelKind { Frozen, Jsc, LowEntropy };

inline const char* to_string(LevelKind k) {
    switch (k) {
        case LevelKind::Frozen: return "frozen";
        case LevelKind::Jsc: return "jsc";
        case LevelKind::LowEntropy: return "low_entropy";
    }
    return "?";
}

// One decoding level of the compound trellis. i_c / i_s are 1-based sub-level
// positions inside the channel and source trellises; 0 means the trellis does
// not advance at this level.
struct TrellisLevel {
    LevelKind kind = LevelKind::Frozen;
    int i_c = 0;
    int i_s = 0;
};

struct JwSets {
    std::vector<int> j;  // fused levels, 1-based ascending
    std::vector<int> w;  // low-entropy levels, 1-based ascending
    std::size_t total_levels = 0;
};

// Closed form of the merge: with prefix conventions a_0 = h_0 = 0,
//   j_i = a_i + h_i - i                          for i = 1..K
//   w_i = a_eps + i   where eps = hc_i - i       for i = 1..N_s-K
// (hc enumerates the complement of H; eps counts high-entropy indices in
// front of hc_i, and a_eps many channel positions are consumed by then).
inline JwSets build_jw_sets(const std::vector<int>& high_set, const std::vector<int>& info_set,
                            std::size_t n_s, std::size_t n_c) {
    if (high_set.size() != info_set.size())
        throw std::invalid_argument("build_jw_sets: |H| != |A|");
    std::size_t k = high_set.size();
    if (k == 0) throw std::invalid_argument("build_jw_sets: empty sets");
    validate_index_set(high_set, n_s, "build_jw_sets.H");
    validate_index_set(info_set, n_c, "build_jw_sets.A");

    JwSets out;
    out.total_levels = n_s + n_c - k;
    out.j.reserve(k);
    for (std::size_t i = 1; i <= k; ++i)
        out.j.push_back(info_set[i - 1] + high_set[i - 1] - static_cast<int>(i));

    out.w.reserve(n_s - k);
    std::size_t hi = 0;  // high-entropy indices passed so far
    int idx = 0;         // position among the complement of H
    for (int pos = 1; pos <= static_cast<int>(n_s); ++pos) {
        if (hi < k && high_set[hi] == pos) {
            ++hi;
            continue;
        }
        ++idx;
        std::size_t eps = static_cast<std::size_t>(pos - idx);  // = hi here
        int a_eps = eps == 0 ? 0 : info_set[eps - 1];
        out.w.push_back(a_eps + idx);
    }
    return out;
}

// Compound trellis: the merged level schedule plus per-level sub-positions.
struct CompoundTrellis {
    std::size_t n_s = 0;
    std::size_t n_c = 0;
    int k = 0;
    std::vector<TrellisLevel> levels;  // size n_s + n_c - k
    std::vector<int> j;
    std::vector<int> w;

    std::size_t size() const { return levels.size(); }
    const TrellisLevel& at_level(std::size_t level_1based) const {
        if (level_1based < 1 || level_1based > levels.size())
            throw std::invalid_argument("trellis level out of range");
        return levels[level_1based - 1];
    }
};

// Merges the two decoding schedules. The walk keeps both sub-level pointers
// and emits whichever position is due, giving pending low-entropy source bits
// priority over pending frozen channel bits; a fused level is emitted when
// both pointers sit on their next high-entropy / information position. The
// resulting J and W are checked against the closed form and the sub-level
// enumeration invariants before the trellis is returned.
inline CompoundTrellis build_trellis(const SourceCodeSpec& src, const ChannelCodeSpec& ch) {
    src.validate();
    ch.validate();
    if (src.k != ch.k)
        throw std::invalid_argument("build_trellis: source and channel codes disagree on K");

    CompoundTrellis t;
    t.n_s = src.n;
    t.n_c = ch.n;
    t.k = src.k;

    auto in_set = [](const std::vector<int>& set, std::size_t& cursor, int pos) {
        return cursor < set.size() && set[cursor] == pos;
    };

    std::size_t hcur = 0, acur = 0;
    int sc = 1, cc = 1;
    const int ns = static_cast<int>(src.n), nc = static_cast<int>(ch.n);
    while (sc <= ns || cc <= nc) {
        if (sc <= ns && !in_set(src.high_set, hcur, sc)) {
            t.levels.push_back({LevelKind::LowEntropy, 0, sc});
            ++sc;
        } else if (cc <= nc && !in_set(ch.info_set, acur, cc)) {
            t.levels.push_back({LevelKind::Frozen, cc, 0});
            ++cc;
        } else if (sc <= ns && cc <= nc) {
            t.levels.push_back({LevelKind::Jsc, cc, sc});
            ++hcur;
            ++acur;
            ++sc;
            ++cc;
        } else {
            throw std::logic_error("build_trellis: schedules out of sync");
        }
    }

    for (std::size_t lvl = 0; lvl < t.levels.size(); ++lvl) {
        const auto& node = t.levels[lvl];
        if (node.kind == LevelKind::Jsc)
            t.j.push_back(static_cast<int>(lvl) + 1);
        else if (node.kind == LevelKind::LowEntropy)
            t.w.push_back(static_cast<int>(lvl) + 1);
    }

    auto closed = build_jw_sets(src.high_set, ch.info_set, src.n, ch.n);
    if (t.j != closed.j || t.w != closed.w || t.levels.size() != closed.total_levels)
        throw std::logic_error("build_trellis: merge walk disagrees with closed form");

    int next_c = 1, next_s = 1;
    for (const auto& node : t.levels) {
        if (node.kind != LevelKind::LowEntropy) {
            if (node.i_c != next_c++) throw std::logic_error("build_trellis: channel order broken");
        }
        if (node.kind != LevelKind::Frozen) {
            if (node.i_s != next_s++) throw std::logic_error("build_trellis: source order broken");
        }
    }
    if (next_c != nc + 1 || next_s != ns + 1)
        throw std::logic_error("build_trellis: sub-levels not exhausted");
    return t;
}

}  // namespace dpolar
