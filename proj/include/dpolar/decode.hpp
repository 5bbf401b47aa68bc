#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dpolar/bits.hpp"
#include "dpolar/codespec.hpp"
#include "dpolar/llr.hpp"
#include "dpolar/sc_memory.hpp"
#include "dpolar/transform.hpp"
#include "dpolar/trellis.hpp"

namespace dpolar {

struct DecodeOptions {
    bool min_sum = false;
};

// Metric bookkeeping, mostly for tests: how many channel and source metric
// terms were folded into the path metrics of one decode.
struct DecodeStats {
    long long channel_terms = 0;
    long long source_terms = 0;
};

// Per-level snapshot of the surviving list, ascending by metric.
struct LevelTrace {
    int level = 0;
    LevelKind kind = LevelKind::Frozen;
    int i_c = 0;
    int i_s = 0;
    std::vector<double> jpms;
};

struct ScResult {
    BitBlock u_hat;
    BitBlock info;
};

struct SclResult {
    BitBlock u_hat;
    BitBlock info;
    double metric = 0.0;
};

struct JsclResult {
    BitBlock s_hat;
    double jpm = 0.0;
    DecodeStats stats;
};

struct SepSclResult {
    BitBlock s_hat;
    double channel_metric = 0.0;
    double source_metric = 0.0;
    DecodeStats stats;
};

namespace detail {

// List bookkeeping shared by the decoders: which path slots are alive, their
// metrics, their prefix ranks, and a per-level genealogy log so the
// survivor's bit history can be reconstructed without copying decision
// vectors around on every clone.
//
// Pruning keeps the list_size best of the 2|list| candidates ordered by
// (metric, parent rank, bit), where a path's rank is the position of its
// decision prefix in lexicographic order across the list. Metric ties
// therefore always resolve toward the lexicographically smallest prefix,
// independent of slot layout. That matters: exact ties are routine, not a
// corner case, because the source prior is a constant vector and partial-sum
// cancellations then produce bit-identical metrics on mirrored paths. When
// both children of a path survive, the 0-extension keeps the parent's slot.
class ListEngine {
public:
    explicit ListEngine(int list_size) : L_(list_size) {
        if (list_size < 1) throw std::invalid_argument("ListEngine: bad list size");
        jpm_.assign(L_, 0.0);
        rank_.assign(L_, 0);
        active_.assign(L_, 0);
    }

    void reset(std::vector<ListScMemory*> mems) {
        mems_ = std::move(mems);
        std::fill(active_.begin(), active_.end(), std::uint8_t{0});
        active_[0] = 1;
        jpm_[0] = 0.0;
        rank_[0] = 0;
        alive_.assign(1, 0);
        log_parent_.clear();
        log_bit_.clear();
        levels_done_ = 0;
        for (auto* m : mems_) m->reset(0);
    }

    const std::vector<int>& alive() const { return alive_; }
    double jpm(int slot) const { return jpm_[slot]; }

    // All paths take the same bit; no list membership change.
    void forced_level(const std::vector<double>& new_jpm, unsigned bit,
                      std::initializer_list<std::pair<ListScMemory*, std::size_t>> commits) {
        open_level();
        for (int s : alive_) {
            jpm_[s] = new_jpm[s];
            log_at(s) = {static_cast<std::int16_t>(s), static_cast<std::uint8_t>(bit & 1u)};
            for (const auto& [mem, phi] : commits) mem->commit(phi, s, bit);
        }
        ++levels_done_;
    }

    // Branches every path on bit 0/1 with the given candidate metrics
    // (indexed by slot) and prunes back to list_size.
    void split_level(const std::vector<double>& m0, const std::vector<double>& m1,
                     std::initializer_list<std::pair<ListScMemory*, std::size_t>> commits) {
        open_level();
        struct Cand {
            double m;
            int rank;
            int parent;
            std::uint8_t bit;
        };
        std::vector<Cand> cands;
        cands.reserve(2 * alive_.size());
        for (int s : alive_) {
            cands.push_back({m0[s], rank_[s], s, 0});
            cands.push_back({m1[s], rank_[s], s, 1});
        }
        std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
            if (a.m != b.m) return a.m < b.m;
            if (a.rank != b.rank) return a.rank < b.rank;
            return a.bit < b.bit;
        });
        std::size_t keep = std::min<std::size_t>(L_, cands.size());

        std::vector<std::uint8_t> keep0(L_, 0), keep1(L_, 0);
        for (std::size_t i = 0; i < keep; ++i)
            (cands[i].bit ? keep1 : keep0)[cands[i].parent] = 1;

        std::vector<int> parents = alive_;
        for (int s : parents) {
            if (!keep0[s] && !keep1[s]) {
                active_[s] = 0;
                for (auto* m : mems_) m->kill(s);
            }
        }
        std::vector<int> free_slots;
        for (int s = 0; s < L_; ++s)
            if (!active_[s]) free_slots.push_back(s);

        std::vector<int> slot1(L_, -1);
        for (int s : parents) {
            if (keep0[s] && keep1[s]) {
                int fresh = free_slots.back();
                free_slots.pop_back();
                for (auto* m : mems_) m->clone(s, fresh);
                active_[fresh] = 1;
                slot1[s] = fresh;
                jpm_[fresh] = m1[s];
                jpm_[s] = m0[s];
                log_at(s) = {static_cast<std::int16_t>(s), 0};
                log_at(fresh) = {static_cast<std::int16_t>(s), 1};
                for (const auto& [mem, phi] : commits) {
                    mem->commit(phi, s, 0);
                    mem->commit(phi, fresh, 1);
                }
            } else if (keep0[s] || keep1[s]) {
                unsigned bit = keep1[s] ? 1u : 0u;
                if (bit) slot1[s] = s;
                jpm_[s] = bit ? m1[s] : m0[s];
                log_at(s) = {static_cast<std::int16_t>(s), static_cast<std::uint8_t>(bit)};
                for (const auto& [mem, phi] : commits) mem->commit(phi, s, bit);
            }
        }
        // The kept children in (parent rank, bit) order are the new list in
        // lexicographic prefix order; renumber the ranks to match.
        std::sort(cands.begin(), cands.begin() + keep, [](const Cand& a, const Cand& b) {
            if (a.rank != b.rank) return a.rank < b.rank;
            return a.bit < b.bit;
        });
        for (std::size_t i = 0; i < keep; ++i) {
            int s = cands[i].bit ? slot1[cands[i].parent] : cands[i].parent;
            rank_[s] = static_cast<int>(i);
        }
        alive_.clear();
        for (int s = 0; s < L_; ++s)
            if (active_[s]) alive_.push_back(s);
        ++levels_done_;
    }

    int best() const {
        int arg = alive_.front();
        for (int s : alive_)
            if (jpm_[s] < jpm_[arg] || (jpm_[s] == jpm_[arg] && rank_[s] < rank_[arg])) arg = s;
        return arg;
    }

    // Bit decisions of the given path, oldest level first.
    std::vector<std::uint8_t> history(int slot) const {
        std::vector<std::uint8_t> bits(levels_done_);
        int s = slot;
        for (int lv = levels_done_ - 1; lv >= 0; --lv) {
            bits[lv] = log_bit_[static_cast<std::size_t>(lv) * L_ + s];
            s = log_parent_[static_cast<std::size_t>(lv) * L_ + s];
        }
        return bits;
    }

    std::vector<double> sorted_jpms() const {
        std::vector<double> v;
        v.reserve(alive_.size());
        for (int s : alive_) v.push_back(jpm_[s]);
        std::sort(v.begin(), v.end());
        return v;
    }

private:
    struct LogEntry {
        std::int16_t parent;
        std::uint8_t bit;
    };

    void open_level() {
        log_parent_.insert(log_parent_.end(), L_, std::int16_t{-1});
        log_bit_.insert(log_bit_.end(), L_, std::uint8_t{0});
    }
    struct LogRef {
        std::int16_t& parent;
        std::uint8_t& bit;
        LogRef& operator=(LogEntry e) {
            parent = e.parent;
            bit = e.bit;
            return *this;
        }
    };
    LogRef log_at(int slot) {
        std::size_t at = static_cast<std::size_t>(levels_done_) * L_ + slot;
        return {log_parent_[at], log_bit_[at]};
    }

    int L_;
    std::vector<ListScMemory*> mems_;
    std::vector<double> jpm_;
    std::vector<int> rank_;
    std::vector<std::uint8_t> active_;
    std::vector<int> alive_;
    std::vector<std::int16_t> log_parent_;
    std::vector<std::uint8_t> log_bit_;
    int levels_done_ = 0;
};

// Frozen value by 1-based position, -1 at information positions.
inline std::vector<std::int8_t> frozen_map(const ChannelCodeSpec& ch) {
    ch.validate();
    std::vector<std::int8_t> m(ch.n + 1, -1);
    std::vector<std::uint8_t> by_pos = ch.frozen_by_position();
    std::vector<std::uint8_t> is_info(ch.n + 1, 0);
    for (int a : ch.info_set) is_info[a] = 1;
    for (std::size_t pos = 1; pos <= ch.n; ++pos)
        if (!is_info[pos]) m[pos] = static_cast<std::int8_t>(by_pos[pos - 1]);
    return m;
}

}  // namespace detail

// Joint source-channel list decoding over the compound trellis. Channel and
// source levels interleave; combined levels score both LLRs at once, frozen
// levels are forced (scored against the channel LLR only), and low-entropy
// source levels branch on the prior alone.
class JsclDecoder {
public:
    JsclDecoder(const SourceCodeSpec& src, const ChannelCodeSpec& ch, int list_size,
                DecodeOptions opt = {})
        : src_(src),
          ch_(ch),
          trellis_(build_trellis(src, ch)),
          opt_(opt),
          L_(list_size),
          ch_mem_(log2_exact(ch.n), list_size),
          src_mem_(log2_exact(src.n), list_size),
          engine_(list_size),
          frozen_(detail::frozen_map(ch)) {
        src_mem_.set_stage0_constant(src_.prior_llr());
        m0_.assign(L_, 0.0);
        m1_.assign(L_, 0.0);
    }

    const CompoundTrellis& trellis() const { return trellis_; }

    JsclResult decode(const std::vector<double>& channel_llrs,
                      std::vector<LevelTrace>* trace = nullptr) {
        if (channel_llrs.size() != ch_.n)
            throw std::invalid_argument("JsclDecoder: LLR length mismatch");
        ch_mem_.set_stage0(channel_llrs.data());
        engine_.reset({&ch_mem_, &src_mem_});
        DecodeStats stats;
        if (trace) trace->clear();

        for (std::size_t lv = 1; lv <= trellis_.size(); ++lv) {
            const TrellisLevel& level = trellis_.at_level(lv);
            const std::vector<int>& alive = engine_.alive();
            switch (level.kind) {
            case LevelKind::Frozen: {
                std::size_t phi = static_cast<std::size_t>(level.i_c) - 1;
                ch_mem_.prepare(phi, alive, opt_.min_sum);
                unsigned v = static_cast<unsigned>(frozen_[level.i_c]);
                for (int s : alive)
                    m0_[s] = phi_metric(engine_.jpm(s), ch_mem_.decision(s), v);
                engine_.forced_level(m0_, v, {{&ch_mem_, phi}});
                ++stats.channel_terms;
                break;
            }
            case LevelKind::Jsc: {
                std::size_t phi_c = static_cast<std::size_t>(level.i_c) - 1;
                std::size_t phi_s = static_cast<std::size_t>(level.i_s) - 1;
                ch_mem_.prepare(phi_c, alive, opt_.min_sum);
                src_mem_.prepare(phi_s, alive, opt_.min_sum);
                for (int s : alive) {
                    double lc = ch_mem_.decision(s);
                    double ls = src_mem_.decision(s);
                    m0_[s] = phi_tilde_metric(engine_.jpm(s), lc, ls, 0);
                    m1_[s] = phi_tilde_metric(engine_.jpm(s), lc, ls, 1);
                }
                engine_.split_level(m0_, m1_, {{&ch_mem_, phi_c}, {&src_mem_, phi_s}});
                ++stats.channel_terms;
                ++stats.source_terms;
                break;
            }
            case LevelKind::LowEntropy: {
                std::size_t phi = static_cast<std::size_t>(level.i_s) - 1;
                src_mem_.prepare(phi, alive, opt_.min_sum);
                for (int s : alive) {
                    double ls = src_mem_.decision(s);
                    m0_[s] = phi_metric(engine_.jpm(s), ls, 0);
                    m1_[s] = phi_metric(engine_.jpm(s), ls, 1);
                }
                engine_.split_level(m0_, m1_, {{&src_mem_, phi}});
                ++stats.source_terms;
                break;
            }
            }
            if (trace)
                trace->push_back({static_cast<int>(lv), level.kind, level.i_c, level.i_s,
                                  engine_.sorted_jpms()});
        }

        int winner = engine_.best();
        std::vector<std::uint8_t> bits = engine_.history(winner);
        BitBlock c(src_.n);
        std::size_t si = 0;
        for (std::size_t lv = 1; lv <= trellis_.size(); ++lv)
            if (trellis_.at_level(lv).kind != LevelKind::Frozen) c.set(si++, bits[lv - 1]);
        return {polar_transform(std::move(c)), engine_.jpm(winner), stats};
    }

private:
    SourceCodeSpec src_;
    ChannelCodeSpec ch_;
    CompoundTrellis trellis_;
    DecodeOptions opt_;
    int L_;
    ListScMemory ch_mem_;
    ListScMemory src_mem_;
    detail::ListEngine engine_;
    std::vector<std::int8_t> frozen_;
    std::vector<double> m0_, m1_;
};

// Channel-only successive cancellation list decoding.
class SclDecoder {
public:
    SclDecoder(const ChannelCodeSpec& ch, int list_size, DecodeOptions opt = {})
        : ch_(ch),
          opt_(opt),
          L_(list_size),
          mem_(log2_exact(ch.n), list_size),
          engine_(list_size),
          frozen_(detail::frozen_map(ch)) {
        m0_.assign(L_, 0.0);
        m1_.assign(L_, 0.0);
    }

    SclResult decode(const std::vector<double>& channel_llrs) {
        if (channel_llrs.size() != ch_.n)
            throw std::invalid_argument("SclDecoder: LLR length mismatch");
        mem_.set_stage0(channel_llrs.data());
        engine_.reset({&mem_});
        for (std::size_t pos = 1; pos <= ch_.n; ++pos) {
            std::size_t phi = pos - 1;
            const std::vector<int>& alive = engine_.alive();
            mem_.prepare(phi, alive, opt_.min_sum);
            if (frozen_[pos] >= 0) {
                unsigned v = static_cast<unsigned>(frozen_[pos]);
                for (int s : alive) m0_[s] = phi_metric(engine_.jpm(s), mem_.decision(s), v);
                engine_.forced_level(m0_, v, {{&mem_, phi}});
            } else {
                for (int s : alive) {
                    double l = mem_.decision(s);
                    m0_[s] = phi_metric(engine_.jpm(s), l, 0);
                    m1_[s] = phi_metric(engine_.jpm(s), l, 1);
                }
                engine_.split_level(m0_, m1_, {{&mem_, phi}});
            }
        }
        int winner = engine_.best();
        std::vector<std::uint8_t> bits = engine_.history(winner);
        BitBlock u(ch_.n);
        for (std::size_t pos = 1; pos <= ch_.n; ++pos) u.set(pos - 1, bits[pos - 1]);
        BitBlock info(ch_.k);
        for (std::size_t i = 0; i < ch_.info_set.size(); ++i)
            info.set(i, u[ch_.info_set[i] - 1]);
        return {std::move(u), std::move(info), engine_.jpm(winner)};
    }

private:
    ChannelCodeSpec ch_;
    DecodeOptions opt_;
    int L_;
    ListScMemory mem_;
    detail::ListEngine engine_;
    std::vector<std::int8_t> frozen_;
    std::vector<double> m0_, m1_;
};

// Separate decoding baseline: channel list decode first, then a source list
// decode with the recovered compressed bits pinned at the high-entropy
// positions.
class SepSclDecoder {
public:
    SepSclDecoder(const SourceCodeSpec& src, const ChannelCodeSpec& ch, int list_size,
                  DecodeOptions opt = {})
        : src_(src),
          channel_(ch, list_size, opt),
          opt_(opt),
          L_(list_size),
          src_mem_(log2_exact(src.n), list_size),
          engine_(list_size) {
        src_.validate();
        if (static_cast<std::size_t>(src_.k) != std::size_t(ch.k))
            throw std::invalid_argument("SepSclDecoder: source and channel rank differ");
        src_mem_.set_stage0_constant(src_.prior_llr());
        m0_.assign(L_, 0.0);
        m1_.assign(L_, 0.0);
        in_high_.assign(src_.n + 1, -1);
        for (std::size_t i = 0; i < src_.high_set.size(); ++i)
            in_high_[src_.high_set[i]] = static_cast<int>(i);
    }

    SepSclResult decode(const std::vector<double>& channel_llrs) {
        SclResult stage1 = channel_.decode(channel_llrs);
        engine_.reset({&src_mem_});
        for (std::size_t pos = 1; pos <= src_.n; ++pos) {
            std::size_t phi = pos - 1;
            const std::vector<int>& alive = engine_.alive();
            src_mem_.prepare(phi, alive, opt_.min_sum);
            if (in_high_[pos] >= 0) {
                unsigned v = stage1.info[in_high_[pos]];
                for (int s : alive) m0_[s] = phi_metric(engine_.jpm(s), src_mem_.decision(s), v);
                engine_.forced_level(m0_, v, {{&src_mem_, phi}});
            } else {
                for (int s : alive) {
                    double l = src_mem_.decision(s);
                    m0_[s] = phi_metric(engine_.jpm(s), l, 0);
                    m1_[s] = phi_metric(engine_.jpm(s), l, 1);
                }
                engine_.split_level(m0_, m1_, {{&src_mem_, phi}});
            }
        }
        int winner = engine_.best();
        std::vector<std::uint8_t> bits = engine_.history(winner);
        BitBlock c(src_.n);
        for (std::size_t pos = 1; pos <= src_.n; ++pos) c.set(pos - 1, bits[pos - 1]);
        DecodeStats stats;
        stats.channel_terms = static_cast<long long>(channel_llrs.size());
        stats.source_terms = static_cast<long long>(src_.n);
        return {polar_transform(std::move(c)), stage1.metric, engine_.jpm(winner), stats};
    }

private:
    SourceCodeSpec src_;
    SclDecoder channel_;
    DecodeOptions opt_;
    int L_;
    ListScMemory src_mem_;
    detail::ListEngine engine_;
    std::vector<int> in_high_;
    std::vector<double> m0_, m1_;
};

namespace detail {

// Plain recursive SC, used as the ground truth for the list machinery.
// Returns the re-encoded bits of the decoded sub-block.
inline std::vector<std::uint8_t> sc_rec(std::vector<double>& llr, std::size_t base,
                                        const std::vector<std::int8_t>& frozen, BitBlock& u,
                                        bool min_sum) {
    std::size_t len = llr.size();
    if (len == 1) {
        std::int8_t fv = frozen[base + 1];
        std::uint8_t b = fv >= 0 ? static_cast<std::uint8_t>(fv) : (llr[0] < 0.0 ? 1 : 0);
        u.set(base, b);
        return {b};
    }
    std::size_t h = len / 2;
    std::vector<double> half(h);
    for (std::size_t i = 0; i < h; ++i)
        half[i] = min_sum ? f_op_minsum(llr[i], llr[i + h]) : f_op(llr[i], llr[i + h]);
    std::vector<std::uint8_t> left = sc_rec(half, base, frozen, u, min_sum);
    for (std::size_t i = 0; i < h; ++i) half[i] = g_op(llr[i], llr[i + h], left[i]);
    std::vector<std::uint8_t> right = sc_rec(half, base + h, frozen, u, min_sum);
    std::vector<std::uint8_t> out(len);
    for (std::size_t i = 0; i < h; ++i) {
        out[i] = left[i] ^ right[i];
        out[i + h] = right[i];
    }
    return out;
}

}  // namespace detail

inline ScResult sc_decode(const std::vector<double>& channel_llrs, const ChannelCodeSpec& ch,
                          bool min_sum = false) {
    ch.validate();
    if (channel_llrs.size() != ch.n) throw std::invalid_argument("sc_decode: LLR length mismatch");
    std::vector<double> llr(channel_llrs.size());
    for (std::size_t i = 0; i < llr.size(); ++i) llr[i] = clamp_llr(channel_llrs[i]);
    std::vector<std::int8_t> frozen = detail::frozen_map(ch);
    BitBlock u(ch.n);
    detail::sc_rec(llr, 0, frozen, u, min_sum);
    BitBlock info(ch.k);
    for (std::size_t i = 0; i < ch.info_set.size(); ++i) info.set(i, u[ch.info_set[i] - 1]);
    return {std::move(u), std::move(info)};
}

inline JsclResult jscl_decode(const std::vector<double>& channel_llrs, const SourceCodeSpec& src,
                              const ChannelCodeSpec& ch, int list_size, DecodeOptions opt = {},
                              std::vector<LevelTrace>* trace = nullptr) {
    JsclDecoder dec(src, ch, list_size, opt);
    return dec.decode(channel_llrs, trace);
}

inline SclResult scl_decode(const std::vector<double>& channel_llrs, const ChannelCodeSpec& ch,
                            int list_size, DecodeOptions opt = {}) {
    SclDecoder dec(ch, list_size, opt);
    return dec.decode(channel_llrs);
}

inline SepSclResult sep_scl_decode(const std::vector<double>& channel_llrs,
                                   const SourceCodeSpec& src, const ChannelCodeSpec& ch,
                                   int list_size, DecodeOptions opt = {}) {
    SepSclDecoder dec(src, ch, list_size, opt);
    return dec.decode(channel_llrs);
}

}  // namespace dpolar
