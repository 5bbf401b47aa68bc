#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "dpolar/llr.hpp"

namespace dpolar {

// Staged successive-cancellation memory for a list of paths over one polar
// trellis of length N = 2^n.
//
// Stage 0 holds the N input LLRs (channel observations or constant priors)
// and is shared read-only by every path. Stage t in 1..n holds per-path
// arrays of length N >> t: the LLRs of the currently active block at depth t
// and two banks of partial-sum bits (first-child codeword, second child in
// progress). Decision LLRs surface at stage n.
//
// Pairing is stride-based to match the natural-order transform: the child at
// stage t combines parent entries beta and beta + (N >> t). The usual lazy
// schedule applies: at decision step phi only stages n - ctz(phi) .. n are
// recomputed, the lowest of them with g, the rest with f.
//
// Paths share stage arrays copy-on-write at stage granularity: cloning a path
// only bumps refcounts, and a shared slot is copied the first time a path
// writes into it. An LLR recompute overwrites the whole array, so only the
// partial-sum banks are carried over; a partial-sum write preserves both.
class ListScMemory {
public:
    ListScMemory(int n, int list_size) : n_(n), size_(std::size_t{1} << n), list_(list_size) {
        if (n < 0 || n > 24) throw std::invalid_argument("ListScMemory: bad exponent");
        if (list_size < 1) throw std::invalid_argument("ListScMemory: bad list size");
        stage0_.assign(size_, 0.0);
        stages_.resize(static_cast<std::size_t>(n_) + 1);
        for (int t = 1; t <= n_; ++t) {
            auto& st = stages_[t];
            st.len = size_ >> t;
            st.llr.assign(static_cast<std::size_t>(list_) * st.len, 0.0);
            st.ps.assign(static_cast<std::size_t>(list_) * 2 * st.len, 0);
            st.slot_of_path.assign(list_, -1);
            st.refcount.assign(list_, 0);
        }
    }

    int block_exponent() const { return n_; }
    std::size_t block_length() const { return size_; }

    void set_stage0(const double* llr) {
        for (std::size_t i = 0; i < size_; ++i) stage0_[i] = clamp_llr(llr[i]);
    }
    void set_stage0_constant(double v) { stage0_.assign(size_, clamp_llr(v)); }

    // Drops all paths and materializes `path` with private (uninitialized)
    // stage arrays. Stage 0 is left as previously loaded.
    void reset(int path) {
        for (int t = 1; t <= n_; ++t) {
            auto& st = stages_[t];
            st.slot_of_path.assign(list_, -1);
            st.refcount.assign(list_, 0);
            st.free_slots.clear();
            for (int s = list_ - 1; s >= 0; --s) st.free_slots.push_back(s);
            int slot = st.free_slots.back();
            st.free_slots.pop_back();
            st.slot_of_path[path] = slot;
            st.refcount[slot] = 1;
        }
    }

    void clone(int src, int dst) {
        for (int t = 1; t <= n_; ++t) {
            auto& st = stages_[t];
            int slot = st.slot_of_path[src];
            if (slot < 0) throw std::logic_error("ListScMemory: cloning dead path");
            if (st.slot_of_path[dst] >= 0) throw std::logic_error("ListScMemory: clone target alive");
            st.slot_of_path[dst] = slot;
            ++st.refcount[slot];
        }
    }

    void kill(int path) {
        for (int t = 1; t <= n_; ++t) {
            auto& st = stages_[t];
            int slot = st.slot_of_path[path];
            if (slot < 0) continue;
            st.slot_of_path[path] = -1;
            if (--st.refcount[slot] == 0) st.free_slots.push_back(slot);
        }
    }

    // Recomputes the stages invalidated by moving to decision step phi, for
    // each listed path. Call once per step before reading decisions.
    void prepare(std::size_t phi, const std::vector<int>& paths, bool min_sum = false) {
        if (phi >= size_) throw std::invalid_argument("ListScMemory: phi out of range");
        int from = phi == 0 ? 1 : n_ - std::countr_zero(phi);
        for (int p : paths) {
            for (int t = from; t <= n_; ++t) {
                auto& st = stages_[t];
                std::size_t len = st.len;
                const double* in =
                    t == 1 ? stage0_.data() : llr_ptr(t - 1, stages_[t - 1].slot_of_path[p]);
                int slot = cow(t, p, /*keep_llr=*/false);
                double* out = llr_ptr(t, slot);
                bool use_g = phi != 0 && t == from;
                if (use_g) {
                    const std::uint8_t* bank0 = ps_ptr(t, slot);
                    for (std::size_t b = 0; b < len; ++b)
                        out[b] = g_op(in[b], in[b + len], bank0[b]);
                } else if (min_sum) {
                    for (std::size_t b = 0; b < len; ++b)
                        out[b] = f_op_minsum(in[b], in[b + len]);
                } else {
                    for (std::size_t b = 0; b < len; ++b) out[b] = f_op(in[b], in[b + len]);
                }
            }
        }
    }

    double decision(int path) const {
        return llr_ptr(n_, stages_[n_].slot_of_path[path])[0];
    }

    // Commits the decision bit at step phi and propagates completed partial
    // sums toward stage 1 (stage 0 never needs them).
    void commit(std::size_t phi, int path, unsigned bit) {
        {
            int slot = cow(n_, path, /*keep_llr=*/true);
            ps_ptr(n_, slot)[phi & 1] = static_cast<std::uint8_t>(bit & 1u);
        }
        std::size_t psi = phi;
        for (int t = n_; t > 1 && (psi & 1); --t, psi >>= 1) {
            const auto& child_stage = stages_[t];
            std::size_t clen = child_stage.len;
            const std::uint8_t* child = ps_ptr(t, child_stage.slot_of_path[path]);
            int pslot = cow(t - 1, path, /*keep_llr=*/true);
            std::uint8_t* parent = ps_ptr(t - 1, pslot);
            std::size_t plen = 2 * clen;
            std::size_t bank = ((psi >> 1) & 1) * plen;
            for (std::size_t b = 0; b < clen; ++b) {
                parent[bank + b] = child[b] ^ child[clen + b];
                parent[bank + clen + b] = child[clen + b];
            }
        }
    }

private:
    struct Stage {
        std::size_t len = 0;
        std::vector<double> llr;
        std::vector<std::uint8_t> ps;
        std::vector<int> slot_of_path;
        std::vector<int> refcount;
        std::vector<int> free_slots;
    };

    double* llr_ptr(int t, int slot) { return stages_[t].llr.data() + slot * stages_[t].len; }
    const double* llr_ptr(int t, int slot) const {
        return stages_[t].llr.data() + slot * stages_[t].len;
    }
    std::uint8_t* ps_ptr(int t, int slot) {
        return stages_[t].ps.data() + slot * 2 * stages_[t].len;
    }
    const std::uint8_t* ps_ptr(int t, int slot) const {
        return stages_[t].ps.data() + slot * 2 * stages_[t].len;
    }

    // Copy-on-write: gives `path` a private slot at stage t. Partial sums are
    // always carried; the LLR array only if the caller is not about to
    // overwrite it anyway.
    int cow(int t, int path, bool keep_llr) {
        auto& st = stages_[t];
        int slot = st.slot_of_path[path];
        if (slot < 0) throw std::logic_error("ListScMemory: write on dead path");
        if (st.refcount[slot] == 1) return slot;
        if (st.free_slots.empty()) throw std::logic_error("ListScMemory: slot pool exhausted");
        int fresh = st.free_slots.back();
        st.free_slots.pop_back();
        --st.refcount[slot];
        st.refcount[fresh] = 1;
        st.slot_of_path[path] = fresh;
        std::copy(st.ps.begin() + slot * 2 * st.len, st.ps.begin() + (slot + 1) * 2 * st.len,
                  st.ps.begin() + fresh * 2 * st.len);
        if (keep_llr)
            std::copy(st.llr.begin() + slot * st.len, st.llr.begin() + (slot + 1) * st.len,
                      st.llr.begin() + fresh * st.len);
        return fresh;
    }

    int n_;
    std::size_t size_;
    int list_;
    std::vector<double> stage0_;
    std::vector<Stage> stages_;
};

}  // namespace dpolar
