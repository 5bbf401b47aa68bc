#pragma once

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "dpolar/channel.hpp"
#include "dpolar/codespec.hpp"
#include "dpolar/decode.hpp"
#include "dpolar/rng.hpp"

namespace dpolar {

enum class DecoderKind { Jscl, SepScl };

inline const char* to_string(DecoderKind k) {
    return k == DecoderKind::Jscl ? "jscl" : "sep";
}

inline DecoderKind decoder_kind_from_string(const std::string& s) {
    if (s == "jscl") return DecoderKind::Jscl;
    if (s == "sep" || s == "sep-scl") return DecoderKind::SepScl;
    throw std::invalid_argument("unknown decoder kind: " + s);
}

// Frames are processed in batches and the error target is only checked at
// batch boundaries, so the set of simulated frame indices is a function of
// the outcomes alone, never of worker count or scheduling.
struct StoppingPolicy {
    long long target_frame_errors = 100;
    long long max_frames = 2000000;
    long long first_batch = 0;  // 0 means target_frame_errors
    long long max_batch = 65536;
};

struct SimConfig {
    SourceCodeSpec src;
    ChannelCodeSpec ch;
    DecoderKind decoder = DecoderKind::Jscl;
    int list_size = 4;
    bool min_sum = false;
    std::uint64_t seed = 1;
    int workers = 1;
    StoppingPolicy stop;
};

struct BerPoint {
    double ebn0_db = 0.0;
    long long frames = 0;
    long long bit_errors = 0;
    long long frame_errors = 0;
    double ber = 0.0;
    double fer = 0.0;
    bool low_confidence = false;
    double seconds = 0.0;
};

struct FrameOutcome {
    int bit_errors = 0;
    bool frame_error = false;
};

// RNG stream id for an operating point.
inline std::uint64_t ebn0_stream(double ebn0_db) { return std::bit_cast<std::uint64_t>(ebn0_db); }

// One end-to-end frame: draw the source word, compress, protect, add noise,
// decode, count source-bit errors. The draw order (N_s Bernoulli bits, then
// N_c noise samples) is part of the reproducibility contract.
template <class Decode>
FrameOutcome simulate_frame(const SourceCodeSpec& src, const ChannelCodeSpec& ch, double sigma2,
                            std::uint64_t seed, std::uint64_t stream, std::uint64_t frame,
                            Decode&& decode) {
    FrameRng rng(seed, stream, frame);
    BitBlock s(src.n);
    for (std::size_t i = 0; i < src.n; ++i) s[i] = rng.bernoulli(src.p) ? 1 : 0;
    BitBlock kept = compress_source(s, src);
    BitBlock x = channel_encode(kept, ch);
    std::vector<double> llr = bpsk_awgn_llrs(x, sigma2, rng);
    BitBlock s_hat = decode(llr);
    FrameOutcome out;
    for (std::size_t i = 0; i < src.n; ++i)
        if (s_hat[i] != s[i]) ++out.bit_errors;
    out.frame_error = out.bit_errors > 0;
    return out;
}

namespace detail {

inline std::function<BitBlock(const std::vector<double>&)> make_frame_decoder(
    const SimConfig& cfg) {
    DecodeOptions opt;
    opt.min_sum = cfg.min_sum;
    if (cfg.decoder == DecoderKind::Jscl) {
        auto dec = std::make_shared<JsclDecoder>(cfg.src, cfg.ch, cfg.list_size, opt);
        return [dec](const std::vector<double>& llr) { return dec->decode(llr).s_hat; };
    }
    auto dec = std::make_shared<SepSclDecoder>(cfg.src, cfg.ch, cfg.list_size, opt);
    return [dec](const std::vector<double>& llr) { return dec->decode(llr).s_hat; };
}

struct Tally {
    long long bit_errors = 0;
    long long frame_errors = 0;
};

}  // namespace detail

// Monte Carlo estimate of BER/FER (over source bits) at one operating point.
// Identical (seed, config) runs give identical counts for any worker count.
inline BerPoint run_point(const SimConfig& cfg, double ebn0_db) {
    cfg.src.validate();
    cfg.ch.validate();
    if (cfg.stop.target_frame_errors < 1 || cfg.stop.max_frames < 1)
        throw std::invalid_argument("run_point: stopping policy must be positive");
    if (cfg.list_size < 1) throw std::invalid_argument("run_point: list size must be positive");

    double overall_rate = static_cast<double>(cfg.src.n) / static_cast<double>(cfg.ch.n);
    double sigma2 = sigma2_from_ebn0(ebn0_db, overall_rate);
    std::uint64_t stream = ebn0_stream(ebn0_db);
    int workers = std::max(1, cfg.workers);

    auto t0 = std::chrono::steady_clock::now();
    long long frames_done = 0;
    long long bit_errors = 0;
    long long frame_errors = 0;
    long long batch = cfg.stop.first_batch > 0 ? cfg.stop.first_batch : cfg.stop.target_frame_errors;

    while (frames_done < cfg.stop.max_frames && frame_errors < cfg.stop.target_frame_errors) {
        long long this_batch = std::min(batch, cfg.stop.max_frames - frames_done);
        long long lo = frames_done;
        long long hi = frames_done + this_batch;

        auto run_slice = [&](int worker_id, detail::Tally* tally) {
            auto decode = detail::make_frame_decoder(cfg);
            for (long long f = lo + worker_id; f < hi; f += workers) {
                FrameOutcome o = simulate_frame(cfg.src, cfg.ch, sigma2, cfg.seed, stream,
                                                static_cast<std::uint64_t>(f), decode);
                tally->bit_errors += o.bit_errors;
                tally->frame_errors += o.frame_error ? 1 : 0;
            }
        };

        std::vector<detail::Tally> tallies(workers);
        if (workers == 1) {
            run_slice(0, &tallies[0]);
        } else {
            std::vector<std::thread> pool;
            pool.reserve(workers);
            for (int w = 0; w < workers; ++w) pool.emplace_back(run_slice, w, &tallies[w]);
            for (auto& th : pool) th.join();
        }
        for (const auto& t : tallies) {
            bit_errors += t.bit_errors;
            frame_errors += t.frame_errors;
        }
        frames_done = hi;
        batch = std::min(batch * 2, cfg.stop.max_batch);
    }

    BerPoint pt;
    pt.ebn0_db = ebn0_db;
    pt.frames = frames_done;
    pt.bit_errors = bit_errors;
    pt.frame_errors = frame_errors;
    pt.ber = static_cast<double>(bit_errors) /
             (static_cast<double>(frames_done) * static_cast<double>(cfg.src.n));
    pt.fer = static_cast<double>(frame_errors) / static_cast<double>(frames_done);
    pt.low_confidence = frame_errors < cfg.stop.target_frame_errors;
    pt.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return pt;
}

}  // namespace dpolar
