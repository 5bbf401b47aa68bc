// Command line front end: code construction, trellis inspection, single-frame
// decoding and Monte Carlo BER sweeps.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dpolar/dpolar.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<int> parse_int_list(const std::string& text, const char* what) {
    std::vector<int> out;
    std::string tok;
    std::stringstream ss(text);
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        try {
            std::size_t used = 0;
            int v = std::stoi(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            out.push_back(v);
        } catch (const std::exception&) {
            throw dpolar::ConfigError(std::string(what) + ": bad integer '" + tok + "'");
        }
    }
    if (out.empty()) throw dpolar::ConfigError(std::string(what) + ": empty list");
    return out;
}

double parse_double(const std::string& tok, const char* what) {
    try {
        std::size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw dpolar::ConfigError(std::string(what) + ": bad number '" + tok + "'");
    }
}

// Comma-separated values; a token a:b:s expands to the inclusive range.
std::vector<double> parse_ebn0_list(const std::string& text) {
    std::vector<double> out;
    std::string tok;
    std::stringstream ss(text);
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        std::size_t c1 = tok.find(':');
        if (c1 == std::string::npos) {
            out.push_back(parse_double(tok, "--ebn0"));
            continue;
        }
        std::size_t c2 = tok.find(':', c1 + 1);
        if (c2 == std::string::npos) throw dpolar::ConfigError("--ebn0: range needs start:stop:step");
        double start = parse_double(tok.substr(0, c1), "--ebn0");
        double stop = parse_double(tok.substr(c1 + 1, c2 - c1 - 1), "--ebn0");
        double step = parse_double(tok.substr(c2 + 1), "--ebn0");
        if (!(step > 0.0) || stop < start) throw dpolar::ConfigError("--ebn0: bad range " + tok);
        for (double v = start; v <= stop + step * 1e-9; v += step) out.push_back(v);
    }
    if (out.empty()) throw dpolar::ConfigError("--ebn0: empty list");
    return out;
}

// Flag storage shared by the subcommands; only flags the user actually passed
// override the (possibly file-loaded) experiment config.
struct Flags {
    std::string config_path;
    std::uint64_t ns = 0;
    double rs = 0, rate = 0, p = 0;
    std::string decoder, list_sizes, ebn0, high_set, info_set;
    std::uint64_t seed = 0;
    int workers = 0;
    bool min_sum = false;
    long long target_errors = 0, max_frames = 0;
    double design_snr = 0;
    std::string out_dir = "results";
    std::string trace_path, dump_trellis_path;
    int list = 0;
    std::uint64_t frame = 0;
    std::string llr;
};

void add_code_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config_path, "experiment config JSON file");
    cmd->add_option("--ns", f.ns, "source block length (power of two)");
    cmd->add_option("--rs", f.rs, "source code rate K / ns");
    cmd->add_option("--rate", f.rate, "overall rate ns / nc");
    cmd->add_option("--p", f.p, "source Bernoulli parameter");
    cmd->add_option("--high-set", f.high_set, "explicit high-entropy set, comma separated");
    cmd->add_option("--info-set", f.info_set, "explicit information set, comma separated");
}

void add_sim_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--decoder", f.decoder, "jscl or sep");
    cmd->add_option("--seed", f.seed, "simulation seed")->envname("DPOLAR_SEED");
    cmd->add_flag("--min-sum", f.min_sum, "use the min-sum check kernel");
    cmd->add_option("--design-snr", f.design_snr,
                    "fix the construction Eb/N0 instead of tracking the operating point");
}

// True when the user actually passed `name` and the subcommand defines it.
bool passed(const CLI::App* cmd, const std::string& name) {
    const CLI::Option* opt = cmd->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
}

dpolar::ExperimentConfig merge_config(const CLI::App* cmd, const Flags& f) {
    dpolar::ExperimentConfig cfg;
    if (!f.config_path.empty()) {
        std::ifstream in(f.config_path);
        if (!in) throw dpolar::ConfigError("cannot open config file: " + f.config_path);
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw dpolar::ConfigError(f.config_path + ": " + e.what());
        }
        cfg = dpolar::experiment_from_json(j);
    }
    if (passed(cmd, "--ns")) cfg.ns = f.ns;
    if (passed(cmd, "--rs")) cfg.rs = f.rs;
    if (passed(cmd, "--rate")) cfg.rate = f.rate;
    if (passed(cmd, "--p")) cfg.p = f.p;
    if (passed(cmd, "--high-set")) cfg.high_set = parse_int_list(f.high_set, "--high-set");
    if (passed(cmd, "--info-set")) cfg.info_set = parse_int_list(f.info_set, "--info-set");
    if (passed(cmd, "--decoder")) cfg.decoder = f.decoder;
    if (passed(cmd, "--list-sizes")) cfg.list_sizes = parse_int_list(f.list_sizes, "--list-sizes");
    if (passed(cmd, "--ebn0") && !f.ebn0.empty()) cfg.ebn0_db = parse_ebn0_list(f.ebn0);
    if (passed(cmd, "--seed")) cfg.seed = f.seed;
    if (passed(cmd, "--workers")) cfg.workers = f.workers;
    if (passed(cmd, "--min-sum")) cfg.min_sum = true;
    if (passed(cmd, "--target-errors")) cfg.target_frame_errors = f.target_errors;
    if (passed(cmd, "--max-frames")) cfg.max_frames = f.max_frames;
    if (passed(cmd, "--design-snr")) cfg.design_snr_db = f.design_snr;
    return cfg;
}

std::string format_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string sweep_tag(const dpolar::ExperimentConfig& cfg, int list_size) {
    std::string tag = cfg.decoder + "_L" + std::to_string(list_size) + "_ns" +
                      std::to_string(cfg.ns) + "_rs" + format_g(cfg.rs) + "_rate" +
                      format_g(cfg.rate) + "_p" + format_g(cfg.p) + "_seed" +
                      std::to_string(cfg.seed);
    if (cfg.min_sum) tag += "_minsum";
    return tag;
}

json bits_to_json(const dpolar::BitBlock& b) {
    json out = json::array();
    for (std::size_t i = 0; i < b.size(); ++i) out.push_back(static_cast<int>(b[i]));
    return out;
}

double construction_snr(const dpolar::ExperimentConfig& cfg, double operating_ebn0) {
    return cfg.design_snr_db ? *cfg.design_snr_db : operating_ebn0;
}

int run_construct(const CLI::App* cmd, const Flags& f, double ebn0) {
    dpolar::ExperimentConfig cfg = merge_config(cmd, f);
    dpolar::ResolvedCodes codes = dpolar::resolve_codes(cfg, construction_snr(cfg, ebn0));
    json out{{"construction_ebn0_db", construction_snr(cfg, ebn0)},
             {"overall_rate", codes.overall_rate},
             {"source", dpolar::to_json(codes.src)},
             {"channel", dpolar::to_json(codes.ch)}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_trellis(const CLI::App* cmd, const Flags& f, double ebn0) {
    dpolar::ExperimentConfig cfg = merge_config(cmd, f);
    dpolar::ResolvedCodes codes = dpolar::resolve_codes(cfg, construction_snr(cfg, ebn0));
    json out = dpolar::trellis_to_json(dpolar::build_trellis(codes.src, codes.ch));
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_decode(const CLI::App* cmd, const Flags& f, double ebn0) {
    dpolar::ExperimentConfig cfg = merge_config(cmd, f);
    int list_size = cmd->count("--list") ? f.list : cfg.list_sizes.front();
    dpolar::DecoderKind kind = dpolar::decoder_kind_from_string(cfg.decoder);
    dpolar::ResolvedCodes codes = dpolar::resolve_codes(cfg, construction_snr(cfg, ebn0));
    double sigma2 = dpolar::sigma2_from_ebn0(ebn0, codes.overall_rate);
    dpolar::DecodeOptions opt;
    opt.min_sum = cfg.min_sum;

    if (!f.dump_trellis_path.empty()) {
        std::ofstream out(f.dump_trellis_path);
        if (!out) throw dpolar::ConfigError("cannot write " + f.dump_trellis_path);
        out << dpolar::trellis_to_json(dpolar::build_trellis(codes.src, codes.ch)).dump(2) << "\n";
    }
    if (!f.trace_path.empty() && kind != dpolar::DecoderKind::Jscl)
        throw dpolar::ConfigError("--trace requires the joint decoder");

    json report{{"ebn0_db", ebn0},
                {"sigma2", sigma2},
                {"decoder", cfg.decoder},
                {"list_size", list_size}};

    std::vector<double> llrs;
    dpolar::BitBlock s_true;
    if (cmd->count("--llr")) {
        std::string tok;
        std::stringstream ss(f.llr);
        while (std::getline(ss, tok, ','))
            if (!tok.empty()) llrs.push_back(parse_double(tok, "--llr"));
        if (llrs.size() != codes.ch.n)
            throw dpolar::ConfigError("--llr: expected " + std::to_string(codes.ch.n) + " values");
    } else {
        dpolar::FrameRng rng(cfg.seed, dpolar::ebn0_stream(ebn0), f.frame);
        s_true = dpolar::BitBlock(codes.src.n);
        for (std::size_t i = 0; i < codes.src.n; ++i)
            s_true[i] = rng.bernoulli(codes.src.p) ? 1 : 0;
        dpolar::BitBlock x =
            dpolar::channel_encode(dpolar::compress_source(s_true, codes.src), codes.ch);
        llrs = dpolar::bpsk_awgn_llrs(x, sigma2, rng);
        report["frame"] = f.frame;
        report["seed"] = cfg.seed;
    }

    dpolar::BitBlock s_hat;
    if (kind == dpolar::DecoderKind::Jscl) {
        std::vector<dpolar::LevelTrace> trace;
        dpolar::JsclResult res = dpolar::jscl_decode(llrs, codes.src, codes.ch, list_size, opt,
                                                     f.trace_path.empty() ? nullptr : &trace);
        s_hat = res.s_hat;
        report["jpm"] = res.jpm;
        if (!f.trace_path.empty()) {
            std::ofstream out(f.trace_path);
            if (!out) throw dpolar::ConfigError("cannot write " + f.trace_path);
            out << dpolar::trace_to_text(trace);
        }
    } else {
        dpolar::SepSclResult res = dpolar::sep_scl_decode(llrs, codes.src, codes.ch, list_size, opt);
        s_hat = res.s_hat;
        report["channel_metric"] = res.channel_metric;
        report["source_metric"] = res.source_metric;
    }
    report["s_hat"] = bits_to_json(s_hat);
    if (!s_true.empty()) {
        int errs = 0;
        for (std::size_t i = 0; i < s_true.size(); ++i) errs += s_true[i] != s_hat[i];
        report["bit_errors"] = errs;
        report["frame_error"] = errs > 0;
    }
    std::cout << report.dump(2) << "\n";
    return 0;
}

int run_sweep(const CLI::App* cmd, const Flags& f) {
    dpolar::ExperimentConfig cfg = merge_config(cmd, f);
    if (cfg.ebn0_db.empty()) throw dpolar::ConfigError("sweep: no --ebn0 points given");
    if (cfg.list_sizes.empty()) throw dpolar::ConfigError("sweep: no list sizes given");
    dpolar::DecoderKind kind = dpolar::decoder_kind_from_string(cfg.decoder);
    fs::create_directories(f.out_dir);

    for (int L : cfg.list_sizes) {
        if (L < 1) throw dpolar::ConfigError("sweep: list sizes must be positive");
        std::string tag = sweep_tag(cfg, L);
        fs::path csv_path = fs::path(f.out_dir) / (tag + ".csv");
        fs::path meta_path = fs::path(f.out_dir) / (tag + ".json");

        std::vector<dpolar::BerPoint> have;
        if (fs::exists(csv_path)) {
            std::ifstream in(csv_path);
            have = dpolar::read_ber_csv(in);
        }
        auto already_done = [&](double eb) {
            for (const auto& pt : have)
                if (std::abs(pt.ebn0_db - eb) < 1e-9) return true;
            return false;
        };

        std::ofstream csv(csv_path, std::ios::app);
        if (!csv) throw dpolar::ConfigError("cannot write " + csv_path.string());
        if (have.empty()) csv << dpolar::csv_header() << "\n" << std::flush;

        json meta{{"config", dpolar::to_json(cfg)}, {"list_size", L}, {"points", json::array()}};
        for (double eb : cfg.ebn0_db) {
            dpolar::ResolvedCodes codes = dpolar::resolve_codes(cfg, construction_snr(cfg, eb));
            meta["source_high_set"] = codes.src.high_set;
            meta["points"].push_back({{"ebn0_db", eb},
                                      {"construction_ebn0_db", construction_snr(cfg, eb)},
                                      {"info_set", codes.ch.info_set}});
            if (already_done(eb)) {
                std::cerr << tag << " @ " << eb << " dB: already in " << csv_path.string()
                          << ", skipping\n";
                continue;
            }
            dpolar::SimConfig sim;
            sim.src = codes.src;
            sim.ch = codes.ch;
            sim.decoder = kind;
            sim.list_size = L;
            sim.min_sum = cfg.min_sum;
            sim.seed = cfg.seed;
            sim.workers = cfg.workers;
            sim.stop.target_frame_errors = cfg.target_frame_errors;
            sim.stop.max_frames = cfg.max_frames;
            dpolar::BerPoint pt = dpolar::run_point(sim, eb);
            csv << dpolar::csv_line(pt) << "\n" << std::flush;
            std::cerr << tag << " @ " << eb << " dB: ber " << pt.ber << " fer " << pt.fer << " ("
                      << pt.frames << " frames, " << pt.seconds << " s)"
                      << (pt.low_confidence ? " [low confidence]" : "") << "\n";
        }
        std::ofstream meta_out(meta_path);
        meta_out << meta.dump(2) << "\n";
        std::cout << csv_path.string() << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"joint source-channel polar coding tools"};
    app.require_subcommand(1);

    Flags fc, ft, fd, fs_;
    double ebn0_construct = 2.0, ebn0_trellis = 2.0, ebn0_decode = 2.0;

    CLI::App* construct = app.add_subcommand("construct", "print the resolved code pair");
    add_code_flags(construct, fc);
    construct->add_option("--ebn0", ebn0_construct, "construction Eb/N0 in dB");
    construct->add_option("--design-snr", fc.design_snr, "alias for --ebn0");

    CLI::App* trellis = app.add_subcommand("trellis", "print the compound trellis");
    add_code_flags(trellis, ft);
    trellis->add_option("--ebn0", ebn0_trellis, "construction Eb/N0 in dB");

    CLI::App* decode = app.add_subcommand("decode", "decode one frame and print the result");
    add_code_flags(decode, fd);
    add_sim_flags(decode, fd);
    decode->add_option("--ebn0", ebn0_decode, "operating Eb/N0 in dB");
    decode->add_option("--list", fd.list, "list size");
    decode->add_option("--frame", fd.frame, "frame index to simulate");
    decode->add_option("--llr", fd.llr, "decode these channel LLRs instead of simulating");
    decode->add_option("--trace", fd.trace_path, "write the per-level metric trace here");
    decode->add_option("--dump-trellis", fd.dump_trellis_path, "write the trellis JSON here");

    CLI::App* sweep = app.add_subcommand("sweep", "Monte Carlo BER/FER sweep");
    add_code_flags(sweep, fs_);
    add_sim_flags(sweep, fs_);
    sweep->add_option("--ebn0", fs_.ebn0, "Eb/N0 points: list and/or start:stop:step");
    sweep->add_option("--list-sizes", fs_.list_sizes, "comma separated list sizes");
    sweep->add_option("--workers", fs_.workers, "worker threads");
    sweep->add_option("--target-errors", fs_.target_errors, "frame errors to collect per point");
    sweep->add_option("--max-frames", fs_.max_frames, "frame budget per point");
    sweep->add_option("--out-dir", fs_.out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (construct->parsed()) return run_construct(construct, fc, ebn0_construct);
        if (trellis->parsed()) return run_trellis(trellis, ft, ebn0_trellis);
        if (decode->parsed()) return run_decode(decode, fd, ebn0_decode);
        return run_sweep(sweep, fs_);
    } catch (const dpolar::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
