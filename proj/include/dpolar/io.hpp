#pragma once

#include <cmath>
#include <cstdio>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "dpolar/codespec.hpp"
#include "dpolar/construct.hpp"
#include "dpolar/decode.hpp"
#include "dpolar/simulate.hpp"
#include "dpolar/trellis.hpp"

namespace dpolar {

// Bad user input (config files, CLI values). The CLI maps this to its usage
// exit code, everything else to the runtime one.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---- code specs <-> JSON ----

inline nlohmann::json to_json(const SourceCodeSpec& s) {
    return {{"kind", "source"}, {"n", s.n}, {"k", s.k}, {"high_set", s.high_set}, {"p", s.p}};
}

inline nlohmann::json to_json(const ChannelCodeSpec& c) {
    return {{"kind", "channel"},
            {"n", c.n},
            {"k", c.k},
            {"info_set", c.info_set},
            {"frozen_values", c.frozen_values}};
}

inline SourceCodeSpec source_spec_from_json(const nlohmann::json& j) {
    try {
        if (j.value("kind", "source") != "source")
            throw ConfigError("source spec: kind mismatch");
        SourceCodeSpec s;
        s.n = j.at("n").get<std::size_t>();
        s.k = j.at("k").get<int>();
        s.high_set = j.at("high_set").get<std::vector<int>>();
        s.p = j.at("p").get<double>();
        s.validate();
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("source spec: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("source spec: ") + e.what());
    }
}

inline ChannelCodeSpec channel_spec_from_json(const nlohmann::json& j) {
    try {
        if (j.value("kind", "channel") != "channel")
            throw ConfigError("channel spec: kind mismatch");
        ChannelCodeSpec c;
        c.n = j.at("n").get<std::size_t>();
        c.k = j.at("k").get<int>();
        c.info_set = j.at("info_set").get<std::vector<int>>();
        if (j.contains("frozen_values"))
            c.frozen_values = j.at("frozen_values").get<std::vector<std::uint8_t>>();
        else
            c.frozen_values.assign(c.n - static_cast<std::size_t>(c.k), 0);
        c.validate();
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("channel spec: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("channel spec: ") + e.what());
    }
}

// ---- experiment configuration ----

struct ExperimentConfig {
    std::size_t ns = 512;
    double rs = 0.6;
    double rate = 0.5;  // overall rate N_s / N_c
    double p = 0.07;
    std::string decoder = "jscl";
    std::vector<int> list_sizes = {4};
    std::vector<double> ebn0_db;
    std::uint64_t seed = 1;
    int workers = 1;
    bool min_sum = false;
    long long target_frame_errors = 100;
    long long max_frames = 2000000;
    std::optional<double> design_snr_db;  // unset: construct at each operating point
    std::optional<std::vector<int>> high_set;
    std::optional<std::vector<int>> info_set;
};

inline ExperimentConfig experiment_from_json(const nlohmann::json& j) {
    static const std::vector<std::string> known = {
        "ns",      "rs",      "rate",    "p",
        "decoder", "list_sizes", "ebn0_db", "seed",
        "workers", "min_sum", "target_frame_errors", "max_frames",
        "design_snr_db", "high_set", "info_set"};
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const auto& k : known) ok = ok || k == item.key();
        if (!ok) throw ConfigError("config: unknown key '" + item.key() + "'");
    }
    try {
        ExperimentConfig c;
        c.ns = j.value("ns", c.ns);
        c.rs = j.value("rs", c.rs);
        c.rate = j.value("rate", c.rate);
        c.p = j.value("p", c.p);
        c.decoder = j.value("decoder", c.decoder);
        c.list_sizes = j.value("list_sizes", c.list_sizes);
        c.ebn0_db = j.value("ebn0_db", c.ebn0_db);
        c.seed = j.value("seed", c.seed);
        c.workers = j.value("workers", c.workers);
        c.min_sum = j.value("min_sum", c.min_sum);
        c.target_frame_errors = j.value("target_frame_errors", c.target_frame_errors);
        c.max_frames = j.value("max_frames", c.max_frames);
        if (j.contains("design_snr_db")) c.design_snr_db = j.at("design_snr_db").get<double>();
        if (j.contains("high_set")) c.high_set = j.at("high_set").get<std::vector<int>>();
        if (j.contains("info_set")) c.info_set = j.at("info_set").get<std::vector<int>>();
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

inline nlohmann::json to_json(const ExperimentConfig& c) {
    nlohmann::json j{{"ns", c.ns},
                     {"rs", c.rs},
                     {"rate", c.rate},
                     {"p", c.p},
                     {"decoder", c.decoder},
                     {"list_sizes", c.list_sizes},
                     {"ebn0_db", c.ebn0_db},
                     {"seed", c.seed},
                     {"workers", c.workers},
                     {"min_sum", c.min_sum},
                     {"target_frame_errors", c.target_frame_errors},
                     {"max_frames", c.max_frames}};
    if (c.design_snr_db) j["design_snr_db"] = *c.design_snr_db;
    if (c.high_set) j["high_set"] = *c.high_set;
    if (c.info_set) j["info_set"] = *c.info_set;
    return j;
}

// ---- resolution into concrete codes ----

struct ResolvedCodes {
    SourceCodeSpec src;
    ChannelCodeSpec ch;
    double overall_rate = 0.0;
};

// N_c = N_s / rate must land exactly on a power of two; K rounds from
// N_s * R_s.
inline ResolvedCodes resolve_codes(const ExperimentConfig& cfg, double construction_snr_db) {
    if (!(cfg.rate > 0.0 && cfg.rate <= 1.0)) throw ConfigError("rate must lie in (0, 1]");
    if (!(cfg.rs > 0.0 && cfg.rs <= 1.0)) throw ConfigError("rs must lie in (0, 1]");
    if (!is_power_of_two(cfg.ns)) throw ConfigError("ns must be a power of two");
    double ncf = static_cast<double>(cfg.ns) / cfg.rate;
    long long nc = std::llround(ncf);
    if (std::abs(ncf - static_cast<double>(nc)) > 1e-9 || nc <= 0 ||
        !is_power_of_two(static_cast<std::size_t>(nc)))
        throw ConfigError("ns / rate must be a power of two");
    int k = static_cast<int>(std::llround(static_cast<double>(cfg.ns) * cfg.rs));
    if (k < 1 || static_cast<std::size_t>(k) > cfg.ns) throw ConfigError("ns * rs rounds outside [1, ns]");
    if (k > nc) throw ConfigError("K exceeds channel block length");

    ResolvedCodes out;
    out.overall_rate = static_cast<double>(cfg.ns) / static_cast<double>(nc);
    if (cfg.high_set) {
        out.src.n = cfg.ns;
        out.src.k = static_cast<int>(cfg.high_set->size());
        out.src.high_set = *cfg.high_set;
        out.src.p = cfg.p;
        if (out.src.k != k) throw ConfigError("high_set size disagrees with ns * rs");
    } else {
        out.src = construct_source_code(log2_exact(cfg.ns), k, cfg.p);
    }
    if (cfg.info_set) {
        out.ch.n = static_cast<std::size_t>(nc);
        out.ch.k = static_cast<int>(cfg.info_set->size());
        out.ch.info_set = *cfg.info_set;
        out.ch.frozen_values.assign(out.ch.n - static_cast<std::size_t>(out.ch.k), 0);
        if (out.ch.k != k) throw ConfigError("info_set size disagrees with ns * rs");
    } else {
        out.ch = construct_channel_code(log2_exact(static_cast<std::size_t>(nc)), k,
                                        construction_snr_db, out.overall_rate);
    }
    try {
        out.src.validate();
        out.ch.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return out;
}

// ---- sweep CSV ----

inline std::string csv_header() {
    return "ebn0_db,frames,bit_errors,frame_errors,ber,fer,low_confidence,seconds";
}

inline std::string csv_line(const BerPoint& pt) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%.6g,%lld,%lld,%lld,%.10g,%.10g,%d,%.3f", pt.ebn0_db,
                  pt.frames, pt.bit_errors, pt.frame_errors, pt.ber, pt.fer,
                  pt.low_confidence ? 1 : 0, pt.seconds);
    return buf;
}

inline std::vector<BerPoint> read_ber_csv(std::istream& in) {
    std::vector<BerPoint> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.rfind("ebn0_db", 0) == 0) continue;
        BerPoint pt;
        int low = 0;
        if (std::sscanf(line.c_str(), "%lf,%lld,%lld,%lld,%lf,%lf,%d,%lf", &pt.ebn0_db, &pt.frames,
                        &pt.bit_errors, &pt.frame_errors, &pt.ber, &pt.fer, &low,
                        &pt.seconds) != 8)
            throw ConfigError("malformed sweep CSV line: " + line);
        pt.low_confidence = low != 0;
        out.push_back(pt);
    }
    return out;
}

// ---- trellis and trace dumps ----

inline nlohmann::json trellis_to_json(const CompoundTrellis& t) {
    nlohmann::json levels = nlohmann::json::array();
    for (std::size_t i = 1; i <= t.size(); ++i) {
        const TrellisLevel& lv = t.at_level(i);
        levels.push_back({{"level", i},
                          {"kind", to_string(lv.kind)},
                          {"i_c", lv.i_c},
                          {"i_s", lv.i_s}});
    }
    return {{"ns", t.n_s}, {"nc", t.n_c}, {"k", t.k},
            {"j", t.j},    {"w", t.w},    {"levels", levels}};
}

inline std::string trace_to_text(const std::vector<LevelTrace>& trace) {
    std::ostringstream out;
    out << "level,kind,i_c,i_s,jpms\n";
    for (const LevelTrace& lt : trace) {
        out << lt.level << ',' << to_string(lt.kind) << ',' << lt.i_c << ',' << lt.i_s << ',';
        for (std::size_t i = 0; i < lt.jpms.size(); ++i) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.6f", lt.jpms[i]);
            out << (i ? ";" : "") << buf;
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace dpolar
