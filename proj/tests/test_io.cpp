#include <catch2/catch_amalgamated.hpp>

#include <sstream>
#include <string>

#include "dpolar/io.hpp"

using namespace dpolar;
using nlohmann::json;

TEST_CASE("code specs round trip through json") {
    SourceCodeSpec src;
    src.n = 8;
    src.k = 3;
    src.high_set = {1, 2, 4};
    src.p = 0.05;
    SourceCodeSpec src2 = source_spec_from_json(to_json(src));
    CHECK(src2.n == src.n);
    CHECK(src2.k == src.k);
    CHECK(src2.high_set == src.high_set);
    CHECK(src2.p == src.p);

    ChannelCodeSpec ch;
    ch.n = 8;
    ch.k = 3;
    ch.info_set = {6, 7, 8};
    ch.frozen_values = {0, 1, 0, 1, 1};
    ChannelCodeSpec ch2 = channel_spec_from_json(to_json(ch));
    CHECK(ch2.info_set == ch.info_set);
    CHECK(ch2.frozen_values == ch.frozen_values);

    SECTION("frozen values default to zero") {
        json j = to_json(ch);
        j.erase("frozen_values");
        ChannelCodeSpec ch3 = channel_spec_from_json(j);
        CHECK(ch3.frozen_values == std::vector<std::uint8_t>(5, 0));
    }

    SECTION("bad specs are config errors") {
        CHECK_THROWS_AS(source_spec_from_json(json{{"kind", "channel"}}), ConfigError);
        CHECK_THROWS_AS(source_spec_from_json(json{{"kind", "source"}, {"n", 8}}), ConfigError);
        json bad = to_json(src);
        bad["k"] = 2;  // |H| no longer matches
        CHECK_THROWS_AS(source_spec_from_json(bad), ConfigError);
    }
}

TEST_CASE("experiment configs parse with defaults and round trip") {
    ExperimentConfig d = experiment_from_json(json::object());
    CHECK(d.ns == 512);
    CHECK(d.rs == 0.6);
    CHECK(d.rate == 0.5);
    CHECK(d.p == 0.07);
    CHECK(d.decoder == "jscl");
    CHECK(d.list_sizes == std::vector<int>{4});
    CHECK(!d.design_snr_db);
    CHECK(!d.high_set);

    ExperimentConfig c;
    c.ns = 16;
    c.rs = 0.5;
    c.list_sizes = {1, 8};
    c.ebn0_db = {0.0, 1.5};
    c.design_snr_db = 2.0;
    c.high_set = std::vector<int>{1, 2, 3, 5, 6, 9, 10, 11};
    ExperimentConfig c2 = experiment_from_json(to_json(c));
    CHECK(c2.ns == 16);
    CHECK(c2.list_sizes == c.list_sizes);
    CHECK(c2.ebn0_db == c.ebn0_db);
    REQUIRE(c2.design_snr_db);
    CHECK(*c2.design_snr_db == 2.0);
    REQUIRE(c2.high_set);
    CHECK(*c2.high_set == *c.high_set);

    SECTION("unknown keys are rejected") {
        CHECK_THROWS_AS(experiment_from_json(json{{"nss", 512}}), ConfigError);
        CHECK_THROWS_AS(experiment_from_json(json::array()), ConfigError);
    }
    SECTION("wrong types are config errors") {
        CHECK_THROWS_AS(experiment_from_json(json{{"ns", "many"}}), ConfigError);
        CHECK_THROWS_AS(experiment_from_json(json{{"list_sizes", 4}}), ConfigError);
    }
}

TEST_CASE("resolution picks the expected block sizes") {
    ExperimentConfig cfg;
    cfg.ns = 512;
    cfg.rs = 0.6;
    cfg.rate = 0.5;
    cfg.p = 0.07;
    ResolvedCodes r = resolve_codes(cfg, 2.0);
    CHECK(r.src.n == 512);
    CHECK(r.src.k == 307);
    CHECK(r.ch.n == 1024);
    CHECK(r.ch.k == 307);
    CHECK(r.overall_rate == 0.5);
    CHECK(r.src.high_set.size() == 307);
    CHECK(r.ch.info_set.size() == 307);

    SECTION("explicit sets override construction") {
        ExperimentConfig small;
        small.ns = 4;
        small.rs = 0.5;
        small.rate = 1.0;
        small.high_set = std::vector<int>{1, 3};
        small.info_set = std::vector<int>{2, 4};
        ResolvedCodes rs = resolve_codes(small, 2.0);
        CHECK(rs.src.high_set == std::vector<int>{1, 3});
        CHECK(rs.ch.info_set == std::vector<int>{2, 4});
    }
}

TEST_CASE("resolution rejects impossible geometry") {
    ExperimentConfig cfg;
    cfg.ns = 512;

    cfg.rate = 0.3;
    CHECK_THROWS_AS(resolve_codes(cfg, 2.0), ConfigError);

    cfg = {};
    cfg.ns = 500;
    CHECK_THROWS_AS(resolve_codes(cfg, 2.0), ConfigError);

    cfg = {};
    cfg.rs = 0.0005;  // rounds to K = 0
    CHECK_THROWS_AS(resolve_codes(cfg, 2.0), ConfigError);

    cfg = {};
    cfg.ns = 4;
    cfg.rs = 0.5;
    cfg.rate = 1.0;
    cfg.high_set = std::vector<int>{1, 2, 3};  // three bits, K says two
    CHECK_THROWS_AS(resolve_codes(cfg, 2.0), ConfigError);
}

TEST_CASE("sweep csv round trips") {
    BerPoint a;
    a.ebn0_db = 2.0;
    a.frames = 12345;
    a.bit_errors = 678;
    a.frame_errors = 90;
    a.ber = 0.011;
    a.fer = 0.0072941;
    a.low_confidence = false;
    a.seconds = 1.5;
    CHECK(csv_line(a) == "2,12345,678,90,0.011,0.0072941,0,1.500");

    BerPoint b;
    b.ebn0_db = -1.25;
    b.frames = 64;
    b.bit_errors = 4096;
    b.frame_errors = 64;
    b.ber = 0.125;
    b.fer = 1.0;
    b.low_confidence = true;
    b.seconds = 0.125;

    std::stringstream ss;
    ss << csv_header() << "\n" << csv_line(a) << "\n\n" << csv_line(b) << "\n";
    std::vector<BerPoint> pts = read_ber_csv(ss);
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].frames == 12345);
    CHECK(pts[0].ber == 0.011);
    CHECK(!pts[0].low_confidence);
    CHECK(pts[1].ebn0_db == -1.25);
    CHECK(pts[1].fer == 1.0);
    CHECK(pts[1].low_confidence);

    std::stringstream bad("1,2,3\n");
    CHECK_THROWS_AS(read_ber_csv(bad), ConfigError);
}

TEST_CASE("trellis dumps carry the level schedule") {
    SourceCodeSpec src;
    src.n = 4;
    src.k = 2;
    src.high_set = {1, 3};
    src.p = 0.07;
    ChannelCodeSpec ch;
    ch.n = 4;
    ch.k = 2;
    ch.info_set = {2, 4};
    ch.frozen_values = {0, 0};

    json j = trellis_to_json(build_trellis(src, ch));
    CHECK(j["ns"] == 4);
    CHECK(j["nc"] == 4);
    CHECK(j["k"] == 2);
    CHECK(j["j"] == json({2, 5}));
    CHECK(j["w"] == json({3, 6}));
    REQUIRE(j["levels"].size() == 6);
    CHECK(j["levels"][0]["kind"] == "frozen");
    CHECK(j["levels"][1]["kind"] == "jsc");
    CHECK(j["levels"][1]["i_c"] == 2);
    CHECK(j["levels"][1]["i_s"] == 1);
    CHECK(j["levels"][2]["kind"] == "low_entropy");
}

TEST_CASE("trace text is stable") {
    std::vector<LevelTrace> trace;
    trace.push_back({1, LevelKind::Frozen, 1, 0, {0.125}});
    trace.push_back({2, LevelKind::Jsc, 2, 1, {0.5, 1.25}});
    CHECK(trace_to_text(trace) ==
          "level,kind,i_c,i_s,jpms\n"
          "1,frozen,1,0,0.125000\n"
          "2,jsc,2,1,0.500000;1.250000\n");
}
