#include <gtest/gtest.h>
#include <openssl/evp.h>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "evfocus/io.hpp"

namespace {

using namespace evfocus;

std::string tmp_path(const std::string& name) { return testing::TempDir() + name; }

std::string sha256_of_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(buf.data(), buf.size(), digest, &len, EVP_sha256(), nullptr);
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) {
        static const char* k = "0123456789abcdef";
        hex.push_back(k[digest[i] >> 4]);
        hex.push_back(k[digest[i] & 0xF]);
    }
    return hex;
}

EventStream sample_stream() {
    EventStream s;
    s.sensor = SensorGeometry{346, 260};
    s.events = {
        Event{0, 0, 0, Polarity::Positive},
        Event{17, 345, 259, Polarity::Negative},
        Event{17, 12, 200, Polarity::Positive},
        Event{123456789012ULL, 100, 50, Polarity::Negative},
    };
    return s;
}

EventStream big_stream(std::size_t n) {
    EventStream s;
    s.sensor = SensorGeometry{346, 260};
    s.events.reserve(n);
    std::uint64_t rng = 0x243F6A8885A308D3ULL, t = 0;
    for (std::size_t i = 0; i < n; ++i) {
        rng ^= rng << 13;
        rng ^= rng >> 7;
        rng ^= rng << 17;
        t += rng % 7;
        s.events.push_back(Event{t, static_cast<std::uint16_t>(rng % 346),
                                 static_cast<std::uint16_t>((rng >> 16) % 260),
                                 (rng >> 32) & 1 ? Polarity::Positive : Polarity::Negative});
    }
    return s;
}

void expect_throw_containing(const std::function<void()>& fn, const std::string& needle) {
    try {
        fn();
        FAIL() << "expected exception containing '" << needle << "'";
    } catch (const std::exception& e) {
        EXPECT_TRUE(std::string(e.what()).find(needle) != std::string::npos)
            << "got: " << e.what();
    }
}

TEST(TextEvents, RoundTrip) {
    const auto s = sample_stream();
    const auto path = tmp_path("events_rt.csv");
    io::write_events_text(s, path);
    const auto back = io::read_events_text(path, s.sensor);
    EXPECT_EQ(back, s);
    std::remove(path.c_str());
}

TEST(TextEvents, HeaderAndTolerantParsing) {
    const auto path = tmp_path("events_tolerant.csv");
    {
        std::ofstream out(path, std::ios::binary);
        out << "t_us,x,y,p\r\n10,1,2,+1\r\n\r\n20,3,4,-1\n";
    }
    const auto s = io::read_events_text(path);
    ASSERT_EQ(s.events.size(), 2u);
    EXPECT_EQ(s.events[0], (Event{10, 1, 2, Polarity::Positive}));
    EXPECT_EQ(s.events[1], (Event{20, 3, 4, Polarity::Negative}));
    EXPECT_EQ(s.sensor, SensorGeometry{});  // text carries no geometry
    std::remove(path.c_str());
}

TEST(TextEvents, ErrorMessagesPinpointLine) {
    const auto write = [](const std::string& path, const std::string& body) {
        std::ofstream out(path);
        out << body;
    };
    const auto p = tmp_path("events_bad.csv");

    write(p, "time,x,y,p\n1,2,3,1\n");
    expect_throw_containing([&] { io::read_events_text(p); }, "missing header 't_us,x,y,p'");

    write(p, "t_us,x,y,p\n1,2,3\n");
    expect_throw_containing([&] { io::read_events_text(p); }, "malformed row, line 2");

    write(p, "t_us,x,y,p\n1,2,3,1,9\n");
    expect_throw_containing([&] { io::read_events_text(p); }, "malformed row, line 2");

    write(p, "t_us,x,y,p\n1,2,3,1\nfoo,2,3,1\n");
    expect_throw_containing([&] { io::read_events_text(p); }, "malformed timestamp, line 3");

    write(p, "t_us,x,y,p\n1,70000,3,1\n");  // x overflows u16
    expect_throw_containing([&] { io::read_events_text(p); }, "malformed x, line 2");

    write(p, "t_us,x,y,p\n1,2,3,2\n");
    expect_throw_containing([&] { io::read_events_text(p); }, "invalid polarity, line 2");

    write(p, "t_us,x,y,p\n1,2,3,0\n");
    expect_throw_containing([&] { io::read_events_text(p); }, "invalid polarity, line 2");

    expect_throw_containing([&] { io::read_events_text(tmp_path("nope_missing.csv")); },
                            "cannot open");
    std::remove(p.c_str());
}

TEST(BinaryEvents, RoundTripPreservesGeometryAndEvents) {
    auto s = sample_stream();
    s.sensor = SensorGeometry{128, 96};
    const auto path = tmp_path("events_rt.evaf");
    io::write_events_binary(s, path);
    EXPECT_EQ(io::read_events_binary(path), s);
    std::remove(path.c_str());
}

TEST(BinaryEvents, FixedLayout) {
    EventStream s;
    s.sensor = SensorGeometry{346, 260};
    s.events = {Event{0x0102030405060708ULL, 0x1122, 0x3344, Polarity::Negative}};
    const auto path = tmp_path("events_layout.evaf");
    io::write_events_binary(s, path);
    std::ifstream in(path, std::ios::binary);
    std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
    ASSERT_EQ(buf.size(), 18u + 14u);
    EXPECT_EQ(std::string(buf.begin(), buf.begin() + 4), "EVAF");
    EXPECT_EQ(buf[4], 1u);  // version, little-endian
    EXPECT_EQ(buf[5], 0u);
    EXPECT_EQ(buf[6] | buf[7] << 8, 346);
    EXPECT_EQ(buf[8] | buf[9] << 8, 260);
    EXPECT_EQ(buf[10], 1u);  // count
    EXPECT_EQ(buf[18], 0x08u);  // t little-endian
    EXPECT_EQ(buf[25], 0x01u);
    EXPECT_EQ(buf[26] | buf[27] << 8, 0x1122);
    EXPECT_EQ(buf[28] | buf[29] << 8, 0x3344);
    EXPECT_EQ(static_cast<std::int8_t>(buf[30]), -1);
    EXPECT_EQ(buf[31], 0u);  // pad
    std::remove(path.c_str());
}

TEST(BinaryEvents, DetectsCorruption) {
    const auto s = sample_stream();
    const auto path = tmp_path("events_corrupt.evaf");
    io::write_events_binary(s, path);

    // truncate the last record
    {
        std::ifstream in(path, std::ios::binary);
        std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        std::ofstream out(path, std::ios::binary);
        out.write(buf.data(), static_cast<std::streamsize>(buf.size() - 5));
    }
    // 18 + 4*14 = 74 expected, 69 on disk
    expect_throw_containing([&] { io::read_events_binary(path); },
                            "truncated file: expected 74 bytes, got 69");

    io::write_events_binary(s, path);
    {
        std::fstream f(path, std::ios::binary | std::ios::in | std::ios::out);
        f.seekp(30);  // polarity byte of record 0
        f.put(0);
    }
    expect_throw_containing([&] { io::read_events_binary(path); }, "invalid polarity in record 0");

    {
        std::ofstream out(path, std::ios::binary);
        out << "EVXX";
    }
    expect_throw_containing([&] { io::read_events_binary(path); }, "bad magic");
    std::remove(path.c_str());
}

TEST(BinaryEvents, MillionEventRoundTripIsByteStable) {
    const auto s = big_stream(1000000);
    const auto p1 = tmp_path("events_big1.evaf");
    const auto p2 = tmp_path("events_big2.evaf");
    io::write_events_binary(s, p1);
    const auto back = io::read_events_binary(p1);
    ASSERT_EQ(back.events.size(), s.events.size());
    EXPECT_EQ(back, s);
    io::write_events_binary(back, p2);
    EXPECT_EQ(sha256_of_file(p1), sha256_of_file(p2));
    std::remove(p1.c_str());
    std::remove(p2.c_str());
}

TEST(CrossFormat, TextAndBinaryAgree) {
    const auto s = big_stream(5000);
    const auto pt = tmp_path("events_x.csv");
    const auto pb = tmp_path("events_x.evaf");
    io::write_events_text(s, pt);
    io::write_events_binary(s, pb);
    const auto from_text = io::read_events_text(pt, s.sensor);
    const auto from_bin = io::read_events_binary(pb);
    EXPECT_EQ(from_text, from_bin);
    std::remove(pt.c_str());
    std::remove(pb.c_str());
}

TEST(Calibration, CheckRejectsBadTracks) {
    io::Calibration c;
    c.samples = {{0, 0.0}};
    EXPECT_THROW(c.check(), std::invalid_argument);
    c.samples = {{10, 0.0}, {10, 5.0}};
    EXPECT_THROW(c.check(), std::invalid_argument);
    c.samples = {{0, 0.0}, {10, 5.0}, {20, 3.0}};
    EXPECT_THROW(c.check(), std::invalid_argument);  // not monotone
    c.samples = {{0, 5.0}, {10, 3.0}, {20, 3.0}};    // monotone decreasing ok
    EXPECT_NO_THROW(c.check());
}

TEST(Calibration, InterpolatesAndRefusesExtrapolation) {
    io::Calibration c;
    c.samples = {{1000, -300.0}, {2000, -100.0}, {4000, 300.0}};
    c.check();
    EXPECT_DOUBLE_EQ(io::time_to_position(c, 1000.0), -300.0);
    EXPECT_DOUBLE_EQ(io::time_to_position(c, 4000.0), 300.0);
    EXPECT_DOUBLE_EQ(io::time_to_position(c, 1500.0), -200.0);
    EXPECT_DOUBLE_EQ(io::time_to_position(c, 3000.0), 100.0);
    try {
        io::time_to_position(c, 999.0);
        FAIL() << "expected error";
    } catch (const std::out_of_range& e) {
        EXPECT_STREQ(e.what(), "outside calibrated window");
    }
    EXPECT_THROW(io::time_to_position(c, 4000.5), std::out_of_range);
}

TEST(Calibration, DenseLinearTrackReproducesLine) {
    // position(t) = -300 + 0.01 * (t - 5000): queries must sit on the line
    io::Calibration c;
    for (int i = 0; i <= 10; ++i) {
        const std::uint64_t t = 5000 + 6000ull * i;
        c.samples.emplace_back(t, -300.0 + 0.01 * (static_cast<double>(t) - 5000.0));
    }
    c.check();
    std::uint64_t rng = 1;
    for (int i = 0; i < 1000; ++i) {
        rng ^= rng << 13;
        rng ^= rng >> 7;
        rng ^= rng << 17;
        const double t = 5000.0 + static_cast<double>(rng % 60001);
        EXPECT_NEAR(io::time_to_position(c, t), -300.0 + 0.01 * (t - 5000.0), 1e-9);
    }
}

TEST(Calibration, CsvRoundTripIsExact) {
    io::Calibration c;
    c.samples = {{0, -300.123456789012345}, {30000, 0.25}, {60000, 299.999999999999}};
    const auto path = tmp_path("cal_rt.csv");
    io::write_calibration_csv(c, path);
    const auto back = io::read_calibration_csv(path);
    ASSERT_EQ(back.samples.size(), c.samples.size());
    for (std::size_t i = 0; i < c.samples.size(); ++i) {
        EXPECT_EQ(back.samples[i].first, c.samples[i].first);
        EXPECT_EQ(back.samples[i].second, c.samples[i].second);  // 17 digits: exact
    }
    std::remove(path.c_str());
}

TEST(Calibration, CsvErrors) {
    const auto p = tmp_path("cal_bad.csv");
    {
        std::ofstream out(p);
        out << "time,pos\n";
    }
    expect_throw_containing([&] { io::read_calibration_csv(p); },
                            "missing header 't_us,position_um'");
    {
        std::ofstream out(p);
        out << "t_us,position_um\n100\n";
    }
    expect_throw_containing([&] { io::read_calibration_csv(p); }, "malformed row, line 2");
    {
        std::ofstream out(p);
        out << "t_us,position_um\n100,abc\n200,1.0\n";
    }
    expect_throw_containing([&] { io::read_calibration_csv(p); }, "malformed position, line 2");
    std::remove(p.c_str());
}

TEST(FocusReport, JsonRoundTrip) {
    io::FocusReport r;
    r.method = "pbf";
    r.focus_time_us = 30500.0;
    r.position_um = 5.0;
    r.error_um = 5.0;
    r.runtime_ms = 1.25;
    r.diagnostics = {{"flat_curve", false}, {"effective_levels", 6}};
    const auto j = io::to_json(r);
    const auto back = io::report_from_json(j);
    EXPECT_EQ(back.method, "pbf");
    EXPECT_DOUBLE_EQ(back.focus_time_us, 30500.0);
    ASSERT_TRUE(back.position_um.has_value());
    EXPECT_DOUBLE_EQ(*back.position_um, 5.0);
    ASSERT_TRUE(back.error_um.has_value());
    EXPECT_DOUBLE_EQ(*back.error_um, 5.0);
    EXPECT_DOUBLE_EQ(back.runtime_ms, 1.25);
    EXPECT_EQ(back.diagnostics["effective_levels"], 6);

    io::FocusReport bare;
    bare.method = "egs";
    bare.focus_time_us = 1.0;
    const auto jb = io::to_json(bare);
    EXPECT_FALSE(jb.contains("position_um"));
    EXPECT_FALSE(jb.contains("error_um"));
    const auto bb = io::report_from_json(jb);
    EXPECT_FALSE(bb.position_um.has_value());

    // parse from a plain string, as the CLI emits it
    const auto parsed = io::report_from_json(io::json::parse(j.dump()));
    EXPECT_EQ(parsed.method, r.method);
}

}  // namespace
