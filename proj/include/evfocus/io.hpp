// File formats: event CSV ("t_us,x,y,p"), fixed-width binary events
// ("EVAF" v1, little-endian), calibration CSV ("t_us,position_um") with
// piecewise-linear timestamp->position interpolation, and JSON focus
// reports.
#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>  // vendored nlohmann/json single header

#include "evfocus/core.hpp"

namespace evfocus::io {

using json = nlohmann::json;

// ------------------------------------------------------------- text events

inline void write_events_text(const EventStream& stream, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "t_us,x,y,p\n";
    for (const Event& e : stream.events)
        out << e.t << ',' << e.x << ',' << e.y << ','
            << (e.polarity == Polarity::Positive ? "1" : "-1") << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

namespace detail {

template <typename T>
T parse_field(std::string_view s, const char* what, std::size_t line_no) {
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::runtime_error(std::string("malformed ") + what + ", line " +
                                 std::to_string(line_no));
    return v;
}

}  // namespace detail

// The text format carries no sensor geometry, so the caller supplies it
// (defaults to the 346x260 DAVIS346 sensor used throughout).
inline EventStream read_events_text(const std::string& path,
                                    SensorGeometry sensor = SensorGeometry{}) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line) || (line != "t_us,x,y,p" && line != "t_us,x,y,p\r"))
        throw std::runtime_error("missing header 't_us,x,y,p': " + path);

    EventStream stream;
    stream.sensor = sensor;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::string_view sv(line);
        std::size_t c1 = sv.find(','), c2 = sv.find(',', c1 + 1), c3 = sv.find(',', c2 + 1);
        if (c1 == std::string_view::npos || c2 == std::string_view::npos ||
            c3 == std::string_view::npos || sv.find(',', c3 + 1) != std::string_view::npos)
            throw std::runtime_error("malformed row, line " + std::to_string(line_no));
        Event e;
        e.t = detail::parse_field<std::uint64_t>(sv.substr(0, c1), "timestamp", line_no);
        e.x = detail::parse_field<std::uint16_t>(sv.substr(c1 + 1, c2 - c1 - 1), "x", line_no);
        e.y = detail::parse_field<std::uint16_t>(sv.substr(c2 + 1, c3 - c2 - 1), "y", line_no);
        const std::string_view p = sv.substr(c3 + 1);
        if (p == "1" || p == "+1")
            e.polarity = Polarity::Positive;
        else if (p == "-1")
            e.polarity = Polarity::Negative;
        else
            throw std::runtime_error("invalid polarity, line " + std::to_string(line_no));
        stream.events.push_back(e);
    }
    return stream;
}

// ----------------------------------------------------------- binary events
//
// Layout (little-endian): magic "EVAF", u16 version = 1, u16 width,
// u16 height, u64 count, then `count` records of
// { u64 t_us, u16 x, u16 y, i8 p, i8 pad } = 14 bytes.

namespace detail {

template <typename T>
void put_le(std::string& buf, T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i)
        buf.push_back(static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xFF));
}

template <typename T>
T get_le(const unsigned char* p) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return static_cast<T>(v);
}

}  // namespace detail

inline void write_events_binary(const EventStream& stream, const std::string& path) {
    std::string buf;
    buf.reserve(16 + 14 * stream.events.size());
    buf += "EVAF";
    detail::put_le<std::uint16_t>(buf, 1);
    detail::put_le<std::uint16_t>(buf, static_cast<std::uint16_t>(stream.sensor.width));
    detail::put_le<std::uint16_t>(buf, static_cast<std::uint16_t>(stream.sensor.height));
    detail::put_le<std::uint64_t>(buf, stream.events.size());
    for (const Event& e : stream.events) {
        detail::put_le<std::uint64_t>(buf, e.t);
        detail::put_le<std::uint16_t>(buf, e.x);
        detail::put_le<std::uint16_t>(buf, e.y);
        buf.push_back(static_cast<char>(e.polarity));
        buf.push_back('\0');
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline EventStream read_events_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
    if (buf.size() < 18 || std::memcmp(buf.data(), "EVAF", 4) != 0)
        throw std::runtime_error("bad magic (expected EVAF): " + path);
    const auto version = detail::get_le<std::uint16_t>(buf.data() + 4);
    if (version != 1)
        throw std::runtime_error("unsupported version " + std::to_string(version) + ": " + path);

    EventStream stream;
    stream.sensor.width = detail::get_le<std::uint16_t>(buf.data() + 6);
    stream.sensor.height = detail::get_le<std::uint16_t>(buf.data() + 8);
    const auto count = detail::get_le<std::uint64_t>(buf.data() + 10);
    const std::size_t expected = 18 + 14 * static_cast<std::size_t>(count);
    if (buf.size() != expected)
        throw std::runtime_error("truncated file: expected " + std::to_string(expected) +
                                 " bytes, got " + std::to_string(buf.size()) + ": " + path);

    stream.events.reserve(static_cast<std::size_t>(count));
    const unsigned char* p = buf.data() + 18;
    for (std::uint64_t i = 0; i < count; ++i, p += 14) {
        Event e;
        e.t = detail::get_le<std::uint64_t>(p);
        e.x = detail::get_le<std::uint16_t>(p + 8);
        e.y = detail::get_le<std::uint16_t>(p + 10);
        const auto pol = static_cast<std::int8_t>(p[12]);
        if (pol != 1 && pol != -1)
            throw std::runtime_error("invalid polarity in record " + std::to_string(i) + ": " +
                                     path);
        e.polarity = static_cast<Polarity>(pol);
        stream.events.push_back(e);
    }
    return stream;
}

// -------------------------------------------------------------- calibration

// TTL-style (timestamp, stage position) samples: strictly increasing in
// time, monotone in position.
struct Calibration {
    std::vector<std::pair<std::uint64_t, double>> samples;  // (t_us, position_um)

    void check() const {
        if (samples.size() < 2) throw std::invalid_argument("calibration: need >= 2 samples");
        bool inc = true, dec = true;
        for (std::size_t i = 1; i < samples.size(); ++i) {
            if (samples[i].first <= samples[i - 1].first)
                throw std::invalid_argument("calibration: timestamps must strictly increase");
            if (samples[i].second < samples[i - 1].second) inc = false;
            if (samples[i].second > samples[i - 1].second) dec = false;
        }
        if (!inc && !dec)
            throw std::invalid_argument("calibration: positions must be monotone");
    }
};

// Piecewise-linear interpolation; refuses to extrapolate.
inline double time_to_position(const Calibration& cal, double t_us) {
    const auto& s = cal.samples;
    if (s.size() < 2) throw std::invalid_argument("calibration: need >= 2 samples");
    if (t_us < static_cast<double>(s.front().first) ||
        t_us > static_cast<double>(s.back().first))
        throw std::out_of_range("outside calibrated window");
    auto it = std::lower_bound(s.begin(), s.end(), t_us, [](const auto& a, double t) {
        return static_cast<double>(a.first) < t;
    });
    if (it == s.begin()) return it->second;
    if (static_cast<double>(it->first) == t_us) return it->second;
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double frac = (t_us - static_cast<double>(lo.first)) /
                        (static_cast<double>(hi.first) - static_cast<double>(lo.first));
    return lo.second + frac * (hi.second - lo.second);
}

inline void write_calibration_csv(const Calibration& cal, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "t_us,position_um\n";
    out.precision(17);
    for (const auto& [t, pos] : cal.samples) out << t << ',' << pos << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline Calibration read_calibration_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line) ||
        (line != "t_us,position_um" && line != "t_us,position_um\r"))
        throw std::runtime_error("missing header 't_us,position_um': " + path);
    Calibration cal;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::size_t c = line.find(',');
        if (c == std::string::npos)
            throw std::runtime_error("malformed row, line " + std::to_string(line_no));
        const std::uint64_t t =
            detail::parse_field<std::uint64_t>(std::string_view(line).substr(0, c), "timestamp",
                                               line_no);
        try {
            cal.samples.emplace_back(t, std::stod(line.substr(c + 1)));
        } catch (const std::exception&) {
            throw std::runtime_error("malformed position, line " + std::to_string(line_no));
        }
    }
    cal.check();
    return cal;
}

// ------------------------------------------------------------ focus report

struct FocusReport {
    std::string method;
    double focus_time_us = 0.0;
    std::optional<double> position_um;
    std::optional<double> error_um;
    double runtime_ms = 0.0;
    json diagnostics = json::object();
};

inline json to_json(const FocusReport& r) {
    json j{{"method", r.method},
           {"focus_time_us", r.focus_time_us},
           {"runtime_ms", r.runtime_ms},
           {"diagnostics", r.diagnostics}};
    if (r.position_um) j["position_um"] = *r.position_um;
    if (r.error_um) j["error_um"] = *r.error_um;
    return j;
}

inline FocusReport report_from_json(const json& j) {
    FocusReport r;
    r.method = j.at("method").get<std::string>();
    r.focus_time_us = j.at("focus_time_us").get<double>();
    r.runtime_ms = j.at("runtime_ms").get<double>();
    if (j.contains("position_um")) r.position_um = j["position_um"].get<double>();
    if (j.contains("error_um")) r.error_um = j["error_um"].get<double>();
    if (j.contains("diagnostics")) r.diagnostics = j["diagnostics"];
    return r;
}

}  // namespace evfocus::io
