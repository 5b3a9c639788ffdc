// Event-stream data model: events, sensor geometry, ROI filtering, validation.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace evfocus {

enum class Polarity : std::int8_t { Negative = -1, Positive = 1 };

inline int polarity_sign(Polarity p) { return static_cast<int>(p); }

// One asynchronous brightness-change sample. Timestamps are integer
// microseconds since the stream epoch; equal timestamps are allowed and
// keep their original order.
struct Event {
    std::uint64_t t = 0;  // microseconds
    std::uint16_t x = 0;
    std::uint16_t y = 0;
    Polarity polarity = Polarity::Positive;

    friend bool operator==(const Event&, const Event&) = default;
};

struct SensorGeometry {
    int width = 346;   // DAVIS346 default
    int height = 260;

    bool valid() const { return width >= 1 && height >= 1; }
    friend bool operator==(const SensorGeometry&, const SensorGeometry&) = default;
};

// Inclusive top-left corner plus extent, in pixels.
struct Roi {
    int x0 = 0;
    int y0 = 0;
    int w = 0;
    int h = 0;

    bool contains(int x, int y) const {
        return x >= x0 && x < x0 + w && y >= y0 && y < y0 + h;
    }
    bool inside(const SensorGeometry& s) const {
        return w >= 1 && h >= 1 && x0 >= 0 && y0 >= 0 && x0 + w <= s.width &&
               y0 + h <= s.height;
    }
    static Roi full(const SensorGeometry& s) { return Roi{0, 0, s.width, s.height}; }
    friend bool operator==(const Roi&, const Roi&) = default;
};

struct EventStream {
    SensorGeometry sensor;
    std::vector<Event> events;

    friend bool operator==(const EventStream&, const EventStream&) = default;
};

// Returns one message per violated invariant, each naming the first offending
// event index; empty means the stream is well-formed. Violations are data,
// not exceptions.
inline std::vector<std::string> validate(const EventStream& stream) {
    std::vector<std::string> out;
    if (!stream.sensor.valid()) {
        out.push_back("invalid sensor geometry");
        return out;
    }
    bool seen_order = false, seen_x = false, seen_y = false, seen_pol = false;
    for (std::size_t i = 0; i < stream.events.size(); ++i) {
        const Event& e = stream.events[i];
        if (!seen_order && i > 0 && e.t < stream.events[i - 1].t) {
            out.push_back("non-monotonic timestamp at index " + std::to_string(i));
            seen_order = true;
        }
        if (!seen_x && e.x >= stream.sensor.width) {
            out.push_back("x out of bounds at index " + std::to_string(i));
            seen_x = true;
        }
        if (!seen_y && e.y >= stream.sensor.height) {
            out.push_back("y out of bounds at index " + std::to_string(i));
            seen_y = true;
        }
        if (!seen_pol && e.polarity != Polarity::Positive && e.polarity != Polarity::Negative) {
            out.push_back("invalid polarity at index " + std::to_string(i));
            seen_pol = true;
        }
    }
    return out;
}

// Keeps exactly the events inside roi, order preserved, geometry unchanged.
inline EventStream filter_roi(const EventStream& stream, const Roi& roi) {
    if (!roi.inside(stream.sensor))
        throw std::invalid_argument("filter_roi: roi outside sensor");
    EventStream out;
    out.sensor = stream.sensor;
    out.events.reserve(stream.events.size());
    for (const Event& e : stream.events)
        if (roi.contains(e.x, e.y)) out.events.push_back(e);
    return out;
}

}  // namespace evfocus
