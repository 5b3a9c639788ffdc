// Event-polarity-rate sequences: per-bin positive/negative event counts and
// their normalization for threshold imbalance.
#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "evfocus/core.hpp"

namespace evfocus {

// Paired positive/negative rate series on a fixed time grid. Bin i covers
// [t0 + i*dt, t0 + (i+1)*dt). Entries start out as raw counts and may later
// be normalized, so they are stored as reals.
struct EprSequence {
    std::uint64_t t0 = 0;        // microseconds
    std::uint64_t dt = 1000;     // microseconds per bin
    std::vector<double> per;     // positive channel
    std::vector<double> ner;     // negative channel
    bool partial_final_bin = false;  // dt did not divide the window

    std::size_t n() const { return per.size(); }
};

enum class NormalizationMode { None, UnitSum, UnitMax };

// Counts in-ROI events into fixed-width bins over [t_start, t_end).
// n = ceil((t_end - t_start)/dt); a final partial bin is kept un-rescaled
// and flagged.
inline EprSequence bin_events(const EventStream& stream, const Roi& roi,
                              std::uint64_t dt, std::uint64_t t_start,
                              std::uint64_t t_end) {
    if (t_end <= t_start) throw std::invalid_argument("bin_events: empty time window");
    if (dt < 1) throw std::invalid_argument("bin_events: dt must be >= 1 us");
    if (!roi.inside(stream.sensor))
        throw std::invalid_argument("bin_events: roi outside sensor");

    const std::uint64_t window = t_end - t_start;
    const std::size_t n = static_cast<std::size_t>((window + dt - 1) / dt);
    EprSequence seq;
    seq.t0 = t_start;
    seq.dt = dt;
    seq.per.assign(n, 0.0);
    seq.ner.assign(n, 0.0);
    seq.partial_final_bin = (window % dt) != 0;

    for (const Event& e : stream.events) {
        if (e.t < t_start || e.t >= t_end) continue;
        if (!roi.contains(e.x, e.y)) continue;
        const std::size_t i = static_cast<std::size_t>((e.t - t_start) / dt);
        if (e.polarity == Polarity::Positive)
            seq.per[i] += 1.0;
        else
            seq.ner[i] += 1.0;
    }
    return seq;
}

namespace detail {

inline void scale_channel(std::vector<double>& v, NormalizationMode mode) {
    if (mode == NormalizationMode::None) return;
    double denom = 0.0;
    if (mode == NormalizationMode::UnitSum) {
        for (double x : v) denom += x;
    } else {
        for (double x : v) denom = std::max(denom, x);
    }
    if (!(denom > 0.0)) throw std::runtime_error("degenerate polarity channel");
    for (double& x : v) x /= denom;
}

}  // namespace detail

// UnitSum scales each channel to sum 1, UnitMax to max 1, independently;
// None is the identity. An all-zero (or non-positive) channel cannot be
// normalized: no events of that polarity means focusing cannot proceed.
inline EprSequence normalize(const EprSequence& seq, NormalizationMode mode) {
    EprSequence out = seq;
    detail::scale_channel(out.per, mode);
    detail::scale_channel(out.ner, mode);
    return out;
}

}  // namespace evfocus
