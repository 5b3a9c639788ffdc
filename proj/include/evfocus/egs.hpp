// Event-rate baseline: smooth the summed rate sequence and locate its
// maximum with a golden-section search, plus a global-argmax cross-check
// that flags unimodality violations.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "evfocus/epr.hpp"
#include "evfocus/pbf.hpp"

namespace evfocus {

// Summed event rate per bin, kept as raw (unnormalized) counts.
struct ErSequence {
    std::uint64_t t0 = 0;
    std::uint64_t dt = 1000;
    std::vector<double> er;
};

inline ErSequence er_sequence(const EprSequence& seq) {
    ErSequence out;
    out.t0 = seq.t0;
    out.dt = seq.dt;
    out.er.resize(seq.n());
    for (std::size_t i = 0; i < out.er.size(); ++i) out.er[i] = seq.per[i] + seq.ner[i];
    return out;
}

namespace detail {

// Centered moving average; the window is clipped at the sequence edges, so
// edge bins average over fewer samples instead of fabricating data.
inline std::vector<double> moving_average(const std::vector<double>& v, std::size_t window) {
    const std::size_t n = v.size();
    const std::size_t half = window / 2;
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + v[i];
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i >= half ? i - half : 0;
        const std::size_t hi = std::min(n - 1, i + half);
        out[i] = (prefix[hi + 1] - prefix[lo]) / static_cast<double>(hi - lo + 1);
    }
    return out;
}

inline double lerp_at(const std::vector<double>& v, double x) {
    const std::size_t i = static_cast<std::size_t>(std::clamp(
        std::floor(x), 0.0, static_cast<double>(v.size() - 2)));
    const double frac = x - static_cast<double>(i);
    return v[i] * (1.0 - frac) + v[i + 1] * frac;
}

}  // namespace detail

// Golden-section maximum search over the smoothed rate, on the continuous
// bin axis [0, n-1] with linear interpolation between bins. Terminates when
// the bracket shrinks to tol_bins and returns the bracket center. A flat
// smoothed sequence returns the sequence center and sets the violation flag.
inline FocusResult egs_focus(const ErSequence& er, double window_s = 0.055,
                             int tol_bins = 1) {
    const std::size_t n = er.er.size();
    if (n < 3) throw std::invalid_argument("egs_focus: need at least 3 bins");
    if (!(window_s > 0.0)) throw std::invalid_argument("egs_focus: window must be positive");
    if (tol_bins < 1) throw std::invalid_argument("egs_focus: tol_bins must be >= 1");

    const double window_bins_f = window_s * 1e6 / static_cast<double>(er.dt);
    std::size_t window = static_cast<std::size_t>(std::lround(window_bins_f));
    if (window < 1) window = 1;
    if (window > n) throw std::invalid_argument("egs_focus: window wider than sequence");

    const std::vector<double> smooth = detail::moving_average(er.er, window);

    FocusDiagnostics diag;
    FocusDiagnostics::BaselineSearch search;

    std::size_t gbest = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (smooth[i] > smooth[gbest]) gbest = i;
    search.global_argmax_bin = static_cast<double>(gbest);

    int local_maxima = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const bool up = i == 0 || smooth[i] > smooth[i - 1];
        const bool down = i == n - 1 || smooth[i] > smooth[i + 1];
        if (up && down) ++local_maxima;
    }

    double focus;
    if (detail::curve_is_flat(smooth)) {
        focus = static_cast<double>(n - 1) / 2.0;
        search.bracket_lo = 0.0;
        search.bracket_hi = static_cast<double>(n - 1);
        search.unimodality_violation = true;
        diag.flat_curve = true;
    } else {
        const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
        double lo = 0.0, hi = static_cast<double>(n - 1);
        double x1 = hi - inv_phi * (hi - lo);
        double x2 = lo + inv_phi * (hi - lo);
        double f1 = detail::lerp_at(smooth, x1);
        double f2 = detail::lerp_at(smooth, x2);
        search.evaluations = 2;
        while (hi - lo > static_cast<double>(tol_bins)) {
            if (f1 < f2) {  // maximum is right of x1
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + inv_phi * (hi - lo);
                f2 = detail::lerp_at(smooth, x2);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - inv_phi * (hi - lo);
                f1 = detail::lerp_at(smooth, x1);
            }
            ++search.evaluations;
        }
        focus = (lo + hi) / 2.0;
        search.bracket_lo = lo;
        search.bracket_hi = hi;
        search.unimodality_violation =
            std::abs(search.global_argmax_bin - focus) > static_cast<double>(tol_bins) ||
            local_maxima > 1;
    }

    FocusResult res;
    res.focus_bin = focus;
    res.a_star = static_cast<int>(std::lround(2.0 * focus));
    res.focus_time_us = static_cast<double>(er.t0) + focus * static_cast<double>(er.dt) +
                        static_cast<double>(er.dt) / 2.0;
    diag.mse_min = -detail::lerp_at(smooth, focus);
    diag.search = search;
    res.diagnostics = std::move(diag);
    return res;
}

}  // namespace evfocus
