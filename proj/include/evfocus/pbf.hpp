// Polarity-symmetry focus evaluation: slide the negative-rate sequence
// against the reflected positive-rate sequence, score the overlap MSE for
// each shift a, and take the argmin. The focus sits at half the best shift.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "evfocus/epr.hpp"
#include "evfocus/wavelet.hpp"

namespace evfocus {

// MSE(a) for integer shifts a in [a_min_index, a_max_index]. k in (0, 1)
// restricts the scan to shifts with adequate overlap: a in [k*n, (2-k)*n].
struct MseCurve {
    int a_min_index = 0;
    int a_max_index = 0;
    std::vector<double> values;
    double k = 0.5;
};

struct FocusDiagnostics {
    bool clamped_levels = false;      // wavelet depth was reduced to fit n
    bool degenerate_channel = false;  // a polarity channel had no events
    bool flat_curve = false;          // score curve carried no information
    double mse_min = 0.0;
    std::optional<MseCurve> curve;

    // Populated by the event-rate baseline only.
    struct BaselineSearch {
        double bracket_lo = 0.0;
        double bracket_hi = 0.0;
        double global_argmax_bin = 0.0;
        int evaluations = 0;
        bool unimodality_violation = false;
    };
    std::optional<BaselineSearch> search;
};

struct FocusResult {
    int a_star = 0;           // best shift, in bins
    double focus_bin = 0.0;   // a_star / 2 (may be half-integer)
    double focus_time_us = 0.0;  // t0 + focus_bin*dt + dt/2
    std::optional<double> position_um;  // filled in when a calibration is applied
    FocusDiagnostics diagnostics;
};

// Scores symmetry for every shift a: pair ner[j] with per[a-1-j] over the
// overlap window j in [max(0, a-n), min(n-1, a-1)] and divide by the overlap
// length (a when a <= n, else 2n-a). Summation runs in ascending j so the
// result is bit-reproducible against a plain double loop.
inline MseCurve mse_curve(const std::vector<double>& per, const std::vector<double>& ner,
                          double k) {
    const std::size_t n = per.size();
    if (n != ner.size()) throw std::invalid_argument("mse_curve: channel lengths differ");
    if (n < 2) throw std::invalid_argument("mse_curve: need at least 2 bins");
    if (!(k > 0.0 && k < 1.0)) throw std::invalid_argument("mse_curve: k must be in (0, 1)");

    MseCurve curve;
    curve.k = k;
    curve.a_min_index = static_cast<int>(std::ceil(k * static_cast<double>(n)));
    curve.a_max_index = static_cast<int>(std::floor((2.0 - k) * static_cast<double>(n)));
    curve.values.reserve(static_cast<std::size_t>(curve.a_max_index - curve.a_min_index + 1));

    const std::int64_t nn = static_cast<std::int64_t>(n);
    for (std::int64_t a = curve.a_min_index; a <= curve.a_max_index; ++a) {
        const std::int64_t j0 = std::max<std::int64_t>(0, a - nn);
        const std::int64_t j1 = std::min<std::int64_t>(nn - 1, a - 1);
        double sum = 0.0;
        for (std::int64_t j = j0; j <= j1; ++j) {
            const double d = ner[static_cast<std::size_t>(j)] -
                             per[static_cast<std::size_t>(a - 1 - j)];
            sum += d * d;
        }
        const double overlap = static_cast<double>(a <= nn ? a : 2 * nn - a);
        curve.values.push_back(sum / overlap);
    }
    return curve;
}

namespace detail {

inline bool curve_is_flat(const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return (*hi - *lo) <= 1e-12 * std::max(1.0, std::abs(*hi));
}

// Argmin with smallest-index tie-breaking, then assemble the result.
inline FocusResult result_from_curve(MseCurve curve, const EprSequence& seq,
                                     FocusDiagnostics diag) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < curve.values.size(); ++i)
        if (curve.values[i] < curve.values[best]) best = i;

    FocusResult res;
    res.a_star = curve.a_min_index + static_cast<int>(best);
    res.focus_bin = res.a_star / 2.0;
    res.focus_time_us = static_cast<double>(seq.t0) + res.focus_bin * static_cast<double>(seq.dt) +
                        static_cast<double>(seq.dt) / 2.0;
    diag.mse_min = curve.values[best];
    diag.flat_curve = curve_is_flat(curve.values);
    diag.curve = std::move(curve);
    res.diagnostics = std::move(diag);
    return res;
}

inline EprSequence denoised(const EprSequence& seq, const DenoiseSpec& spec, bool* clamped) {
    EprSequence out = seq;
    const int eff = std::min(spec.levels, max_levels(seq.n(), spec.filter.length()));
    *clamped = eff < spec.levels;
    out.per = lowpass_reconstruct(seq.per, spec);
    out.ner = lowpass_reconstruct(seq.ner, spec);
    return out;
}

inline EprSequence normalize_with_context(const EprSequence& seq, NormalizationMode mode,
                                          const char* who, FocusDiagnostics* diag) {
    try {
        return normalize(seq, mode);
    } catch (const std::runtime_error& e) {
        diag->degenerate_channel = true;
        throw std::runtime_error(std::string(who) + ": " + e.what());
    }
}

}  // namespace detail

// Full evaluation: wavelet-denoise each channel, normalize, score symmetry,
// report the argmin as a focus timestamp.
inline FocusResult pbf_focus(const EprSequence& seq, const DenoiseSpec& spec,
                             NormalizationMode norm, double k = 0.5) {
    FocusDiagnostics diag;
    const EprSequence filt = detail::denoised(seq, spec, &diag.clamped_levels);
    const EprSequence normed = detail::normalize_with_context(filt, norm, "pbf_focus", &diag);
    return detail::result_from_curve(mse_curve(normed.per, normed.ner, k), seq, std::move(diag));
}

// Ablation: identical pipeline with the denoise step removed.
inline FocusResult ablate_no_filter(const EprSequence& seq, NormalizationMode norm,
                                    double k = 0.5) {
    FocusDiagnostics diag;
    const EprSequence normed =
        detail::normalize_with_context(seq, norm, "ablate_no_filter", &diag);
    return detail::result_from_curve(mse_curve(normed.per, normed.ner, k), seq, std::move(diag));
}

// Ablation: keep the denoise step but replace the symmetry score with the
// argmax of the summed event rate (smallest index on ties).
inline FocusResult ablate_no_mse(const EprSequence& seq, const DenoiseSpec& spec) {
    FocusDiagnostics diag;
    const EprSequence filt = detail::denoised(seq, spec, &diag.clamped_levels);

    std::vector<double> er(filt.n());
    for (std::size_t i = 0; i < er.size(); ++i) er[i] = filt.per[i] + filt.ner[i];

    std::size_t best = 0;
    for (std::size_t i = 1; i < er.size(); ++i)
        if (er[i] > er[best]) best = i;

    FocusResult res;
    res.a_star = static_cast<int>(2 * best);
    res.focus_bin = static_cast<double>(best);
    res.focus_time_us = static_cast<double>(seq.t0) + res.focus_bin * static_cast<double>(seq.dt) +
                        static_cast<double>(seq.dt) / 2.0;
    diag.mse_min = -er[best];  // convention: argmax stored as a negated minimum
    diag.flat_curve = detail::curve_is_flat(er);
    res.diagnostics = std::move(diag);
    return res;
}

}  // namespace evfocus
