// Multilevel 1-D discrete wavelet transform with symmetric (half-point)
// boundary extension, plus low-pass-only reconstruction used for denoising
// rate sequences. Filter banks are loaded from an embedded decimal-text
// table (see data/wavelets.taps) and checked for perfect reconstruction at
// construction time.
#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "evfocus/wavelet_taps.hpp"

namespace evfocus {

namespace detail {

// Symmetric half-point extension: fold index i into [0, n) with period 2n,
// i.e. ... x1 x0 | x0 x1 ... x_{n-1} | x_{n-1} ... .
inline std::size_t sym_index(std::int64_t i, std::size_t n) {
    const std::int64_t p = 2 * static_cast<std::int64_t>(n);
    std::int64_t m = i % p;
    if (m < 0) m += p;
    return static_cast<std::size_t>(m < static_cast<std::int64_t>(n) ? m : p - 1 - m);
}

}  // namespace detail

struct WaveletFilterPair {
    std::string name;
    std::vector<double> lo_d, hi_d, lo_r, hi_r;

    std::size_t length() const { return lo_d.size(); }

    // Builds a bank and verifies perfect reconstruction on impulse inputs
    // (center and edge positions) to 1e-10.
    static WaveletFilterPair from_taps(std::string name, std::vector<double> lo_d,
                                       std::vector<double> hi_d, std::vector<double> lo_r,
                                       std::vector<double> hi_r);

    // Built-in banks parsed from the embedded table: "dmey" (62 taps,
    // default) and "db4" (8 taps, short-support fallback).
    static const WaveletFilterPair& builtin(std::string_view name);
};

struct DenoiseSpec {
    WaveletFilterPair filter;
    int levels = 6;
    enum class Keep { ApproximationOnly } keep = Keep::ApproximationOnly;
};

// Deepest level reachable before coefficient arrays stop shrinking,
// floor(log2(n / (filter_len - 1))), floored at 1.
inline int max_levels(std::size_t n, std::size_t filter_len) {
    if (filter_len < 2) throw std::invalid_argument("max_levels: filter too short");
    const std::uint64_t base = filter_len - 1;
    int lv = 0;
    while ((base << (lv + 1)) <= n) ++lv;
    return lv < 1 ? 1 : lv;
}

// Single-level analysis: y[k] = sum_j f[j] x_sym(2k + 1 - j),
// k in [0, floor((n + F - 1)/2)).
inline void dwt_single(const std::vector<double>& x, const WaveletFilterPair& filt,
                       std::vector<double>& cA, std::vector<double>& cD) {
    const std::size_t n = x.size();
    const std::size_t F = filt.length();
    const std::size_t out_len = (n + F - 1) / 2;
    cA.assign(out_len, 0.0);
    cD.assign(out_len, 0.0);
    for (std::size_t k = 0; k < out_len; ++k) {
        double sa = 0.0, sd = 0.0;
        const std::int64_t base = 2 * static_cast<std::int64_t>(k) + 1;
        for (std::size_t j = 0; j < F; ++j) {
            const double v = x[detail::sym_index(base - static_cast<std::int64_t>(j), n)];
            sa += filt.lo_d[j] * v;
            sd += filt.hi_d[j] * v;
        }
        cA[k] = sa;
        cD[k] = sd;
    }
}

// Single-level synthesis cropped to the original length n; cD may be null
// for low-pass-only reconstruction.
inline std::vector<double> idwt_single(const std::vector<double>& cA,
                                       const std::vector<double>* cD,
                                       const WaveletFilterPair& filt, std::size_t n) {
    const std::int64_t F = static_cast<std::int64_t>(filt.length());
    std::vector<double> x(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::int64_t ii = static_cast<std::int64_t>(i);
        std::int64_t k_lo = ii / 2;
        std::int64_t k_hi = (ii + F - 2) / 2;
        if (k_hi >= static_cast<std::int64_t>(cA.size()))
            k_hi = static_cast<std::int64_t>(cA.size()) - 1;
        double s = 0.0;
        for (std::int64_t k = k_lo; k <= k_hi; ++k) {
            const std::int64_t j = ii + F - 2 - 2 * k;
            s += cA[static_cast<std::size_t>(k)] * filt.lo_r[static_cast<std::size_t>(j)];
            if (cD) s += (*cD)[static_cast<std::size_t>(k)] * filt.hi_r[static_cast<std::size_t>(j)];
        }
        x[i] = s;
    }
    return x;
}

// Coefficient pyramid, deepest level first: approx = cA_L,
// details[0] = cD_L ... details[L-1] = cD_1. lengths[i] is the signal
// length that produced details[i], needed to invert.
struct WaveletPyramid {
    std::vector<double> approx;
    std::vector<std::vector<double>> details;
    std::vector<std::size_t> lengths;
    int requested_levels = 0;
    int effective_levels = 0;
    bool clamped = false;
};

inline WaveletPyramid dwt_multilevel(const std::vector<double>& signal,
                                     const DenoiseSpec& spec) {
    if (signal.size() < 2)
        throw std::invalid_argument("dwt_multilevel: signal length must be >= 2");
    if (spec.levels < 1) throw std::invalid_argument("dwt_multilevel: levels must be >= 1");

    WaveletPyramid pyr;
    pyr.requested_levels = spec.levels;
    const int eff = std::min(spec.levels, max_levels(signal.size(), spec.filter.length()));
    pyr.effective_levels = eff;
    pyr.clamped = eff < spec.levels;

    std::vector<double> a = signal, ca, cd;
    for (int lv = 0; lv < eff; ++lv) {
        pyr.lengths.insert(pyr.lengths.begin(), a.size());
        dwt_single(a, spec.filter, ca, cd);
        pyr.details.insert(pyr.details.begin(), cd);
        a = ca;
    }
    pyr.approx = std::move(a);
    return pyr;
}

// Full inverse; pass keep_details = false to zero every detail band.
inline std::vector<double> inverse(const WaveletPyramid& pyr, const WaveletFilterPair& filt,
                                   bool keep_details = true) {
    std::vector<double> a = pyr.approx;
    for (std::size_t i = 0; i < pyr.details.size(); ++i)
        a = idwt_single(a, keep_details ? &pyr.details[i] : nullptr, filt, pyr.lengths[i]);
    return a;
}

// Denoise: multilevel DWT, zero all detail bands, reconstruct.
inline std::vector<double> lowpass_reconstruct(const std::vector<double>& signal,
                                               const DenoiseSpec& spec) {
    return inverse(dwt_multilevel(signal, spec), spec.filter, false);
}

inline WaveletFilterPair WaveletFilterPair::from_taps(std::string name,
                                                      std::vector<double> lo_d,
                                                      std::vector<double> hi_d,
                                                      std::vector<double> lo_r,
                                                      std::vector<double> hi_r) {
    WaveletFilterPair filt;
    filt.name = std::move(name);
    filt.lo_d = std::move(lo_d);
    filt.hi_d = std::move(hi_d);
    filt.lo_r = std::move(lo_r);
    filt.hi_r = std::move(hi_r);
    const std::size_t F = filt.lo_d.size();
    if (F < 2 || filt.hi_d.size() != F || filt.lo_r.size() != F || filt.hi_r.size() != F)
        throw std::invalid_argument("WaveletFilterPair: tap arrays must share one length >= 2");

    // Perfect-reconstruction check on impulse inputs.
    const std::size_t n = 2 * F;
    std::vector<double> ca, cd;
    for (std::size_t pos : {std::size_t{0}, F, n - 1}) {
        std::vector<double> x(n, 0.0);
        x[pos] = 1.0;
        dwt_single(x, filt, ca, cd);
        const std::vector<double> xr = idwt_single(ca, &cd, filt, n);
        for (std::size_t i = 0; i < n; ++i)
            if (std::abs(xr[i] - x[i]) > 1e-10)
                throw std::runtime_error("WaveletFilterPair '" + filt.name +
                                         "': perfect-reconstruction check failed");
    }
    return filt;
}

namespace detail {

inline std::map<std::string, WaveletFilterPair, std::less<>> parse_taps_text(
    std::string_view text) {
    std::map<std::string, WaveletFilterPair, std::less<>> banks;
    std::istringstream in{std::string(text)};
    std::string line, pending_name;
    std::size_t pending_count = 0;
    std::map<std::string, std::vector<double>> arrays;

    auto flush = [&]() {
        if (pending_name.empty()) return;
        for (const char* key : {"lo_d", "hi_d", "lo_r", "hi_r"}) {
            auto it = arrays.find(key);
            if (it == arrays.end() || it->second.size() != pending_count)
                throw std::runtime_error("wavelet table: bank '" + pending_name +
                                         "' missing or mis-sized array " + key);
        }
        banks.emplace(pending_name,
                      WaveletFilterPair::from_taps(pending_name, arrays["lo_d"], arrays["hi_d"],
                                                   arrays["lo_r"], arrays["hi_r"]));
        pending_name.clear();
        arrays.clear();
    };

    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string tok;
        ls >> tok;
        if (tok == "format") {
            int ver = 0;
            ls >> ver;
            if (ver != 1) throw std::runtime_error("wavelet table: unsupported format version");
        } else if (tok == "wavelet") {
            flush();
            ls >> pending_name >> pending_count;
            if (pending_name.empty() || pending_count < 2)
                throw std::runtime_error("wavelet table: malformed bank header");
        } else if (tok == "lo_d" || tok == "hi_d" || tok == "lo_r" || tok == "hi_r") {
            std::vector<double> vals;
            double v;
            while (ls >> v) vals.push_back(v);
            arrays[tok] = std::move(vals);
        } else {
            throw std::runtime_error("wavelet table: unexpected line '" + line + "'");
        }
    }
    flush();
    return banks;
}

}  // namespace detail

inline const WaveletFilterPair& WaveletFilterPair::builtin(std::string_view name) {
    static const auto banks = detail::parse_taps_text(detail::kWaveletTapsText);
    const auto it = banks.find(name);
    if (it == banks.end())
        throw std::invalid_argument("unknown wavelet '" + std::string(name) + "'");
    return it->second;
}

}  // namespace evfocus
