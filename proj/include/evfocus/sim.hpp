// Physics-based focus-sweep simulator: scene image -> defocus blur stack ->
// log intensity -> threshold-crossing event generation, with known
// ground-truth focus time and optional noise injection (dark counts,
// periodic frame-capture bursts, stroboscopic illumination).
#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "evfocus/core.hpp"

namespace evfocus::sim {

// Linear light intensity on the sensor plane, row-major, strictly positive
// so the log map is defined everywhere.
struct Scene {
    int width = 0;
    int height = 0;
    std::vector<double> intensity;

    double at(int x, int y) const { return intensity[static_cast<std::size_t>(y) * width + x]; }
    double& at(int x, int y) { return intensity[static_cast<std::size_t>(y) * width + x]; }

    static Scene uniform(int w, int h, double value) {
        return Scene{w, h, std::vector<double>(static_cast<std::size_t>(w) * h, value)};
    }
    // Vertical step edge at w/2: lo on the left, hi on the right.
    static Scene step(int w, int h, double lo, double hi) {
        Scene s = uniform(w, h, lo);
        for (int y = 0; y < h; ++y)
            for (int x = w / 2; x < w; ++x) s.at(x, y) = hi;
        return s;
    }
    // Vertical stripes with the given full period in pixels.
    static Scene bars(int w, int h, int period, double lo, double hi) {
        Scene s = uniform(w, h, lo);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                if (x % period >= period / 2) s.at(x, y) = hi;
        return s;
    }
    // Text-like checkerboard of cell x cell blocks.
    static Scene checker(int w, int h, int cell, double lo, double hi) {
        Scene s = uniform(w, h, lo);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                if (((x / cell) + (y / cell)) % 2 == 1) s.at(x, y) = hi;
        return s;
    }
    // Binary PGM (P5), 8- or 16-bit; values are clamped below by
    // intensity_floor so the log map stays defined on black pixels.
    static Scene from_pgm(const std::string& path, double intensity_floor = 1.0);
};

struct OpticsConfig {
    double f = 35000.0;        // focal length, um
    double u = 2.0e6;          // object distance, um
    double D = 25000.0;        // exit-pupil diameter, um (35 mm at F1.4)
    double pixel_pitch = 18.5; // um; the blur kernel scale is 1/pixel_pitch
    double v0 = 0.0;           // ideal image distance, um

    static OpticsConfig make(double f, double u, double D, double pixel_pitch) {
        OpticsConfig o{f, u, D, pixel_pitch, 0.0};
        o.v0 = 1.0 / (1.0 / f - 1.0 / u);
        return o;
    }
    void check() const {
        if (!(u > f && f > 0.0)) throw std::invalid_argument("optics: need u > f > 0");
        if (!(D > 0.0) || !(pixel_pitch > 0.0))
            throw std::invalid_argument("optics: D and pixel_pitch must be positive");
        const double ideal = 1.0 / (1.0 / f - 1.0 / u);
        if (std::abs(v0 - ideal) > 1e-6 * std::abs(ideal))
            throw std::invalid_argument("optics: stored v0 inconsistent with f and u");
    }
};

// Image-plane sweep kinematics: defocus dv moves linearly from dv_start to
// dv_end at `speed` um/s across `steps` blur frames.
struct SweepConfig {
    double dv_start = -300.0;  // um
    double dv_end = 300.0;     // um
    double speed = 10000.0;    // um/s
    int steps = 601;
    std::uint64_t t_start = 0; // us

    void check() const {
        if (!(dv_start < dv_end)) throw std::invalid_argument("sweep: dv_start must be < dv_end");
        if (!(speed > 0.0)) throw std::invalid_argument("sweep: speed must be positive");
        if (steps < 3) throw std::invalid_argument("sweep: need at least 3 steps");
    }
};

struct NoiseConfig {
    double dark_rate_hz = 0.0;  // per-pixel Poisson rate
    struct {
        double period_s = 0.0;      // 0 disables
        int amplitude_events = 0;   // events per burst
    } aps_spike;
    struct {
        double freq_hz = 0.0;   // 0 disables
        double log_depth = 0.0; // square-wave amplitude in log-intensity units
    } strobe;

    bool any() const {
        return dark_rate_hz > 0.0 ||
               (aps_spike.period_s > 0.0 && aps_spike.amplitude_events > 0) ||
               (strobe.freq_hz > 0.0 && strobe.log_depth > 0.0);
    }
};

struct EventGenConfig {
    double c_pos = 0.2;  // log-intensity thresholds
    double c_neg = 0.2;
    NoiseConfig noise;
    // Default: the reference level advances by whole threshold multiples so
    // sub-threshold changes accumulate across steps. The alternative snaps
    // the reference to the latest log intensity after each step.
    bool snap_to_latest = false;
    std::uint64_t seed = 0;

    void check() const {
        if (!(c_pos > 0.0 && c_neg > 0.0))
            throw std::invalid_argument("eventgen: thresholds must be positive");
        if (noise.dark_rate_hz < 0.0 || noise.aps_spike.period_s < 0.0 ||
            noise.aps_spike.amplitude_events < 0 || noise.strobe.freq_hz < 0.0 ||
            noise.strobe.log_depth < 0.0)
            throw std::invalid_argument("eventgen: noise rates must be nonnegative");
    }
};

// Geometric dispersion-circle radius for defocus dv.
inline double blur_radius(double dv, double v0, double D) {
    return std::abs(dv) * D / (2.0 * v0);
}

namespace detail {

// SplitMix64: tiny counter-based generator; every noise source derives an
// independent stream from (seed, tag, key), so results do not depend on
// evaluation order.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t s) : state(s) {}
    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    bool coin() { return (next() & 1) != 0; }
};

inline SplitMix64 stream_rng(std::uint64_t seed, std::uint64_t tag, std::uint64_t key) {
    SplitMix64 mixer(seed ^ (tag * 0x9E3779B97F4A7C15ULL));
    const std::uint64_t a = mixer.next();
    SplitMix64 mixer2(a ^ key);
    return SplitMix64(mixer2.next());
}

// Portable Poisson draw (Knuth's product method, chunked so exp(-lambda)
// never underflows). Adequate for the modest per-pixel rates used here.
inline long poisson_draw(SplitMix64& rng, double lambda) {
    long total = 0;
    while (lambda > 0.0) {
        const double chunk = std::min(lambda, 16.0);
        const double limit = std::exp(-chunk);
        double p = 1.0;
        long k = -1;
        do {
            ++k;
            p *= rng.uniform();
        } while (p > limit);
        total += k;
        lambda -= chunk;
    }
    return total;
}

inline std::vector<double> blur_axis(const std::vector<double>& src, int w, int h,
                                     const std::vector<double>& kernel, bool horizontal) {
    const int R = static_cast<int>(kernel.size() / 2);
    std::vector<double> out(src.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double s = 0.0;
            for (int i = -R; i <= R; ++i) {
                int xx = x, yy = y;
                if (horizontal)
                    xx = std::clamp(x + i, 0, w - 1);  // replicate edge
                else
                    yy = std::clamp(y + i, 0, h - 1);
                s += kernel[static_cast<std::size_t>(i + R)] *
                     src[static_cast<std::size_t>(yy) * w + xx];
            }
            out[static_cast<std::size_t>(y) * w + x] = s;
        }
    }
    return out;
}

}  // namespace detail

// Separable Gaussian blur with standard deviation a (pixels); kernel
// truncated at radius ceil(4a) and renormalized to unit sum; replicate-edge
// padding; a = 0 returns the image unchanged.
inline std::vector<double> gaussian_blur(const std::vector<double>& image, int width,
                                         int height, double a) {
    if (a < 0.0) throw std::invalid_argument("gaussian_blur: a must be >= 0");
    if (image.size() != static_cast<std::size_t>(width) * height)
        throw std::invalid_argument("gaussian_blur: size mismatch");
    if (a == 0.0) return image;

    const int R = static_cast<int>(std::ceil(4.0 * a));
    std::vector<double> kernel(static_cast<std::size_t>(2 * R + 1));
    double sum = 0.0;
    for (int i = -R; i <= R; ++i) {
        const double w = std::exp(-(static_cast<double>(i) * i) / (2.0 * a * a));
        kernel[static_cast<std::size_t>(i + R)] = w;
        sum += w;
    }
    for (double& w : kernel) w /= sum;

    std::vector<double> tmp = detail::blur_axis(image, width, height, kernel, true);
    return detail::blur_axis(tmp, width, height, kernel, false);
}

inline std::vector<double> gaussian_blur(const Scene& scene, double a) {
    return gaussian_blur(scene.intensity, scene.width, scene.height, a);
}

struct SweepResult {
    EventStream stream;
    double ground_truth_time_us = 0.0;
    // One (timestamp, dv) pair per step; doubles as a synthetic calibration
    // track for timestamp->position mapping.
    std::vector<std::pair<std::uint64_t, double>> track;
};

EventStream inject_noise(const EventStream& stream, const EventGenConfig& gen,
                         std::uint64_t t_start, std::uint64_t t_end, std::uint64_t seed);

// Runs the sweep: for each step j, blur the scene by a_j = blur_radius(dv_j)
// / pixel_pitch, take logs, and emit floor(|dL|/c) events per pixel against
// a per-pixel reference level initialized from the first step. Events of one
// pixel-step share the step timestamp; pixels emit in row-major order.
// Symmetric sweeps reuse blurred frames across mirrored steps, which makes
// the log-image symmetry about dv = 0 exact.
inline SweepResult simulate_sweep(const Scene& scene, const OpticsConfig& optics,
                                  const SweepConfig& sweep, const EventGenConfig& gen,
                                  const Roi& roi) {
    if (scene.width < 8 || scene.height < 8)
        throw std::invalid_argument("simulate_sweep: scene must be at least 8x8");
    for (double v : scene.intensity)
        if (!(v > 0.0)) throw std::runtime_error("log undefined");
    optics.check();
    sweep.check();
    gen.check();

    SweepResult result;
    result.stream.sensor = SensorGeometry{scene.width, scene.height};
    if (!roi.inside(result.stream.sensor))
        throw std::invalid_argument("simulate_sweep: roi outside scene");

    const int steps = sweep.steps;
    const double span = sweep.dv_end - sweep.dv_start;
    std::vector<double> dv(static_cast<std::size_t>(steps));
    for (int j = 0; j < steps; ++j)
        dv[static_cast<std::size_t>(j)] = sweep.dv_start + span * j / (steps - 1);
    if (std::abs(sweep.dv_start + sweep.dv_end) <= 1e-9 * span)
        for (int j = steps - 1; j >= (steps + 1) / 2; --j)
            dv[static_cast<std::size_t>(j)] = -dv[static_cast<std::size_t>(steps - 1 - j)];

    result.ground_truth_time_us =
        static_cast<double>(sweep.t_start) + (0.0 - sweep.dv_start) / sweep.speed * 1e6;

    // Blurred log frames keyed by |dv|; mirrored steps share bit-identical
    // frames.
    std::map<double, std::vector<double>> log_cache;
    auto log_frame = [&](double dvj) -> const std::vector<double>& {
        const double key = std::abs(dvj);
        auto it = log_cache.find(key);
        if (it != log_cache.end()) return it->second;
        const double a = blur_radius(key, optics.v0, optics.D) / optics.pixel_pitch;
        std::vector<double> img = gaussian_blur(scene, a);
        for (double& v : img) v = std::log(v);
        return log_cache.emplace(key, std::move(img)).first->second;
    };

    std::vector<double> L_old = log_frame(dv[0]);  // reference level starts at frame 0
    result.track.reserve(static_cast<std::size_t>(steps));

    for (int j = 0; j < steps; ++j) {
        const double dvj = dv[static_cast<std::size_t>(j)];
        const std::uint64_t tj =
            sweep.t_start +
            static_cast<std::uint64_t>(std::llround((dvj - sweep.dv_start) / sweep.speed * 1e6));
        result.track.emplace_back(tj, dvj);
        if (j == 0) continue;

        const std::vector<double>& L = log_frame(dvj);
        for (int y = roi.y0; y < roi.y0 + roi.h; ++y) {
            for (int x = roi.x0; x < roi.x0 + roi.w; ++x) {
                const std::size_t p = static_cast<std::size_t>(y) * scene.width + x;
                const double dL = L[p] - L_old[p];
                long m = 0;
                Polarity pol = Polarity::Positive;
                if (dL > 0.0) {
                    m = static_cast<long>(std::floor(dL / gen.c_pos));
                    pol = Polarity::Positive;
                    L_old[p] += static_cast<double>(m) * gen.c_pos;
                } else if (dL < 0.0) {
                    m = static_cast<long>(std::floor(-dL / gen.c_neg));
                    pol = Polarity::Negative;
                    L_old[p] -= static_cast<double>(m) * gen.c_neg;
                }
                if (gen.snap_to_latest) L_old[p] = L[p];
                for (long e = 0; e < m; ++e)
                    result.stream.events.push_back(Event{tj, static_cast<std::uint16_t>(x),
                                                         static_cast<std::uint16_t>(y), pol});
            }
        }
    }

    if (gen.noise.any()) {
        const std::uint64_t t_end = result.track.back().first + 1;
        result.stream = inject_noise(result.stream, gen, sweep.t_start, t_end, gen.seed);
    }
    return result;
}

// Adds (a) per-pixel Poisson dark events with random polarity, (b) periodic
// mixed-polarity bursts at random pixels, (c) a global stroboscopic
// log-intensity square wave pushed through the same threshold rule (counts
// computed once per toggle, identical for every pixel). Output is re-sorted
// by timestamp (stable), and is a pure function of (stream, gen, window,
// seed).
inline EventStream inject_noise(const EventStream& stream, const EventGenConfig& gen,
                                std::uint64_t t_start, std::uint64_t t_end,
                                std::uint64_t seed) {
    gen.check();
    if (t_end <= t_start) throw std::invalid_argument("inject_noise: empty window");
    EventStream out = stream;
    const double dur_s = static_cast<double>(t_end - t_start) * 1e-6;
    const int W = stream.sensor.width, H = stream.sensor.height;

    if (gen.noise.dark_rate_hz > 0.0) {
        const double lambda = gen.noise.dark_rate_hz * dur_s;
        for (int y = 0; y < H; ++y) {
            for (int x = 0; x < W; ++x) {
                const std::uint64_t key = static_cast<std::uint64_t>(y) * W + x;
                detail::SplitMix64 rng = detail::stream_rng(seed, 0xDA, key);
                const long cnt = detail::poisson_draw(rng, lambda);
                for (long i = 0; i < cnt; ++i) {
                    const std::uint64_t t =
                        t_start + static_cast<std::uint64_t>(rng.uniform() *
                                                             static_cast<double>(t_end - t_start));
                    out.events.push_back(Event{t, static_cast<std::uint16_t>(x),
                                               static_cast<std::uint16_t>(y),
                                               rng.coin() ? Polarity::Positive
                                                          : Polarity::Negative});
                }
            }
        }
    }

    if (gen.noise.aps_spike.period_s > 0.0 && gen.noise.aps_spike.amplitude_events > 0) {
        const double period_us = gen.noise.aps_spike.period_s * 1e6;
        for (std::uint64_t k = 0;; ++k) {
            const double tk = static_cast<double>(t_start) + static_cast<double>(k) * period_us;
            if (tk >= static_cast<double>(t_end)) break;
            detail::SplitMix64 rng = detail::stream_rng(seed, 0xA5, k);
            const std::uint64_t t = static_cast<std::uint64_t>(tk);
            for (int i = 0; i < gen.noise.aps_spike.amplitude_events; ++i) {
                const int x = static_cast<int>(rng.next() % static_cast<std::uint64_t>(W));
                const int y = static_cast<int>(rng.next() % static_cast<std::uint64_t>(H));
                out.events.push_back(Event{t, static_cast<std::uint16_t>(x),
                                           static_cast<std::uint16_t>(y),
                                           rng.coin() ? Polarity::Positive : Polarity::Negative});
            }
        }
    }

    if (gen.noise.strobe.freq_hz > 0.0 && gen.noise.strobe.log_depth > 0.0) {
        const double half_period_us = 0.5e6 / gen.noise.strobe.freq_hz;
        const double d = gen.noise.strobe.log_depth;
        double level = 0.0, ref = 0.0;  // shared virtual strobe channel
        for (std::uint64_t m = 0;; ++m) {
            const double tm =
                static_cast<double>(t_start) + static_cast<double>(m) * half_period_us;
            if (tm >= static_cast<double>(t_end)) break;
            level = (m % 2 == 0) ? d : 0.0;  // rising on even toggles
            const double dL = level - ref;
            long cnt = 0;
            Polarity pol = Polarity::Positive;
            if (dL > 0.0) {
                cnt = static_cast<long>(std::floor(dL / gen.c_pos));
                pol = Polarity::Positive;
                ref += static_cast<double>(cnt) * gen.c_pos;
            } else if (dL < 0.0) {
                cnt = static_cast<long>(std::floor(-dL / gen.c_neg));
                pol = Polarity::Negative;
                ref -= static_cast<double>(cnt) * gen.c_neg;
            }
            if (cnt <= 0) continue;
            const std::uint64_t t = static_cast<std::uint64_t>(tm);
            for (int y = 0; y < H; ++y)
                for (int x = 0; x < W; ++x)
                    for (long i = 0; i < cnt; ++i)
                        out.events.push_back(Event{t, static_cast<std::uint16_t>(x),
                                                   static_cast<std::uint16_t>(y), pol});
        }
    }

    std::stable_sort(out.events.begin(), out.events.end(),
                     [](const Event& a, const Event& b) { return a.t < b.t; });
    return out;
}

inline Scene Scene::from_pgm(const std::string& path, double intensity_floor) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open PGM file: " + path);
    std::string magic;
    in >> magic;
    if (magic != "P5") throw std::runtime_error("unsupported PGM (need binary P5): " + path);

    auto next_token = [&in, &path]() -> long {
        // PGM headers allow '#' comments between tokens.
        while (true) {
            const int c = in.peek();
            if (c == '#') {
                std::string junk;
                std::getline(in, junk);
            } else if (c != EOF && std::isspace(static_cast<unsigned char>(c))) {
                in.get();
            } else {
                break;
            }
        }
        long v = 0;
        if (!(in >> v)) throw std::runtime_error("malformed PGM header: " + path);
        return v;
    };

    const long w = next_token(), h = next_token(), maxval = next_token();
    if (w < 1 || h < 1 || maxval < 1 || maxval > 65535)
        throw std::runtime_error("malformed PGM header: " + path);
    in.get();  // single whitespace after maxval

    Scene scene = Scene::uniform(static_cast<int>(w), static_cast<int>(h), 0.0);
    const bool wide = maxval > 255;
    const std::size_t npx = static_cast<std::size_t>(w) * h;
    std::vector<unsigned char> buf(npx * (wide ? 2 : 1));
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (static_cast<std::size_t>(in.gcount()) != buf.size())
        throw std::runtime_error("truncated PGM data: " + path);
    for (std::size_t i = 0; i < npx; ++i) {
        const double v = wide ? static_cast<double>(buf[2 * i] << 8 | buf[2 * i + 1])
                              : static_cast<double>(buf[i]);
        scene.intensity[i] = std::max(v, intensity_floor);
    }
    return scene;
}

}  // namespace evfocus::sim
