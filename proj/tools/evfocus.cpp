// Command-line frontend: simulate focus sweeps, bin event streams into
// polarity-rate sequences, run the focus estimators, benchmark them, and
// score sets of focus reports.
//
// Exit codes: 0 success, 1 pipeline/domain failure, 2 usage or input error.
#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "evfocus/evfocus.hpp"

namespace {

using json = nlohmann::json;
using namespace evfocus;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Format dispatch by extension: ".evaf" is the binary container, anything
// else is the text CSV.
EventStream load_events(const std::string& path, SensorGeometry sensor) {
    try {
        return ends_with(path, ".evaf") ? io::read_events_binary(path)
                                        : io::read_events_text(path, sensor);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
}

void save_events(const EventStream& stream, const std::string& path) {
    if (ends_with(path, ".evaf"))
        io::write_events_binary(stream, path);
    else
        io::write_events_text(stream, path);
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open: " + path);
    try {
        return json::parse(in);
    } catch (const std::exception& e) {
        throw UsageError("bad JSON in " + path + ": " + e.what());
    }
}

io::Calibration load_calibration(const std::string& path) {
    try {
        return io::read_calibration_csv(path);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
}

const WaveletFilterPair& wavelet_or_usage(const std::string& name) {
    try {
        return WaveletFilterPair::builtin(name);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
}

SensorGeometry parse_sensor(const std::string& text) {
    SensorGeometry s;
    if (text.empty()) return s;
    if (std::sscanf(text.c_str(), "%dx%d", &s.width, &s.height) != 2 || !s.valid())
        throw UsageError("bad --sensor (expected WxH): " + text);
    return s;
}

Roi parse_roi(const std::string& text, SensorGeometry sensor) {
    if (text.empty()) return Roi::full(sensor);
    Roi roi;
    if (std::sscanf(text.c_str(), "%d,%d,%d,%d", &roi.x0, &roi.y0, &roi.w, &roi.h) != 4)
        throw UsageError("bad --roi (expected x0,y0,w,h): " + text);
    return roi;
}

NormalizationMode parse_norm(const std::string& name) {
    if (name == "none") return NormalizationMode::None;
    if (name == "unit-sum") return NormalizationMode::UnitSum;
    if (name == "unit-max") return NormalizationMode::UnitMax;
    throw UsageError("unknown normalization (none|unit-sum|unit-max): " + name);
}

std::uint64_t seed_or_env(const std::optional<std::uint64_t>& opt) {
    if (opt) return *opt;
    if (const char* env = std::getenv("EVFOCUS_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw UsageError(std::string("bad EVFOCUS_SEED value: ") + env);
        }
    }
    return 0;
}

std::pair<std::uint64_t, std::uint64_t> window_or_default(const EventStream& stream,
                                                          std::optional<std::uint64_t> t0,
                                                          std::optional<std::uint64_t> t1) {
    if (!t0 || !t1) {
        if (stream.events.empty())
            throw UsageError("event stream is empty; pass an explicit --t0/--t1 window");
        std::uint64_t lo = stream.events.front().t, hi = lo;
        for (const Event& e : stream.events) {
            lo = std::min(lo, e.t);
            hi = std::max(hi, e.t);
        }
        if (!t0) t0 = lo;
        if (!t1) t1 = hi + 1;
    }
    return {*t0, *t1};
}

double elapsed_ms(std::chrono::steady_clock::time_point from) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - from)
        .count();
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

json diagnostics_json(const FocusResult& res, const EprSequence& seq) {
    json d{{"a_star", res.a_star},
           {"focus_bin", res.focus_bin},
           {"clamped_levels", res.diagnostics.clamped_levels},
           {"degenerate_channel", res.diagnostics.degenerate_channel},
           {"flat_curve", res.diagnostics.flat_curve},
           {"mse_min", res.diagnostics.mse_min},
           {"bins", seq.n()},
           {"dt_us", seq.dt},
           {"t0_us", seq.t0},
           {"partial_final_bin", seq.partial_final_bin}};
    if (res.diagnostics.search) {
        const auto& s = *res.diagnostics.search;
        d["search"] = {{"bracket_lo", s.bracket_lo},
                       {"bracket_hi", s.bracket_hi},
                       {"global_argmax_bin", s.global_argmax_bin},
                       {"evaluations", s.evaluations},
                       {"unimodality_violation", s.unimodality_violation}};
    }
    return d;
}

// ---------------------------------------------------------------- simulate

struct SimulateOpts {
    std::string scene = "step";
    int width = 128, height = 96;
    double lo = 20.0, hi = 200.0;
    int period = 16, cell = 8;
    double f = 35000.0, u = 2.0e6, aperture = 25000.0, pixel_pitch = 18.5;
    double dv_start = -300.0, dv_end = 300.0, speed = 10000.0;
    int steps = 601;
    std::uint64_t t_start = 0;
    double c_pos = 0.2, c_neg = 0.2;
    bool snap_to_latest = false;
    double dark_rate = 0.0, aps_period = 0.0, strobe_freq = 0.0, strobe_depth = 0.0;
    int aps_amplitude = 0;
    std::optional<std::uint64_t> seed;
    std::string roi;
    std::string out;
    std::string truth_out;
    std::string calibration_out;
};

sim::Scene build_scene(const SimulateOpts& o) {
    if (ends_with(o.scene, ".pgm")) {
        try {
            return sim::Scene::from_pgm(o.scene);
        } catch (const std::exception& e) {
            throw UsageError(e.what());
        }
    }
    if (o.scene == "uniform") return sim::Scene::uniform(o.width, o.height, o.hi);
    if (o.scene == "step") return sim::Scene::step(o.width, o.height, o.lo, o.hi);
    if (o.scene == "bars") return sim::Scene::bars(o.width, o.height, o.period, o.lo, o.hi);
    if (o.scene == "checker") return sim::Scene::checker(o.width, o.height, o.cell, o.lo, o.hi);
    throw UsageError("unknown scene (uniform|step|bars|checker|<file>.pgm): " + o.scene);
}

int run_simulate(const SimulateOpts& o) {
    const sim::Scene scene = build_scene(o);
    const sim::OpticsConfig optics =
        sim::OpticsConfig::make(o.f, o.u, o.aperture, o.pixel_pitch);
    sim::SweepConfig sweep;
    sweep.dv_start = o.dv_start;
    sweep.dv_end = o.dv_end;
    sweep.speed = o.speed;
    sweep.steps = o.steps;
    sweep.t_start = o.t_start;
    sim::EventGenConfig gen;
    gen.c_pos = o.c_pos;
    gen.c_neg = o.c_neg;
    gen.snap_to_latest = o.snap_to_latest;
    gen.seed = seed_or_env(o.seed);
    gen.noise.dark_rate_hz = o.dark_rate;
    gen.noise.aps_spike.period_s = o.aps_period;
    gen.noise.aps_spike.amplitude_events = o.aps_amplitude;
    gen.noise.strobe.freq_hz = o.strobe_freq;
    gen.noise.strobe.log_depth = o.strobe_depth;

    const SensorGeometry sensor{scene.width, scene.height};
    const Roi roi = parse_roi(o.roi, sensor);

    const sim::SweepResult res = sim::simulate_sweep(scene, optics, sweep, gen, roi);
    save_events(res.stream, o.out);
    if (res.stream.events.empty())
        std::cerr << "warning: simulation produced no events (textureless scene?)\n";

    json sidecar{
        {"ground_truth_time_us", res.ground_truth_time_us},
        {"events", res.stream.events.size()},
        {"out", o.out},
        {"sensor", {{"width", scene.width}, {"height", scene.height}}},
        {"t_start_us", sweep.t_start},
        {"t_end_us", res.track.back().first + 1},
        {"config",
         {{"scene", o.scene},
          {"optics",
           {{"f_um", optics.f},
            {"u_um", optics.u},
            {"aperture_um", optics.D},
            {"pixel_pitch_um", optics.pixel_pitch},
            {"v0_um", optics.v0}}},
          {"sweep",
           {{"dv_start_um", sweep.dv_start},
            {"dv_end_um", sweep.dv_end},
            {"speed_um_per_s", sweep.speed},
            {"steps", sweep.steps}}},
          {"thresholds", {{"c_pos", gen.c_pos}, {"c_neg", gen.c_neg}}},
          {"snap_to_latest", gen.snap_to_latest},
          {"noise",
           {{"dark_rate_hz", gen.noise.dark_rate_hz},
            {"aps_period_s", gen.noise.aps_spike.period_s},
            {"aps_amplitude_events", gen.noise.aps_spike.amplitude_events},
            {"strobe_freq_hz", gen.noise.strobe.freq_hz},
            {"strobe_log_depth", gen.noise.strobe.log_depth}}},
          {"seed", gen.seed}}}};

    const std::string truth_path = o.truth_out.empty() ? o.out + ".json" : o.truth_out;
    {
        std::ofstream out(truth_path);
        if (!out) throw UsageError("cannot open for writing: " + truth_path);
        out << sidecar.dump(2) << '\n';
    }
    if (!o.calibration_out.empty()) {
        io::Calibration cal;
        for (const auto& [t, dv] : res.track)
            if (cal.samples.empty() || t > cal.samples.back().first)
                cal.samples.emplace_back(t, dv);
        cal.check();
        io::write_calibration_csv(cal, o.calibration_out);
    }
    std::cout << sidecar.dump(2) << '\n';
    return 0;
}

// --------------------------------------------------------------------- bin

struct BinOpts {
    std::string in;
    std::string sensor;
    std::string roi;
    std::uint64_t dt = 1000;
    std::optional<std::uint64_t> t0, t1;
    std::string normalize = "none";
    std::string out;
};

int run_bin(const BinOpts& o) {
    const EventStream stream = load_events(o.in, parse_sensor(o.sensor));
    const Roi roi = parse_roi(o.roi, stream.sensor);
    const auto [t0, t1] = window_or_default(stream, o.t0, o.t1);
    EprSequence seq = bin_events(stream, roi, o.dt, t0, t1);
    const NormalizationMode mode = parse_norm(o.normalize);
    if (mode != NormalizationMode::None) seq = normalize(seq, mode);

    const json j{{"t0_us", seq.t0},
                 {"dt_us", seq.dt},
                 {"n", seq.n()},
                 {"partial_final_bin", seq.partial_final_bin},
                 {"normalize", o.normalize},
                 {"per", seq.per},
                 {"ner", seq.ner}};
    if (o.out.empty()) {
        std::cout << j.dump(2) << '\n';
    } else {
        std::ofstream out(o.out);
        if (!out) throw UsageError("cannot open for writing: " + o.out);
        out << j.dump(2) << '\n';
    }
    return 0;
}

// ------------------------------------------------------------------- focus

struct FocusOpts {
    std::string in;
    std::string method = "pbf";
    std::string sensor;
    std::string roi;
    std::uint64_t dt = 1000;
    std::optional<std::uint64_t> t0, t1;
    std::string wavelet = "dmey";
    int levels = 6;
    double k = 0.5;
    std::string normalize = "unit-sum";
    double window_s = 0.055;
    int tol_bins = 1;
    std::string truth;
    std::string calibration;
    std::string dump_curves;
    bool table = false;
};

FocusResult run_method(const FocusOpts& o, const EprSequence& seq) {
    if (o.method == "pbf")
        return pbf_focus(seq, DenoiseSpec{wavelet_or_usage(o.wavelet), o.levels},
                         parse_norm(o.normalize), o.k);
    if (o.method == "no-filter") return ablate_no_filter(seq, parse_norm(o.normalize), o.k);
    if (o.method == "no-mse")
        return ablate_no_mse(seq, DenoiseSpec{wavelet_or_usage(o.wavelet), o.levels});
    if (o.method == "egs") return egs_focus(er_sequence(seq), o.window_s, o.tol_bins);
    throw UsageError("unknown method (pbf|egs|no-filter|no-mse): " + o.method);
}

int run_focus(const FocusOpts& o) {
    const EventStream stream = load_events(o.in, parse_sensor(o.sensor));
    const Roi roi = parse_roi(o.roi, stream.sensor);
    const auto [t0, t1] = window_or_default(stream, o.t0, o.t1);
    const EprSequence seq = bin_events(stream, roi, o.dt, t0, t1);

    const auto start = std::chrono::steady_clock::now();
    const FocusResult res = run_method(o, seq);
    const double ms = elapsed_ms(start);

    io::FocusReport report;
    report.method = o.method;
    report.focus_time_us = res.focus_time_us;
    report.runtime_ms = ms;
    report.diagnostics = diagnostics_json(res, seq);

    std::optional<io::Calibration> cal;
    if (!o.calibration.empty()) cal = load_calibration(o.calibration);
    if (cal) report.position_um = io::time_to_position(*cal, res.focus_time_us);
    if (!o.truth.empty()) {
        const json truth = load_json_file(o.truth);
        if (!truth.contains("ground_truth_time_us"))
            throw UsageError("truth sidecar lacks ground_truth_time_us: " + o.truth);
        const double truth_time = truth["ground_truth_time_us"].get<double>();
        report.diagnostics["truth_time_us"] = truth_time;
        report.diagnostics["error_us"] = std::abs(res.focus_time_us - truth_time);
        if (cal)
            report.error_um = std::abs(io::time_to_position(*cal, res.focus_time_us) -
                                       io::time_to_position(*cal, truth_time));
    }

    if (!o.dump_curves.empty()) {
        if (!res.diagnostics.curve)
            throw UsageError("--dump-curves needs a curve-producing method (pbf|no-filter)");
        std::ofstream out(o.dump_curves);
        if (!out) throw UsageError("cannot open for writing: " + o.dump_curves);
        out << "a,mse\n";
        out.precision(17);
        const MseCurve& c = *res.diagnostics.curve;
        for (std::size_t i = 0; i < c.values.size(); ++i)
            out << c.a_min_index + static_cast<int>(i) << ',' << c.values[i] << '\n';
    }

    if (o.table) {
        auto opt = [](const std::optional<double>& v) {
            char buf[32];
            if (!v) return std::string("-");
            std::snprintf(buf, sizeof buf, "%.3f", *v);
            return std::string(buf);
        };
        std::printf("%-10s %16s %14s %12s %12s\n", "method", "focus_time_us", "position_um",
                    "error_um", "runtime_ms");
        std::printf("%-10s %16.3f %14s %12s %12.3f\n", report.method.c_str(),
                    report.focus_time_us, opt(report.position_um).c_str(),
                    opt(report.error_um).c_str(), report.runtime_ms);
    } else {
        std::cout << io::to_json(report).dump(2) << '\n';
    }
    return 0;
}

// ------------------------------------------------------------------- bench

struct BenchOpts {
    std::string in;
    std::string sensor;
    std::string roi;
    std::uint64_t dt = 1000;
    std::optional<std::uint64_t> t0, t1;
    std::string wavelet = "dmey";
    int levels = 6;
    double k = 0.5;
    std::string normalize = "unit-sum";
    int reps = 15;
};

int run_bench(const BenchOpts& o) {
    if (o.reps < 10) throw UsageError("--reps must be >= 10");
    const EventStream stream = load_events(o.in, parse_sensor(o.sensor));
    const Roi roi = parse_roi(o.roi, stream.sensor);
    const auto [t0, t1] = window_or_default(stream, o.t0, o.t1);
    const DenoiseSpec spec{wavelet_or_usage(o.wavelet), o.levels};
    const NormalizationMode norm = parse_norm(o.normalize);

    const EprSequence seq = bin_events(stream, roi, o.dt, t0, t1);
    std::vector<double> core_ms, end_to_end_ms;
    double sink = 0.0;  // keeps the measured calls observable
    for (int r = 0; r < o.reps; ++r) {
        auto t = std::chrono::steady_clock::now();
        sink += pbf_focus(seq, spec, norm, o.k).focus_bin;
        core_ms.push_back(elapsed_ms(t));

        t = std::chrono::steady_clock::now();
        const EprSequence fresh = bin_events(stream, roi, o.dt, t0, t1);
        sink += pbf_focus(fresh, spec, norm, o.k).focus_bin;
        end_to_end_ms.push_back(elapsed_ms(t));
    }

    const json j{{"events", stream.events.size()},
                 {"bins", seq.n()},
                 {"reps", o.reps},
                 {"wavelet", o.wavelet},
                 {"levels", o.levels},
                 {"core_ms_median", median(core_ms)},
                 {"end_to_end_ms_median", median(end_to_end_ms)},
                 {"focus_bin", sink / (2.0 * o.reps)}};
    std::cout << j.dump(2) << '\n';
    return 0;
}

// -------------------------------------------------------------------- eval

struct EvalOpts {
    std::vector<std::string> reports;
    bool table = false;
};

int run_eval(const EvalOpts& o) {
    struct Acc {
        int count = 0;
        double abs_sum = 0.0, sq_sum = 0.0;
    };
    std::map<std::string, Acc> by_method;
    Acc overall;
    int skipped = 0;

    for (const std::string& path : o.reports) {
        io::FocusReport r;
        try {
            r = io::report_from_json(load_json_file(path));
        } catch (const UsageError&) {
            throw;
        } catch (const std::exception& e) {
            throw UsageError(path + ": " + e.what());
        }
        if (!r.error_um) {
            ++skipped;
            continue;
        }
        for (Acc* acc : {&by_method[r.method], &overall}) {
            acc->count += 1;
            acc->abs_sum += std::abs(*r.error_um);
            acc->sq_sum += *r.error_um * *r.error_um;
        }
    }
    if (overall.count == 0) throw UsageError("no report carried error_um");

    const auto stats = [](const Acc& a) {
        return json{{"count", a.count},
                    {"mae_um", a.abs_sum / a.count},
                    {"rmse_um", std::sqrt(a.sq_sum / a.count)}};
    };
    json methods = json::object();
    for (const auto& [name, acc] : by_method) methods[name] = stats(acc);
    const json j{{"methods", methods}, {"overall", stats(overall)}, {"skipped", skipped}};

    if (o.table) {
        std::printf("%-12s %8s %12s %12s\n", "method", "count", "mae_um", "rmse_um");
        for (const auto& [name, acc] : by_method)
            std::printf("%-12s %8d %12.4f %12.4f\n", name.c_str(), acc.count,
                        acc.abs_sum / acc.count, std::sqrt(acc.sq_sum / acc.count));
        std::printf("%-12s %8d %12.4f %12.4f\n", "overall", overall.count,
                    overall.abs_sum / overall.count, std::sqrt(overall.sq_sum / overall.count));
    } else {
        std::cout << j.dump(2) << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"event-camera focus analysis"};
    app.require_subcommand(1);

    SimulateOpts so;
    CLI::App* sim_cmd = app.add_subcommand("simulate", "synthesize a focus-sweep event stream");
    sim_cmd->add_option("--scene", so.scene, "uniform|step|bars|checker or a .pgm file");
    sim_cmd->add_option("--width", so.width, "scene width, px");
    sim_cmd->add_option("--height", so.height, "scene height, px");
    sim_cmd->add_option("--lo", so.lo, "dark intensity");
    sim_cmd->add_option("--hi", so.hi, "bright intensity");
    sim_cmd->add_option("--period", so.period, "bars period, px");
    sim_cmd->add_option("--cell", so.cell, "checker cell, px");
    sim_cmd->add_option("--focal-um", so.f, "focal length, um");
    sim_cmd->add_option("--object-um", so.u, "object distance, um");
    sim_cmd->add_option("--aperture-um", so.aperture, "pupil diameter, um");
    sim_cmd->add_option("--pixel-pitch-um", so.pixel_pitch, "pixel pitch, um");
    sim_cmd->add_option("--dv-start", so.dv_start, "sweep start defocus, um");
    sim_cmd->add_option("--dv-end", so.dv_end, "sweep end defocus, um");
    sim_cmd->add_option("--speed", so.speed, "sweep speed, um/s");
    sim_cmd->add_option("--steps", so.steps, "blur frames along the sweep");
    sim_cmd->add_option("--t-start", so.t_start, "sweep start timestamp, us");
    sim_cmd->add_option("--c-pos", so.c_pos, "positive log threshold");
    sim_cmd->add_option("--c-neg", so.c_neg, "negative log threshold");
    sim_cmd->add_flag("--snap-to-latest", so.snap_to_latest,
                      "reset the pixel reference after each step");
    sim_cmd->add_option("--dark-rate", so.dark_rate, "dark events per pixel per second");
    sim_cmd->add_option("--aps-period", so.aps_period, "frame-capture burst period, s");
    sim_cmd->add_option("--aps-amplitude", so.aps_amplitude, "events per burst");
    sim_cmd->add_option("--strobe-freq", so.strobe_freq, "strobe frequency, Hz");
    sim_cmd->add_option("--strobe-depth", so.strobe_depth, "strobe log-intensity depth");
    sim_cmd->add_option("--seed", so.seed, "noise seed (falls back to EVFOCUS_SEED)");
    sim_cmd->add_option("--roi", so.roi, "emission region x0,y0,w,h");
    sim_cmd->add_option("-o,--out", so.out, "events output (.csv or .evaf)")->required();
    sim_cmd->add_option("--truth-out", so.truth_out, "sidecar JSON path (default <out>.json)");
    sim_cmd->add_option("--calibration-out", so.calibration_out,
                        "write the sweep track as a calibration CSV");

    BinOpts bo;
    CLI::App* bin_cmd = app.add_subcommand("bin", "bin events into polarity-rate sequences");
    bin_cmd->add_option("-i,--in", bo.in, "events file (.csv or .evaf)")->required();
    bin_cmd->add_option("--sensor", bo.sensor, "geometry WxH for text inputs");
    bin_cmd->add_option("--roi", bo.roi, "count region x0,y0,w,h");
    bin_cmd->add_option("--dt", bo.dt, "bin width, us");
    bin_cmd->add_option("--t0", bo.t0, "window start, us (default first event)");
    bin_cmd->add_option("--t1", bo.t1, "window end, us, exclusive (default last event + 1)");
    bin_cmd->add_option("--normalize", bo.normalize, "none|unit-sum|unit-max");
    bin_cmd->add_option("-o,--out", bo.out, "write JSON here instead of stdout");

    FocusOpts fo;
    CLI::App* focus_cmd = app.add_subcommand("focus", "estimate the focus instant");
    focus_cmd->add_option("-i,--in", fo.in, "events file (.csv or .evaf)")->required();
    focus_cmd->add_option("--method", fo.method, "pbf|egs|no-filter|no-mse");
    focus_cmd->add_option("--sensor", fo.sensor, "geometry WxH for text inputs");
    focus_cmd->add_option("--roi", fo.roi, "analysis region x0,y0,w,h");
    focus_cmd->add_option("--dt", fo.dt, "bin width, us");
    focus_cmd->add_option("--t0", fo.t0, "window start, us");
    focus_cmd->add_option("--t1", fo.t1, "window end, us, exclusive");
    focus_cmd->add_option("--wavelet", fo.wavelet, "dmey|db4");
    focus_cmd->add_option("--levels", fo.levels, "decomposition depth");
    focus_cmd->add_option("--k", fo.k, "overlap fraction in (0,1)");
    focus_cmd->add_option("--normalize", fo.normalize, "none|unit-sum|unit-max");
    focus_cmd->add_option("--window", fo.window_s, "egs smoothing window, s");
    focus_cmd->add_option("--tol-bins", fo.tol_bins, "egs bracket tolerance, bins");
    focus_cmd->add_option("--truth", fo.truth, "sidecar JSON with ground_truth_time_us");
    focus_cmd->add_option("--calibration", fo.calibration, "timestamp->position CSV");
    focus_cmd->add_option("--dump-curves", fo.dump_curves, "write the shift-MSE curve as CSV");
    focus_cmd->add_flag("--table", fo.table, "human-readable output");

    BenchOpts eo;
    CLI::App* bench_cmd = app.add_subcommand("bench", "median runtime of the focus core");
    bench_cmd->add_option("-i,--in", eo.in, "events file (.csv or .evaf)")->required();
    bench_cmd->add_option("--sensor", eo.sensor, "geometry WxH for text inputs");
    bench_cmd->add_option("--roi", eo.roi, "analysis region x0,y0,w,h");
    bench_cmd->add_option("--dt", eo.dt, "bin width, us");
    bench_cmd->add_option("--t0", eo.t0, "window start, us");
    bench_cmd->add_option("--t1", eo.t1, "window end, us, exclusive");
    bench_cmd->add_option("--wavelet", eo.wavelet, "dmey|db4");
    bench_cmd->add_option("--levels", eo.levels, "decomposition depth");
    bench_cmd->add_option("--k", eo.k, "overlap fraction in (0,1)");
    bench_cmd->add_option("--normalize", eo.normalize, "none|unit-sum|unit-max");
    bench_cmd->add_option("--reps", eo.reps, "repetitions (>= 10)");

    EvalOpts vo;
    CLI::App* eval_cmd = app.add_subcommand("eval", "aggregate error over focus reports");
    eval_cmd->add_option("reports", vo.reports, "focus report JSON files")->required();
    eval_cmd->add_flag("--table", vo.table, "human-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sim_cmd->parsed()) return run_simulate(so);
        if (bin_cmd->parsed()) return run_bin(bo);
        if (focus_cmd->parsed()) return run_focus(fo);
        if (bench_cmd->parsed()) return run_bench(eo);
        if (eval_cmd->parsed()) return run_eval(vo);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
