#ifndef NFBEAM_EXPERIMENT_HPP
#define NFBEAM_EXPERIMENT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <atomic>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "bench.hpp"
#include "channel.hpp"
#include "cidft.hpp"
#include "codebook.hpp"
#include "geometry.hpp"
#include "random.hpp"

#include <json.hpp>

namespace nfbeam {

// Invalid or inconsistent configuration; maps to process exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite value encountered mid-experiment; maps to process exit code 3.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

enum class SweepKind { Distance, Snr };

constexpr double kDefaultCoverageSin = 0.8660254037844386;  // sqrt(3)/2

struct ExperimentConfig {
    double frequency_hz = 28e9;
    int n_antennas = 256;
    double spacing_over_lambda = 0.5;

    double coverage_sin_min = -kDefaultCoverageSin;
    double coverage_sin_max = kDefaultCoverageSin;

    SweepKind sweep_kind = SweepKind::Distance;
    std::vector<double> distance_points = {3, 5, 7, 10, 15, 20, 25, 30, 35};
    std::vector<double> snr_points = {0, 5, 10, 15, 20};
    int trials = 200;

    double ue_range_min_m = 3.0;
    double ue_range_max_m = 35.0;
    double ue_sin_min = -kDefaultCoverageSin;
    double ue_sin_max = kDefaultCoverageSin;

    double snr_db = 10.0;  // used by the distance sweep

    std::vector<Scheme> schemes = {Scheme::PerfectCSI, Scheme::Exhaustive, Scheme::Hierarchical,
                                   Scheme::FarField, Scheme::CIDFT};
    std::optional<CalibrationError> calibration;

    int hier_levels = 2;
    int hier_grid_x = 25;
    int hier_grid_y = 25;

    std::uint64_t seed = 1;

    ArrayConfig array() const {
        if (!(frequency_hz > 0.0)) throw ConfigError("array.frequency_hz must be positive");
        if (n_antennas < 2) throw ConfigError("array.n_antennas must be at least 2");
        if (!(spacing_over_lambda > 0.0)) throw ConfigError("array.spacing_over_lambda must be positive");
        const double lambda = kSpeedOfLight / frequency_hz;
        return ArrayConfig(frequency_hz, n_antennas, spacing_over_lambda * lambda);
    }

    void validate() const {
        const ArrayConfig cfg = array();
        if (!(coverage_sin_min >= -1.0 && coverage_sin_min < coverage_sin_max && coverage_sin_max <= 1.0))
            throw ConfigError("coverage.sin_min/sin_max must satisfy -1 <= min < max <= 1");
        if (trials < 1) throw ConfigError("sweep.trials must be at least 1");
        if (sweep_kind == SweepKind::Distance && distance_points.empty())
            throw ConfigError("sweep.distance_points must be non-empty");
        if (sweep_kind == SweepKind::Snr && snr_points.empty())
            throw ConfigError("sweep.snr_points must be non-empty");
        for (double d : distance_points)
            if (!(d > 0.0)) throw ConfigError("sweep.distance_points entries must be positive");
        if (!(ue_range_min_m > 0.0) || !(ue_range_max_m >= ue_range_min_m))
            throw ConfigError("ue.range_min_m/range_max_m must satisfy 0 < min <= max");
        if (!(ue_sin_min >= -1.0 && ue_sin_min <= ue_sin_max && ue_sin_max <= 1.0))
            throw ConfigError("ue.sin_min/sin_max must satisfy -1 <= min <= max <= 1");
        if (schemes.empty()) throw ConfigError("schemes must be non-empty");
        if (hier_levels < 1 || hier_grid_x < 1 || hier_grid_y < 1)
            throw ConfigError("hierarchical.levels/grid_x/grid_y must be at least 1");
        if (calibration.has_value()) {
            try {
                calibration->validate();
            } catch (const std::exception& e) {
                throw ConfigError(std::string("calibration: ") + e.what());
            }
        }
        (void)cfg;
    }
};

inline Scheme scheme_from_name(const std::string& name) {
    if (name == "PerfectCSI") return Scheme::PerfectCSI;
    if (name == "Exhaustive") return Scheme::Exhaustive;
    if (name == "Hierarchical") return Scheme::Hierarchical;
    if (name == "FarField") return Scheme::FarField;
    if (name == "CIDFT") return Scheme::CIDFT;
    throw ConfigError("schemes: unknown scheme '" + name + "'");
}

namespace detail {

using nlohmann::json;

inline void reject_unknown(const json& obj, const std::string& section,
                           std::initializer_list<const char*> known) {
    for (const auto& item : obj.items()) {
        bool ok = false;
        for (const char* k : known)
            if (item.key() == k) ok = true;
        if (!ok) throw ConfigError("unknown config key '" + (section.empty() ? item.key() : section + "." + item.key()) + "'");
    }
}

template <typename T>
inline void get_if(const json& obj, const char* key, T& out) {
    if (obj.contains(key)) out = obj.at(key).get<T>();
}

}  // namespace detail

// Parse a JSON config file. Unknown keys are rejected so typos surface as
// config errors instead of silently-used defaults.
inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    ExperimentConfig c;
    try {
        detail::reject_unknown(j, "", {"array", "coverage", "sweep", "ue", "snr_db", "schemes",
                                       "calibration", "hierarchical", "seed"});
        if (j.contains("array")) {
            const auto& a = j.at("array");
            detail::reject_unknown(a, "array", {"frequency_hz", "n_antennas", "spacing_over_lambda"});
            detail::get_if(a, "frequency_hz", c.frequency_hz);
            detail::get_if(a, "n_antennas", c.n_antennas);
            detail::get_if(a, "spacing_over_lambda", c.spacing_over_lambda);
        }
        if (j.contains("coverage")) {
            const auto& v = j.at("coverage");
            detail::reject_unknown(v, "coverage", {"sin_min", "sin_max"});
            detail::get_if(v, "sin_min", c.coverage_sin_min);
            detail::get_if(v, "sin_max", c.coverage_sin_max);
        }
        if (j.contains("sweep")) {
            const auto& v = j.at("sweep");
            detail::reject_unknown(v, "sweep", {"kind", "trials", "distance_points", "snr_points"});
            if (v.contains("kind")) {
                const std::string kind = v.at("kind").get<std::string>();
                if (kind == "distance") c.sweep_kind = SweepKind::Distance;
                else if (kind == "snr") c.sweep_kind = SweepKind::Snr;
                else throw ConfigError("sweep.kind must be 'distance' or 'snr'");
            }
            detail::get_if(v, "trials", c.trials);
            detail::get_if(v, "distance_points", c.distance_points);
            detail::get_if(v, "snr_points", c.snr_points);
        }
        if (j.contains("ue")) {
            const auto& v = j.at("ue");
            detail::reject_unknown(v, "ue", {"range_min_m", "range_max_m", "sin_min", "sin_max"});
            detail::get_if(v, "range_min_m", c.ue_range_min_m);
            detail::get_if(v, "range_max_m", c.ue_range_max_m);
            detail::get_if(v, "sin_min", c.ue_sin_min);
            detail::get_if(v, "sin_max", c.ue_sin_max);
        }
        detail::get_if(j, "snr_db", c.snr_db);
        if (j.contains("schemes")) {
            c.schemes.clear();
            for (const auto& s : j.at("schemes")) c.schemes.push_back(scheme_from_name(s.get<std::string>()));
        }
        if (j.contains("calibration")) {
            const auto& v = j.at("calibration");
            detail::reject_unknown(v, "calibration",
                                   {"phase_max_rad", "amp_low", "amp_high", "subarray_size"});
            CalibrationError cal;
            cal.amplitude_low = 1.0;
            cal.amplitude_high = 1.0;
            cal.phase_bound = 0.0;
            detail::get_if(v, "phase_max_rad", cal.phase_bound);
            detail::get_if(v, "amp_low", cal.amplitude_low);
            detail::get_if(v, "amp_high", cal.amplitude_high);
            detail::get_if(v, "subarray_size", cal.subarray_size);
            c.calibration = cal;
        }
        if (j.contains("hierarchical")) {
            const auto& v = j.at("hierarchical");
            detail::reject_unknown(v, "hierarchical", {"levels", "grid_x", "grid_y"});
            detail::get_if(v, "levels", c.hier_levels);
            detail::get_if(v, "grid_x", c.hier_grid_x);
            detail::get_if(v, "grid_y", c.hier_grid_y);
        }
        detail::get_if(j, "seed", c.seed);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config error: ") + e.what());
    }
    return c;
}

struct TrialRecord {
    double sweep_value;
    Scheme scheme;
    int trial;
    double rate_bps_hz;
    long pilots;
    std::optional<double> d_sin_err;
    std::optional<double> d_range_err_m;
};

// Shared immutable state for one experiment run.
struct ExperimentContext {
    ArrayConfig cfg;
    Codebook dft_book;
    Codebook polar_book;
    SpreadLookupTable table;
    std::string fingerprint;
    long psi;
    long range_samples;  // boresight column length, the nominal S

    explicit ExperimentContext(const ExperimentConfig& c)
        : cfg(c.array()),
          dft_book(dft_codebook(cfg, c.coverage_sin_min, c.coverage_sin_max)),
          polar_book(polar_codebook(cfg, c.coverage_sin_min, c.coverage_sin_max)),
          table(build_lookup_table(cfg, c.coverage_sin_min, c.coverage_sin_max)),
          fingerprint(config_fingerprint(cfg, c.coverage_sin_min, c.coverage_sin_max)),
          psi(static_cast<long>(dft_book.codewords.size())),
          range_samples(static_cast<long>(range_column(cfg, 0.0).size())) {}
};

namespace detail {

// All enabled schemes for one (sweep point, trial), under common random
// numbers: each scheme re-seeds the same noise and calibration streams, so
// pilot p sees the same noise draw in every scheme, and paired runs with
// different calibration bounds consume identical underlying uniforms.
inline void run_trial(const ExperimentConfig& c, const ExperimentContext& ctx, std::size_t point_i,
                      double sweep_value, int trial, std::vector<TrialRecord>& out) {
    RandomStream ue_rng(derive_seed(c.seed, {kUeStream, point_i, static_cast<std::uint64_t>(trial)}));
    const double s = ue_rng.uniform(c.ue_sin_min, c.ue_sin_max);
    double r, snr_db;
    if (c.sweep_kind == SweepKind::Distance) {
        r = sweep_value;
        snr_db = c.snr_db;
    } else {
        r = ue_rng.uniform(c.ue_range_min_m, c.ue_range_max_m);
        snr_db = sweep_value;
    }
    const PolarPoint ue(std::asin(s), r);
    const double pt = 1.0;
    const double sigma2 = std::pow(10.0, -snr_db / 10.0);
    const std::uint64_t noise_seed =
        derive_seed(c.seed, {kNoiseStream, point_i, static_cast<std::uint64_t>(trial)});
    const std::uint64_t cal_seed =
        derive_seed(c.seed, {kCalStream, point_i, static_cast<std::uint64_t>(trial)});
    const CalibrationError* cal = c.calibration.has_value() ? &*c.calibration : nullptr;

    for (Scheme sch : c.schemes) {
        RandomStream noise_rng(noise_seed);
        RandomStream cal_rng(cal_seed);
        SchemeResult res{Scheme::PerfectCSI, {}, 0.0, 0, std::nullopt, std::nullopt};
        switch (sch) {
            case Scheme::PerfectCSI:
                res = perfect_csi(ctx.cfg, ue, pt, sigma2);
                break;
            case Scheme::Exhaustive:
                res = exhaustive_search(ctx.cfg, ue, ctx.polar_book, pt, sigma2, noise_rng,
                                        ctx.psi * ctx.range_samples);
                break;
            case Scheme::Hierarchical:
                res = hierarchical_search(ctx.cfg, ue, c.hier_levels, c.hier_grid_x, c.hier_grid_y,
                                          pt, sigma2, noise_rng);
                break;
            case Scheme::FarField:
                res = farfield_search(ctx.cfg, ue, ctx.dft_book, pt, sigma2, noise_rng);
                break;
            case Scheme::CIDFT:
                res = cidft_scheme(ctx.cfg, ue, ctx.table, ctx.dft_book, pt, sigma2, cal, noise_rng,
                                   cal_rng, ctx.fingerprint);
                break;
        }
        if (!std::isfinite(res.rate_bps_hz)) {
            throw NumericalError("non-finite rate encountered");
        }
        out.push_back({sweep_value, sch, trial, res.rate_bps_hz, res.pilots_used, res.d_sin_err,
                       res.d_range_err_m});
    }
}

}  // namespace detail

// Run the configured sweep. Records come out in canonical order (sweep
// point, then configured scheme order, then trial) regardless of how the
// trial work is scheduled across threads.
inline std::vector<TrialRecord> run_sweep(const ExperimentConfig& c, const ExperimentContext& ctx) {
    c.validate();
    const std::vector<double>& points =
        (c.sweep_kind == SweepKind::Distance) ? c.distance_points : c.snr_points;

    std::vector<std::vector<TrialRecord>> per_trial(points.size() * c.trials);
    std::exception_ptr failure = nullptr;
    std::mutex failure_mu;

    const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= per_trial.size()) return;
            const std::size_t point_i = idx / c.trials;
            const int trial = static_cast<int>(idx % c.trials);
            try {
                detail::run_trial(c, ctx, point_i, points[point_i], trial, per_trial[idx]);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mu);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w + 1 < workers; ++w) pool.emplace_back(work);
    work();
    for (std::thread& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    std::vector<TrialRecord> records;
    records.reserve(per_trial.size() * c.schemes.size());
    for (std::size_t point_i = 0; point_i < points.size(); ++point_i) {
        for (std::size_t si = 0; si < c.schemes.size(); ++si) {
            for (int t = 0; t < c.trials; ++t) {
                records.push_back(per_trial[point_i * c.trials + t][si]);
            }
        }
    }
    return records;
}

inline std::vector<TrialRecord> run_distance_sweep(const ExperimentConfig& c_in,
                                                   const ExperimentContext& ctx) {
    ExperimentConfig c = c_in;
    c.sweep_kind = SweepKind::Distance;
    return run_sweep(c, ctx);
}

inline std::vector<TrialRecord> run_snr_sweep(const ExperimentConfig& c_in,
                                              const ExperimentContext& ctx) {
    ExperimentConfig c = c_in;
    c.sweep_kind = SweepKind::Snr;
    return run_sweep(c, ctx);
}

namespace detail {

inline std::string fmt_opt(const std::optional<double>& v) {
    if (!v.has_value()) return "";
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", *v);
    return buf;
}

}  // namespace detail

inline void write_trials_csv(const std::vector<TrialRecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_trials_csv: cannot open " + path);
    out << "sweep_value,scheme,trial,rate_bps_hz,pilots,d_sin_err,d_range_err_m\n";
    char buf[160];
    for (const TrialRecord& r : records) {
        std::snprintf(buf, sizeof buf, "%.12g,%s,%d,%.12g,%ld,", r.sweep_value,
                      scheme_name(r.scheme), r.trial, r.rate_bps_hz, r.pilots);
        out << buf << detail::fmt_opt(r.d_sin_err) << ',' << detail::fmt_opt(r.d_range_err_m)
            << '\n';
    }
}

struct AggregateRow {
    double sweep_value;
    Scheme scheme;
    double mean_rate;
    double stderr_rate;
    long pilots;
    long count;
};

inline std::vector<AggregateRow> aggregate(const std::vector<TrialRecord>& records) {
    std::vector<AggregateRow> rows;
    for (const TrialRecord& r : records) {
        AggregateRow* row = nullptr;
        for (AggregateRow& cand : rows) {
            if (cand.sweep_value == r.sweep_value && cand.scheme == r.scheme) {
                row = &cand;
                break;
            }
        }
        if (row == nullptr) {
            rows.push_back({r.sweep_value, r.scheme, 0.0, 0.0, r.pilots, 0});
            row = &rows.back();
        }
        row->mean_rate += r.rate_bps_hz;  // sums for now
        row->stderr_rate += r.rate_bps_hz * r.rate_bps_hz;
        row->count += 1;
    }
    for (AggregateRow& row : rows) {
        const double n = static_cast<double>(row.count);
        const double mean = row.mean_rate / n;
        const double var = row.count > 1
                               ? std::max(0.0, (row.stderr_rate - n * mean * mean) / (n - 1.0))
                               : 0.0;
        row.mean_rate = mean;
        row.stderr_rate = std::sqrt(var / n);
    }
    return rows;
}

inline void write_aggregate_csv(const std::vector<AggregateRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_aggregate_csv: cannot open " + path);
    out << "sweep_value,scheme,mean_rate,stderr,pilots\n";
    char buf[160];
    for (const AggregateRow& r : rows) {
        std::snprintf(buf, sizeof buf, "%.12g,%s,%.12g,%.12g,%ld\n", r.sweep_value,
                      scheme_name(r.scheme), r.mean_rate, r.stderr_rate, r.pilots);
        out << buf;
    }
}

inline void write_overhead_csv(const ExperimentConfig& c, const ExperimentContext& ctx,
                               const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_overhead_csv: cannot open " + path);
    out << "scheme,formula,value\n";
    const long psi = ctx.psi;
    const long s = ctx.range_samples;
    out << "Exhaustive,psi*S," << overhead(Scheme::Exhaustive, psi, s, 0, 0, 0) << '\n';
    out << "Hierarchical,Nx*Ny*K,"
        << overhead(Scheme::Hierarchical, 0, 0, c.hier_grid_x, c.hier_grid_y, c.hier_levels) << '\n';
    out << "FarField,psi," << overhead(Scheme::FarField, psi, 0, 0, 0, 0) << '\n';
    out << "CIDFT,psi," << overhead(Scheme::CIDFT, psi, 0, 0, 0, 0) << '\n';
}

// Write the three report files into out_dir (which must already exist).
inline void emit_report(const ExperimentConfig& c, const ExperimentContext& ctx,
                        const std::vector<TrialRecord>& records, const std::string& out_dir) {
    write_trials_csv(records, out_dir + "/trials.csv");
    write_aggregate_csv(aggregate(records), out_dir + "/aggregate.csv");
    write_overhead_csv(c, ctx, out_dir + "/overhead.csv");
}

}  // namespace nfbeam

#endif
