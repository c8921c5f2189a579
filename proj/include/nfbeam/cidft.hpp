#ifndef NFBEAM_CIDFT_HPP
#define NFBEAM_CIDFT_HPP

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "beamscan.hpp"
#include "channel.hpp"
#include "codebook.hpp"
#include "geometry.hpp"
#include "numerics.hpp"
#include "random.hpp"

namespace nfbeam {

struct SpreadEntry {
    double range_m;
    double width_sin;
    double median_sin;
    double centroid_sin;
};

struct SpreadColumn {
    double sin_theta;
    bool degenerate;  // EBRD at this angle does not reach the 2D start range
    std::vector<SpreadEntry> entries;  // ranges strictly increasing
};

// Precomputed map from (grid angle, beamdepth-spaced range) to the angular
// spread a user at that cell would produce on the DFT sweep. The angle grid
// is the DFT codebook's own sin-uniform grid, and entries are computed from
// the analytic Fresnel profile — the online measurement is the noisy
// simulated profile, and that mismatch is the estimator's operating
// condition.
struct SpreadLookupTable {
    std::string fingerprint;
    std::vector<SpreadColumn> columns;
};

inline std::string config_fingerprint(const ArrayConfig& cfg, double sin_min, double sin_max) {
    char buf[192];
    std::snprintf(buf, sizeof buf,
                  "f_hz=%.10g N=%d d_m=%.12g D_m=%.12g Rd_m=%.12g sin_min=%.12g sin_max=%.12g",
                  cfg.frequency_hz, cfg.n, cfg.spacing_m, cfg.aperture(), rayleigh_distance(cfg),
                  sin_min, sin_max);
    return buf;
}

inline SpreadLookupTable build_lookup_table(const ArrayConfig& cfg,
                                            double sin_min = -0.8660254037844386,
                                            double sin_max = 0.8660254037844386) {
    if (!cfg.half_wavelength_spacing()) {
        throw std::invalid_argument("build_lookup_table: requires d = lambda/2 spacing");
    }
    const Codebook book = dft_codebook(cfg, sin_min, sin_max);
    SpreadLookupTable table;
    table.fingerprint = config_fingerprint(cfg, sin_min, sin_max);
    table.columns.reserve(book.angular_grid.size());
    for (std::size_t i = 0; i < book.angular_grid.size(); ++i) {
        const double theta = book.codewords[i].beam_angle;
        SpreadColumn col;
        col.sin_theta = book.angular_grid[i];
        col.degenerate = ebrd(cfg, theta) <= 2.0 * cfg.aperture();
        for (double r : range_column(cfg, theta)) {
            const PolarPoint p(theta, r);
            const SpreadMeasure m = angular_spread(dft_profile(cfg, p, book, GainModel::Fresnel), book);
            col.entries.push_back({r, m.width_sin, m.median_sin, m.centroid_sin});
        }
        table.columns.push_back(std::move(col));
    }
    return table;
}

struct LocationEstimate {
    double theta_hat;
    double r_hat;
    int angle_index;
    int range_index;
    Codeword chosen_codeword;
};

// Two-stage table match. Angle: nearest grid angle to the measured spread's
// power centroid (skipping degenerate columns). Range: within that column,
// the entry with the closest width — equivalent to maximizing
// cos(width - stored width) since all widths lie well inside [0, pi) — with
// ties broken toward the smaller range.
inline LocationEstimate estimate_location(const ArrayConfig& cfg, const SpreadMeasure& measured,
                                          const SpreadLookupTable& table,
                                          const std::string& expected_fingerprint) {
    if (table.fingerprint != expected_fingerprint) {
        throw std::invalid_argument("estimate_location: lookup table fingerprint mismatch");
    }
    if (measured.members.empty()) {
        throw std::invalid_argument("estimate_location: empty spread measurement");
    }
    int best_i = -1;
    double best_da = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (table.columns[i].degenerate || table.columns[i].entries.empty()) continue;
        const double da = std::fabs(table.columns[i].sin_theta - measured.centroid_sin);
        if (da < best_da) {
            best_da = da;
            best_i = static_cast<int>(i);
        }
    }
    if (best_i < 0) throw std::runtime_error("estimate_location: no usable table columns");
    const SpreadColumn& col = table.columns[best_i];
    int best_s = 0;
    double best_dw = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < col.entries.size(); ++s) {
        const double dw = std::fabs(col.entries[s].width_sin - measured.width_sin);
        if (dw < best_dw - 1e-15) {  // strict improvement; ties keep the smaller range
            best_dw = dw;
            best_s = static_cast<int>(s);
        }
    }
    const double theta = std::asin(col.sin_theta);
    const double r = col.entries[best_s].range_m;
    const PolarPoint p(theta, r);
    return {theta, r, best_i, best_s,
            {nf_steering(cfg, p), CodewordKind::NearFieldPolar, theta, r}};
}

// Full training round: sweep the DFT codebook (optionally through a
// miscalibrated array), measure the angular spread, and match it against the
// table. The same per-trial error vector perturbs every codeword — the array
// is miscalibrated as a whole, not per pilot — and perturbed codewords are
// renormalized to keep the unit-norm combiner constraint.
inline LocationEstimate run_cidft(const ArrayConfig& cfg, const SpreadLookupTable& table,
                                  const Codebook& dft_book, const PolarPoint& ue, double sigma2,
                                  const CalibrationError* calibration, RandomStream& noise_rng,
                                  RandomStream& cal_rng, const std::string& expected_fingerprint,
                                  SpreadMeasure* measured_out = nullptr) {
    const ChannelRealization h = los_channel(cfg, ue, false);
    GainProfile prof;
    if (calibration != nullptr) {
        const ComplexVector ones(static_cast<std::size_t>(cfg.n), cplx{1.0, 0.0});
        const ComplexVector err = apply_calibration_errors(ones, *calibration, cal_rng);
        Codebook perturbed = dft_book;
        for (Codeword& cw : perturbed.codewords) {
            for (std::size_t n = 0; n < cw.vector.size(); ++n) cw.vector[n] *= err[n];
            normalize(cw.vector);
        }
        prof = receive_beam_profile(h, perturbed, sigma2, noise_rng);
    } else {
        prof = receive_beam_profile(h, dft_book, sigma2, noise_rng);
    }
    const SpreadMeasure m = angular_spread(prof, dft_book);
    if (measured_out != nullptr) *measured_out = m;
    return estimate_location(cfg, m, table, expected_fingerprint);
}

// CSV dump with the build fingerprint on a leading comment line.
inline void export_lookup_table_csv(const SpreadLookupTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("export_lookup_table_csv: cannot open " + path);
    out << "# " << table.fingerprint << "\n";
    out << "angle_index,sin_theta,range_index,range_m,width_sin,median_sin\n";
    char buf[160];
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        const SpreadColumn& col = table.columns[i];
        for (std::size_t s = 0; s < col.entries.size(); ++s) {
            std::snprintf(buf, sizeof buf, "%zu,%.12g,%zu,%.12g,%.12g,%.12g\n", i, col.sin_theta, s,
                          col.entries[s].range_m, col.entries[s].width_sin,
                          col.entries[s].median_sin);
            out << buf;
        }
    }
}

}  // namespace nfbeam

#endif
