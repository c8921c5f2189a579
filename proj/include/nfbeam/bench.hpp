#ifndef NFBEAM_BENCH_HPP
#define NFBEAM_BENCH_HPP

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "beamscan.hpp"
#include "channel.hpp"
#include "cidft.hpp"
#include "codebook.hpp"
#include "geometry.hpp"
#include "numerics.hpp"
#include "random.hpp"

namespace nfbeam {

enum class Scheme { PerfectCSI, Exhaustive, Hierarchical, FarField, CIDFT };

inline const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::PerfectCSI: return "PerfectCSI";
        case Scheme::Exhaustive: return "Exhaustive";
        case Scheme::Hierarchical: return "Hierarchical";
        case Scheme::FarField: return "FarField";
        case Scheme::CIDFT: return "CIDFT";
    }
    return "?";
}

struct SchemeResult {
    Scheme scheme;
    Codeword chosen;
    double rate_bps_hz;
    long pilots_used;
    std::optional<double> d_sin_err;      // |sin(chosen angle) - sin(true angle)|
    std::optional<double> d_range_err_m;  // |chosen focus range - true range|
};

// Achievable rate R = log2(1 + P_t N |b^H w|^2 / sigma^2) with the exact
// near-field steering vector as the channel direction. The combiner must be
// unit norm; path loss is deliberately absent, matching the normalized
// channel the rate formula is written for.
inline double rate(const ArrayConfig& cfg, const PolarPoint& ue, const ComplexVector& w, double pt,
                   double sigma2) {
    const ComplexVector b = nf_steering(cfg, ue);
    const double g = std::norm(inner_product(b, w));
    if (pt <= 0.0) return 0.0;
    return std::log2(1.0 + pt * cfg.n * g / sigma2);
}

// Table-style pilot accounting; the parameters a scheme does not use are
// ignored.
inline long overhead(Scheme s, long psi, long range_samples, long nx, long ny, long levels) {
    switch (s) {
        case Scheme::PerfectCSI: return 0;
        case Scheme::Exhaustive: return psi * range_samples;
        case Scheme::Hierarchical: return nx * ny * levels;
        case Scheme::FarField: return psi;
        case Scheme::CIDFT: return psi;
    }
    return 0;
}

namespace detail {

// Measured-power argmax over a codebook, with the scheme's noise stream.
inline std::size_t noisy_argmax(const ChannelRealization& h, const Codebook& book, double sigma2,
                                RandomStream& rng) {
    const GainProfile prof = receive_beam_profile(h, book, sigma2, rng);
    std::size_t best = 0;
    for (std::size_t i = 1; i < prof.power.size(); ++i) {
        if (prof.power[i] > prof.power[best]) best = i;
    }
    return best;
}

inline SchemeResult make_result(const ArrayConfig& cfg, const PolarPoint& ue, Scheme s, Codeword cw,
                                double pt, double sigma2, long pilots) {
    SchemeResult res{s, std::move(cw), 0.0, pilots, std::nullopt, std::nullopt};
    res.rate_bps_hz = rate(cfg, ue, res.chosen.vector, pt, sigma2);
    res.d_sin_err = std::fabs(std::sin(res.chosen.beam_angle) - std::sin(ue.theta));
    if (res.chosen.focus_range.has_value()) {
        res.d_range_err_m = std::fabs(*res.chosen.focus_range - ue.range);
    }
    return res;
}

}  // namespace detail

// Genie upper bound: combiner equals the true channel direction.
inline SchemeResult perfect_csi(const ArrayConfig& cfg, const PolarPoint& ue, double pt,
                                double sigma2) {
    Codeword cw{nf_steering(cfg, ue), CodewordKind::NearFieldPolar, ue.theta, ue.range};
    SchemeResult res{Scheme::PerfectCSI, std::move(cw), 0.0, 0, 0.0, 0.0};
    res.rate_bps_hz = rate(cfg, ue, res.chosen.vector, pt, sigma2);
    return res;
}

// Two-dimensional sweep over the full polar codebook. Pilot accounting uses
// the nominal psi * S product rather than the (smaller) actual book size,
// matching the conventional overhead table.
inline SchemeResult exhaustive_search(const ArrayConfig& cfg, const PolarPoint& ue,
                                      const Codebook& polar_book, double pt, double sigma2,
                                      RandomStream& noise_rng, long pilots_nominal) {
    const ChannelRealization h = los_channel(cfg, ue, false);
    const std::size_t best = detail::noisy_argmax(h, polar_book, sigma2 / pt, noise_rng);
    return detail::make_result(cfg, ue, Scheme::Exhaustive, polar_book.codewords[best], pt, sigma2,
                               pilots_nominal);
}

// Classical far-field training: argmax over the DFT beams.
inline SchemeResult farfield_search(const ArrayConfig& cfg, const PolarPoint& ue,
                                    const Codebook& dft_book, double pt, double sigma2,
                                    RandomStream& noise_rng) {
    const ChannelRealization h = los_channel(cfg, ue, false);
    const std::size_t best = detail::noisy_argmax(h, dft_book, sigma2 / pt, noise_rng);
    SchemeResult res = detail::make_result(cfg, ue, Scheme::FarField, dft_book.codewords[best], pt,
                                           sigma2, static_cast<long>(dft_book.codewords.size()));
    res.d_range_err_m.reset();  // far-field beams carry no range estimate
    return res;
}

// Greedy K-level descent over the Cartesian tiling stand-in: measure every
// cell of the current level, re-tile the winning cell, repeat.
inline SchemeResult hierarchical_search(const ArrayConfig& cfg, const PolarPoint& ue, int levels,
                                        int nx, int ny, double pt, double sigma2,
                                        RandomStream& noise_rng) {
    const ChannelRealization h = los_channel(cfg, ue, false);
    HierCell region = hierarchical_region(cfg);
    Codeword chosen{{}, CodewordKind::NearFieldPolar, 0.0, std::nullopt};
    for (int k = 0; k < levels; ++k) {
        const Codebook level = tiling_codebook(cfg, region, nx, ny);
        const std::size_t best = detail::noisy_argmax(h, level, sigma2 / pt, noise_rng);
        chosen = level.codewords[best];
        region = tile_cells(region, nx, ny)[best];
    }
    return detail::make_result(cfg, ue, Scheme::Hierarchical, std::move(chosen), pt, sigma2,
                               static_cast<long>(nx) * ny * levels);
}

// Spread-matching training: DFT sweep, angular-spread measurement, table
// lookup, then a focused combiner at the matched cell. When the array is
// miscalibrated, both the sweep codewords and the final combiner see the
// same per-trial error vector.
inline SchemeResult cidft_scheme(const ArrayConfig& cfg, const PolarPoint& ue,
                                 const SpreadLookupTable& table, const Codebook& dft_book,
                                 double pt, double sigma2, const CalibrationError* calibration,
                                 RandomStream& noise_rng, RandomStream& cal_rng,
                                 const std::string& fingerprint) {
    // Re-derive the same error vector for the final combiner by cloning the
    // calibration stream state: draw it once here, then hand a copy of the
    // stream to run_cidft.
    ComplexVector err;
    if (calibration != nullptr) {
        const ComplexVector ones(static_cast<std::size_t>(cfg.n), cplx{1.0, 0.0});
        RandomStream cal_copy = cal_rng;
        err = apply_calibration_errors(ones, *calibration, cal_copy);
    }
    const LocationEstimate est = run_cidft(cfg, table, dft_book, ue, sigma2 / pt, calibration,
                                           noise_rng, cal_rng, fingerprint);
    Codeword cw = est.chosen_codeword;
    if (!err.empty()) {
        for (std::size_t n = 0; n < cw.vector.size(); ++n) cw.vector[n] *= err[n];
        normalize(cw.vector);
    }
    return detail::make_result(cfg, ue, Scheme::CIDFT, std::move(cw), pt, sigma2,
                               static_cast<long>(dft_book.codewords.size()));
}

}  // namespace nfbeam

#endif
