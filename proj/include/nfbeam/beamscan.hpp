#ifndef NFBEAM_BEAMSCAN_HPP
#define NFBEAM_BEAMSCAN_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "channel.hpp"
#include "codebook.hpp"
#include "geometry.hpp"
#include "numerics.hpp"
#include "random.hpp"

namespace nfbeam {

// Per-beam received power from one sweep, aligned with a codebook's order.
struct GainProfile {
    std::vector<double> power;
    std::vector<cplx> measurement;  // empty for analytic profiles
    bool simulated = false;
};

// Exact DFT-beam gain |b^H(theta_u, r) a(theta_n)|^2, evaluated with the
// exact square-root element distances.
inline double gain_exact(const ArrayConfig& cfg, const PolarPoint& ue, double theta_n) {
    const ComplexVector b = nf_steering(cfg, ue);
    const ComplexVector a = ff_steering(cfg, theta_n);
    return std::norm(inner_product(b, a));
}

// Fresnel closed form of the same gain:
//   G = |(Cbar + j Sbar) / (2 g2)|^2
//   Cbar = C(g1+g2) - C(g1-g2),  Sbar = S(g1+g2) - S(g1-g2)
//   g1 = sqrt(r / (d cos^2 t_u)) (sin t_n - sin t_u),  g2 = (N/2) sqrt(d cos^2 t_u / r).
// Valid only at half-wavelength spacing (the derivation assumes d = lambda/2).
inline double gain_fresnel(const ArrayConfig& cfg, const PolarPoint& ue, double theta_n) {
    if (!cfg.half_wavelength_spacing()) {
        throw std::invalid_argument("gain_fresnel: requires d = lambda/2 spacing");
    }
    const double cu = std::cos(ue.theta);
    const double dc2 = cfg.spacing_m * cu * cu;
    const double g1 = std::sqrt(ue.range / dc2) * (std::sin(theta_n) - std::sin(ue.theta));
    const double g2 = 0.5 * cfg.n * std::sqrt(dc2 / ue.range);
    const FresnelPair hi = fresnel(g1 + g2);
    const FresnelPair lo = fresnel(g1 - g2);
    const double cbar = hi.c - lo.c;
    const double sbar = hi.s - lo.s;
    return (cbar * cbar + sbar * sbar) / (4.0 * g2 * g2);
}

enum class GainModel { Exact, Fresnel };

// Noiseless per-beam gain profile over a DFT codebook.
inline GainProfile dft_profile(const ArrayConfig& cfg, const PolarPoint& ue, const Codebook& book,
                               GainModel mode) {
    if (book.kind != CodebookKind::DFT) {
        throw std::invalid_argument("dft_profile: requires a DFT codebook");
    }
    GainProfile prof;
    prof.power.reserve(book.codewords.size());
    if (mode == GainModel::Exact) {
        const ComplexVector b = nf_steering(cfg, ue);
        for (const Codeword& cw : book.codewords) {
            prof.power.push_back(std::norm(inner_product(b, cw.vector)));
        }
    } else {
        for (const Codeword& cw : book.codewords) {
            prof.power.push_back(gain_fresnel(cfg, ue, cw.beam_angle));
        }
    }
    return prof;
}

// One noisy measurement per codeword: y_p = w_p^H h + w_p^H n with n drawn
// per element at variance sigma2 (so the combined noise is scalar Gaussian at
// sigma2 ||w||^2). sigma2 = 0 gives the noiseless profile.
inline GainProfile receive_beam_profile(const ChannelRealization& h, const Codebook& book,
                                        double sigma2, RandomStream& rng) {
    GainProfile prof;
    prof.simulated = true;
    prof.power.reserve(book.codewords.size());
    prof.measurement.reserve(book.codewords.size());
    for (const Codeword& cw : book.codewords) {
        if (cw.vector.size() != h.vector.size()) {
            throw std::invalid_argument("receive_beam_profile: codeword length mismatch");
        }
        cplx y = inner_product(cw.vector, h.vector);
        const double wn2 = norm2(cw.vector);
        if (sigma2 > 0.0) y += rng.complex_normal(sigma2 * wn2 * wn2);
        prof.measurement.push_back(y);
        prof.power.push_back(std::norm(y));
    }
    return prof;
}

// Half-power angular spread of a profile over a sin-uniform DFT grid.
//
// Members are the full superlevel set {beams with power > 0.5 max}; the
// plateau of a near user can dip just below threshold between ripples, so
// restricting to a contiguous run splits what is physically one spread.
// width_sin spans first to last member plus one beam spacing, making the
// single-beam (far-field) floor 2/N rather than zero. median_sin is the
// median member beam; centroid_sin is the power-weighted mean over members
// and is the more stable angle descriptor off boresight, where the plateau
// is asymmetric.
struct SpreadMeasure {
    std::vector<int> members;
    double width_sin;
    double median_sin;
    double centroid_sin;
    double peak_power;
};

inline SpreadMeasure angular_spread(const GainProfile& prof, const Codebook& book) {
    if (prof.power.empty() || prof.power.size() != book.codewords.size()) {
        throw std::invalid_argument("angular_spread: profile/codebook size mismatch");
    }
    const double peak = *std::max_element(prof.power.begin(), prof.power.end());
    if (!(peak > 0.0)) {
        throw std::runtime_error("angular_spread: no signal (all-zero profile)");
    }
    const double thresh = 0.5 * peak;
    SpreadMeasure m;
    m.peak_power = peak;
    double wsum = 0.0, wssum = 0.0;
    for (std::size_t i = 0; i < prof.power.size(); ++i) {
        if (prof.power[i] > thresh) {
            m.members.push_back(static_cast<int>(i));
            wsum += prof.power[i];
            wssum += prof.power[i] * book.angular_grid[i];
        }
    }
    const double step = book.angular_grid.size() > 1
                            ? book.angular_grid[1] - book.angular_grid[0]
                            : 2.0 / book.codewords.size();
    m.width_sin = book.angular_grid[m.members.back()] - book.angular_grid[m.members.front()] + step;
    m.centroid_sin = wssum / wsum;
    const std::size_t k = m.members.size();
    m.median_sin = (k % 2 == 1)
                       ? book.angular_grid[m.members[k / 2]]
                       : 0.5 * (book.angular_grid[m.members[k / 2 - 1]] +
                                book.angular_grid[m.members[k / 2]]);
    return m;
}

inline void export_profile_csv(const GainProfile& prof, const Codebook& book,
                               const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("export_profile_csv: cannot open " + path);
    out << "beam_index,sin_theta,power\n";
    char buf[96];
    for (std::size_t i = 0; i < prof.power.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.12g,%.12g\n", i, book.angular_grid[i], prof.power[i]);
        out << buf;
    }
}

}  // namespace nfbeam

#endif
