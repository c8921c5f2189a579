#ifndef NFBEAM_CHANNEL_HPP
#define NFBEAM_CHANNEL_HPP

#include <cmath>

#include "geometry.hpp"
#include "numerics.hpp"
#include "random.hpp"

namespace nfbeam {

// Signed element offset from the array center: delta_n = (n - (N-1)/2) d.
//
// Centered indexing is used for both steering vectors. For the plane-wave
// vector this differs from end-referenced indexing only by a global phase;
// for the near-field vector the two differ in |.|-relevant ways, and the
// centered form is the one whose far-field limit reproduces ff_steering and
// whose beam gain peaks at the user's angle.
inline double element_offset(const ArrayConfig& cfg, int n) {
    return (static_cast<double>(n) - 0.5 * (cfg.n - 1)) * cfg.spacing_m;
}

// Far-field (plane-wave) steering vector, unit norm.
// Element phase: -nu * delta_n * sin(theta).
inline ComplexVector ff_steering(const ArrayConfig& cfg, double theta) {
    const double nu = cfg.wavenumber();
    const double s = std::sin(theta);
    const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.n));
    ComplexVector a(cfg.n);
    for (int n = 0; n < cfg.n; ++n) {
        const double ph = -nu * element_offset(cfg, n) * s;
        a[n] = scale * cplx{std::cos(ph), std::sin(ph)};
    }
    return a;
}

// Near-field (spherical-wave) steering vector, unit norm. Element phase uses
// the exact per-element distance
//   r^(n) = sqrt(r^2 + delta_n^2 + 2 r delta_n sin(theta)),
// referenced to the array center: phase -nu (r^(n) - r). No Fresnel
// approximation here; this is the "truth" channel model.
inline ComplexVector nf_steering(const ArrayConfig& cfg, const PolarPoint& p) {
    const double nu = cfg.wavenumber();
    const double s = std::sin(p.theta);
    const double r = p.range;
    const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.n));
    ComplexVector b(cfg.n);
    for (int n = 0; n < cfg.n; ++n) {
        const double dn = element_offset(cfg, n);
        const double rn = std::sqrt(r * r + dn * dn + 2.0 * r * dn * s);
        const double ph = -nu * (rn - r);
        b[n] = scale * cplx{std::cos(ph), std::sin(ph)};
    }
    return b;
}

// Single-path line-of-sight channel realization.
struct ChannelRealization {
    ComplexVector vector;
    PolarPoint location;
    cplx complex_gain;
    bool includes_path_loss;
};

// h = g sqrt(N) e^{-j nu r} b(theta, r) with g = lambda/(4 pi r) when path
// loss is modeled, g = 1 otherwise.
inline ChannelRealization los_channel(const ArrayConfig& cfg, const PolarPoint& p,
                                      bool include_path_loss) {
    const double amp = include_path_loss ? path_loss_amplitude(cfg, p.range) : 1.0;
    const double ph = -cfg.wavenumber() * p.range;
    const cplx g = amp * cplx{std::cos(ph), std::sin(ph)};
    ComplexVector h = nf_steering(cfg, p);
    const cplx scale = g * std::sqrt(static_cast<double>(cfg.n));
    for (cplx& z : h) z *= scale;
    return {std::move(h), p, g, include_path_loss};
}

// Per-element (or per-subarray) gain/phase miscalibration bounds.
struct CalibrationError {
    double phase_bound = M_PI / 8.0;  // phi ~ U[0, phase_bound]
    double amplitude_low = 0.0;       // alpha ~ U[amplitude_low, amplitude_high]
    double amplitude_high = 1.0;
    int subarray_size = 1;            // 1 = per-element granularity

    void validate() const {
        if (phase_bound < 0.0 || phase_bound > M_PI)
            throw std::invalid_argument("CalibrationError: phase_bound outside [0, pi]");
        if (amplitude_low < 0.0 || amplitude_low > amplitude_high)
            throw std::invalid_argument("CalibrationError: need 0 <= amplitude_low <= amplitude_high");
        if (subarray_size < 1)
            throw std::invalid_argument("CalibrationError: subarray_size must be >= 1");
    }
};

// Multiply each element (or each contiguous subarray block) by
// alpha e^{j phi}. Both uniforms are always consumed per draw, so runs with
// different bounds but the same stream stay pairwise coupled. No
// renormalization is performed here; degenerate bounds can legitimately
// produce the zero vector.
inline ComplexVector apply_calibration_errors(const ComplexVector& w, const CalibrationError& err,
                                              RandomStream& rng) {
    err.validate();
    ComplexVector out(w.size());
    const std::size_t block = static_cast<std::size_t>(err.subarray_size);
    cplx factor{1.0, 0.0};
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i % block == 0) {
            const double phi = err.phase_bound * rng.uniform();
            const double alpha = err.amplitude_low +
                                 (err.amplitude_high - err.amplitude_low) * rng.uniform();
            factor = alpha * cplx{std::cos(phi), std::sin(phi)};
        }
        out[i] = w[i] * factor;
    }
    return out;
}

}  // namespace nfbeam

#endif
