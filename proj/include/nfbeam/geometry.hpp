#ifndef NFBEAM_GEOMETRY_HPP
#define NFBEAM_GEOMETRY_HPP

#include <cmath>
#include <optional>
#include <stdexcept>

namespace nfbeam {

constexpr double kSpeedOfLight = 299792458.0;  // m/s

// Physical description of a uniform linear array.
//
// Aperture is D = N*d (this convention, not (N-1)*d, reproduces the usual
// ~350 m Rayleigh figure at N=256, f=28 GHz).
struct ArrayConfig {
    double frequency_hz;
    int n;              // element count
    double spacing_m;   // element spacing d

    ArrayConfig(double f, int n_elems, double d)
        : frequency_hz(f), n(n_elems), spacing_m(d) {
        if (!(f > 0.0)) throw std::invalid_argument("ArrayConfig: frequency must be positive");
        if (n_elems < 2) throw std::invalid_argument("ArrayConfig: need at least 2 elements");
        if (!(d > 0.0)) throw std::invalid_argument("ArrayConfig: spacing must be positive");
    }

    static ArrayConfig half_wavelength(double f, int n_elems) {
        return ArrayConfig(f, n_elems, 0.5 * kSpeedOfLight / f);
    }

    double wavelength() const { return kSpeedOfLight / frequency_hz; }
    double wavenumber() const { return 2.0 * M_PI / wavelength(); }
    double aperture() const { return n * spacing_m; }
    bool half_wavelength_spacing() const {
        return std::fabs(spacing_m / (0.5 * wavelength()) - 1.0) < 1e-9;
    }
};

// Location in the array's polar frame: spatial angle (radians, broadside = 0)
// and range from the array center (meters).
struct PolarPoint {
    double theta;
    double range;

    PolarPoint(double angle, double r) : theta(angle), range(r) {
        if (!(std::fabs(angle) < 0.5 * M_PI)) {
            throw std::invalid_argument("PolarPoint: angle must lie in (-pi/2, pi/2)");
        }
        if (!(r > 0.0) || !std::isfinite(r)) {
            throw std::invalid_argument("PolarPoint: range must be positive and finite");
        }
    }
};

// Classical near/far boundary 2 D^2 / lambda.
inline double rayleigh_distance(const ArrayConfig& cfg) {
    const double d_ap = cfg.aperture();
    return 2.0 * d_ap * d_ap / cfg.wavelength();
}

// Effective beamfocused Rayleigh distance: (R_d / 10) cos^2(theta).
// Beyond this range, beams focused at a finite range have unbounded depth.
inline double ebrd(const ArrayConfig& cfg, double theta) {
    const double c = std::cos(theta);
    return 0.1 * rayleigh_distance(cfg) * c * c;
}

// 3 dB beamdepth of a beam focused at (theta, r_f):
//   r_BD = r_f R_c / (R_c - 10 r_f) - r_f R_c / (R_c + 10 r_f),  R_c = R_d cos^2(theta).
// For r_f at or beyond the EBRD the depth diverges; that case is returned as
// nullopt (Unbounded) so callers must terminate their loops explicitly.
inline std::optional<double> beamdepth(const ArrayConfig& cfg, double theta, double r_f) {
    if (!(r_f > 0.0)) throw std::invalid_argument("beamdepth: range must be positive");
    const double c = std::cos(theta);
    const double rc = rayleigh_distance(cfg) * c * c;
    if (r_f >= 0.1 * rc) return std::nullopt;
    return r_f * rc / (rc - 10.0 * r_f) - r_f * rc / (rc + 10.0 * r_f);
}

// Free-space amplitude factor lambda / (4 pi r).
inline double path_loss_amplitude(const ArrayConfig& cfg, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("path_loss_amplitude: range must be positive");
    return cfg.wavelength() / (4.0 * M_PI * r);
}

}  // namespace nfbeam

#endif
