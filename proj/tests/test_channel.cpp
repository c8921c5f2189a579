#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "nfbeam/beamscan.hpp"
#include "nfbeam/channel.hpp"
#include "nfbeam/codebook.hpp"

using namespace nfbeam;

namespace {
const ArrayConfig kCfg = ArrayConfig::half_wavelength(28e9, 256);
}

TEST_CASE("ff_steering basic structure") {
    const ComplexVector a0 = ff_steering(kCfg, 0.0);
    for (const cplx& z : a0) {
        CHECK(z.real() == Catch::Approx(1.0 / 16.0).margin(1e-14));
        CHECK(z.imag() == Catch::Approx(0.0).margin(1e-14));
    }
    CHECK(norm2(ff_steering(kCfg, 0.7)) == Catch::Approx(1.0).margin(1e-12));

    // N=4, d=lambda/2, theta=pi/6: consecutive phase difference -pi/2
    const ArrayConfig small = ArrayConfig::half_wavelength(28e9, 4);
    const ComplexVector a = ff_steering(small, M_PI / 6.0);
    for (int n = 0; n + 1 < 4; ++n) {
        const cplx ratio = a[n + 1] / a[n];
        CHECK(std::arg(ratio) == Catch::Approx(-M_PI / 2.0).margin(1e-12));
    }
}

TEST_CASE("nf_steering norm and far-field limit") {
    const PolarPoint p(0.3, 12.0);
    CHECK(norm2(nf_steering(kCfg, p)) == Catch::Approx(1.0).margin(1e-12));

    const double far = 1e6 * rayleigh_distance(kCfg);
    const double m = std::abs(inner_product(nf_steering(kCfg, PolarPoint(0.3, far)),
                                            ff_steering(kCfg, 0.3)));
    CHECK(m > 1.0 - 1e-3);
}

TEST_CASE("reference near-field gain figure") {
    const double g = std::norm(
        inner_product(ff_steering(kCfg, 0.0), nf_steering(kCfg, PolarPoint(0.0, 35.0))));
    CHECK(g == Catch::Approx(0.226).margin(0.005));
}

TEST_CASE("far-field consistency: gain approaches 1 monotonically beyond the EBRD") {
    // inside the EBRD the on-beam gain ripples (the Fresnel sums oscillate),
    // so the monotone approach to the plane-wave limit starts at the EBRD
    const ComplexVector a = ff_steering(kCfg, 0.3);
    double prev = 0.0;
    const double lo = ebrd(kCfg, 0.3);
    const double hi = 100.0 * rayleigh_distance(kCfg);
    for (int i = 0; i <= 40; ++i) {
        const double r = lo * std::pow(hi / lo, i / 40.0);
        const double g = std::norm(inner_product(a, nf_steering(kCfg, PolarPoint(0.3, r))));
        CHECK(g >= prev - 1e-9);
        prev = g;
    }
    CHECK(prev > 0.9999);
}

TEST_CASE("los_channel scaling") {
    const PolarPoint p(0.1, 10.0);
    const ChannelRealization bare = los_channel(kCfg, p, false);
    CHECK(norm2(bare.vector) == Catch::Approx(std::sqrt(256.0)).margin(1e-9));

    const ChannelRealization near = los_channel(kCfg, PolarPoint(0.0, 3.5), true);
    const ChannelRealization far = los_channel(kCfg, PolarPoint(0.0, 350.0), true);
    CHECK(norm2(near.vector) / norm2(far.vector) == Catch::Approx(100.0).epsilon(1e-9));

    const ChannelRealization d1 = los_channel(kCfg, PolarPoint(0.2, 8.0), true);
    const ChannelRealization d2 = los_channel(kCfg, PolarPoint(0.2, 16.0), true);
    CHECK(norm2(d1.vector) == Catch::Approx(2.0 * norm2(d2.vector)).epsilon(1e-9));
}

TEST_CASE("apply_calibration_errors degenerate bounds") {
    ComplexVector w = ff_steering(kCfg, 0.4);

    CalibrationError ident;
    ident.phase_bound = 0.0;
    ident.amplitude_low = ident.amplitude_high = 1.0;
    RandomStream rng(3);
    const ComplexVector same = apply_calibration_errors(w, ident, rng);
    for (std::size_t i = 0; i < w.size(); ++i) CHECK(same[i] == w[i]);

    CalibrationError zero;
    zero.phase_bound = 0.0;
    zero.amplitude_low = zero.amplitude_high = 0.0;
    RandomStream rng2(3);
    const ComplexVector z = apply_calibration_errors(w, zero, rng2);
    for (const cplx& v : z) CHECK(std::abs(v) == 0.0);
}

TEST_CASE("phase-only calibration errors preserve element moduli") {
    ComplexVector w = ff_steering(kCfg, -0.2);
    CalibrationError phase_only;
    phase_only.phase_bound = M_PI / 8.0;
    phase_only.amplitude_low = phase_only.amplitude_high = 1.0;
    RandomStream rng(11);
    const ComplexVector out = apply_calibration_errors(w, phase_only, rng);
    for (std::size_t i = 0; i < w.size(); ++i) {
        CHECK(std::abs(out[i]) == Catch::Approx(std::abs(w[i])).margin(1e-14));
    }
}

TEST_CASE("calibration errors deterministic under a fixed seed, subarray blocks constant") {
    ComplexVector w(16, cplx{1.0, 0.0});
    CalibrationError err;
    err.subarray_size = 4;
    RandomStream r1(42), r2(42);
    const ComplexVector a = apply_calibration_errors(w, err, r1);
    const ComplexVector b = apply_calibration_errors(w, err, r2);
    for (std::size_t i = 0; i < w.size(); ++i) CHECK(a[i] == b[i]);
    for (std::size_t i = 0; i < w.size(); i += 4) {
        CHECK(a[i] == a[i + 1]);
        CHECK(a[i] == a[i + 3]);
    }
}

TEST_CASE("receive_beam_profile matched filter and determinism") {
    const PolarPoint p(0.15, 9.0);
    ChannelRealization h{nf_steering(kCfg, p), p, cplx{1.0, 0.0}, false};
    Codebook book;
    book.kind = CodebookKind::Polar;
    book.codewords.push_back({nf_steering(kCfg, p), CodewordKind::NearFieldPolar, p.theta, p.range});
    book.angular_grid.push_back(std::sin(p.theta));

    RandomStream rng(1);
    const GainProfile noiseless = receive_beam_profile(h, book, 0.0, rng);
    CHECK(noiseless.power[0] == Catch::Approx(1.0).margin(1e-12));

    RandomStream ra(5), rb(5);
    const GainProfile pa = receive_beam_profile(h, book, 0.1, ra);
    const GainProfile pb = receive_beam_profile(h, book, 0.1, rb);
    CHECK(pa.measurement[0] == pb.measurement[0]);
}

TEST_CASE("orthogonal DFT book isolates an on-grid far-field channel") {
    const Codebook book = dft_codebook(kCfg, -1.0, 1.0);
    const std::size_t pick = 97;
    ComplexVector hv = book.codewords[pick].vector;
    for (cplx& z : hv) z *= std::sqrt(256.0);
    ChannelRealization h{hv, PolarPoint(book.codewords[pick].beam_angle, 1e6), cplx{1.0, 0.0}, false};
    RandomStream rng(1);
    const GainProfile prof = receive_beam_profile(h, book, 0.0, rng);
    for (std::size_t i = 0; i < prof.power.size(); ++i) {
        if (i == pick) {
            CHECK(prof.power[i] == Catch::Approx(256.0).epsilon(1e-9));
        } else {
            CHECK(prof.power[i] < 1e-16);
        }
    }
}

TEST_CASE("measured power matches |wh|^2 + sigma^2 in expectation") {
    const PolarPoint p(0.0, 20.0);
    ChannelRealization h{nf_steering(kCfg, p), p, cplx{1.0, 0.0}, false};
    Codebook book;
    book.kind = CodebookKind::DFT;
    book.codewords.push_back({ff_steering(kCfg, 0.02), CodewordKind::FarFieldDFT, 0.02, std::nullopt});
    book.angular_grid.push_back(std::sin(0.02));
    const double s2 = 0.25;
    const double mu2 = std::norm(inner_product(book.codewords[0].vector, h.vector));

    RandomStream rng(123);
    const int draws = 10000;
    double acc = 0.0;
    for (int i = 0; i < draws; ++i) {
        acc += receive_beam_profile(h, book, s2, rng).power[0];
    }
    const double mean = acc / draws;
    const double var = s2 * s2 + 2.0 * s2 * mu2;  // variance of |mu + n|^2
    const double se = std::sqrt(var / draws);
    CHECK(std::fabs(mean - (mu2 + s2)) < 3.0 * se);
}
