#ifndef NFBEAM_CODEBOOK_HPP
#define NFBEAM_CODEBOOK_HPP

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "channel.hpp"
#include "geometry.hpp"
#include "numerics.hpp"

namespace nfbeam {

enum class CodewordKind { FarFieldDFT, NearFieldPolar };
enum class CodebookKind { DFT, Polar, HierarchicalLevel };

struct Codeword {
    ComplexVector vector;               // unit norm
    CodewordKind kind;
    double beam_angle;                  // radians
    std::optional<double> focus_range;  // meters; nullopt for far-field beams
};

struct Codebook {
    std::vector<Codeword> codewords;
    CodebookKind kind;
    std::vector<double> angular_grid;  // sorted distinct beam angles, in sin(theta)
};

// Number of beams needed to cover |sin_max - sin_min| at the boresight
// beamwidth 2/N, rounded up. The small guard keeps exact multiples (e.g. the
// full range A = 2 at any N) from rounding to one extra beam.
inline int beam_count(const ArrayConfig& cfg, double sin_min, double sin_max) {
    const double a = sin_max - sin_min;
    return static_cast<int>(std::ceil(a * cfg.n / 2.0 - 1e-9));
}

// Orthogonal-style far-field codebook: beams uniform in sin(theta) at spacing
// 2/N, each centered in its cell. The cos(theta) beam-broadening factor is
// deliberately not applied to the grid; the count above matches the covered
// interval at the boresight width.
inline Codebook dft_codebook(const ArrayConfig& cfg, double sin_min, double sin_max) {
    if (!(sin_min >= -1.0 && sin_min < sin_max && sin_max <= 1.0)) {
        throw std::invalid_argument("dft_codebook: need -1 <= sin_min < sin_max <= 1");
    }
    const int psi = beam_count(cfg, sin_min, sin_max);
    const double step = 2.0 / cfg.n;
    Codebook book;
    book.kind = CodebookKind::DFT;
    book.codewords.reserve(psi);
    book.angular_grid.reserve(psi);
    for (int i = 0; i < psi; ++i) {
        const double s = sin_min + (i + 0.5) * step;
        const double theta = std::asin(s);
        book.codewords.push_back({ff_steering(cfg, theta), CodewordKind::FarFieldDFT, theta, std::nullopt});
        book.angular_grid.push_back(s);
    }
    return book;
}

// Beamdepth-spaced range samples for one angle: start at 2D, emit, advance by
// the local beamdepth; stop once the advanced range passes the EBRD or the
// beamdepth becomes unbounded. Angles whose EBRD does not even reach 2D get a
// single sample at 2D (degenerate column).
inline std::vector<double> range_column(const ArrayConfig& cfg, double theta) {
    const double limit = ebrd(cfg, theta);
    double r = 2.0 * cfg.aperture();
    std::vector<double> out;
    out.push_back(r);
    if (r >= limit) return out;  // degenerate
    for (;;) {
        const auto bd = beamdepth(cfg, theta, r);
        if (!bd.has_value() || *bd <= 0.0) break;
        r += *bd;
        if (r > limit) break;
        out.push_back(r);
    }
    return out;
}

// Near-field polar codebook: the DFT angle grid crossed with the
// beamdepth-spaced range samples, one focused steering vector per cell.
// Columns are stored angle-major with ranges strictly increasing.
inline Codebook polar_codebook(const ArrayConfig& cfg, double sin_min, double sin_max) {
    Codebook dft = dft_codebook(cfg, sin_min, sin_max);
    Codebook book;
    book.kind = CodebookKind::Polar;
    book.angular_grid = dft.angular_grid;
    for (std::size_t i = 0; i < dft.angular_grid.size(); ++i) {
        const double theta = dft.codewords[i].beam_angle;
        for (double r : range_column(cfg, theta)) {
            book.codewords.push_back(
                {nf_steering(cfg, PolarPoint(theta, r)), CodewordKind::NearFieldPolar, theta, r});
        }
    }
    return book;
}

// Axis-aligned cell of the Cartesian tiling used by the hierarchical stand-in.
struct HierCell {
    double x_lo, x_hi, y_lo, y_hi;
    double cx() const { return 0.5 * (x_lo + x_hi); }
    double cy() const { return 0.5 * (y_lo + y_hi); }
};

inline std::vector<HierCell> tile_cells(const HierCell& region, int nx, int ny) {
    std::vector<HierCell> cells;
    cells.reserve(static_cast<std::size_t>(nx) * ny);
    const double dx = (region.x_hi - region.x_lo) / nx;
    const double dy = (region.y_hi - region.y_lo) / ny;
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            cells.push_back({region.x_lo + ix * dx, region.x_lo + (ix + 1) * dx,
                             region.y_lo + iy * dy, region.y_lo + (iy + 1) * dy});
        }
    }
    return cells;
}

// Top-level region for the hierarchical stand-in: lateral extent matching the
// covered angles (|sin| <= sqrt(3)/2 by default) at the boresight EBRD, depth
// from 2D to the boresight EBRD.
inline HierCell hierarchical_region(const ArrayConfig& cfg, double sin_cov = 0.8660254037844386) {
    const double depth = ebrd(cfg, 0.0);
    const double half_width = depth * sin_cov;
    return {-half_width, half_width, 2.0 * cfg.aperture(), depth};
}

inline Codeword cell_codeword(const ArrayConfig& cfg, const HierCell& cell) {
    const double x = cell.cx();
    const double y = cell.cy();
    const PolarPoint p(std::atan2(x, y), std::sqrt(x * x + y * y));
    return {nf_steering(cfg, p), CodewordKind::NearFieldPolar, p.theta, p.range};
}

inline Codebook tiling_codebook(const ArrayConfig& cfg, const HierCell& region, int nx, int ny) {
    if (nx < 1 || ny < 1) throw std::invalid_argument("tiling_codebook: degenerate grid");
    Codebook book;
    book.kind = CodebookKind::HierarchicalLevel;
    for (const HierCell& cell : tile_cells(region, nx, ny)) {
        Codeword cw = cell_codeword(cfg, cell);
        book.angular_grid.push_back(std::sin(cw.beam_angle));
        book.codewords.push_back(std::move(cw));
    }
    return book;
}

// Simplified two-(or K-)level hierarchical codebook: level 1 tiles the whole
// region, each deeper level re-tiles one chosen cell at the same resolution.
// The winning cell is runtime data during an actual search; `winners` fixes
// the descent path for offline construction (defaults to the center cell).
inline std::vector<Codebook> hierarchical_codebook(const ArrayConfig& cfg, int levels, int nx, int ny,
                                                   std::vector<int> winners = {}) {
    if (levels < 1) throw std::invalid_argument("hierarchical_codebook: need at least one level");
    if (nx < 1 || ny < 1) throw std::invalid_argument("hierarchical_codebook: degenerate grid");
    std::vector<Codebook> books;
    HierCell region = hierarchical_region(cfg);
    for (int k = 0; k < levels; ++k) {
        books.push_back(tiling_codebook(cfg, region, nx, ny));
        if (k + 1 == levels) break;
        const std::vector<HierCell> cells = tile_cells(region, nx, ny);
        int win = (static_cast<int>(winners.size()) > k) ? winners[k]
                                                         : static_cast<int>(cells.size()) / 2;
        if (win < 0 || win >= static_cast<int>(cells.size())) {
            throw std::invalid_argument("hierarchical_codebook: winner index out of range");
        }
        region = cells[win];
    }
    return books;
}

inline const char* kind_name(CodewordKind k) {
    return k == CodewordKind::FarFieldDFT ? "FarFieldDFT" : "NearFieldPolar";
}

// CSV of per-codeword metadata. Focus range is empty for far-field beams.
inline void export_codebook_csv(const Codebook& book, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("export_codebook_csv: cannot open " + path);
    out << "index,kind,beam_angle_rad,sin_theta,focus_range_m\n";
    char buf[160];
    for (std::size_t i = 0; i < book.codewords.size(); ++i) {
        const Codeword& cw = book.codewords[i];
        if (cw.focus_range.has_value()) {
            std::snprintf(buf, sizeof buf, "%zu,%s,%.12g,%.12g,%.12g\n", i, kind_name(cw.kind),
                          cw.beam_angle, std::sin(cw.beam_angle), *cw.focus_range);
        } else {
            std::snprintf(buf, sizeof buf, "%zu,%s,%.12g,%.12g,\n", i, kind_name(cw.kind),
                          cw.beam_angle, std::sin(cw.beam_angle));
        }
        out << buf;
    }
}

// Sidecar dump of the complex codeword entries: one row per codeword,
// interleaved real,imag decimal pairs.
inline void export_codeword_dump(const Codebook& book, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("export_codeword_dump: cannot open " + path);
    char buf[64];
    for (const Codeword& cw : book.codewords) {
        for (std::size_t n = 0; n < cw.vector.size(); ++n) {
            std::snprintf(buf, sizeof buf, "%s%.17g,%.17g", n ? "," : "", cw.vector[n].real(),
                          cw.vector[n].imag());
            out << buf;
        }
        out << '\n';
    }
}

}  // namespace nfbeam

#endif
