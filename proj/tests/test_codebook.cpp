#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "nfbeam/codebook.hpp"

using namespace nfbeam;

namespace {
const ArrayConfig kCfg = ArrayConfig::half_wavelength(28e9, 256);
constexpr double kCov = 0.8660254037844386;
}

TEST_CASE("dft codebook beam counts") {
    CHECK(dft_codebook(kCfg, -kCov, kCov).codewords.size() == 222);
    CHECK(dft_codebook(kCfg, -1.0, 1.0).codewords.size() == 256);
    CHECK_THROWS_AS(dft_codebook(kCfg, 0.5, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(dft_codebook(kCfg, -2.0, 1.0), std::invalid_argument);
}

TEST_CASE("dft grid is uniform in sin and stays inside the requested interval") {
    const Codebook book = dft_codebook(kCfg, -kCov, kCov);
    const double step = 2.0 / 256;
    for (std::size_t i = 0; i + 1 < book.angular_grid.size(); ++i) {
        CHECK(book.angular_grid[i + 1] - book.angular_grid[i] == Catch::Approx(step).margin(1e-12));
    }
    CHECK(book.angular_grid.front() >= -kCov);
    CHECK(book.angular_grid.back() <= kCov + step);  // last beam center within one cell of the edge
    for (const Codeword& cw : book.codewords) {
        CHECK_FALSE(cw.focus_range.has_value());
        CHECK(norm2(cw.vector) == Catch::Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("full-range dft codewords are mutually orthogonal") {
    const Codebook book = dft_codebook(kCfg, -1.0, 1.0);
    for (std::size_t i : {std::size_t{0}, std::size_t{100}, std::size_t{200}}) {
        CHECK(std::abs(inner_product(book.codewords[i].vector, book.codewords[i + 1].vector)) < 1e-10);
        CHECK(std::abs(inner_product(book.codewords[i].vector, book.codewords[255].vector)) <
              ((i == 255) ? 2.0 : 1e-10));
    }
}

TEST_CASE("boresight range column matches independent beamdepth iteration") {
    const std::vector<double> col = range_column(kCfg, 0.0);
    REQUIRE(col.size() == 8);
    CHECK(col.front() == Catch::Approx(2.0 * kCfg.aperture()).epsilon(1e-12));

    // independent scalar iteration of the beamdepth recurrence
    const double rd = rayleigh_distance(kCfg);
    double r = 2.0 * kCfg.aperture();
    std::vector<double> expect;
    while (r < 0.1 * rd) {
        expect.push_back(r);
        r += r * rd / (rd - 10.0 * r) - r * rd / (rd + 10.0 * r);
    }
    REQUIRE(expect.size() == col.size());
    for (std::size_t i = 0; i < col.size(); ++i) {
        CHECK(col[i] == Catch::Approx(expect[i]).epsilon(1e-12));
    }
    CHECK(col.back() < 35.0);
}

TEST_CASE("polar codebook structure") {
    const Codebook book = polar_codebook(kCfg, -kCov, kCov);
    CHECK(book.angular_grid.size() == 222);

    std::size_t boresight_count = 0;
    for (const Codeword& cw : book.codewords) {
        REQUIRE(cw.focus_range.has_value());
        CHECK(*cw.focus_range <= ebrd(kCfg, cw.beam_angle) + 1e-9);
        CHECK(norm2(cw.vector) == Catch::Approx(1.0).margin(1e-12));
        if (std::fabs(cw.beam_angle) < 0.004) ++boresight_count;
    }
    CHECK(boresight_count == 8);

    // columns at wider angles never exceed the boresight column length
    for (double sin_theta : book.angular_grid) {
        CHECK(range_column(kCfg, std::asin(sin_theta)).size() <= 8);
    }

    // total size strictly below psi * max column length
    CHECK(book.codewords.size() < 222u * 8u);
    CHECK(book.codewords.size() == 1398);
}

TEST_CASE("hierarchical codebook stand-in") {
    const auto books = hierarchical_codebook(kCfg, 2, 25, 25);
    REQUIRE(books.size() == 2);
    CHECK(books[0].codewords.size() == 625);
    CHECK(books[1].codewords.size() == 625);

    // level 2 re-tiles the (default center) winning cell of level 1
    const HierCell region = hierarchical_region(kCfg);
    const HierCell winner = tile_cells(region, 25, 25)[625 / 2];
    for (const Codeword& cw : books[1].codewords) {
        const double x = *cw.focus_range * std::sin(cw.beam_angle);
        const double y = *cw.focus_range * std::cos(cw.beam_angle);
        CHECK(x >= winner.x_lo - 1e-9);
        CHECK(x <= winner.x_hi + 1e-9);
        CHECK(y >= winner.y_lo - 1e-9);
        CHECK(y <= winner.y_hi + 1e-9);
    }

    const auto single = hierarchical_codebook(kCfg, 1, 1, 1);
    REQUIRE(single.size() == 1);
    REQUIRE(single[0].codewords.size() == 1);
    const Codeword& cw = single[0].codewords[0];
    CHECK(*cw.focus_range * std::cos(cw.beam_angle) ==
          Catch::Approx(0.5 * (region.y_lo + region.y_hi)).epsilon(1e-9));

    CHECK_THROWS_AS(hierarchical_codebook(kCfg, 2, 0, 25), std::invalid_argument);
    CHECK_THROWS_AS(hierarchical_codebook(kCfg, 0, 25, 25), std::invalid_argument);
}

TEST_CASE("codebook construction is deterministic") {
    const Codebook a = dft_codebook(kCfg, -kCov, kCov);
    const Codebook b = dft_codebook(kCfg, -kCov, kCov);
    REQUIRE(a.codewords.size() == b.codewords.size());
    for (std::size_t i = 0; i < a.codewords.size(); ++i) {
        CHECK(a.codewords[i].vector == b.codewords[i].vector);
    }
}

TEST_CASE("codebook CSV export") {
    const Codebook book = dft_codebook(kCfg, -0.1, 0.1);
    const std::string path = "test_codebook_export.csv";
    export_codebook_csv(book, path);
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string line;
    std::getline(in, line);
    CHECK(line == "index,kind,beam_angle_rad,sin_theta,focus_range_m");
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == book.codewords.size());
    std::remove(path.c_str());

    const std::string dump = "test_codeword_dump.txt";
    export_codeword_dump(book, dump);
    std::ifstream din(dump);
    REQUIRE(din.good());
    rows = 0;
    while (std::getline(din, line)) ++rows;
    CHECK(rows == book.codewords.size());
    std::remove(dump.c_str());
}
