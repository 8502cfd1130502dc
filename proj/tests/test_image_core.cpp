#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>

#include <doctest.h>

#include "oracles.hpp"
#include "pgrestore/circulant.hpp"
#include "pgrestore/image.hpp"
#include "pgrestore/image_io.hpp"

using namespace pgr;

namespace {

Image random_image(int w, int h, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
    oracle::TestRand rand(seed);
    Image img(w, h);
    for (double& v : img.data) v = rand.range(lo, hi);
    return img;
}

}  // namespace

TEST_CASE("image arithmetic helpers") {
    Image a = random_image(5, 4, 1), b = random_image(5, 4, 2);
    Image sum = a + b;
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(sum.data[i] == doctest::Approx(a.data[i] + b.data[i]));

    double d = 0.0, n = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d += a.data[i] * b.data[i];
        n += a.data[i] * a.data[i];
    }
    CHECK(dot(a, b) == doctest::Approx(d).epsilon(1e-12));
    CHECK(norm2sq(a) == doctest::Approx(n).epsilon(1e-12));
    CHECK(norm2(a) == doctest::Approx(std::sqrt(n)).epsilon(1e-12));

    Image c = random_image(4, 5, 3);
    CHECK_THROWS(require_same_shape(a, c, "test"));
}

TEST_CASE("derivative operators annihilate constants") {
    auto [dxx, dxy, dyy] = make_derivative_operators(6, 5);
    Image c(6, 5, 3.7);
    for (const auto* op : {&dxx, &dxy, &dyy}) {
        Image out = apply(*op, c);
        CHECK(max_abs(out) < 1e-12);
    }
}

TEST_CASE("D_xx of an impulse matches the spatial-domain filter") {
    auto [dxx, dxy, dyy] = make_derivative_operators(4, 4);
    Image impulse(4, 4);
    impulse.at(0, 0) = 1.0;
    Image got = apply(dxx, impulse);
    Image want = oracle::circular_convolve(
        impulse, {{-1, 0, -1.0}, {0, 0, 2.0}, {1, 0, -1.0}});
    for (std::size_t i = 0; i < got.size(); ++i)
        CHECK(got.data[i] == doctest::Approx(want.data[i]).epsilon(1e-10));
    // only row 0 is touched
    for (int y = 1; y < 4; ++y)
        for (int x = 0; x < 4; ++x) CHECK(std::abs(got.at(x, y)) < 1e-12);
}

TEST_CASE("D_xy on a separable ramp matches the spatial oracle") {
    auto [dxx, dxy, dyy] = make_derivative_operators(8, 8);
    Image ramp(8, 8);
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) ramp.at(x, y) = double(x) * double(y);
    Image got = apply(dxy, ramp);
    Image want = oracle::circular_convolve(
        ramp, {{0, 0, 1.0}, {1, 0, -1.0}, {0, 1, -1.0}, {1, 1, 1.0}});
    for (std::size_t i = 0; i < got.size(); ++i)
        CHECK(got.data[i] == doctest::Approx(want.data[i]).epsilon(1e-10));
}

TEST_CASE("derivative dimensions below 2 are rejected") {
    CHECK_THROWS_AS(make_derivative_operators(1, 8), std::invalid_argument);
    CHECK_THROWS_AS(make_derivative_operators(8, 1), std::invalid_argument);
}

TEST_CASE("apply: identity, linearity, frequency vs spatial") {
    Image x = random_image(8, 8, 7), y = random_image(8, 8, 8);

    CirculantOperator id = make_identity_operator(8, 8);
    Image same = apply(id, x);
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(same.data[i] == doctest::Approx(x.data[i]).epsilon(1e-12));

    std::vector<FilterTap> taps = {
        {0, 0, 0.4}, {1, 0, -0.3}, {-1, 2, 0.9}, {2, -1, 0.1}};
    CirculantOperator op = make_circulant(8, 8, taps);

    Image lhs = apply(op, 2.0 * x + (-3.0) * y);
    Image rhs = 2.0 * apply(op, x) + (-3.0) * apply(op, y);
    CHECK(max_abs(lhs - rhs) < 1e-10);

    Image want = oracle::circular_convolve(x, taps);
    Image got = apply(op, x);
    CHECK(max_abs(got - want) < 1e-10 * (1.0 + max_abs(want)));
}

TEST_CASE("gaussian blur of an impulse reproduces the wrapped kernel") {
    CirculantOperator psf = make_gaussian_psf(8, 8, 1.2);
    Image impulse(8, 8);
    impulse.at(0, 0) = 1.0;
    Image got = apply(psf, impulse);
    Image kernel = spatial_kernel(psf);
    CHECK(max_abs(got - kernel) < 1e-10);
}

TEST_CASE("apply_adjoint") {
    Image x = random_image(8, 8, 11), y = random_image(8, 8, 12);

    SUBCASE("symmetric kernel: adjoint equals forward") {
        CirculantOperator op =
            make_circulant(8, 8, {{0, 0, 1.0}, {1, 0, 0.5}, {-1, 0, 0.5}});
        CHECK(max_abs(apply(op, x) - apply_adjoint(op, x)) < 1e-12);
    }
    SUBCASE("defining identity <Hx, y> = <x, H^T y>") {
        CirculantOperator op =
            make_circulant(8, 8, {{0, 0, 0.7}, {1, 1, -0.2}, {-2, 0, 0.4}});
        CHECK(dot(apply(op, x), y) ==
              doctest::Approx(dot(x, apply_adjoint(op, y))).epsilon(1e-10));
    }
    SUBCASE("adjoint of shift-by-one is shift-by-minus-one") {
        CirculantOperator shift = make_circulant(8, 8, {{1, 0, 1.0}});
        Image got = apply_adjoint(shift, x);
        Image want = oracle::circular_convolve(x, {{-1, 0, 1.0}});
        CHECK(max_abs(got - want) < 1e-12);
    }
}

TEST_CASE("gaussian PSF normalization") {
    CirculantOperator psf = make_gaussian_psf(16, 16, 1.5);
    CHECK(psf.freq[0].real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(psf.freq[0].imag()) < 1e-12);

    Image c(16, 16, 2.5);
    Image blurred = apply(psf, c);
    CHECK(max_abs(blurred - c) < 1e-10);

    // sub-pixel sigma: near identity
    CirculantOperator tiny = make_gaussian_psf(16, 16, 0.2);
    Image impulse(16, 16);
    impulse.at(4, 4) = 1.0;
    Image out = apply(tiny, impulse);
    CHECK(out.at(4, 4) > 0.95);

    CHECK_THROWS_AS(make_gaussian_psf(8, 8, 0.0), std::invalid_argument);
}

TEST_CASE("operator L1 norm is the sum of absolute taps") {
    CirculantOperator op =
        make_circulant(8, 8, {{0, 0, 0.5}, {1, 0, 0.25}, {0, 1, -0.25}});
    CHECK(operator_l1_norm(op) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("derivative stack adjoint identity") {
    DerivativeStack d = make_derivative_stack(8, 8);
    Image g = random_image(8, 8, 21);
    HessianField v(8, 8);
    oracle::TestRand rand(22);
    for (auto& comp : v.comps)
        for (double& e : comp) e = rand.range(-1.0, 1.0);

    HessianField dg = apply_derivatives(d, g);
    double lhs = 0.0;
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < dg.pixels(); ++i) lhs += dg.comps[c][i] * v.comps[c][i];
    double rhs = dot(g, apply_derivatives_adjoint(d, v));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));

    // adjoint of a constant field is zero (derivatives have zero DC response)
    HessianField ones(8, 8);
    for (auto& comp : ones.comps) std::fill(comp.begin(), comp.end(), 1.0);
    CHECK(max_abs(apply_derivatives_adjoint(d, ones)) < 1e-10);
}

TEST_CASE("image file round trips") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "pgrestore_io_test";
    fs::create_directories(dir);

    SUBCASE("16-bit PGM is bit-exact on integer data") {
        Image img(7, 5);
        oracle::TestRand rand(31);
        for (double& v : img.data) v = std::floor(rand.range(0.0, 65535.0));
        std::string path = (dir / "a.pgm").string();
        write_pgm(path, img, 65535);
        Image back = read_pgm(path);
        CHECK(back.width == 7);
        CHECK(back.height == 5);
        CHECK(max_abs(back - img) == 0.0);
    }
    SUBCASE("CSV round trip is exact for doubles") {
        Image img = random_image(6, 9, 32, -1e3, 1e3);
        img.at(0, 0) = 1.0 / 3.0;
        std::string path = (dir / "b.csv").string();
        write_csv(path, img);
        Image back = read_csv(path);
        CHECK(max_abs(back - img) == 0.0);
    }
    SUBCASE("extension dispatch") {
        Image img = random_image(3, 3, 33);
        std::string path = (dir / "c.csv").string();
        write_image(path, img);
        CHECK(max_abs(read_image(path) - img) == 0.0);
        CHECK_THROWS_AS(write_image((dir / "d.xyz").string(), img), IoError);
    }
    SUBCASE("malformed files are rejected") {
        std::string path = (dir / "bad.pgm").string();
        std::FILE* f = std::fopen(path.c_str(), "wb");
        std::fputs("P5\nnot numbers\n", f);
        std::fclose(f);
        CHECK_THROWS_AS(read_pgm(path), IoError);
        CHECK_THROWS_AS(read_image((dir / "missing.csv").string()), IoError);
    }
    fs::remove_all(dir);
}
