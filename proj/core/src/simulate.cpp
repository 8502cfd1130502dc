#include "pgrestore/simulate.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "pgrestore/image_io.hpp"

namespace pgr {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& s : s_) s = splitmix64(sm);
}

// xoshiro256++
std::uint64_t Rng::next_u64() {
    std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform() {
    // 53-bit mantissa, strictly inside (0, 1)
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

long Rng::poisson(double mean) {
    if (mean < 0.0) throw std::domain_error("poisson: negative mean");
    if (mean == 0.0) return 0;
    if (mean < 30.0) {
        // inversion by sequential search
        double p = std::exp(-mean), cdf = p;
        double u = uniform();
        long k = 0;
        while (u > cdf && k < 10000) {
            ++k;
            p *= mean / static_cast<double>(k);
            cdf += p;
        }
        return k;
    }
    long k = std::lround(mean + std::sqrt(mean) * normal());
    return k < 0 ? 0 : k;
}

Image make_phantom(PhantomKind kind, int width, int height, double peak) {
    if (peak <= 0.0) throw std::invalid_argument("make_phantom: peak must be positive");
    Image img(width, height);
    const double w = width, h = height;
    switch (kind) {
        case PhantomKind::Filaments: {
            // a few sinusoidal filaments with Gaussian cross-section
            struct Curve {
                double y0, amp, freq, phase, thick, weight;
            };
            const Curve curves[] = {
                {0.30, 0.10, 2.0, 0.3, 1.2, 1.0},
                {0.55, 0.14, 1.3, 2.1, 1.6, 0.8},
                {0.75, 0.08, 3.1, 4.0, 1.0, 0.9},
            };
            for (int x = 0; x < width; ++x) {
                double t = x / w;
                for (const auto& c : curves) {
                    double yc = (c.y0 + c.amp * std::sin(2.0 * std::numbers::pi *
                                                         (c.freq * t + c.phase))) *
                                h;
                    for (int y = 0; y < height; ++y) {
                        double d = y - yc;
                        img.at(x, y) +=
                            c.weight * std::exp(-d * d / (2.0 * c.thick * c.thick));
                    }
                }
            }
            break;
        }
        case PhantomKind::Dots: {
            // isolated impulses on a zero background, deterministic layout
            Rng rng(12345);
            int n = std::max(3, width * height / 80);
            for (int i = 0; i < n; ++i) {
                int x = static_cast<int>(rng.uniform() * width);
                int y = static_cast<int>(rng.uniform() * height);
                img.at(std::min(x, width - 1), std::min(y, height - 1)) =
                    0.5 + 0.5 * rng.uniform();
            }
            break;
        }
        case PhantomKind::Grid: {
            int step = std::max(4, width / 6);
            for (int y = 0; y < height; ++y)
                for (int x = 0; x < width; ++x)
                    if (x % step == 0 || y % step == 0) img.at(x, y) = 1.0;
            break;
        }
        case PhantomKind::FromFile:
            throw std::invalid_argument("make_phantom: FromFile handled by caller");
    }
    double m = max_abs(img);
    if (m <= 0.0) throw std::logic_error("make_phantom: degenerate phantom");
    for (double& v : img.data) v *= peak / m;
    return img;
}

CirculantOperator build_psf(const PsfSpec& psf, int width, int height) {
    if (psf.from_file) {
        Image k = read_image(psf.path);
        return make_psf_from_kernel(width, height, k, k.width / 2, k.height / 2);
    }
    return make_gaussian_psf(width, height, psf.sigma_psf);
}

SimResult simulate(const Image& truth, const SimSpec& spec) {
    spec.model.validate();
    for (double v : truth.data)
        if (v < 0.0) throw std::invalid_argument("simulate: truth must be nonnegative");

    SimResult res;
    res.H = build_psf(spec.psf, truth.width, truth.height);
    Image blurred = apply(res.H, truth);

    Rng rng(spec.seed);
    res.measured = Image(truth.width, truth.height);
    long clamped = 0;
    for (std::size_t i = 0; i < blurred.size(); ++i) {
        double mean = spec.model.alpha_prime * blurred.data[i];
        if (mean < 0.0) {
            mean = 0.0;  // FFT round-off below zero
            ++clamped;
        }
        res.measured.data[i] = spec.model.alpha * static_cast<double>(rng.poisson(mean)) +
                               spec.model.sigma * rng.normal();
    }
    if (clamped > 0)
        std::fprintf(stderr, "simulate: clamped %ld negative blurred pixels to 0\n",
                     clamped);
    return res;
}

double mae(const Image& a, const Image& b) {
    require_same_shape(a, b, "mae");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a.data[i] - b.data[i]);
    return s / static_cast<double>(a.size());
}

}  // namespace pgr
