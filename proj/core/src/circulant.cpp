#include "pgrestore/circulant.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pgrestore/fft.hpp"

namespace pgr {

namespace {

int wrap(int i, int n) {
    int r = i % n;
    return r < 0 ? r + n : r;
}

}  // namespace

CirculantOperator make_circulant(int width, int height, const std::vector<FilterTap>& taps) {
    if (width < 1 || height < 1)
        throw std::invalid_argument("make_circulant: dimensions must be positive");
    Image kernel(width, height);
    for (const auto& t : taps) kernel.at(wrap(t.dx, width), wrap(t.dy, height)) += t.value;
    CirculantOperator op;
    op.width = width;
    op.height = height;
    op.freq = fft2(kernel);
    return op;
}

CirculantOperator make_identity_operator(int width, int height) {
    return make_circulant(width, height, {{0, 0, 1.0}});
}

std::tuple<CirculantOperator, CirculantOperator, CirculantOperator>
make_derivative_operators(int width, int height) {
    if (width < 2 || height < 2)
        throw std::invalid_argument("make_derivative_operators: dimensions must be >= 2");
    CirculantOperator dxx = make_circulant(
        width, height, {{-1, 0, -1.0}, {0, 0, 2.0}, {1, 0, -1.0}});
    CirculantOperator dyy = make_circulant(
        width, height, {{0, -1, -1.0}, {0, 0, 2.0}, {0, 1, -1.0}});
    CirculantOperator dxy = make_circulant(
        width, height, {{0, 0, 1.0}, {1, 0, -1.0}, {0, 1, -1.0}, {1, 1, 1.0}});
    return {std::move(dxx), std::move(dxy), std::move(dyy)};
}

CirculantOperator make_gaussian_psf(int width, int height, double sigma_psf) {
    if (sigma_psf <= 0.0)
        throw std::invalid_argument("make_gaussian_psf: sigma_psf must be positive");
    if (width < 1 || height < 1)
        throw std::invalid_argument("make_gaussian_psf: dimensions must be positive");
    // Sample the Gaussian on the periodic grid using the nearest wrapped distance.
    Image kernel(width, height);
    double sum = 0.0;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            double dx = std::min(x, width - x);
            double dy = std::min(y, height - y);
            double v = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma_psf * sigma_psf));
            kernel.at(x, y) = v;
            sum += v;
        }
    }
    for (double& v : kernel.data) v /= sum;
    CirculantOperator op;
    op.width = width;
    op.height = height;
    op.freq = fft2(kernel);
    return op;
}

CirculantOperator make_psf_from_kernel(int width, int height, const Image& kernel,
                                       int x0, int y0) {
    if (kernel.width > width || kernel.height > height)
        throw std::invalid_argument("make_psf_from_kernel: kernel larger than image");
    std::vector<FilterTap> taps;
    taps.reserve(kernel.size());
    for (int y = 0; y < kernel.height; ++y)
        for (int x = 0; x < kernel.width; ++x)
            taps.push_back({x - x0, y - y0, kernel.at(x, y)});
    return make_circulant(width, height, taps);
}

Image apply(const CirculantOperator& op, const Image& x) {
    if (!op.matches(x)) throw std::invalid_argument("apply: dimension mismatch");
    auto fx = fft2(x);
    for (std::size_t i = 0; i < fx.size(); ++i) fx[i] *= op.freq[i];
    return ifft2_real(fx, op.width, op.height);
}

Image apply_adjoint(const CirculantOperator& op, const Image& x) {
    if (!op.matches(x)) throw std::invalid_argument("apply_adjoint: dimension mismatch");
    auto fx = fft2(x);
    for (std::size_t i = 0; i < fx.size(); ++i) fx[i] *= std::conj(op.freq[i]);
    return ifft2_real(fx, op.width, op.height);
}

Image spatial_kernel(const CirculantOperator& op) {
    return ifft2_real(op.freq, op.width, op.height);
}

double operator_l1_norm(const CirculantOperator& op) {
    Image k = spatial_kernel(op);
    double s = 0.0;
    for (double v : k.data) s += std::abs(v);
    return s;
}

DerivativeStack make_derivative_stack(int width, int height) {
    auto [dxx, dxy, dyy] = make_derivative_operators(width, height);
    return {std::move(dxx), std::move(dxy), std::move(dyy)};
}

HessianField apply_derivatives(const DerivativeStack& d, const Image& g) {
    HessianField f(g.width, g.height);
    f.comps[0] = apply(d.dxx, g).data;
    f.comps[1] = apply(d.dxy, g).data;
    f.comps[2] = apply(d.dyy, g).data;
    return f;
}

Image apply_derivatives_adjoint(const DerivativeStack& d, const HessianField& v) {
    Image cxx(v.width, v.height), cxy(v.width, v.height), cyy(v.width, v.height);
    cxx.data = v.comps[0];
    cxy.data = v.comps[1];
    cyy.data = v.comps[2];
    return apply_adjoint(d.dxx, cxx) + apply_adjoint(d.dxy, cxy) + apply_adjoint(d.dyy, cyy);
}

void scale_operator(CirculantOperator& op, double s) {
    for (auto& f : op.freq) f *= s;
}

}  // namespace pgr
