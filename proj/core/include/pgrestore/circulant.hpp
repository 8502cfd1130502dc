#ifndef PGRESTORE_CIRCULANT_HPP
#define PGRESTORE_CIRCULANT_HPP

#include <complex>
#include <tuple>
#include <vector>

#include "pgrestore/image.hpp"

namespace pgr {

/// Periodic 2-D convolution operator held as its frequency response.
struct CirculantOperator {
    int width = 0;
    int height = 0;
    std::vector<std::complex<double>> freq;

    bool matches(const Image& img) const {
        return width == img.width && height == img.height;
    }
};

/// Per-pixel triplet (D_xx g, D_xy g, D_yy g) of second derivatives.
struct HessianField {
    int width = 0;
    int height = 0;
    // comps[0] = xx, comps[1] = xy, comps[2] = yy
    std::vector<double> comps[3];

    HessianField() = default;
    HessianField(int w, int h) : width(w), height(h) {
        for (auto& c : comps) c.assign(static_cast<std::size_t>(w) * h, 0.0);
    }
    std::size_t pixels() const { return static_cast<std::size_t>(width) * height; }
    bool same_shape(const HessianField& o) const {
        return width == o.width && height == o.height;
    }
};

/// A single filter tap at offset (dx, dy), wrapped periodically.
struct FilterTap {
    int dx;
    int dy;
    double value;
};

// Builds the operator whose action is circular convolution with the given taps.
CirculantOperator make_circulant(int width, int height, const std::vector<FilterTap>& taps);

CirculantOperator make_identity_operator(int width, int height);

// Second-derivative filters under periodic boundary: [-1,2,-1] along x,
// its transpose along y, and the 2x2 mixed kernel [[1,-1],[-1,1]].
// Returned in the order (D_xx, D_xy, D_yy).
std::tuple<CirculantOperator, CirculantOperator, CirculantOperator>
make_derivative_operators(int width, int height);

// Normalized (unit DC gain) periodic Gaussian blur.
CirculantOperator make_gaussian_psf(int width, int height, double sigma_psf);

// Operator built from an arbitrary kernel image; tap (x, y) of the kernel
// maps to offset (x - x0, y - y0). DC gain is left as-is.
CirculantOperator make_psf_from_kernel(int width, int height, const Image& kernel,
                                       int x0, int y0);

Image apply(const CirculantOperator& op, const Image& x);
Image apply_adjoint(const CirculantOperator& op, const Image& x);

// Spatial kernel of the operator (first column of the circulant matrix,
// reshaped); used for the induced-infinity-norm bound.
Image spatial_kernel(const CirculantOperator& op);

// Max absolute row sum ||H||_1 = sum of |kernel| taps.
double operator_l1_norm(const CirculantOperator& op);

// Dg and its adjoint D^T v = D_xx^T v_xx + D_xy^T v_xy + D_yy^T v_yy.
struct DerivativeStack {
    CirculantOperator dxx, dxy, dyy;
};
DerivativeStack make_derivative_stack(int width, int height);

HessianField apply_derivatives(const DerivativeStack& d, const Image& g);
Image apply_derivatives_adjoint(const DerivativeStack& d, const HessianField& v);

void scale_operator(CirculantOperator& op, double s);

}  // namespace pgr

#endif
