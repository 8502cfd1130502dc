#ifndef PGRESTORE_IMAGE_HPP
#define PGRESTORE_IMAGE_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace pgr {

/// Real-valued 2-D pixel grid stored row-major in double precision.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    Image() = default;
    Image(int w, int h, double fill = 0.0) : width(w), height(h) {
        if (w <= 0 || h <= 0)
            throw std::invalid_argument("Image: dimensions must be positive");
        data.assign(static_cast<std::size_t>(w) * h, fill);
    }

    std::size_t size() const { return data.size(); }

    double& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }

    bool same_shape(const Image& o) const { return width == o.width && height == o.height; }
};

// Elementwise helpers used all over the ADMM loop.
Image operator+(const Image& a, const Image& b);
Image operator-(const Image& a, const Image& b);
Image operator*(double s, const Image& a);

double dot(const Image& a, const Image& b);
double norm2(const Image& a);            // Euclidean norm
double norm2sq(const Image& a);
double max_abs(const Image& a);
bool all_finite(const Image& a);

void require_same_shape(const Image& a, const Image& b, const char* where);

}  // namespace pgr

#endif
