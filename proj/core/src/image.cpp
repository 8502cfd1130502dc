#include "pgrestore/image.hpp"

#include <cmath>
#include <string>

namespace pgr {

void require_same_shape(const Image& a, const Image& b, const char* where) {
    if (!a.same_shape(b))
        throw std::invalid_argument(std::string(where) + ": image shape mismatch");
}

Image operator+(const Image& a, const Image& b) {
    require_same_shape(a, b, "operator+");
    Image r(a.width, a.height);
    for (std::size_t i = 0; i < a.size(); ++i) r.data[i] = a.data[i] + b.data[i];
    return r;
}

Image operator-(const Image& a, const Image& b) {
    require_same_shape(a, b, "operator-");
    Image r(a.width, a.height);
    for (std::size_t i = 0; i < a.size(); ++i) r.data[i] = a.data[i] - b.data[i];
    return r;
}

Image operator*(double s, const Image& a) {
    Image r(a.width, a.height);
    for (std::size_t i = 0; i < a.size(); ++i) r.data[i] = s * a.data[i];
    return r;
}

double dot(const Image& a, const Image& b) {
    require_same_shape(a, b, "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a.data[i] * b.data[i];
    return s;
}

double norm2sq(const Image& a) { return dot(a, a); }
double norm2(const Image& a) { return std::sqrt(norm2sq(a)); }

double max_abs(const Image& a) {
    double m = 0.0;
    for (double v : a.data) m = std::max(m, std::abs(v));
    return m;
}

bool all_finite(const Image& a) {
    for (double v : a.data)
        if (!std::isfinite(v)) return false;
    return true;
}

}  // namespace pgr
