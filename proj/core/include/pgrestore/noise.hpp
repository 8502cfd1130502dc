#ifndef PGRESTORE_NOISE_HPP
#define PGRESTORE_NOISE_HPP

#include <stdexcept>

namespace pgr {

/// Parameters of the mixed Poisson-Gaussian measurement process:
/// m' = alpha * Poisson(mean) + N(0, sigma^2). The Gaussian mean is fixed
/// at zero. alpha_prime scales the Poisson mean during simulation only.
struct NoiseModel {
    double alpha = 1.0;
    double sigma = 1.0;
    double c = 0.0;
    double alpha_prime = 1.0;

    void validate() const {
        if (alpha <= 0.0) throw std::invalid_argument("NoiseModel: alpha must be positive");
        if (sigma <= 0.0) throw std::invalid_argument("NoiseModel: sigma must be positive");
        if (alpha_prime <= 0.0)
            throw std::invalid_argument("NoiseModel: alpha_prime must be positive");
        if (c != 0.0) throw std::invalid_argument("NoiseModel: Gaussian mean must be zero");
    }
};

/// Box constraint [l, u] on the blurred image and the pixel cap u' on the
/// restored image.
struct Bounds {
    double l = 0.0;
    double u = 1.0;
    double u_prime = 1.0;

    void validate() const {
        if (l < 0.0 || u < l) throw std::invalid_argument("Bounds: need 0 <= l <= u");
        if (u_prime <= 0.0) throw std::invalid_argument("Bounds: u_prime must be positive");
    }
};

}  // namespace pgr

#endif
