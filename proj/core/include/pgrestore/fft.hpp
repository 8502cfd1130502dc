#ifndef PGRESTORE_FFT_HPP
#define PGRESTORE_FFT_HPP

#include <complex>
#include <vector>

#include "pgrestore/image.hpp"

namespace pgr {

// Thin 2-D DFT front end over FFTW. Plan creation is serialized internally
// (FFTW planners are not thread safe); execution uses per-call buffers.
std::vector<std::complex<double>> fft2(const Image& img);

// Inverse transform, returns the real part scaled by 1/(w*h).
Image ifft2_real(const std::vector<std::complex<double>>& freq, int width, int height);

}  // namespace pgr

#endif
