#include "pgrestore/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace pgr {

namespace {
std::mutex planner_mutex;  // fftw_plan_* is not reentrant
}

std::vector<std::complex<double>> fft2(const Image& img) {
    const int w = img.width, h = img.height;
    std::vector<std::complex<double>> in(img.size()), out(img.size());
    for (std::size_t i = 0; i < img.size(); ++i) in[i] = img.data[i];

    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex);
        plan = fftw_plan_dft_2d(h, w, reinterpret_cast<fftw_complex*>(in.data()),
                                reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD,
                                FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
    }
    if (!plan) throw std::runtime_error("fft2: fftw plan creation failed");
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex);
        fftw_destroy_plan(plan);
    }
    return out;
}

Image ifft2_real(const std::vector<std::complex<double>>& freq, int width, int height) {
    if (freq.size() != static_cast<std::size_t>(width) * height)
        throw std::invalid_argument("ifft2_real: frequency array length mismatch");
    std::vector<std::complex<double>> in(freq), out(freq.size());

    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex);
        plan = fftw_plan_dft_2d(height, width, reinterpret_cast<fftw_complex*>(in.data()),
                                reinterpret_cast<fftw_complex*>(out.data()), FFTW_BACKWARD,
                                FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
    }
    if (!plan) throw std::runtime_error("ifft2_real: fftw plan creation failed");
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex);
        fftw_destroy_plan(plan);
    }

    Image img(width, height);
    const double scale = 1.0 / static_cast<double>(img.size());
    for (std::size_t i = 0; i < img.size(); ++i) img.data[i] = out[i].real() * scale;
    return img;
}

}  // namespace pgr
