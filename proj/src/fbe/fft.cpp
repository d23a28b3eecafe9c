#include "fbe/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace fbe {

namespace {
// FFTW plan creation/destruction is not thread-safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

Fft::Fft(std::size_t n) : n_(n) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    real_buf_ = fftw_alloc_real(n_);
    cplx_buf_ = reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(n_ / 2 + 1));
    if (!real_buf_ || !cplx_buf_) throw std::bad_alloc();
    plan_r2c_ = fftw_plan_dft_r2c_1d(static_cast<int>(n_), real_buf_,
                                     reinterpret_cast<fftw_complex*>(cplx_buf_),
                                     FFTW_ESTIMATE);
    plan_c2r_ = fftw_plan_dft_c2r_1d(static_cast<int>(n_),
                                     reinterpret_cast<fftw_complex*>(cplx_buf_),
                                     real_buf_, FFTW_ESTIMATE);
}

Fft::~Fft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (plan_r2c_) fftw_destroy_plan(static_cast<fftw_plan>(plan_r2c_));
    if (plan_c2r_) fftw_destroy_plan(static_cast<fftw_plan>(plan_c2r_));
    fftw_free(real_buf_);
    fftw_free(cplx_buf_);
}

Fft::Fft(Fft&& other) noexcept
    : n_(other.n_),
      plan_r2c_(other.plan_r2c_),
      plan_c2r_(other.plan_c2r_),
      real_buf_(other.real_buf_),
      cplx_buf_(other.cplx_buf_) {
    other.plan_r2c_ = nullptr;
    other.plan_c2r_ = nullptr;
    other.real_buf_ = nullptr;
    other.cplx_buf_ = nullptr;
}

void Fft::to_physical(std::span<const std::complex<double>> spectrum,
                      std::span<double> values) {
    if (spectrum.size() != n_ / 2 + 1 || values.size() != n_) {
        throw std::invalid_argument("Fft::to_physical: size mismatch");
    }
    for (std::size_t k = 0; k <= n_ / 2; ++k) cplx_buf_[k] = spectrum[k];
    // c2r requires purely real DC and Nyquist bins.
    cplx_buf_[0] = {cplx_buf_[0].real(), 0.0};
    cplx_buf_[n_ / 2] = {cplx_buf_[n_ / 2].real(), 0.0};
    fftw_execute(static_cast<fftw_plan>(plan_c2r_));
    for (std::size_t j = 0; j < n_; ++j) values[j] = real_buf_[j];
}

void Fft::to_spectral(std::span<const double> values,
                      std::span<std::complex<double>> spectrum) {
    if (spectrum.size() != n_ / 2 + 1 || values.size() != n_) {
        throw std::invalid_argument("Fft::to_spectral: size mismatch");
    }
    for (std::size_t j = 0; j < n_; ++j) real_buf_[j] = values[j];
    fftw_execute(static_cast<fftw_plan>(plan_r2c_));
    const double scale = 1.0 / static_cast<double>(n_);
    for (std::size_t k = 0; k <= n_ / 2; ++k) spectrum[k] = cplx_buf_[k] * scale;
}

Fft& fft_for(std::size_t n) {
    thread_local std::map<std::size_t, Fft> cache;
    return cache.try_emplace(n, n).first->second;
}

}  // namespace fbe
