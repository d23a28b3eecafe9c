#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace fbe {

/// Real<->half-complex transform engine for one fixed size n.
///
/// Conventions (analytic normalization):
///   to_physical: u_j = sum_{k=0}^{n/2} hat_u_k e^{i k x_j} + conjugate terms,
///                i.e. coefficients go in as-is and come out as function values.
///   to_spectral: hat_u_k = (1/n) sum_j u_j e^{-i k x_j}.
///
/// Instances own their FFTW plans and buffers and are not thread-safe;
/// use fft_for() to obtain a per-thread cached engine.
class Fft {
public:
    explicit Fft(std::size_t n);
    ~Fft();

    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;
    Fft(Fft&& other) noexcept;
    Fft& operator=(Fft&&) = delete;

    std::size_t size() const { return n_; }

    /// spectrum (size n/2+1, bin 0 = mean) -> collocation values (size n)
    void to_physical(std::span<const std::complex<double>> spectrum,
                     std::span<double> values);

    /// collocation values (size n) -> spectrum (size n/2+1, bin 0 = mean)
    void to_spectral(std::span<const double> values,
                     std::span<std::complex<double>> spectrum);

private:
    std::size_t n_;
    void* plan_r2c_ = nullptr;
    void* plan_c2r_ = nullptr;
    double* real_buf_ = nullptr;
    std::complex<double>* cplx_buf_ = nullptr;
};

/// Thread-local engine cache. FFTW planning is serialized internally; the
/// returned reference is valid for the lifetime of the calling thread.
Fft& fft_for(std::size_t n);

}  // namespace fbe
