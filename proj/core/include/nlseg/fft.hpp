#pragma once

#include <complex>
#include <cstddef>
#include <span>

#include "nlseg/image.hpp"

namespace nlseg {

/// In-place 2D complex FFT on an owned n x n buffer (FFTW backend).
///
/// forward() applies the unnormalized DFT with kernel exp(-2 pi i k x / n);
/// inverse() applies the conjugate transform scaled by 1/n^2, so
/// inverse(forward(x)) == x up to round-off. Plans are created with
/// FFTW_ESTIMATE so repeated runs execute the same code path.
class Fft2d {
public:
  explicit Fft2d(std::size_t n);
  ~Fft2d();

  Fft2d(const Fft2d&) = delete;
  Fft2d& operator=(const Fft2d&) = delete;
  Fft2d(Fft2d&& other) noexcept;
  Fft2d& operator=(Fft2d&& other) noexcept;

  [[nodiscard]] std::size_t n() const noexcept { return n_; }
  [[nodiscard]] std::span<std::complex<double>> buffer() noexcept;
  [[nodiscard]] std::span<const std::complex<double>> buffer() const noexcept;

  /// Copies a real grid into the buffer (zero imaginary part).
  void load(const ImageGrid& g);
  void forward();
  void inverse();

private:
  void release() noexcept;

  std::size_t n_ = 0;
  void* data_ = nullptr;
  void* plan_forward_ = nullptr;
  void* plan_inverse_ = nullptr;
};

} // namespace nlseg
