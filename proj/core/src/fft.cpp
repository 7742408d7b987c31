#include "nlseg/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <new>

#include "nlseg/error.hpp"

namespace nlseg {

namespace {

// The FFTW planner is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

} // namespace

Fft2d::Fft2d(std::size_t n) : n_(n) {
  if (n < 2) throw InvalidArgument("FFT size must be >= 2");
  auto* buf = fftw_alloc_complex(n * n);
  if (buf == nullptr) throw std::bad_alloc();
  data_ = buf;
  const int ni = static_cast<int>(n);
  std::lock_guard lock(planner_mutex());
  plan_forward_ = fftw_plan_dft_2d(ni, ni, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  plan_inverse_ = fftw_plan_dft_2d(ni, ni, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  if (plan_forward_ == nullptr || plan_inverse_ == nullptr) {
    release();
    throw NumericalError("FFTW plan creation failed");
  }
}

Fft2d::~Fft2d() { release(); }

Fft2d::Fft2d(Fft2d&& other) noexcept
    : n_(other.n_), data_(other.data_), plan_forward_(other.plan_forward_),
      plan_inverse_(other.plan_inverse_) {
  other.n_ = 0;
  other.data_ = nullptr;
  other.plan_forward_ = nullptr;
  other.plan_inverse_ = nullptr;
}

Fft2d& Fft2d::operator=(Fft2d&& other) noexcept {
  if (this != &other) {
    release();
    n_ = other.n_;
    data_ = other.data_;
    plan_forward_ = other.plan_forward_;
    plan_inverse_ = other.plan_inverse_;
    other.n_ = 0;
    other.data_ = nullptr;
    other.plan_forward_ = nullptr;
    other.plan_inverse_ = nullptr;
  }
  return *this;
}

void Fft2d::release() noexcept {
  {
    std::lock_guard lock(planner_mutex());
    if (plan_forward_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(plan_forward_));
    if (plan_inverse_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(plan_inverse_));
  }
  if (data_ != nullptr) fftw_free(data_);
  plan_forward_ = nullptr;
  plan_inverse_ = nullptr;
  data_ = nullptr;
}

std::span<std::complex<double>> Fft2d::buffer() noexcept {
  // fftw_complex is layout-compatible with std::complex<double>.
  return {reinterpret_cast<std::complex<double>*>(data_), n_ * n_};
}

std::span<const std::complex<double>> Fft2d::buffer() const noexcept {
  return {reinterpret_cast<const std::complex<double>*>(data_), n_ * n_};
}

void Fft2d::load(const ImageGrid& g) {
  if (g.n() != n_) throw InvalidArgument("Fft2d::load: shape mismatch");
  auto buf = buffer();
  const auto src = g.data();
  for (std::size_t k = 0; k < src.size(); ++k) buf[k] = {src[k], 0.0};
}

void Fft2d::forward() { fftw_execute(static_cast<fftw_plan>(plan_forward_)); }

void Fft2d::inverse() {
  fftw_execute(static_cast<fftw_plan>(plan_inverse_));
  const double scale = 1.0 / static_cast<double>(n_ * n_);
  for (auto& z : buffer()) z *= scale;
}

} // namespace nlseg
