#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace abfield {

/// Uniform periodic grid x_j = x_min + j dx, j < n, with the conjugate
/// wavenumbers in FFT order (0, dk, ..., -dk).
class Grid {
 public:
  Grid(std::size_t n, double x_min, double x_max);

  std::size_t size() const noexcept { return positions_.size(); }
  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  double dx() const noexcept { return dx_; }
  double length() const noexcept { return x_max_ - x_min_; }

  std::span<const double> positions() const noexcept { return positions_; }
  std::span<const double> wavenumbers() const noexcept { return wavenumbers_; }

  bool operator==(const Grid& other) const noexcept {
    return size() == other.size() && x_min_ == other.x_min_ && x_max_ == other.x_max_;
  }

 private:
  double x_min_;
  double x_max_;
  double dx_;
  std::vector<double> positions_;
  std::vector<double> wavenumbers_;
};

/// In-place FFTW transforms on an owned buffer. One per worker thread.
/// backward() includes the 1/n normalization, so forward then backward is
/// the identity.
class SpectralWorkspace {
 public:
  explicit SpectralWorkspace(std::size_t n);
  ~SpectralWorkspace();
  SpectralWorkspace(const SpectralWorkspace&) = delete;
  SpectralWorkspace& operator=(const SpectralWorkspace&) = delete;
  SpectralWorkspace(SpectralWorkspace&& other) noexcept;
  SpectralWorkspace& operator=(SpectralWorkspace&& other) noexcept;

  std::span<std::complex<double>> buffer() noexcept { return {data_, n_}; }
  std::size_t size() const noexcept { return n_; }

  void forward() noexcept;
  void backward() noexcept;

 private:
  void release() noexcept;

  std::size_t n_ = 0;
  std::complex<double>* data_ = nullptr;
  void* forward_plan_ = nullptr;
  void* backward_plan_ = nullptr;
};

}  // namespace abfield
