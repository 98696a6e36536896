#include "abfield/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <numbers>

#include <fftw3.h>
#include <fmt/format.h>

#include "abfield/errors.hpp"

namespace abfield {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Grid::Grid(std::size_t n, double x_min, double x_max) : x_min_(x_min), x_max_(x_max) {
  if (n < 2 || !std::has_single_bit(n)) {
    throw DomainError(fmt::format("Grid: point count must be a power of two (got {})", n));
  }
  if (!(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max)) {
    throw DomainError("Grid: requires finite x_min < x_max");
  }
  dx_ = (x_max - x_min) / static_cast<double>(n);
  positions_.resize(n);
  wavenumbers_.resize(n);
  const double dk = 2.0 * std::numbers::pi / (x_max - x_min);
  const auto half = static_cast<std::ptrdiff_t>(n / 2);
  for (std::size_t j = 0; j < n; ++j) {
    positions_[j] = x_min + static_cast<double>(j) * dx_;
    const auto signed_j = static_cast<std::ptrdiff_t>(j);
    wavenumbers_[j] = dk * static_cast<double>(signed_j < half ? signed_j : signed_j - static_cast<std::ptrdiff_t>(n));
  }
}

SpectralWorkspace::SpectralWorkspace(std::size_t n) : n_(n) {
  std::lock_guard lock(planner_mutex());
  data_ = reinterpret_cast<std::complex<double>*>(fftw_malloc(sizeof(fftw_complex) * n));
  if (data_ == nullptr) throw std::bad_alloc();
  auto* raw = reinterpret_cast<fftw_complex*>(data_);
  const int size = static_cast<int>(n);
  // ESTIMATE planning is deterministic, which keeps reruns bit-identical.
  forward_plan_ = fftw_plan_dft_1d(size, raw, raw, FFTW_FORWARD, FFTW_ESTIMATE);
  backward_plan_ = fftw_plan_dft_1d(size, raw, raw, FFTW_BACKWARD, FFTW_ESTIMATE);
  std::fill(data_, data_ + n, std::complex<double>{});
}

SpectralWorkspace::~SpectralWorkspace() { release(); }

SpectralWorkspace::SpectralWorkspace(SpectralWorkspace&& other) noexcept
    : n_(std::exchange(other.n_, 0)),
      data_(std::exchange(other.data_, nullptr)),
      forward_plan_(std::exchange(other.forward_plan_, nullptr)),
      backward_plan_(std::exchange(other.backward_plan_, nullptr)) {}

SpectralWorkspace& SpectralWorkspace::operator=(SpectralWorkspace&& other) noexcept {
  if (this != &other) {
    release();
    n_ = std::exchange(other.n_, 0);
    data_ = std::exchange(other.data_, nullptr);
    forward_plan_ = std::exchange(other.forward_plan_, nullptr);
    backward_plan_ = std::exchange(other.backward_plan_, nullptr);
  }
  return *this;
}

void SpectralWorkspace::release() noexcept {
  if (data_ == nullptr) return;
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
  fftw_free(data_);
  data_ = nullptr;
}

void SpectralWorkspace::forward() noexcept { fftw_execute(static_cast<fftw_plan>(forward_plan_)); }

void SpectralWorkspace::backward() noexcept {
  fftw_execute(static_cast<fftw_plan>(backward_plan_));
  const double scale = 1.0 / static_cast<double>(n_);
  for (std::size_t j = 0; j < n_; ++j) data_[j] *= scale;
}

}  // namespace abfield
