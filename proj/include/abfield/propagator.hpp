#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "abfield/grid.hpp"

namespace abfield {

using Complex = std::complex<double>;

/// Time-dependent potential energy: fills out[j] = V(x[j], t).
using Potential = std::function<void(std::span<const double> x, double t, std::span<double> out)>;

Potential zero_potential();
Potential constant_potential(double V0);
/// V(x) = -F x (uniform force F).
Potential uniform_force_potential(double F);
/// Time-independent potential sampled once on the given grid.
Potential static_potential(std::function<double(double)> shape);

struct GridState {
  std::shared_ptr<const Grid> grid;
  std::vector<Complex> psi;
  double t = 0.0;

  double norm() const;
};

/// Minimum-uncertainty packet exp(-(x-x0)^2/(4 sigma^2) + i p0 x / hbar),
/// normalized. Throws DomainError when sigma < 4 dx or x0 sits within 6 sigma
/// of either end of the grid.
GridState init_gaussian(std::shared_ptr<const Grid> grid, double x0, double p0, double sigma,
                        double hbar = 1.0);

/// Sum conj(a) b dx. Throws DomainError for states on different grids.
Complex overlap(const GridState& a, const GridState& b);

struct Moments {
  double mean_x = 0.0;
  double mean_p = 0.0;
  double std_x = 0.0;
  double std_p = 0.0;
  std::optional<double> mean_energy;
};

/// Multiply by exp(i dp x / hbar).
GridState kick(GridState state, double dp, double hbar = 1.0);

/// Split-operator stepper for H = p^2/2m + V(x, t). Holds its own FFT
/// workspace and exponential caches, so use one instance per thread.
class Propagator {
 public:
  explicit Propagator(std::shared_ptr<const Grid> grid, double mass = 1.0, double hbar = 1.0);

  const Grid& grid() const noexcept { return *grid_; }
  double mass() const noexcept { return mass_; }
  double hbar() const noexcept { return hbar_; }

  /// exp(-iV dt/2h) exp(-iT dt/h) exp(-iV dt/2h) with V sampled at t + dt/2.
  /// Negative dt runs the evolution backward.
  void step(GridState& state, const Potential& V, double dt);

  /// Steps of size dt until state.t reaches t_final; the step count is
  /// round((t_final - t)/dt) and must be at least 1.
  void evolve(GridState& state, const Potential& V, double t_final, double dt);

  /// Position moments by quadrature, momentum moments spectrally. With a
  /// potential, also <H> at the state's time.
  Moments moments(const GridState& state, const Potential* V = nullptr);

  /// Spectral translation psi(x) -> psi(x - dx).
  GridState displace(GridState state, double dx);

 private:
  void check_grid(const GridState& state) const;
  void refresh_kinetic(double dt);
  void refresh_potential(const Potential& V, double t, double dt);

  std::shared_ptr<const Grid> grid_;
  double mass_;
  double hbar_;
  SpectralWorkspace workspace_;

  std::optional<double> kinetic_dt_;
  std::vector<Complex> kinetic_factor_;

  std::optional<double> potential_dt_;
  std::vector<double> potential_values_;
  std::vector<double> scratch_;
  std::vector<Complex> potential_factor_;
};

}  // namespace abfield
