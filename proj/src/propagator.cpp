#include "abfield/propagator.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "abfield/errors.hpp"

namespace abfield {

Potential zero_potential() {
  return [](std::span<const double>, double, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
  };
}

Potential constant_potential(double V0) {
  return [V0](std::span<const double>, double, std::span<double> out) {
    std::fill(out.begin(), out.end(), V0);
  };
}

Potential uniform_force_potential(double F) {
  return [F](std::span<const double> x, double, std::span<double> out) {
    for (std::size_t j = 0; j < x.size(); ++j) out[j] = -F * x[j];
  };
}

Potential static_potential(std::function<double(double)> shape) {
  return [shape = std::move(shape)](std::span<const double> x, double, std::span<double> out) {
    for (std::size_t j = 0; j < x.size(); ++j) out[j] = shape(x[j]);
  };
}

double GridState::norm() const {
  double sum = 0.0;
  for (const auto& a : psi) sum += std::norm(a);
  return sum * grid->dx();
}

GridState init_gaussian(std::shared_ptr<const Grid> grid, double x0, double p0, double sigma, double hbar) {
  if (!(sigma >= 4.0 * grid->dx())) {
    throw DomainError(fmt::format("init_gaussian: sigma = {} is below the resolution limit 4 dx = {}", sigma,
                                  4.0 * grid->dx()));
  }
  if (x0 - 6.0 * sigma < grid->x_min() || x0 + 6.0 * sigma > grid->x_max()) {
    throw DomainError(fmt::format("init_gaussian: packet at x0 = {} needs 6 sigma = {} of margin inside [{}, {}]", x0,
                                  6.0 * sigma, grid->x_min(), grid->x_max()));
  }
  GridState state{grid, std::vector<Complex>(grid->size()), 0.0};
  const auto x = grid->positions();
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double u = x[j] - x0;
    state.psi[j] = std::exp(Complex(-u * u / (4.0 * sigma * sigma), p0 * u / hbar));
  }
  const double scale = 1.0 / std::sqrt(state.norm());
  for (auto& a : state.psi) a *= scale;
  return state;
}

Complex overlap(const GridState& a, const GridState& b) {
  if (!(*a.grid == *b.grid)) throw DomainError("overlap: states live on different grids");
  Complex sum{};
  for (std::size_t j = 0; j < a.psi.size(); ++j) sum += std::conj(a.psi[j]) * b.psi[j];
  return sum * a.grid->dx();
}

GridState kick(GridState state, double dp, double hbar) {
  const auto x = state.grid->positions();
  for (std::size_t j = 0; j < x.size(); ++j) state.psi[j] *= std::polar(1.0, dp * x[j] / hbar);
  return state;
}

Propagator::Propagator(std::shared_ptr<const Grid> grid, double mass, double hbar)
    : grid_(std::move(grid)), mass_(mass), hbar_(hbar), workspace_(grid_->size()) {
  if (!(mass > 0.0) || !(hbar > 0.0)) throw DomainError("Propagator: mass and hbar must be positive");
  potential_values_.resize(grid_->size());
  scratch_.resize(grid_->size());
  potential_factor_.resize(grid_->size());
  kinetic_factor_.resize(grid_->size());
}

void Propagator::check_grid(const GridState& state) const {
  if (!state.grid || !(*state.grid == *grid_) || state.psi.size() != grid_->size()) {
    throw DomainError("Propagator: state grid does not match the propagator grid");
  }
}

void Propagator::refresh_kinetic(double dt) {
  if (kinetic_dt_ == dt) return;
  const auto k = grid_->wavenumbers();
  for (std::size_t j = 0; j < k.size(); ++j) {
    kinetic_factor_[j] = std::polar(1.0, -hbar_ * k[j] * k[j] * dt / (2.0 * mass_));
  }
  kinetic_dt_ = dt;
}

void Propagator::refresh_potential(const Potential& V, double t, double dt) {
  V(grid_->positions(), t, scratch_);
  if (potential_dt_ == dt && scratch_ == potential_values_) return;
  potential_values_.swap(scratch_);
  for (std::size_t j = 0; j < potential_values_.size(); ++j) {
    potential_factor_[j] = std::polar(1.0, -potential_values_[j] * dt / (2.0 * hbar_));
  }
  potential_dt_ = dt;
}

void Propagator::step(GridState& state, const Potential& V, double dt) {
  check_grid(state);
  refresh_kinetic(dt);
  refresh_potential(V, state.t + 0.5 * dt, dt);
  auto buf = workspace_.buffer();
  const std::size_t n = buf.size();
  for (std::size_t j = 0; j < n; ++j) buf[j] = potential_factor_[j] * state.psi[j];
  workspace_.forward();
  for (std::size_t j = 0; j < n; ++j) buf[j] *= kinetic_factor_[j];
  workspace_.backward();
  for (std::size_t j = 0; j < n; ++j) state.psi[j] = potential_factor_[j] * buf[j];
  state.t += dt;
}

void Propagator::evolve(GridState& state, const Potential& V, double t_final, double dt) {
  if (dt == 0.0) throw DomainError("evolve: dt must be nonzero");
  const double steps = std::round((t_final - state.t) / dt);
  if (steps < 1.0) throw DomainError("evolve: t_final is not reachable in steps of dt from the current time");
  const double t0 = state.t;
  const auto count = static_cast<long long>(steps);
  for (long long i = 0; i < count; ++i) {
    step(state, V, dt);
    // Recompute from the start time so rounding does not accumulate.
    state.t = t0 + static_cast<double>(i + 1) * dt;
  }
}

Moments Propagator::moments(const GridState& state, const Potential* V) {
  check_grid(state);
  const auto x = grid_->positions();
  const auto k = grid_->wavenumbers();
  const std::size_t n = x.size();

  double w = 0.0, sx = 0.0, sxx = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double rho = std::norm(state.psi[j]);
    w += rho;
    sx += rho * x[j];
  }
  const double mean_x = sx / w;
  for (std::size_t j = 0; j < n; ++j) {
    const double u = x[j] - mean_x;
    sxx += std::norm(state.psi[j]) * u * u;
  }

  auto buf = workspace_.buffer();
  std::copy(state.psi.begin(), state.psi.end(), buf.begin());
  workspace_.forward();
  double wk = 0.0, sk = 0.0, skk = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double rho = std::norm(buf[j]);
    wk += rho;
    sk += rho * k[j];
  }
  const double mean_k = sk / wk;
  for (std::size_t j = 0; j < n; ++j) {
    const double u = k[j] - mean_k;
    skk += std::norm(buf[j]) * u * u;
  }

  Moments m;
  m.mean_x = mean_x;
  m.std_x = std::sqrt(sxx / w);
  m.mean_p = hbar_ * mean_k;
  m.std_p = hbar_ * std::sqrt(skk / wk);
  if (V != nullptr) {
    double kinetic = 0.0;
    for (std::size_t j = 0; j < n; ++j) kinetic += std::norm(buf[j]) * k[j] * k[j];
    kinetic *= hbar_ * hbar_ / (2.0 * mass_ * wk);
    std::vector<double> values(n);
    (*V)(x, state.t, values);
    double potential = 0.0;
    for (std::size_t j = 0; j < n; ++j) potential += std::norm(state.psi[j]) * values[j];
    m.mean_energy = kinetic + potential / w;
  }
  return m;
}

GridState Propagator::displace(GridState state, double dx) {
  check_grid(state);
  auto buf = workspace_.buffer();
  std::copy(state.psi.begin(), state.psi.end(), buf.begin());
  workspace_.forward();
  const auto k = grid_->wavenumbers();
  for (std::size_t j = 0; j < k.size(); ++j) buf[j] *= std::polar(1.0, -k[j] * dx);
  workspace_.backward();
  std::copy(buf.begin(), buf.end(), state.psi.begin());
  return state;
}

}  // namespace abfield
