#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "abfield/branches.hpp"
#include "abfield/errors.hpp"
#include "abfield/propagator.hpp"

using namespace abfield;

namespace {

std::shared_ptr<const Grid> make_grid(std::size_t n = 4096, double x_min = -400.0, double x_max = 400.0) {
  return std::make_shared<Grid>(n, x_min, x_max);
}

double distance(const GridState& a, const GridState& b) {
  double sum = 0.0;
  for (std::size_t j = 0; j < a.psi.size(); ++j) sum += std::norm(a.psi[j] - b.psi[j]);
  return std::sqrt(sum * a.grid->dx());
}

// Smooth, time-dependent, anharmonic: exercises the splitting error.
Potential driven_well() {
  return [](std::span<const double> x, double t, std::span<double> out) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double y = x[j] / 40.0;
      out[j] = 0.02 * y * y + 0.001 * y * y * y * y + 0.01 * std::sin(0.05 * t) * y;
    }
  };
}

}  // namespace

TEST(Grid, LayoutAndSpacing) {
  const Grid g(8, 0.0, 8.0);
  EXPECT_DOUBLE_EQ(g.dx(), 1.0);
  EXPECT_DOUBLE_EQ(g.positions()[3], 3.0);
  const double dk = 2.0 * std::numbers::pi / 8.0;
  const std::vector<double> k(g.wavenumbers().begin(), g.wavenumbers().end());
  EXPECT_DOUBLE_EQ(k[0], 0.0);
  EXPECT_DOUBLE_EQ(k[1], dk);
  EXPECT_DOUBLE_EQ(k[4], -4.0 * dk);
  EXPECT_DOUBLE_EQ(k[7], -dk);
  EXPECT_THROW(Grid(100, 0.0, 1.0), DomainError);
  EXPECT_THROW(Grid(64, 1.0, 1.0), DomainError);
}

TEST(Grid, TransformRoundTripIsIdentity) {
  SpectralWorkspace ws(1024);
  auto buf = ws.buffer();
  std::vector<Complex> original(1024);
  for (std::size_t j = 0; j < original.size(); ++j) {
    original[j] = Complex(std::cos(0.37 * j) + 0.1 * j / 1024.0, std::sin(1.3 * j));
    buf[j] = original[j];
  }
  ws.forward();
  ws.backward();
  for (std::size_t j = 0; j < original.size(); ++j) EXPECT_LT(std::abs(buf[j] - original[j]), 1e-13);
}

TEST(Grid, ForwardTransformOfPlaneWave) {
  const Grid g(64, 0.0, 64.0);
  SpectralWorkspace ws(64);
  auto buf = ws.buffer();
  const double k3 = g.wavenumbers()[3];
  for (std::size_t j = 0; j < 64; ++j) buf[j] = std::exp(Complex(0.0, k3 * g.positions()[j]));
  ws.forward();
  EXPECT_NEAR(std::abs(buf[3]), 64.0, 1e-10);
  EXPECT_LT(std::abs(buf[5]), 1e-10);
}

TEST(Propagator, GaussianInitialMoments) {
  auto grid = make_grid();
  auto s = init_gaussian(grid, 12.5, -0.7, 20.0);
  EXPECT_NEAR(s.norm(), 1.0, 1e-12);
  Propagator prop(grid);
  const auto m = prop.moments(s);
  EXPECT_NEAR(m.mean_x, 12.5, 1e-8);
  EXPECT_NEAR(m.mean_p, -0.7, 1e-8);
  EXPECT_NEAR(m.std_x, 20.0, 20.0 * 1e-6);
  EXPECT_NEAR(m.std_p, 1.0 / 40.0, 1e-6 / 40.0);
  EXPECT_GE(m.std_x * m.std_p, 0.5 * (1.0 - 1e-6));
}

TEST(Propagator, GaussianPreconditions) {
  auto grid = make_grid(1024, -100.0, 100.0);
  EXPECT_THROW(init_gaussian(grid, 0.0, 0.0, 0.5), DomainError);
  EXPECT_THROW(init_gaussian(grid, 80.0, 0.0, 10.0), DomainError);
  EXPECT_NO_THROW(init_gaussian(grid, 0.0, 0.0, 10.0));
}

TEST(Propagator, FreeSpreading) {
  auto grid = make_grid(4096, -600.0, 600.0);
  const double sigma0 = 10.0, mass = 1.0;
  auto s = init_gaussian(grid, 0.0, 0.0, sigma0);
  Propagator prop(grid, mass);
  const auto V = zero_potential();
  for (double t_end : {100.0, 300.0, 600.0}) {
    prop.evolve(s, V, t_end, 0.1);
    const double expected = sigma0 * std::sqrt(1.0 + std::pow(t_end / (2.0 * mass * sigma0 * sigma0), 2));
    EXPECT_NEAR(prop.moments(s).std_x, expected, 1e-6 * expected) << "t=" << t_end;
  }
}

TEST(Propagator, ConstantPotentialIsGlobalPhase) {
  auto grid = make_grid(2048);
  const auto initial = init_gaussian(grid, 0.0, 0.3, 15.0);
  auto s = initial;
  Propagator prop(grid);
  const double V0 = 0.37, T = 50.0;
  auto reference = initial;
  prop.evolve(reference, zero_potential(), T, 0.05);
  prop.evolve(s, constant_potential(V0), T, 0.05);
  const Complex phase = std::exp(Complex(0.0, -V0 * T));
  for (std::size_t j = 0; j < s.psi.size(); ++j) {
    EXPECT_NEAR(std::abs(s.psi[j]), std::abs(reference.psi[j]), 1e-12);
    EXPECT_LT(std::abs(s.psi[j] - phase * reference.psi[j]), 1e-12);
  }
}

TEST(Propagator, EhrenfestUnderUniformForce) {
  auto grid = make_grid(4096, -800.0, 800.0);
  auto s = init_gaussian(grid, -100.0, 0.0, 20.0);
  Propagator prop(grid);
  const double F = 0.002, T = 200.0;
  prop.evolve(s, uniform_force_potential(F), T, 0.05);
  const auto m = prop.moments(s);
  EXPECT_NEAR(m.mean_p, F * T, 1e-8);
  EXPECT_NEAR(m.mean_x, -100.0 + 0.5 * F * T * T, 1e-6);
}

TEST(Propagator, NormDriftOverTenThousandSteps) {
  auto grid = make_grid();
  auto s = init_gaussian(grid, 0.0, 0.5, 25.0);
  Propagator prop(grid);
  const auto V = driven_well();
  for (int i = 0; i < 10000; ++i) prop.step(s, V, 0.05);
  EXPECT_LE(std::abs(s.norm() - 1.0), 1e-10);
  EXPECT_NEAR(s.t, 500.0, 1e-9);
}

TEST(Propagator, SecondOrderInTimeStep) {
  auto grid = make_grid();
  const auto initial = init_gaussian(grid, -30.0, 0.4, 8.0);
  const auto V = driven_well();
  const double T = 100.0;
  std::vector<GridState> finals;
  for (double dt : {0.4, 0.2, 0.1}) {
    auto s = initial;
    Propagator prop(grid);
    prop.evolve(s, V, T, dt);
    finals.push_back(std::move(s));
  }
  const double ratio = distance(finals[0], finals[1]) / distance(finals[1], finals[2]);
  EXPECT_NEAR(ratio, 4.0, 0.5);
}

TEST(Propagator, TimeReversal) {
  auto grid = make_grid();
  const auto initial = init_gaussian(grid, 10.0, -0.3, 12.0);
  auto s = initial;
  Propagator prop(grid);
  const auto V = driven_well();
  prop.evolve(s, V, 80.0, 0.05);
  prop.evolve(s, V, 0.0, -0.05);
  EXPECT_NEAR(s.t, 0.0, 1e-12);
  EXPECT_LT(distance(s, initial), 1e-8);
}

TEST(Propagator, SpectralAccuracyInGridPoints) {
  const double T = 60.0;
  std::vector<double> norms;
  for (std::size_t n : {2048u, 4096u}) {
    auto grid = make_grid(n);
    auto s = init_gaussian(grid, 0.0, 0.3, 10.0);
    Propagator prop(grid);
    prop.evolve(s, driven_well(), T, 0.05);
    norms.push_back(s.norm());
  }
  EXPECT_LT(std::abs(norms[0] - norms[1]), 1e-10);
}

TEST(Propagator, EvolveRequiresAStep) {
  auto grid = make_grid(1024);
  auto s = init_gaussian(grid, 0.0, 0.0, 10.0);
  Propagator prop(grid);
  EXPECT_THROW(prop.evolve(s, zero_potential(), 0.0, 0.05), DomainError);
}

TEST(Propagator, MeanEnergyWithPotential) {
  auto grid = make_grid();
  auto s = init_gaussian(grid, 0.0, 0.8, 20.0);
  Propagator prop(grid);
  const auto V = constant_potential(0.25);
  const auto m = prop.moments(s, &V);
  ASSERT_TRUE(m.mean_energy.has_value());
  // <p^2>/2 = (p0^2 + (1/(2 sigma))^2)/2.
  EXPECT_NEAR(*m.mean_energy, 0.5 * (0.64 + 1.0 / 1600.0) + 0.25, 1e-10);
}

TEST(Overlap, SelfAndPhase) {
  auto grid = make_grid();
  const auto s = init_gaussian(grid, 0.0, 0.2, 20.0);
  EXPECT_LT(std::abs(overlap(s, s) - Complex(1.0, 0.0)), 1e-12);
  auto rotated = s;
  const Complex phase = std::exp(Complex(0.0, 0.77));
  for (auto& v : rotated.psi) v *= phase;
  EXPECT_LT(std::abs(overlap(s, rotated) - phase), 1e-12);
}

TEST(Overlap, DisplacedGaussians) {
  auto grid = make_grid();
  const double sigma = 20.0;
  for (double dx : {1.0, 10.0, 40.0}) {
    const auto a = init_gaussian(grid, 0.0, 0.0, sigma);
    const auto b = init_gaussian(grid, dx, 0.0, sigma);
    EXPECT_NEAR(std::abs(overlap(a, b)), std::exp(-dx * dx / (8.0 * sigma * sigma)), 1e-6);
  }
}

TEST(Overlap, GridMismatch) {
  const auto a = init_gaussian(make_grid(1024), 0.0, 0.0, 20.0);
  const auto b = init_gaussian(make_grid(2048), 0.0, 0.0, 20.0);
  EXPECT_THROW(overlap(a, b), DomainError);
}

TEST(Kick, ShiftsMomentumExactly) {
  auto grid = make_grid();
  const auto s = init_gaussian(grid, 0.0, 0.1, 20.0);
  Propagator prop(grid);
  const auto kicked = kick(s, 0.25);
  EXPECT_NEAR(prop.moments(kicked).mean_p, 0.35, 1e-10);
  const auto back = kick(kicked, -0.25);
  EXPECT_LT(distance(back, s), 1e-12);
}

TEST(Displace, ShiftsPositionExactly) {
  auto grid = make_grid();
  const auto s = init_gaussian(grid, 5.0, 0.3, 20.0);
  Propagator prop(grid);
  const auto moved = prop.displace(s, 13.7);
  const auto m0 = prop.moments(s);
  const auto m1 = prop.moments(moved);
  EXPECT_NEAR(m1.mean_x, m0.mean_x + 13.7, 1e-10);
  EXPECT_NEAR(m1.std_x, m0.std_x, 1e-10);
  EXPECT_NEAR(m1.mean_p, m0.mean_p, 1e-10);
}

TEST(Displace, PhaseFromShift) {
  auto grid = make_grid();
  const double sigma = 20.0;
  for (double p0 : {0.5, 1.0, -2.0}) {
    const auto s = init_gaussian(grid, 0.0, p0, sigma);
    Propagator prop(grid);
    for (double dx : {0.01, 0.1, sigma / 10.0}) {
      const double expected = -p0 * dx;
      const double measured = std::arg(overlap(s, prop.displace(s, dx)));
      EXPECT_LE(std::abs(wrap_phase(measured - expected)), 0.01 * std::abs(expected)) << "p0=" << p0 << " dx=" << dx;
    }
  }
}
