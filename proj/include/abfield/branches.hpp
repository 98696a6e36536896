#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "abfield/propagator.hpp"

namespace abfield {

/// Instantaneous momentum transfer applied at a step boundary.
struct Impulse {
  double time = 0.0;
  double dp = 0.0;
};

/// Everything that acts on the source in one branch.
struct BranchDrive {
  Potential potential;
  std::vector<Impulse> impulses;
};

struct BranchOptions {
  std::size_t sample_every = 10;
  double mass = 1.0;
  double hbar = 1.0;
  /// The overlap phase is unwrapped step by step. A step that turns it by a
  /// quarter turn or more while either end is below this visibility marks
  /// the winding as lost; the phase is then re-anchored to the guide phase at
  /// the next bright step (or at the end of the run). The same jump between
  /// two bright steps is an error.
  double dark_visibility = 0.5;
  double norm_tolerance = 1e-10;
  /// Probability allowed outside [guard_min, guard_max] at any sample.
  std::optional<double> guard_min;
  std::optional<double> guard_max;
  double boundary_probability = 1e-12;
};

struct BranchResult {
  std::vector<double> times;
  std::vector<Complex> overlap;
  std::vector<double> visibility;
  std::vector<double> rel_phase;
  /// (1/hbar) Int <V_L - V_R> dt, averaged over the two branch states, plus
  /// impulse contributions. Tracks the overlap phase when it is well defined.
  std::vector<double> guide_phase;
  std::vector<double> entropy;
  std::vector<Moments> moments_L;
  std::vector<Moments> moments_R;

  GridState final_L;
  GridState final_R;
  Complex final_overlap;
  double final_phase = 0.0;
  bool anchored = false;
  double norm_drift = 0.0;
  double boundary_probability = 0.0;
};

/// Evolves two copies of `initial` under the two drives with identical
/// steppers for round((t_final - initial.t)/dt) steps. Samples at every
/// `sample_every`-th step including step 0. Throws NumericalError on a norm
/// drift or boundary breach, or when the phase cannot be unwrapped.
BranchResult run_branches(const GridState& initial, const BranchDrive& left, const BranchDrive& right,
                          double t_final, double dt, const BranchOptions& options);

BranchResult run_branches(const GridState& initial, const Potential& V_L, const Potential& V_R, double t_final,
                          double dt, const BranchOptions& options);

/// Wrap into (-pi, pi].
double wrap_phase(double phi) noexcept;

/// (P_A, P_B) = ((1 - Re c)/2, (1 + Re c)/2). Throws DomainError if |c| > 1 + 1e-6.
std::pair<double, double> detector_probabilities(Complex c);

/// Von Neumann entropy (nats) of the electron's reduced state, eigenvalues
/// (1 +- |c|)/2 with |c| clamped to 1.
double entanglement_entropy(Complex c) noexcept;

/// |<g1|g2>| for equal-width Gaussians offset by dx in position and dp in
/// momentum: exp(-dx^2/(8 sigma^2) - dp^2 sigma^2 / (2 hbar^2)).
double gaussian_visibility_model(double delta_x, double delta_p, double sigma, double hbar = 1.0);

}  // namespace abfield
