#include "abfield/branches.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "abfield/errors.hpp"

namespace abfield {

double wrap_phase(double phi) noexcept {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::remainder(phi, two_pi);
  if (r <= -std::numbers::pi) r += two_pi;
  return r;
}

std::pair<double, double> detector_probabilities(Complex c) {
  if (std::abs(c) > 1.0 + 1e-6) {
    throw DomainError(fmt::format("detector_probabilities: |c| = {} exceeds 1", std::abs(c)));
  }
  const double p_a = 0.5 * (1.0 - c.real());
  return {p_a, 1.0 - p_a};
}

double entanglement_entropy(Complex c) noexcept {
  const double m = std::min(std::abs(c), 1.0);
  double s = 0.0;
  for (double lambda : {0.5 * (1.0 + m), 0.5 * (1.0 - m)}) {
    if (lambda > 0.0) s -= lambda * std::log(lambda);
  }
  return s;
}

double gaussian_visibility_model(double delta_x, double delta_p, double sigma, double hbar) {
  if (!(sigma > 0.0)) throw DomainError("gaussian_visibility_model: sigma must be positive");
  const double a = delta_x / sigma;
  const double b = delta_p * sigma / hbar;
  return std::exp(-a * a / 8.0 - b * b / 2.0);
}

namespace {

double expectation(const GridState& s, std::span<const double> values) {
  double sum = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) sum += std::norm(s.psi[j]) * values[j];
  return sum * s.grid->dx();
}

double mean_position(const GridState& s) {
  return expectation(s, s.grid->positions());
}

double outside_probability(const GridState& s, const BranchOptions& o) {
  const auto x = s.grid->positions();
  double sum = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if ((o.guard_min && x[j] < *o.guard_min) || (o.guard_max && x[j] > *o.guard_max)) sum += std::norm(s.psi[j]);
  }
  return sum * s.grid->dx();
}

class BranchRunner {
 public:
  BranchRunner(const GridState& initial, const BranchDrive& left, const BranchDrive& right, double dt,
               const BranchOptions& options)
      : left_(left),
        right_(right),
        dt_(dt),
        options_(options),
        prop_L_(initial.grid, options.mass, options.hbar),
        prop_R_(initial.grid, options.mass, options.hbar),
        state_L_(initial),
        state_R_(initial),
        vl_(initial.grid->size()),
        vr_(initial.grid->size()),
        norm0_(initial.norm()) {}

  BranchResult run(long long steps) {
    const double t0 = state_L_.t;
    const double quarter_turn = 0.5 * std::numbers::pi;
    double guide = apply_impulses(t0);
    double last_guide_rate = guide_rate();

    Complex c = overlap(state_L_, state_R_);
    double phase = std::arg(c);
    bool dark = std::abs(c) < options_.dark_visibility;
    // Set when a step crossed a near-node of the overlap, where the winding
    // of arg c cannot be followed; cleared by re-anchoring to the guide.
    bool ambiguous = false;

    auto anchor = [&] {
      phase = guide + wrap_phase(std::arg(c) - guide);
      result_.anchored = true;
      ambiguous = false;
    };
    auto record = [&] {
      check_health();
      result_.times.push_back(state_L_.t);
      result_.overlap.push_back(c);
      result_.visibility.push_back(std::abs(c));
      result_.rel_phase.push_back(phase);
      result_.guide_phase.push_back(guide);
      result_.entropy.push_back(entanglement_entropy(c));
      result_.moments_L.push_back(prop_L_.moments(state_L_));
      result_.moments_R.push_back(prop_R_.moments(state_R_));
    };

    const std::size_t every = std::max<std::size_t>(options_.sample_every, 1);
    record();
    for (long long i = 0; i < steps; ++i) {
      prop_L_.step(state_L_, left_.potential, dt_);
      prop_R_.step(state_R_, right_.potential, dt_);
      const double t = t0 + static_cast<double>(i + 1) * dt_;
      state_L_.t = state_R_.t = t;
      // Trapezoid on the expectation-value phase rate.
      const double rate = guide_rate();
      guide += 0.5 * (rate + last_guide_rate) * dt_ / options_.hbar;
      last_guide_rate = rate;
      // Impulses sit on step boundaries and act once the step lands there.
      guide += apply_impulses(t);

      // Continuity unwrap at every step: the kinetic terms cancel in
      // d<L|R>/dt, so arg c moves slowly unless |c| passes near zero.
      const Complex next = overlap(state_L_, state_R_);
      const bool next_dark = std::abs(next) < options_.dark_visibility;
      const double increment = wrap_phase(std::arg(next) - std::arg(c));
      if (std::abs(increment) >= quarter_turn) {
        if (!dark && !next_dark) {
          throw NumericalError(fmt::format(
              "phase step {} rad at t = {} is too large to unwrap; reduce dt", increment, t));
        }
        ambiguous = true;
      }
      phase += increment;
      c = next;
      if (ambiguous && !next_dark) anchor();
      dark = next_dark;

      if (i + 1 == steps && ambiguous) anchor();
      if (static_cast<std::size_t>(i + 1) % every == 0) record();
    }
    check_health();

    result_.final_overlap = c;
    result_.final_phase = phase;
    result_.final_L = std::move(state_L_);
    result_.final_R = std::move(state_R_);
    return std::move(result_);
  }

 private:
  double guide_rate() {
    const auto x = state_L_.grid->positions();
    const double t = state_L_.t;
    left_.potential(x, t, vl_);
    right_.potential(x, t, vr_);
    for (std::size_t j = 0; j < vl_.size(); ++j) vl_[j] -= vr_[j];
    return 0.5 * (expectation(state_L_, vl_) + expectation(state_R_, vl_));
  }

  double apply_impulses(double t) {
    const double half = 0.5 * std::abs(dt_);
    double dp_L = 0.0, dp_R = 0.0;
    for (const auto& imp : left_.impulses) {
      if (std::abs(imp.time - t) < half) dp_L += imp.dp;
    }
    for (const auto& imp : right_.impulses) {
      if (std::abs(imp.time - t) < half) dp_R += imp.dp;
    }
    if (dp_L == 0.0 && dp_R == 0.0) return 0.0;
    const double x_mean = 0.5 * (mean_position(state_L_) + mean_position(state_R_));
    if (dp_L != 0.0) state_L_ = kick(std::move(state_L_), dp_L, options_.hbar);
    if (dp_R != 0.0) state_R_ = kick(std::move(state_R_), dp_R, options_.hbar);
    return (dp_R - dp_L) * x_mean / options_.hbar;
  }

  void check_health() {
    for (const GridState* s : {&state_L_, &state_R_}) {
      const double drift = std::abs(s->norm() - norm0_);
      result_.norm_drift = std::max(result_.norm_drift, drift);
      if (drift > options_.norm_tolerance) {
        throw NumericalError(fmt::format("norm drift {:.3e} exceeds tolerance {:.1e} at t = {}", drift,
                                         options_.norm_tolerance, s->t));
      }
      if (options_.guard_min || options_.guard_max) {
        const double p = outside_probability(*s, options_);
        result_.boundary_probability = std::max(result_.boundary_probability, p);
        if (p > options_.boundary_probability) {
          throw NumericalError(fmt::format("boundary breach: probability {:.3e} in the guard band at t = {} "
                                           "(allowed {:.1e}); enlarge the grid",
                                           p, s->t, options_.boundary_probability));
        }
      }
    }
  }

  const BranchDrive& left_;
  const BranchDrive& right_;
  double dt_;
  BranchOptions options_;
  Propagator prop_L_;
  Propagator prop_R_;
  GridState state_L_;
  GridState state_R_;
  std::vector<double> vl_;
  std::vector<double> vr_;
  double norm0_;
  BranchResult result_;
};

}  // namespace

BranchResult run_branches(const GridState& initial, const BranchDrive& left, const BranchDrive& right,
                          double t_final, double dt, const BranchOptions& options) {
  if (dt == 0.0) throw DomainError("run_branches: dt must be nonzero");
  if (!left.potential || !right.potential) throw DomainError("run_branches: both branch potentials are required");
  const double steps = std::round((t_final - initial.t) / dt);
  if (steps < 0.0) throw DomainError("run_branches: t_final lies behind the initial time");
  BranchRunner runner(initial, left, right, dt, options);
  return runner.run(static_cast<long long>(steps));
}

BranchResult run_branches(const GridState& initial, const Potential& V_L, const Potential& V_R, double t_final,
                          double dt, const BranchOptions& options) {
  return run_branches(initial, BranchDrive{V_L, {}}, BranchDrive{V_R, {}}, t_final, dt, options);
}

}  // namespace abfield
