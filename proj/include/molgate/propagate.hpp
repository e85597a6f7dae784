#pragma once

// Time propagation for small dense Hermitian generators. Two steppers, both
// exactly unitary because every step is exp(-i Omega dt) of a Hermitian
// Omega evaluated through an eigendecomposition:
//
//   midpoint - exponential midpoint rule, 2nd order;
//   magnus4  - two-point Gauss-Legendre Magnus expansion, 4th order.
//
// The convergence contract: propagate_converged halves the step until the
// final state moves by less than `tol` under one more halving, and throws
// IntegratorError with diagnostics when the refinement budget runs out.

#include <functional>
#include <utility>
#include <vector>

#include "molgate/errors.hpp"
#include "molgate/linalg.hpp"

namespace molgate {

enum class Stepper { Magnus4, Midpoint };

struct PropagatorSettings {
  Stepper stepper = Stepper::Magnus4;
  double dt = 0.0;       // base step; <= 0 means (t1 - t0) / 256
  double tol = 1e-8;     // convergence contract for propagate_converged
  int max_halvings = 12;
};

using HamiltonianFn = std::function<Matrix(double)>;

namespace detail {

inline Matrix step_generator(const HamiltonianFn& h, double t, double dt,
                             Stepper stepper) {
  if (stepper == Stepper::Midpoint) return h(t + 0.5 * dt) * dt;
  // Gauss-Legendre nodes t_mid -/+ dt*sqrt(3)/6.
  static const double shift = std::sqrt(3.0) / 6.0;
  const Matrix h1 = h(t + (0.5 - shift) * dt);
  const Matrix h2 = h(t + (0.5 + shift) * dt);
  const Matrix comm = h1 * h2 - h2 * h1;  // anti-Hermitian
  return 0.5 * dt * (h1 + h2) +
         imag_unit * (std::sqrt(3.0) / 12.0) * dt * dt * comm;
}

}  // namespace detail

// Evolve psi from t0 to t1 with n uniform steps.
inline Vector propagate_interval(const HamiltonianFn& h, Vector psi, double t0,
                                 double t1, int n_steps,
                                 Stepper stepper = Stepper::Magnus4) {
  const double dt = (t1 - t0) / n_steps;
  for (int k = 0; k < n_steps; ++k) {
    const Matrix omega =
        detail::step_generator(h, t0 + k * dt, dt, stepper);
    psi = expm_i_hermitian(omega, 1.0) * psi;
  }
  return psi;
}

// States at every point of a strictly increasing time grid.
inline std::vector<Vector> propagate(const HamiltonianFn& h, const Vector& psi0,
                                     const std::vector<double>& t_grid,
                                     PropagatorSettings settings = {}) {
  if (t_grid.size() < 2)
    throw IntegratorError("propagate: need at least two grid points");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (t_grid[i] <= t_grid[i - 1])
      throw IntegratorError("propagate: time grid must be strictly increasing");

  const double span = t_grid.back() - t_grid.front();
  const double dt = settings.dt > 0.0 ? settings.dt : span / 256.0;
  std::vector<Vector> traj;
  traj.reserve(t_grid.size());
  traj.push_back(psi0);
  Vector psi = psi0;
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    const double seg = t_grid[i] - t_grid[i - 1];
    const int n = std::max(1, static_cast<int>(std::ceil(seg / dt)));
    psi = propagate_interval(h, psi, t_grid[i - 1], t_grid[i], n,
                             settings.stepper);
    traj.push_back(psi);
  }
  return traj;
}

// Final state under the step-halving convergence contract. Returns the
// converged state and the achieved halving delta.
inline std::pair<Vector, double> propagate_converged(
    const HamiltonianFn& h, const Vector& psi0, double t0, double t1,
    PropagatorSettings settings = {}) {
  const double span = t1 - t0;
  double dt = settings.dt > 0.0 ? settings.dt : span / 256.0;
  int n = std::max(1, static_cast<int>(std::ceil(span / dt)));
  Vector prev = propagate_interval(h, psi0, t0, t1, n, settings.stepper);
  for (int halving = 0; halving < settings.max_halvings; ++halving) {
    n *= 2;
    Vector next = propagate_interval(h, psi0, t0, t1, n, settings.stepper);
    const double delta = state_distance(next, prev);
    if (delta < settings.tol) return {std::move(next), delta};
    prev = std::move(next);
  }
  throw IntegratorError(
      "propagate_converged: step halving did not reach tol after " +
      std::to_string(settings.max_halvings) + " refinements (span " +
      std::to_string(span) + ", final steps " + std::to_string(n) + ")");
}

}  // namespace molgate
