#pragma once

#include <functional>
#include <vector>

#include "mhilb/gauge.hpp"
#include "mhilb/observables.hpp"

namespace mhilb {

// self-adjoint generator of time evolution together with the action
// scale; propagator is exp(-i t H / hbar)
class hamiltonian {
 public:
  hamiltonian(cxmat h, double hbar);

  const cxmat& matrix() const { return h_; }
  double hbar() const { return hbar_; }
  int dim() const { return static_cast<int>(h_.rows()); }

  cxmat propagator(double t) const;

 private:
  cxmat h_;
  double hbar_;
};

state_vector evolve_state(const hamiltonian& ham, double t, const state_vector& psi);

// worst grid-point defect of the finite-difference time derivative
// against -i H psi / hbar; trajectory[k] is the state at t0 + k h
double schrodinger_residual(const hamiltonian& ham, const std::vector<cxvec>& trajectory,
                            double step);

// observable in the moving picture, U(t)^* Y U(t)
observable heisenberg_operator(const hamiltonian& ham, double t, const observable& y0);

// orthonormal basis of the kernel of H; states invariant under the flow
std::vector<cxvec> stationary_states(const hamiltonian& ham, double tol = 1e-9);

struct spectral_line {
  double energy;
  cxmat projection;
};

// eigenvalue clusters of H with their orthogonal projections; the
// projections resolve the identity and reassemble H
std::vector<spectral_line> energy_spectrum(const hamiltonian& ham);

// evaluation functionals of a function space spanned by pointwise
// defined basis functions, restricted to a fixed grid of times
class evaluation_map {
 public:
  evaluation_map(std::vector<std::function<cxd(double)>> basis, std::vector<double> grid);

  const std::vector<double>& grid() const { return grid_; }
  int dim() const { return static_cast<int>(basis_.size()); }

  // value of the function with coefficients x at time t; t must lie on
  // the grid
  cxd apply(double t, const cxvec& x) const;
  // the evaluation row at a grid time
  cxvec row(double t) const;

 private:
  int locate(double t) const;
  std::vector<std::function<cxd(double)>> basis_;
  std::vector<double> grid_;
  std::vector<cxvec> rows_;
};

}  // namespace mhilb
