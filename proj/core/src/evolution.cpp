#include "mhilb/evolution.hpp"

#include <cmath>

#include "mhilb/expm.hpp"

namespace mhilb {

hamiltonian::hamiltonian(cxmat h, double hbar) : h_(std::move(h)), hbar_(hbar) {
  if (h_.rows() != h_.cols() || h_.rows() == 0)
    throw dimension_mismatch("Hamiltonian must be square");
  if (!h_.allFinite()) throw value_error("Hamiltonian has non-finite entries");
  if (!(hbar_ > 0)) throw value_error("hbar must be positive");
  const double scale = std::max(1.0, max_abs(h_));
  if (max_abs(cxmat(h_ - h_.adjoint())) > 1e-10 * scale)
    throw not_self_adjoint("Hamiltonian is not Hermitian");
  h_ = 0.5 * (h_ + h_.adjoint().eval());
}

cxmat hamiltonian::propagator(double t) const {
  const cxd factor(0.0, -t / hbar_);
  return expm(factor * h_);
}

state_vector evolve_state(const hamiltonian& ham, double t, const state_vector& psi) {
  if (psi.dim() != ham.dim()) throw dimension_mismatch("state does not match Hamiltonian");
  return state_vector{ham.propagator(t) * psi.coords};
}

double schrodinger_residual(const hamiltonian& ham, const std::vector<cxvec>& trajectory,
                            double step) {
  if (!(step > 0)) throw value_error("step must be positive");
  if (step > 1e-3) throw grid_too_coarse("step must be at most 1e-3");
  if (trajectory.size() < 3)
    throw insufficient_samples("need at least three grid points for a central difference");
  for (const auto& psi : trajectory)
    if (psi.size() != ham.dim()) throw dimension_mismatch("trajectory state of wrong dimension");

  const cxd factor(0.0, 1.0 / ham.hbar());
  double worst = 0;
  for (size_t k = 1; k + 1 < trajectory.size(); ++k) {
    const cxvec deriv = (trajectory[k + 1] - trajectory[k - 1]) / (2.0 * step);
    worst = std::max(worst, max_abs(cxvec(deriv + factor * (ham.matrix() * trajectory[k]))));
  }
  return worst;
}

observable heisenberg_operator(const hamiltonian& ham, double t, const observable& y0) {
  if (y0.dim() != ham.dim()) throw dimension_mismatch("operator does not match Hamiltonian");
  const cxmat u = ham.propagator(t);
  return observable(u.adjoint() * y0.matrix() * u);
}

std::vector<cxvec> stationary_states(const hamiltonian& ham, double tol) {
  Eigen::SelfAdjointEigenSolver<cxmat> eig(ham.matrix());
  const double scale = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
  std::vector<cxvec> out;
  for (Eigen::Index k = 0; k < eig.eigenvalues().size(); ++k)
    if (std::abs(eig.eigenvalues()(k)) <= tol * scale) out.push_back(eig.eigenvectors().col(k));
  return out;
}

std::vector<spectral_line> energy_spectrum(const hamiltonian& ham) {
  Eigen::SelfAdjointEigenSolver<cxmat> eig(ham.matrix());
  const rvec& vals = eig.eigenvalues();
  const double gap = 1e-8 * std::max(1.0, vals.cwiseAbs().maxCoeff());

  std::vector<spectral_line> lines;
  Eigen::Index start = 0;
  while (start < vals.size()) {
    Eigen::Index stop = start + 1;
    while (stop < vals.size() && vals(stop) - vals(stop - 1) <= gap) ++stop;
    const Eigen::Index width = stop - start;
    const cxmat block = eig.eigenvectors().middleCols(start, width);
    lines.push_back({vals.segment(start, width).mean(), block * block.adjoint()});
    start = stop;
  }
  return lines;
}

evaluation_map::evaluation_map(std::vector<std::function<cxd(double)>> basis,
                               std::vector<double> grid)
    : basis_(std::move(basis)), grid_(std::move(grid)) {
  if (basis_.empty()) throw value_error("evaluation map needs basis functions");
  if (grid_.empty()) throw value_error("evaluation map needs a grid");
  for (double t : grid_)
    if (!std::isfinite(t)) throw value_error("grid times must be finite");
  rows_.reserve(grid_.size());
  for (double t : grid_) {
    cxvec row(static_cast<Eigen::Index>(basis_.size()));
    for (size_t j = 0; j < basis_.size(); ++j) row(static_cast<Eigen::Index>(j)) = basis_[j](t);
    rows_.push_back(std::move(row));
  }
}

int evaluation_map::locate(double t) const {
  for (size_t i = 0; i < grid_.size(); ++i)
    if (std::abs(grid_[i] - t) <= 1e-12 * std::max(1.0, std::abs(t)))
      return static_cast<int>(i);
  throw out_of_domain("time " + std::to_string(t) + " is not on the grid");
}

cxd evaluation_map::apply(double t, const cxvec& x) const {
  if (x.size() != dim()) throw dimension_mismatch("coefficient vector has wrong size");
  const cxvec& row = rows_[static_cast<size_t>(locate(t))];
  return (row.array() * x.array()).sum();
}

cxvec evaluation_map::row(double t) const { return rows_[static_cast<size_t>(locate(t))]; }

}  // namespace mhilb
