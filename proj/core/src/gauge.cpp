#include "mhilb/gauge.hpp"

#include <cmath>

#include "mhilb/expm.hpp"

namespace mhilb {

double gauge_map::unitarity_defect() const {
  return max_abs(cxmat(uhat_.adjoint() * uhat_ - cxmat::Identity(dim(), dim())));
}

state_vector gauge_map::apply(const state_vector& psi) const {
  if (psi.coords.size() != uhat_.rows()) throw dimension_mismatch("state has wrong dimension");
  return state_vector{uhat_ * psi.coords};
}

gauge_map gauge_map::inverse() const {
  gauge_map out;
  out.u_ = u_.inverse();
  out.uhat_ = uhat_.adjoint();
  return out;
}

gauge_map lift_gauge(const hilbert_chart& chart, const cxmat& u) {
  if (u.rows() != u.cols() || u.rows() != chart.dim())
    throw dimension_mismatch("gauge matrix does not match chart");
  if (!u.allFinite()) throw value_error("gauge matrix has non-finite entries");
  const cxmat& k = chart.gram();
  const double defect = max_abs(cxmat(u.adjoint() * k * u - k));
  if (defect > 1e-8 * std::max(1.0, max_abs(k)))
    throw not_k_unitary("gauge changes the Gram matrix by " + std::to_string(defect));

  gauge_map out;
  out.u_ = u;
  // C^* U C^{-*}: the same map written in orthonormal coordinates
  out.uhat_ = chart.cholesky().adjoint() * u * chart.factor();
  return out;
}

observable transform_operator(const gauge_map& g, const observable& y) {
  if (y.dim() != g.dim()) throw dimension_mismatch("operator does not match gauge");
  return observable(g.unitary() * y.matrix() * g.unitary().adjoint());
}

gauge_map discrete_permutation(const std::vector<int>& sigma) {
  const int n = static_cast<int>(sigma.size());
  if (n == 0) throw value_error("permutation is empty");
  std::vector<bool> hit(static_cast<size_t>(n), false);
  for (int img : sigma) {
    if (img < 1 || img > n) throw not_bijection("image " + std::to_string(img) + " out of range");
    if (hit[static_cast<size_t>(img - 1)])
      throw not_bijection("image " + std::to_string(img) + " repeated");
    hit[static_cast<size_t>(img - 1)] = true;
  }
  cxmat p = cxmat::Zero(n, n);
  for (int j = 0; j < n; ++j) p(sigma[static_cast<size_t>(j)] - 1, j) = 1.0;
  gauge_map out;
  out.u_ = p;
  out.uhat_ = p;
  return out;
}

gauge_map one_param_group(const cxmat& generator, double theta) {
  if (generator.rows() != generator.cols() || generator.rows() == 0)
    throw dimension_mismatch("generator must be square");
  const double scale = std::max(1.0, max_abs(generator));
  if (max_abs(cxmat(generator + generator.adjoint())) > 1e-10 * scale)
    throw not_self_adjoint("generator must be anti-Hermitian");
  gauge_map out;
  out.u_ = expm(theta * generator);
  out.uhat_ = out.u_;
  return out;
}

generator_fit generator_from_group(const std::vector<std::pair<double, cxmat>>& samples) {
  if (samples.empty()) throw insufficient_samples("no group samples");
  const Eigen::Index n = samples[0].second.rows();
  for (const auto& [theta, u] : samples) {
    (void)theta;
    if (u.rows() != n || u.cols() != n) throw dimension_mismatch("samples of mixed dimension");
  }

  // prefer a symmetric pair of small parameters for the central
  // difference, fall back to one small parameter
  constexpr double small = 1e-3;
  const std::pair<double, cxmat>* plus = nullptr;
  const std::pair<double, cxmat>* minus = nullptr;
  for (const auto& s : samples) {
    if (s.first <= 0 || s.first > small) continue;
    for (const auto& t : samples) {
      if (std::abs(t.first + s.first) > 1e-15) continue;
      plus = &s;
      minus = &t;
      break;
    }
    if (plus) break;
  }

  cxmat s;
  if (plus) {
    s = (plus->second - minus->second) / (2.0 * plus->first);
  } else {
    const std::pair<double, cxmat>* best = nullptr;
    for (const auto& c : samples)
      if (c.first != 0 && std::abs(c.first) <= small &&
          (!best || std::abs(c.first) < std::abs(best->first)))
        best = &c;
    if (!best)
      throw insufficient_samples("need a group sample with 0 < |theta| <= 1e-3");
    s = (best->second - cxmat::Identity(n, n)) / best->first;
  }
  // project onto the anti-Hermitian part to kill truncation asymmetry
  s = 0.5 * (s - s.adjoint().eval());

  double err = 0;
  for (const auto& [theta, u] : samples) err = std::max(err, max_abs(cxmat(expm(theta * s) - u)));
  return generator_fit{std::move(s), err};
}

double symmetry_defect(const observable& y, const gauge_map& g) {
  if (y.dim() != g.dim()) throw dimension_mismatch("operator does not match gauge");
  return max_abs(cxmat(y.matrix() * g.unitary() - g.unitary() * y.matrix()));
}

double state_symmetry_defect(const gauge_map& g, const state_vector& psi) {
  if (psi.dim() != g.dim()) throw dimension_mismatch("state does not match gauge");
  return (g.unitary() * psi.coords - psi.coords).norm();
}

}  // namespace mhilb
