#pragma once

#include <utility>
#include <vector>

#include "mhilb/observables.hpp"

namespace mhilb {

// change of spanning family that preserves the Gram matrix, carried in
// both pictures: U on raw coefficients, C^* U C^{-*} on coordinates
class gauge_map {
 public:
  const cxmat& coefficient_matrix() const { return u_; }
  const cxmat& unitary() const { return uhat_; }
  int dim() const { return static_cast<int>(u_.rows()); }

  double unitarity_defect() const;  // max |Uhat^* Uhat - I|
  state_vector apply(const state_vector& psi) const;
  gauge_map inverse() const;

  friend gauge_map lift_gauge(const hilbert_chart& chart, const cxmat& u);
  friend gauge_map discrete_permutation(const std::vector<int>& sigma);
  friend gauge_map one_param_group(const cxmat& generator, double theta);

 private:
  gauge_map() = default;
  cxmat u_, uhat_;
};

// requires U^* K U = K up to 1e-8 relative
gauge_map lift_gauge(const hilbert_chart& chart, const cxmat& u);

// conjugation Uhat Y Uhat^*
observable transform_operator(const gauge_map& g, const observable& y);

// permutation matrix of a bijection given by 1-based images
gauge_map discrete_permutation(const std::vector<int>& sigma);

// exp(theta S) for an anti-Hermitian generator S; both pictures agree
// because the group acts on orthonormal coordinates
gauge_map one_param_group(const cxmat& generator, double theta);

struct generator_fit {
  cxmat generator;
  double reconstruction_error;  // max over samples of |exp(theta S) - U|
};

// recovers the generator from sampled group elements (theta, U(theta));
// needs samples at a symmetric pair of small parameters, or one small
// parameter, with |theta| <= 1e-3
generator_fit generator_from_group(const std::vector<std::pair<double, cxmat>>& samples);

// max |Y Uhat - Uhat Y|; zero iff the gauge is a symmetry of Y
double symmetry_defect(const observable& y, const gauge_map& g);

// |Uhat psi - psi|, zero iff the state is invariant
double state_symmetry_defect(const gauge_map& g, const state_vector& psi);

}  // namespace mhilb
