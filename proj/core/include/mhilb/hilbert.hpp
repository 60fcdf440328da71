#pragma once

#include <optional>

#include "mhilb/errors.hpp"
#include "mhilb/model.hpp"
#include "mhilb/types.hpp"

namespace mhilb {

// pointwise value of a named positive kernel
double kernel_value(const kernel_spec& spec, const std::vector<double>& x,
                    const std::vector<double>& y);

// Hermitian positive definite Gram matrix of a spanning family,
// either given directly or tabulated from a kernel function
class gram_kernel {
 public:
  static gram_kernel from_matrix(cxmat k);
  static gram_kernel from_kernel(const kernel_spec& spec);

  const cxmat& matrix() const { return k_; }
  int dim() const { return static_cast<int>(k_.rows()); }

 private:
  explicit gram_kernel(cxmat k) : k_(std::move(k)) {}
  cxmat k_;
};

// state in orthonormalized coordinates
struct state_vector {
  cxvec coords;
  double norm() const { return coords.norm(); }
  int dim() const { return static_cast<int>(coords.size()); }
};

struct chart_stats {
  double min_eig = 0;
  double max_eig = 0;
  double cond = 0;
  bool ill_conditioned = false;
};

// finite chart of the state space: Cholesky factorization K = C C^*,
// orthonormalization L = (C^*)^{-1}, and the associated dual family
class hilbert_chart {
 public:
  int dim() const { return static_cast<int>(k_.rows()); }
  const cxmat& gram() const { return k_; }
  const cxmat& cholesky() const { return c_; }  // lower triangular
  const cxmat& factor() const { return l_; }    // L, with L^* K L = I
  const chart_stats& stats() const { return stats_; }

  // coordinates of the state with coefficient vector x in the raw family
  state_vector lift(const cxvec& x) const;
  // inverse of lift: coefficients in the raw family
  cxvec components(const state_vector& psi) const;

  // coordinates of the j-th raw basis state, 1-based
  cxvec basis_state(int j) const;
  // coordinates of the j-th dual state, 1-based
  cxvec dual_state(int j) const;

  // max |<phi_i, eps_j> - delta_ij| computed through the inverse Gram
  double dual_pairing_defect() const;

  // inner product, conjugate linear in the first argument
  cxd inner(const state_vector& a, const state_vector& b) const;

  friend hilbert_chart build_chart(const gram_kernel& g);

 private:
  hilbert_chart() = default;
  cxmat k_, c_, l_;
  chart_stats stats_;
};

hilbert_chart build_chart(const gram_kernel& g);

// real-linear rotation J with J^2 = -I pairing slots (2a-1, 2a), plus
// the sesquilinear form it induces on real coordinate vectors
struct complex_structure {
  rmat j;
  cxd gamma(const rvec& a, const rvec& b) const;
};

// requires an even number of real dimensions
complex_structure complexify(int real_dim);
complex_structure complexify(const hilbert_chart& chart);

}  // namespace mhilb
