#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mhilb/hilbert.hpp"
#include "mhilb/model.hpp"

namespace mhilb {

enum class observable_kind { general, primary, discrete_reduction, algebra, secondary };

// linear operator on the chart's coordinate space, tagged with how it
// was constructed
class observable {
 public:
  explicit observable(cxmat m, observable_kind kind = observable_kind::general);

  const cxmat& matrix() const { return m_; }
  observable_kind kind() const { return kind_; }
  int dim() const { return static_cast<int>(m_.rows()); }

  state_vector apply(const state_vector& psi) const;
  observable adjoint() const;

  double hermiticity_defect() const;  // max |M - M^*|
  double idempotency_defect() const;  // max |M^2 - M|
  cxd trace() const { return m_.trace(); }

  // defined for primary operators
  const index_set& indices() const { return indices_; }
  // defined for secondary operators
  const std::vector<double>& eigenvalues() const { return eigenvalues_; }
  const std::vector<index_set>& index_sets() const { return index_sets_; }

  friend observable primary(const hilbert_chart& chart, const index_set& J);
  friend observable discrete_primary(const reduction_matrix& a);
  friend observable algebra_element(const hilbert_chart& chart, const cxvec& u);
  friend observable secondary(const hilbert_chart& chart, const std::vector<double>& lambdas,
                              const std::vector<index_set>& sets);
  friend observable spectral_integral(const hilbert_chart& chart, const std::vector<double>& f,
                                      const struct spectral_partition& partition);
  friend observable compose_with_primary(const hilbert_chart& chart, const observable& phi,
                                         const index_set& J);

 private:
  cxmat m_;
  observable_kind kind_ = observable_kind::general;
  index_set indices_;
  std::vector<double> eigenvalues_;
  std::vector<index_set> index_sets_;
};

// orthogonal projection onto the span of the orthonormalized states
// indexed by J (1-based)
observable primary(const hilbert_chart& chart, const index_set& J);

// the raw coefficient-truncation operator C^* S_J C^{-*}; it drops the
// coefficients outside J but is not Hermitian for oblique charts
cxmat coefficient_truncation(const hilbert_chart& chart, const index_set& J);

// averaging operator of a discrete reduction, rows normalized so it is
// idempotent
observable discrete_primary(const reduction_matrix& a);

// element u0 I + sum_i u_i P_i of the commutative algebra generated by
// the single-index projections; u has size dim+1 with u[0] the unit slot
observable algebra_element(const hilbert_chart& chart, const cxvec& u);

// expectation of Y in the state, linear in Y
cxd state_functional(const observable& y, const state_vector& psi);

// sum of lambda_n P_{J_n} over pairwise disjoint index sets
observable secondary(const hilbert_chart& chart, const std::vector<double>& lambdas,
                     const std::vector<index_set>& sets);

struct spectral_partition {
  // label -> cell of the index partition
  std::vector<std::pair<std::string, index_set>> cells;
};

// projection-valued map s -> P_{chi(s)}; cells must partition 1..dim
std::vector<observable> spectral_measure(const hilbert_chart& chart,
                                         const spectral_partition& partition);

// sum f(s) P_{chi(s)}
observable spectral_integral(const hilbert_chart& chart, const std::vector<double>& f,
                             const spectral_partition& partition);

// restriction of a secondary operator to the subspace of J: replaces
// every J_n by its intersection with J
observable compose_with_primary(const hilbert_chart& chart, const observable& phi,
                                const index_set& J);

// max |AB - BA|
double commutation_defect(const observable& a, const observable& b);

// recovers the index set of a Hermitian idempotent in diagonal form
index_set recover_indices(const observable& p, double tol = 1e-8);

}  // namespace mhilb
