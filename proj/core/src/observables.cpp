#include "mhilb/observables.hpp"

#include <set>

namespace mhilb {

namespace {

// validated, normalized copy of J against a chart dimension
index_set checked_set(const index_set& J, int n) {
  index_set s = normalize_set(J);
  if (s.empty()) throw empty_subset("index set is empty");
  check_index_range(s, n);
  return s;
}

cxmat indicator_diagonal(const index_set& J, int n) {
  cxmat m = cxmat::Zero(n, n);
  for (int j : J) m(j - 1, j - 1) = 1.0;
  return m;
}

void check_disjoint(const std::vector<index_set>& sets) {
  std::set<int> seen;
  for (const auto& s : sets)
    for (int j : s)
      if (!seen.insert(j).second)
        throw overlapping_sets("index " + std::to_string(j) + " appears in two sets");
}

}  // namespace

observable::observable(cxmat m, observable_kind kind) : m_(std::move(m)), kind_(kind) {
  if (m_.rows() != m_.cols() || m_.rows() == 0)
    throw dimension_mismatch("operator matrix must be square");
}

state_vector observable::apply(const state_vector& psi) const {
  if (psi.coords.size() != m_.rows()) throw dimension_mismatch("state has wrong dimension");
  return state_vector{m_ * psi.coords};
}

observable observable::adjoint() const { return observable(m_.adjoint(), observable_kind::general); }

double observable::hermiticity_defect() const { return max_abs(cxmat(m_ - m_.adjoint())); }

double observable::idempotency_defect() const { return max_abs(cxmat(m_ * m_ - m_)); }

observable primary(const hilbert_chart& chart, const index_set& J) {
  const index_set s = checked_set(J, chart.dim());
  observable out(indicator_diagonal(s, chart.dim()), observable_kind::primary);
  out.indices_ = s;
  return out;
}

cxmat coefficient_truncation(const hilbert_chart& chart, const index_set& J) {
  const index_set s = checked_set(J, chart.dim());
  return chart.cholesky().adjoint() * indicator_diagonal(s, chart.dim()) * chart.factor();
}

observable discrete_primary(const reduction_matrix& a) {
  const rmat& m = a.matrix();
  rmat d = rmat::Zero(m.cols(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const rvec row = m.row(i).transpose();
    d += row * row.transpose() / row.sum();
  }
  observable out(d.cast<cxd>(), observable_kind::discrete_reduction);
  return out;
}

observable algebra_element(const hilbert_chart& chart, const cxvec& u) {
  const int n = chart.dim();
  if (u.size() != n + 1)
    throw dimension_mismatch("algebra element needs dim+1 coefficients, unit slot first");
  cxmat m = cxmat::Zero(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = u(0) + u(i + 1);
  observable out(std::move(m), observable_kind::algebra);
  return out;
}

cxd state_functional(const observable& y, const state_vector& psi) {
  return psi.coords.dot(y.matrix() * psi.coords);
}

observable secondary(const hilbert_chart& chart, const std::vector<double>& lambdas,
                     const std::vector<index_set>& sets) {
  if (lambdas.empty() || lambdas.size() != sets.size())
    throw dimension_mismatch("need one eigenvalue per index set");
  std::set<double> distinct(lambdas.begin(), lambdas.end());
  if (distinct.size() != lambdas.size()) throw value_error("eigenvalues must be distinct");

  std::vector<index_set> norm;
  norm.reserve(sets.size());
  for (const auto& s : sets) norm.push_back(checked_set(s, chart.dim()));
  check_disjoint(norm);

  cxmat m = cxmat::Zero(chart.dim(), chart.dim());
  for (size_t k = 0; k < norm.size(); ++k)
    for (int j : norm[k]) m(j - 1, j - 1) = lambdas[k];
  observable out(std::move(m), observable_kind::secondary);
  out.eigenvalues_ = lambdas;
  out.index_sets_ = std::move(norm);
  return out;
}

namespace {

std::vector<index_set> checked_partition(const spectral_partition& partition, int n) {
  if (partition.cells.empty()) throw incomplete_partition("partition has no cells");
  std::vector<index_set> cells;
  cells.reserve(partition.cells.size());
  size_t covered = 0;
  for (const auto& [label, cell] : partition.cells) {
    (void)label;
    cells.push_back(checked_set(cell, n));
    covered += cells.back().size();
  }
  check_disjoint(cells);
  if (covered != static_cast<size_t>(n))
    throw incomplete_partition("cells do not cover every index");
  return cells;
}

}  // namespace

std::vector<observable> spectral_measure(const hilbert_chart& chart,
                                         const spectral_partition& partition) {
  const std::vector<index_set> cells = checked_partition(partition, chart.dim());
  std::vector<observable> out;
  out.reserve(cells.size());
  for (const auto& cell : cells) out.push_back(primary(chart, cell));
  return out;
}

observable spectral_integral(const hilbert_chart& chart, const std::vector<double>& f,
                             const spectral_partition& partition) {
  const std::vector<index_set> cells = checked_partition(partition, chart.dim());
  if (f.size() != cells.size()) throw dimension_mismatch("need one value per cell");
  cxmat m = cxmat::Zero(chart.dim(), chart.dim());
  for (size_t k = 0; k < cells.size(); ++k)
    for (int j : cells[k]) m(j - 1, j - 1) = f[k];
  observable out(std::move(m), observable_kind::secondary);
  out.eigenvalues_ = f;
  out.index_sets_ = cells;
  return out;
}

observable compose_with_primary(const hilbert_chart& chart, const observable& phi,
                                const index_set& J) {
  if (phi.kind() != observable_kind::secondary)
    throw value_error("composition is defined for secondary observables");
  if (phi.dim() != chart.dim()) throw dimension_mismatch("observable does not match chart");
  const index_set s = checked_set(J, chart.dim());

  std::vector<double> lambdas;
  std::vector<index_set> sets;
  cxmat m = cxmat::Zero(chart.dim(), chart.dim());
  for (size_t k = 0; k < phi.index_sets().size(); ++k) {
    index_set cut = set_intersection(phi.index_sets()[k], s);
    if (cut.empty()) continue;
    for (int j : cut) m(j - 1, j - 1) = phi.eigenvalues()[k];
    lambdas.push_back(phi.eigenvalues()[k]);
    sets.push_back(std::move(cut));
  }
  observable out(std::move(m), observable_kind::secondary);
  out.eigenvalues_ = std::move(lambdas);
  out.index_sets_ = std::move(sets);
  return out;
}

double commutation_defect(const observable& a, const observable& b) {
  if (a.dim() != b.dim()) throw dimension_mismatch("operators of different dimension");
  return max_abs(cxmat(a.matrix() * b.matrix() - b.matrix() * a.matrix()));
}

index_set recover_indices(const observable& p, double tol) {
  const cxmat& m = p.matrix();
  index_set J;
  for (int j = 0; j < p.dim(); ++j)
    if (m(j, j).real() > 0.5) J.push_back(j + 1);
  cxmat ref = indicator_diagonal(J, p.dim());
  if (max_abs(cxmat(m - ref)) > tol)
    throw value_error("operator is not an index projection within tolerance");
  return J;
}

}  // namespace mhilb
