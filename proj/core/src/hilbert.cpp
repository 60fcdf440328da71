#include "mhilb/hilbert.hpp"

#include <cmath>

namespace mhilb {

namespace {

void check_finite(const cxmat& k) {
  if (!k.allFinite()) throw value_error("matrix has non-finite entries");
}

}  // namespace

double kernel_value(const kernel_spec& spec, const std::vector<double>& x,
                    const std::vector<double>& y) {
  auto param = [&](const std::string& name, double fallback) {
    auto it = spec.params.find(name);
    return it == spec.params.end() ? fallback : it->second;
  };
  double dot = 0, dist2 = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    dot += x[i] * y[i];
    dist2 += (x[i] - y[i]) * (x[i] - y[i]);
  }
  if (spec.name == "gaussian") {
    const double sigma = param("sigma", 1.0);
    if (sigma <= 0) throw value_error("gaussian kernel needs sigma > 0");
    return std::exp(-dist2 / (2 * sigma * sigma));
  }
  if (spec.name == "min") {
    if (x.size() != 1) throw value_error("min kernel is defined for scalar points");
    if (x[0] <= 0 || y[0] <= 0) throw value_error("min kernel needs positive points");
    return std::min(x[0], y[0]);
  }
  if (spec.name == "linear") return dot + param("offset", 0.0);
  if (spec.name == "polynomial") {
    const double degree = param("degree", 2.0);
    if (degree < 1 || degree != std::floor(degree))
      throw value_error("polynomial kernel needs integer degree >= 1");
    return std::pow(dot + param("offset", 1.0), degree);
  }
  throw schema_error("unknown kernel '" + spec.name + "'");
}

gram_kernel gram_kernel::from_matrix(cxmat k) {
  if (k.rows() != k.cols() || k.rows() == 0) throw dimension_mismatch("Gram matrix must be square");
  check_finite(k);
  const double scale = std::max(1.0, max_abs(k));
  if (max_abs(cxmat(k - k.adjoint())) > 1e-12 * scale)
    throw not_hermitian("Gram matrix is not Hermitian");
  // symmetrize so downstream factorizations see an exactly Hermitian matrix
  k = 0.5 * (k + k.adjoint().eval());
  return gram_kernel(std::move(k));
}

gram_kernel gram_kernel::from_kernel(const kernel_spec& spec) {
  const size_t n = spec.points.size();
  if (n == 0) throw value_error("kernel needs at least one point");
  const size_t arity = spec.points[0].size();
  if (arity == 0) throw value_error("kernel points must be non-empty tuples");
  for (const auto& p : spec.points)
    if (p.size() != arity) throw dimension_mismatch("kernel points have mixed arity");
  cxmat k(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          kernel_value(spec, spec.points[i], spec.points[j]);
  return from_matrix(std::move(k));
}

hilbert_chart build_chart(const gram_kernel& g) {
  constexpr double tau_pd = 1e-12;
  hilbert_chart chart;
  chart.k_ = g.matrix();

  Eigen::SelfAdjointEigenSolver<cxmat> eig(chart.k_, Eigen::EigenvaluesOnly);
  const double min_eig = eig.eigenvalues().minCoeff();
  const double max_eig = eig.eigenvalues().maxCoeff();
  if (max_eig <= 0 || min_eig <= tau_pd * max_eig)
    throw not_positive_definite("smallest eigenvalue " + std::to_string(min_eig) +
                                " below positivity threshold");
  chart.stats_.min_eig = min_eig;
  chart.stats_.max_eig = max_eig;
  chart.stats_.cond = max_eig / min_eig;
  chart.stats_.ill_conditioned = chart.stats_.cond > 1e10;

  Eigen::LLT<cxmat> llt(chart.k_);
  if (llt.info() != Eigen::Success)
    throw not_positive_definite("Cholesky factorization failed");
  chart.c_ = llt.matrixL();
  chart.l_ = chart.c_.adjoint()
                 .triangularView<Eigen::Upper>()
                 .solve(cxmat::Identity(chart.dim(), chart.dim()));
  return chart;
}

state_vector hilbert_chart::lift(const cxvec& x) const {
  if (x.size() != k_.rows()) throw dimension_mismatch("coefficient vector has wrong size");
  return state_vector{c_.adjoint() * x};
}

cxvec hilbert_chart::components(const state_vector& psi) const {
  if (psi.coords.size() != k_.rows()) throw dimension_mismatch("state has wrong dimension");
  return c_.adjoint().triangularView<Eigen::Upper>().solve(psi.coords);
}

cxvec hilbert_chart::basis_state(int j) const {
  if (j < 1 || j > dim()) throw index_out_of_range("basis index outside 1..dim");
  return c_.adjoint().col(j - 1);
}

cxvec hilbert_chart::dual_state(int j) const {
  if (j < 1 || j > dim()) throw index_out_of_range("dual index outside 1..dim");
  cxvec e = cxvec::Zero(dim());
  e(j - 1) = 1.0;
  return c_.triangularView<Eigen::Lower>().solve(e);
}

double hilbert_chart::dual_pairing_defect() const {
  Eigen::LLT<cxmat> llt(k_);
  const cxmat kinv = llt.solve(cxmat::Identity(dim(), dim()));
  return max_abs(cxmat(kinv.adjoint() * k_ - cxmat::Identity(dim(), dim())));
}

cxd hilbert_chart::inner(const state_vector& a, const state_vector& b) const {
  if (a.coords.size() != b.coords.size()) throw dimension_mismatch("states of different dimension");
  return a.coords.dot(b.coords);
}

complex_structure complexify(int real_dim) {
  if (real_dim < 2 || real_dim % 2 != 0)
    throw odd_dimension("complex structure needs a positive even dimension");
  rmat j = rmat::Zero(real_dim, real_dim);
  for (int a = 0; a < real_dim / 2; ++a) {
    j(2 * a + 1, 2 * a) = 1.0;
    j(2 * a, 2 * a + 1) = -1.0;
  }
  return complex_structure{std::move(j)};
}

complex_structure complexify(const hilbert_chart& chart) { return complexify(chart.dim()); }

cxd complex_structure::gamma(const rvec& a, const rvec& b) const {
  if (a.size() != j.rows() || b.size() != j.rows())
    throw dimension_mismatch("vectors do not match the complex structure");
  return {a.dot(b), (j * a).dot(b)};
}

}  // namespace mhilb
