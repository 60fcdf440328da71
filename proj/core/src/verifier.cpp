#include "mhilb/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <nlohmann/json.hpp>

#include "mhilb/expm.hpp"

namespace mhilb {

namespace {

using nlohmann::json;

double unit_interval(std::mt19937_64& rng) { return u01(rng); }

double symmetric_unit(std::mt19937_64& rng) { return 2.0 * u01(rng) - 1.0; }

cxmat random_matrix(std::mt19937_64& rng, int n) {
  cxmat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cxd(symmetric_unit(rng), symmetric_unit(rng));
  return m;
}

cxvec random_unit_state(std::mt19937_64& rng, int n) {
  cxvec v(n);
  for (int i = 0; i < n; ++i) v(i) = cxd(symmetric_unit(rng), symmetric_unit(rng));
  const double norm = v.norm();
  if (norm < 1e-12) {
    v.setZero();
    v(0) = 1.0;
    return v;
  }
  return v / norm;
}

std::vector<int> shuffled_indices(std::mt19937_64& rng, int n) {
  std::vector<int> idx(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) idx[static_cast<size_t>(j)] = j + 1;
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(unit_interval(rng) * (i + 1));
    std::swap(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(std::min(j, i))]);
  }
  return idx;
}

json matrix_json(const cxmat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

struct sub_result {
  std::string name;
  double defect = 0;
  double tol = 0;
  std::string payload;
};

struct check_ctx {
  const verifier_instance& inst;
  std::vector<sub_result>* out;

  void add(const std::string& name, double defect, double tol,
           const std::function<json()>& detail = {}) {
    sub_result r{name, defect, tol, ""};
    if (!(defect <= tol)) {
      json payload{{"seed", inst.seed}, {"n", inst.n},       {"check", name},
                   {"defect", defect},  {"tolerance", tol}};
      if (inst.n <= 8) payload["gram"] = matrix_json(inst.chart.gram());
      if (detail) payload["detail"] = detail();
      r.payload = payload.dump();
    }
    out->push_back(std::move(r));
  }
};

json set_json(const index_set& J) { return json(J); }

// ---- proposition suites ------------------------------------------------

void suite_chart_isometry(check_ctx& c, fault_mode) {
  const hilbert_chart& chart = c.inst.chart;
  const int n = chart.dim();
  const cxmat id = cxmat::Identity(n, n);

  c.add("orthonormalization", max_abs(cxmat(chart.factor().adjoint() * chart.gram() * chart.factor() - id)),
        1e-9);
  c.add("dual_pairing", chart.dual_pairing_defect(), 1e-9);
  c.add("cholesky_reassembly",
        max_abs(cxmat(chart.cholesky() * chart.cholesky().adjoint() - chart.gram())),
        1e-9 * std::max(1.0, max_abs(chart.gram())));

  std::mt19937_64 rng(c.inst.seed ^ 0xC0FFEEULL);
  const cxvec x = random_unit_state(rng, n);
  const cxvec y = random_unit_state(rng, n);
  const state_vector sx = chart.lift(x), sy = chart.lift(y);
  c.add("lift_roundtrip", (chart.components(sx) - x).cwiseAbs().maxCoeff(), 1e-9);
  const cxd lhs = chart.inner(sx, sy);
  const cxd rhs = (x.adjoint() * chart.gram() * y)(0);
  c.add("inner_product_transport", std::abs(lhs - rhs), 1e-9 * std::max(1.0, std::abs(rhs)));
}

void suite_hilbert_sum(check_ctx& c, fault_mode) {
  const int n = c.inst.n;
  const int m1 = (n + 1) / 2, m2 = n - m1;
  if (m2 < 1) return;
  const hilbert_chart f1 =
      build_chart(gram_kernel::from_matrix(c.inst.chart.gram().topLeftCorner(m1, m1)));
  const hilbert_chart f2 =
      build_chart(gram_kernel::from_matrix(c.inst.chart.gram().bottomRightCorner(m2, m2)));
  const sum_chart sc = hilbert_sum({f1, f2});

  const observable p1 = sc.projection(1), p2 = sc.projection(2);
  c.add("summand_hermitian", std::max(p1.hermiticity_defect(), p2.hermiticity_defect()), 1e-10);
  c.add("summand_idempotent", std::max(p1.idempotency_defect(), p2.idempotency_defect()), 1e-10);
  c.add("summand_resolution",
        max_abs(cxmat(p1.matrix() + p2.matrix() - cxmat::Identity(n, n))), 1e-10);
  c.add("summand_orthogonal", max_abs(cxmat(p1.matrix() * p2.matrix())), 1e-10);

  std::mt19937_64 rng(c.inst.seed ^ 0x5D5D5DULL);
  const cxvec x1 = random_unit_state(rng, m1);
  cxvec padded = cxvec::Zero(n);
  padded.head(m1) = x1;
  const state_vector embedded = sc.chart.lift(padded);
  cxvec direct = cxvec::Zero(n);
  direct.head(m1) = f1.lift(x1).coords;
  c.add("block_embedding", (embedded.coords - direct).cwiseAbs().maxCoeff(), 1e-9);
}

void suite_tensor_product(check_ctx& c, fault_mode) {
  const int m = std::min(c.inst.n, 6);
  // the product squares the factor condition numbers, so cap them to
  // keep the coordinate roundtrip well inside the tolerances
  cxmat k1 = c.inst.chart.gram().topLeftCorner(m, m);
  cxmat k2 = c.inst.chart.gram().bottomRightCorner(m, m);
  k1 += (1e-3 * k1.trace().real()) * cxmat::Identity(m, m);
  k2 += (1e-3 * k2.trace().real()) * cxmat::Identity(m, m);
  const hilbert_chart f1 = build_chart(gram_kernel::from_matrix(std::move(k1)));
  const hilbert_chart f2 = build_chart(gram_kernel::from_matrix(std::move(k2)));
  const tensor_chart tc = tensor_product(f1, f2);

  std::mt19937_64 rng(c.inst.seed ^ 0x7E7E7EULL);
  const state_vector a1{random_unit_state(rng, m)}, b1{random_unit_state(rng, m)};
  const state_vector a2{random_unit_state(rng, m)}, b2{random_unit_state(rng, m)};

  const state_vector prod1 = tensor_state(tc, a1, b1);
  cxvec kron_coords(m * m);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k) kron_coords((i * m) + k) = a1.coords(i) * b1.coords(k);
  c.add("coordinate_factorization", (prod1.coords - kron_coords).cwiseAbs().maxCoeff(), 1e-10,
        [&] { return json{{"factor_dim", m}}; });

  const state_vector prod2 = tensor_state(tc, a2, b2);
  const cxd lhs = tc.chart.inner(prod1, prod2);
  const cxd rhs = f1.inner(a1, a2) * f2.inner(b1, b2);
  c.add("inner_product_splits", std::abs(lhs - rhs), 1e-10);

  const observable pa = primary(f1, index_set{1});
  const observable pb = primary(f2, full_set(m));
  const observable lifted = tensor_lift(tc, pa, pb);
  c.add("lifted_projection_hermitian", lifted.hermiticity_defect(), 1e-10);
  c.add("lifted_projection_idempotent", lifted.idempotency_defect(), 1e-10);

  const state_vector applied = lifted.apply(prod1);
  const state_vector factor_applied = tensor_state(tc, pa.apply(a1), b1);
  c.add("lift_acts_factorwise", (applied.coords - factor_applied.coords).cwiseAbs().maxCoeff(),
        1e-10);
}

void suite_primary_projection(check_ctx& c, fault_mode fault) {
  const hilbert_chart& chart = c.inst.chart;
  const int n = chart.dim();

  std::vector<index_set> sets = c.inst.random_sets;
  sets.insert(sets.end(), c.inst.disjoint_sets.begin(), c.inst.disjoint_sets.end());

  for (const index_set& J : sets) {
    // the faulty path skips the orthogonalization that makes the
    // truncation self-adjoint
    const cxmat m = fault == fault_mode::skip_hermitize ? coefficient_truncation(chart, J)
                                                        : primary(chart, J).matrix();
    const observable p(m);
    auto detail = [&] { return json{{"indices", set_json(J)}}; };
    c.add("projection_hermitian", p.hermiticity_defect(), 1e-10, detail);
    c.add("projection_idempotent", p.idempotency_defect(), 1e-10, detail);
    c.add("projection_trace", std::abs(p.trace() - cxd(static_cast<double>(J.size()), 0.0)), 1e-9,
          detail);

    double recovery = 1.0;
    try {
      recovery = recover_indices(p) == normalize_set(J) ? 0.0 : 1.0;
    } catch (const error&) {
      recovery = 1.0;
    }
    c.add("projection_range_recovery", recovery, 0.5, detail);

    const index_set rest = complement_set(J, n);
    if (!rest.empty()) {
      const observable q = primary(chart, rest);
      c.add("projection_complement",
            max_abs(cxmat(p.matrix() + q.matrix() - cxmat::Identity(n, n))), 1e-10, detail);
    }
  }
}

void suite_discrete_reduction(check_ctx& c, fault_mode) {
  std::mt19937_64 rng(c.inst.seed ^ 0xD15CULL);
  const int vars = 2 + static_cast<int>(unit_interval(rng) * 2);
  std::vector<int> cards(static_cast<size_t>(vars));
  for (int& card : cards) card = 2 + static_cast<int>(unit_interval(rng) * 3);
  const discrete_code code(cards);

  double roundtrip = 0;
  for (long long flat = 1; flat <= code.dim(); ++flat)
    if (code.encode(code.decode(flat)) != flat) roundtrip = 1;
  c.add("flattening_bijective", roundtrip, 0.5,
        [&] { return json{{"cardinalities", cards}}; });

  index_set retained;
  for (int v = 1; v <= vars; ++v)
    if (unit_interval(rng) < 0.5) retained.push_back(v);
  if (retained.empty()) retained.push_back(1);

  const reduction_matrix a = reduce(code, retained);
  const double d = static_cast<double>(code.dim());
  const double s = static_cast<double>(a.rows());
  c.add("row_gram_scaled_identity",
        max_abs(cxmat((a.gram_aat() - (d / s) * rmat::Identity(a.rows(), a.rows())).cast<cxd>())),
        1e-12, [&] { return json{{"cardinalities", cards}, {"retained", set_json(retained)}}; });

  const observable avg = discrete_primary(a);
  c.add("averaging_hermitian", avg.hermiticity_defect(), 1e-12);
  c.add("averaging_idempotent", avg.idempotency_defect(), 1e-12);
  c.add("averaging_fixed_by_rows",
        max_abs(cxmat(a.matrix().cast<cxd>() * avg.matrix() - a.matrix().cast<cxd>())), 1e-12);
}

void suite_observable_algebra(check_ctx& c, fault_mode) {
  const hilbert_chart& chart = c.inst.chart;
  const int n = chart.dim();
  std::mt19937_64 rng(c.inst.seed ^ 0xA16EULL);

  cxvec u(n + 1), v(n + 1);
  for (int i = 0; i <= n; ++i) {
    u(i) = cxd(symmetric_unit(rng), symmetric_unit(rng));
    v(i) = cxd(symmetric_unit(rng), symmetric_unit(rng));
  }
  const observable yu = algebra_element(chart, u);
  const observable yv = algebra_element(chart, v);

  cxvec w(n + 1);
  w(0) = u(0) * v(0);
  for (int i = 1; i <= n; ++i) w(i) = u(0) * v(i) + u(i) * v(0) + u(i) * v(i);
  const observable yw = algebra_element(chart, w);
  c.add("product_closure", max_abs(cxmat(yu.matrix() * yv.matrix() - yw.matrix())), 1e-12);
  c.add("commutativity", commutation_defect(yu, yv), 1e-13);

  cxvec ureal = u;
  for (int i = 0; i <= n; ++i) ureal(i) = cxd(u(i).real(), 0.0);
  c.add("real_coefficients_self_adjoint", algebra_element(chart, ureal).hermiticity_defect(),
        1e-13);

  const state_vector psi = c.inst.states[0];
  const cxd alpha(0.37, -1.21);
  const cxd lin_lhs = state_functional(observable(alpha * yu.matrix() + yv.matrix()), psi);
  const cxd lin_rhs = alpha * state_functional(yu, psi) + state_functional(yv, psi);
  c.add("state_functional_linear", std::abs(lin_lhs - lin_rhs), 1e-12);

  const cxd pos = state_functional(observable(yu.matrix().adjoint() * yu.matrix()), psi);
  c.add("state_functional_positive", std::max(0.0, -pos.real()) + std::abs(pos.imag()), 1e-12);
  c.add("unit_is_identity",
        max_abs(cxmat(algebra_element(chart, cxvec::Unit(n + 1, 0)).matrix() -
                      cxmat::Identity(n, n))),
        1e-15);
}

void suite_projection_lattice(check_ctx& c, fault_mode) {
  const hilbert_chart& chart = c.inst.chart;
  const auto& sets = c.inst.random_sets;
  for (size_t a = 0; a < sets.size(); ++a)
    for (size_t b = a + 1; b < sets.size(); ++b) {
      const observable pa = primary(chart, sets[a]);
      const observable pb = primary(chart, sets[b]);
      auto detail = [&] {
        return json{{"first", set_json(sets[a])}, {"second", set_json(sets[b])}};
      };

      c.add("family_commutes", commutation_defect(pa, pb), 1e-10, detail);

      const index_set meet = set_intersection(sets[a], sets[b]);
      const cxmat meet_matrix = meet.empty()
                                    ? cxmat(cxmat::Zero(chart.dim(), chart.dim()))
                                    : primary(chart, meet).matrix();
      c.add("meet_is_product", max_abs(cxmat(pa.matrix() * pb.matrix() - meet_matrix)), 1e-10,
            detail);

      const index_set join = set_union(sets[a], sets[b]);
      const cxmat join_matrix = primary(chart, join).matrix();
      c.add("join_by_inclusion_exclusion",
            max_abs(cxmat(pa.matrix() + pb.matrix() - pa.matrix() * pb.matrix() - join_matrix)),
            1e-10, detail);

      if (!meet.empty()) {
        const observable pm = primary(chart, meet);
        c.add("monotone_absorption", max_abs(cxmat(pm.matrix() * pa.matrix() - pm.matrix())),
              1e-10, detail);
      }
    }
}

void suite_spectral_integral(check_ctx& c, fault_mode) {
  const hilbert_chart& chart = c.inst.chart;
  const int n = chart.dim();

  spectral_partition part;
  index_set covered;
  for (size_t k = 0; k < c.inst.disjoint_sets.size(); ++k) {
    part.cells.emplace_back("cell" + std::to_string(k), c.inst.disjoint_sets[k]);
    covered = set_union(covered, c.inst.disjoint_sets[k]);
  }
  const index_set rest = complement_set(covered, n);
  if (!rest.empty()) part.cells.emplace_back("rest", rest);

  const std::vector<observable> measure = spectral_measure(chart, part);
  cxmat total = cxmat::Zero(n, n);
  for (const auto& p : measure) total += p.matrix();
  c.add("measure_resolves_identity", max_abs(cxmat(total - cxmat::Identity(n, n))), 1e-12);

  std::mt19937_64 rng(c.inst.seed ^ 0x5BECULL);
  std::vector<double> f(part.cells.size()), g(part.cells.size());
  for (size_t k = 0; k < f.size(); ++k) {
    f[k] = static_cast<double>(k) + unit_interval(rng);
    g[k] = symmetric_unit(rng);
  }
  const observable intf = spectral_integral(chart, f, part);
  cxmat expected = cxmat::Zero(n, n);
  for (size_t k = 0; k < measure.size(); ++k) expected += f[k] * measure[k].matrix();
  c.add("integral_matches_sum", max_abs(cxmat(intf.matrix() - expected)), 1e-12);

  c.add("integral_of_one",
        max_abs(cxmat(
            spectral_integral(chart, std::vector<double>(part.cells.size(), 1.0), part).matrix() -
            cxmat::Identity(n, n))),
        1e-12);

  std::vector<double> fg(f.size());
  for (size_t k = 0; k < f.size(); ++k) fg[k] = 0.5 * f[k] + g[k];
  const cxmat lin_lhs = spectral_integral(chart, fg, part).matrix();
  const cxmat lin_rhs = 0.5 * intf.matrix() + spectral_integral(chart, g, part).matrix();
  c.add("integral_linear_in_function", max_abs(cxmat(lin_lhs - lin_rhs)), 1e-12);
}

void suite_normal_decomposition(check_ctx& c, fault_mode) {
  const hilbert_chart& chart = c.inst.chart;
  const int n = chart.dim();
  std::mt19937_64 rng(c.inst.seed ^ 0x40ABULL);

  cxvec u(n + 1);
  for (int i = 0; i <= n; ++i) u(i) = cxd(symmetric_unit(rng), symmetric_unit(rng));
  const observable y = algebra_element(chart, u);

  const cxmat real_part = 0.5 * (y.matrix() + y.matrix().adjoint());
  const cxmat imag_part = cxd(0.0, -0.5) * (y.matrix() - y.matrix().adjoint());
  c.add("normality", max_abs(cxmat(y.matrix() * y.matrix().adjoint() -
                                   y.matrix().adjoint() * y.matrix())),
        1e-12);
  c.add("real_part_self_adjoint", max_abs(cxmat(real_part - real_part.adjoint())), 1e-14);
  c.add("imag_part_self_adjoint", max_abs(cxmat(imag_part - imag_part.adjoint())), 1e-14);
  c.add("parts_commute", max_abs(cxmat(real_part * imag_part - imag_part * real_part)), 1e-12);
  c.add("reassembly",
        max_abs(cxmat(real_part + cxd(0.0, 1.0) * imag_part - y.matrix())), 1e-14);
}

void suite_gauge_transport(check_ctx& c, fault_mode) {
  const hilbert_chart& chart = c.inst.chart;
  const gauge_map g = lift_gauge(chart, c.inst.gauge_coefficients);
  c.add("lifted_unitarity", g.unitarity_defect(), 1e-10);

  std::mt19937_64 rng(c.inst.seed ^ 0x6A06EULL);
  std::vector<double> lambdas;
  for (size_t k = 0; k < c.inst.disjoint_sets.size(); ++k)
    lambdas.push_back(static_cast<double>(k + 1) + unit_interval(rng));
  const observable phi = secondary(chart, lambdas, c.inst.disjoint_sets);
  const observable moved = transform_operator(g, phi);

  Eigen::SelfAdjointEigenSolver<cxmat> before(phi.matrix());
  Eigen::SelfAdjointEigenSolver<cxmat> after(moved.matrix());
  c.add("spectrum_preserved",
        (before.eigenvalues() - after.eigenvalues()).cwiseAbs().maxCoeff(), 1e-9);

  const state_vector psi = c.inst.states[0];
  const state_vector gpsi = g.apply(psi);
  c.add("norm_preserved", std::abs(gpsi.norm() - psi.norm()), 1e-10);
  c.add("functional_invariant",
        std::abs(state_functional(moved, gpsi) - state_functional(phi, psi)), 1e-10);

  const observable back = transform_operator(g.inverse(), moved);
  c.add("inverse_restores", max_abs(cxmat(back.matrix() - phi.matrix())), 1e-9);
}

void suite_subspace_probability(check_ctx& c, fault_mode) {
  const hilbert_chart& chart = c.inst.chart;
  const int n = chart.dim();
  for (const state_vector& psi : c.inst.states) {
    c.add("full_mass", std::abs(subspace_prob(chart, psi, full_set(n)) - 1.0), 1e-12);
    for (const index_set& J : c.inst.random_sets) {
      const double nu = subspace_prob(chart, psi, J);
      auto detail = [&] { return json{{"indices", set_json(J)}, {"mass", nu}}; };
      c.add("mass_in_unit_interval", std::max({0.0, -nu, nu - 1.0}), 1e-12, detail);
      const observable p = primary(chart, J);
      c.add("mass_is_projected_norm", std::abs(nu - p.apply(psi).coords.squaredNorm()), 1e-12,
            detail);
      const index_set rest = complement_set(J, n);
      if (!rest.empty())
        c.add("complement_additivity",
              std::abs(nu + subspace_prob(chart, psi, rest) - 1.0), 1e-10, detail);
    }
    double stacked = 0;
    index_set covered;
    for (const index_set& J : c.inst.disjoint_sets) {
      stacked += subspace_prob(chart, psi, J);
      covered = set_union(covered, J);
    }
    c.add("disjoint_additivity", std::abs(stacked - subspace_prob(chart, psi, covered)), 1e-10);
  }
}

void suite_partition_probability(check_ctx& c, fault_mode) {
  const hilbert_chart& chart = c.inst.chart;
  const int n = chart.dim();

  spectral_partition part;
  index_set covered;
  for (size_t k = 0; k < c.inst.disjoint_sets.size(); ++k) {
    part.cells.emplace_back("cell" + std::to_string(k), c.inst.disjoint_sets[k]);
    covered = set_union(covered, c.inst.disjoint_sets[k]);
  }
  const index_set rest = complement_set(covered, n);
  if (!rest.empty()) part.cells.emplace_back("rest", rest);
  const std::vector<observable> measure = spectral_measure(chart, part);

  for (const state_vector& psi : c.inst.states) {
    double total = 0;
    double functional_gap = 0;
    for (size_t k = 0; k < measure.size(); ++k) {
      const double nu = subspace_prob(chart, psi, part.cells[k].second);
      total += nu;
      const cxd expect = state_functional(measure[k], psi);
      functional_gap = std::max(functional_gap,
                                std::max(std::abs(expect.real() - nu), std::abs(expect.imag())));
    }
    c.add("partition_total_mass", std::abs(total - 1.0), 1e-10);
    c.add("mass_matches_functional", functional_gap, 1e-12);
  }
}

void suite_eigenvalue_distribution(check_ctx& c, fault_mode) {
  const hilbert_chart& chart = c.inst.chart;
  const int n = chart.dim();
  std::mt19937_64 rng(c.inst.seed ^ 0xE16EULL);

  // leave one disjoint set out so a genuine residual can appear
  std::vector<index_set> sets(c.inst.disjoint_sets.begin(), c.inst.disjoint_sets.end() - 1);
  if (sets.empty()) sets = c.inst.disjoint_sets;
  std::vector<double> lambdas;
  for (size_t k = 0; k < sets.size(); ++k)
    lambdas.push_back(static_cast<double>(k + 1) + unit_interval(rng));
  const observable phi = secondary(chart, lambdas, sets);

  for (const state_vector& psi : c.inst.states) {
    const measurement_distribution dist = eigen_distribution(chart, phi, psi);
    c.add("distribution_total_mass", std::abs(dist.total() - 1.0), 1e-10);

    double mass_gap = 0;
    for (const auto& o : dist.outcomes)
      mass_gap = std::max(mass_gap, std::abs(o.prob - subspace_prob(chart, psi, o.indices)));
    c.add("mass_matches_subspace", mass_gap, 1e-12);

    double mean = 0;
    for (const auto& o : dist.outcomes) mean += o.value * o.prob;
    const cxd expect = state_functional(phi, psi);
    c.add("mean_matches_functional", std::abs(mean - expect.real()) + std::abs(expect.imag()),
          1e-10);

    index_set covered;
    for (const auto& J : sets) covered = set_union(covered, J);
    const bool want_residual = static_cast<int>(covered.size()) < n;
    const bool has_residual = dist.outcomes.size() == sets.size() + 1;
    c.add("residual_exactly_when_uncovered", want_residual == has_residual ? 0.0 : 1.0, 0.5);
  }
}

void suite_evolution_group(check_ctx& c, fault_mode) {
  const hamiltonian ham(c.inst.hamiltonian_matrix, 1.0);
  const int n = ham.dim();
  const cxmat id = cxmat::Identity(n, n);

  const cxmat u1 = ham.propagator(0.7);
  const cxmat u2 = ham.propagator(1.3);
  c.add("propagator_unitary", max_abs(cxmat(u1.adjoint() * u1 - id)), 1e-10);
  c.add("group_identity", max_abs(cxmat(ham.propagator(0.0) - id)), 1e-12);
  c.add("group_law", max_abs(cxmat(u1 * u2 - ham.propagator(2.0))), 1e-9);
  c.add("time_reversal", max_abs(cxmat(u1 * ham.propagator(-0.7) - id)), 1e-10);

  const state_vector psi = c.inst.states[0];
  c.add("norm_preserved", std::abs(evolve_state(ham, 0.7, psi).norm() - psi.norm()), 1e-10);

  Eigen::SelfAdjointEigenSolver<cxmat> eig(ham.matrix());
  const cxvec v = eig.eigenvectors().col(0);
  const double lambda = eig.eigenvalues()(0);
  const cxvec phase_only = std::exp(cxd(0.0, -lambda * 0.7)) * v;
  c.add("eigenvector_picks_up_phase", (u1 * v - phase_only).cwiseAbs().maxCoeff(), 1e-9);
}

void suite_conditional_probability(check_ctx& c, fault_mode) {
  const hilbert_chart& chart = c.inst.chart;
  const state_vector& psi = c.inst.states[0];

  const index_set* best = nullptr;
  double best_mass = -1;
  for (const index_set& J : c.inst.random_sets) {
    const double mass = subspace_prob(chart, psi, J);
    if (mass > best_mass) {
      best_mass = mass;
      best = &J;
    }
  }
  if (!best || best_mass < 1e-12) return;
  const index_set& J = *best;

  index_set sub = set_intersection(J, c.inst.random_sets[0] == J ? c.inst.random_sets.back()
                                                                 : c.inst.random_sets[0]);
  if (sub.empty()) sub = index_set{J[0]};

  const observable p = primary(chart, J);
  state_vector conditioned = p.apply(psi);
  conditioned.coords /= conditioned.norm();

  const double cond = conditional_prob(chart, conditioned, J, sub);
  auto detail = [&] { return json{{"given", set_json(J)}, {"queried", set_json(sub)}}; };
  c.add("conditional_is_plain_mass_after_conditioning",
        std::abs(cond - subspace_prob(chart, conditioned, sub)), 1e-12, detail);
  c.add("chain_rule", std::abs(subspace_prob(chart, psi, sub) - best_mass * cond), 1e-10, detail);
  c.add("conditional_on_whole_set", std::abs(conditional_prob(chart, conditioned, J, J) - 1.0),
        1e-12, detail);
}

void suite_energy_resolution(check_ctx& c, fault_mode) {
  const hamiltonian ham(c.inst.hamiltonian_matrix, 1.0);
  const int n = ham.dim();
  const std::vector<spectral_line> lines = energy_spectrum(ham);

  cxmat total = cxmat::Zero(n, n);
  cxmat reassembled = cxmat::Zero(n, n);
  double herm = 0, idem = 0, ortho = 0;
  for (size_t a = 0; a < lines.size(); ++a) {
    const cxmat& p = lines[a].projection;
    total += p;
    reassembled += lines[a].energy * p;
    herm = std::max(herm, max_abs(cxmat(p - p.adjoint())));
    idem = std::max(idem, max_abs(cxmat(p * p - p)));
    for (size_t b = a + 1; b < lines.size(); ++b)
      ortho = std::max(ortho, max_abs(cxmat(p * lines[b].projection)));
  }
  c.add("lines_resolve_identity", max_abs(cxmat(total - cxmat::Identity(n, n))), 1e-9);
  c.add("lines_reassemble_generator", max_abs(cxmat(reassembled - ham.matrix())), 1e-9);
  c.add("line_projections_self_adjoint", herm, 1e-9);
  c.add("line_projections_idempotent", idem, 1e-9);
  c.add("line_projections_orthogonal", ortho, 1e-9);

  double ascending = 0;
  for (size_t a = 1; a < lines.size(); ++a)
    if (lines[a].energy <= lines[a - 1].energy) ascending = 1;
  c.add("energies_strictly_ascending", ascending, 0.5);
}

struct suite_entry {
  const char* id;
  void (*fn)(check_ctx&, fault_mode);
};

const std::vector<suite_entry>& registry() {
  static const std::vector<suite_entry> suites = {
      {"chart_isometry", suite_chart_isometry},
      {"conditional_probability", suite_conditional_probability},
      {"discrete_reduction", suite_discrete_reduction},
      {"eigenvalue_distribution", suite_eigenvalue_distribution},
      {"energy_resolution", suite_energy_resolution},
      {"evolution_group", suite_evolution_group},
      {"gauge_transport", suite_gauge_transport},
      {"hilbert_sum", suite_hilbert_sum},
      {"normal_decomposition", suite_normal_decomposition},
      {"observable_algebra", suite_observable_algebra},
      {"partition_probability", suite_partition_probability},
      {"primary_projection", suite_primary_projection},
      {"projection_lattice", suite_projection_lattice},
      {"spectral_integral", suite_spectral_integral},
      {"subspace_probability", suite_subspace_probability},
      {"tensor_product", suite_tensor_product},
  };
  return suites;
}

}  // namespace

verifier_instance generate_instance(std::uint64_t seed, int n) {
  if (n < 2 || n > 64) throw value_error("instance size must be in 2..64");
  std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(n)));

  const cxmat m = random_matrix(rng, n);
  cxmat k = m.adjoint() * m;
  // the ridge keeps the condition number at or below about 1e6
  const double ridge = 1e-6 * m.squaredNorm();
  k += ridge * cxmat::Identity(n, n);
  hilbert_chart chart = build_chart(gram_kernel::from_matrix(std::move(k)));

  std::vector<state_vector> states;
  for (int s = 0; s < 3; ++s) states.push_back(state_vector{random_unit_state(rng, n)});

  const std::vector<int> order = shuffled_indices(rng, n);
  const int chunk_count = std::min(3, n);
  std::vector<index_set> disjoint(static_cast<size_t>(chunk_count));
  for (int j = 0; j < n; ++j) disjoint[static_cast<size_t>(j % chunk_count)].push_back(order[static_cast<size_t>(j)]);
  for (auto& s : disjoint) s = normalize_set(std::move(s));

  std::vector<index_set> random_sets;
  while (random_sets.size() < 3) {
    index_set s;
    for (int j = 1; j <= n; ++j)
      if (unit_interval(rng) < 0.5) s.push_back(j);
    if (!s.empty()) random_sets.push_back(std::move(s));
  }

  const cxmat q_src = random_matrix(rng, n);
  Eigen::HouseholderQR<cxmat> qr(q_src);
  const cxmat q = qr.householderQ() * cxmat::Identity(n, n);
  const cxmat gauge = chart.factor() * q * chart.cholesky().adjoint();

  const cxmat r = random_matrix(rng, n);
  const cxmat ham = 0.5 * (r + r.adjoint());

  return verifier_instance{seed, n, std::move(chart), std::move(states), std::move(disjoint),
                           std::move(random_sets), gauge, ham};
}

std::vector<std::string> registry_ids() {
  std::vector<std::string> ids;
  for (const auto& s : registry()) ids.emplace_back(s.id);
  return ids;
}

bool verify_report::all_pass() const {
  for (const auto& row : rows)
    if (!row.pass) return false;
  return !rows.empty();
}

verify_report run_all(const verify_options& options) {
  if (options.seeds.empty()) throw value_error("need at least one seed");
  if (options.sizes.empty()) throw value_error("need at least one size");
  for (int n : options.sizes)
    if (n < 2 || n > 64) throw value_error("sizes must lie in 2..64");

  std::vector<verifier_instance> instances;
  for (int n : options.sizes)
    for (std::uint64_t seed : options.seeds) instances.push_back(generate_instance(seed, n));

  verify_report report;
  for (const auto& entry : registry()) {
    check_row row;
    row.proposition_id = entry.id;
    row.pass = true;
    double worst_ratio = -1.0;

    for (const auto& inst : instances) {
      std::vector<sub_result> subs;
      check_ctx ctx{inst, &subs};
      try {
        entry.fn(ctx, options.fault);
      } catch (const std::exception& e) {
        json payload{{"seed", inst.seed}, {"n", inst.n}, {"error", e.what()}};
        subs.push_back({std::string("unexpected_error"), 1.0, 1e-300, payload.dump()});
      }
      ++row.trials;

      for (const auto& s : subs) {
        const bool ok = s.defect <= s.tol;
        double ratio = s.tol > 0 ? s.defect / s.tol : std::numeric_limits<double>::infinity();
        if (!std::isfinite(ratio) || std::isnan(s.defect))
          ratio = ok ? 0.0 : std::numeric_limits<double>::infinity();
        if (!ok) row.pass = false;
        if (ratio > worst_ratio) {
          worst_ratio = ratio;
          row.max_defect = s.defect;
          row.tolerance = s.tol;
          row.worst_check = s.name;
          row.worst_seed = inst.seed;
          row.worst_n = inst.n;
          row.counterexample = ok ? "" : s.payload;
        }
      }
    }
    report.rows.push_back(std::move(row));
  }

  std::sort(report.rows.begin(), report.rows.end(),
            [](const check_row& a, const check_row& b) { return a.proposition_id < b.proposition_id; });
  return report;
}

}  // namespace mhilb
