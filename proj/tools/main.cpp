#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dispatch_table.hpp"
#include "mhilb/mhilb.hpp"

namespace {

using nlohmann::json;

json complex_json(const mhilb::cxd& z) { return json::array({z.real(), z.imag()}); }

json vector_json(const mhilb::cxvec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v(i)));
  return out;
}

json matrix_json(const mhilb::cxmat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json real_matrix_json(const mhilb::rmat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    size_t a = item.find_first_not_of(" \t");
    size_t b = item.find_last_not_of(" \t");
    if (a == std::string::npos) continue;
    parts.push_back(item.substr(a, b - a + 1));
  }
  return parts;
}

mhilb::index_set parse_index_list(const std::string& text) {
  mhilb::index_set out;
  for (const auto& part : split_commas(text)) {
    try {
      size_t used = 0;
      const int v = std::stoi(part, &used);
      if (used != part.size()) throw std::invalid_argument(part);
      out.push_back(v);
    } catch (const std::exception&) {
      throw mhilb::schema_error("'" + part + "' is not an integer index");
    }
  }
  if (out.empty()) throw mhilb::schema_error("index list is empty");
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& part : split_commas(text)) {
    try {
      size_t used = 0;
      const double v = std::stod(part, &used);
      if (used != part.size()) throw std::invalid_argument(part);
      out.push_back(v);
    } catch (const std::exception&) {
      throw mhilb::schema_error("'" + part + "' is not a number");
    }
  }
  if (out.empty()) throw mhilb::schema_error("number list is empty");
  return out;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (const auto& part : split_commas(text)) {
    try {
      size_t used = 0;
      const unsigned long long v = std::stoull(part, &used);
      if (used != part.size()) throw std::invalid_argument(part);
      out.push_back(v);
    } catch (const std::exception&) {
      throw mhilb::schema_error("'" + part + "' is not a seed");
    }
  }
  return out;
}

json load_json_file(const std::string& path) {
  json j = json::parse(mhilb::read_text_file(path), nullptr, false);
  if (j.is_discarded()) throw mhilb::schema_error("'" + path + "' is not valid JSON");
  return j;
}

mhilb::cxvec parse_complex_vector(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw mhilb::schema_error(what + " must be a non-empty array");
  mhilb::cxvec v(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) {
    const json& e = j[i];
    if (e.is_number())
      v(static_cast<Eigen::Index>(i)) = mhilb::cxd(e.get<double>(), 0.0);
    else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
      v(static_cast<Eigen::Index>(i)) = mhilb::cxd(e[0].get<double>(), e[1].get<double>());
    else
      throw mhilb::schema_error(what + " entries must be numbers or [re, im] pairs");
  }
  return v;
}

constexpr int kMatrixPrintLimit = 8;

json chart_report(const mhilb::hilbert_chart& chart) {
  json out{{"dim", chart.dim()},
           {"condition", chart.stats().cond},
           {"min_eigenvalue", chart.stats().min_eig},
           {"max_eigenvalue", chart.stats().max_eig},
           {"ill_conditioned", chart.stats().ill_conditioned},
           {"dual_pairing_defect", chart.dual_pairing_defect()}};
  const mhilb::cxmat id = mhilb::cxmat::Identity(chart.dim(), chart.dim());
  out["orthonormalization_defect"] =
      mhilb::max_abs(mhilb::cxmat(chart.factor().adjoint() * chart.gram() * chart.factor() - id));
  if (chart.dim() <= kMatrixPrintLimit) {
    out["gram"] = matrix_json(chart.gram());
    out["cholesky"] = matrix_json(chart.cholesky());
  }
  if (chart.stats().ill_conditioned)
    out["warnings"] = json::array({"Gram matrix condition number exceeds 1e10"});
  return out;
}

json operator_report(const mhilb::observable& y) {
  json out{{"dim", y.dim()},
           {"hermiticity_defect", y.hermiticity_defect()},
           {"idempotency_defect", y.idempotency_defect()},
           {"trace", complex_json(y.trace())}};
  switch (y.kind()) {
    case mhilb::observable_kind::primary: out["kind"] = "primary"; break;
    case mhilb::observable_kind::discrete_reduction: out["kind"] = "discrete_reduction"; break;
    case mhilb::observable_kind::algebra: out["kind"] = "algebra"; break;
    case mhilb::observable_kind::secondary: out["kind"] = "secondary"; break;
    default: out["kind"] = "general"; break;
  }
  if (y.kind() == mhilb::observable_kind::primary) out["indices"] = y.indices();
  if (y.kind() == mhilb::observable_kind::secondary) {
    out["eigenvalues"] = y.eigenvalues();
    out["index_sets"] = y.index_sets();
  }
  if (y.dim() <= kMatrixPrintLimit) out["matrix"] = matrix_json(y.matrix());
  return out;
}

mhilb::spectral_partition parse_partition_file(const std::string& path) {
  const json j = load_json_file(path);
  mhilb::spectral_partition part;
  if (j.is_object() && j.contains("cells") && j["cells"].is_array()) {
    for (const auto& cell : j["cells"]) {
      if (!cell.is_object() || !cell.contains("label") || !cell.contains("indices"))
        throw mhilb::schema_error("partition cells need label and indices");
      mhilb::index_set s;
      for (const auto& e : cell["indices"]) {
        if (!e.is_number_integer()) throw mhilb::schema_error("cell indices must be integers");
        s.push_back(e.get<int>());
      }
      part.cells.emplace_back(cell["label"].get<std::string>(), std::move(s));
    }
    return part;
  }
  throw mhilb::schema_error("partition file must be {\"cells\": [{label, indices}, ...]}");
}

struct secondary_spec {
  std::vector<double> lambdas;
  std::vector<mhilb::index_set> sets;
};

secondary_spec parse_secondary_file(const std::string& path) {
  const json j = load_json_file(path);
  if (!j.is_object() || !j.contains("lambdas") || !j.contains("sets"))
    throw mhilb::schema_error("secondary file needs lambdas and sets");
  secondary_spec spec;
  for (const auto& l : j["lambdas"]) {
    if (!l.is_number()) throw mhilb::schema_error("lambdas must be numbers");
    spec.lambdas.push_back(l.get<double>());
  }
  if (!j["sets"].is_array()) throw mhilb::schema_error("sets must be an array of index arrays");
  for (const auto& s : j["sets"]) {
    mhilb::index_set set;
    if (!s.is_array()) throw mhilb::schema_error("sets must be an array of index arrays");
    for (const auto& e : s) {
      if (!e.is_number_integer()) throw mhilb::schema_error("set entries must be integers");
      set.push_back(e.get<int>());
    }
    spec.sets.push_back(std::move(set));
  }
  return spec;
}

mhilb::gauge_map gauge_from_model(const mhilb::model_spec& spec,
                                  const mhilb::hilbert_chart& chart) {
  if (spec.gauge) {
    const auto n = static_cast<Eigen::Index>(
        std::llround(std::sqrt(static_cast<double>(spec.gauge->size()))));
    mhilb::cxmat u(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index k = 0; k < n; ++k) u(i, k) = (*spec.gauge)[static_cast<size_t>(i * n + k)];
    return mhilb::lift_gauge(chart, u);
  }
  if (spec.permutation) return mhilb::discrete_permutation(*spec.permutation);
  throw mhilb::schema_error("model declares neither gauge nor permutation");
}

// ---- subcommand handlers -------------------------------------------------

struct cli_state {
  std::string model_path, model2_path, state_path, state2_path;
  std::string algebra_path, secondary_path, partition_path, generator_path, recover_path;
  std::string hamiltonian_path, eval_path;
  std::string J_text, J2_text, given_text, retain_text, tuple_text, f_text;
  std::string mode, seeds_text, sizes_text;
  long flat_index = 0;
  double theta = 0, t_value = 0, hbar = std::nan("");
  double step = 1e-4;
  long draws = 0;
  std::uint64_t seed = 1;
  bool complexify = false, apply_gauge = false, truncation = false;
  bool stationary = false, spectrum = false, residual = false, heisenberg = false;
  bool tsv = false, json_out = false;
};

int cmd_build(const cli_state& st, json& out) {
  const mhilb::model_spec spec = mhilb::parse_model_file(st.model_path);
  const mhilb::hilbert_chart chart = mhilb::build_chart(mhilb::chart_kernel_from_model(spec));
  out["chart"] = chart_report(chart);

  if (st.complexify) {
    const mhilb::complex_structure cs = mhilb::complexify(chart);
    const int n = chart.dim();
    mhilb::rvec u(n), v(n);
    for (int i = 0; i < n; ++i) {
      u(i) = 1.0 + i;
      v(i) = (i % 2 == 0) ? 1.0 : -2.0;
    }
    u /= u.norm();
    v /= v.norm();
    const mhilb::cxd guu = cs.gamma(u, u);
    const mhilb::cxd guv = cs.gamma(u, v);
    const mhilb::cxd gvu = cs.gamma(v, u);
    json cj{{"pairs", n / 2},
            {"norm_defect", std::abs(guu - mhilb::cxd(1.0, 0.0))},
            {"symmetry_defect", std::abs(guv - std::conj(gvu))}};
    if (n <= kMatrixPrintLimit) cj["rotation"] = real_matrix_json(cs.j);
    out["complex_structure"] = cj;
  }

  if (!st.state_path.empty()) {
    const mhilb::state_vector psi = mhilb::parse_state_file(st.state_path, chart);
    json sj{{"norm", psi.norm()}};
    if (chart.dim() <= kMatrixPrintLimit) {
      sj["coords"] = vector_json(psi.coords);
      sj["components"] = vector_json(chart.components(psi));
    }
    out["state"] = sj;
  }
  return 0;
}

int cmd_estimate(const cli_state& st, json& out) {
  const mhilb::model_spec spec = mhilb::parse_model_file(st.model_path);
  if (spec.samples.empty()) throw mhilb::schema_error("model has no samples to estimate");
  json fits = json::array();
  for (const auto& samples : spec.samples) {
    const mhilb::estimate_result fit = mhilb::estimate_for_var(spec, samples);
    fits.push_back(json{{"var", samples.var},
                        {"coefficients", vector_json(fit.coefficients)},
                        {"residual_norm", fit.residual_norm},
                        {"normal_residual", fit.normal_residual}});
  }
  out["fits"] = fits;
  return 0;
}

int cmd_reduce(const cli_state& st, json& out) {
  const mhilb::model_spec spec = mhilb::parse_model_file(st.model_path);
  if (spec.discrete.empty()) throw mhilb::schema_error("model declares no discrete variables");
  std::vector<int> cards;
  for (const auto& v : spec.discrete) cards.push_back(v.cardinality);
  const mhilb::discrete_code code(cards);
  out["cardinalities"] = cards;
  out["dim"] = code.dim();

  if (!st.tuple_text.empty()) {
    const mhilb::index_set tuple = parse_index_list(st.tuple_text);
    out["encoded"] = code.encode(std::vector<int>(tuple.begin(), tuple.end()));
  }
  if (st.flat_index > 0) out["decoded"] = code.decode(st.flat_index);

  if (!st.retain_text.empty()) {
    const mhilb::reduction_matrix a = mhilb::reduce(code, parse_index_list(st.retain_text));
    json rj{{"retained", parse_index_list(st.retain_text)},
            {"rows", a.rows()},
            {"cols", a.cols()}};
    if (a.cols() <= 64) {
      rj["matrix"] = real_matrix_json(a.matrix());
      rj["row_gram"] = real_matrix_json(a.gram_aat());
      rj["column_gram"] = real_matrix_json(a.gram_ata());
    }
    const mhilb::observable avg = mhilb::discrete_primary(a);
    rj["averaging"] = json{{"hermiticity_defect", avg.hermiticity_defect()},
                           {"idempotency_defect", avg.idempotency_defect()},
                           {"trace", complex_json(avg.trace())}};
    out["reduction"] = rj;
  }
  return 0;
}

int cmd_observe(const cli_state& st, json& out) {
  const mhilb::model_spec spec = mhilb::parse_model_file(st.model_path);
  const mhilb::hilbert_chart chart = mhilb::build_chart(mhilb::chart_kernel_from_model(spec));

  std::optional<mhilb::state_vector> psi;
  if (!st.state_path.empty()) psi = mhilb::parse_state_file(st.state_path, chart);

  std::optional<mhilb::observable> op;

  if (!st.secondary_path.empty()) {
    const secondary_spec sec = parse_secondary_file(st.secondary_path);
    op = mhilb::secondary(chart, sec.lambdas, sec.sets);
    if (!st.J_text.empty()) {
      const mhilb::observable composed =
          mhilb::compose_with_primary(chart, *op, parse_index_list(st.J_text));
      out["composed"] = operator_report(composed);
      op = composed;
    }
  } else if (!st.algebra_path.empty()) {
    const json j = load_json_file(st.algebra_path);
    if (!j.is_object() || !j.contains("u"))
      throw mhilb::schema_error("algebra file needs a 'u' coefficient array");
    op = mhilb::algebra_element(chart, parse_complex_vector(j["u"], "u"));
  } else if (!st.J_text.empty()) {
    const mhilb::index_set J = parse_index_list(st.J_text);
    op = mhilb::primary(chart, J);
    if (st.truncation) {
      const mhilb::cxmat raw = mhilb::coefficient_truncation(chart, J);
      const mhilb::observable rawop(raw);
      json tj{{"hermiticity_defect", rawop.hermiticity_defect()},
              {"idempotency_defect", rawop.idempotency_defect()}};
      if (chart.dim() <= kMatrixPrintLimit) tj["matrix"] = matrix_json(raw);
      out["coefficient_truncation"] = tj;
    }
  }

  if (!st.partition_path.empty()) {
    const mhilb::spectral_partition part = parse_partition_file(st.partition_path);
    const std::vector<mhilb::observable> measure = mhilb::spectral_measure(chart, part);
    json cells = json::array();
    mhilb::cxmat total = mhilb::cxmat::Zero(chart.dim(), chart.dim());
    for (size_t k = 0; k < measure.size(); ++k) {
      total += measure[k].matrix();
      cells.push_back(json{{"label", part.cells[k].first},
                           {"indices", part.cells[k].second},
                           {"trace", complex_json(measure[k].trace())}});
    }
    json pj{{"cells", cells},
            {"resolution_defect",
             mhilb::max_abs(mhilb::cxmat(
                 total - mhilb::cxmat::Identity(chart.dim(), chart.dim())))}};
    if (!st.f_text.empty()) {
      const mhilb::observable integral =
          mhilb::spectral_integral(chart, parse_double_list(st.f_text), part);
      pj["integral"] = operator_report(integral);
      op = integral;
    }
    out["partition"] = pj;
  }

  if (op) {
    out["operator"] = operator_report(*op);
    if (op->kind() == mhilb::observable_kind::primary ||
        op->idempotency_defect() + op->hermiticity_defect() < 1e-8) {
      try {
        out["operator"]["recovered_indices"] = mhilb::recover_indices(*op);
      } catch (const mhilb::error&) {
      }
    }
    if (psi) {
      out["state_functional"] = complex_json(mhilb::state_functional(*op, *psi));
      if (op->kind() == mhilb::observable_kind::primary)
        out["projected_norm_sq"] = op->apply(*psi).coords.squaredNorm();
    }
  }

  if (!st.J2_text.empty()) {
    if (!op) throw mhilb::schema_error("--J2 needs a first operator (--J, --algebra, ...)");
    const mhilb::index_set J2 = parse_index_list(st.J2_text);
    const mhilb::observable p2 = mhilb::primary(chart, J2);
    json cj{{"second", operator_report(p2)},
            {"commutation_defect", mhilb::commutation_defect(*op, p2)}};
    if (!st.J_text.empty() && st.secondary_path.empty()) {
      const mhilb::index_set J1 = parse_index_list(st.J_text);
      const mhilb::observable meet =
          mhilb::primary(chart, mhilb::set_intersection(J1, J2).empty()
                                    ? J2
                                    : mhilb::set_intersection(J1, J2));
      if (!mhilb::set_intersection(J1, J2).empty())
        cj["meet_defect"] =
            mhilb::max_abs(mhilb::cxmat(op->matrix() * p2.matrix() - meet.matrix()));
    }
    out["pair"] = cj;
  }

  if (st.apply_gauge) {
    const mhilb::gauge_map g = gauge_from_model(spec, chart);
    json gj{{"unitarity_defect", g.unitarity_defect()}};
    if (chart.dim() <= kMatrixPrintLimit) {
      gj["coefficient_matrix"] = matrix_json(g.coefficient_matrix());
      gj["unitary"] = matrix_json(g.unitary());
    }
    if (op) {
      const mhilb::observable moved = mhilb::transform_operator(g, *op);
      gj["transformed"] = operator_report(moved);
      gj["symmetry_defect"] = mhilb::symmetry_defect(*op, g);
    }
    if (psi) {
      const mhilb::state_vector moved = g.apply(*psi);
      gj["state_norm"] = moved.norm();
      gj["state_symmetry_defect"] = mhilb::state_symmetry_defect(g, *psi);
      if (chart.dim() <= kMatrixPrintLimit) gj["state_coords"] = vector_json(moved.coords);
    }
    out["gauge"] = gj;
  }

  if (!st.generator_path.empty()) {
    const mhilb::cxmat s = mhilb::parse_matrix_file(st.generator_path, "matrix");
    const mhilb::gauge_map g = mhilb::one_param_group(s, st.theta);
    json gj{{"theta", st.theta}, {"unitarity_defect", g.unitarity_defect()}};
    if (g.dim() <= kMatrixPrintLimit) gj["unitary"] = matrix_json(g.unitary());
    if (op) gj["symmetry_defect"] = mhilb::symmetry_defect(*op, g);
    if (psi) gj["state_symmetry_defect"] = mhilb::state_symmetry_defect(g, *psi);
    out["one_param_group"] = gj;
  }

  if (!st.recover_path.empty()) {
    const json j = load_json_file(st.recover_path);
    if (!j.is_object() || !j.contains("samples") || !j["samples"].is_array())
      throw mhilb::schema_error("recovery file needs a 'samples' array");
    std::vector<std::pair<double, mhilb::cxmat>> samples;
    for (const auto& s : j["samples"]) {
      if (!s.is_object() || !s.contains("theta") || !s.contains("matrix"))
        throw mhilb::schema_error("each sample needs theta and matrix");
      mhilb::cxmat u(0, 0);
      const json& mj = s["matrix"];
      if (!mj.is_array()) throw mhilb::schema_error("sample matrix must be an array");
      const auto n = static_cast<Eigen::Index>(mj.size());
      u.resize(n, n);
      for (Eigen::Index r = 0; r < n; ++r) {
        if (!mj[static_cast<size_t>(r)].is_array() ||
            static_cast<Eigen::Index>(mj[static_cast<size_t>(r)].size()) != n)
          throw mhilb::schema_error("sample matrix must be square nested rows");
        for (Eigen::Index cidx = 0; cidx < n; ++cidx) {
          const json& e = mj[static_cast<size_t>(r)][static_cast<size_t>(cidx)];
          if (e.is_number())
            u(r, cidx) = mhilb::cxd(e.get<double>(), 0.0);
          else if (e.is_array() && e.size() == 2)
            u(r, cidx) = mhilb::cxd(e[0].get<double>(), e[1].get<double>());
          else
            throw mhilb::schema_error("matrix entries must be numbers or [re, im]");
        }
      }
      samples.emplace_back(s["theta"].get<double>(), std::move(u));
    }
    const mhilb::generator_fit fit = mhilb::generator_from_group(samples);
    json rj{{"reconstruction_error", fit.reconstruction_error},
            {"skew_defect",
             mhilb::max_abs(mhilb::cxmat(fit.generator + fit.generator.adjoint()))}};
    if (fit.generator.rows() <= kMatrixPrintLimit) rj["generator"] = matrix_json(fit.generator);
    out["recovered_generator"] = rj;
  }

  if (!op && st.partition_path.empty() && !st.apply_gauge && st.generator_path.empty() &&
      st.recover_path.empty())
    throw mhilb::schema_error(
        "nothing to do: give --J, --algebra, --secondary, --partition, --apply-gauge, "
        "--generator or --recover");
  return 0;
}

int cmd_prob(const cli_state& st, json& out) {
  const mhilb::model_spec spec = mhilb::parse_model_file(st.model_path);
  const mhilb::hilbert_chart chart = mhilb::build_chart(mhilb::chart_kernel_from_model(spec));
  const mhilb::state_vector psi = mhilb::parse_state_file(st.state_path, chart);

  if (!st.secondary_path.empty()) {
    const secondary_spec sec = parse_secondary_file(st.secondary_path);
    const mhilb::observable phi = mhilb::secondary(chart, sec.lambdas, sec.sets);
    const mhilb::measurement_distribution dist = mhilb::eigen_distribution(chart, phi, psi);

    json outcomes = json::array();
    double mean = 0;
    for (const auto& o : dist.outcomes) {
      outcomes.push_back(json{{"value", o.value}, {"prob", o.prob}, {"indices", o.indices}});
      mean += o.value * o.prob;
    }
    out["distribution"] =
        json{{"outcomes", outcomes}, {"total", dist.total()}, {"mean", mean}};

    if (st.draws > 0) {
      const std::vector<int> drawn =
          mhilb::sample_outcomes(dist, st.seed, static_cast<int>(st.draws));
      std::vector<long> counts(dist.outcomes.size(), 0);
      for (int k : drawn) counts[static_cast<size_t>(k)]++;
      json freq = json::array();
      for (size_t k = 0; k < counts.size(); ++k)
        freq.push_back(json{{"value", dist.outcomes[k].value},
                            {"count", counts[k]},
                            {"frequency", static_cast<double>(counts[k]) /
                                              static_cast<double>(st.draws)}});
      out["sampling"] = json{{"draws", st.draws}, {"seed", st.seed}, {"frequencies", freq}};

      const mhilb::measurement_draw one = mhilb::sample_measurement(dist, st.seed);
      json dj{{"value", one.value}, {"outcome_index", one.outcome_index},
              {"post_norm", one.post.norm()}};
      if (chart.dim() <= kMatrixPrintLimit) dj["post_coords"] = vector_json(one.post.coords);
      out["single_draw"] = dj;
    }
    return 0;
  }

  if (st.J_text.empty()) throw mhilb::schema_error("prob needs --J or --secondary");
  const mhilb::index_set J = parse_index_list(st.J_text);
  if (!st.given_text.empty()) {
    const mhilb::index_set given = parse_index_list(st.given_text);
    out["conditional_prob"] = mhilb::conditional_prob(chart, psi, given, J);
    out["given"] = given;
    out["indices"] = J;
  } else {
    out["prob"] = mhilb::subspace_prob(chart, psi, J);
    out["indices"] = J;
  }
  return 0;
}

int cmd_evolve(const cli_state& st, json& out) {
  const mhilb::model_spec spec = mhilb::parse_model_file(st.model_path);
  const mhilb::hilbert_chart chart = mhilb::build_chart(mhilb::chart_kernel_from_model(spec));

  if (!st.eval_path.empty()) {
    const json j = load_json_file(st.eval_path);
    if (!j.is_object() || !j.contains("basis") || !j.contains("grid") ||
        !j.contains("coefficients") || !j.contains("times"))
      throw mhilb::schema_error("evaluation file needs basis, grid, coefficients and times");

    std::vector<std::function<mhilb::cxd(double)>> basis;
    const std::string kind = j["basis"].get<std::string>();
    if (kind == "fourier") {
      if (!j.contains("omega")) throw mhilb::schema_error("fourier basis needs omega");
      for (const auto& w : j["omega"]) {
        const double omega = w.get<double>();
        basis.emplace_back(
            [omega](double t) { return std::exp(mhilb::cxd(0.0, omega * t)); });
      }
    } else if (kind == "monomial") {
      if (!j.contains("degree")) throw mhilb::schema_error("monomial basis needs degree");
      const int degree = j["degree"].get<int>();
      for (int p = 0; p <= degree; ++p)
        basis.emplace_back([p](double t) { return mhilb::cxd(std::pow(t, p), 0.0); });
    } else {
      throw mhilb::schema_error("basis must be fourier or monomial");
    }

    std::vector<double> grid;
    for (const auto& g : j["grid"]) grid.push_back(g.get<double>());
    const mhilb::evaluation_map ev(std::move(basis), grid);
    const mhilb::cxvec x = parse_complex_vector(j["coefficients"], "coefficients");

    json values = json::array();
    for (const auto& tj : j["times"]) {
      const double t = tj.get<double>();
      values.push_back(json{{"t", t}, {"value", complex_json(ev.apply(t, x))}});
    }
    out["evaluation"] = json{{"basis", kind}, {"values", values}};
    return 0;
  }

  if (st.hamiltonian_path.empty())
    throw mhilb::schema_error("evolve needs --hamiltonian (or --eval)");
  const mhilb::hamiltonian ham = mhilb::parse_hamiltonian_file(st.hamiltonian_path, st.hbar);
  if (ham.dim() != chart.dim())
    throw mhilb::dimension_mismatch("Hamiltonian does not match the chart dimension");

  out["hbar"] = ham.hbar();
  const mhilb::cxmat u = ham.propagator(st.t_value);
  out["propagator_unitarity_defect"] = mhilb::max_abs(
      mhilb::cxmat(u.adjoint() * u - mhilb::cxmat::Identity(ham.dim(), ham.dim())));
  if (ham.dim() <= kMatrixPrintLimit) out["propagator"] = matrix_json(u);
  out["t"] = st.t_value;

  if (!st.state_path.empty()) {
    const mhilb::state_vector psi = mhilb::parse_state_file(st.state_path, chart);
    const mhilb::state_vector moved = mhilb::evolve_state(ham, st.t_value, psi);
    json sj{{"norm", moved.norm()}};
    if (chart.dim() <= kMatrixPrintLimit) sj["coords"] = vector_json(moved.coords);
    out["evolved_state"] = sj;

    if (st.residual) {
      if (st.step > 1e-3) throw mhilb::grid_too_coarse("--step must be at most 1e-3");
      std::vector<mhilb::cxvec> trajectory;
      const int points = 5;
      for (int k = 0; k < points; ++k)
        trajectory.push_back(
            mhilb::evolve_state(ham, st.t_value + st.step * k, psi).coords);
      out["schrodinger_residual"] =
          json{{"step", st.step},
               {"residual", mhilb::schrodinger_residual(ham, trajectory, st.step)}};
    }
  }

  if (st.heisenberg) {
    if (st.J_text.empty()) throw mhilb::schema_error("--heisenberg needs --J");
    const mhilb::observable y0 = mhilb::primary(chart, parse_index_list(st.J_text));
    const mhilb::observable yt = mhilb::heisenberg_operator(ham, st.t_value, y0);
    out["heisenberg"] = operator_report(yt);
  }

  if (st.stationary) {
    const std::vector<mhilb::cxvec> states = mhilb::stationary_states(ham);
    json sj = json::array();
    for (const auto& v : states)
      sj.push_back(chart.dim() <= kMatrixPrintLimit ? vector_json(v)
                                                    : json{{"norm", v.norm()}});
    out["stationary_states"] = json{{"count", states.size()}, {"states", sj}};
  }

  if (st.spectrum) {
    const std::vector<mhilb::spectral_line> lines = mhilb::energy_spectrum(ham);
    mhilb::cxmat total = mhilb::cxmat::Zero(ham.dim(), ham.dim());
    mhilb::cxmat reassembled = mhilb::cxmat::Zero(ham.dim(), ham.dim());
    json lj = json::array();
    for (const auto& line : lines) {
      total += line.projection;
      reassembled += line.energy * line.projection;
      json entry{{"energy", line.energy},
                 {"multiplicity", std::llround(line.projection.trace().real())}};
      if (ham.dim() <= kMatrixPrintLimit) entry["projection"] = matrix_json(line.projection);
      lj.push_back(std::move(entry));
    }
    out["energy_spectrum"] =
        json{{"lines", lj},
             {"resolution_defect",
              mhilb::max_abs(mhilb::cxmat(
                  total - mhilb::cxmat::Identity(ham.dim(), ham.dim())))},
             {"reassembly_defect",
              mhilb::max_abs(mhilb::cxmat(reassembled - ham.matrix()))}};
  }
  return 0;
}

int cmd_compose(const cli_state& st, json& out) {
  const mhilb::model_spec spec1 = mhilb::parse_model_file(st.model_path);
  const mhilb::model_spec spec2 = mhilb::parse_model_file(st.model2_path);
  const mhilb::hilbert_chart c1 = mhilb::build_chart(mhilb::chart_kernel_from_model(spec1));
  const mhilb::hilbert_chart c2 = mhilb::build_chart(mhilb::chart_kernel_from_model(spec2));

  if (st.mode == "sum") {
    const mhilb::sum_chart sc = mhilb::hilbert_sum({c1, c2});
    out["chart"] = chart_report(sc.chart);
    json blocks = json::array();
    mhilb::cxmat total = mhilb::cxmat::Zero(sc.chart.dim(), sc.chart.dim());
    for (int k = 1; k <= sc.factor_count(); ++k) {
      const mhilb::observable p = sc.projection(k);
      total += p.matrix();
      blocks.push_back(json{{"indices", sc.blocks[static_cast<size_t>(k - 1)]},
                            {"hermiticity_defect", p.hermiticity_defect()},
                            {"idempotency_defect", p.idempotency_defect()}});
    }
    out["blocks"] = blocks;
    out["resolution_defect"] = mhilb::max_abs(
        mhilb::cxmat(total - mhilb::cxmat::Identity(sc.chart.dim(), sc.chart.dim())));
    return 0;
  }

  if (st.mode != "tensor") throw mhilb::schema_error("--mode must be sum or tensor");
  const mhilb::tensor_chart tc = mhilb::tensor_product(c1, c2);
  out["chart"] = chart_report(tc.chart);
  out["factor_dims"] = json::array({c1.dim(), c2.dim()});
  out["flat_11"] = tc.flat(1, 1);
  out["flat_last"] = tc.flat(c1.dim(), c2.dim());

  if (!st.state_path.empty() && !st.state2_path.empty()) {
    const mhilb::state_vector p1 = mhilb::parse_state_file(st.state_path, c1);
    const mhilb::state_vector p2 = mhilb::parse_state_file(st.state2_path, c2);
    const mhilb::state_vector prod = mhilb::tensor_state(tc, p1, p2);
    double defect = 0;
    for (int i = 1; i <= c1.dim(); ++i)
      for (int k = 1; k <= c2.dim(); ++k)
        defect = std::max(defect,
                          std::abs(prod.coords(tc.flat(i, k) - 1) -
                                   p1.coords(i - 1) * p2.coords(k - 1)));
    json sj{{"norm", prod.norm()}, {"factorization_defect", defect}};
    if (prod.dim() <= kMatrixPrintLimit) sj["coords"] = vector_json(prod.coords);
    out["tensor_state"] = sj;
  }

  if (!st.J_text.empty() && !st.J2_text.empty()) {
    const mhilb::observable a = mhilb::primary(c1, parse_index_list(st.J_text));
    const mhilb::observable b = mhilb::primary(c2, parse_index_list(st.J2_text));
    const mhilb::observable lifted = mhilb::tensor_lift(tc, a, b);
    out["tensor_lift"] = operator_report(lifted);
  }
  return 0;
}

int cmd_verify(const cli_state& st, std::string& rendered) {
  mhilb::verify_options options;
  if (!st.seeds_text.empty()) options.seeds = parse_seed_list(st.seeds_text);
  if (!st.sizes_text.empty()) {
    options.sizes.clear();
    for (int n : parse_index_list(st.sizes_text)) options.sizes.push_back(n);
  }
  const mhilb::verify_report report = mhilb::run_all(options);
  rendered = st.tsv ? mhilb::render_report_tsv(report) : mhilb::render_report_json(report);
  return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite measurement-model charts: build, observe, evolve, verify"};
  app.require_subcommand(1);
  std::string footer = "subcommands reach these library operations:\n";
  for (const auto& entry : dispatch_table)
    footer += std::string("  ") + entry.command + ": " + entry.operations + "\n";
  app.footer(footer);

  cli_state st;

  CLI::App* build = app.add_subcommand("build", dispatch_table[0].summary);
  build->add_option("--model", st.model_path)->required();
  build->add_flag("--complexify", st.complexify);
  build->add_option("--state", st.state_path);

  CLI::App* estimate = app.add_subcommand("estimate", dispatch_table[1].summary);
  estimate->add_option("--model", st.model_path)->required();

  CLI::App* reduce = app.add_subcommand("reduce", dispatch_table[2].summary);
  reduce->add_option("--model", st.model_path)->required();
  reduce->add_option("--retain", st.retain_text);
  reduce->add_option("--tuple", st.tuple_text);
  reduce->add_option("--flat", st.flat_index);

  CLI::App* observe = app.add_subcommand("observe", dispatch_table[3].summary);
  observe->add_option("--model", st.model_path)->required();
  observe->add_option("--J", st.J_text);
  observe->add_option("--J2", st.J2_text);
  observe->add_option("--algebra", st.algebra_path);
  observe->add_option("--secondary", st.secondary_path);
  observe->add_option("--partition", st.partition_path);
  observe->add_option("--f", st.f_text);
  observe->add_option("--state", st.state_path);
  observe->add_flag("--apply-gauge", st.apply_gauge);
  observe->add_flag("--truncation", st.truncation);
  observe->add_option("--generator", st.generator_path);
  observe->add_option("--theta", st.theta);
  observe->add_option("--recover", st.recover_path);

  CLI::App* prob = app.add_subcommand("prob", dispatch_table[4].summary);
  prob->add_option("--model", st.model_path)->required();
  prob->add_option("--state", st.state_path)->required();
  prob->add_option("--J", st.J_text);
  prob->add_option("--given", st.given_text);
  prob->add_option("--secondary", st.secondary_path);
  prob->add_option("--draws", st.draws);
  prob->add_option("--seed", st.seed);

  CLI::App* evolve = app.add_subcommand("evolve", dispatch_table[5].summary);
  evolve->add_option("--model", st.model_path)->required();
  evolve->add_option("--hamiltonian", st.hamiltonian_path);
  evolve->add_option("--hbar", st.hbar);
  evolve->add_option("--t", st.t_value);
  evolve->add_option("--state", st.state_path);
  evolve->add_option("--J", st.J_text);
  evolve->add_flag("--heisenberg", st.heisenberg);
  evolve->add_flag("--stationary", st.stationary);
  evolve->add_flag("--spectrum", st.spectrum);
  evolve->add_flag("--residual", st.residual);
  evolve->add_option("--step", st.step);
  evolve->add_option("--eval", st.eval_path);

  CLI::App* compose = app.add_subcommand("compose", dispatch_table[6].summary);
  compose->add_option("--mode", st.mode)->required();
  compose->add_option("--model", st.model_path)->required();
  compose->add_option("--model2", st.model2_path)->required();
  compose->add_option("--state", st.state_path);
  compose->add_option("--state2", st.state2_path);
  compose->add_option("--J", st.J_text);
  compose->add_option("--J2", st.J2_text);

  CLI::App* verify = app.add_subcommand("verify", dispatch_table[7].summary);
  verify->add_option("--seeds", st.seeds_text);
  verify->add_option("--sizes", st.sizes_text);
  verify->add_flag("--tsv", st.tsv);
  verify->add_flag("--json", st.json_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (verify->parsed()) {
      std::string rendered;
      const int code = cmd_verify(st, rendered);
      std::cout << rendered;
      return code;
    }

    json out;
    int code = 0;
    if (build->parsed()) code = cmd_build(st, out);
    else if (estimate->parsed()) code = cmd_estimate(st, out);
    else if (reduce->parsed()) code = cmd_reduce(st, out);
    else if (observe->parsed()) code = cmd_observe(st, out);
    else if (prob->parsed()) code = cmd_prob(st, out);
    else if (evolve->parsed()) code = cmd_evolve(st, out);
    else if (compose->parsed()) code = cmd_compose(st, out);
    std::cout << out.dump(2) << "\n";
    return code;
  } catch (const mhilb::schema_error& e) {
    std::cerr << json{{"error", e.what()}}.dump() << "\n";
    return 2;
  } catch (const mhilb::error& e) {
    std::cerr << json{{"error", e.what()}}.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", e.what()}}.dump() << "\n";
    return 1;
  }
}
