#include "mhilb/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mhilb/verifier.hpp"

namespace mhilb {

namespace {

using nlohmann::json;

json parse_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw schema_error("input is not valid JSON");
  return j;
}

cxd parse_complex(const json& j) {
  if (j.is_number()) return cxd(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return cxd(j[0].get<double>(), j[1].get<double>());
  throw schema_error("complex values must be numbers or [re, im] pairs");
}

std::vector<cxd> parse_complex_list(const json& j, const std::string& what) {
  if (!j.is_array()) throw schema_error(what + " must be an array");
  std::vector<cxd> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(parse_complex(e));
  return out;
}

bool looks_like_nested_rows(const json& j) {
  if (!j.is_array() || j.empty()) return false;
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != j.size()) return false;
    for (const auto& e : row)
      if (!e.is_number() && !(e.is_array() && e.size() == 2)) return false;
  }
  return true;
}

cxmat parse_square_matrix(const json& j, const std::string& what) {
  if (looks_like_nested_rows(j)) {
    const Eigen::Index n = static_cast<Eigen::Index>(j.size());
    cxmat m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index k = 0; k < n; ++k) m(i, k) = parse_complex(j[static_cast<size_t>(i)][static_cast<size_t>(k)]);
    return m;
  }
  const std::vector<cxd> flat = parse_complex_list(j, what);
  const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(flat.size()))));
  if (flat.empty() || static_cast<size_t>(n) * static_cast<size_t>(n) != flat.size())
    throw schema_error(what + " must be square: row-major length n*n or nested rows");
  cxmat m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < n; ++k) m(i, k) = flat[static_cast<size_t>(i * n + k)];
  return m;
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!allowed.count(key)) throw schema_error("unknown key '" + key + "' in " + where);
  }
}

int parse_positive_int(const json& j, const std::string& what) {
  if (!j.is_number_integer() || j.get<long long>() < 1)
    throw schema_error(what + " must be a positive integer");
  if (j.get<long long>() > (1 << 26)) throw schema_error(what + " is implausibly large");
  return static_cast<int>(j.get<long long>());
}

}  // namespace

model_spec parse_model_spec(const std::string& text) {
  const json j = parse_json(text);
  if (!j.is_object()) throw schema_error("model must be a JSON object");
  check_keys(j, {"continuous", "discrete", "samples", "gram", "kernel", "gauge", "permutation"},
             "model");

  model_spec spec;
  std::set<std::string> names;

  if (j.contains("continuous")) {
    if (!j["continuous"].is_array()) throw schema_error("continuous must be an array");
    for (const auto& v : j["continuous"]) {
      if (!v.is_object()) throw schema_error("continuous entries must be objects");
      check_keys(v, {"name", "basis_size"}, "continuous variable");
      if (!v.contains("name") || !v["name"].is_string() || v["name"].get<std::string>().empty())
        throw schema_error("continuous variable needs a non-empty name");
      if (!v.contains("basis_size")) throw schema_error("continuous variable needs basis_size");
      continuous_var var{v["name"].get<std::string>(),
                         parse_positive_int(v["basis_size"], "basis_size")};
      if (!names.insert(var.name).second)
        throw schema_error("variable name '" + var.name + "' repeated");
      spec.continuous.push_back(std::move(var));
    }
  }

  if (j.contains("discrete")) {
    if (!j["discrete"].is_array()) throw schema_error("discrete must be an array");
    for (const auto& v : j["discrete"]) {
      if (!v.is_object()) throw schema_error("discrete entries must be objects");
      check_keys(v, {"name", "cardinality"}, "discrete variable");
      if (!v.contains("name") || !v["name"].is_string() || v["name"].get<std::string>().empty())
        throw schema_error("discrete variable needs a non-empty name");
      if (!v.contains("cardinality")) throw schema_error("discrete variable needs cardinality");
      discrete_var var{v["name"].get<std::string>(),
                       parse_positive_int(v["cardinality"], "cardinality")};
      if (!names.insert(var.name).second)
        throw schema_error("variable name '" + var.name + "' repeated");
      spec.discrete.push_back(std::move(var));
    }
  }

  if (j.contains("samples")) {
    if (!j["samples"].is_array()) throw schema_error("samples must be an array");
    for (const auto& s : j["samples"]) {
      if (!s.is_object()) throw schema_error("sample sets must be objects");
      check_keys(s, {"var", "args", "values"}, "sample set");
      if (!s.contains("var") || !s["var"].is_string())
        throw schema_error("sample set needs a var name");
      sample_set set;
      set.var = s["var"].get<std::string>();
      bool declared = false;
      for (const auto& v : spec.continuous) declared = declared || v.name == set.var;
      if (!declared)
        throw schema_error("samples reference undeclared continuous variable '" + set.var + "'");
      if (!s.contains("args") || !s["args"].is_array() || s["args"].empty())
        throw schema_error("sample set needs non-empty args");
      for (const auto& a : s["args"]) {
        std::vector<double> arg;
        if (a.is_number()) {
          arg.push_back(a.get<double>());
        } else if (a.is_array() && !a.empty()) {
          for (const auto& x : a) {
            if (!x.is_number()) throw schema_error("sample args must be numbers");
            arg.push_back(x.get<double>());
          }
        } else {
          throw schema_error("sample args must be numbers or number tuples");
        }
        if (!set.args.empty() && set.args[0].size() != arg.size())
          throw schema_error("sample args have mixed arity");
        set.args.push_back(std::move(arg));
      }
      if (!s.contains("values")) throw schema_error("sample set needs values");
      set.values = parse_complex_list(s["values"], "sample values");
      if (set.values.size() != set.args.size())
        throw schema_error("sample values and args must have equal length");
      spec.samples.push_back(std::move(set));
    }
  }

  if (j.contains("gram") && j.contains("kernel"))
    throw schema_error("give either gram or kernel, not both");

  if (j.contains("gram")) {
    const cxmat m = parse_square_matrix(j["gram"], "gram");
    std::vector<cxd> row_major;
    row_major.reserve(static_cast<size_t>(m.size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index k = 0; k < m.cols(); ++k) row_major.push_back(m(i, k));
    spec.gram = std::move(row_major);
  }

  if (j.contains("kernel")) {
    const json& kj = j["kernel"];
    if (!kj.is_object()) throw schema_error("kernel must be an object");
    check_keys(kj, {"name", "params", "points"}, "kernel");
    if (!kj.contains("name") || !kj["name"].is_string())
      throw schema_error("kernel needs a name");
    kernel_spec ks;
    ks.name = kj["name"].get<std::string>();
    if (ks.name != "gaussian" && ks.name != "min" && ks.name != "linear" &&
        ks.name != "polynomial")
      throw schema_error("unknown kernel '" + ks.name + "'");
    if (kj.contains("params")) {
      if (!kj["params"].is_object()) throw schema_error("kernel params must be an object");
      for (const auto& [key, value] : kj["params"].items()) {
        if (!value.is_number()) throw schema_error("kernel params must be numbers");
        ks.params[key] = value.get<double>();
      }
    }
    if (!kj.contains("points") || !kj["points"].is_array() || kj["points"].empty())
      throw schema_error("kernel needs non-empty points");
    for (const auto& p : kj["points"]) {
      std::vector<double> point;
      if (p.is_number()) {
        point.push_back(p.get<double>());
      } else if (p.is_array() && !p.empty()) {
        for (const auto& x : p) {
          if (!x.is_number()) throw schema_error("kernel points must be numbers");
          point.push_back(x.get<double>());
        }
      } else {
        throw schema_error("kernel points must be numbers or number tuples");
      }
      if (!ks.points.empty() && ks.points[0].size() != point.size())
        throw schema_error("kernel points have mixed arity");
      ks.points.push_back(std::move(point));
    }
    spec.kernel = std::move(ks);
  }

  if (j.contains("gauge")) {
    const cxmat m = parse_square_matrix(j["gauge"], "gauge");
    std::vector<cxd> row_major;
    row_major.reserve(static_cast<size_t>(m.size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index k = 0; k < m.cols(); ++k) row_major.push_back(m(i, k));
    spec.gauge = std::move(row_major);
  }

  if (j.contains("permutation")) {
    if (!j["permutation"].is_array() || j["permutation"].empty())
      throw schema_error("permutation must be a non-empty array");
    std::vector<int> sigma;
    for (const auto& e : j["permutation"])
      sigma.push_back(parse_positive_int(e, "permutation image"));
    spec.permutation = std::move(sigma);
  }

  if (spec.continuous.empty() && spec.discrete.empty() && !spec.gram && !spec.kernel)
    throw schema_error("model declares no variables and no Gram source");

  return spec;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw value_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

model_spec parse_model_file(const std::string& path) {
  return parse_model_spec(read_text_file(path));
}

gram_kernel chart_kernel_from_model(const model_spec& spec) {
  if (spec.gram && spec.kernel) throw schema_error("give either gram or kernel, not both");
  if (spec.gram) {
    const auto n =
        static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(spec.gram->size()))));
    cxmat m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index k = 0; k < n; ++k) m(i, k) = (*spec.gram)[static_cast<size_t>(i * n + k)];
    if (spec.continuous_dim() > 0 && n != spec.continuous_dim())
      throw dimension_mismatch("gram size does not match the declared basis sizes");
    return gram_kernel::from_matrix(std::move(m));
  }
  if (spec.kernel) {
    if (spec.continuous_dim() > 0 &&
        spec.kernel->points.size() != static_cast<size_t>(spec.continuous_dim()))
      throw dimension_mismatch("kernel point count does not match the declared basis sizes");
    return gram_kernel::from_kernel(*spec.kernel);
  }
  const int n = spec.continuous_dim();
  if (n < 1) throw schema_error("model has no continuous dimensions and no Gram source");
  return gram_kernel::from_matrix(cxmat::Identity(n, n));
}

state_vector parse_state_file(const std::string& path, const hilbert_chart& chart) {
  const json j = parse_json(read_text_file(path));
  if (!j.is_object()) throw schema_error("state file must be a JSON object");
  check_keys(j, {"coords", "coefficients"}, "state file");
  const bool has_coords = j.contains("coords");
  const bool has_coeffs = j.contains("coefficients");
  if (has_coords == has_coeffs)
    throw schema_error("state file needs exactly one of coords or coefficients");

  const std::vector<cxd> entries =
      parse_complex_list(has_coords ? j["coords"] : j["coefficients"], "state entries");
  if (entries.size() != static_cast<size_t>(chart.dim()))
    throw dimension_mismatch("state length does not match the chart dimension");
  cxvec v(static_cast<Eigen::Index>(entries.size()));
  for (size_t i = 0; i < entries.size(); ++i) v(static_cast<Eigen::Index>(i)) = entries[i];
  if (has_coords) return state_vector{std::move(v)};
  return chart.lift(v);
}

cxmat parse_matrix_file(const std::string& path, const std::string& key) {
  const json j = parse_json(read_text_file(path));
  if (!j.is_object() || !j.contains(key))
    throw schema_error("file must be a JSON object with a '" + key + "' entry");
  return parse_square_matrix(j[key], key);
}

hamiltonian parse_hamiltonian_file(const std::string& path, double hbar) {
  const json j = parse_json(read_text_file(path));
  if (!j.is_object() || !j.contains("matrix"))
    throw schema_error("Hamiltonian file must be a JSON object with a 'matrix' entry");
  check_keys(j, {"matrix", "hbar"}, "Hamiltonian file");
  double used = hbar;
  if (std::isnan(used)) {
    used = 1.0;
    if (j.contains("hbar")) {
      if (!j["hbar"].is_number()) throw schema_error("hbar must be a number");
      used = j["hbar"].get<double>();
    }
  }
  return hamiltonian(parse_square_matrix(j["matrix"], "matrix"), used);
}

estimate_result estimate_for_var(const model_spec& spec, const sample_set& samples) {
  int basis_size = 0;
  for (const auto& v : spec.continuous)
    if (v.name == samples.var) basis_size = v.basis_size;
  if (basis_size == 0)
    throw schema_error("samples reference undeclared continuous variable '" + samples.var + "'");

  const auto rows = static_cast<Eigen::Index>(samples.args.size());
  cxmat basis;
  if (spec.kernel) {
    const auto& points = spec.kernel->points;
    basis.resize(rows, static_cast<Eigen::Index>(points.size()));
    for (Eigen::Index i = 0; i < rows; ++i)
      for (size_t p = 0; p < points.size(); ++p)
        basis(i, static_cast<Eigen::Index>(p)) =
            kernel_value(*spec.kernel, samples.args[static_cast<size_t>(i)], points[p]);
  } else {
    basis.resize(rows, basis_size);
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double x = samples.args[static_cast<size_t>(i)][0];
      double pow = 1.0;
      for (int p = 0; p < basis_size; ++p) {
        basis(i, p) = pow;
        pow *= x;
      }
    }
  }

  cxvec y(rows);
  for (Eigen::Index i = 0; i < rows; ++i) y(i) = samples.values[static_cast<size_t>(i)];
  return estimate_components(basis, y);
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string format_complex(const cxd& z) {
  return "[" + format_double(z.real()) + "," + format_double(z.imag()) + "]";
}

std::string render_report_json(const verify_report& report) {
  json rows = json::array();
  for (const auto& row : report.rows) {
    json r{{"proposition_id", row.proposition_id},
           {"trials", row.trials},
           {"max_defect", row.max_defect},
           {"tolerance", row.tolerance},
           {"pass", row.pass},
           {"worst_check", row.worst_check},
           {"worst_seed", row.worst_seed},
           {"worst_n", row.worst_n}};
    if (row.counterexample.empty())
      r["counterexample"] = nullptr;
    else
      r["counterexample"] = json::parse(row.counterexample);
    rows.push_back(std::move(r));
  }
  json out{{"all_pass", report.all_pass()}, {"rows", rows}};
  return out.dump(2) + "\n";
}

std::string render_report_tsv(const verify_report& report) {
  auto fixed = [](double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
  };
  std::string out =
      "proposition_id\ttrials\tmax_defect\ttolerance\tpass\tworst_check\tworst_seed\tworst_n\t"
      "counterexample\n";
  for (const auto& row : report.rows) {
    out += row.proposition_id + "\t" + std::to_string(row.trials) + "\t" + fixed(row.max_defect) +
           "\t" + fixed(row.tolerance) + "\t" + (row.pass ? "true" : "false") + "\t" +
           row.worst_check + "\t" + std::to_string(row.worst_seed) + "\t" +
           std::to_string(row.worst_n) + "\t" +
           (row.counterexample.empty() ? "-" : row.counterexample) + "\n";
  }
  return out;
}

}  // namespace mhilb
