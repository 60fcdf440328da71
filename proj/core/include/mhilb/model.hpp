#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mhilb/errors.hpp"
#include "mhilb/types.hpp"

namespace mhilb {

struct continuous_var {
  std::string name;
  int basis_size = 0;
};

struct discrete_var {
  std::string name;
  int cardinality = 0;
};

// sampled values of one variable at arbitrary argument tuples, used to
// estimate basis coefficients by least squares
struct sample_set {
  std::string var;
  std::vector<std::vector<double>> args;
  std::vector<cxd> values;
};

struct kernel_spec {
  std::string name;  // gaussian | min | linear | polynomial
  std::map<std::string, double> params;
  std::vector<std::vector<double>> points;
};

struct model_spec {
  std::vector<continuous_var> continuous;
  std::vector<discrete_var> discrete;
  std::vector<sample_set> samples;
  std::optional<std::vector<cxd>> gram;  // row-major, square
  std::optional<kernel_spec> kernel;
  std::optional<std::vector<cxd>> gauge;  // row-major, square
  std::optional<std::vector<int>> permutation;  // 1-based images

  int continuous_dim() const;
  long long discrete_dim() const;
};

// parses and validates the JSON model text
model_spec parse_model_spec(const std::string& text);
model_spec parse_model_file(const std::string& path);

// bijection between tuples of 1-based discrete values and flat 1-based
// indices; the last variable varies fastest
class discrete_code {
 public:
  explicit discrete_code(std::vector<int> cardinalities);

  int var_count() const { return static_cast<int>(cards_.size()); }
  const std::vector<int>& cardinalities() const { return cards_; }
  long long dim() const { return dim_; }

  long long encode(const std::vector<int>& tuple) const;
  std::vector<int> decode(long long flat) const;

 private:
  std::vector<int> cards_;
  std::vector<long long> strides_;
  long long dim_ = 1;
};

// 0/1 matrix with exactly one 1 per column, mapping the full discrete
// basis onto the basis of a sub-product of variables
class reduction_matrix {
 public:
  explicit reduction_matrix(rmat a);

  const rmat& matrix() const { return a_; }
  int rows() const { return static_cast<int>(a_.rows()); }
  int cols() const { return static_cast<int>(a_.cols()); }
  rmat gram_aat() const { return a_ * a_.transpose(); }
  rmat gram_ata() const { return a_.transpose() * a_; }

 private:
  rmat a_;
};

// retained holds 1-based positions into the variable list of the code
reduction_matrix reduce(const discrete_code& code, const index_set& retained);

struct estimate_result {
  cxvec coefficients;
  double residual_norm;
  // max |B^H r|, the normal-equations orthogonality defect of the fit
  double normal_residual;
};

// least-squares fit of y against the columns of basis, QR based
estimate_result estimate_components(const cxmat& basis, const cxvec& y);

}  // namespace mhilb
