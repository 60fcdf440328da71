#include "mhilb/model.hpp"

#include <limits>

namespace mhilb {

int model_spec::continuous_dim() const {
  int total = 0;
  for (const auto& v : continuous) total += v.basis_size;
  return total;
}

long long model_spec::discrete_dim() const {
  long long total = 1;
  for (const auto& v : discrete) {
    if (v.cardinality > 0 &&
        total > std::numeric_limits<long long>::max() / v.cardinality)
      throw overflow_error("discrete state space too large");
    total *= v.cardinality;
  }
  return total;
}

discrete_code::discrete_code(std::vector<int> cardinalities) : cards_(std::move(cardinalities)) {
  if (cards_.empty()) throw value_error("discrete code needs at least one variable");
  for (int c : cards_)
    if (c < 1) throw value_error("cardinality must be positive");
  strides_.assign(cards_.size(), 1);
  for (int k = static_cast<int>(cards_.size()) - 2; k >= 0; --k) {
    const long long below = strides_[static_cast<size_t>(k + 1)];
    const long long card = cards_[static_cast<size_t>(k + 1)];
    if (below > std::numeric_limits<long long>::max() / card)
      throw overflow_error("discrete state space too large");
    strides_[static_cast<size_t>(k)] = below * card;
  }
  const long long stride0 = strides_[0];
  if (stride0 > std::numeric_limits<long long>::max() / cards_[0])
    throw overflow_error("discrete state space too large");
  dim_ = stride0 * cards_[0];
}

long long discrete_code::encode(const std::vector<int>& tuple) const {
  if (tuple.size() != cards_.size()) throw dimension_mismatch("tuple length != variable count");
  long long flat = 0;
  for (size_t k = 0; k < cards_.size(); ++k) {
    if (tuple[k] < 1 || tuple[k] > cards_[k])
      throw index_out_of_range("tuple entry " + std::to_string(tuple[k]) + " outside 1.." +
                               std::to_string(cards_[k]));
    flat += static_cast<long long>(tuple[k] - 1) * strides_[k];
  }
  return flat + 1;
}

std::vector<int> discrete_code::decode(long long flat) const {
  if (flat < 1 || flat > dim_)
    throw index_out_of_range("flat index " + std::to_string(flat) + " outside 1.." +
                             std::to_string(dim_));
  long long rest = flat - 1;
  std::vector<int> tuple(cards_.size());
  for (size_t k = 0; k < cards_.size(); ++k) {
    tuple[k] = static_cast<int>(rest / strides_[k]) + 1;
    rest %= strides_[k];
  }
  return tuple;
}

reduction_matrix::reduction_matrix(rmat a) : a_(std::move(a)) {
  if (a_.rows() < 1 || a_.cols() < 1) throw value_error("reduction matrix must be non-empty");
  for (Eigen::Index j = 0; j < a_.cols(); ++j) {
    int ones = 0;
    for (Eigen::Index i = 0; i < a_.rows(); ++i) {
      const double v = a_(i, j);
      if (v == 1.0)
        ++ones;
      else if (v != 0.0)
        throw value_error("reduction matrix entries must be 0 or 1");
    }
    if (ones != 1) throw value_error("each column must select exactly one row");
  }
  for (Eigen::Index i = 0; i < a_.rows(); ++i)
    if (a_.row(i).sum() == 0.0) throw rank_deficient("reduction matrix has an empty row");
}

reduction_matrix reduce(const discrete_code& code, const index_set& retained) {
  const index_set kept = normalize_set(retained);
  if (kept.empty()) throw empty_subset("no variables retained");
  check_index_range(kept, code.var_count());

  std::vector<int> sub_cards;
  sub_cards.reserve(kept.size());
  for (int pos : kept) sub_cards.push_back(code.cardinalities()[static_cast<size_t>(pos - 1)]);
  const discrete_code sub(sub_cards);

  if (code.dim() > (1 << 26)) throw overflow_error("reduction matrix too large to materialize");
  rmat a = rmat::Zero(sub.dim(), code.dim());
  std::vector<int> sub_tuple(kept.size());
  for (long long flat = 1; flat <= code.dim(); ++flat) {
    const std::vector<int> tuple = code.decode(flat);
    for (size_t k = 0; k < kept.size(); ++k)
      sub_tuple[k] = tuple[static_cast<size_t>(kept[k] - 1)];
    a(sub.encode(sub_tuple) - 1, flat - 1) = 1.0;
  }
  return reduction_matrix(std::move(a));
}

estimate_result estimate_components(const cxmat& basis, const cxvec& y) {
  if (basis.rows() != y.size()) throw dimension_mismatch("sample count != basis rows");
  if (basis.rows() < basis.cols())
    throw insufficient_samples("need at least as many samples as basis functions");
  Eigen::ColPivHouseholderQR<cxmat> qr(basis);
  if (qr.rank() < basis.cols()) throw rank_deficient("basis columns are linearly dependent");
  estimate_result out;
  out.coefficients = qr.solve(y);
  const cxvec r = basis * out.coefficients - y;
  out.residual_norm = r.norm();
  out.normal_residual = max_abs(cxvec(basis.adjoint() * r));
  return out;
}

}  // namespace mhilb
