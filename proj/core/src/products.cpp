#include "mhilb/products.hpp"

#include <unsupported/Eigen/KroneckerProduct>

namespace mhilb {

observable sum_chart::projection(int k) const {
  if (k < 1 || k > factor_count()) throw index_out_of_range("no such summand");
  return primary(chart, blocks[static_cast<size_t>(k - 1)]);
}

sum_chart hilbert_sum(const std::vector<hilbert_chart>& parts) {
  if (parts.empty()) throw value_error("sum needs at least one part");
  int total = 0;
  for (const auto& p : parts) total += p.dim();

  cxmat k = cxmat::Zero(total, total);
  std::vector<index_set> blocks;
  int offset = 0;
  for (const auto& p : parts) {
    k.block(offset, offset, p.dim(), p.dim()) = p.gram();
    index_set range;
    for (int j = 1; j <= p.dim(); ++j) range.push_back(offset + j);
    blocks.push_back(std::move(range));
    offset += p.dim();
  }
  return sum_chart{build_chart(gram_kernel::from_matrix(std::move(k))), std::move(blocks)};
}

int tensor_chart::flat(int i, int k) const {
  const int n1 = factor1.dim(), n2 = factor2.dim();
  if (i < 1 || i > n1 || k < 1 || k > n2) throw index_out_of_range("tensor index out of range");
  return (i - 1) * n2 + k;
}

tensor_chart tensor_product(const hilbert_chart& a, const hilbert_chart& b) {
  const cxmat k = Eigen::kroneckerProduct(a.gram(), b.gram());
  return tensor_chart{build_chart(gram_kernel::from_matrix(k)), a, b};
}

state_vector tensor_state(const tensor_chart& tc, const state_vector& psi1,
                          const state_vector& psi2) {
  const cxvec x1 = tc.factor1.components(psi1);
  const cxvec x2 = tc.factor2.components(psi2);
  const cxvec x = Eigen::kroneckerProduct(x1, x2);
  return tc.chart.lift(x);
}

observable tensor_lift(const tensor_chart& tc, const observable& a, const observable& b) {
  if (a.dim() != tc.factor1.dim() || b.dim() != tc.factor2.dim())
    throw dimension_mismatch("factor operators do not match the tensor chart");
  return observable(Eigen::kroneckerProduct(a.matrix(), b.matrix()));
}

}  // namespace mhilb
