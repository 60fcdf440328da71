#pragma once

#include <vector>

#include "mhilb/observables.hpp"

namespace mhilb {

// direct sum of charts: block diagonal Gram matrix plus the factor
// projections
struct sum_chart {
  hilbert_chart chart;
  std::vector<index_set> blocks;  // contiguous 1-based ranges

  int factor_count() const { return static_cast<int>(blocks.size()); }
  observable projection(int k) const;  // k is 1-based
};

sum_chart hilbert_sum(const std::vector<hilbert_chart>& parts);

// tensor product of two charts: Kronecker Gram matrix; the pair (i, k)
// flattens with the second factor fastest
struct tensor_chart {
  hilbert_chart chart;
  hilbert_chart factor1;
  hilbert_chart factor2;

  int flat(int i, int k) const;  // all indices 1-based
};

tensor_chart tensor_product(const hilbert_chart& a, const hilbert_chart& b);

// coordinates of the product state psi1 (x) psi2
state_vector tensor_state(const tensor_chart& tc, const state_vector& psi1,
                          const state_vector& psi2);

// Kronecker lift of a pair of factor operators
observable tensor_lift(const tensor_chart& tc, const observable& a, const observable& b);

}  // namespace mhilb
