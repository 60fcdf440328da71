#pragma once

#include <cstdint>
#include <vector>

#include "mhilb/observables.hpp"

namespace mhilb {

struct outcome {
  double value = 0;   // eigenvalue
  double prob = 0;
  index_set indices;  // the subspace carrying this outcome
};

// discrete distribution over the outcomes of a secondary observable in
// a given state; keeps the source coordinates so post-measurement
// states can be formed later
struct measurement_distribution {
  std::vector<outcome> outcomes;  // ascending by eigenvalue
  cxvec source_coords;
  double total() const;
};

// squared norm of the projection onto the subspace of J
double subspace_prob(const hilbert_chart& chart, const state_vector& psi, const index_set& J);

// Born weights of a secondary observable; mass outside the union of its
// index sets is reported as an outcome with eigenvalue 0
measurement_distribution eigen_distribution(const hilbert_chart& chart, const observable& phi,
                                            const state_vector& psi);

// probability of landing in J' given that the state is supported in J;
// requires J' inside J and psi already conditioned on J
double conditional_prob(const hilbert_chart& chart, const state_vector& psi, const index_set& J,
                        const index_set& Jprime);

struct measurement_draw {
  int outcome_index = 0;  // 0-based into distribution.outcomes
  double value = 0;
  state_vector post;      // renormalized projection of the source state
};

// one draw from the distribution with a fresh engine seeded as given
measurement_draw sample_measurement(const measurement_distribution& dist, std::uint64_t seed);

// repeated draws from one engine; returns outcome indices only
std::vector<int> sample_outcomes(const measurement_distribution& dist, std::uint64_t seed,
                                 int count);

}  // namespace mhilb
