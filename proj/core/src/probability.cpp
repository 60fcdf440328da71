#include "mhilb/probability.hpp"

#include <algorithm>
#include <cmath>

namespace mhilb {

namespace {

void check_unit(const state_vector& psi) {
  if (std::abs(psi.norm() - 1.0) > 1e-9)
    throw not_normalized("state norm is " + std::to_string(psi.norm()));
}

double mass_on(const cxvec& coords, const index_set& J) {
  double m = 0;
  for (int j : J) m += std::norm(coords(j - 1));
  return m;
}

int draw_index(const measurement_distribution& dist, std::mt19937_64& rng) {
  const double u = u01(rng) * dist.total();
  double cum = 0;
  int last = static_cast<int>(dist.outcomes.size()) - 1;
  for (int k = 0; k <= last; ++k) {
    cum += dist.outcomes[static_cast<size_t>(k)].prob;
    if (u < cum) return k;
  }
  return last;
}

}  // namespace

double measurement_distribution::total() const {
  double t = 0;
  for (const auto& o : outcomes) t += o.prob;
  return t;
}

double subspace_prob(const hilbert_chart& chart, const state_vector& psi, const index_set& J) {
  check_unit(psi);
  if (psi.dim() != chart.dim()) throw dimension_mismatch("state does not match chart");
  const index_set s = normalize_set(J);
  if (s.empty()) throw empty_subset("index set is empty");
  check_index_range(s, chart.dim());
  return mass_on(psi.coords, s);
}

measurement_distribution eigen_distribution(const hilbert_chart& chart, const observable& phi,
                                            const state_vector& psi) {
  if (phi.kind() != observable_kind::secondary)
    throw value_error("distribution is defined for secondary observables");
  if (phi.dim() != chart.dim() || psi.dim() != chart.dim())
    throw dimension_mismatch("observable or state does not match chart");
  check_unit(psi);

  measurement_distribution dist;
  dist.source_coords = psi.coords;
  index_set covered;
  for (size_t k = 0; k < phi.index_sets().size(); ++k) {
    const index_set& J = phi.index_sets()[k];
    dist.outcomes.push_back({phi.eigenvalues()[k], mass_on(psi.coords, J), J});
    covered = set_union(covered, J);
  }
  const index_set rest = complement_set(covered, chart.dim());
  if (!rest.empty()) dist.outcomes.push_back({0.0, mass_on(psi.coords, rest), rest});

  std::sort(dist.outcomes.begin(), dist.outcomes.end(),
            [](const outcome& a, const outcome& b) { return a.value < b.value; });
  return dist;
}

double conditional_prob(const hilbert_chart& chart, const state_vector& psi, const index_set& J,
                        const index_set& Jprime) {
  check_unit(psi);
  if (psi.dim() != chart.dim()) throw dimension_mismatch("state does not match chart");
  const index_set sJ = normalize_set(J);
  const index_set sJp = normalize_set(Jprime);
  if (sJ.empty() || sJp.empty()) throw empty_subset("index set is empty");
  check_index_range(sJ, chart.dim());
  if (!is_subset(sJp, sJ)) throw not_subset("conditioned set must contain the queried set");

  const double mass_J = mass_on(psi.coords, sJ);
  if (std::abs(mass_J - 1.0) > 1e-9)
    throw not_in_conditioning_subspace("state carries mass outside the conditioning set");
  return mass_on(psi.coords, sJp) / mass_J;
}

measurement_draw sample_measurement(const measurement_distribution& dist, std::uint64_t seed) {
  if (dist.outcomes.empty()) throw value_error("distribution has no outcomes");
  if (std::abs(dist.total() - 1.0) > 1e-9)
    throw not_normalized("distribution mass is " + std::to_string(dist.total()));

  std::mt19937_64 rng(seed);
  const int k = draw_index(dist, rng);
  const outcome& o = dist.outcomes[static_cast<size_t>(k)];
  if (o.prob < 1e-14)
    throw zero_mass_outcome("drew an outcome of mass " + std::to_string(o.prob));

  cxvec post = cxvec::Zero(dist.source_coords.size());
  for (int j : o.indices) post(j - 1) = dist.source_coords(j - 1);
  post /= post.norm();
  return measurement_draw{k, o.value, state_vector{std::move(post)}};
}

std::vector<int> sample_outcomes(const measurement_distribution& dist, std::uint64_t seed,
                                 int count) {
  if (count < 1) throw value_error("draw count must be positive");
  if (dist.outcomes.empty()) throw value_error("distribution has no outcomes");
  if (std::abs(dist.total() - 1.0) > 1e-9)
    throw not_normalized("distribution mass is " + std::to_string(dist.total()));

  std::mt19937_64 rng(seed);
  std::vector<int> draws(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    const int k = draw_index(dist, rng);
    if (dist.outcomes[static_cast<size_t>(k)].prob < 1e-14)
      throw zero_mass_outcome("drew an outcome of mass " +
                              std::to_string(dist.outcomes[static_cast<size_t>(k)].prob));
    draws[static_cast<size_t>(i)] = k;
  }
  return draws;
}

}  // namespace mhilb
