#include "mhilb/types.hpp"

#include <algorithm>

#include "mhilb/errors.hpp"

namespace mhilb {

index_set normalize_set(index_set J) {
  std::sort(J.begin(), J.end());
  J.erase(std::unique(J.begin(), J.end()), J.end());
  return J;
}

index_set set_union(const index_set& a, const index_set& b) {
  index_set out = a;
  out.insert(out.end(), b.begin(), b.end());
  return normalize_set(std::move(out));
}

index_set set_intersection(const index_set& a, const index_set& b) {
  index_set sa = normalize_set(a), sb = normalize_set(b), out;
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(out));
  return out;
}

index_set set_difference(const index_set& a, const index_set& b) {
  index_set sa = normalize_set(a), sb = normalize_set(b), out;
  std::set_difference(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(out));
  return out;
}

index_set full_set(int n) {
  index_set out(static_cast<size_t>(n));
  for (int j = 1; j <= n; ++j) out[static_cast<size_t>(j - 1)] = j;
  return out;
}

index_set complement_set(const index_set& J, int n) {
  return set_difference(full_set(n), J);
}

bool is_subset(const index_set& a, const index_set& b) {
  index_set sa = normalize_set(a), sb = normalize_set(b);
  return std::includes(sb.begin(), sb.end(), sa.begin(), sa.end());
}

void check_index_range(const index_set& J, int n) {
  for (int j : J)
    if (j < 1 || j > n)
      throw index_out_of_range("index " + std::to_string(j) + " outside 1.." + std::to_string(n));
}

double max_abs(const cxmat& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().maxCoeff();
}

double max_abs(const cxvec& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().maxCoeff();
}

double u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace mhilb
