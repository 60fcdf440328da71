#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace mhilb {

using cxd = std::complex<double>;
using cxmat = Eigen::MatrixXcd;
using cxvec = Eigen::VectorXcd;
using rmat = Eigen::MatrixXd;
using rvec = Eigen::VectorXd;

// index sets are 1-based everywhere in the public API
using index_set = std::vector<int>;

// sorted, duplicates removed
index_set normalize_set(index_set J);
index_set set_union(const index_set& a, const index_set& b);
index_set set_intersection(const index_set& a, const index_set& b);
index_set set_difference(const index_set& a, const index_set& b);
index_set full_set(int n);
index_set complement_set(const index_set& J, int n);
bool is_subset(const index_set& a, const index_set& b);
void check_index_range(const index_set& J, int n);

// max |a_ij|, the entrywise norm used for operator defects
double max_abs(const cxmat& a);
double max_abs(const cxvec& a);

// uniform in [0,1) with exactly 53 random bits, so reports are
// reproducible across standard libraries
double u01(std::mt19937_64& rng);

}  // namespace mhilb
