#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mhilb/evolution.hpp"
#include "mhilb/gauge.hpp"
#include "mhilb/probability.hpp"
#include "mhilb/products.hpp"

namespace mhilb {

// randomized test fixture: a well-conditioned chart with states, index
// sets, a gauge and a Hamiltonian drawn from one seed
struct verifier_instance {
  std::uint64_t seed = 0;
  int n = 0;
  hilbert_chart chart;
  std::vector<state_vector> states;        // unit norm
  std::vector<index_set> disjoint_sets;    // pairwise disjoint, non-empty
  std::vector<index_set> random_sets;      // arbitrary non-empty
  cxmat gauge_coefficients;                // Gram-preserving
  cxmat hamiltonian_matrix;                // Hermitian
};

verifier_instance generate_instance(std::uint64_t seed, int n);

enum class fault_mode { none, skip_hermitize };

struct check_row {
  std::string proposition_id;
  int trials = 0;
  double max_defect = 0;  // defect of the worst sub-check, by ratio to its tolerance
  double tolerance = 0;   // tolerance of that same sub-check
  bool pass = false;
  std::string worst_check;
  std::uint64_t worst_seed = 0;
  int worst_n = 0;
  std::string counterexample;  // JSON payload, empty unless the row failed
};

struct verify_report {
  std::vector<check_row> rows;
  bool all_pass() const;
};

struct verify_options {
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<int> sizes = {2, 4, 8, 16};
  fault_mode fault = fault_mode::none;
};

// the identifiers of all registered proposition suites, in report order
std::vector<std::string> registry_ids();

verify_report run_all(const verify_options& options = {});

std::string render_report_json(const verify_report& report);
std::string render_report_tsv(const verify_report& report);

}  // namespace mhilb
