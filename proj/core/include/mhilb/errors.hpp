#pragma once

#include <stdexcept>
#include <string>

namespace mhilb {

struct error : std::runtime_error {
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

#define MHILB_ERROR_TYPE(name)                                     \
  struct name : error {                                            \
    explicit name(const std::string& msg) : error(#name ": " + msg) {} \
  }

MHILB_ERROR_TYPE(schema_error);
MHILB_ERROR_TYPE(value_error);
MHILB_ERROR_TYPE(overflow_error);
MHILB_ERROR_TYPE(empty_subset);
MHILB_ERROR_TYPE(rank_deficient);
MHILB_ERROR_TYPE(not_hermitian);
MHILB_ERROR_TYPE(not_positive_definite);
MHILB_ERROR_TYPE(dimension_mismatch);
MHILB_ERROR_TYPE(index_out_of_range);
MHILB_ERROR_TYPE(overlapping_sets);
MHILB_ERROR_TYPE(incomplete_partition);
MHILB_ERROR_TYPE(not_normalized);
MHILB_ERROR_TYPE(not_in_conditioning_subspace);
MHILB_ERROR_TYPE(not_subset);
MHILB_ERROR_TYPE(zero_mass_outcome);
MHILB_ERROR_TYPE(not_k_unitary);
MHILB_ERROR_TYPE(not_bijection);
MHILB_ERROR_TYPE(insufficient_samples);
MHILB_ERROR_TYPE(grid_too_coarse);
MHILB_ERROR_TYPE(not_self_adjoint);
MHILB_ERROR_TYPE(out_of_domain);
MHILB_ERROR_TYPE(odd_dimension);

#undef MHILB_ERROR_TYPE

}  // namespace mhilb
