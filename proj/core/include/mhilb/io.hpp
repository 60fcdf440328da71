#pragma once

#include <optional>
#include <string>

#include "mhilb/evolution.hpp"
#include "mhilb/hilbert.hpp"
#include "mhilb/model.hpp"

namespace mhilb {

// Gram source of a model: explicit matrix, tabulated kernel, or the
// identity on the continuous dimensions when neither is given
gram_kernel chart_kernel_from_model(const model_spec& spec);

// state file with either "coords" (orthonormal coordinates) or
// "coefficients" (raw family coefficients, lifted through the chart)
state_vector parse_state_file(const std::string& path, const hilbert_chart& chart);

// file with a complex square matrix under the given key
cxmat parse_matrix_file(const std::string& path, const std::string& key);

// hbar override wins over the file's value; pass NaN to defer to the
// file (default 1)
hamiltonian parse_hamiltonian_file(const std::string& path, double hbar);

// least-squares coefficients of one sample set against the model's
// natural basis: kernel sections when a kernel is given, monomials in
// the first argument otherwise
estimate_result estimate_for_var(const model_spec& spec, const sample_set& samples);

std::string read_text_file(const std::string& path);

// shortest decimal text that round-trips the value
std::string format_double(double x);
std::string format_complex(const cxd& z);

}  // namespace mhilb
