#pragma once

#include <array>

// one row per subcommand: the library operations it reaches, space
// separated; the coverage test checks every public operation appears
struct dispatch_entry {
  const char* command;
  const char* summary;
  const char* operations;
};

inline constexpr std::array<dispatch_entry, 8> dispatch_table{{
    {"build", "build a chart from a model and report its factorization",
     "parse_model_spec parse_model_file chart_kernel_from_model build_chart lift components "
     "basis_state dual_state dual_pairing_defect inner complexify gamma kernel_value"},
    {"estimate", "fit sampled values against the model's basis by least squares",
     "estimate_components estimate_for_var"},
    {"reduce", "flatten discrete variables and reduce onto a sub-product",
     "discrete_code encode decode reduce discrete_primary"},
    {"observe", "construct observables and gauge maps, measure their defects",
     "primary coefficient_truncation algebra_element secondary spectral_measure "
     "spectral_integral compose_with_primary commutation_defect state_functional "
     "recover_indices lift_gauge transform_operator discrete_permutation one_param_group "
     "generator_from_group symmetry_defect state_symmetry_defect"},
    {"prob", "measurement probabilities, conditioning and sampling",
     "subspace_prob eigen_distribution conditional_prob sample_measurement sample_outcomes"},
    {"evolve", "unitary time evolution and the energy resolution",
     "evolve_state propagator expm schrodinger_residual heisenberg_operator stationary_states "
     "energy_spectrum evaluation_map"},
    {"compose", "direct sums and tensor products of charts",
     "hilbert_sum projection tensor_product tensor_state tensor_lift flat"},
    {"verify", "run the randomized proposition checks and render the report",
     "generate_instance run_all registry_ids render_report_json render_report_tsv"},
}};
