"""Random vertex sampling and sparse recovery of diffused graph signals.

The pipeline: generate a graph, build a diffusion operator H, diffuse a
k-sparse source (x = H alpha), sample m vertices at random, and recover the
source by basis pursuit.  The spectral module quantifies when recovery is
guaranteed (incoherence, sparse condition numbers, sample-count bounds); the
experiments module reproduces the error-vs-sample-count curves.
"""

from .diffusion import (
    DiffusionMatrix,
    SparseInput,
    binary_diffusion,
    diffuse,
    generate_sparse_input,
    metropolis_matrix,
)
from .errors import (
    AssumptionViolationError,
    ContractError,
    DegenerateInputError,
    DegenerateModelError,
    EnumerationCapError,
    GraphSampleError,
    ParameterError,
)
from .experiments import (
    CurveResult,
    ExperimentConfig,
    emit,
    load_config,
    preset,
    run_experiment,
    run_trial,
)
from .graphs import (
    Graph,
    GraphSpec,
    generate_er,
    generate_ring_regular,
    generate_small_world,
    generate_star_like,
    load_edge_list,
    save_edge_list,
)
from .recovery import (
    RecoveryResult,
    SolverConfig,
    basis_pursuit,
    basis_pursuit_linprog,
    is_success,
    recovery_error,
)
from .sampling import (
    Observation,
    SampleSet,
    SamplingPlan,
    VariableDensityPlan,
    draw_samples,
    observe,
    uniform_plan,
    variable_density_plan,
)
from .spectral import (
    BoundReport,
    GammaMatrix,
    SparseSpectrum,
    analytic_mu_er,
    bound_c1_nonnegative,
    bound_t1_uniform,
    bound_t2_er,
    bound_t3_small_world,
    bound_t4_variable_density,
    cond_closed_form_rank1_shift,
    cond_nonnegative_shortcut,
    delta_kappa_small_world,
    expected_gram_er,
    expected_gram_small_world,
    gamma_from_matrix,
    incoherence_mu,
    kappa,
    local_isometry_deviation,
    mutual_coherence,
    sparse_eigs_bruteforce,
    sparse_eigs_greedy,
    sparse_spectrum,
)

__version__ = "0.1.0"
