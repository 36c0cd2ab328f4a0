"""Pauli-correlation-encoded MaxCut/TSP solving with Goemans-Williamson warm starts."""

from .cobyla import OptimizerConfig, OptimResult, minimize, random_start
from .encoding import (
    GwBias,
    LossConfig,
    PceEncoding,
    bit_swap_search,
    cut_value,
    encoding_capacity,
    extract_bits,
    generate_encoding,
    pce_loss,
    qubits_for_variables,
    regularize_gw_bits,
    warm_pce_loss,
)
from .gw import GwSolution, SdpResult, gw_bias_for, randomized_rounding, solve_sdp
from .pipeline import (
    METHOD_PCE,
    METHOD_WARM,
    BenchmarkSummary,
    RunRecord,
    SweepRecord,
    derive_seed,
    generate_instances,
    optimize_bits,
    random_complete_graph,
    random_tsp_instance,
    run_benchmark,
    run_epsilon_sweep,
    run_single,
    summarize_benchmark,
)
from .problems import (
    Infeasibility,
    MaxCutGraph,
    QuboProblem,
    Tour,
    TspInstance,
    brute_force_maxcut,
    brute_force_qubo,
    brute_force_tsp,
    build_tsp_qubo,
    decode_cut,
    decode_tour,
    load_graph,
    load_tsp_instance,
    qubo_to_maxcut,
    save_graph,
    save_tsp_instance,
    tour_length,
    tour_to_assignment,
)
from .simulator import (
    AnsatzConfig,
    PauliBatch,
    expectation,
    expectation_batch,
    prepare_state,
)

__version__ = "0.1.0"
