"""Hybrid greedy/local-search maximization of submodular functions under
matroid k-parity constraints, with exchange machinery, baselines, and
per-run verification of the charging structure.
"""

from .analysis import (
    ChargingReport,
    charge_ratios,
    insertion_weights,
    partition_reference,
    prune_down_monotone,
    reference_weights,
    residual_weights,
    shift_log_ratio,
    simulate_ratios,
    verify_run,
)
from .bench import (
    ExperimentSpec,
    brute_force_opt,
    generate_instance,
    greedy_baseline,
    run_experiment,
)
from .exchange import exchange_claim_violations, exchange_structure, greene_magnanti
from .kparity import Edge, KParityConstraint, ProductMatroid, from_intersection
from .matroid import (
    AxiomReport,
    ExplicitMatroid,
    GraphicMatroid,
    MatroidOracle,
    PartitionMatroid,
    UniformMatroid,
    axiom_check,
)
from .nonmonotone import (
    RepetitionsConfig,
    double_greedy,
    double_greedy_exact_expectation,
    repetitions,
    repetitions_with_trace,
)
from .objective import (
    CoverageObjective,
    CutObjective,
    ModularObjective,
    ValueOracle,
    check_monotone,
    check_submodular,
)
from .solver import (
    Improvement,
    RunTrace,
    SolverConfig,
    Thresholds,
    fast_forward,
    find_improvement,
    max_singleton_marginal,
    run_efficient,
    run_reference,
    sample_alpha,
)

__all__ = [
    "AxiomReport",
    "ChargingReport",
    "CoverageObjective",
    "CutObjective",
    "Edge",
    "ExperimentSpec",
    "ExplicitMatroid",
    "GraphicMatroid",
    "Improvement",
    "KParityConstraint",
    "MatroidOracle",
    "ModularObjective",
    "PartitionMatroid",
    "ProductMatroid",
    "RepetitionsConfig",
    "RunTrace",
    "SolverConfig",
    "Thresholds",
    "UniformMatroid",
    "ValueOracle",
    "axiom_check",
    "brute_force_opt",
    "charge_ratios",
    "check_monotone",
    "check_submodular",
    "double_greedy",
    "double_greedy_exact_expectation",
    "exchange_claim_violations",
    "exchange_structure",
    "fast_forward",
    "find_improvement",
    "from_intersection",
    "generate_instance",
    "greedy_baseline",
    "greene_magnanti",
    "insertion_weights",
    "max_singleton_marginal",
    "partition_reference",
    "prune_down_monotone",
    "reference_weights",
    "repetitions",
    "repetitions_with_trace",
    "residual_weights",
    "run_efficient",
    "run_experiment",
    "run_reference",
    "sample_alpha",
    "shift_log_ratio",
    "simulate_ratios",
    "verify_run",
]

__version__ = "0.1.0"
