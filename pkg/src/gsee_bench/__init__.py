"""Benchmark harness for ground-state energy estimation solvers.

Ingests FCIDUMP Hamiltonians and solver solution files, computes fermionic
and qubit complexity features, scores correctness against accuracy and
runtime requirements, and estimates per-solver solvability regions in a
latent feature space.
"""

__version__ = "0.1.0"

from .catalog import (
    ProblemInstance,
    SolutionFile,
    Task,
    TaskOutcome,
    Verdict,
    evaluate_task,
    load_instance,
    load_solution,
)
from .fcidump import FciDump, parse_fcidump, write_fcidump
from .fermionic import DfResult, SizeFeatures, df_reconstruct, double_factorize, log_fci_size
from .fci import DeterminantBasis, SpectrumResult, build_basis, build_fci_matrix, lowest_eigenvalues
from .ml import (
    SolvabilityConfig,
    SolvabilityReport,
    SvmModel,
    classification_metrics,
    estimate_solvability,
    exact_shapley,
    minmax_scale,
    nnmf_fit,
    pca_fit,
    predict_proba,
    shapley_attribution,
    svm_fit_cv,
)
from .pauli import PauliString, PauliSum, jordan_wigner_hamiltonian, pauli_multiply
from .qubit_features import (
    FEATURE_NAMES,
    FeatureVector,
    Hypergraph,
    build_hypergraph,
    compute_feature_vector,
    compute_qubit_features,
    correlation_matrix,
)

__all__ = [
    "DeterminantBasis",
    "DfResult",
    "FEATURE_NAMES",
    "FciDump",
    "FeatureVector",
    "Hypergraph",
    "ProblemInstance",
    "SizeFeatures",
    "SolutionFile",
    "SolvabilityConfig",
    "SolvabilityReport",
    "SpectrumResult",
    "SvmModel",
    "Task",
    "TaskOutcome",
    "Verdict",
    "PauliString",
    "PauliSum",
    "build_basis",
    "build_fci_matrix",
    "build_hypergraph",
    "classification_metrics",
    "compute_feature_vector",
    "compute_qubit_features",
    "correlation_matrix",
    "df_reconstruct",
    "double_factorize",
    "estimate_solvability",
    "evaluate_task",
    "exact_shapley",
    "jordan_wigner_hamiltonian",
    "load_instance",
    "load_solution",
    "log_fci_size",
    "lowest_eigenvalues",
    "minmax_scale",
    "nnmf_fit",
    "parse_fcidump",
    "pauli_multiply",
    "pca_fit",
    "predict_proba",
    "shapley_attribution",
    "svm_fit_cv",
    "write_fcidump",
]
