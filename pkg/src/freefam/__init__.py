"""Workbench for constrained uniform hypergraphs.

Builds and exactly verifies families that are t-cancellative,
t-union-free, t-cover-free, or sparse (every e distinct edges span more
than v vertices), with certificates for every failed check, seeded
alteration-method constructions, exact maxima for small parameters, and
an exponent-fit experiment harness.
"""

from .checkers import (
    BudgetExceededError,
    PropertyVerdict,
    brute_force_cancellative,
    brute_force_cover_free,
    brute_force_sparse,
    brute_force_union_free,
    check_cancellative,
    check_cover_free,
    check_sparse,
    check_union_free,
    replay_certificate,
)
from .constructors import (
    BuildOutcome,
    CancellativityWitness,
    ConstructionError,
    ConstructionParams,
    ExponentPrediction,
    PeelParams,
    WitnessError,
    alteration_construct,
    alteration_outcome,
    build_2_cancellative_odd,
    build_cancellative,
    build_union_free,
    cancellativity_witness,
    codegree_peel,
    partite_extract,
    predicted_exponents,
    replay_witness,
)
from .core import (
    Certificate,
    CertificateError,
    FormatError,
    Hypergraph,
    HypergraphError,
    Partition,
    SparsityConstraint,
    enumerate_extensions,
    make_hypergraph,
    read_hypergraph,
    write_hypergraph,
)
from .exact import SearchProblem, SearchResult, exact_max, naive_max
from .experiments import ExponentFit, FitSample, fit_exponent, run_report

__version__ = "0.1.0"

__all__ = [
    "BudgetExceededError",
    "BuildOutcome",
    "CancellativityWitness",
    "Certificate",
    "CertificateError",
    "ConstructionError",
    "ConstructionParams",
    "ExponentFit",
    "ExponentPrediction",
    "FitSample",
    "FormatError",
    "Hypergraph",
    "HypergraphError",
    "Partition",
    "PeelParams",
    "PropertyVerdict",
    "SearchProblem",
    "SearchResult",
    "SparsityConstraint",
    "WitnessError",
    "alteration_construct",
    "alteration_outcome",
    "brute_force_cancellative",
    "brute_force_cover_free",
    "brute_force_sparse",
    "brute_force_union_free",
    "build_2_cancellative_odd",
    "build_cancellative",
    "build_union_free",
    "cancellativity_witness",
    "check_cancellative",
    "check_cover_free",
    "check_sparse",
    "check_union_free",
    "codegree_peel",
    "enumerate_extensions",
    "exact_max",
    "fit_exponent",
    "make_hypergraph",
    "naive_max",
    "partite_extract",
    "predicted_exponents",
    "read_hypergraph",
    "replay_certificate",
    "replay_witness",
    "run_report",
    "write_hypergraph",
]
