"""Bounded minors of increased density, dense subgraphs, and checkable certificates."""

from mdl.certificates import Certificate, Verdict, content_id, dumps, loads, verify, verify_certificate
from mdl.claw import ClawParams, claw_dichotomy
from mdl.dichotomy import DichotomyParams, dense_bipartite_minor
from mdl.errors import (
    CertificateParseError,
    ConfigError,
    DomainError,
    LemmaViolation,
    MDLError,
    ResourceLimitError,
)
from mdl.forest import Star, StarForest, build_clean_forest, edge_loss, grow_star
from mdl.generators import generate_graph
from mdl.graph import Graph, contract_edges, density, induced, parse_graph, peel_to_min_degree
from mdl.harness import ExperimentConfig, RunReport, run_experiment
from mdl.increment import (
    IncrementOutcome,
    IncrementParams,
    StepParams,
    chromatic_bound,
    degeneracy_coloring,
    dense_or_bounded_minor,
    density_increment,
    g_value,
)
from mdl.mates import MateParams, count_mates, unmated_dichotomy
from mdl.minors import MinorModel, clique_minor_oracle, compose_models, contract_model, verify_model

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "CertificateParseError",
    "ClawParams",
    "ConfigError",
    "DichotomyParams",
    "DomainError",
    "ExperimentConfig",
    "Graph",
    "IncrementOutcome",
    "IncrementParams",
    "LemmaViolation",
    "MDLError",
    "MateParams",
    "MinorModel",
    "ResourceLimitError",
    "RunReport",
    "Star",
    "StarForest",
    "StepParams",
    "Verdict",
    "build_clean_forest",
    "chromatic_bound",
    "claw_dichotomy",
    "clique_minor_oracle",
    "compose_models",
    "content_id",
    "contract_edges",
    "contract_model",
    "count_mates",
    "degeneracy_coloring",
    "dense_bipartite_minor",
    "dense_or_bounded_minor",
    "density",
    "density_increment",
    "dumps",
    "edge_loss",
    "g_value",
    "generate_graph",
    "grow_star",
    "induced",
    "loads",
    "parse_graph",
    "peel_to_min_degree",
    "run_experiment",
    "unmated_dichotomy",
    "verify",
    "verify_certificate",
    "verify_model",
]
