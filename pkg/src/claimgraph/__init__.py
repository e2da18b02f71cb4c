"""claimgraph: a typed claim network for research literatures.

Communities record who claims what about which contribution, under a
schema of node and link kinds; the engine answers structural queries,
runs forward-chaining checks (inconsistent positions, challenge
propagation, impact, interest profiles, perspectives), and extracts
concept maps. Everything persists as an append-only log of .scl
submissions whose replay reproduces the store exactly.
"""
from .ids import canonicalize_id
from .inference import (
    ImpactReport,
    InferenceParams,
    InterestProfile,
    ProfileCondition,
    compute_impact,
    detect_inconsistent_positions,
    detect_perspectives,
    evaluate_profile,
    propagate_challenges,
)
from .kb import Article, Assertion, Claim, Concept, Justification, KnowledgeBase
from .maps import ConceptMap, export_map
from .query import ResultSet, execute, extract_concept_map, naive_execute
from .schema import LinkKind, NodeKind, SchemaRegistry, builtin_schema
from .service import IngestReport, Repository, ServerConfig, replay

__all__ = [
    "Article",
    "Assertion",
    "Claim",
    "Concept",
    "ConceptMap",
    "ImpactReport",
    "InferenceParams",
    "IngestReport",
    "InterestProfile",
    "Justification",
    "KnowledgeBase",
    "LinkKind",
    "NodeKind",
    "ProfileCondition",
    "Repository",
    "ResultSet",
    "SchemaRegistry",
    "ServerConfig",
    "builtin_schema",
    "canonicalize_id",
    "compute_impact",
    "detect_inconsistent_positions",
    "detect_perspectives",
    "evaluate_profile",
    "execute",
    "export_map",
    "extract_concept_map",
    "naive_execute",
    "propagate_challenges",
    "replay",
]
