"""Random 0/1 polytopes: skeleton extraction, exact expansion, projection certificates."""

from .bitgeom import BitPoint, FiberMap, PointSet, SkeletonGraph, hamming_distance, hypercube_skeleton, project
from .certify import (
    ProjectionCertificate,
    certify_auto,
    certify_projection,
    choose_k_binomial,
    choose_k_count,
    fiber_histogram,
)
from .expansion import (
    ExpansionResult,
    SpectralBound,
    cheeger_bounds,
    edge_expansion_exact,
    fiedler_value,
    harper_vertex_bound,
    vertex_expansion_exact,
)
from .hullgraph import RationalLPOutcome, extract_skeleton, is_edge, lp_membership
from .randmodels import ModelSpec, sample_balls_into_bins, sample_binomial, sample_uniform
from .walk import ChainSpec, build_chain, mixing_time, tv_trajectory

__version__ = "0.1.0"
