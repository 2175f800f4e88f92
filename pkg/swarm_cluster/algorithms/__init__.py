"""Clustering algorithms: K-means, PSO based K-means, DBSCAN and hierarchical."""

from .density_hier import dbscan_run, hierarchical_run, region_query
from .kmeans import KMeansResult, fitness_terms, kmeans_run, lloyd_step, sse_fitness
from .swarm import (
    Particle,
    PsoResult,
    Swarm,
    clerc_constriction,
    position_update,
    pso_kmeans_run,
    velocity_update_canonical,
    velocity_update_simple,
    write_history_csv,
)

__all__ = [
    "KMeansResult",
    "fitness_terms",
    "sse_fitness",
    "lloyd_step",
    "kmeans_run",
    "Particle",
    "Swarm",
    "PsoResult",
    "velocity_update_simple",
    "velocity_update_canonical",
    "position_update",
    "clerc_constriction",
    "pso_kmeans_run",
    "write_history_csv",
    "region_query",
    "dbscan_run",
    "hierarchical_run",
]
