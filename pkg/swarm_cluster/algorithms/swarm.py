"""Simple and canonical (constriction-factor) PSO based K-means.

Each particle encodes a full set of k candidate centroids. Its fitness is the
K-means SSE obtained by assigning every object to the nearest candidate.
"""

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, NamedTuple, Optional, Tuple, Union

import numpy as np
import pandas as pd

from ..config.models import Metric, PsoConfig, PsoVariant, RandomScaling
from ..core.dataset import Dataset
from ..core.partition import Centroids, Partition, assign_nearest, nearest_centroid, repair_empty_clusters
from ..errors import ClusteringError
from .kmeans import fitness_terms, lloyd_step, mean_shift, sse_fitness

logger = logging.getLogger(__name__)

Scale = Union[float, np.ndarray]


@dataclass(eq=False)
class Particle:
    """One candidate centroid set with its velocity and personal best."""

    position: np.ndarray
    velocity: np.ndarray
    personal_best_position: np.ndarray
    personal_best_fitness: float
    fitness: float = math.inf

    def __post_init__(self):
        shapes = {self.position.shape, self.velocity.shape, self.personal_best_position.shape}
        if len(shapes) != 1:
            raise ClusteringError(f"particle matrices disagree in shape: {sorted(shapes)}")


@dataclass(eq=False)
class Swarm:
    """Particle population with the global best (gbest topology)."""

    particles: List[Particle]
    global_best_position: np.ndarray = field(init=False)
    global_best_fitness: float = field(init=False, default=math.inf)

    def __post_init__(self):
        if not self.particles:
            raise ClusteringError("a swarm needs at least one particle")
        self.global_best_position = self.particles[0].personal_best_position.copy()
        self.global_best_fitness = math.inf
        self.update_global_best()

    def update_global_best(self) -> bool:
        """Fold personal bests into the global best in particle-index order.

        Returns:
            True if the global best improved
        """
        improved = False
        for particle in self.particles:
            if particle.personal_best_fitness < self.global_best_fitness:
                self.global_best_fitness = particle.personal_best_fitness
                self.global_best_position = particle.personal_best_position.copy()
                improved = True
        return improved


class PsoResult(NamedTuple):
    """Outcome of one PSO based K-means run."""

    partition: Partition
    centroids: Centroids
    fitness: float
    iterations: int
    history: Tuple[float, ...]


def _check_scale(name: str, r: Scale, shape: Tuple[int, ...]) -> None:
    arr = np.asarray(r, dtype=np.float64)
    if arr.ndim and arr.shape != shape:
        raise ClusteringError(f"{name} has shape {arr.shape}, expected scalar or {shape}")
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ClusteringError(f"{name} must lie in [0, 1]")


def _attraction(p: Particle, gbest: np.ndarray, c1: float, c2: float, r1: Scale, r2: Scale) -> np.ndarray:
    if gbest.shape != p.position.shape:
        raise ClusteringError(f"gbest has shape {gbest.shape}, particle has {p.position.shape}")
    _check_scale("r1", r1, p.position.shape)
    _check_scale("r2", r2, p.position.shape)
    return (
        p.velocity
        + c1 * np.asarray(r1) * (p.personal_best_position - p.position)
        + c2 * np.asarray(r2) * (gbest - p.position)
    )


def velocity_update_simple(p: Particle, gbest: np.ndarray, c1: float, c2: float, r1: Scale, r2: Scale) -> np.ndarray:
    """v' = v + c1 r1 (pbest - x) + c2 r2 (gbest - x)."""
    return _attraction(p, gbest, c1, c2, r1, r2)


def velocity_update_canonical(
    p: Particle, gbest: np.ndarray, c1: float, c2: float, chi: float, r1: Scale, r2: Scale
) -> np.ndarray:
    """v' = chi [v + c1 r1 (pbest - x) + c2 r2 (gbest - x)]."""
    if not 0.0 < chi <= 1.0:
        raise ClusteringError(f"chi must be in (0, 1], got {chi}")
    return chi * _attraction(p, gbest, c1, c2, r1, r2)


def position_update(x: np.ndarray, v_new: np.ndarray) -> np.ndarray:
    """x' = x + v' using the freshly updated velocity."""
    if x.shape != v_new.shape:
        raise ClusteringError(f"position shape {x.shape} differs from velocity shape {v_new.shape}")
    return x + v_new


def clerc_constriction(c1: float, c2: float) -> float:
    """Constriction coefficient chi = 2 / |2 - phi - sqrt(phi^2 - 4 phi)|, phi = c1 + c2 > 4."""
    phi = c1 + c2
    if phi <= 4.0:
        raise ClusteringError(f"constriction needs c1 + c2 > 4, got {phi}")
    return 2.0 / abs(2.0 - phi - math.sqrt(phi * phi - 4.0 * phi))


def resolve_chi(cfg: PsoConfig) -> Optional[float]:
    """Constriction coefficient for the configured variant (None for simple PSO)."""
    if cfg.variant == PsoVariant.SIMPLE:
        return None
    if cfg.chi is not None:
        return cfg.chi
    return clerc_constriction(cfg.c1, cfg.c2)


def particle_fitness(points: np.ndarray, position: np.ndarray, m: Metric) -> float:
    """SSE of the nearest-candidate assignment induced by ``position``."""
    _, dist = nearest_centroid(points, position, m)
    return float(np.sum(fitness_terms(dist, m)))


def init_swarm(d: Dataset, cfg: PsoConfig, rng: np.random.Generator) -> Swarm:
    """k distinct sampled objects per particle, zero velocity."""
    particles = []
    for _ in range(cfg.n_particles):
        chosen = rng.choice(d.n_objects, size=cfg.k, replace=False)
        position = d.points[chosen].copy()
        fitness = particle_fitness(d.points, position, cfg.metric)
        particles.append(
            Particle(
                position=position,
                velocity=np.zeros_like(position),
                personal_best_position=position.copy(),
                personal_best_fitness=fitness,
                fitness=fitness,
            )
        )
    return Swarm(particles=particles)


def _draw(rng: np.random.Generator, scaling: RandomScaling, shape: Tuple[int, ...]) -> Scale:
    if scaling == RandomScaling.PER_COORDINATE:
        return rng.random(shape)
    return float(rng.random())


def pso_kmeans_run(d: Dataset, cfg: PsoConfig) -> PsoResult:
    """Run PSO over centroid sets and decode the global best.

    Every iteration moves each particle (velocity then position), optionally
    applies one Lloyd pass to the moved position, re-evaluates fitness and
    updates personal and global bests. The run stops after ``max_iter``
    iterations, or at the first iteration that improves the global best while
    moving its centroids on average less than ``tol``.

    Args:
        d: Dataset to cluster
        cfg: PSO configuration

    Returns:
        PsoResult with the decoded partition, centroids, SSE fitness,
        iteration count and the global best fitness after every iteration

    Raises:
        ClusteringError: If k exceeds the number of objects
    """
    if cfg.k > d.n_objects:
        raise ClusteringError(f"k={cfg.k} exceeds the {d.n_objects} objects of '{d.name}'")

    rng = np.random.default_rng(cfg.seed)
    chi = resolve_chi(cfg)
    swarm = init_swarm(d, cfg, rng)
    shape = swarm.global_best_position.shape
    history = []
    iterations = 0

    for iteration in range(1, cfg.max_iter + 1):
        iterations = iteration
        previous_best = swarm.global_best_position.copy()

        for particle in swarm.particles:
            r1 = _draw(rng, cfg.random_scaling, shape)
            r2 = _draw(rng, cfg.random_scaling, shape)
            if chi is None:
                velocity = velocity_update_simple(particle, swarm.global_best_position, cfg.c1, cfg.c2, r1, r2)
            else:
                velocity = velocity_update_canonical(
                    particle, swarm.global_best_position, cfg.c1, cfg.c2, chi, r1, r2
                )
            position = position_update(particle.position, velocity)
            if cfg.kmeans_refine:
                position = lloyd_step(d.points, position, cfg.metric)
            particle.velocity = velocity
            particle.position = position

        for particle in swarm.particles:
            particle.fitness = particle_fitness(d.points, particle.position, cfg.metric)
            if particle.fitness < particle.personal_best_fitness:
                particle.personal_best_fitness = particle.fitness
                particle.personal_best_position = particle.position.copy()
        improved = swarm.update_global_best()

        history.append(swarm.global_best_fitness)
        shift = mean_shift(previous_best, swarm.global_best_position, cfg.metric)
        logger.debug("PSO iteration %d: gbest %.6g, shift %.3g", iteration, swarm.global_best_fitness, shift)
        # a stagnant iteration leaves gbest in place and says nothing about convergence
        if improved and shift < cfg.tol:
            break

    centroids = Centroids(swarm.global_best_position)
    partition = assign_nearest(d, centroids, cfg.metric)
    partition, centroids = repair_empty_clusters(d, centroids, partition, cfg.metric)
    return PsoResult(
        partition=partition,
        centroids=centroids,
        fitness=sse_fitness(d, centroids, partition, cfg.metric),
        iterations=iterations,
        history=tuple(history),
    )


def write_history_csv(history: Tuple[float, ...], path: Union[str, Path]) -> Path:
    """Export (iteration, global_best_fitness) rows."""
    path = Path(path)
    frame = pd.DataFrame(
        {"iteration": np.arange(1, len(history) + 1), "global_best_fitness": np.asarray(history, dtype=np.float64)}
    )
    frame.to_csv(path, index=False, float_format="%.17g")
    return path
