"""Geographic clustering of campuses with Lloyd's k-means.

Coordinates are treated as plain (latitude, longitude) features —
squared Euclidean on raw degrees, no geodesic correction. Everything
is deterministic for a fixed (points, k, seed):

* points are processed in canonical order, sorted by (lat, lon, label),
  so the input ordering never matters (bit-for-bit);
* initial centroids are k distinct points drawn by
  random.Random(seed).sample over that canonical order;
* assignment ties go to the lowest centroid index;
* centroid means use math.fsum, which is order-exact;
* an empty cluster is reseeded to the point farthest from its stale
  centroid, each repaired cluster claiming a distinct point (ties to
  the lowest canonical index);
* iteration stops when the largest centroid displacement falls below
  tol, or after max_iters rounds.

The reference evaluator in tests/support/lloyds_reference.py follows
the same contract with independent code; fit() must agree with it
bit-for-bit.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .errors import InvalidK, InvalidPoint, TooFewPoints

DEFAULT_MAX_ITERS = 100
DEFAULT_TOL = 1e-6

Coords = tuple[float, float]  # (latitude, longitude)


@dataclass(frozen=True)
class GeoPoint:
    label: str
    lat: float
    lon: float

    def __post_init__(self) -> None:
        for attr in ("lat", "lon"):
            value = getattr(self, attr)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise InvalidPoint(f"{self.label}: {attr} must be a number")
            object.__setattr__(self, attr, float(value))
        if not (math.isfinite(self.lat) and math.isfinite(self.lon)):
            raise InvalidPoint(f"{self.label}: coordinates must be finite")
        if not -90.0 <= self.lat <= 90.0:
            raise InvalidPoint(f"{self.label}: latitude {self.lat} out of range")
        if not -180.0 <= self.lon <= 180.0:
            raise InvalidPoint(f"{self.label}: longitude {self.lon} out of range")

    @property
    def coords(self) -> Coords:
        return (self.lat, self.lon)


@dataclass(frozen=True)
class KMeansModel:
    k: int
    centroids: tuple[Coords, ...]
    assignments: tuple[int, ...]  # input point index -> cluster index
    cost: float
    iterations: int
    iteration_costs: tuple[float, ...]  # assignment cost per round, for audits


def _squared_distance(point: Coords, centroid: Coords) -> float:
    dlat = point[0] - centroid[0]
    dlon = point[1] - centroid[1]
    return dlat * dlat + dlon * dlon


def assign(point: GeoPoint, centroids: tuple[Coords, ...]) -> int:
    """Index of the nearest centroid; ties go to the lowest index."""
    if not centroids:
        raise InvalidK("no centroids to assign to")
    best = 0
    best_distance = _squared_distance(point.coords, centroids[0])
    for index in range(1, len(centroids)):
        distance = _squared_distance(point.coords, centroids[index])
        if distance < best_distance:
            best, best_distance = index, distance
    return best


def cost(points: list[GeoPoint], model: KMeansModel) -> float:
    """Within-cluster sum of squared distances under the model."""
    return math.fsum(
        _squared_distance(point.coords, model.centroids[model.assignments[i]])
        for i, point in enumerate(points)
    )


def fit(
    points: list[GeoPoint],
    k: int,
    seed: int,
    max_iters: int = DEFAULT_MAX_ITERS,
    tol: float = DEFAULT_TOL,
) -> KMeansModel:
    if k < 1:
        raise InvalidK(f"k must be positive, got {k}")
    if max_iters < 1:
        raise InvalidK(f"max_iters must be positive, got {max_iters}")
    if tol < 0:
        raise InvalidK(f"tol must be non-negative, got {tol}")
    if len(points) < k:
        raise TooFewPoints(f"need at least {k} points, got {len(points)}")

    order = sorted(range(len(points)),
                   key=lambda i: (points[i].lat, points[i].lon, points[i].label))
    canonical = [points[i] for i in order]
    n = len(canonical)

    centroids = [canonical[i].coords
                 for i in random.Random(seed).sample(range(n), k)]
    assignment = [0] * n
    iteration_costs: list[float] = []
    iterations = 0

    for _ in range(max_iters):
        iterations += 1
        frozen = tuple(centroids)
        for i, point in enumerate(canonical):
            assignment[i] = assign(point, frozen)
        iteration_costs.append(math.fsum(
            _squared_distance(canonical[i].coords, centroids[assignment[i]])
            for i in range(n)
        ))

        updated = _update_centroids(canonical, assignment, centroids, k)
        displacement = max(
            math.sqrt(_squared_distance(old, new))
            for old, new in zip(centroids, updated)
        )
        centroids = updated
        if displacement < tol:
            break

    final_cost = math.fsum(
        _squared_distance(canonical[i].coords, centroids[assignment[i]])
        for i in range(n)
    )
    by_input = [0] * n
    for position, input_index in enumerate(order):
        by_input[input_index] = assignment[position]
    return KMeansModel(
        k=k,
        centroids=tuple(centroids),
        assignments=tuple(by_input),
        cost=final_cost,
        iterations=iterations,
        iteration_costs=tuple(iteration_costs),
    )


def _update_centroids(
    canonical: list[GeoPoint],
    assignment: list[int],
    centroids: list[Coords],
    k: int,
) -> list[Coords]:
    updated: list[Coords] = []
    claimed: set[int] = set()
    for c in range(k):
        members = [i for i in range(len(canonical)) if assignment[i] == c]
        if members:
            lat = math.fsum(canonical[i].lat for i in members) / len(members)
            lon = math.fsum(canonical[i].lon for i in members) / len(members)
            updated.append((lat, lon))
            continue
        farthest = max(
            (i for i in range(len(canonical)) if i not in claimed),
            key=lambda i: _squared_distance(canonical[i].coords, centroids[c]),
        )
        claimed.add(farthest)
        updated.append(canonical[farthest].coords)
    return updated


def model_to_json(points: list[GeoPoint], model: KMeansModel) -> dict:
    """Export shape: {k, centroids, clusters, cost, iterations}."""
    members: dict[int, list[str]] = {c: [] for c in range(model.k)}
    for index, point in enumerate(points):
        members[model.assignments[index]].append(point.label)
    return {
        "k": model.k,
        "centroids": [[lat, lon] for lat, lon in model.centroids],
        "clusters": [
            {"index": c, "members": sorted(members[c])} for c in range(model.k)
        ],
        "cost": model.cost,
        "iterations": model.iterations,
    }
