"""Two-class clustering of descriptor fields into motion / zero-motion masks."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .descriptor import TEMPORAL_KEYS


class DegenerateInputError(ValueError):
    """Clustering input has fewer distinct points than clusters."""


@dataclass
class KMeansResult:
    labels: np.ndarray
    centroids: np.ndarray
    n_iter: int
    inertia_history: list


def _distinct_at_least(points, k):
    found = [points[0]]
    for _ in range(k - 1):
        differs = np.ones(len(points), dtype=bool)
        for c in found:
            differs &= np.any(points != c, axis=1)
        idx = np.flatnonzero(differs)
        if idx.size == 0:
            return False
        found.append(points[idx[0]])
    return True


def _sq_dist(points, center, sq_norms):
    d = sq_norms - 2.0 * (points @ center) + float(center @ center)
    return np.maximum(d, 0.0, out=d)


def _assign(points, centroids, sq_norms):
    """Nearest centroid per point (lowest index on ties) and the squared distance to it."""
    best = _sq_dist(points, centroids[0], sq_norms)
    labels = np.zeros(len(points), dtype=np.intp)
    for j in range(1, len(centroids)):
        d = _sq_dist(points, centroids[j], sq_norms)
        closer = d < best
        labels[closer] = j
        np.minimum(best, d, out=best)
    return labels, best


def _cluster_means(points, labels, k, previous):
    means = previous.copy()
    for j in range(k):
        member = (labels == j).astype(float)
        count = member.sum()
        if count > 0:
            means[j] = (member @ points) / count
    return means


def _plusplus(points, k, rng):
    n = len(points)
    centers = [points[rng.integers(n)]]
    sq_norms = np.einsum("ij,ij->i", points, points)
    closest = _sq_dist(points, centers[0], sq_norms)
    for _ in range(1, k):
        total = closest.sum()
        if total <= 0:
            idx = rng.integers(n)
        else:
            idx = int(np.searchsorted(np.cumsum(closest), rng.random() * total, side="right"))
            idx = min(idx, n - 1)
        centers.append(points[idx])
        closest = np.minimum(closest, _sq_dist(points, points[idx], sq_norms))
    return np.array(centers)


def _lloyd(points, sq_norms, k, rng, max_iters, tol) -> KMeansResult:
    centroids = _plusplus(points, k, rng)
    history = []
    n_iter = 0
    for n_iter in range(1, max_iters + 1):
        labels, d = _assign(points, centroids, sq_norms)
        history.append(float(d.sum()))
        new = _cluster_means(points, labels, k, centroids)
        shift = np.max(np.sqrt(np.sum((new - centroids) ** 2, axis=1)))
        centroids = new
        if shift <= tol:
            break
    labels, d = _assign(points, centroids, sq_norms)
    history.append(float(d.sum()))
    return KMeansResult(labels, centroids, n_iter, history)


def kmeans(points, k: int = 2, seed: int = 42, max_iters: int = 100, tol: float = 1e-6,
           n_init: int = 1) -> KMeansResult:
    """Lloyd's algorithm with k-means++ seeding.

    Stops once no centroid moves more than ``tol`` or after ``max_iters``
    rounds. Points go to the nearest centroid, lower index on ties. A cluster
    that empties keeps its previous centroid.

    With ``n_init > 1`` the run is repeated from fresh seedings (run ``i``
    draws from ``default_rng([seed, i])``, run 0 from ``default_rng(seed)``)
    and the lowest final within-cluster sum of squares wins, earliest on ties.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points[:, None]
    if k < 2:
        raise ValueError("k must be >= 2")
    if max_iters < 1 or tol < 0 or n_init < 1:
        raise ValueError("need max_iters >= 1, tol >= 0 and n_init >= 1")
    if len(points) < k or not _distinct_at_least(points, k):
        raise DegenerateInputError(f"fewer than {k} distinct points")
    if not np.all(np.isfinite(points)):
        raise ValueError("points must be finite")

    sq_norms = np.einsum("ij,ij->i", points, points)
    best = None
    for run in range(n_init):
        rng = np.random.default_rng(seed if run == 0 else [seed, run])
        res = _lloyd(points, sq_norms, k, rng, max_iters, tol)
        if best is None or res.inertia_history[-1] < best.inertia_history[-1]:
            best = res
    return best


def motion_channel_mask(channels):
    return np.array([c != "LLL" for c in channels])


def motion_cluster(features, labels, k: int = 2, channels=None) -> int:
    """Index of the cluster whose mean descriptor is largest in the non-LLL channels.

    Means are taken over ``features`` (the raw, non-negative descriptors), so
    the choice does not depend on any standardisation used for clustering.
    Equal norms go to the smaller cluster.
    """
    features = np.asarray(features, dtype=float).reshape(len(labels), -1)
    sel = motion_channel_mask(channels) if channels is not None else slice(None)
    best = None
    for j in range(k):
        members = labels == j
        count = int(members.sum())
        if count == 0:
            continue
        norm = float(np.linalg.norm(features[members].mean(axis=0)[sel]))
        key = (norm, -count)
        if best is None or key > best[0]:
            best = (key, j)
    return best[1]


def label_clusters(features, labels, k: int = 2, channels=None) -> np.ndarray:
    """Boolean motion mask shaped like ``features[..., 0]``."""
    features = np.asarray(features)
    labels = np.asarray(labels).reshape(features.shape[:-1])
    j = motion_cluster(features.reshape(-1, features.shape[-1]), labels.ravel(), k, channels)
    return labels == j


def temporal_evidence(features, channels) -> float:
    """Largest temporal high-pass descriptor value, or ``inf`` if none is in the channel set."""
    idx = [i for i, c in enumerate(channels) if c in TEMPORAL_KEYS]
    if not idx:
        return float("inf")
    return float(np.max(np.asarray(features)[..., idx]))
