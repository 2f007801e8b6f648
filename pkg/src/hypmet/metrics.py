"""Quantities assembled over a complex: angles, cone angles, curvature,
volume, and covolume with analytic cone-angle gradients.

Metrics are edge-class vectors (any reals for the ideal flavor, positive
for the hyper-ideal flavor).  Angle assignments come in two shapes:

* ideal: array (n_tets, 3), one angle per quad, each row summing to pi;
* hyper: array (n_tets, 6), one angle per edge slot, the three slots at
  each tetrahedron vertex summing to at most pi.

Cone angles sum dihedral angles over edge *instances*, so an edge class
meeting a tetrahedron in several slots is counted once per slot.  The
curvature is 2 pi minus the cone angle at interior edges and pi minus the
cone angle at boundary edges.

The covolume of a metric is the sum of the per-tetrahedron covolumes; its
gradient is exactly the cone-angle vector of the metric, which is what the
solvers exploit.
"""

import math

import numpy as np

from .errors import DomainError, UnsupportedAngleTypeError
from .hyperideal import (
    VERTEX_SLOTS,
    cov_hyper,
    hyper_angles_from_lengths,
    volume_from_angles,
)
from .ideal import cov_ideal, ideal_lengths_to_angles
from .lobachevsky import lobachevsky

__all__ = [
    "FLAVORS",
    "angles_of_metric",
    "cone_angles",
    "curvature",
    "volume",
    "cov_complex",
    "validate_assignment",
]

FLAVORS = ("ideal", "hyper")


def _check_flavor(flavor):
    if flavor not in FLAVORS:
        raise DomainError(f"flavor must be one of {FLAVORS}, got {flavor!r}")


def _check_metric(c, l, flavor, extended=False):
    l = np.asarray(l, dtype=float)
    if l.shape != (c.num_edges,):
        raise DomainError(
            f"metric must assign one value to each of the {c.num_edges} edges, "
            f"got shape {l.shape}"
        )
    if not np.all(np.isfinite(l)):
        raise DomainError("metric values must be finite")
    if flavor == "hyper" and not extended and np.min(l) <= 0.0:
        raise DomainError("hyper-ideal metrics require strictly positive lengths")
    return l


def angles_of_metric(c, l, flavor):
    """Per-tetrahedron dihedral angles of the metric l.

    Returns shape (n_tets, 3) of quad angles for the ideal flavor and
    (n_tets, 6) of slot angles for the hyper flavor.
    """
    _check_flavor(flavor)
    l = _check_metric(c, l, flavor)
    if flavor == "ideal":
        out = np.empty((c.n_tets, 3))
        for t in range(c.n_tets):
            out[t] = ideal_lengths_to_angles(c.tet_lengths(l, t))[:3]
    else:
        out = np.empty((c.n_tets, 6))
        for t in range(c.n_tets):
            out[t] = hyper_angles_from_lengths(c.tet_lengths(l, t))
    return out


def _slot_angles(assignment):
    """View an assignment as per-slot angles of shape (n_tets, 6)."""
    a = np.asarray(assignment, dtype=float)
    if a.ndim == 2 and a.shape[1] == 3:
        return np.hstack([a, a]), "ideal"
    if a.ndim == 2 and a.shape[1] == 6:
        return a, "hyper"
    raise DomainError(f"assignment must have shape (T, 3) or (T, 6), got {a.shape}")


def validate_assignment(c, assignment, flavor, tol=1e-10):
    """Check the linear constraints of an angle assignment; DomainError if violated."""
    a = np.asarray(assignment, dtype=float)
    _check_flavor(flavor)
    expected = (c.n_tets, 3 if flavor == "ideal" else 6)
    if a.shape != expected:
        raise DomainError(f"{flavor} assignment must have shape {expected}, got {a.shape}")
    if not np.all(np.isfinite(a)) or np.min(a) < -tol:
        raise DomainError("assignment angles must be finite and nonnegative")
    if flavor == "ideal":
        sums = a.sum(axis=1)
        if np.max(np.abs(sums - math.pi)) > tol:
            raise DomainError(f"per-tetrahedron quad sums must equal pi, got {sums}")
    else:
        for slots in VERTEX_SLOTS:
            sums = a[:, list(slots)].sum(axis=1)
            if np.max(sums) > math.pi + tol:
                raise DomainError(
                    f"per-vertex angle sums must be at most pi, got {sums.max()}"
                )
    return a


def cone_angles(c, assignment):
    """Cone angle at each edge class: instance-multiplicity angle sum."""
    slots, _ = _slot_angles(assignment)
    if slots.shape[0] != c.n_tets:
        raise DomainError(
            f"assignment has {slots.shape[0]} rows for a complex with {c.n_tets} tetrahedra"
        )
    k = np.zeros(c.num_edges)
    np.add.at(k, c.edge_index.ravel(), slots.ravel())
    return k


def curvature(c, k):
    """2 pi minus the cone angle at interior edges, pi minus at boundary edges."""
    k = np.asarray(k, dtype=float)
    full = np.where(np.asarray(c.edge_boundary), math.pi, 2.0 * math.pi)
    return full - k


def volume(c, assignment, flavor, tol=1e-10):
    """Total volume of an angle assignment.

    Ideal: sum of Lambda over all quads.  Hyper: sum of per-tetrahedron
    volumes, with flat (type II) tetrahedra contributing zero; a type-III
    tetrahedron raises UnsupportedAngleTypeError.
    """
    a = validate_assignment(c, assignment, flavor)
    if flavor == "ideal":
        return float(sum(lobachevsky(x) for x in a.ravel()))
    total = 0.0
    for t in range(c.n_tets):
        row = np.clip(a[t], 0.0, math.pi)
        try:
            total += volume_from_angles(tuple(row), tol=tol)
        except UnsupportedAngleTypeError:
            raise UnsupportedAngleTypeError(
                f"tetrahedron {t} carries a type-III angle vector {a[t]}"
            ) from None
    return float(total)


def cov_complex(c, l, flavor, tol=1e-10):
    """Covolume of the metric l and its gradient, the cone-angle vector.

    The value is the sum of per-tetrahedron covolumes (closed-form for the
    ideal flavor, path-integrated for the hyper flavor with quadrature
    target tol); gradient[e] sums the dihedral angles over the instances
    of e.  Both flavors accept any finite real metric: the hyper flavor
    evaluates the C^1 convex extension, which the solvers minimize over
    all of R^E.
    """
    _check_flavor(flavor)
    l = _check_metric(c, l, flavor, extended=True)
    value = 0.0
    grad = np.zeros(c.num_edges)
    for t in range(c.n_tets):
        lt = c.tet_lengths(l, t)
        if flavor == "ideal":
            v, slot_angles = cov_ideal(lt)
        else:
            v = cov_hyper(lt, tol=tol)
            slot_angles = hyper_angles_from_lengths(lt)
        value += v
        np.add.at(grad, c.edge_index[t], np.asarray(slot_angles))
    return float(value), grad
