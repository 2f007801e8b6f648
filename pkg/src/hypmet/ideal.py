"""Geometry of a single decorated ideal tetrahedron, possibly degenerate.

A generalized decorated tetrahedron is six real edge labels l = (l_1..l_6)
with slots i and i+3 opposite.  Its dihedral angles are the inner angles of
the generalized Euclidean triangle with side lengths

    x_p = exp((l_p + l_{p+3}) / 2),   p = 1, 2, 3,

the angle on pair p sitting opposite side x_p, and a side at least as long
as the other two combined collapses the angles to (pi, 0, 0).  The convex
covolume is cov(l) = 2 * phi_star of the log side lengths, with the cone
angles as its gradient; phi_star itself is the Legendre-type dual of minus
the triangle volume sum(Lambda(a_i)).

All side lengths are handled in log space so that large |l| never overflows,
and near-degenerate triangles go through a sorted half-angle arctangent form
that stays accurate where the law of cosines would cancel.
"""

import math

from .errors import DomainError
from .lobachevsky import lobachevsky

__all__ = [
    "triangle_angles",
    "penner_angle",
    "ideal_lengths_to_angles",
    "is_decorated_ideal",
    "ideal_volume",
    "phi_star",
    "cov_ideal",
]

PAIRS = ((0, 3), (1, 4), (2, 5))


def _angles_from_sides(x1, x2, x3):
    """Inner angles of the generalized Euclidean triangle with sides x_i > 0.

    Returns (a1, a2, a3) with a_i opposite x_i and a1 + a2 + a3 == pi exactly
    (the largest angle is defined as pi minus the other two).  A tie
    x_i >= x_j + x_k yields the degenerate (pi, 0, 0) pattern.
    """
    sides = (x1, x2, x3)
    order = sorted(range(3), key=lambda i: sides[i])
    ic, ib, ia = order  # ascending: x[ic] <= x[ib] <= x[ia]
    a, b, c = sides[ia], sides[ib], sides[ic]
    # Kahan-style exact-cancellation terms; t2 = 2(s - a) detects degeneracy.
    t2 = c - (a - b)
    out = [0.0, 0.0, 0.0]
    if t2 <= 0.0:
        out[ia] = math.pi
        return tuple(out)
    t1 = a + (b + c)
    t3 = c + (a - b)  # 2(s - b)
    t4 = a + (b - c)  # 2(s - c)
    ang_b = 2.0 * math.atan2(math.sqrt(t2 * t4), math.sqrt(t1 * t3))
    ang_c = 2.0 * math.atan2(math.sqrt(t2 * t3), math.sqrt(t1 * t4))
    out[ib] = ang_b
    out[ic] = ang_c
    out[ia] = math.pi - ang_b - ang_c
    return tuple(out)


def _angles_from_log_sides(y1, y2, y3):
    """Angles of the triangle with sides exp(y_i); overflow-free for any reals."""
    m = max(y1, y2, y3)
    return _angles_from_sides(math.exp(y1 - m), math.exp(y2 - m), math.exp(y3 - m))


def triangle_angles(x1, x2, x3):
    """Inner angles (a1, a2, a3) of the generalized Euclidean triangle.

    Raises DomainError unless all sides are positive and finite.
    """
    for x in (x1, x2, x3):
        if not (x > 0.0 and math.isfinite(x)):
            raise DomainError(f"triangle sides must be positive finite, got {(x1, x2, x3)}")
    return _angles_from_sides(float(x1), float(x2), float(x3))


def penner_angle(l_jk, l_ij, l_ik):
    """Horocyclic arc length at vertex i of the decorated ideal triangle.

    Penner's cosine law: a_i = exp((l_jk - l_ij - l_ik) / 2).
    """
    return math.exp(0.5 * (l_jk - l_ij - l_ik))


def _check_lengths(l):
    if len(l) != 6:
        raise DomainError(f"expected 6 edge labels, got {len(l)}")
    vals = tuple(float(v) for v in l)
    if not all(math.isfinite(v) for v in vals):
        raise DomainError(f"edge labels must be finite, got {vals}")
    return vals


def _log_sides(l):
    return tuple(0.5 * (l[p] + l[q]) for p, q in PAIRS)


def ideal_lengths_to_angles(l):
    """Six dihedral angles of the generalized decorated tetrahedron.

    Opposite slots carry exactly equal angles; each quad sum is pi.
    """
    y = _log_sides(_check_lengths(l))
    a = _angles_from_log_sides(*y)
    return a + a


def is_decorated_ideal(l):
    """True iff l is realized by a genuine decorated ideal tetrahedron.

    Checks the strict triangle inequalities on the sides exp((l_p + l_{p+3})/2).
    """
    y = _log_sides(_check_lengths(l))
    m = max(y)
    x = [math.exp(v - m) for v in y]
    return all(x[j] + x[k] > x[i] for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)))


def _check_angles(a):
    if len(a) != 6:
        raise DomainError(f"expected 6 dihedral angles, got {len(a)}")
    vals = tuple(float(v) for v in a)
    for i in range(3):
        if abs(vals[i] - vals[i + 3]) > 1e-9:
            raise DomainError(f"opposite slots must carry equal angles, got {vals}")
    if abs(vals[0] + vals[1] + vals[2] - math.pi) > 1e-9:
        raise DomainError(f"quad angles must sum to pi, got {vals}")
    if min(vals) < -1e-12:
        raise DomainError(f"angles must be nonnegative, got {vals}")
    return vals


def ideal_volume(a):
    """Hyperbolic volume from a valid 6-slot dihedral angle vector.

    Equals Lambda(a1) + Lambda(a2) + Lambda(a3); nonnegative, and zero
    exactly for degenerate (flat) tetrahedra.
    """
    vals = _check_angles(a)
    return lobachevsky(vals[0]) + lobachevsky(vals[1]) + lobachevsky(vals[2])


def phi_star(y1, y2, y3):
    """Fenchel dual of minus the ideal triangle volume.

    Returns (value, (a1, a2, a3)) where the a_i are the angles of the
    triangle with sides exp(y_i) and

        value = sum_i Lambda(a_i) + a_i * y_i.

    The gradient of phi_star is exactly the angle vector.  On the degenerate
    region exp(y_i) >= exp(y_j) + exp(y_k) the formula collapses to the
    closed form pi * y_i because the angles are exactly (pi, 0, 0) and
    Lambda(pi) = 0.
    """
    ys = (float(y1), float(y2), float(y3))
    if not all(math.isfinite(v) for v in ys):
        raise DomainError(f"phi_star requires finite arguments, got {ys}")
    a = _angles_from_log_sides(*ys)
    value = sum(lobachevsky(ai) + ai * yi for ai, yi in zip(a, ys))
    return value, a


def cov_ideal(l):
    """Convex covolume of a generalized decorated tetrahedron.

    Returns (value, gradient) with value = 2 * phi_star of the log sides and
    gradient slot i equal to the dihedral angle there (the Schlaefli-type
    identity d cov / d l_i = a_i).
    """
    vals = _check_lengths(l)
    value, a = phi_star(*_log_sides(vals))
    return 2.0 * value, a + a
