"""Geometry of a single generalized hyper-ideal tetrahedron.

Edges are indexed by six slots with slots s and s+3 opposite:

    slot:     0      1      2      3      4      5
    vertices: (0,1)  (0,2)  (0,3)  (2,3)  (1,3)  (1,2)

For positive edge lengths l the quantity phi_s(l) is the symmetric
cosine-law expression that equals cos(a_s) whenever the lengths are realized
by a hyper-ideal tetrahedron; the realizable set is

    L = { l > 0 : phi_s(l) in (-1, 1) for all s }.

Outside L the complement splits into three flat regions Omega_p, one per
opposite pair, where the pair carries phi <= -1 (dihedral angle pi) and the
four remaining edges carry phi >= 1 (angle 0).  The dihedral angle map
extends continuously to all of R^6 by clamping lengths at zero and clamping
phi into [-1, 1] before arccos.

The covolume is the C^1 convex primitive of the closed 1-form
mu = sum_s a_s dl_s, recovered by integrating mu along the straight segment
from the origin and adding the base value cov(0) = 16 Lambda(pi/4), the
doubled volume of the regular ideal octahedron that the zero-length
tetrahedron degenerates to.  The hyperbolic volume is then
vol = (cov - sum a_s l_s) / 2, which vanishes on the flat regions.

psi is the inverse cosine-law expression: for a type-I angle vector a the
edge lengths of the realizing tetrahedron are arccosh(psi_s(a)).
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import IntegrationWarning, quad
from scipy.optimize import brentq

from .errors import (
    ConsistencyError,
    DomainError,
    NumericalError,
    UnsupportedAngleTypeError,
)
from .lobachevsky import lobachevsky

__all__ = [
    "EDGE_VERTICES",
    "VERTEX_SLOTS",
    "LengthClass",
    "vertex_edge_length",
    "phi",
    "classify_lengths",
    "hyper_angles_from_lengths",
    "psi",
    "classify_angles",
    "cov_hyper",
    "vol_hyper",
    "volume_from_angles",
    "mu_segment_integral",
    "COV_AT_ORIGIN",
]

EDGE_VERTICES = ((0, 1), (0, 2), (0, 3), (2, 3), (1, 3), (1, 2))
SLOT_OF_EDGE = {frozenset(p): s for s, p in enumerate(EDGE_VERTICES)}
# slots of the three edges meeting each vertex
VERTEX_SLOTS = ((0, 1, 2), (0, 4, 5), (1, 3, 5), (2, 3, 4))
FACES = ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3))

COV_AT_ORIGIN = 16.0 * lobachevsky(math.pi / 4.0)


def _slot(u, v):
    return SLOT_OF_EDGE[frozenset((u, v))]

# per slot (i, j): slots of the edges ik, ih, jk, jh and of the opposite kh,
# plus the indices of the two faces containing the edge
_SLOT_TABLE = []
for _s, (_i, _j) in enumerate(EDGE_VERTICES):
    _k, _h = sorted(set(range(4)) - {_i, _j})
    _SLOT_TABLE.append(
        (
            _slot(_i, _k),
            _slot(_i, _h),
            _slot(_j, _k),
            _slot(_j, _h),
            _slot(_k, _h),
            FACES.index(tuple(sorted((_i, _j, _k)))),
            FACES.index(tuple(sorted((_i, _j, _h)))),
        )
    )
_SLOT_TABLE = tuple(_SLOT_TABLE)

_FACE_SLOTS = tuple(
    tuple(_slot(u, v) for u, v in ((f[0], f[1]), (f[0], f[2]), (f[1], f[2])))
    for f in FACES
)


def _check_six(l, name="edge lengths"):
    if len(l) != 6:
        raise DomainError(f"expected 6 {name}, got {len(l)}")
    vals = tuple(float(v) for v in l)
    if not all(math.isfinite(v) for v in vals):
        raise DomainError(f"{name} must be finite, got {vals}")
    return vals


def vertex_edge_length(l_ij, l_ik, l_jk):
    """Length of the vertex-triangle side cut off at vertex i.

    arccosh((cosh l_ij cosh l_ik + cosh l_jk) / (sinh l_ij sinh l_ik)); the
    argument is >= 1 for any positive lengths, so the result is always
    defined.  Raises DomainError for non-positive input.
    """
    for v in (l_ij, l_ik, l_jk):
        if not (v > 0.0 and math.isfinite(v)):
            raise DomainError(f"vertex_edge_length requires positive lengths, got {(l_ij, l_ik, l_jk)}")
    arg = (math.cosh(l_ij) * math.cosh(l_ik) + math.cosh(l_jk)) / (
        math.sinh(l_ij) * math.sinh(l_ik)
    )
    if arg < 1.0 - 1e-12:
        raise DomainError(f"arccosh argument {arg} below 1 beyond roundoff slack")
    return math.acosh(max(arg, 1.0))


def _phi_from_cosh(c):
    """The six phi values from the six cosh(edge length) values."""
    face_d = []
    for sa, sb, sc in _FACE_SLOTS:
        ca, cb, cc = c[sa], c[sb], c[sc]
        face_d.append(2.0 * ca * cb * cc + ca * ca + cb * cb + cc * cc - 1.0)
    out = []
    for s in range(6):
        ik, ih, jk, jh, kh, f1, f2 = _SLOT_TABLE[s]
        cij = c[s]
        if cij == 1.0:
            # zero-length edge: numerator and denominator both factor as
            # (c_ik + c_jk)(c_ih + c_jh); make the value 1 exact so the
            # extended angle at a clamped slot is exactly 0
            out.append(1.0)
            continue
        num = (
            c[ik] * c[ih]
            + c[jk] * c[jh]
            + cij * (c[ik] * c[jh] + c[ih] * c[jk])
            - (cij * cij - 1.0) * c[kh]
        )
        out.append(num / math.sqrt(face_d[f1] * face_d[f2]))
    return tuple(out)


def _phi_clamped(l):
    return _phi_from_cosh([math.cosh(v) if v > 0.0 else 1.0 for v in l])


def phi(l):
    """The six symmetric cosine-law values phi_s(l) for strictly positive l.

    Equals cos of the dihedral angles when l lies in the hyper-ideal set L.
    """
    vals = _check_six(l)
    if min(vals) <= 0.0:
        raise DomainError(f"phi requires strictly positive lengths, got {vals}")
    return _phi_from_cosh([math.cosh(v) for v in vals])


@dataclass(frozen=True)
class LengthClass:
    """Classification of a positive length vector against the flat regions.

    kind is one of "hyper_ideal", "flat_boundary", "flat_interior"; pair is
    the 0-based opposite pair carrying angle pi for the flat kinds, None
    otherwise.  phi holds the six values the decision was made from.
    """

    kind: str
    pair: int | None
    phi: tuple

    @property
    def is_hyper_ideal(self):
        return self.kind == "hyper_ideal"


def classify_lengths(l, tol=1e-9):
    """Locate a positive length vector relative to L and the flat regions.

    A pair with phi <= -1 + tol is flagged flat; |phi + 1| <= tol lands on
    the boundary wall, anything further below -1 in the interior of the flat
    region.  Two distinct flat pairs cannot coexist; seeing both raises
    ConsistencyError.  Points with every phi inside (-1 + tol, 1 - tol), and
    also points near the small-length frontier where some phi approaches 1
    without any pair reaching -1, classify as hyper_ideal (they lie in the
    closure of L, not in any flat region).
    """
    vals = _check_six(l)
    if min(vals) <= 0.0:
        raise DomainError(f"classify_lengths requires strictly positive lengths, got {vals}")
    ph = _phi_from_cosh([math.cosh(v) for v in vals])
    flat_pairs = [p for p in range(3) if ph[p] <= -1.0 + tol or ph[p + 3] <= -1.0 + tol]
    if len(flat_pairs) > 1:
        raise ConsistencyError(
            f"two opposite pairs report phi <= -1 (pairs {flat_pairs}, phi={ph}); "
            "this is excluded by the flat-region disjointness"
        )
    if flat_pairs:
        p = flat_pairs[0]
        if min(ph[p], ph[p + 3]) < -1.0 - tol:
            return LengthClass("flat_interior", p, ph)
        return LengthClass("flat_boundary", p, ph)
    return LengthClass("hyper_ideal", None, ph)


def hyper_angles_from_lengths(l):
    """Continuously extended dihedral angles for an arbitrary real 6-vector.

    Lengths are clamped at zero, phi at [-1, 1]; a slot with l <= 0 gets
    angle 0, a flat pair gets pi.  The six slots are independent: opposite
    angles coincide only in the degenerate classes.
    """
    vals = _check_six(l)
    ph = _phi_clamped(vals)
    return tuple(
        0.0 if vals[s] <= 0.0 else math.acos(min(1.0, max(-1.0, ph[s])))
        for s in range(6)
    )


def _vertex_sums(a):
    return tuple(a[s1] + a[s2] + a[s3] for s1, s2, s3 in VERTEX_SLOTS)


def classify_angles(a, tol=1e-9):
    """Type I / II / III classification of an angle vector in closure(B).

    Type I: every vertex sum strictly below pi.  Type II: pi on one opposite
    pair and 0 elsewhere (within tol).  Type III: everything else.  Raises
    DomainError when a is not in closure(B) beyond tol.
    """
    vals = _check_six(a, "dihedral angles")
    if min(vals) < -tol:
        raise DomainError(f"angles must be nonnegative, got {vals}")
    sums = _vertex_sums(vals)
    if max(sums) > math.pi + tol:
        raise DomainError(f"vertex angle sums must be at most pi, got {sums}")
    if all(s < math.pi for s in sums):
        return "type_I"
    for p in range(3):
        on = abs(vals[p] - math.pi) <= tol and abs(vals[p + 3] - math.pi) <= tol
        off = all(abs(vals[s]) <= tol for s in range(6) if s not in (p, p + 3))
        if on and off:
            return "type_II"
    return "type_III"


def psi(a):
    """Inverse cosine-law values for a type-I angle vector.

    psi_s(a) >= 1 is the cosh of the edge length of the realizing
    tetrahedron; psi_s = 1 exactly when a_s = 0.  Raises DomainError for
    type II/III input.
    """
    vals = _check_six(a, "dihedral angles")
    if classify_angles(vals) != "type_I":
        raise DomainError(f"psi requires a type-I angle vector, got {vals}")
    c = [math.cos(v) for v in vals]
    s2 = [math.sin(v) ** 2 for v in vals]
    vert_d = []
    for s1, s2_, s3 in VERTEX_SLOTS:
        c1, c2, c3 = c[s1], c[s2_], c[s3]
        vert_d.append(2.0 * c1 * c2 * c3 + c1 * c1 + c2 * c2 + c3 * c3 - 1.0)
    out = []
    for s in range(6):
        ik, ih, jk, jh, kh, _, _ = _SLOT_TABLE[s]
        i, j = EDGE_VERTICES[s]
        num = (
            s2[s] * c[kh]
            + c[ik] * c[jk]
            + c[ih] * c[jh]
            + c[s] * (c[ik] * c[jh] + c[ih] * c[jk])
        )
        den = vert_d[i] * vert_d[j]
        if den <= 0.0:
            raise DomainError(
                f"vertex sums too close to pi for a stable length (angles {vals})"
            )
        out.append(num / math.sqrt(den))
    return tuple(out)


def _segment_knots(start, end, scan=64):
    """Interior parameters where the integrand of mu kinks along a segment.

    Collects sign crossings of each coordinate and, on a scan grid refined
    by bisection, crossings of each phi_s through +/-1.  The knots only
    accelerate the adaptive quadrature; a missed tangential crossing costs
    accuracy locally, never correctness, because the integrand stays
    continuous.
    """
    start = np.asarray(start, dtype=float)
    end = np.asarray(end, dtype=float)
    d = end - start
    knots = set()
    for e in range(6):
        if (start[e] > 0.0) != (end[e] > 0.0) and d[e] != 0.0:
            t = start[e] / (start[e] - end[e])
            if 1e-12 < t < 1.0 - 1e-12:
                knots.add(t)
    ts = np.linspace(0.0, 1.0, scan + 1)
    vals = np.empty((scan + 1, 6))
    for idx, t in enumerate(ts):
        vals[idx] = _phi_clamped(start + t * d)
    for s in range(6):
        for level in (1.0, -1.0):
            g = vals[:, s] - level
            for idx in range(scan):
                if g[idx] == 0.0 or g[idx] * g[idx + 1] >= 0.0:
                    continue
                f = lambda t: _phi_clamped(start + t * d)[s] - level
                try:
                    root = brentq(f, ts[idx], ts[idx + 1], xtol=1e-13)
                except ValueError:
                    continue
                if 1e-12 < root < 1.0 - 1e-12:
                    knots.add(root)
    # crossings of several phi walls coincide on the flat-region boundary;
    # merge near-duplicates or QUADPACK gets degenerate subintervals
    merged = []
    for t in sorted(knots):
        if not merged or t - merged[-1] > 1e-9:
            merged.append(t)
    return merged


def mu_segment_integral(start, end, tol=1e-10):
    """Line integral of mu = sum_s a_s dl_s along the straight segment.

    The 1-form is closed, so together with COV_AT_ORIGIN these increments
    determine the extended covolume along any polygonal path.  Raises
    NumericalError when the adaptive quadrature cannot certify tol.
    """
    start = np.asarray(_check_six(start), dtype=float)
    end = np.asarray(_check_six(end), dtype=float)
    d = end - start
    if not d.any():
        return 0.0

    def integrand(t):
        a = hyper_angles_from_lengths(start + t * d)
        return float(np.dot(a, d))

    knots = _segment_knots(start, end)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        value, abserr = quad(
            integrand,
            0.0,
            1.0,
            points=knots if knots else None,
            epsabs=tol,
            epsrel=1e-13,
            limit=250,
        )
    if abserr > max(50.0 * tol, 1e-9 * max(1.0, abs(value))):
        raise NumericalError(
            f"segment quadrature did not converge: value={value}, "
            f"abserr={abserr}, requested tol={tol}, knots={knots}"
        )
    return value


def cov_hyper(l, tol=1e-10):
    """C^1 convex covolume extension at an arbitrary real 6-vector.

    Integrates mu from the origin along the straight segment and adds the
    base value 16 Lambda(pi/4).  The quadrature targets absolute error tol.
    """
    vals = _check_six(l)
    return COV_AT_ORIGIN + mu_segment_integral((0.0,) * 6, vals, tol=tol)


def vol_hyper(l, tol=1e-10):
    """Hyperbolic volume of the generalized tetrahedron with positive lengths.

    Defined as (cov(l) - sum_s a_s l_s) / 2; agrees with the geometric volume
    on L and vanishes (up to quadrature error) on the flat regions.
    """
    vals = _check_six(l)
    if min(vals) <= 0.0:
        raise DomainError(f"vol_hyper requires strictly positive lengths, got {vals}")
    a = hyper_angles_from_lengths(vals)
    return 0.5 * (cov_hyper(vals, tol=tol) - sum(ai * li for ai, li in zip(a, vals)))


def volume_from_angles(a, tol=1e-10, roundtrip_tol=1e-8):
    """Volume of the tetrahedron realizing an angle vector in closure(B).

    Type I: recover lengths through psi and evaluate vol_hyper, checking the
    angle round trip to roundtrip_tol; if the round trip degrades on a
    boundary stratum, evaluate along a short inward segment toward the
    regular point and extrapolate linearly (the volume extends continuously
    to the closure).  Type II is flat with volume 0.  Type III has no
    supported evaluation.
    """
    vals = _check_six(a, "dihedral angles")
    kind = classify_angles(vals)
    if kind == "type_II":
        return 0.0
    if kind == "type_III":
        raise UnsupportedAngleTypeError(
            f"volume is not evaluated at type-III angle vectors: {vals}"
        )
    lengths = tuple(math.acosh(max(p, 1.0)) for p in psi(vals))
    back = hyper_angles_from_lengths(lengths)
    if max(abs(x - y) for x, y in zip(back, vals)) <= roundtrip_tol:
        return vol_hyper(lengths, tol=tol) if min(lengths) > 0.0 else _volume_inward(vals, tol)
    return _volume_inward(vals, tol)


def _volume_inward(a, tol):
    """Continuity fallback: extrapolate volume from two points just inside B."""
    ref = (math.pi / 4.0,) * 6
    values = []
    for eps in (1e-3, 5e-4):
        inner = tuple((1.0 - eps) * x + eps * r for x, r in zip(a, ref))
        lengths = tuple(math.acosh(max(p, 1.0)) for p in psi(inner))
        if min(lengths) <= 0.0:
            lengths = tuple(max(li, 1e-12) for li in lengths)
        values.append(vol_hyper(lengths, tol=tol))
    return 2.0 * values[1] - values[0]
