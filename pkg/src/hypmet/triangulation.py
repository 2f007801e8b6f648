"""Triangulated compact pseudo 3-manifolds: gluing, edge/vertex classes, gauge.

A complex is a disjoint union of abstract tetrahedra with some faces glued
in pairs by affine maps.  Face f of a tetrahedron is the face opposite
vertex f; a gluing records the images of that face's vertices (listed in
increasing order) in the target tetrahedron.  Edges and vertices of the
complex are the equivalence classes of the per-tetrahedron edges and
vertices generated by the gluings, computed with a union-find; classes get
stable 0-based ids ordered by their least (tet, slot) instance so rebuilds
and permuted inputs agree.

Edge slots inside each tetrahedron follow the opposite-pair convention of
the kernels: slots s and s+3 are opposite (see hyperideal.EDGE_VERTICES).
Cone-angle style sums always run over edge *instances*, so an edge class
meeting the same tetrahedron several times is counted with multiplicity.

The decoration gauge: a vector w of reals on vertex classes acts on edge
vectors by adding the endpoint values, w(v) + w(v') (twice w(v) on loops).
gauge_matrix returns that linear map; gauge_project removes the gauge
component by least squares.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import GluingError
from .hyperideal import EDGE_VERTICES, SLOT_OF_EDGE

__all__ = [
    "Gluing",
    "GluingSpec",
    "Complex",
    "build_complex",
    "load_triangulation",
    "gauge_matrix",
    "gauge_apply",
    "gauge_project",
]

FACE_VERTICES = tuple(tuple(v for v in range(4) if v != f) for f in range(4))


@dataclass(frozen=True)
class Gluing:
    """One face identification; the reverse identification is implied."""

    tet: int
    face: int
    to_tet: int
    to_face: int
    perm: tuple  # images of the face's vertices, listed in increasing source order

    def vertex_map(self):
        """Full source-vertex -> target-vertex map of the affine gluing."""
        return dict(zip(FACE_VERTICES[self.face], self.perm))


@dataclass(frozen=True)
class GluingSpec:
    tetrahedra: int
    gluings: tuple

    @classmethod
    def from_dict(cls, data):
        try:
            n = int(data["tets"])
            gluings = tuple(
                Gluing(
                    int(g["tet"]),
                    int(g["face"]),
                    int(g["to_tet"]),
                    int(g["to_face"]),
                    tuple(int(v) for v in g["perm"]),
                )
                for g in data["gluings"]
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise GluingError(f"malformed triangulation data: {exc}") from exc
        return cls(n, gluings)


def load_triangulation(path):
    """Read a GluingSpec from the JSON triangulation format."""
    with open(path) as fh:
        data = json.load(fh)
    return GluingSpec.from_dict(data)


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[max(rx, ry)] = min(rx, ry)

    def classes(self):
        groups = {}
        for x in self.parent:
            groups.setdefault(self.find(x), []).append(x)
        return sorted((sorted(g) for g in groups.values()), key=lambda g: g[0])


@dataclass
class Complex:
    """A built pseudo 3-manifold; immutable once constructed."""

    n_tets: int
    edge_classes: tuple  # tuple of tuples of (tet, slot) instances
    vertex_classes: tuple  # tuple of tuples of (tet, vertex) instances
    edge_index: np.ndarray  # shape (n_tets, 6), edge class id of each slot
    vertex_index: np.ndarray  # shape (n_tets, 4)
    edge_boundary: tuple  # bool per edge class
    closed: bool
    edge_endpoints: tuple = field(default=())  # (vid, vid) per edge class

    @property
    def num_edges(self):
        return len(self.edge_classes)

    @property
    def num_vertices(self):
        return len(self.vertex_classes)

    def incidence(self, eid):
        """Edge instances of class eid as (tet, slot) pairs, with multiplicity."""
        return self.edge_classes[eid]

    def quads(self):
        """All quads as (tet, pair) with pair in {0, 1, 2}."""
        return [(t, p) for t in range(self.n_tets) for p in range(3)]

    def quad_edge_multiplicity(self, tet, pair, eid):
        """Number of edge instances of eid among the quad's opposite pair."""
        return sum(1 for s in (pair, pair + 3) if self.edge_index[tet, s] == eid)

    def tet_lengths(self, lengths, tet):
        """Restrict an edge-class vector to the 6 slots of one tetrahedron."""
        lengths = np.asarray(lengths, dtype=float)
        return lengths[self.edge_index[tet]]


def _validate_and_register(spec):
    if spec.tetrahedra <= 0:
        raise GluingError("a complex needs at least one tetrahedron")
    registry = {}

    def register(tet, face, to_tet, to_face, perm):
        key = (tet, face)
        value = (to_tet, to_face, perm)
        if key in registry:
            if registry[key] != value and not (
                key == (to_tet, to_face) and _is_inverse_self(registry[key], value)
            ):
                raise GluingError(f"face {key} glued twice inconsistently")
            return
        registry[key] = value

    for g in spec.gluings:
        for t, f in ((g.tet, g.face), (g.to_tet, g.to_face)):
            if not (0 <= t < spec.tetrahedra and 0 <= f < 4):
                raise GluingError(f"tet/face index out of range in {g}")
        src = FACE_VERTICES[g.face]
        dst = FACE_VERTICES[g.to_face]
        if len(g.perm) != 3 or sorted(g.perm) != list(dst):
            raise GluingError(
                f"perm {g.perm} is not a bijection onto the vertices {dst} of "
                f"face {g.to_face}"
            )
        if (g.tet, g.face) == (g.to_tet, g.to_face):
            if any(a == b for a, b in zip(src, g.perm)):
                raise GluingError(
                    f"self-gluing of face {(g.tet, g.face)} fixes a vertex: {g.perm}"
                )
            register(g.tet, g.face, g.to_tet, g.to_face, g.perm)
            continue
        register(g.tet, g.face, g.to_tet, g.to_face, g.perm)
        inverse = tuple(
            src[g.perm.index(v)] for v in dst
        )  # images of dst vertices in increasing order
        register(g.to_tet, g.to_face, g.tet, g.face, inverse)
    return registry


def _is_inverse_self(a, b):
    # two registrations of a self-glued face may be mutually inverse 3-cycles
    (ta, fa, pa), (tb, fb, pb) = a, b
    if (ta, fa) != (tb, fb):
        return False
    src = FACE_VERTICES[fa]
    fwd = dict(zip(src, pa))
    bwd = dict(zip(src, pb))
    return all(bwd[fwd[v]] == v for v in src)


def build_complex(spec):
    """Glue the tetrahedra of a GluingSpec into a Complex.

    Raises GluingError for malformed specifications.  Unglued faces are
    allowed; they make the complex non-closed and flag their edges as
    boundary.
    """
    registry = _validate_and_register(spec)
    n = spec.tetrahedra

    edges = _UnionFind([(t, s) for t in range(n) for s in range(6)])
    verts = _UnionFind([(t, v) for t in range(n) for v in range(4)])
    for (tet, face), (to_tet, to_face, perm) in registry.items():
        vmap = dict(zip(FACE_VERTICES[face], perm))
        for u, image in vmap.items():
            verts.union((tet, u), (to_tet, image))
        fv = FACE_VERTICES[face]
        for a in range(3):
            for b in range(a + 1, 3):
                s = SLOT_OF_EDGE[frozenset((fv[a], fv[b]))]
                s2 = SLOT_OF_EDGE[frozenset((vmap[fv[a]], vmap[fv[b]]))]
                edges.union((tet, s), (to_tet, s2))

    edge_classes = tuple(tuple(c) for c in edges.classes())
    vertex_classes = tuple(tuple(c) for c in verts.classes())

    edge_index = np.empty((n, 6), dtype=np.intp)
    for eid, cls in enumerate(edge_classes):
        for t, s in cls:
            edge_index[t, s] = eid
    vertex_index = np.empty((n, 4), dtype=np.intp)
    for vid, cls in enumerate(vertex_classes):
        for t, v in cls:
            vertex_index[t, v] = vid

    glued = set(registry)
    closed = len(glued) == 4 * n
    boundary = []
    for cls in edge_classes:
        flag = False
        for t, s in cls:
            u, v = EDGE_VERTICES[s]
            if any((t, f) not in glued for f in range(4) if f not in (u, v)):
                flag = True
                break
        boundary.append(flag)

    endpoints = []
    for cls in edge_classes:
        ends = {
            tuple(sorted((vertex_index[t, u], vertex_index[t, v])))
            for t, s in cls
            for u, v in (EDGE_VERTICES[s],)
        }
        if len(ends) != 1:
            raise GluingError(f"edge class {cls} has inconsistent endpoints {ends}")
        endpoints.append(ends.pop())

    return Complex(
        n_tets=n,
        edge_classes=edge_classes,
        vertex_classes=vertex_classes,
        edge_index=edge_index,
        vertex_index=vertex_index,
        edge_boundary=tuple(boundary),
        closed=closed,
        edge_endpoints=tuple(endpoints),
    )


def gauge_matrix(c):
    """The linear map B: R^V -> R^E with B[e, v] = endpoints of e in class v."""
    b = np.zeros((c.num_edges, c.num_vertices))
    for eid, (u, v) in enumerate(c.edge_endpoints):
        b[eid, u] += 1.0
        b[eid, v] += 1.0
    return b


def gauge_apply(c, w, x):
    """Act on an edge vector by a vertex vector: (w + x)(e) = w(u) + w(v) + x(e)."""
    w = np.asarray(w, dtype=float)
    x = np.asarray(x, dtype=float)
    out = x.copy()
    for eid, (u, v) in enumerate(c.edge_endpoints):
        out[eid] += w[u] + w[v]
    return out


def gauge_project(c, x):
    """Remove the gauge component: x minus its least-squares fit in col(B).

    The result is orthogonal to col(B); applying the projection twice is a
    no-op.  Two edge vectors describe the same decorated metric up to change
    of decoration exactly when their projections agree.
    """
    b = gauge_matrix(c)
    x = np.asarray(x, dtype=float)
    w, *_ = np.linalg.lstsq(b, x, rcond=None)
    return x - b @ w
