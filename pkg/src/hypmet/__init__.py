"""Ideal and hyper-ideal hyperbolic polyhedral metrics on triangulated
pseudo 3-manifolds.

The package computes decorated ideal and hyper-ideal polyhedral metrics
with prescribed cone angles (equivalently, curvature) by minimizing the
convex covolume functions of the edge lengths, and verifies the attendant
rigidity, duality and volume-maximization statements numerically at desk
scale.

Layout: `lobachevsky` evaluates the volume primitive; `ideal` and
`hyperideal` are single-tetrahedron kernels; `triangulation` builds glued
complexes; `metrics` assembles angles, cone angles, curvature, volume and
covolume over a complex; `solver` holds the variational algorithms; `cli`
is the `hypmet` command-line front end.
"""

from .lobachevsky import lobachevsky
from .triangulation import GluingSpec, build_complex, load_triangulation

__version__ = "0.1.0"

__all__ = ["lobachevsky", "GluingSpec", "build_complex", "load_triangulation", "__version__"]
