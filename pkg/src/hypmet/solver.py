"""Variational solvers: feasibility, covolume minimization, duality, rigidity.

Everything revolves around the convex objective

    f_k(x) = cov(x) - <x, k>,   gradient  k_x - k,

whose minimizers are exactly the metrics with cone angles k; their dihedral
angles are the unique maximum-volume angle assignment with those cone
angles, and the optimal value satisfies W(k) = <l*, k> - cov(l*) = -2 vol.

Feasibility of a cone-angle target is decided by a linear program that
maximizes the minimum slack of the defining (in)equalities; a strictly
positive optimum certifies a positive angle assignment, which is the
hypothesis of the existence theorems.

The descent is a limited-memory quasi-Newton iteration with analytic
cone-angle gradients and a backtracking Armijo line search.  For the ideal
flavor the search directions are projected onto the orthogonal complement
of the decoration gauge subspace col(B), which removes the flat directions;
the objective itself is closed-form.  For the hyper flavor the objective is
expensive (a path quadrature), so accepted steps update the running value
by integrating the directional derivative along the step segment, with a
full path-integral resynchronization every `resync_every` accepted steps;
closedness of the angle 1-form makes the increments exact up to quadrature
error, and the line-search test carries a matching noise allowance.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import null_space
from scipy.optimize import linprog

from .errors import (
    ConsistencyError,
    DomainError,
    LineSearchError,
    MaxIterationsError,
    NotPositiveFeasibleError,
    NumericalError,
)
from .hyperideal import VERTEX_SLOTS, classify_lengths, hyper_angles_from_lengths, mu_segment_integral, vol_hyper
from .ideal import PAIRS
from .lobachevsky import lobachevsky
from .metrics import angles_of_metric, cone_angles, cov_complex
from .triangulation import gauge_matrix, gauge_project

__all__ = [
    "SolveOptions",
    "FeasibilityReport",
    "SolveResult",
    "TetVerdict",
    "RigidityReport",
    "feasibility",
    "solve_metric",
    "max_volume_angles",
    "duality_gap",
    "classify_maximizer",
    "rigidity_check",
]


@dataclass
class SolveOptions:
    """Stopping and quadrature controls for solve_metric."""

    tol: float = 1e-9
    max_iter: int = 5000
    quad_tol: float = 1e-10
    memory: int = 20
    resync_every: int = 25
    armijo: float = 1e-4
    feasibility_tol: float = 1e-9


@dataclass
class FeasibilityReport:
    """Outcome of the max-slack linear program for a cone-angle target."""

    status: str  # "positive_feasible" | "nonnegative_only" | "infeasible"
    witness: np.ndarray | None  # assignment of shape (T, 3) or (T, 6)
    max_slack: float

    @property
    def positive(self):
        return self.status == "positive_feasible"


@dataclass
class SolveResult:
    flavor: str
    lengths: np.ndarray  # gauge-projected for the ideal flavor
    assignment: np.ndarray  # (T, 3) quad angles or (T, 6) slot angles
    achieved_cone_angles: np.ndarray
    target_cone_angles: np.ndarray
    volume: float
    w_value: float  # <l*, k> - cov(l*) = -2 volume
    objective: float  # cov(l*) - <l*, k> = -w_value
    iterations: int
    grad_norm: float
    converged: bool
    objective_trace: list = field(default_factory=list, repr=False)
    value_drift: float = 0.0  # |running - recomputed| objective at the end


@dataclass
class TetVerdict:
    tet: int
    verdict: str  # "realized" | "flat_ideal" | "flat_hyper"
    residual: float


@dataclass
class RigidityReport:
    ok: bool
    flavor: str
    starts: int
    max_angle_deviation: float
    max_length_deviation: float
    tolerance: float
    iterations: list


def _check_closed(c):
    if not c.closed:
        raise DomainError("solver operations require a closed complex")


def _check_target(c, k):
    k = np.asarray(k, dtype=float)
    if k.shape != (c.num_edges,):
        raise DomainError(
            f"cone-angle target must have one entry per edge ({c.num_edges}), got {k.shape}"
        )
    if not np.all(np.isfinite(k)):
        raise DomainError("cone-angle target must be finite")
    return k


def feasibility(c, k, flavor, tol=1e-9):
    """Classify a cone-angle target by maximizing the minimum constraint slack.

    Ideal flavor: quad angles with per-tetrahedron sums pi and the target's
    instance sums per edge; hyper flavor: slot angles with per-vertex sums
    at most pi and the same edge sums.  The optimum sign decides the status;
    the witness realizes the slack.
    """
    _check_closed(c)
    k = _check_target(c, k)
    t_count, e_count = c.n_tets, c.num_edges

    if flavor == "ideal":
        nvar = 3 * t_count

        def var(t, s):
            return 3 * t + (s if s < 3 else s - 3)

        a_eq = np.zeros((t_count + e_count, nvar + 1))
        b_eq = np.zeros(t_count + e_count)
        for t in range(t_count):
            a_eq[t, 3 * t : 3 * t + 3] = 1.0
            b_eq[t] = math.pi
        for eid, cls in enumerate(c.edge_classes):
            for t, s in cls:
                a_eq[t_count + eid, var(t, s)] += 1.0
            b_eq[t_count + eid] = k[eid]
        a_ub = np.hstack([-np.eye(nvar), np.ones((nvar, 1))])
        b_ub = np.zeros(nvar)
    elif flavor == "hyper":
        nvar = 6 * t_count

        def var(t, s):
            return 6 * t + s

        a_eq = np.zeros((e_count, nvar + 1))
        b_eq = np.zeros(e_count)
        for eid, cls in enumerate(c.edge_classes):
            for t, s in cls:
                a_eq[eid, var(t, s)] += 1.0
            b_eq[eid] = k[eid]
        rows = [np.hstack([-np.eye(nvar), np.ones((nvar, 1))])]
        vrows = np.zeros((4 * t_count, nvar + 1))
        for t in range(t_count):
            for vtx, slots in enumerate(VERTEX_SLOTS):
                r = 4 * t + vtx
                for s in slots:
                    vrows[r, var(t, s)] = 1.0
                vrows[r, -1] = 1.0
        rows.append(vrows)
        a_ub = np.vstack(rows)
        b_ub = np.concatenate([np.zeros(nvar), np.full(4 * t_count, math.pi)])
    else:
        raise DomainError(f"unknown flavor {flavor!r}")

    cost = np.zeros(nvar + 1)
    cost[-1] = -1.0  # maximize the slack
    bounds = [(None, None)] * nvar + [(None, math.pi)]
    res = linprog(cost, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq, bounds=bounds, method="highs")
    if res.status == 2:
        return FeasibilityReport("infeasible", None, -math.inf)
    if res.status != 0:
        raise NumericalError(f"feasibility LP failed: {res.message}")
    slack = float(res.x[-1])
    shape = (t_count, 3) if flavor == "ideal" else (t_count, 6)
    witness = res.x[:-1].reshape(shape)
    if slack > tol:
        return FeasibilityReport("positive_feasible", witness, slack)
    if slack >= -tol:
        return FeasibilityReport("nonnegative_only", np.clip(witness, 0.0, None), slack)
    return FeasibilityReport("infeasible", None, slack)


class _IdealObjective:
    """Closed-form objective with gauge-projected gradients."""

    def __init__(self, c, k):
        self.c = c
        self.k = k
        b = gauge_matrix(c)
        self.basis = null_space(b.T)  # orthonormal basis of the complement of col(B)

    def value(self, x):
        v, _ = cov_complex(self.c, x, "ideal")
        return v - float(x @ self.k)

    def residual(self, x):
        _, kx = cov_complex(self.c, x, "ideal")
        return kx - self.k

    def project(self, g):
        if self.basis.size == 0:
            return np.zeros_like(g)
        return self.basis @ (self.basis.T @ g)

    def delta(self, x, y):
        return self.value(y) - self.value(x)

    noise = 1e-13


class _HyperObjective:
    """Extended-covolume objective with incremental values along steps."""

    def __init__(self, c, k, quad_tol):
        self.c = c
        self.k = k
        self.quad_tol = quad_tol
        self.noise = 100.0 * quad_tol * (c.n_tets + 1)

    def value(self, x):
        v, _ = cov_complex(self.c, x, "hyper", tol=self.quad_tol)
        return v - float(x @ self.k)

    def residual(self, x):
        kx = np.zeros(self.c.num_edges)
        for t in range(self.c.n_tets):
            np.add.at(
                kx,
                self.c.edge_index[t],
                np.asarray(hyper_angles_from_lengths(self.c.tet_lengths(x, t))),
            )
        return kx - self.k

    def project(self, g):
        return g

    def delta(self, x, y):
        inc = sum(
            mu_segment_integral(
                self.c.tet_lengths(x, t), self.c.tet_lengths(y, t), tol=self.quad_tol
            )
            for t in range(self.c.n_tets)
        )
        return inc - float((y - x) @ self.k)


def _two_loop(g, history):
    q = g.copy()
    alphas = []
    for s, y, rho in reversed(history):
        a = rho * float(s @ q)
        alphas.append(a)
        q -= a * y
    if history:
        s, y, rho = history[-1]
        q *= float(s @ y) / float(y @ y)
    for (s, y, rho), a in zip(history, reversed(alphas)):
        b = rho * float(y @ q)
        q += (a - b) * s
    return q


def solve_metric(c, k, flavor, opts=None):
    """Minimize cov(x) - <x, k> to the metric with prescribed cone angles.

    Requires a closed complex and a positive-feasible target (checked by the
    LP); convergence means the achieved cone angles match k to opts.tol in
    the max norm.  The ideal flavor iterates orthogonally to the decoration
    gauge and reports the gauge-projected minimizer; the hyper flavor
    iterates over all of R^E using the extended covolume, and the critical
    point is checked to have positive lengths.
    """
    opts = opts or SolveOptions()
    _check_closed(c)
    k = _check_target(c, k)
    report = feasibility(c, k, flavor, tol=opts.feasibility_tol)
    if not report.positive:
        raise NotPositiveFeasibleError(
            f"target has no positive angle assignment (status {report.status}, "
            f"max slack {report.max_slack})"
        )

    if flavor == "ideal":
        obj = _IdealObjective(c, k)
        x = np.zeros(c.num_edges)
    else:
        obj = _HyperObjective(c, k, opts.quad_tol)
        x = np.ones(c.num_edges)
    return _descend(c, k, flavor, obj, x, opts)


def _descend(c, k, flavor, obj, x0, opts):
    x = np.asarray(x0, dtype=float)
    f = obj.value(x)
    r = obj.residual(x)
    g = obj.project(r)
    history = []
    trace = [f]
    accepted_since_sync = 0
    iterations = 0

    while True:
        gnorm = float(np.max(np.abs(r)))
        if gnorm <= opts.tol:
            break
        if iterations >= opts.max_iter:
            raise MaxIterationsError(
                f"no convergence in {opts.max_iter} iterations",
                {"grad_norm": gnorm, "objective": f, "flavor": flavor},
            )
        iterations += 1
        d = -_two_loop(g, history)
        gd = float(g @ d)
        if gd >= 0.0:
            history.clear()
            d = -g
            gd = float(g @ d)
        alpha = 1.0
        step_delta = None
        for _ in range(50):
            dv = obj.delta(x, x + alpha * d)
            if dv <= opts.armijo * alpha * gd + obj.noise:
                step_delta = dv
                break
            alpha *= 0.5
        if step_delta is None:
            raise LineSearchError(
                "backtracking found no acceptable step",
                {"grad_norm": gnorm, "objective": f, "iteration": iterations},
            )
        x_new = x + alpha * d
        r_new = obj.residual(x_new)
        g_new = obj.project(r_new)
        s = x_new - x
        y = g_new - g
        sy = float(s @ y)
        if sy > 1e-12 * float(np.linalg.norm(s)) * float(np.linalg.norm(y)):
            history.append((s, y, 1.0 / sy))
            if len(history) > opts.memory:
                history.pop(0)
        x, r, g = x_new, r_new, g_new
        f += step_delta
        accepted_since_sync += 1
        if accepted_since_sync >= opts.resync_every:
            f = obj.value(x)
            accepted_since_sync = 0
        trace.append(f)

    exact = obj.value(x)
    drift = abs(f - exact)

    if flavor == "hyper":
        if np.min(x) <= 0.0:
            raise NumericalError(
                f"hyper-ideal critical point has non-positive lengths {x}; "
                "this contradicts the positivity of critical points"
            )
        lengths = x
        assignment = angles_of_metric(c, lengths, "hyper")
        vol = float(
            sum(vol_hyper(c.tet_lengths(lengths, t), tol=opts.quad_tol) for t in range(c.n_tets))
        )
    else:
        lengths = gauge_project(c, x)
        assignment = angles_of_metric(c, lengths, "ideal")
        vol = float(sum(lobachevsky(v) for v in assignment.ravel()))

    achieved = cone_angles(c, assignment)
    return SolveResult(
        flavor=flavor,
        lengths=lengths,
        assignment=assignment,
        achieved_cone_angles=achieved,
        target_cone_angles=k,
        volume=vol,
        w_value=-exact,
        objective=exact,
        iterations=iterations,
        grad_norm=float(np.max(np.abs(r))),
        converged=True,
        objective_trace=trace,
        value_drift=drift,
    )


def max_volume_angles(c, k, flavor, opts=None):
    """The unique maximum-volume angle assignment with cone angles k.

    Returns (assignment, volume): the dihedral angles of the covolume
    minimizer and their total volume.
    """
    result = solve_metric(c, k, flavor, opts=opts)
    return result.assignment, result.volume


def duality_gap(c, k, result, samples, seed=0, spread=1.0):
    """Sampled check of the duality inequality <x, k> - cov(x) <= W(k).

    Draws `samples` points uniformly in a box of half-width `spread` around
    the solved metric and returns max(<x,k> - cov(x)) - W; convexity makes
    this nonpositive up to solve and quadrature tolerance.
    """
    _check_closed(c)
    k = _check_target(c, k)
    rng = np.random.default_rng(seed)
    base = np.asarray(result.lengths, dtype=float)
    best = -math.inf
    for _ in range(int(samples)):
        x = base + rng.uniform(-spread, spread, c.num_edges)
        v, _ = cov_complex(c, x, result.flavor)
        best = max(best, float(x @ k) - v)
    return best - result.w_value


def classify_maximizer(c, result, angle_tol=1e-7):
    """Per-tetrahedron structure of a converged maximizer.

    Realized tetrahedra have all angles positive; otherwise the angles must
    form the flat pattern (pi on one opposite pair, 0 elsewhere) and the
    lengths must certify the degeneration: the ideal flavor checks the
    collapsed side inequality, the hyper flavor that the lengths lie outside
    the hyper-ideal set.  Any other zero-angle pattern raises
    ConsistencyError, since the structure theorems exclude it for true
    maximizers.
    """
    verdicts = []
    for t in range(c.n_tets):
        lt = c.tet_lengths(result.lengths, t)
        if result.flavor == "ideal":
            quad = np.asarray(result.assignment[t])
            if np.min(quad) > angle_tol:
                verdicts.append(TetVerdict(t, "realized", float(np.min(quad))))
                continue
            pair = int(np.argmax(quad))
            pattern = (
                abs(quad[pair] - math.pi) <= angle_tol
                and all(quad[p] <= angle_tol for p in range(3) if p != pair)
            )
            if not pattern:
                raise ConsistencyError(
                    f"tetrahedron {t} has a zero angle without the flat pattern: {quad}"
                )
            sides = [math.exp(0.5 * (lt[p] + lt[q])) for p, q in PAIRS]
            others = [p for p in range(3) if p != pair]
            residual = sides[pair] - sides[others[0]] - sides[others[1]]
            if residual < -angle_tol:
                raise ConsistencyError(
                    f"flat tetrahedron {t} violates the collapsed side inequality "
                    f"(residual {residual})"
                )
            verdicts.append(TetVerdict(t, "flat_ideal", float(residual)))
        else:
            slot = np.asarray(result.assignment[t])
            cls = classify_lengths(lt, tol=angle_tol)
            if cls.is_hyper_ideal:
                if np.min(slot) <= angle_tol:
                    raise ConsistencyError(
                        f"tetrahedron {t} has a zero angle but hyper-ideal lengths: {slot}"
                    )
                verdicts.append(TetVerdict(t, "realized", float(np.min(slot))))
            else:
                residual = -1.0 - min(cls.phi[cls.pair], cls.phi[cls.pair + 3])
                verdicts.append(TetVerdict(t, "flat_hyper", float(residual)))
    return verdicts


def rigidity_check(c, k, flavor, starts=10, opts=None, seed=0, tolerance=1e-7):
    """Multi-start realization of the rigidity theorems.

    Runs solve_metric from `starts` random initial metrics and reports the
    maximum pairwise deviation of the resulting angle assignments and
    lengths (gauge-projected for the ideal flavor, raw for the hyper
    flavor).  A deviation above `tolerance` sets ok=False: rigidity says the
    minimizer is unique, so disagreement signals a solver problem.
    """
    opts = opts or SolveOptions()
    _check_closed(c)
    k = _check_target(c, k)
    report = feasibility(c, k, flavor, tol=opts.feasibility_tol)
    if not report.positive:
        raise NotPositiveFeasibleError(f"rigidity check needs a positive-feasible target, got {report.status}")
    rng = np.random.default_rng(seed)

    results = []
    for _ in range(starts):
        if flavor == "ideal":
            x0 = rng.uniform(-1.0, 1.0, c.num_edges)
            obj = _IdealObjective(c, k)
        else:
            x0 = rng.uniform(0.2, 3.0, c.num_edges)
            obj = _HyperObjective(c, k, opts.quad_tol)
        results.append(_descend(c, k, flavor, obj, x0, opts))

    max_angle = 0.0
    max_len = 0.0
    for i in range(len(results)):
        for j in range(i + 1, len(results)):
            max_angle = max(
                max_angle,
                float(np.max(np.abs(results[i].assignment - results[j].assignment))),
            )
            max_len = max(
                max_len,
                float(np.max(np.abs(results[i].lengths - results[j].lengths))),
            )
    return RigidityReport(
        ok=(max_angle <= tolerance and max_len <= tolerance),
        flavor=flavor,
        starts=starts,
        max_angle_deviation=max_angle,
        max_length_deviation=max_len,
        tolerance=tolerance,
        iterations=[r.iterations for r in results],
    )
