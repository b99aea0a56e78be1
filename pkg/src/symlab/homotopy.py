"""Total-degree homotopy continuation for square polynomial systems over C.

A target system F is connected to the start system ``x_i^{d_i} - g_i`` by
``H(x, t) = (1 - t) * gamma * G(x) + t * F(x)`` with a seeded random unit
``gamma`` so that paths avoid the real discriminant.  Paths are advanced with
an Euler predictor and Newton corrector, all paths of a run marching together
with individual adaptive steps.  Endpoints are Newton-refined at t = 1 and
clustered into solutions with multiplicities.

Endpoints at singular (multiple) roots cannot be refined to the tight
residual target; they are retained with a looser tolerance and a wider
cluster radius, and callers decide what to do with them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .qpoly import MPoly


class SolverUnreliableError(RuntimeError):
    """Too many paths lost for reasons other than divergence; reseed and retry."""


@dataclass(frozen=True)
class TrackerConfig:
    step_init: float = 0.1
    step_min: float = 1e-7
    newton_tol: float = 1e-10
    residual_tol: float = 1e-12
    real_tol: float = 1e-8
    cluster_radius: float = 1e-6
    seed: int = 0
    # Endpoints at multiple roots stall above residual_tol; accept them up to
    # this floor and report them as singular-quality.
    loose_tol: float = 1e-5
    step_max: float = 0.25
    divergence_bound: float = 1e10
    max_steps: int = 3000

    def __post_init__(self):
        if not (0 < self.step_min <= self.step_init <= 1):
            raise ValueError("need 0 < step_min <= step_init <= 1")
        for name in ("newton_tol", "residual_tol", "real_tol", "cluster_radius"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass
class CSolution:
    """One solution of a square system, with cluster metadata."""

    coordinates: tuple[complex, ...]
    residual: float
    multiplicity: int = 1
    is_real: bool = False
    conjugate_partner: Optional[int] = None
    singular: bool = False


@dataclass
class SolveResult:
    solutions: list[CSolution]
    bezout: int
    n_converged: int
    n_singular: int
    n_diverged: int
    n_failed: int
    # (previous, last) Newton residuals per accepted path, for convergence checks
    refine_tail: list[tuple[float, float]] = field(default_factory=list)

    def accounting_ok(self) -> bool:
        return self.n_converged + self.n_singular + self.n_diverged + self.n_failed == self.bezout


class CPolySystem:
    """Square system of sparse complex polynomials with fast batch evaluation."""

    def __init__(self, nvars: int, equations: Sequence[Sequence[tuple[complex, Sequence[int]]]]):
        if len(equations) != nvars:
            raise ValueError(f"square system required: {len(equations)} equations, {nvars} unknowns")
        self.nvars = nvars
        self.neq = len(equations)
        self.degrees = []
        exps_rows, coeffs, eq_of_term = [], [], []
        for i, eq in enumerate(equations):
            if not eq:
                raise ValueError(f"equation {i} is identically zero")
            deg = 0
            for c, e in eq:
                e = tuple(int(v) for v in e)
                if len(e) != nvars:
                    raise ValueError("exponent length mismatch")
                exps_rows.append(e)
                coeffs.append(complex(c))
                eq_of_term.append(i)
                deg = max(deg, sum(e))
            if deg < 1:
                raise ValueError(f"equation {i} must have degree >= 1")
            self.degrees.append(deg)
        self._exps = np.array(exps_rows, dtype=np.int64)
        self._coeffs = np.array(coeffs, dtype=complex)
        self._scatter = np.zeros((len(coeffs), self.neq))
        self._scatter[np.arange(len(coeffs)), eq_of_term] = 1.0
        # derivative term tables, scattered into (equation, variable) slots
        dexps, dcoeffs, slot = [], [], []
        for row, (c, i) in enumerate(zip(coeffs, eq_of_term)):
            for j in range(nvars):
                e = exps_rows[row]
                if e[j] == 0:
                    continue
                dexps.append(e[:j] + (e[j] - 1,) + e[j + 1 :])
                dcoeffs.append(c * e[j])
                slot.append(i * nvars + j)
        self._dexps = np.array(dexps, dtype=np.int64) if dexps else np.zeros((0, nvars), dtype=np.int64)
        self._dcoeffs = np.array(dcoeffs, dtype=complex)
        self._dscatter = np.zeros((len(dcoeffs), self.neq * nvars))
        if dcoeffs:
            self._dscatter[np.arange(len(dcoeffs)), slot] = 1.0
        self._maxdeg = int(self._exps.max()) if self._exps.size else 0

    @staticmethod
    def from_mpolys(polys: Sequence[MPoly], normalize: bool = True) -> "CPolySystem":
        """Build from exact polynomials.

        With ``normalize`` each equation is divided by its largest coefficient
        magnitude, which keeps the target commensurate with the unit-scale
        start system; residual tolerances then refer to the scaled equations.
        """
        nvars = polys[0].nvars
        eqs = []
        for p in polys:
            if p.nvars != nvars:
                raise ValueError("variable-count mismatch across equations")
            terms = [(complex(c), e) for e, c in p.sorted_terms()]
            if normalize and terms:
                scale = max(abs(c) for c, _ in terms)
                terms = [(c / scale, e) for c, e in terms]
            eqs.append(terms)
        return CPolySystem(nvars, eqs)

    def _monomials(self, x: np.ndarray, exps: np.ndarray) -> np.ndarray:
        # x: (P, n) -> monomial values (P, T) via per-variable power tables
        p = x.shape[0]
        if exps.shape[0] == 0:
            return np.zeros((p, 0), dtype=complex)
        out = np.ones((p, exps.shape[0]), dtype=complex)
        for j in range(self.nvars):
            col = exps[:, j]
            top = int(col.max()) if col.size else 0
            if top == 0:
                continue
            table = np.empty((p, top + 1), dtype=complex)
            table[:, 0] = 1.0
            for d in range(1, top + 1):
                table[:, d] = table[:, d - 1] * x[:, j]
            out *= table[:, col]
        return out

    def eval(self, x: np.ndarray) -> np.ndarray:
        """Values at a batch of points; x has shape (P, n), result (P, n)."""
        mon = self._monomials(np.atleast_2d(x), self._exps)
        return (mon * self._coeffs) @ self._scatter

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(x)
        mon = self._monomials(x, self._dexps)
        flat = (mon * self._dcoeffs) @ self._dscatter
        return flat.reshape(x.shape[0], self.neq, self.nvars)

    def residual(self, x: np.ndarray) -> np.ndarray:
        return np.max(np.abs(self.eval(x)), axis=1)


def start_system(system: CPolySystem, rng: np.random.Generator):
    """Start equations ``x_i^{d_i} - g_i`` and their full root grid.

    The g_i are seeded random points on the unit circle; the number of start
    solutions is the Bezout number (product of the degrees).
    """
    degs = system.degrees
    gammas = np.exp(2j * np.pi * rng.random(len(degs)))
    axis_roots = []
    for d, g in zip(degs, gammas):
        base = g ** (1.0 / d)
        axis_roots.append(base * np.exp(2j * np.pi * np.arange(d) / d))
    grids = np.meshgrid(*axis_roots, indexing="ij")
    starts = np.stack([g.ravel() for g in grids], axis=1)
    return gammas, starts


def _safe_solve(a: np.ndarray, b: np.ndarray):
    """Batched linear solve that flags singular rows instead of raising."""
    ok = np.isfinite(a).all(axis=(1, 2)) & np.isfinite(b).all(axis=1)
    sol = np.zeros_like(b)
    rhs = b[..., None]
    if ok.any():
        try:
            sol[ok] = np.linalg.solve(a[ok], rhs[ok])[..., 0]
        except np.linalg.LinAlgError:
            for i in np.nonzero(ok)[0]:
                try:
                    sol[i] = np.linalg.solve(a[i], rhs[i])[..., 0]
                except np.linalg.LinAlgError:
                    ok[i] = False
    bad = ~np.isfinite(sol).all(axis=1)
    ok &= ~bad
    return sol, ok


_ACTIVE, _AT_TARGET, _DIVERGED, _FAILED = 0, 1, 2, 3


def track_all(system: CPolySystem, cfg: TrackerConfig, rng: np.random.Generator):
    """Track every total-degree path to t = 1.

    Returns endpoint coordinates, a status array, and the per-path step
    counts.  Paths whose step size collapses in the endgame region keep
    their current iterate for the final Newton refinement; mid-path collapse
    and norm blowup are flagged as divergence.
    """
    degs = np.array(system.degrees)
    gammas, x = start_system(system, rng)
    blend = np.exp(2j * np.pi * rng.random())
    npaths = x.shape[0]

    def g_eval(pts):
        return pts**degs[None, :] - gammas[None, :]

    def g_jac(pts):
        jac = np.zeros((pts.shape[0], system.neq, system.nvars), dtype=complex)
        idx = np.arange(system.neq)
        jac[:, idx, idx] = degs[None, :] * pts ** np.maximum(degs[None, :] - 1, 0)
        return jac

    def h_eval(pts, tt):
        return (1 - tt)[:, None] * blend * g_eval(pts) + tt[:, None] * system.eval(pts)

    def h_jac(pts, tt):
        return (1 - tt)[:, None, None] * blend * g_jac(pts) + tt[:, None, None] * system.jacobian(pts)

    t = np.zeros(npaths)
    h = np.full(npaths, cfg.step_init)
    status = np.full(npaths, _ACTIVE, dtype=int)
    streak = np.zeros(npaths, dtype=int)
    steps = np.zeros(npaths, dtype=int)

    while True:
        act = np.nonzero(status == _ACTIVE)[0]
        if act.size == 0:
            break
        xa, ta = x[act], t[act]
        ha = np.minimum(h[act], 1.0 - ta)
        # Euler predictor along dH/dt = F - blend*G
        jac, ok = _safe_solve(h_jac(xa, ta), -(system.eval(xa) - blend * g_eval(xa)))
        xp = np.where(ok[:, None], xa + ha[:, None] * jac, xa)
        # Newton corrector at t + h
        t1 = ta + ha
        good = ok.copy()
        xc = xp.copy()
        for _ in range(3):
            dx, sok = _safe_solve(h_jac(xc, t1), -h_eval(xc, t1))
            good &= sok
            xc = np.where(good[:, None], xc + dx, xc)
            move = np.max(np.abs(dx), axis=1)
            close = move <= cfg.newton_tol * (1.0 + np.max(np.abs(xc), axis=1))
            if np.all(close | ~good):
                break
        converged = good & close

        steps[act] += 1
        succ = act[converged]
        fail = act[~converged]
        x[succ] = xc[converged]
        t[succ] = t1[converged]
        streak[succ] += 1
        grow = succ[streak[succ] >= 3]
        h[grow] = np.minimum(h[grow] * 2.0, cfg.step_max)
        h[fail] *= 0.5
        streak[fail] = 0

        arrived = succ[t[succ] >= 1.0 - 1e-14]
        status[arrived] = _AT_TARGET
        blown = act[np.max(np.abs(x[act]), axis=1) > cfg.divergence_bound]
        status[blown] = _DIVERGED
        dead = fail[h[fail] < cfg.step_min]
        if dead.size:
            endgame = dead[t[dead] > 0.999]
            status[endgame] = _AT_TARGET
            status[np.setdiff1d(dead, endgame)] = _DIVERGED
        exhausted = act[steps[act] > cfg.max_steps]
        status[exhausted[status[exhausted] == _ACTIVE]] = _FAILED

    return x, status, steps


def _refine(system: CPolySystem, x: np.ndarray, cfg: TrackerConfig, iters: int = 60):
    """Damped Newton refinement at t = 1; returns points, residuals, last two.

    Full steps are tried first; on residual increase the step is halved a few
    times before the point is declared stalled.
    """
    pts = x.copy()
    res = system.residual(pts)
    prev = res.copy()
    stalled = np.zeros(len(pts), dtype=bool)
    for _ in range(iters):
        live = (res > 0.1 * cfg.residual_tol) & ~stalled
        if not live.any():
            break
        dx, ok = _safe_solve(system.jacobian(pts[live]), -system.eval(pts[live]))
        dx = np.where(ok[:, None], dx, 0)
        ids = np.nonzero(live)[0]
        best = pts[live].copy()
        best_res = res[live].copy()
        improved = np.zeros(len(ids), dtype=bool)
        lam = 1.0
        for _ in range(6):
            cand = pts[live] + lam * dx
            cand_res = system.residual(cand)
            better = cand_res < best_res
            best[better] = cand[better]
            best_res[better] = cand_res[better]
            improved |= better
            if improved.all():
                break
            lam *= 0.5
        prev[ids[improved]] = res[ids[improved]]
        pts[ids] = best
        res[ids] = best_res
        stalled[ids[~improved]] = True
    return pts, res, prev


def _cluster(points: np.ndarray, radius: float) -> list[list[int]]:
    """Greedy union of points within a scale-aware radius; indices per cluster."""
    n = points.shape[0]
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            scale = 1.0 + max(np.max(np.abs(points[i])), np.max(np.abs(points[j])))
            if np.max(np.abs(points[i] - points[j])) < radius * scale:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def tag_reality(solutions: list[CSolution], real_tol: float) -> None:
    """Mark real solutions and pair complex conjugates in place."""
    coords = [np.array(s.coordinates) for s in solutions]
    for s, c in zip(solutions, coords):
        scale = 1.0 + np.max(np.abs(c)) if c.size else 1.0
        s.is_real = bool(np.max(np.abs(c.imag)) < real_tol * scale) if c.size else True
        s.conjugate_partner = None
    for i, ci in enumerate(coords):
        if solutions[i].is_real or solutions[i].conjugate_partner is not None:
            continue
        for j in range(i + 1, len(coords)):
            if solutions[j].is_real or solutions[j].conjugate_partner is not None:
                continue
            scale = 1.0 + max(np.max(np.abs(ci)), np.max(np.abs(coords[j])))
            if np.max(np.abs(np.conj(ci) - coords[j])) < 1e-8 * scale:
                solutions[i].conjugate_partner = j
                solutions[j].conjugate_partner = i
                break


class PolyBatch:
    """Batch evaluator for a (not necessarily square) list of polynomials.

    Coefficients are scaled per polynomial to unit max magnitude so residuals
    are comparable across systems with large integer coefficients.
    """

    def __init__(self, polys: Sequence[MPoly]):
        self.nvars = polys[0].nvars
        self.npolys = len(polys)
        exps_rows, coeffs, idx = [], [], []
        for i, p in enumerate(polys):
            if p.nvars != self.nvars:
                raise ValueError("variable-count mismatch")
            terms = p.sorted_terms()
            scale = max((abs(complex(c)) for _, c in terms), default=1.0) or 1.0
            for e, c in terms:
                exps_rows.append(e)
                coeffs.append(complex(c) / scale)
                idx.append(i)
        self._exps = np.array(exps_rows, dtype=np.int64) if exps_rows else np.zeros((0, self.nvars), dtype=np.int64)
        self._coeffs = np.array(coeffs, dtype=complex)
        self._scatter = np.zeros((len(coeffs), self.npolys))
        if coeffs:
            self._scatter[np.arange(len(coeffs)), idx] = 1.0

    def eval(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=complex))
        p = x.shape[0]
        if self._exps.shape[0] == 0:
            return np.zeros((p, self.npolys))
        mon = np.ones((p, self._exps.shape[0]), dtype=complex)
        for j in range(self.nvars):
            col = self._exps[:, j]
            top = int(col.max()) if col.size else 0
            if top == 0:
                continue
            table = np.empty((p, top + 1), dtype=complex)
            table[:, 0] = 1.0
            for d in range(1, top + 1):
                table[:, d] = table[:, d - 1] * x[:, j]
            mon *= table[:, col]
        return (mon * self._coeffs) @ self._scatter

    def residual(self, x: np.ndarray) -> np.ndarray:
        return np.max(np.abs(self.eval(x)), axis=1)


def normalize_projective(z: np.ndarray) -> np.ndarray:
    """Scale so the coordinate of largest modulus becomes exactly 1.

    Ties prefer the lowest index, which keeps conjugate pairs aligned.
    """
    z = np.asarray(z, dtype=complex)
    mags = np.abs(z)
    top = mags.max()
    if top == 0.0:
        raise ValueError("cannot normalize the zero vector")
    lead = int(np.nonzero(mags >= top * (1.0 - 1e-9))[0][0])
    return z / z[lead]


def projective_distance(z: np.ndarray, w: np.ndarray) -> float:
    """Sine of the principal angle between the lines spanned by z and w."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    nz, nw = np.linalg.norm(z), np.linalg.norm(w)
    if nz == 0.0 or nw == 0.0:
        return 1.0
    c = abs(np.vdot(z, w)) / (nz * nw)
    return float(np.sqrt(max(0.0, 1.0 - min(1.0, c) ** 2)))


@dataclass
class ProjPoint:
    """A projective solution merged across affine charts."""

    z: np.ndarray
    residual: float
    multiplicity: int
    tight: bool
    is_real: bool = False
    conjugate_partner: Optional[int] = None


@dataclass
class ProjSolveResult:
    points: list[ProjPoint]
    chart_stats: list[dict]

    def total(self, key: str) -> int:
        return sum(s[key] for s in self.chart_stats)


def _child_seed(rng: np.random.Generator) -> int:
    return int(rng.integers(0, 2**31 - 1))


def solve_projective(
    polys: Sequence[MPoly],
    n_combos: int,
    filter_polys: Sequence[MPoly],
    cfg: TrackerConfig,
    seed: int,
    slice_vec: Optional[np.ndarray] = None,
    n_charts: int = 2,
) -> ProjSolveResult:
    """Zero-dimensional projective solve via a randomized square subsystem.

    Takes ``n_combos`` seeded random integer combinations of ``polys``, adds
    an optional hyperplane slice and a random affine chart ``c . x = 1``, and
    tracks the resulting square system in ``n_charts`` independent charts.
    Endpoints are merged projectively; the attached residual is the max over
    ``filter_polys`` (coefficient-normalized) at the normalized point, so
    extraneous zeros of the combinations can be discarded by the caller.
    """
    nvars = polys[0].nvars
    rng = np.random.default_rng(seed)
    combos = rng.integers(-99, 100, size=(n_combos, len(polys)))
    while np.any(~combos.any(axis=1)):
        combos = rng.integers(-99, 100, size=(n_combos, len(polys)))
    combo_polys = []
    for row in combos:
        acc = MPoly.zero(nvars)
        for c, p in zip(row, polys):
            if c:
                acc = acc + p.scale(int(c))
        if acc.is_zero():
            raise SolverUnreliableError("random combination collapsed to zero; reseed")
        combo_polys.append(acc)
    base_eqs = [
        [(complex(c), e) for e, c in p.sorted_terms()] for p in combo_polys
    ]
    scale = [max(abs(c) for c, _ in eq) for eq in base_eqs]
    base_eqs = [[(c / s, e) for c, e in eq] for eq, s in zip(base_eqs, scale)]
    if slice_vec is not None:
        sl = np.asarray(slice_vec, dtype=float)
        base_eqs.append(
            [(complex(v), tuple(1 if j == i else 0 for j in range(nvars))) for i, v in enumerate(sl) if v]
        )
    fbatch = PolyBatch(filter_polys)
    merged: list[ProjPoint] = []
    stats = []
    for _ in range(n_charts):
        chart = rng.standard_normal(nvars)
        eqs = list(base_eqs)
        chart_eq = [(complex(v), tuple(1 if j == i else 0 for j in range(nvars))) for i, v in enumerate(chart)]
        chart_eq.append((complex(-1.0), (0,) * nvars))
        eqs.append(chart_eq)
        system = CPolySystem(nvars, eqs)
        result = solve(system, TrackerConfig(**{**cfg.__dict__, "seed": _child_seed(rng)}))
        stats.append(
            {
                "bezout": result.bezout,
                "n_converged": result.n_converged,
                "n_singular": result.n_singular,
                "n_diverged": result.n_diverged,
                "n_failed": result.n_failed,
            }
        )
        # merge projectively inside the chart first (multiplicities add: the
        # affine clustering can fragment a multiple point), then across
        # charts, where the same point is just seen again (take the max).
        chart_pts: list[ProjPoint] = []
        for s in result.solutions:
            z = normalize_projective(np.array(s.coordinates))
            res = float(fbatch.residual(z[None, :])[0])
            radius = 1e-6 if not s.singular else 1e-3
            for q in chart_pts:
                if projective_distance(z, q.z) < max(radius, 1e-6 if q.tight else 1e-3):
                    if res < q.residual:
                        q.z, q.residual = z, res
                    q.tight = q.tight or not s.singular
                    q.multiplicity += s.multiplicity
                    break
            else:
                chart_pts.append(ProjPoint(z=z, residual=res, multiplicity=s.multiplicity, tight=not s.singular))
        for p in chart_pts:
            for q in merged:
                radius = 1e-6 if (p.tight and q.tight) else 1e-3
                if projective_distance(p.z, q.z) < radius:
                    if p.residual < q.residual:
                        q.z, q.residual = p.z, p.residual
                    q.tight = q.tight or p.tight
                    q.multiplicity = max(q.multiplicity, p.multiplicity)
                    break
            else:
                merged.append(p)
    merged.sort(key=lambda p: tuple((round(v.real, 10), round(v.imag, 10)) for v in p.z))
    for p in merged:
        p.is_real = bool(np.max(np.abs(p.z.imag)) < cfg.real_tol)
    for i, p in enumerate(merged):
        if p.is_real or p.conjugate_partner is not None:
            continue
        for j in range(i + 1, len(merged)):
            q = merged[j]
            if q.is_real or q.conjugate_partner is not None:
                continue
            if projective_distance(np.conj(p.z), q.z) < 1e-6:
                p.conjugate_partner = j
                q.conjugate_partner = i
                break
    return ProjSolveResult(points=merged, chart_stats=stats)


def solve(system: CPolySystem, cfg: TrackerConfig) -> SolveResult:
    """Track all Bezout paths, refine, cluster, and tag solutions.

    Deterministic for a fixed config: the only randomness is drawn from the
    seeded generator.  Raises SolverUnreliableError when more than 20% of
    the paths are lost without a divergence flag.
    """
    rng = np.random.default_rng(cfg.seed)
    ends, status, _ = track_all(system, cfg, rng)
    bezout = int(np.prod(system.degrees))

    at_target = np.nonzero(status == _AT_TARGET)[0]
    refined = ends.copy()
    res = np.full(len(ends), np.inf)
    tails: list[tuple[float, float]] = []
    if at_target.size:
        pts, r, prev = _refine(system, ends[at_target], cfg)
        refined[at_target] = pts
        res[at_target] = r
        tails = [(float(p), float(q)) for p, q in zip(prev, r)]

    tight = at_target[res[at_target] < cfg.residual_tol]
    loose = at_target[(res[at_target] >= cfg.residual_tol) & (res[at_target] < cfg.loose_tol)]
    lost = at_target[res[at_target] >= cfg.loose_tol]
    big = np.max(np.abs(refined[lost]), axis=1) > 1e8 if lost.size else np.array([], dtype=bool)
    n_diverged = int(np.sum(status == _DIVERGED)) + int(np.sum(big))
    n_failed = int(np.sum(status == _FAILED)) + int(lost.size - np.sum(big))

    if n_failed > 0.2 * bezout:
        raise SolverUnreliableError(
            f"{n_failed} of {bezout} paths lost without divergence; rerun with a fresh seed"
        )

    solutions: list[CSolution] = []
    for ids, singular, radius in (
        (tight, False, cfg.cluster_radius),
        (loose, True, max(cfg.cluster_radius, 1e-3)),
    ):
        if ids.size == 0:
            continue
        for group in _cluster(refined[ids], radius):
            members = ids[np.array(group)]
            center = refined[members].mean(axis=0)
            solutions.append(
                CSolution(
                    coordinates=tuple(center),
                    residual=float(system.residual(center[None, :])[0]),
                    multiplicity=len(members),
                    singular=singular,
                )
            )
    solutions.sort(key=lambda s: tuple((round(z.real, 12), round(z.imag, 12)) for z in s.coordinates))
    tag_reality(solutions, cfg.real_tol)
    return SolveResult(
        solutions=solutions,
        bezout=bezout,
        n_converged=int(tight.size),
        n_singular=int(loose.size),
        n_diverged=n_diverged,
        n_failed=n_failed,
        refine_tail=tails,
    )
