"""Rank-stratified singularity census of a quartic symmetroid.

Given a pencil A(x), the surface det A(x) = 0 is singular at every point
where rank A drops to 2 or below, and possibly at rank-3 points forced by
basepoints of the associated web of quadrics.  This module enumerates

* isolated rank-1 points (triple points of the surface),
* isolated rank-2 points (nodes), with reality and definiteness,
* curves of rank-2 points (lines and conics), located by randomized
  hyperplane slicing of the 3x3-minor system,
* curves of rank-3 singular points (conjugate line pairs), via the same
  slicing applied to the gradient system,
* the singular points forced by web basepoints (isolated ones are tacnodes,
  one-dimensional families are the rank-3 lines).

Solver endpoints near a known special point are absorbed into that point
rather than reported as nodes: multiple points smear endpoint coordinates
far beyond the working precision of simple roots, and the special points
themselves are recovered by exact-ish linear algebra instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import homotopy as ht
from .qpoly import MPoly
from .symmat import (
    BasepointResult,
    DegenerateInputError,
    Pencil,
    Signature,
    det_pencil,
    eval_pencil_numeric,
    gradient,
    minors,
    numeric_rank,
    signature_numeric,
    web_basepoints,
)


@dataclass(frozen=True)
class CensusConfig:
    tracker: ht.TrackerConfig = ht.TrackerConfig()
    residual_accept: float = 1e-8
    # certifying a fitted curve (witnesses are simple zeros, precise)
    curve_tol: float = 1e-6
    # absorbing endpoints into a curve: on-curve endpoints sit at singular
    # Jacobians and carry more coordinate fuzz than simple roots
    curve_member_tol: float = 1e-4
    special_radius: float = 1e-3
    rank_rel_tol: float = 1e-7
    signature_tol: float = 1e-6
    max_reseeds: int = 3


@dataclass
class NodeRecord:
    """An isolated low-rank point of the pencil, projectively normalized."""

    point: np.ndarray
    rank: int
    is_real: bool
    residual: float
    multiplicity: int = 1
    signature: Optional[Signature] = None
    on_boundary: Optional[bool] = None
    conjugate_partner: Optional[int] = None

    def brief(self) -> dict:
        return {
            "point": [[float(v.real), float(v.imag)] for v in self.point],
            "rank": self.rank,
            "is_real": self.is_real,
            "residual": self.residual,
            "multiplicity": self.multiplicity,
            "signature": None
            if self.signature is None
            else [self.signature.n_plus, self.signature.n_minus, self.signature.n_zero],
            "on_boundary": self.on_boundary,
        }


@dataclass
class CurveRecord:
    """A one-dimensional component of the singular locus."""

    kind: str  # "line" | "conic" | "other"
    rank_along: int
    witness_points: list[np.ndarray] = field(default_factory=list)
    # line data: orthonormal rows spanning the 2-dim linear subspace of C^4
    line_basis: Optional[np.ndarray] = None
    line_is_real: Optional[bool] = None
    # conic data
    plane: Optional[np.ndarray] = None
    conic_matrix: Optional[np.ndarray] = None
    conic_has_real_points: Optional[bool] = None
    conic_on_boundary: Optional[bool] = None

    def contains(self, z: np.ndarray, tol: float) -> bool:
        z = np.asarray(z, dtype=complex)
        zn = z / np.linalg.norm(z)
        if self.kind == "line" and self.line_basis is not None:
            proj = self.line_basis.conj() @ zn
            return bool(np.linalg.norm(zn - self.line_basis.T @ proj) < tol)
        if self.kind == "conic" and self.plane is not None:
            if abs(self.plane @ zn) >= tol:
                return False
            basis = _plane_basis(self.plane)
            u = basis @ zn
            val = u @ self.conic_matrix @ u
            return bool(abs(val) < max(tol, 1e3 * tol * np.linalg.norm(u) ** 2))
        if self.witness_points:
            return any(ht.projective_distance(z, w) < 1e-3 for w in self.witness_points)
        return False

    def brief(self) -> dict:
        return {
            "kind": self.kind,
            "rank_along": self.rank_along,
            "is_real_line": self.line_is_real,
            "conic_has_real_points": self.conic_has_real_points,
            "conic_on_boundary": self.conic_on_boundary,
            "n_witnesses": len(self.witness_points),
        }


@dataclass
class SpecialPoint:
    """Distinguished singular point handled outside the node census."""

    point: np.ndarray
    label: str  # "rank1" | "basepoint"
    rank: int
    is_real: bool
    absorbed_paths: int = 0
    signature: Optional[Signature] = None


@dataclass
class Accounting:
    chart_stats: list[dict] = field(default_factory=list)
    n_isolated: int = 0
    n_curve_absorbed: int = 0
    n_special_absorbed: int = 0
    n_extraneous: int = 0


@dataclass
class Rank2Result:
    isolated: list[NodeRecord]
    curve: Optional[CurveRecord]
    accounting: Accounting


@dataclass
class Rank3Result:
    isolated: list[NodeRecord]
    curves: list[CurveRecord]
    accounting: Accounting


class PencilContext:
    """Caches the exact polynomial data attached to one pencil."""

    def __init__(self, pencil: Pencil):
        self.pencil = pencil
        self.f = det_pencil(pencil)
        if self.f.is_zero():
            raise DegenerateInputError("determinant vanishes identically")
        if self.f.homogeneous_degree() != 4:
            raise DegenerateInputError("determinant is not a quartic")
        self.grad = gradient(self.f)
        self.minors3 = minors(pencil, 3)
        self.minors2 = minors(pencil, 2)
        self.grad_batch = ht.PolyBatch(self.grad)
        self.minors3_batch = ht.PolyBatch(self.minors3)
        self.minors2_batch = ht.PolyBatch(self.minors2)

    def rank_at(self, z: np.ndarray, rel_tol: float) -> int:
        return numeric_rank(eval_pencil_numeric(self.pencil, z), rel_tol)

    def signature_at(self, z: np.ndarray, tol: float) -> Signature:
        mat = eval_pencil_numeric(self.pencil, np.real(z)).real
        return signature_numeric(mat, tol)


def _plane_basis(normal: np.ndarray) -> np.ndarray:
    """Orthonormal rows spanning the real plane with the given normal."""
    n = np.asarray(normal, dtype=float)
    n = n / np.linalg.norm(n)
    full = np.vstack([n, np.eye(4)])
    q, _ = np.linalg.qr(full.T)
    return q[:, 1:4].T


def _pair_conjugates(records: list[NodeRecord]) -> None:
    for i, r in enumerate(records):
        r.conjugate_partner = None
    for i, r in enumerate(records):
        if r.is_real or r.conjugate_partner is not None:
            continue
        for j in range(i + 1, len(records)):
            s = records[j]
            if s.is_real or s.conjugate_partner is not None:
                continue
            if ht.projective_distance(np.conj(r.point), s.point) < 1e-6:
                r.conjugate_partner = j
                s.conjugate_partner = i
                break


# ---------------------------------------------------------------------------
# special points from web basepoints


def basepoint_singular_loci(
    ctx: PencilContext, basepoints: BasepointResult, cfg: CensusConfig
) -> tuple[list[SpecialPoint], list[CurveRecord]]:
    """Loci where some web quadric is singular at a basepoint.

    For a basepoint y the condition A(x) . y = 0 is linear in x; its
    solution set is a point (an isolated non-node singularity of the
    surface, a tacnode when the web has two simple basepoints) or a line
    (along which the pencil has rank 3).
    """
    stack = ctx.pencil.as_float_stack()
    points: list[SpecialPoint] = []
    lines: list[CurveRecord] = []
    for bp in basepoints.points:
        y = bp.z
        lin = np.stack([stack[j] @ y for j in range(4)], axis=1)  # rows: (A(x) y)_k
        _, svals, vh = np.linalg.svd(lin)
        scale = svals[0] if svals[0] > 0 else 1.0
        # basepoints of a length-two scheme carry ~1e-7 coordinate fuzz, so
        # the null-direction threshold must sit well above that
        nullity = int(np.sum(svals < 1e-4 * scale))
        if nullity == 1:
            z = ht.normalize_projective(vh[-1].conj())
            if all(ht.projective_distance(z, p.point) >= 1e-8 for p in points):
                is_real = bool(np.max(np.abs(z.imag)) < cfg.tracker.real_tol)
                sp = SpecialPoint(
                    point=z,
                    label="basepoint",
                    rank=ctx.rank_at(z, 1e-5),
                    is_real=is_real,
                )
                if is_real:
                    sp.signature = ctx.signature_at(z, cfg.signature_tol)
                points.append(sp)
        elif nullity == 2:
            basis = vh[2:4].conj()
            # two fitted lines agree only when both principal angles vanish;
            # intersecting conjugate lines share one direction, so test the
            # smallest singular value of the overlap matrix
            def _same_span(b1, b2):
                s = np.linalg.svd(b1.conj() @ b2.T, compute_uv=False)
                return s[-1] > 1 - 1e-6
            if all(cr.line_basis is None or not _same_span(basis, cr.line_basis) for cr in lines):
                wits = [ht.normalize_projective(basis[0] + t * basis[1]) for t in (0.3, 1.7)]
                rank_w = [ctx.rank_at(w, 1e-6) for w in wits]
                lines.append(
                    CurveRecord(
                        kind="line",
                        rank_along=max(rank_w),
                        witness_points=wits,
                        line_basis=basis,
                        line_is_real=_span_is_real(basis),
                    )
                )
    return points, lines


def _span_is_real(basis: np.ndarray) -> bool:
    stacked = np.vstack([basis, np.conj(basis)])
    s = np.linalg.svd(stacked, compute_uv=False)
    return bool(s[2] < 1e-6 * s[0])


# ---------------------------------------------------------------------------
# rank-1 census


def rank1_points(ctx: PencilContext, seed: int = 0, cfg: CensusConfig = CensusConfig()) -> list[NodeRecord]:
    """Isolated rank-1 points of the pencil (triple points of the surface)."""
    rng = np.random.default_rng([seed, 101])
    probe = ht.solve_projective(
        ctx.minors2,
        2,
        ctx.minors2,
        cfg.tracker,
        int(rng.integers(2**31)),
        slice_vec=rng.standard_normal(4),
        n_charts=1,
    )
    if any(p.residual < cfg.residual_accept for p in probe.points):
        raise DegenerateInputError("pencil has a curve of rank-1 points")
    run = ht.solve_projective(ctx.minors2, 3, ctx.minors2, cfg.tracker, int(rng.integers(2**31)), n_charts=2)
    out: list[NodeRecord] = []
    for p in run.points:
        if p.residual >= cfg.residual_accept:
            continue
        rank = ctx.rank_at(p.z, 1e-5)
        if rank != 1:
            continue
        rec = NodeRecord(
            point=p.z,
            rank=1,
            is_real=p.is_real,
            residual=p.residual,
            multiplicity=p.multiplicity,
        )
        if p.is_real:
            rec.signature = ctx.signature_at(p.z, cfg.signature_tol)
            rec.on_boundary = rec.signature.is_semidefinite
        out.append(rec)
    _pair_conjugates(out)
    return out


# ---------------------------------------------------------------------------
# curve probes


def _slice_witnesses(polys: Sequence[MPoly], cfg: CensusConfig, rng: np.random.Generator):
    """Witness points of the positive-dimensional part on one random slice."""
    slice_vec = rng.standard_normal(4)
    run = ht.solve_projective(
        polys, 2, polys, cfg.tracker, int(rng.integers(2**31)), slice_vec=slice_vec, n_charts=2
    )
    return [p for p in run.points if p.residual < cfg.residual_accept and p.tight]


def _fit_line_from_witnesses(witnesses: list[np.ndarray], fbatch: ht.PolyBatch, tol: float):
    """Orthonormal span basis through witnesses, or None if they do not line up.

    The row space of the stacked witnesses is the candidate 2-dim subspace;
    membership of fresh combinations in the variety certifies the fit.
    """
    w = np.stack([z / np.linalg.norm(z) for z in witnesses])
    _, svals, vh = np.linalg.svd(w)
    if len(witnesses) >= 3 and svals[2] > 1e-6 * svals[0]:
        return None
    basis = vh[:2]
    for t in (0.37, -0.61, 2.13):
        z = basis[0] + t * basis[1]
        if float(fbatch.residual(ht.normalize_projective(z)[None, :])[0]) > tol:
            return None
    return basis


def _fit_conic(witnesses: list[np.ndarray]):
    """Real plane and 3x3 real symmetric conic matrix through the witnesses.

    Returns (plane, conic_matrix, ok).  The plane is the least-squares real
    null vector of the stacked real and imaginary witness parts; the conic
    matrix is phase-normalized and must come out real.
    """
    w = np.stack([z / np.linalg.norm(z) for z in witnesses])
    stacked = np.vstack([w.real, w.imag])
    _, svals, vh = np.linalg.svd(stacked)
    if svals[3] > 1e-6 * svals[0]:
        return None, None, False
    plane = vh[-1]
    basis = _plane_basis(plane)
    u = w @ basis.T  # witnesses in plane coordinates
    rows = []
    for uu in u:
        a, b, c = uu
        rows.append([a * a, 2 * a * b, 2 * a * c, b * b, 2 * b * c, c * c])
    rows = np.array(rows)
    _, svals, vh = np.linalg.svd(rows)
    coef = vh[-1]
    lead = coef[np.argmax(np.abs(coef))]
    coef = coef / lead
    if np.max(np.abs(coef.imag)) > 1e-6:
        return None, None, False
    coef = coef.real
    q = np.array(
        [
            [coef[0], coef[1], coef[2]],
            [coef[1], coef[3], coef[4]],
            [coef[2], coef[4], coef[5]],
        ]
    )
    return plane, q, True


def _probe_rank2_curve(ctx: PencilContext, seed: int, cfg: CensusConfig) -> Optional[CurveRecord]:
    """Detect a curve of rank-2 points by slicing the 3x3-minor system."""
    for attempt in range(cfg.max_reseeds):
        rng = np.random.default_rng([seed, 201, attempt])
        sets = [_slice_witnesses(ctx.minors3, cfg, rng) for _ in range(2)]
        counts = [len(s) for s in sets]
        if counts[0] != counts[1]:
            continue
        count = counts[0]
        if count == 0:
            return None
        witnesses = [p.z for s in sets for p in s]
        if count == 1:
            basis = _fit_line_from_witnesses(witnesses, ctx.minors3_batch, cfg.curve_tol)
            if basis is None:
                continue
            return CurveRecord(
                kind="line",
                rank_along=2,
                witness_points=witnesses,
                line_basis=basis,
                line_is_real=_span_is_real(basis),
            )
        if count == 2:
            third = _slice_witnesses(ctx.minors3, cfg, rng)
            if len(third) != 2:
                continue
            witnesses = witnesses + [p.z for p in third]
            plane, q, ok = _fit_conic(witnesses)
            if not ok:
                continue
            evals = np.abs(np.linalg.eigvalsh(q))
            qrank = int(np.sum(evals > 1e-6 * evals.max()))
            return CurveRecord(
                kind="conic" if qrank == 3 else "other",
                rank_along=2,
                witness_points=witnesses,
                plane=plane,
                conic_matrix=q,
            )
        return CurveRecord(kind="other", rank_along=2, witness_points=witnesses)
    raise ht.SolverUnreliableError("slice witness counts kept disagreeing for the rank-2 curve probe")


def _probe_rank3_curves(ctx: PencilContext, seed: int, cfg: CensusConfig) -> list[CurveRecord]:
    """Detect curves of rank-3 singular points by slicing the gradient system."""
    for attempt in range(cfg.max_reseeds):
        rng = np.random.default_rng([seed, 301, attempt])
        sets = []
        for _ in range(2):
            ws = _slice_witnesses(ctx.grad, cfg, rng)
            sets.append([p for p in ws if ctx.rank_at(p.z, 1e-6) == 3])
        counts = [len(s) for s in sets]
        if counts[0] != counts[1]:
            continue
        count = counts[0]
        if count == 0:
            return []
        if count == 1:
            witnesses = [sets[0][0].z, sets[1][0].z]
            basis = _fit_line_from_witnesses(witnesses, ctx.grad_batch, cfg.curve_tol)
            if basis is None:
                continue
            return [
                CurveRecord(
                    kind="line",
                    rank_along=3,
                    witness_points=witnesses,
                    line_basis=basis,
                    line_is_real=_span_is_real(basis),
                )
            ]
        if count == 2:
            # pair the two witnesses of each slice into two lines
            lines = []
            used = set()
            for wa in (sets[0][0].z, sets[0][1].z):
                fit = None
                for j, pb in enumerate(sets[1]):
                    if j in used:
                        continue
                    fit = _fit_line_from_witnesses([wa, pb.z], ctx.grad_batch, cfg.curve_tol)
                    if fit is not None:
                        used.add(j)
                        break
                if fit is None:
                    lines = []
                    break
                lines.append(
                    CurveRecord(
                        kind="line",
                        rank_along=3,
                        witness_points=[wa],
                        line_basis=fit,
                        line_is_real=_span_is_real(fit),
                    )
                )
            if len(lines) == 2:
                return lines
            # fall back: maybe a genuine rank-3 conic
            third = [p for p in _slice_witnesses(ctx.grad, cfg, rng) if ctx.rank_at(p.z, 1e-6) == 3]
            witnesses = [p.z for s in sets for p in s] + [p.z for p in third]
            if len(witnesses) >= 5:
                plane, q, ok = _fit_conic(witnesses)
                if ok:
                    return [
                        CurveRecord(
                            kind="conic",
                            rank_along=3,
                            witness_points=witnesses,
                            plane=plane,
                            conic_matrix=q,
                        )
                    ]
            continue
        return [
            CurveRecord(kind="other", rank_along=3, witness_points=[p.z for s in sets for p in s])
        ]
    raise ht.SolverUnreliableError("slice witness counts kept disagreeing for the rank-3 curve probe")


# ---------------------------------------------------------------------------
# main censuses


def _bucket_points(
    run: ht.ProjSolveResult,
    ctx: PencilContext,
    cfg: CensusConfig,
    specials: Sequence[SpecialPoint],
    curves: Sequence[CurveRecord],
    expect_rank: int,
) -> tuple[list[NodeRecord], Accounting]:
    acc = Accounting(chart_stats=run.chart_stats)
    records: list[NodeRecord] = []
    for p in run.points:
        hit = None
        for sp in specials:
            if ht.projective_distance(p.z, sp.point) < cfg.special_radius:
                hit = sp
                break
        if hit is not None:
            hit.absorbed_paths += p.multiplicity
            acc.n_special_absorbed += p.multiplicity
            continue
        if any(c.contains(p.z, cfg.curve_member_tol) for c in curves):
            acc.n_curve_absorbed += p.multiplicity
            continue
        if p.residual >= cfg.residual_accept:
            acc.n_extraneous += p.multiplicity
            continue
        rank = ctx.rank_at(p.z, cfg.rank_rel_tol)
        if rank != expect_rank:
            acc.n_extraneous += p.multiplicity
            continue
        rec = NodeRecord(
            point=p.z,
            rank=rank,
            is_real=p.is_real,
            residual=p.residual,
            multiplicity=p.multiplicity,
        )
        if p.is_real:
            rec.signature = ctx.signature_at(p.z, cfg.signature_tol)
            rec.on_boundary = rec.signature.is_semidefinite
        records.append(rec)
    acc.n_isolated = len(records)
    _pair_conjugates(records)
    return records, acc


def rank2_census(
    ctx: PencilContext,
    seed: int = 0,
    cfg: CensusConfig = CensusConfig(),
    specials: Sequence[SpecialPoint] = (),
    rank3_curves: Sequence[CurveRecord] = (),
    rank1: Optional[list[NodeRecord]] = None,
) -> Rank2Result:
    """Isolated rank-2 nodes plus any curve of rank-2 points.

    ``specials`` carries distinguished points (tacnodes, line intersections)
    whose neighborhoods are excluded from the node list; rank-1 points are
    excluded as well (pass them in to avoid recomputation).  ``rank3_curves``
    lets the caller also exclude rank-2 points sitting on rank-3 lines.
    """
    if rank1 is None:
        rank1 = rank1_points(ctx, seed, cfg)
    specials = list(specials) + [
        SpecialPoint(point=r.point, label="rank1", rank=1, is_real=r.is_real) for r in rank1
    ]
    curve = _probe_rank2_curve(ctx, seed, cfg)
    curves = ([curve] if curve else []) + list(rank3_curves)
    rng = np.random.default_rng([seed, 202])
    run = ht.solve_projective(ctx.minors3, 3, ctx.minors3, cfg.tracker, int(rng.integers(2**31)), n_charts=2)
    isolated, acc = _bucket_points(run, ctx, cfg, specials, curves, expect_rank=2)
    return Rank2Result(isolated=isolated, curve=curve, accounting=acc)


def rank3_singular_census(
    ctx: PencilContext,
    seed: int = 0,
    cfg: CensusConfig = CensusConfig(),
    specials: Sequence[SpecialPoint] = (),
) -> Rank3Result:
    """Rank-3 singular points of the surface: curves and isolated points.

    Solves the gradient system both sliced (curve detection) and unsliced.
    Endpoints of the unsliced solve that vanish on the full gradient, have
    rank 3, and sit on no detected curve are reported as isolated rank-3
    singular points; within the supported families these only occur in
    degenerate members.
    """
    if all(g.is_zero() for g in ctx.grad):
        raise DegenerateInputError("gradient vanishes identically")
    curves = _probe_rank3_curves(ctx, seed, cfg)
    rng = np.random.default_rng([seed, 302])
    run = ht.solve_projective(ctx.grad, 3, ctx.grad, cfg.tracker, int(rng.integers(2**31)), n_charts=2)
    isolated, acc = _bucket_points(run, ctx, cfg, specials, curves, expect_rank=3)
    return Rank3Result(isolated=isolated, curves=curves, accounting=acc)


# ---------------------------------------------------------------------------
# conic reality and boundary position


def conic_reality(rec: CurveRecord, ctx: PencilContext, cfg: CensusConfig = CensusConfig()) -> CurveRecord:
    """Decide whether a conic of rank-2 points has real points, and where.

    The restriction of the curve to its real plane is a ternary conic; a
    definite 3x3 matrix means no real points.  When real points exist one is
    constructed from the eigendecomposition and the pencil's signature there
    settles boundary membership.
    """
    if rec.kind != "conic":
        raise ValueError("record does not describe a conic")
    if rec.plane is None or rec.conic_matrix is None:
        plane, q, ok = _fit_conic(rec.witness_points)
        if not ok:
            raise ht.SolverUnreliableError("conic witnesses do not fit a real plane conic; reseed")
        rec.plane, rec.conic_matrix = plane, q
    evals, evecs = np.linalg.eigh(rec.conic_matrix)
    scale = np.max(np.abs(evals))
    pos = evals > 1e-8 * scale
    neg = evals < -1e-8 * scale
    definite = pos.all() or neg.all()
    rec.conic_has_real_points = not definite
    if definite:
        rec.conic_on_boundary = None
        return rec
    i_pos = int(np.argmax(evals))
    i_neg = int(np.argmin(evals))
    u = np.sqrt(-evals[i_neg]) * evecs[:, i_pos] + np.sqrt(evals[i_pos]) * evecs[:, i_neg]
    basis = _plane_basis(rec.plane)
    z = ht.normalize_projective(basis.T @ u)
    sig = ctx.signature_at(z, cfg.signature_tol)
    rec.conic_on_boundary = bool(sig.is_semidefinite)
    return rec
