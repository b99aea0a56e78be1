"""Type classification of quartic symmetroids from the singularity census.

The decision tree mirrors the singular-locus taxonomy of rational
symmetroids: a rank-1 point means type A; a curve of rank-2 points means
type D (line) or C (conic, subdivided by the reality and position of the
conic); two conjugate rank-3 lines meeting in a real rank-2 point mean type
F; a two-basepoint web whose forced singular point is an isolated real
rank-2 point means type B (a tacnodal surface).  Anything else is reported
as OTHER with the full census attached; that includes genuinely generic
symmetroids, which are not rational.

The (a, b) invariants count real isolated nodes and the semidefinite ones
among them; the tacnode and the line-intersection point are not nodes and
are excluded.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import homotopy as ht
from .census import (
    CensusConfig,
    CurveRecord,
    NodeRecord,
    PencilContext,
    SpecialPoint,
    basepoint_singular_loci,
    conic_reality,
    rank1_points,
    rank2_census,
    rank3_singular_census,
)
from .symmat import (
    DegenerateInputError,
    Pencil,
    Signature,
    eval_pencil_exact,
    signature_exact,
    signature_numeric,
    web_basepoints,
)

TYPE_TAGS = ("A", "B1", "B2", "C1", "C2", "C3", "D", "F1", "F2", "OTHER")


# ---------------------------------------------------------------------------
# spectrahedrality probe


@dataclass
class SpectraProbe:
    n_tried: int
    witness_point: Optional[tuple] = None
    witness_signature: Optional[Signature] = None

    @property
    def witnessed(self) -> bool:
        return self.witness_point is not None


def _is_definite_exact(pencil: Pencil, pt: Sequence[Fraction]) -> Optional[Signature]:
    sig = signature_exact(eval_pencil_exact(pencil, pt))
    return sig if sig.is_definite else None


def probe_spectrahedral(
    pencil: Pencil,
    seed: int = 0,
    user_point: Optional[Sequence] = None,
    n_random: int = 200,
    hill_climb: bool = True,
) -> SpectraProbe:
    """Search for a point where the pencil is definite.

    Candidates in order: the caller's point, the signed basis directions,
    midpoints of signed basis pairs, seeded random rational points in
    [-3, 3]^4, and finally a seeded stochastic maximization of the smallest
    eigenvalue whose result is rationalized and confirmed exactly.  Absence
    of a witness is reported as not-witnessed, never as a disproof.
    """
    candidates: list[tuple] = []
    if user_point is not None:
        candidates.append(tuple(Fraction(v) for v in user_point))
    for i in range(4):
        for s in (1, -1):
            candidates.append(tuple(Fraction(s if j == i else 0) for j in range(4)))
    basis = [tuple(Fraction(1 if j == i else 0) for j in range(4)) for i in range(4)]
    for i in range(4):
        for j in range(i + 1, 4):
            for si in (1, -1):
                for sj in (1, -1):
                    candidates.append(
                        tuple((si * basis[i][k] + sj * basis[j][k]) / 2 for k in range(4))
                    )
    rng = np.random.default_rng([seed, 77])
    for _ in range(n_random):
        candidates.append(tuple(Fraction(int(v), 4) for v in rng.integers(-12, 13, size=4)))

    stack = pencil.as_float_stack()
    tried = 0
    for pt in candidates:
        if not any(pt):
            continue
        tried += 1
        # float screen, exact confirmation
        x = np.array([float(v) for v in pt])
        w = np.linalg.eigvalsh(np.tensordot(x, stack, axes=(0, 0)))
        if w[0] > 1e-9 * max(1.0, abs(w[-1])) or w[-1] < -1e-9 * max(1.0, abs(w[0])):
            sig = _is_definite_exact(pencil, pt)
            if sig is not None:
                return SpectraProbe(n_tried=tried, witness_point=pt, witness_signature=sig)
    if hill_climb:
        for _ in range(10):
            x = rng.standard_normal(4)
            x /= np.linalg.norm(x)
            best = np.linalg.eigvalsh(np.tensordot(x, stack, axes=(0, 0)))[0]
            sigma = 0.5
            for _ in range(300):
                y = x + sigma * rng.standard_normal(4)
                ny = np.linalg.norm(y)
                if ny == 0:
                    continue
                y /= ny
                val = np.linalg.eigvalsh(np.tensordot(y, stack, axes=(0, 0)))[0]
                if val > best:
                    x, best = y, val
                else:
                    sigma = max(0.7 * sigma, 1e-3)
            if best > 1e-7:
                tried += 1
                pt = tuple(Fraction(int(round(v * 4096)), 4096) for v in x)
                sig = _is_definite_exact(pencil, pt) if any(pt) else None
                if sig is not None:
                    return SpectraProbe(n_tried=tried, witness_point=pt, witness_signature=sig)
    return SpectraProbe(n_tried=tried)


# ---------------------------------------------------------------------------
# classification


@dataclass
class Classification:
    type_tag: str
    a: int
    b: int
    spectrahedral: str  # "witnessed" | "not_witnessed"
    witness_point: Optional[list] = None
    seed: int = 0
    constraint_ok: bool = True
    diagnostic: Optional[str] = None
    evidence: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "type": self.type_tag,
            "a": self.a,
            "b": self.b,
            "spectrahedral": self.spectrahedral,
            "witness_point": self.witness_point,
            "seed": self.seed,
            "constraint_ok": self.constraint_ok,
            "diagnostic": self.diagnostic,
            "evidence": self.evidence,
        }


def _ab_constraint_ok(tag: str, a: int, b: int) -> bool:
    """Necessary node-count bounds per type; violations demote to OTHER."""
    if tag == "A":
        return 0 <= b <= a <= 6 and a % 2 == 0
    if tag in ("B1", "B2", "D"):
        return 0 <= b <= a <= b + 2 <= 6 and a % 2 == 0 and b % 2 == 0
    if tag == "C1":
        return 2 <= a <= b + 2 <= 4 and a % 2 == 0 and b % 2 == 0 and b <= a
    if tag == "C2":
        return (a, b) in ((2, 2), (4, 4))
    if tag == "C3":
        return (a, b) == (2, 2)
    if tag in ("F1", "F2"):
        return a == b and a in (0, 2)
    return True


def _conjugate_line_pair(lines: list[CurveRecord]) -> Optional[tuple]:
    """Intersection data of two conjugate rank-3 lines, if that is the shape."""
    if len(lines) != 2:
        return None
    b1, b2 = lines[0].line_basis, lines[1].line_basis
    if b1 is None or b2 is None:
        return None
    if lines[0].line_is_real or lines[1].line_is_real:
        return None
    # conj(span b1) has orthonormal basis rows conj(b1); its overlap matrix
    # with span b2 is conj(conj(b1)) @ b2.T = b1 @ b2.T
    overlap = np.linalg.svd(b1 @ b2.T, compute_uv=False)
    if overlap[-1] < 1 - 1e-6:  # conj(span1) must equal span2
        return None
    proj1 = np.eye(4) - b1.T @ b1.conj()
    proj2 = np.eye(4) - b2.T @ b2.conj()
    _, svals, vh = np.linalg.svd(np.vstack([proj1, proj2]))
    if svals[-1] > 1e-6:
        return None
    z = ht.normalize_projective(vh[-1].conj())
    if np.max(np.abs(z.imag)) > 1e-6:
        return None
    return z.real.astype(complex), svals[-1]


def classify(
    pencil: Pencil,
    seed: int = 0,
    user_point: Optional[Sequence] = None,
    cfg: Optional[CensusConfig] = None,
    _rerun: bool = True,
) -> Classification:
    """Full pipeline: census, structure detection, type tag and (a, b)."""
    cfg = cfg or CensusConfig()
    t0 = time.time()
    ctx = PencilContext(pencil)
    probe = probe_spectrahedral(pencil, seed=seed, user_point=user_point)

    bps = web_basepoints(pencil, seed=seed, cfg=cfg.tracker, residual_accept=cfg.residual_accept)
    evidence: dict = {
        "basepoints": {
            "count": len(bps.points),
            "is_curve": bps.is_curve,
            "multiplicities": [p.multiplicity for p in bps.points],
            "points": [[[v.real, v.imag] for v in p.z] for p in bps.points],
        },
        "probe_candidates_tried": probe.n_tried,
    }
    if bps.is_curve:
        return Classification(
            type_tag="OTHER",
            a=0,
            b=0,
            spectrahedral="witnessed" if probe.witnessed else "not_witnessed",
            witness_point=None if not probe.witnessed else [str(v) for v in probe.witness_point],
            seed=seed,
            constraint_ok=True,
            diagnostic="positive-dimensional web base locus",
            evidence=evidence,
        )

    sp_points, bp_lines = basepoint_singular_loci(ctx, bps, cfg)
    r1 = rank1_points(ctx, seed, cfg)
    r3 = rank3_singular_census(ctx, seed, cfg, specials=sp_points)
    rank3_lines = [c for c in r3.curves if c.kind == "line"]
    r2 = rank2_census(
        ctx, seed, cfg, specials=sp_points, rank3_curves=rank3_lines, rank1=r1
    )
    curve = r2.curve
    if curve is not None and curve.kind == "conic":
        curve = conic_reality(curve, ctx, cfg)

    a = sum(1 for n in r2.isolated if n.is_real)
    b = sum(1 for n in r2.isolated if n.is_real and n.on_boundary)

    evidence.update(
        {
            "rank1_points": [n.brief() for n in r1],
            "rank2_isolated": [n.brief() for n in r2.isolated],
            "rank2_curve": None if curve is None else curve.brief(),
            "rank3_curves": [c.brief() for c in r3.curves],
            "rank3_isolated": [n.brief() for n in r3.isolated],
            "basepoint_singular_points": [
                {
                    "point": [[v.real, v.imag] for v in s.point],
                    "rank": s.rank,
                    "is_real": s.is_real,
                    "semidefinite": None if s.signature is None else s.signature.is_semidefinite,
                }
                for s in sp_points
            ],
            "basepoint_lines": len(bp_lines),
            "path_accounting": {
                "rank2_charts": r2.accounting.chart_stats,
                "rank2_isolated": r2.accounting.n_isolated,
                "rank2_curve_absorbed": r2.accounting.n_curve_absorbed,
                "rank2_special_absorbed": r2.accounting.n_special_absorbed,
                "rank2_extraneous": r2.accounting.n_extraneous,
            },
            "multiple_nodes": [n.brief() for n in r2.isolated if n.multiplicity > 1],
            "elapsed_s": round(time.time() - t0, 3),
        }
    )

    # structure flags
    has_a = len(r1) > 0
    pair = _conjugate_line_pair(rank3_lines)
    f_data = None
    if pair is not None:
        z, resid = pair
        rank_at = ctx.rank_at(z, 1e-5)
        if rank_at == 2:
            f_data = (z, ctx.signature_at(z, cfg.signature_tol))
    tacnode = None
    if len(bps.points) == 2 and not rank3_lines and len(sp_points) == 1:
        sp = sp_points[0]
        grad_res = float(ctx.grad_batch.residual(sp.point[None, :])[0])
        if sp.is_real and sp.rank == 2 and grad_res < 1e-6:
            tacnode = sp
    has_c = curve is not None and curve.kind == "conic" and curve.rank_along == 2
    has_d = curve is not None and curve.kind == "line" and curve.rank_along == 2

    structures = [s for s, flag in (("A", has_a), ("F", f_data is not None), ("C", has_c), ("D", has_d), ("B", tacnode is not None)) if flag]
    diagnostic = None
    if len(structures) > 1:
        if _rerun:
            return classify(pencil, seed=seed + 1, user_point=user_point, cfg=cfg, _rerun=False)
        diagnostic = f"multiple structures detected {structures}; applied precedence"

    if has_a:
        tag = "A"
    elif f_data is not None:
        z, sig = f_data
        tag = "F1" if sig.is_semidefinite else "F2"
        evidence["line_intersection"] = {
            "point": [v.real for v in z],
            "signature": [sig.n_plus, sig.n_minus, sig.n_zero],
        }
    elif has_c:
        if not curve.conic_has_real_points:
            tag = "C3"
        elif curve.conic_on_boundary:
            tag = "C1"
        else:
            tag = "C2"
    elif has_d:
        tag = "D"
    elif tacnode is not None:
        tag = "B1" if tacnode.signature is not None and tacnode.signature.is_semidefinite else "B2"
        evidence["tacnode"] = {
            "point": [[v.real, v.imag] for v in tacnode.point],
            "rank": tacnode.rank,
            "semidefinite": None if tacnode.signature is None else tacnode.signature.is_semidefinite,
        }
    else:
        tag = "OTHER"
        if curve is not None or r3.curves:
            diagnostic = diagnostic or "singular curve outside the supported taxonomy"

    constraint_ok = _ab_constraint_ok(tag, a, b)
    if tag != "OTHER" and not constraint_ok:
        diagnostic = f"census counts (a,b)=({a},{b}) violate the bounds for type {tag}"
        tag = "OTHER"

    return Classification(
        type_tag=tag,
        a=a,
        b=b,
        spectrahedral="witnessed" if probe.witnessed else "not_witnessed",
        witness_point=None if not probe.witnessed else [str(v) for v in probe.witness_point],
        seed=seed,
        constraint_ok=constraint_ok,
        diagnostic=diagnostic,
        evidence=evidence,
    )


# ---------------------------------------------------------------------------
# conjecture harness


@dataclass
class ConjectureReport:
    trials: int
    seed: int
    n_witnessed: int
    n_not_witnessed: int
    n_zero_discriminant: int
    ab_counts: dict
    counterexamples: list
    elapsed_s: float

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "seed": self.seed,
            "n_witnessed": self.n_witnessed,
            "n_not_witnessed": self.n_not_witnessed,
            "n_zero_discriminant": self.n_zero_discriminant,
            "ab_counts": {f"{k[0]},{k[1]}": v for k, v in sorted(self.ab_counts.items())},
            "counterexamples": self.counterexamples,
            "elapsed_s": self.elapsed_s,
        }


def conjecture_search(
    trials: int,
    seed: int = 0,
    param_bound: int = 9,
    inject: Optional[list[tuple]] = None,
) -> ConjectureReport:
    """Random search for a spectrahedral line-family member with (a,b) = (0,0).

    Draws integer parameters for the rank-2-line normal form (a1 = 1),
    computes (a, b) exactly from the discriminant signs, and probes
    spectrahedrality.  A witnessed instance with (0, 0) would contradict the
    expectation that none exist; the report lists any found (so far: none).
    """
    from .families import ab_from_line, line_pencil

    t0 = time.time()
    rng = np.random.default_rng([seed, 4242])
    n_zero = n_wit = n_not = 0
    ab_counts: dict[tuple[int, int], int] = {}
    counterexamples = []
    queue = list(inject or [])
    for k in range(trials):
        if k < len(queue):
            a, b = queue[k]
        else:
            vals = rng.integers(-param_bound, param_bound + 1, size=7)
            a = (int(vals[0]), 1, int(vals[1]), int(vals[2]))
            b = tuple(int(v) for v in vals[3:])
        try:
            counts = ab_from_line(a, b)
        except ValueError:
            n_zero += 1
            continue
        # full probe only where it matters; a cheap probe logs the rest
        hard = counts == (0, 0)
        probe = probe_spectrahedral(
            line_pencil(a, b), seed=seed + k, n_random=200 if hard else 60, hill_climb=hard
        )
        if probe.witnessed:
            n_wit += 1
            ab_counts[counts] = ab_counts.get(counts, 0) + 1
            if counts == (0, 0):
                counterexamples.append(
                    {"a": [str(v) for v in a], "b": [str(v) for v in b], "witness": [str(v) for v in probe.witness_point]}
                )
        else:
            n_not += 1
    return ConjectureReport(
        trials=trials,
        seed=seed,
        n_witnessed=n_wit,
        n_not_witnessed=n_not,
        n_zero_discriminant=n_zero,
        ab_counts=ab_counts,
        counterexamples=counterexamples,
        elapsed_s=round(time.time() - t0, 3),
    )
