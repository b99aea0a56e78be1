"""Symmetric 4x4 rational matrices and linear pencils A(x).

The pencil ``A(x) = A0*x0 + A1*x1 + A2*x2 + A3*x3`` of real symmetric 4x4
matrices is the central input object.  This module provides its exact
determinant (a quartic in x), the k x k minors cutting the low-rank loci,
exact and floating signature computations, the associated quadric form in
y-space, and the common basepoints of the four generator quadrics.

Matrices are entered as 10-tuples in upper-triangle order
``(a00, a01, a02, a03, a11, a12, a13, a22, a23, a33)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .qpoly import MPoly, _coerce

_UPPER_INDEX = [(0, 0), (0, 1), (0, 2), (0, 3), (1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)]


class DegenerateInputError(ValueError):
    """Raised when a pencil falls outside the supported generic geometry."""


@dataclass(frozen=True)
class SymMat4:
    """Real symmetric 4x4 matrix with exact rational entries."""

    triu: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.triu) != 10:
            raise ValueError("need exactly 10 upper-triangle entries")
        object.__setattr__(self, "triu", tuple(_coerce(v) for v in self.triu))

    @staticmethod
    def from_triu(values: Sequence) -> "SymMat4":
        return SymMat4(tuple(values))

    @staticmethod
    def from_rows(rows: Sequence[Sequence]) -> "SymMat4":
        vals = []
        for i, j in _UPPER_INDEX:
            a, b = _coerce(rows[i][j]), _coerce(rows[j][i])
            if a != b:
                raise ValueError(f"matrix not symmetric at ({i},{j})")
            vals.append(a)
        return SymMat4(tuple(vals))

    @staticmethod
    def zero() -> "SymMat4":
        return SymMat4((Fraction(0),) * 10)

    @staticmethod
    def identity() -> "SymMat4":
        return SymMat4.from_rows([[int(i == j) for j in range(4)] for i in range(4)])

    @staticmethod
    def diag(d0, d1, d2, d3) -> "SymMat4":
        rows = [[0] * 4 for _ in range(4)]
        for i, v in enumerate((d0, d1, d2, d3)):
            rows[i][i] = v
        return SymMat4.from_rows(rows)

    def entry(self, i: int, j: int) -> Fraction:
        if i > j:
            i, j = j, i
        return self.triu[_UPPER_INDEX.index((i, j))]

    def rows(self) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(tuple(self.entry(i, j) for j in range(4)) for i in range(4))

    def as_float(self) -> np.ndarray:
        return np.array([[float(self.entry(i, j)) for j in range(4)] for i in range(4)])

    def is_zero(self) -> bool:
        return all(not v for v in self.triu)

    def scale(self, c) -> "SymMat4":
        c = _coerce(c)
        return SymMat4(tuple(c * v for v in self.triu))

    def __add__(self, other: "SymMat4") -> "SymMat4":
        return SymMat4(tuple(a + b for a, b in zip(self.triu, other.triu)))

    def congruence(self, g: Sequence[Sequence]) -> "SymMat4":
        """Exact congruence transform ``g^T M g`` for rational g."""
        m = self.rows()
        gg = [[_coerce(v) for v in row] for row in g]
        out = [[Fraction(0)] * 4 for _ in range(4)]
        for i in range(4):
            for j in range(i, 4):
                s = Fraction(0)
                for k in range(4):
                    for l in range(4):
                        s += gg[k][i] * m[k][l] * gg[l][j]
                out[i][j] = s
                out[j][i] = s
        return SymMat4.from_rows(out)


@dataclass(frozen=True)
class Pencil:
    """Four symmetric generators; evaluates to ``sum_i A_i x_i``."""

    A0: SymMat4
    A1: SymMat4
    A2: SymMat4
    A3: SymMat4

    def __post_init__(self):
        if all(m.is_zero() for m in self.generators()):
            raise ValueError("pencil must have at least one nonzero generator")

    @staticmethod
    def from_triu_tuples(t0, t1, t2, t3) -> "Pencil":
        return Pencil(*(SymMat4.from_triu(t) for t in (t0, t1, t2, t3)))

    def generators(self) -> tuple[SymMat4, SymMat4, SymMat4, SymMat4]:
        return (self.A0, self.A1, self.A2, self.A3)

    def congruence(self, g: Sequence[Sequence]) -> "Pencil":
        return Pencil(*(m.congruence(g) for m in self.generators()))

    def change_of_variables(self, m: Sequence[Sequence]) -> "Pencil":
        """Pencil of ``A(Mx)``, i.e. generators ``A_i' = sum_j M[j][i] A_j``."""
        mm = [[_coerce(v) for v in row] for row in m]
        gens = []
        for i in range(4):
            acc = SymMat4.zero()
            for j in range(4):
                acc = acc + self.generators()[j].scale(mm[j][i])
            gens.append(acc)
        return Pencil(*gens)

    def as_float_stack(self) -> np.ndarray:
        """Shape (4, 4, 4): generator index first."""
        return np.stack([m.as_float() for m in self.generators()])


# ---------------------------------------------------------------------------
# determinant and minors


def _poly_entry(p: Pencil, i: int, j: int) -> MPoly:
    terms = {}
    for k, m in enumerate(p.generators()):
        c = m.entry(i, j)
        if c:
            exps = tuple(1 if t == k else 0 for t in range(4))
            terms[exps] = c
    return MPoly(4, terms)


def _det_poly(entries: list[list[MPoly]]) -> MPoly:
    n = len(entries)
    total = MPoly.zero(4)
    for perm in itertools.permutations(range(n)):
        sign = 1
        seen = list(perm)
        # parity by counting inversions
        inv = sum(1 for a in range(n) for b in range(a + 1, n) if seen[a] > seen[b])
        sign = -1 if inv % 2 else 1
        term = MPoly.constant(sign, 4)
        for r in range(n):
            term = term * entries[r][perm[r]]
        total = total + term
    return total


def det_pencil(p: Pencil) -> MPoly:
    """Exact determinant of A(x): homogeneous quartic unless identically zero."""
    entries = [[_poly_entry(p, i, j) for j in range(4)] for i in range(4)]
    return _det_poly(entries)


def minors(p: Pencil, k: int) -> list[MPoly]:
    """Distinct k x k minors of A(x) with symmetry duplicates removed.

    For k = 3 these are the 10 cubics cutting the rank <= 2 locus; for k = 2
    the 21 quadrics cutting the rank <= 1 locus.  Minor(I, J) equals
    Minor(J, I) for a symmetric matrix, so only index pairs with I <= J are
    emitted.
    """
    if k not in (2, 3):
        raise ValueError("only 2x2 and 3x3 minors are supported")
    entries = [[_poly_entry(p, i, j) for j in range(4)] for i in range(4)]
    subsets = list(itertools.combinations(range(4), k))
    out = []
    for a, rows in enumerate(subsets):
        for cols in subsets[a:]:
            sub = [[entries[i][j] for j in cols] for i in rows]
            out.append(_det_poly(sub))
    return out


def gradient(f: MPoly) -> list[MPoly]:
    return [f.partial(i) for i in range(f.nvars)]


# ---------------------------------------------------------------------------
# evaluation


def eval_pencil_exact(p: Pencil, pt: Sequence) -> SymMat4:
    """A(pt) for a rational point, exact."""
    if len(pt) != 4:
        raise ValueError("point must have 4 coordinates")
    vals = [_coerce(v) for v in pt]
    if not any(vals):
        raise ValueError("zero vector is not a valid evaluation point")
    acc = SymMat4.zero()
    for v, m in zip(vals, p.generators()):
        acc = acc + m.scale(v)
    return acc


def eval_pencil_numeric(p: Pencil, pt: Sequence[complex]) -> np.ndarray:
    """A(pt) as a dense complex array for a floating point."""
    x = np.asarray(pt, dtype=complex)
    if x.shape != (4,):
        raise ValueError("point must have 4 coordinates")
    if not np.any(x):
        raise ValueError("zero vector is not a valid evaluation point")
    return np.tensordot(x, p.as_float_stack(), axes=(0, 0))


def quadric_form(p: Pencil, pt: Sequence):
    """Matrix of the quadric ``y . A(pt) . y^T`` in y-space.

    Numerically this is the same matrix as the pencil evaluation; the entry
    point exists so call sites can state which of the two spaces they mean.
    """
    exact = True
    for v in pt:
        if not isinstance(v, (int, Fraction, str)):
            exact = False
            break
    return eval_pencil_exact(p, pt) if exact else eval_pencil_numeric(p, pt)


def numeric_rank(mat: np.ndarray, rel_tol: float = 1e-7) -> int:
    """Rank by singular values with a relative threshold."""
    s = np.linalg.svd(np.asarray(mat, dtype=complex), compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > rel_tol * s[0]))


# ---------------------------------------------------------------------------
# signatures


@dataclass(frozen=True)
class Signature:
    """Inertia (n_plus, n_minus, n_zero) of a real symmetric matrix."""

    n_plus: int
    n_minus: int
    n_zero: int

    def __post_init__(self):
        if self.n_plus + self.n_minus + self.n_zero != 4:
            raise ValueError("signature counts must sum to 4")

    @property
    def rank(self) -> int:
        return self.n_plus + self.n_minus

    @property
    def is_definite(self) -> bool:
        return self.n_zero == 0 and (self.n_plus == 4 or self.n_minus == 4)

    @property
    def is_semidefinite(self) -> bool:
        return self.n_plus == 0 or self.n_minus == 0

    @property
    def is_indefinite(self) -> bool:
        return self.n_plus > 0 and self.n_minus > 0


def signature_exact(m: SymMat4) -> Signature:
    """Inertia by symmetric Gaussian elimination with congruence pivoting.

    Exact over the rationals, so definiteness decisions carry proof weight;
    agrees with Sylvester's leading-minor criterion on definite input.
    """
    a = [list(row) for row in m.rows()]
    n = 4
    plus = minus = zero = 0
    for k in range(n):
        if not a[k][k]:
            swap = next((j for j in range(k + 1, n) if a[j][j]), None)
            if swap is not None:
                for r in range(n):
                    a[r][k], a[r][swap] = a[r][swap], a[r][k]
                a[k], a[swap] = a[swap], a[k]
            else:
                off = next((j for j in range(k + 1, n) if a[k][j]), None)
                if off is None:
                    zero += 1
                    continue
                # Congruence row/col addition creates a nonzero pivot:
                # the (k,k) entry becomes 2*a[k][off] since both diagonals vanish.
                for r in range(n):
                    a[r][k] += a[r][off]
                for c in range(n):
                    a[k][c] += a[off][c]
        pivot = a[k][k]
        if pivot > 0:
            plus += 1
        else:
            minus += 1
        for i in range(k + 1, n):
            if a[i][k]:
                factor = a[i][k] / pivot
                for c in range(n):
                    a[i][c] -= factor * a[k][c]
                for r in range(n):
                    a[r][i] -= factor * a[r][k]
    return Signature(plus, minus, zero)


def jacobi_eigenvalues(mat: np.ndarray, sweeps: int = 30, tol: float = 1e-14) -> np.ndarray:
    """Eigenvalues of a small real symmetric matrix by cyclic Jacobi rotations."""
    a = np.array(mat, dtype=float)
    n = a.shape[0]
    for _ in range(sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off = max(off, abs(a[p, q]))
        scale = max(abs(a).max(), 1.0)
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= tol * scale:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.hypot(1.0, theta))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                rot = np.eye(n)
                rot[p, p] = rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                a = rot.T @ a @ rot
                a = 0.5 * (a + a.T)
    return np.sort(np.diag(a))


def generator_quadrics(p: Pencil) -> list[MPoly]:
    """The four quadratic forms ``y . A_i . y^T`` as polynomials in y."""
    out = []
    for gen in p.generators():
        rows = gen.rows()
        terms: dict[tuple[int, ...], Fraction] = {}
        for i in range(4):
            for j in range(4):
                e = [0, 0, 0, 0]
                e[i] += 1
                e[j] += 1
                key = tuple(e)
                terms[key] = terms.get(key, Fraction(0)) + rows[i][j]
        out.append(MPoly(4, terms))
    return out


@dataclass
class BasepointResult:
    """Common zeros in y-space of every quadric in the web."""

    points: list  # list of homotopy.ProjPoint
    is_curve: bool

    def count(self) -> int:
        return len(self.points)


def web_basepoints(p: Pencil, seed: int = 0, cfg=None, residual_accept: float = 1e-8) -> BasepointResult:
    """Basepoints of the web of quadrics attached to the pencil.

    Solves a randomized square subsystem of the four generator quadrics in a
    random affine chart of y-space and keeps endpoints where all four vanish.
    A positive-dimensional base locus is detected by a hyperplane-slice probe
    and reported as a curve outcome rather than an error.  Multiplicities
    come from path clustering (a length-two basepoint shows up as a cluster
    of two paths).
    """
    from . import homotopy as ht

    cfg = cfg or ht.TrackerConfig()
    quadrics = generator_quadrics(p)
    if all(q.is_zero() for q in quadrics):
        raise ValueError("zero pencil has no well-defined web")
    rng = np.random.default_rng(seed)
    slice_vec = rng.standard_normal(4)
    probe = ht.solve_projective(
        quadrics, 2, quadrics, cfg, int(rng.integers(2**31)), slice_vec=slice_vec, n_charts=1
    )
    if any(pt.residual < residual_accept for pt in probe.points):
        return BasepointResult(points=[], is_curve=True)
    run = ht.solve_projective(quadrics, 3, quadrics, cfg, int(rng.integers(2**31)), n_charts=2)
    pts = [pt for pt in run.points if pt.residual < residual_accept]
    return BasepointResult(points=pts, is_curve=False)


def signature_numeric(mat: np.ndarray, tol: float = 1e-7) -> Signature:
    """Inertia of a floating symmetric matrix with a relative zero threshold."""
    a = np.asarray(mat, dtype=float)
    if a.shape != (4, 4):
        raise ValueError("expected a 4x4 matrix")
    if np.max(np.abs(a - a.T)) > 1e-10 * max(1.0, np.max(np.abs(a))):
        raise ValueError("matrix is not symmetric within tolerance")
    w = jacobi_eigenvalues(0.5 * (a + a.T))
    scale = np.max(np.abs(w)) if w.size else 0.0
    if scale == 0.0:
        return Signature(0, 0, 4)
    zero = int(np.sum(np.abs(w) < tol * scale))
    plus = int(np.sum(w >= tol * scale))
    minus = 4 - plus - zero
    return Signature(plus, minus, zero)
