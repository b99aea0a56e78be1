"""Exact sparse multivariate polynomial arithmetic over the rationals.

Polynomials live in Q[x_0, ..., x_{n-1}] and are stored sparsely as a map
from exponent vectors to nonzero ``Fraction`` coefficients.  All ring
operations are exact; floating-point only enters through ``eval_complex``,
which is used by the numerical solver layer.  Values are immutable after
construction and safe to share between threads.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Exponent = tuple[int, ...]


def _coerce(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact coefficient")


def _gradedlex_key(exps: Exponent) -> tuple:
    # Graded-lex, displayed leading term first: higher total degree wins,
    # ties broken lexicographically with earlier variables dominant.
    return (-sum(exps), tuple(-e for e in exps))


class MPoly:
    """Sparse multivariate polynomial with exact rational coefficients."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Exponent, object] | None = None):
        if nvars < 0:
            raise ValueError("nvars must be nonnegative")
        clean: dict[Exponent, Fraction] = {}
        if terms:
            for exps, coeff in terms.items():
                exps = tuple(int(e) for e in exps)
                if len(exps) != nvars:
                    raise ValueError(f"exponent vector {exps} has length != {nvars}")
                if any(e < 0 for e in exps):
                    raise ValueError(f"negative exponent in {exps}")
                c = _coerce(coeff)
                if c:
                    acc = clean.get(exps)
                    clean[exps] = c if acc is None else acc + c
                    if not clean[exps]:
                        del clean[exps]
        self.nvars = nvars
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(nvars: int) -> "MPoly":
        return MPoly(nvars)

    @staticmethod
    def constant(value, nvars: int) -> "MPoly":
        return MPoly(nvars, {(0,) * nvars: _coerce(value)})

    @staticmethod
    def variable(i: int, nvars: int) -> "MPoly":
        if not 0 <= i < nvars:
            raise IndexError(f"variable index {i} out of range for {nvars} variables")
        exps = tuple(1 if j == i else 0 for j in range(nvars))
        return MPoly(nvars, {exps: Fraction(1)})

    @staticmethod
    def linear_form(coeffs: Sequence, nvars: int | None = None) -> "MPoly":
        """Polynomial ``sum_i coeffs[i] * x_i``."""
        n = len(coeffs) if nvars is None else nvars
        if len(coeffs) != n:
            raise ValueError("coefficient count must match nvars")
        terms = {}
        for i, c in enumerate(coeffs):
            exps = tuple(1 if j == i else 0 for j in range(n))
            terms[exps] = _coerce(c)
        return MPoly(n, terms)

    # -- ring structure ----------------------------------------------------

    def _check_compatible(self, other: "MPoly") -> None:
        if self.nvars != other.nvars:
            raise ValueError(
                f"variable-count mismatch: {self.nvars} vs {other.nvars}"
            )

    def __add__(self, other) -> "MPoly":
        if not isinstance(other, MPoly):
            other = MPoly.constant(other, self.nvars)
        self._check_compatible(other)
        merged = dict(self.terms)
        for exps, c in other.terms.items():
            acc = merged.get(exps)
            s = c if acc is None else acc + c
            if s:
                merged[exps] = s
            elif acc is not None:
                del merged[exps]
        out = MPoly.__new__(MPoly)
        out.nvars = self.nvars
        out.terms = merged
        return out

    __radd__ = __add__

    def __neg__(self) -> "MPoly":
        out = MPoly.__new__(MPoly)
        out.nvars = self.nvars
        out.terms = {e: -c for e, c in self.terms.items()}
        return out

    def __sub__(self, other) -> "MPoly":
        if not isinstance(other, MPoly):
            other = MPoly.constant(other, self.nvars)
        return self + (-other)

    def __rsub__(self, other) -> "MPoly":
        return (-self) + other

    def __mul__(self, other) -> "MPoly":
        if not isinstance(other, MPoly):
            return self.scale(other)
        self._check_compatible(other)
        prod: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                acc = prod.get(e)
                s = c if acc is None else acc + c
                if s:
                    prod[e] = s
                elif acc is not None:
                    del prod[e]
        out = MPoly.__new__(MPoly)
        out.nvars = self.nvars
        out.terms = prod
        return out

    __rmul__ = __mul__

    def scale(self, value) -> "MPoly":
        c = _coerce(value)
        if not c:
            return MPoly.zero(self.nvars)
        out = MPoly.__new__(MPoly)
        out.nvars = self.nvars
        out.terms = {e: c * v for e, v in self.terms.items()}
        return out

    def __pow__(self, k: int) -> "MPoly":
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = MPoly.constant(1, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, MPoly):
            if isinstance(other, (int, Fraction)):
                other = MPoly.constant(other, self.nvars)
            else:
                return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        """Degree of the polynomial; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def homogeneous_degree(self) -> int | None:
        """The common degree of all terms, or None if inhomogeneous/zero."""
        degrees = {sum(e) for e in self.terms}
        if len(degrees) == 1:
            return degrees.pop()
        return None

    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        """Terms in graded-lex order, leading term first."""
        return sorted(self.terms.items(), key=lambda kv: _gradedlex_key(kv[0]))

    # -- calculus and evaluation --------------------------------------------

    def partial(self, i: int) -> "MPoly":
        """Exact formal partial derivative with respect to x_i."""
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable index {i} out of range")
        terms: dict[Exponent, Fraction] = {}
        for exps, c in self.terms.items():
            e = exps[i]
            if e == 0:
                continue
            new = exps[:i] + (e - 1,) + exps[i + 1 :]
            terms[new] = terms.get(new, Fraction(0)) + c * e
        return MPoly(self.nvars, terms)

    def eval_rational(self, pt: Sequence) -> Fraction:
        """Exact value at a rational point."""
        if len(pt) != self.nvars:
            raise ValueError("point length must match nvars")
        vals = [_coerce(v) for v in pt]
        total = Fraction(0)
        for exps, c in self.terms.items():
            term = c
            for v, e in zip(vals, exps):
                if e:
                    term *= v**e
            total += term
        return total

    def eval_complex(self, pt: Sequence[complex]) -> complex:
        """Floating value at a complex point.

        Uses Horner-style accumulation variable by variable, which keeps the
        evaluation stable for the moderate degrees that occur here.
        """
        if len(pt) != self.nvars:
            raise ValueError("point length must match nvars")
        items = [(e, complex(c)) for e, c in self.terms.items()]
        return self._horner(items, 0, tuple(complex(v) for v in pt))

    @staticmethod
    def _horner(items, var, pt) -> complex:
        if not items:
            return 0.0 + 0.0j
        if var == len(pt):
            return sum(c for _, c in items)
        groups: dict[int, list] = {}
        for exps, c in items:
            groups.setdefault(exps[var], []).append((exps, c))
        x = pt[var]
        acc = 0.0 + 0.0j
        prev_deg = None
        for deg in sorted(groups, reverse=True):
            if prev_deg is not None:
                acc *= x ** (prev_deg - deg)
            acc += MPoly._horner(groups[deg], var + 1, pt)
            prev_deg = deg
        if prev_deg:
            acc *= x**prev_deg
        return acc

    def substitute_linear(self, matrix: Sequence[Sequence]) -> "MPoly":
        """Substitute ``x_i -> sum_j matrix[i][j] * y_j`` exactly.

        ``matrix`` has one row per current variable; the column count sets
        the variable count of the result.  Invertible square substitutions
        preserve degree.
        """
        if len(matrix) != self.nvars:
            raise ValueError("substitution needs one row per variable")
        n_new = len(matrix[0]) if matrix else 0
        forms = []
        for row in matrix:
            if len(row) != n_new:
                raise ValueError("ragged substitution matrix")
            forms.append(MPoly.linear_form([_coerce(v) for v in row], n_new))
        # Power cache keyed by (variable, exponent); degrees here are small.
        powers: dict[tuple[int, int], MPoly] = {}

        def form_power(i: int, e: int) -> MPoly:
            key = (i, e)
            if key not in powers:
                powers[key] = forms[i] ** e
            return powers[key]

        total = MPoly.zero(n_new)
        for exps, c in self.terms.items():
            term = MPoly.constant(c, n_new)
            for i, e in enumerate(exps):
                if e:
                    term = term * form_power(i, e)
            total = total + term
        return total

    # -- rendering -----------------------------------------------------------

    def render(self) -> str:
        """Deterministic textual form: ``c * x0^a x1^b`` terms joined by ' + '.

        Coefficients print as ``num`` or ``num/den``; unit exponents drop the
        caret.  The zero polynomial renders as ``0``.
        """
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.sorted_terms():
            factors = []
            for i, e in enumerate(exps):
                if e == 1:
                    factors.append(f"x{i}")
                elif e > 1:
                    factors.append(f"x{i}^{e}")
            coeff = str(c)
            parts.append(f"{coeff} * {' '.join(factors)}" if factors else coeff)
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"MPoly({self.render()!r})"


def euler_combination(p: MPoly) -> MPoly:
    """``sum_i x_i * dp/dx_i``; equals ``deg(p) * p`` for homogeneous p."""
    total = MPoly.zero(p.nvars)
    for i in range(p.nvars):
        total = total + MPoly.variable(i, p.nvars) * p.partial(i)
    return total
