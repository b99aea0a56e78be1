"""Normal-form pencil constructors, closed-form node-count rules, tables.

Each rational symmetroid family has a normal form whose free data is a
handful of scalars or linear forms.  The constructors here produce exact
pencils from that data; for the conic and line families the reality pattern
of the isolated nodes is decided in closed form by discriminants, giving an
independent route to the (a, b) counts that the numerical census must match.

The bundled example tables live in ``data/table{1..4}.txt``; one row per
line, fields separated by ``;``:

    table_id; (a,b); column; first-tuple; second-tuple

where the tuples are the 10-entry matrices ``A2`` and ``A3`` in
upper-triangle order for tables 1, 2, 4, and the parameter 4-tuples
``a0..a3``/``b0..b3`` for table 3.  ``column`` is ``onboundary``,
``disjoint`` or ``-``.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Optional, Sequence

from .qpoly import _coerce
from .symmat import Pencil, SymMat4

_E = [(0, 0), (0, 1), (0, 2), (0, 3), (1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)]

FAMILY_TAGS = ("TRIPLE", "TACNODE", "C1", "C2", "LINE", "TWOLINES", "DEFORM")


@dataclass(frozen=True)
class FamilyParams:
    """Parameters of one normal form; arity is validated by ``build``."""

    tag: str
    scalars: tuple = ()
    forms: dict = field(default_factory=dict)
    matrices: tuple = ()
    on_boundary: bool = True


def _sym_from_coeff(coeff: dict[tuple[int, int], Sequence]) -> list[SymMat4]:
    """Four generator matrices from per-entry coefficient 4-vectors."""
    gens = []
    for k in range(4):
        rows = [[Fraction(0)] * 4 for _ in range(4)]
        for (i, j), vec in coeff.items():
            c = _coerce(vec[k])
            rows[i][j] = c
            rows[j][i] = c
        gens.append(SymMat4.from_rows(rows))
    return gens


def triple_pencil(a2: Sequence, a3: Sequence) -> Pencil:
    """Identity plus a rank-1 generator: a symmetroid with a triple point."""
    e00 = SymMat4.from_triu((1, 0, 0, 0, 0, 0, 0, 0, 0, 0))
    return Pencil(SymMat4.identity(), e00, SymMat4.from_triu(tuple(a2)), SymMat4.from_triu(tuple(a3)))


def _check_two_basepoint_shape(m: SymMat4, label: str) -> None:
    if m.entry(0, 1) != 0 or m.entry(0, 0) != m.entry(1, 1):
        raise ValueError(f"{label} is not in the two-basepoint shape (a01 = 0, a00 = a11)")


def tacnode_pencil(a2: Sequence, a3: Sequence, on_boundary: bool = True) -> Pencil:
    """Tacnodal family: definite generator plus a rank-2 scalar block.

    The tacnode sits at [1:0:0:0]; with the positive block it lies on the
    spectrahedron boundary, with the indefinite one it is disjoint.
    """
    m2, m3 = SymMat4.from_triu(tuple(a2)), SymMat4.from_triu(tuple(a3))
    _check_two_basepoint_shape(m2, "A2")
    _check_two_basepoint_shape(m3, "A3")
    a0 = SymMat4.diag(0, 0, 1, 2 if on_boundary else -2)
    return Pencil(a0, SymMat4.identity(), m2, m3)


def conic_pencil_boundary(a0, a1, a2, a3) -> Pencil:
    """Normal form whose rank-2 locus is a conic in a semidefinite stratum."""
    lin = (a0, a1, a2, a3)
    coeff = {
        (0, 0): (1, 0, 0, 0),
        (1, 1): (1, 0, 0, 0),
        (0, 2): (0, 1, 0, 0),
        (0, 3): lin,
        (1, 2): (0, 0, 1, 0),
        (1, 3): (0, 1, 0, 0),
        (2, 2): (0, 0, 0, 1),
        (3, 3): (0, 0, 0, 1),
    }
    return Pencil(*_sym_from_coeff(coeff))


def conic_pencil_disjoint(a0, a1, a2, a3) -> Pencil:
    """Normal form whose rank-2 conic lies in the indefinite stratum."""
    lin = (a0, a1, a2, a3)
    coeff = {
        (0, 0): (1, 0, 0, 0),
        (1, 1): (1, 0, 0, 0),
        (2, 2): (1, 0, 0, 0),
        (3, 3): (1, 0, 0, 0),
        (0, 2): (0, 1, 0, 0),
        (0, 3): (0, 0, 1, 0),
        (1, 2): (0, 0, 0, 1),
        (1, 3): lin,
    }
    return Pencil(*_sym_from_coeff(coeff))


def line_pencil(a: Sequence, b: Sequence) -> Pencil:
    """Normal form with rank 2 along the line x0 = x2 = 0."""
    if len(a) != 4 or len(b) != 4:
        raise ValueError("line family takes two parameter 4-tuples")
    coeff = {
        (0, 0): (1, 0, 0, 0),
        (1, 1): (1, 0, 0, 0),
        (2, 2): (1, 0, 0, 0),
        (0, 3): (0, 1, 0, 0),
        (1, 2): (0, 0, 1, 0),
        (1, 3): (0, 0, 0, 1),
        (2, 3): tuple(a),
        (3, 3): tuple(b),
    }
    return Pencil(*_sym_from_coeff(coeff))


def _form4(form3) -> tuple:
    """Extend a coefficient triple on (x1, x2, x3) to an x-coefficient 4-vector."""
    f = tuple(_coerce(v) for v in form3)
    if len(f) != 3:
        raise ValueError("linear forms take coefficient triples on (x1, x2, x3)")
    return (Fraction(0),) + f


def twolines_pencil(l00, l02, l03, l22, l23, l33, a22, a23, a33) -> Pencil:
    """Symmetroid singular of rank 3 along two conjugate lines through [1:0:0:0]."""
    coeff = {
        (0, 0): _form4(l00),
        (1, 1): _form4(l00),
        (0, 2): _form4(l02),
        (1, 3): _form4(l02),
        (0, 3): _form4(l03),
        (1, 2): tuple(-v for v in _form4(l03)),
        (2, 2): (_coerce(a22),) + _form4(l22)[1:],
        (2, 3): (_coerce(a23),) + _form4(l23)[1:],
        (3, 3): (_coerce(a33),) + _form4(l33)[1:],
    }
    return Pencil(*_sym_from_coeff(coeff))


def deformation(t, l00, l02, l03, l12, l13, l22, l23, l33, a22, a23, a33) -> Pencil:
    """One-parameter family joining the tacnodal shape to the two-line shape.

    At t = 0 the pencil equals ``twolines_pencil`` with the same data; for
    t != 0 the off-diagonal forms deform to -l03 + t*l12 and l02 + t*l13,
    which is the general tacnodal shape.
    """
    t = _coerce(t)
    f03, f12, f02, f13 = _form4(l03), _form4(l12), _form4(l02), _form4(l13)
    e12 = tuple(-a + t * b for a, b in zip(f03, f12))
    e13 = tuple(a + t * b for a, b in zip(f02, f13))
    coeff = {
        (0, 0): _form4(l00),
        (1, 1): _form4(l00),
        (0, 2): f02,
        (0, 3): f03,
        (1, 2): e12,
        (1, 3): e13,
        (2, 2): (_coerce(a22),) + _form4(l22)[1:],
        (2, 3): (_coerce(a23),) + _form4(l23)[1:],
        (3, 3): (_coerce(a33),) + _form4(l33)[1:],
    }
    return Pencil(*_sym_from_coeff(coeff))


_TABLE4_A1 = SymMat4.from_triu((1, 0, 0, 0, 1, 0, 0, 1, 1, 2))


def twolines_table_pencil(a2: Sequence, a3: Sequence, on_boundary: bool = True) -> Pencil:
    """Two-line family rows: fixed definite A1 and scalar block A0."""
    m2, m3 = SymMat4.from_triu(tuple(a2)), SymMat4.from_triu(tuple(a3))
    a0 = SymMat4.from_triu((0, 0, 0, 0, 0, 0, 0, 1, 1, 3 if on_boundary else 0))
    for m, label in ((m2, "A2"), (m3, "A3")):
        _check_two_basepoint_shape(m, label)
        if m.entry(1, 2) != -m.entry(0, 3) or m.entry(1, 3) != m.entry(0, 2):
            raise ValueError(f"{label} is not in the two-line shape")
    return Pencil(a0, _TABLE4_A1, m2, m3)


def twolines_params_from_pencil(p: Pencil) -> dict:
    """Extract the linear-form data of a two-line-shaped pencil.

    Returns coefficient triples on (x1, x2, x3) for each l_ij plus the three
    scalars; raises if the pencil is not exactly in that shape.
    """
    gens = p.generators()
    a0 = gens[0]
    for i, j in _E[:7]:
        if a0.entry(i, j) != 0:
            raise ValueError("A0 must vanish outside its lower 2x2 block")

    def triple(i, j):
        return tuple(gens[k].entry(i, j) for k in (1, 2, 3))

    out = {
        "l00": triple(0, 0),
        "l02": triple(0, 2),
        "l03": triple(0, 3),
        "l22": triple(2, 2),
        "l23": triple(2, 3),
        "l33": triple(3, 3),
        "a22": a0.entry(2, 2),
        "a23": a0.entry(2, 3),
        "a33": a0.entry(3, 3),
    }
    for k in (1, 2, 3):
        g = gens[k]
        if g.entry(0, 1) != 0 or g.entry(0, 0) != g.entry(1, 1):
            raise ValueError("generators are not in the two-basepoint shape")
        if g.entry(1, 2) != -g.entry(0, 3) or g.entry(1, 3) != g.entry(0, 2):
            raise ValueError("generators are not in the two-line shape")
    return out


def build(params: FamilyParams) -> Pencil:
    """Dispatch a FamilyParams bundle to the matching constructor."""
    tag = params.tag
    if tag == "TRIPLE":
        return triple_pencil(*params.matrices)
    if tag == "TACNODE":
        return tacnode_pencil(*params.matrices, on_boundary=params.on_boundary)
    if tag == "C1":
        return conic_pencil_boundary(*params.scalars)
    if tag == "C2":
        return conic_pencil_disjoint(*params.scalars)
    if tag == "LINE":
        a, b = params.scalars[:4], params.scalars[4:]
        if len(params.scalars) != 8:
            raise ValueError("line family takes 8 scalars")
        return line_pencil(a, b)
    if tag == "TWOLINES":
        f = params.forms
        return twolines_pencil(
            f["l00"], f["l02"], f["l03"], f["l22"], f["l23"], f["l33"], *params.scalars
        )
    if tag == "DEFORM":
        f = params.forms
        return deformation(
            params.scalars[0],
            f["l00"], f["l02"], f["l03"], f["l12"], f["l13"], f["l22"], f["l23"], f["l33"],
            *params.scalars[1:],
        )
    raise ValueError(f"unknown family tag {tag!r}")


# ---------------------------------------------------------------------------
# discriminants and closed-form (a, b) rules


def discriminants_C1(a0, a1, a2, a3) -> tuple[Fraction, Fraction]:
    """(D_s2, D_i) for the boundary-conic normal form, normalized to a0 = 1."""
    a0, a1, a2, a3 = (_coerce(v) for v in (a0, a1, a2, a3))
    if a0 != 1:
        raise ValueError("discriminants assume the normalization a0 = 1")
    d_s2 = (a2 - 1) ** 2 - 4 * a3
    d_i = a1**2 + 4 * a2
    return d_s2, d_i


def discriminants_C2(a0, a1, a2, a3) -> tuple[Fraction, Fraction]:
    """(D_s1, D_s2) for the disjoint-conic normal form, normalized to a0 = 1."""
    a0, a1, a2, a3 = (_coerce(v) for v in (a0, a1, a2, a3))
    if a0 != 1:
        raise ValueError("discriminants assume the normalization a0 = 1")
    d_s1 = a1**2 + a2**2 + a3**2 - 2 * a1 - 2 * a2 * a3
    d_s2 = a1**2 + a2**2 + a3**2 + 2 * a1 + 2 * a2 * a3
    return d_s1, d_s2


def conic_type_from_C1(a0, a1, a2, a3) -> tuple[str, int, int]:
    """Closed-form (type, a, b) for the boundary-conic form.

    The two node pairs are real exactly when their discriminants are
    positive; the conic itself has no real points (cyclide case) exactly
    when it is definite, i.e. when D_s2 + D_i < 0.
    """
    d_s2, d_i = discriminants_C1(a0, a1, a2, a3)
    if d_s2 == 0 or d_i == 0:
        raise ValueError("zero discriminant: parameters on a family boundary")
    a = 2 * int(d_s2 > 0) + 2 * int(d_i > 0)
    b = 2 * int(d_s2 > 0)
    tag = "C3" if d_s2 + d_i < 0 else "C1"
    return tag, a, b


def conic_type_from_C2(a0, a1, a2, a3) -> tuple[str, int, int]:
    """Closed-form (type, a, b) for the disjoint-conic form."""
    d_s1, d_s2 = discriminants_C2(a0, a1, a2, a3)
    if d_s1 == 0 or d_s2 == 0:
        raise ValueError("zero discriminant: parameters on a family boundary")
    a = 2 * int(d_s1 > 0) + 2 * int(d_s2 > 0)
    return "C2", a, a


def discriminants_line(a: Sequence, b: Sequence) -> tuple[Fraction, Fraction, Fraction]:
    """(D_i, D_s1, D_s2) for the line family, normalized to a1 = 1."""
    a0, a1, a2, a3 = (_coerce(v) for v in a)
    b0, b1, b2, b3 = (_coerce(v) for v in b)
    if a1 != 1:
        raise ValueError("discriminants assume the normalization a1 = 1")
    d_i = (2 * a2 + b3) ** 2 + 8 * b2 * a3
    d_s1 = (a3 * (2 * a0 + 2 * a2 + b1) - 2 * a0 - 2 * a2 - b1 - b3) ** 2 - 4 * (
        a3**2 - 2 * a3 + 2
    ) * ((a0 + a2) * (a0 + a2 + b1) - b0 - b2)
    d_s2 = (a3 * (-2 * a0 + 2 * a2 - b1) - 2 * a0 + 2 * a2 - b1 + b3) ** 2 - 4 * (
        a3**2 + 2 * a3 + 2
    ) * ((a0 - a2) * (a0 - a2 + b1) - b0 + b2)
    return d_i, d_s1, d_s2


def ab_from_line(a: Sequence, b: Sequence) -> tuple[int, int]:
    """Closed-form (a, b) for the line family from the discriminant signs.

    The semidefinite node pairs are real when D_s1 resp. D_s2 is positive,
    the indefinite pair when D_i is positive; zero discriminants are
    rejected as boundary-of-family parameters.
    """
    d_i, d_s1, d_s2 = discriminants_line(a, b)
    if d_i == 0 or d_s1 == 0 or d_s2 == 0:
        raise ValueError("zero discriminant: parameters on a family boundary")
    semis = int(d_s1 > 0) + int(d_s2 > 0)
    count_a = 2 * semis + 2 * int(d_i > 0)
    count_b = 2 * semis
    return count_a, count_b


# ---------------------------------------------------------------------------
# table corpus


@dataclass(frozen=True)
class TableRow:
    table_id: int
    ab: tuple[int, int]
    column: str  # "onboundary" | "disjoint" | "-"
    first: tuple
    second: tuple

    def pencil(self) -> Pencil:
        if self.table_id == 1:
            return triple_pencil(self.first, self.second)
        if self.table_id == 2:
            return tacnode_pencil(self.first, self.second, on_boundary=self.column == "onboundary")
        if self.table_id == 3:
            return line_pencil(self.first, self.second)
        if self.table_id == 4:
            return twolines_table_pencil(self.first, self.second, on_boundary=self.column == "onboundary")
        raise ValueError(f"unknown table id {self.table_id}")

    def expected_type(self) -> str:
        if self.table_id == 1:
            return "A"
        if self.table_id == 2:
            return "B1" if self.column == "onboundary" else "B2"
        if self.table_id == 3:
            return "D"
        return "F1" if self.column == "onboundary" else "F2"


def _data_text(table_id: int) -> str:
    return resources.files("symlab.data").joinpath(f"table{table_id}.txt").read_text()


def corpus_checksums() -> dict[str, str]:
    out = {}
    for i in (1, 2, 3, 4):
        out[f"table{i}"] = hashlib.sha256(_data_text(i).encode()).hexdigest()[:16]
    return out


def load_table(table_id: int) -> list[TableRow]:
    """Parse a bundled table file into rows, with row-numbered errors."""
    if table_id not in (1, 2, 3, 4):
        raise ValueError("table id must be 1..4")
    rows = []
    for lineno, line in enumerate(_data_text(table_id).splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            tid, ab, column, first, second = (part.strip() for part in line.split(";"))
            ab = ab.strip("() ")
            a, b = (int(v) for v in ab.split(","))
            t1 = tuple(Fraction(v) for v in first.split(","))
            t2 = tuple(Fraction(v) for v in second.split(","))
            want = 4 if int(tid) == 3 else 10
            if len(t1) != want or len(t2) != want:
                raise ValueError(f"expected {want}-tuples")
            rows.append(TableRow(int(tid), (a, b), column, t1, t2))
        except Exception as exc:
            raise ValueError(f"table{table_id}.txt line {lineno}: {exc}") from exc
    return rows


def reproduce_table(table_id: int, seed: int = 0, cfg=None) -> list[dict]:
    """Classify every row of a table and compare against its claim."""
    from .classify import classify  # deferred: classify imports this module

    results = []
    for idx, row in enumerate(load_table(table_id)):
        got = classify(row.pencil(), seed=seed, cfg=cfg)
        ok = (
            got.type_tag == row.expected_type()
            and (got.a, got.b) == row.ab
            and got.spectrahedral == "witnessed"
        )
        results.append(
            {
                "table": table_id,
                "row": idx,
                "claimed": {"type": row.expected_type(), "a": row.ab[0], "b": row.ab[1]},
                "got": {"type": got.type_tag, "a": got.a, "b": got.b, "spectrahedral": got.spectrahedral},
                "pass": bool(ok),
            }
        )
    return results
