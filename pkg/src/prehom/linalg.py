"""Exact sparse linear algebra over :data:`~prehom.fields.QQ` and F_p.

Rows are ``dict`` objects mapping a column index to a nonzero scalar.  Over
the rationals each incoming row is scaled to a primitive integer row and
eliminated fraction-free, which keeps the numbers small for the integer
matrices that dominate this package; over F_p rows are reduced mod p.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

from .fields import Field, QQ

SparseRow = dict


def sparse_rows(dense: Iterable[Sequence]) -> list[SparseRow]:
    return [{j: v for j, v in enumerate(row) if v != 0} for row in dense]


def _integer_row(row: Mapping) -> dict[int, int]:
    den = 1
    for v in row.values():
        if isinstance(v, Fraction) and v.denominator != 1:
            den = lcm(den, v.denominator)
    out = {}
    for k, v in row.items():
        if v:
            out[k] = int(v * den)
    return _primitive(out)


def _primitive(row: dict[int, int]) -> dict[int, int]:
    if not row:
        return row
    g = gcd(*row.values())
    if row[min(row)] < 0:
        g = -g
    if g != 1:
        row = {k: v // g for k, v in row.items()}
    return row


def _echelon_qq(rows: Iterable[Mapping]) -> dict[int, dict[int, int]]:
    pivots: dict[int, dict[int, int]] = {}
    for raw in rows:
        r = _integer_row(raw)
        while r:
            c = min(r)
            p = pivots.get(c)
            if p is None:
                pivots[c] = r
                break
            a, b = p[c], r[c]
            g = gcd(a, b)
            a //= g
            b //= g
            new = {k: a * v for k, v in r.items()}
            for k, v in p.items():
                w = new.get(k, 0) - b * v
                if w:
                    new[k] = w
                else:
                    new.pop(k, None)
            r = _primitive(new)
    return pivots


def _echelon_mod(rows: Iterable[Mapping], field: Field) -> dict[int, dict[int, int]]:
    p = field.characteristic
    pivots: dict[int, dict[int, int]] = {}
    for raw in rows:
        r = {}
        for k, v in raw.items():
            v = v % p if isinstance(v, int) else field(v)
            if v:
                r[k] = v
        while r:
            c = min(r)
            piv = pivots.get(c)
            if piv is None:
                inv = pow(r[c], -1, p)
                pivots[c] = {k: (v * inv) % p for k, v in r.items()}
                break
            b = r[c]
            for k, v in piv.items():
                w = (r.get(k, 0) - b * v) % p
                if w:
                    r[k] = w
                else:
                    r.pop(k, None)
    return pivots


def echelon(rows: Iterable[Mapping], field: Field = QQ) -> dict[int, dict]:
    """Row echelon form keyed by pivot column.

    Over the rationals the rows are primitive integer rows (pivot entry not
    necessarily 1); over F_p the pivot entry is 1.
    """
    if field.characteristic == 0:
        return _echelon_qq(rows)
    return _echelon_mod(rows, field)


def rank(rows: Iterable, field: Field = QQ) -> int:
    rows = list(rows)
    if rows and not isinstance(rows[0], Mapping):
        rows = sparse_rows(rows)
    return len(echelon(rows, field))


def _reduced(pivots: dict[int, dict], field: Field) -> dict[int, dict]:
    """Fully reduced echelon form with unit pivots, as field elements."""
    red: dict[int, dict] = {}
    for c, row in pivots.items():
        inv = field.inv(field(row[c]))
        red[c] = {k: field.mul(field(v), inv) for k, v in row.items()}
    cols = sorted(red, reverse=True)
    for i, c in enumerate(cols):
        prow = red[c]
        for c2 in cols[i + 1:]:
            q = red[c2]
            f = q.get(c)
            if f is None or field.is_zero(f):
                continue
            for k, v in prow.items():
                w = field.sub(q.get(k, field.zero), field.mul(f, v))
                if field.is_zero(w):
                    q.pop(k, None)
                else:
                    q[k] = w
    return red


def nullspace(rows: Iterable, ncols: int, field: Field = QQ) -> list[list]:
    """Basis of ``{v : row . v = 0 for every row}`` as dense vectors."""
    rows = list(rows)
    if rows and not isinstance(rows[0], Mapping):
        rows = sparse_rows(rows)
    red = _reduced(echelon(rows, field), field)
    free = [j for j in range(ncols) if j not in red]
    basis = []
    for f in free:
        v = [field.zero] * ncols
        v[f] = field.one
        for c, row in red.items():
            a = row.get(f)
            if a is not None:
                v[c] = field.neg(a)
        basis.append(v)
    return basis


def solve_particular(rows: list[Mapping], rhs: list, ncols: int, field: Field = QQ):
    """One solution of ``rows . v = rhs`` or ``None`` when inconsistent."""
    aug = []
    for row, b in zip(rows, rhs):
        r = dict(row)
        if not field.is_zero(field(b)):
            r[ncols] = b
        aug.append(r)
    red = _reduced(echelon(aug, field), field)
    if ncols in red:
        return None
    v = [field.zero] * ncols
    for c, row in red.items():
        v[c] = row.get(ncols, field.zero)
    return v


# Small dense helpers.  Matrices are lists of rows of field elements.


def zeros(m: int, n: int, field: Field = QQ) -> list[list]:
    return [[field.zero] * n for _ in range(m)]


def identity(n: int, field: Field = QQ) -> list[list]:
    out = zeros(n, n, field)
    for i in range(n):
        out[i][i] = field.one
    return out


def mat_mul(a: list[list], b: list[list], field: Field = QQ, ncols: int | None = None) -> list[list]:
    """``a @ b``; pass ``ncols`` when ``b`` may have no rows."""
    if not a:
        return []
    inner = len(b)
    if ncols is None:
        ncols = len(b[0]) if b else 0
    out = zeros(len(a), ncols, field)
    for i, row in enumerate(a):
        acc = out[i]
        for k in range(inner):
            x = row[k]
            if field.is_zero(x):
                continue
            bk = b[k]
            for j in range(ncols):
                y = bk[j]
                if not field.is_zero(y):
                    acc[j] = field.add(acc[j], field.mul(x, y))
    return out


def mat_sub(a: list[list], b: list[list], field: Field = QQ) -> list[list]:
    return [[field.sub(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def is_zero_matrix(a: list[list], field: Field = QQ) -> bool:
    return all(field.is_zero(x) for row in a for x in row)


def inverse(a: list[list], field: Field = QQ) -> list[list]:
    """Inverse of a square matrix by Gauss-Jordan; raises on singular input."""
    n = len(a)
    m = [list(row) + [field.one if i == j else field.zero for j in range(n)]
         for i, row in enumerate(a)]
    for c in range(n):
        piv = next((r for r in range(c, n) if not field.is_zero(m[r][c])), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        m[c], m[piv] = m[piv], m[c]
        inv = field.inv(m[c][c])
        m[c] = [field.mul(v, inv) for v in m[c]]
        for r in range(n):
            f = m[r][c]
            if r != c and not field.is_zero(f):
                m[r] = [field.sub(v, field.mul(f, w)) for v, w in zip(m[r], m[c])]
    return [row[n:] for row in m]


def matrix_rank(a: list[list], field: Field = QQ) -> int:
    return rank(sparse_rows(a), field)
