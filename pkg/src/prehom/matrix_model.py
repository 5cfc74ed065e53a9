"""The ideal n(d) inside the strictly upper triangular matrices.

Basis vectors are labelled by ``supp d``.  The root ``(i, j)`` (with ``i``,
``j`` in ``supp d``) stands for the matrix unit ``f_ij`` with a one in row
``gamma(i)`` and column ``gamma(j)``, so ``f_ij`` sends ``f_j`` to ``f_i``.
It lies in n(d) exactly when ``i <= j - 2``.

Roots are enumerated in the order ``(i, j) < (i', j')`` iff ``j < j'``, or
``j == j'`` and ``i > i'``; position ``l`` in that list is "level" ``l``.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field as dc_field
from functools import cached_property, lru_cache
from typing import Iterable, Mapping

from .combinatorics import ThinDimVector, relabel, validate_thin
from .errors import RootNotInIdeal, ZeroCoefficient
from .fields import Field, QQ, field_from_name
from . import linalg

Root = tuple[int, int]


def root_order_key(root: Root) -> tuple[int, int]:
    i, j = root
    return (j, -i)


@dataclass(frozen=True)
class RootSet:
    d: ThinDimVector
    roots: tuple[Root, ...]

    @cached_property
    def index(self) -> dict[Root, int]:
        """0-based position of each root in the order."""
        return {r: k for k, r in enumerate(self.roots)}

    @property
    def dim(self) -> int:
        return len(self.roots)

    def __contains__(self, root) -> bool:
        return root in self.index

    def __iter__(self):
        return iter(self.roots)

    def __len__(self) -> int:
        return len(self.roots)


@lru_cache(maxsize=None)
def ideal_roots(d: ThinDimVector) -> RootSet:
    supp = d.support
    roots = [(i, j) for j in supp for i in supp if i <= j - 2]
    return RootSet(d, tuple(sorted(roots, key=root_order_key)))


@dataclass(frozen=True)
class IdealElement:
    """A sparse element of n(d); ``entries`` is sorted in root order."""

    d: ThinDimVector
    entries: tuple[tuple[Root, object], ...]
    field: Field = dc_field(default=QQ, compare=True)

    @cached_property
    def coefficients(self) -> dict[Root, object]:
        return dict(self.entries)

    def coefficient(self, root: Root):
        return self.coefficients.get(root, self.field.zero)

    @property
    def support(self) -> tuple[Root, ...]:
        return tuple(r for r, _ in self.entries)

    @property
    def n(self) -> int:
        return self.d.n

    def is_zero(self) -> bool:
        return not self.entries

    def to_matrix(self) -> list[list]:
        gamma = relabel(self.d).gamma
        m = linalg.zeros(self.n, self.n, self.field)
        for (i, j), v in self.entries:
            m[gamma[i] - 1][gamma[j] - 1] = v
        return m

    def coordinates(self) -> list:
        """Dense coordinate vector in root order."""
        rs = ideal_roots(self.d)
        vec = [self.field.zero] * rs.dim
        for r, v in self.entries:
            vec[rs.index[r]] = v
        return vec

    def truncate(self, level: int) -> "IdealElement":
        """Image in n / m_level: keep only the first ``level`` coordinates."""
        idx = ideal_roots(self.d).index
        return IdealElement(self.d, tuple((r, v) for r, v in self.entries if idx[r] < level),
                            self.field)

    def to_json(self) -> dict:
        return {
            "d": list(self.d.entries),
            "field": self.field.name,
            "entries": [[i, j, self.field.format(v)] for (i, j), v in self.entries],
        }

    def __str__(self) -> str:
        if not self.entries:
            return "0"
        terms = []
        for (i, j), v in self.entries:
            coeff = "" if v == 1 else f"{self.field.format(v)}*"
            terms.append(f"{coeff}f[{i},{j}]")
        return " + ".join(terms)


def element_from_sparse(d: ThinDimVector, pairs: Iterable[tuple[Root, object]] | Mapping,
                        field: Field = QQ, drop_zeros: bool = False) -> IdealElement:
    if isinstance(pairs, Mapping):
        pairs = pairs.items()
    rs = ideal_roots(d)
    acc: dict[Root, object] = {}
    for root, v in pairs:
        root = (int(root[0]), int(root[1]))
        if root not in rs:
            raise RootNotInIdeal(f"{root} is not a root of n({d})")
        v = field(v)
        if field.is_zero(v) and not drop_zeros:
            raise ZeroCoefficient(f"zero coefficient at {root}")
        acc[root] = field.add(acc.get(root, field.zero), v)
    items = [(r, v) for r, v in acc.items() if not field.is_zero(v)]
    items.sort(key=lambda rv: rs.index[rv[0]])
    return IdealElement(d, tuple(items), field)


def element_from_matrix(d: ThinDimVector, m: list[list], field: Field = QQ) -> IdealElement:
    """Read an n x n matrix back as an element of n(d)."""
    inv = relabel(d).inverse
    pairs = []
    for a, row in enumerate(m, start=1):
        for b, v in enumerate(row, start=1):
            if not field.is_zero(v):
                pairs.append(((inv[a], inv[b]), v))
    return element_from_sparse(d, pairs, field)


def element_from_coordinates(d: ThinDimVector, coords: Iterable, field: Field = QQ) -> IdealElement:
    rs = ideal_roots(d)
    return element_from_sparse(d, [(r, v) for r, v in zip(rs.roots, coords)], field,
                               drop_zeros=True)


def element_from_json(payload: dict | str) -> IdealElement:
    if isinstance(payload, str):
        payload = json.loads(payload)
    field = field_from_name(payload.get("field", "QQ"))
    d = validate_thin(payload["d"])
    return element_from_sparse(d, [((i, j), field.parse(str(v))) for i, j, v in payload["entries"]],
                               field)


def zero_element(d: ThinDimVector, field: Field = QQ) -> IdealElement:
    return IdealElement(d, (), field)


def ad_matrix(x: IdealElement) -> list[dict[int, object]]:
    """Rows ``[E_ab, x]`` for every upper triangular unit ``E_ab``, in root coordinates."""
    d, field = x.d, x.field
    n = d.n
    rs = ideal_roots(d)
    lab = relabel(d)
    inv, gamma = lab.inverse, lab.gamma
    col_of = {(gamma[i] - 1, gamma[j] - 1): k for (i, j), k in rs.index.items()}
    X = x.to_matrix()
    rows = []
    for a in range(n):
        for b in range(a, n):
            row: dict[int, object] = {}
            # E_ab X puts row b of X into row a
            for c in range(n):
                v = X[b][c]
                if not field.is_zero(v):
                    _acc(row, col_of, (a, c), v, field, inv)
            # X E_ab puts column a of X into column b, negated
            for r in range(n):
                v = X[r][a]
                if not field.is_zero(v):
                    _acc(row, col_of, (r, b), field.neg(v), field, inv)
            rows.append({k: v for k, v in row.items() if not field.is_zero(v)})
    return rows


def _acc(row, col_of, pos, v, field, inv):
    k = col_of.get(pos)
    if k is None:
        raise AssertionError(f"bracket left the ideal at {(inv[pos[0] + 1], inv[pos[1] + 1])}")
    row[k] = field.add(row.get(k, field.zero), v)


def ad_image_rank(x: IdealElement) -> int:
    """Rank of ``b -> [b, x]`` from the upper triangular matrices to n(d)."""
    if x.is_zero():
        return 0
    return linalg.rank(ad_matrix(x), x.field)


def orbit_codim(x: IdealElement) -> int:
    """Codimension of the B-orbit of ``x`` in n(d)."""
    return ideal_roots(x.d).dim - ad_image_rank(x)


def jordan_type(x: IdealElement) -> tuple[int, ...]:
    """Jordan block sizes of the nilpotent matrix ``x``, largest first."""
    n, field = x.n, x.field
    ranks = [n]
    X = x.to_matrix()
    power = X
    while ranks[-1] > 0:
        ranks.append(linalg.matrix_rank(power, field))
        power = linalg.mat_mul(power, X, field)
    # blocks of size >= k number ranks[k-1] - ranks[k]
    at_least = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))]
    blocks = []
    for k, cnt in enumerate(at_least, start=1):
        nxt = at_least[k] if k < len(at_least) else 0
        blocks.extend([k] * (cnt - nxt))
    return tuple(sorted(blocks, reverse=True))


def random_element(d: ThinDimVector, field: Field = QQ, seed: int | random.Random = 0,
                   bound: int = 100) -> IdealElement:
    """Coefficients uniform in ``[-bound, bound]`` (rationals) or in F_p."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    coords = [field.random_element(rng, bound) for _ in ideal_roots(d).roots]
    return element_from_coordinates(d, coords, field)


def random_borel_element(n: int, field: Field = QQ, rng: random.Random | None = None,
                         bound: int = 5) -> list[list]:
    """A random invertible upper triangular matrix."""
    rng = rng or random.Random(0)
    g = linalg.zeros(n, n, field)
    for a in range(n):
        g[a][a] = field.random_nonzero(rng, bound)
        for b in range(a + 1, n):
            g[a][b] = field.random_element(rng, bound)
    return g


def conjugate(x: IdealElement, g: list[list]) -> IdealElement:
    """``g x g^-1`` read back as an element of n(d)."""
    field = x.field
    prod = linalg.mat_mul(linalg.mat_mul(g, x.to_matrix(), field), linalg.inverse(g, field), field)
    return element_from_matrix(x.d, prod, field)


def flag_membership(d: ThinDimVector, i: int, j: int) -> bool:
    """Does ``f_ij`` map ``V_m`` into ``V_{m-2}`` for every m?  (Direct flag check.)"""
    for m in range(1, d.t + 1):
        in_vm = j <= m  # f_j in V_m
        if in_vm and not i <= m - 2:
            return False
    return True
