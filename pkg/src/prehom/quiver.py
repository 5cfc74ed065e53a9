"""Representations of the algebra A_{t,1}.

Vertices are ``1..t``; there are arrows ``alpha_i: i -> i+1`` and
``beta_j: j+2 -> j`` subject to ``beta_1 alpha_2 = 0`` and
``beta_{i+1} alpha_{i+2} = alpha_i beta_i``.  A module stores one matrix per
arrow (rows indexed by the target space), over an exact field.

Standard modules ``Delta(J)`` are built on the canonical bases: ``alpha`` is
the inclusion of the first coordinates and ``beta`` shifts ``e_h -> e_{h-1}``.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import Sequence

from . import linalg
from .errors import InadmissibleIndex, NotDeltaGood, NotStandardSubset, WrongSubsetShape
from .fields import Field, QQ, field_from_name
from .matrix_model import IdealElement

Matrix = list  # list of rows


@dataclass(frozen=True)
class StandardSubset:
    elements: tuple[int, ...]
    t: int

    def __post_init__(self):
        els = tuple(sorted(int(j) for j in self.elements))
        object.__setattr__(self, "elements", els)
        if len(set(els)) != len(els):
            raise NotStandardSubset(f"repeated element in {els}")
        for j in els:
            if not 1 <= j <= self.t:
                raise NotStandardSubset(f"{j} is outside 1..{self.t}")
        for a, b in zip(els, els[1:]):
            if b == a + 1:
                raise NotStandardSubset(f"{a} and {b} are adjacent")

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, j):
        return j in self.elements

    def __str__(self):
        return "{" + ",".join(map(str, self.elements)) + "}"


def standard_subsets(t: int) -> list[StandardSubset]:
    """All standard subsets of ``{1..t}``, the empty one included."""
    out: list[tuple[int, ...]] = [()]
    for j in range(1, t + 1):
        out += [s + (j,) for s in out if not s or s[-1] < j - 1]
    return [StandardSubset(s, t) for s in sorted(out, key=lambda s: (len(s), s))]


@dataclass(frozen=True, eq=False)
class QuiverModule:
    t: int
    dims: tuple[int, ...]
    alpha: tuple[Matrix, ...]   # alpha[i-1]: M_i -> M_{i+1}
    beta: tuple[Matrix, ...]    # beta[j-1]: M_{j+2} -> M_j
    field: Field = QQ
    l: int = 1

    def __post_init__(self):
        assert self.l == 1, "only A_{t,1} is implemented"
        assert len(self.dims) == self.t
        assert len(self.alpha) == max(self.t - 1, 0)
        assert len(self.beta) == max(self.t - 2, 0)
        for i, a in enumerate(self.alpha, start=1):
            _check_shape(a, self.dim(i + 1), self.dim(i), f"alpha_{i}")
        for j, b in enumerate(self.beta, start=1):
            _check_shape(b, self.dim(j), self.dim(j + 2), f"beta_{j}")

    def dim(self, i: int) -> int:
        """``dim M_i``, zero outside ``1..t``."""
        return self.dims[i - 1] if 1 <= i <= self.t else 0

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def a(self, i: int) -> Matrix:
        return self.alpha[i - 1]

    def b(self, j: int) -> Matrix:
        return self.beta[j - 1]

    def relations_hold(self) -> bool:
        f = self.field
        if self.t >= 3:
            if not linalg.is_zero_matrix(linalg.mat_mul(self.b(1), self.a(2), f), f):
                return False
        for i in range(1, self.t - 2):
            cols = self.dim(i + 2)
            lhs = linalg.mat_mul(self.b(i + 1), self.a(i + 2), f, cols)
            rhs = linalg.mat_mul(self.a(i), self.b(i), f, cols)
            if lhs != rhs:
                return False
        return True

    def delta_dim(self) -> tuple[int, ...]:
        return tuple(self.dim(i) - self.dim(i - 1) for i in range(1, self.t + 1))

    def to_json(self) -> dict:
        fmt = self.field.format
        return {
            "schema": 1,
            "t": self.t,
            "l": self.l,
            "field": self.field.name,
            "dims": list(self.dims),
            "alpha": [[[fmt(v) for v in row] for row in m] for m in self.alpha],
            "beta": [[[fmt(v) for v in row] for row in m] for m in self.beta],
        }

    @classmethod
    def from_json(cls, payload: dict | str) -> "QuiverModule":
        if isinstance(payload, str):
            payload = json.loads(payload)
        field = field_from_name(payload.get("field", "QQ"))
        dims = tuple(payload["dims"])

        def mats(key, shapes):
            out = []
            for m, (r, c) in zip(payload[key], shapes):
                rows = [[field.parse(str(v)) for v in row] for row in m]
                out.append(rows if rows else [[] for _ in range(r)])
            return tuple(out)

        t = payload["t"]
        d = lambda i: dims[i - 1]
        alpha = mats("alpha", [(d(i + 1), d(i)) for i in range(1, t)])
        beta = mats("beta", [(d(j), d(j + 2)) for j in range(1, t - 1)])
        return cls(t, dims, alpha, beta, field, payload.get("l", 1))


def _check_shape(m: Matrix, rows: int, cols: int, name: str) -> None:
    if len(m) != rows or any(len(r) != cols for r in m):
        raise ValueError(f"{name} should be {rows}x{cols}")


def _inclusion(rows: int, cols: int, field: Field) -> Matrix:
    m = linalg.zeros(rows, cols, field)
    for k in range(min(rows, cols)):
        m[k][k] = field.one
    return m


def _shift(rows: int, cols: int, field: Field) -> Matrix:
    """``e_h -> e_{h-1}`` for ``h >= 2`` and ``e_1 -> 0``."""
    m = linalg.zeros(rows, cols, field)
    for h in range(2, cols + 1):
        if h - 1 <= rows:
            m[h - 2][h - 1] = field.one
    return m


def as_standard_subset(J, t: int) -> StandardSubset:
    if isinstance(J, StandardSubset):
        if J.t != t:
            return StandardSubset(J.elements, t)
        return J
    return StandardSubset(tuple(J), t)


def standard_module(J, t: int, field: Field = QQ) -> QuiverModule:
    J = as_standard_subset(J, t)
    dims = tuple(sum(1 for j in J if j <= i) for i in range(1, t + 1))
    d = lambda i: dims[i - 1]
    alpha = tuple(_inclusion(d(i + 1), d(i), field) for i in range(1, t))
    beta = tuple(_shift(d(j), d(j + 2), field) for j in range(1, t - 1))
    return QuiverModule(t, dims, alpha, beta, field)


def projective_support(i: int) -> tuple[int, ...]:
    """``{..., i-4, i-2, i}``: the standard subset whose module is P(i)."""
    return tuple(range(i % 2 or 2, i + 1, 2)) if i >= 1 else ()


def projective(i: int, t: int, field: Field = QQ) -> QuiverModule:
    return standard_module(projective_support(i), t, field)


def delta(i: int, t: int, field: Field = QQ) -> QuiverModule:
    return standard_module((i,), t, field)


def zero_module(t: int, field: Field = QQ) -> QuiverModule:
    return standard_module((), t, field)


def direct_sum(*modules: QuiverModule) -> QuiverModule:
    first = modules[0]
    t, field = first.t, first.field
    dims = tuple(sum(m.dim(i) for m in modules) for i in range(1, t + 1))

    def block(get, rows_of, cols_of):
        out = linalg.zeros(sum(map(rows_of, modules)), sum(map(cols_of, modules)), field)
        r0 = c0 = 0
        for m in modules:
            for r, row in enumerate(get(m)):
                for c, v in enumerate(row):
                    out[r0 + r][c0 + c] = v
            r0 += rows_of(m)
            c0 += cols_of(m)
        return out

    alpha = tuple(block(lambda m: m.a(i), lambda m: m.dim(i + 1), lambda m: m.dim(i))
                  for i in range(1, t))
    beta = tuple(block(lambda m: m.b(j), lambda m: m.dim(j), lambda m: m.dim(j + 2))
                 for j in range(1, t - 1))
    return QuiverModule(t, dims, alpha, beta, field)


# -- homomorphisms ----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Morphism:
    source: QuiverModule
    target: QuiverModule
    maps: tuple[Matrix, ...]  # maps[i-1]: source_i -> target_i

    def at(self, i: int) -> Matrix:
        return self.maps[i - 1]

    def is_homomorphism(self) -> bool:
        return is_homomorphism(self.source, self.target, self.maps)

    def compose(self, first: "Morphism") -> "Morphism":
        """``self o first``."""
        f = self.source.field
        return Morphism(first.source, self.target,
                        tuple(linalg.mat_mul(a, b, f, first.source.dim(i))
                              for i, (a, b) in enumerate(zip(self.maps, first.maps), start=1)))

    def is_zero(self) -> bool:
        return all(linalg.is_zero_matrix(m, self.source.field) for m in self.maps)

    def is_injective(self) -> bool:
        f = self.source.field
        return all(linalg.matrix_rank(m, f) == self.source.dim(i)
                   for i, m in enumerate(self.maps, start=1))

    def is_surjective(self) -> bool:
        f = self.source.field
        return all(linalg.matrix_rank(m, f) == self.target.dim(i)
                   for i, m in enumerate(self.maps, start=1))

    def is_isomorphism(self) -> bool:
        return self.source.dims == self.target.dims and self.is_injective()


def _sparse(m: Matrix, field: Field) -> list[tuple[int, int, object]]:
    return [(r, c, v) for r, row in enumerate(m) for c, v in enumerate(row) if not field.is_zero(v)]


class _HomSystem:
    """Linear equations whose solutions are the homomorphisms ``M -> N``."""

    def __init__(self, M: QuiverModule, N: QuiverModule):
        if M.t != N.t:
            raise ValueError("modules over different algebras")
        self.M, self.N = M, N
        f = self.field = M.field
        t = M.t
        self.offsets = []
        off = 0
        for i in range(1, t + 1):
            self.offsets.append(off)
            off += N.dim(i) * M.dim(i)
        self.nvars = off
        rows: list[dict] = []
        for i in range(1, t):
            # phi_{i+1} alpha^M_i - alpha^N_i phi_i = 0
            rows += self._commute(i + 1, _sparse(M.a(i), f), _sparse(N.a(i), f), i,
                                  N.dim(i + 1), M.dim(i))
        for j in range(1, t - 1):
            # phi_j beta^M_j - beta^N_j phi_{j+2} = 0
            rows += self._commute(j, _sparse(M.b(j), f), _sparse(N.b(j), f), j + 2,
                                  N.dim(j), M.dim(j + 2))
        self.rows = rows

    def var(self, i: int, r: int, c: int) -> int:
        return self.offsets[i - 1] + r * self.M.dim(i) + c

    def _commute(self, left_vertex, right_factor, left_factor, right_vertex, nrows, ncols):
        """Rows of ``phi_left @ R - L @ phi_right`` (entries r, c)."""
        f = self.field
        eqs: dict[tuple[int, int], dict] = {}
        # phi_left[r, k] * R[k, c]
        for k, c, v in right_factor:
            for r in range(nrows):
                row = eqs.setdefault((r, c), {})
                key = self.var(left_vertex, r, k)
                row[key] = f.add(row.get(key, f.zero), v)
        # - L[r, k] * phi_right[k, c]
        for r, k, v in left_factor:
            for c in range(ncols):
                row = eqs.setdefault((r, c), {})
                key = self.var(right_vertex, k, c)
                row[key] = f.sub(row.get(key, f.zero), v)
        return [{k: v for k, v in row.items() if not f.is_zero(v)} for row in eqs.values()]

    def unpack(self, vec: Sequence) -> tuple[Matrix, ...]:
        out = []
        for i in range(1, self.M.t + 1):
            rows, cols = self.N.dim(i), self.M.dim(i)
            base = self.offsets[i - 1]
            out.append([[vec[base + r * cols + c] for c in range(cols)] for r in range(rows)])
        return tuple(out)


@dataclass(frozen=True, eq=False)
class HomSpace:
    source: QuiverModule
    target: QuiverModule
    dimension: int
    basis: tuple[Morphism, ...]


def hom_dim(M: QuiverModule, N: QuiverModule) -> int:
    """``dim Hom(M, N)`` by exact elimination of the commutation equations."""
    sys = _HomSystem(M, N)
    if sys.nvars == 0:
        return 0
    return sys.nvars - linalg.rank(sys.rows, M.field)


def hom_space(M: QuiverModule, N: QuiverModule) -> HomSpace:
    sys = _HomSystem(M, N)
    basis = linalg.nullspace(sys.rows, sys.nvars, M.field) if sys.nvars else []
    morphs = tuple(Morphism(M, N, sys.unpack(v)) for v in basis)
    return HomSpace(M, N, len(morphs), morphs)


def is_homomorphism(M: QuiverModule, N: QuiverModule, maps: Sequence[Matrix]) -> bool:
    f = M.field
    for i in range(1, M.t):
        cols = M.dim(i)
        if (linalg.mat_mul(maps[i], M.a(i), f, cols)
                != linalg.mat_mul(N.a(i), maps[i - 1], f, cols)):
            return False
    for j in range(1, M.t - 1):
        cols = M.dim(j + 2)
        if (linalg.mat_mul(maps[j - 1], M.b(j), f, cols)
                != linalg.mat_mul(N.b(j), maps[j + 1], f, cols)):
            return False
    return True


def is_delta_good(M: QuiverModule) -> bool:
    """True iff every ``alpha_i`` is injective."""
    return all(linalg.matrix_rank(M.a(i), M.field) == M.dim(i) for i in range(1, M.t))


def euler_form(M: QuiverModule, N: QuiverModule) -> int:
    """``<M, N> = sum_i (dim_Delta M)_i (dim N_i - dim N_{i-2})``."""
    if not is_delta_good(M):
        raise NotDeltaGood("the first argument must be Delta-good")
    dd = M.delta_dim()
    return sum(dd[i - 1] * (N.dim(i) - N.dim(i - 2)) for i in range(1, M.t + 1))


def ext1_dim(M: QuiverModule, N: QuiverModule) -> int:
    """``dim Ext^1(M, N)`` for Delta-good ``M`` (projective dimension at most one)."""
    value = hom_dim(M, N) - euler_form(M, N)
    assert value >= 0, "negative Ext dimension: relations or Delta-goodness broken"
    return value


# -- standard modules and their morphisms -----------------------------------

def hom_dim_standard(J, K, t: int | None = None) -> int:
    """Closed formula for ``dim Hom(Delta(J), Delta(K))``."""
    js = tuple(J.elements if isinstance(J, StandardSubset) else sorted(J))
    ks = tuple(K.elements if isinstance(K, StandardSubset) else sorted(K))
    return max((m for m in range(1, min(len(js), len(ks)) + 1) if _admissible(js, ks, m)),
               default=0)


def _admissible(js: Sequence[int], ks: Sequence[int], m: int) -> bool:
    r = len(js)
    if not 1 <= m <= len(ks) or r < m:
        return False
    # j_{r-i} >= k_{m-i} for i = 0..m-1 (1-based indices)
    return all(js[r - i - 1] >= ks[m - i - 1] for i in range(m))


def standard_morphism(J, K, k: int, t: int, field: Field = QQ) -> Morphism:
    """The morphism ``phi^k: Delta(J) -> Delta(K)`` sending ``e_r`` to ``e_m`` at vertex t.

    ``k`` is the element ``k_m`` of ``K`` naming the morphism.
    """
    J, K = as_standard_subset(J, t), as_standard_subset(K, t)
    if k not in K:
        raise InadmissibleIndex(f"{k} is not in {K}")
    m = K.elements.index(k) + 1
    if not _admissible(J.elements, K.elements, m):
        raise InadmissibleIndex(f"phi^{k}: {J} -> {K} does not exist")
    src, tgt = standard_module(J, t, field), standard_module(K, t, field)
    shift = len(J) - m  # e_h -> e_{h - shift}
    maps = []
    for i in range(1, t + 1):
        mat = linalg.zeros(tgt.dim(i), src.dim(i), field)
        for h in range(shift + 1, src.dim(i) + 1):
            mat[h - shift - 1][h - 1] = field.one
        maps.append(mat)
    return Morphism(src, tgt, tuple(maps))


def find_isomorphism(M: QuiverModule, N: QuiverModule, rng: random.Random | None = None,
                     tries: int = 20) -> Morphism | None:
    """Search for an isomorphism ``M -> N`` among random elements of Hom(M, N).

    A returned morphism is a verified isomorphism; ``None`` only means none was found.
    """
    if M.dims != N.dims:
        return None
    rng = rng or random.Random(0)
    space = hom_space(M, N)
    if not space.basis:
        return None if M.total_dim else Morphism(M, N, tuple([] for _ in range(M.t)))
    f = M.field
    for _ in range(tries):
        coeffs = [f.random_element(rng, 50) for _ in space.basis]
        maps = []
        for i in range(M.t):
            acc = linalg.zeros(N.dims[i], M.dims[i], f)
            for c, phi in zip(coeffs, space.basis):
                if f.is_zero(c):
                    continue
                acc = [[f.add(a, f.mul(c, b)) for a, b in zip(ra, rb)]
                       for ra, rb in zip(acc, phi.maps[i])]
            maps.append(acc)
        cand = Morphism(M, N, tuple(maps))
        if cand.is_isomorphism():
            return cand
    return None


# -- the module of an element of n(d) ---------------------------------------

def module_from_element(x: IdealElement) -> QuiverModule:
    """M(x): flag inclusions for alpha, restrictions of ``x`` for beta."""
    d, field = x.d, x.field
    t = d.t
    sums = d.partial_sums()
    dim = lambda i: sums[i - 1] if 1 <= i <= t else 0
    X = x.to_matrix()
    alpha = tuple(_inclusion(dim(i + 1), dim(i), field) for i in range(1, t))
    beta = tuple([row[:dim(j + 2)] for row in X[:dim(j)]] for j in range(1, t - 1))
    return QuiverModule(t, tuple(sums), alpha, beta, field)


def sub_and_quotient(M: QuiverModule, keep: Sequence[Sequence[int]]):
    """Submodule spanned by coordinate vectors and the quotient by it.

    ``keep[i-1]`` lists the (0-based) coordinates of ``M_i`` spanning the
    candidate submodule at vertex ``i``.  Returns ``(sub, quotient)`` in the
    induced coordinate bases, or ``None`` if the span is not a submodule.
    """
    f = M.field
    keep = [list(k) for k in keep]
    rest = [[c for c in range(M.dim(i)) if c not in set(keep[i - 1])] for i in range(1, M.t + 1)]

    def restrict(mat, src, dst):
        # the image of kept coordinates must stay in kept coordinates
        dst_set = set(dst)
        for c in src:
            for r, row in enumerate(mat):
                if r not in dst_set and not f.is_zero(row[c]):
                    return None
        return [[mat[r][c] for c in src] for r in dst]

    def induced(mat, src, dst):
        return [[mat[r][c] for c in src] for r in dst]

    sub_a, quo_a = [], []
    for i in range(1, M.t):
        s = restrict(M.a(i), keep[i - 1], keep[i])
        if s is None:
            return None
        sub_a.append(s)
        quo_a.append(induced(M.a(i), rest[i - 1], rest[i]))
    sub_b, quo_b = [], []
    for j in range(1, M.t - 1):
        s = restrict(M.b(j), keep[j + 1], keep[j - 1])
        if s is None:
            return None
        sub_b.append(s)
        quo_b.append(induced(M.b(j), rest[j + 1], rest[j - 1]))
    sub = QuiverModule(M.t, tuple(len(k) for k in keep), tuple(sub_a), tuple(sub_b), f)
    quo = QuiverModule(M.t, tuple(len(r) for r in rest), tuple(quo_a), tuple(quo_b), f)
    return sub, quo


# -- projective resolution of T = Delta(J) ----------------------------------

@dataclass(frozen=True, eq=False)
class Resolution:
    """``0 -> P1 --psi--> P0 --eps--> T -> 0`` with named summands."""

    T: QuiverModule
    p1_labels: tuple[int, ...]
    p0_labels: tuple[int, ...]
    P1: QuiverModule
    P0: QuiverModule
    psi: Morphism
    eps: Morphism

    def is_exact(self) -> bool:
        dims_ok = all(self.P1.dim(i) - self.P0.dim(i) + self.T.dim(i) == 0
                      for i in range(1, self.T.t + 1))
        return (dims_ok and self.psi.is_homomorphism() and self.eps.is_homomorphism()
                and self.psi.is_injective() and self.eps.is_surjective()
                and self.eps.compose(self.psi).is_zero())

    def ext1_by_counting(self, S: QuiverModule) -> int:
        """``dim Ext^1(T, S)`` from the long exact Hom sequence."""
        hom_p = lambda labels: sum(S.dim(i) for i in labels)  # Hom(P(i), S) = S_i
        return hom_dim(self.T, S) - hom_p(self.p0_labels) + hom_p(self.p1_labels)


def _block_morphism(sources: Sequence[QuiverModule], targets: Sequence[QuiverModule],
                    grid: dict[tuple[int, int], Morphism], src_sum: QuiverModule,
                    tgt_sum: QuiverModule) -> Morphism:
    """Morphism between direct sums given by ``grid[(target_index, source_index)]``."""
    field = src_sum.field
    t = src_sum.t
    maps = []
    for i in range(1, t + 1):
        mat = linalg.zeros(tgt_sum.dim(i), src_sum.dim(i), field)
        r0 = 0
        for a, tg in enumerate(targets):
            c0 = 0
            for b, sc in enumerate(sources):
                phi = grid.get((a, b))
                if phi is not None:
                    for r, row in enumerate(phi.at(i)):
                        for c, v in enumerate(row):
                            mat[r0 + r][c0 + c] = v
                c0 += sc.dim(i)
            r0 += tg.dim(i)
        maps.append(mat)
    return Morphism(src_sum, tgt_sum, tuple(maps))


def _scaled(phi: Morphism, c) -> Morphism:
    f = phi.source.field
    return Morphism(phi.source, phi.target,
                    tuple([[f.mul(c, v) for v in row] for row in m] for m in phi.maps))


def resolve_standard(J, b_list: Sequence[int], c: int, t: int, field: Field = QQ) -> Resolution:
    """Resolution ``0 -> (+) P(b_i) -> (+) P(b_i - 1) (+) P(c) -> Delta(J) -> 0``.

    ``psi`` sends ``P(b_i)`` to ``P(b_i - 1)`` by ``phi^{b_i-1}`` and to the next
    summand (``P(b_{i+1} - 1)``, or ``P(c)`` for the last ``i``) by ``-phi^{b_i}``.
    """
    J = as_standard_subset(J, t)
    b_list = list(b_list)
    if not b_list or c != max(J.elements, default=None):
        raise WrongSubsetShape("need at least one b and c = max J")
    for b in b_list:
        if b - 1 not in J or (b + 2 <= t and b + 2 not in J):
            raise WrongSubsetShape(f"{b - 1} and {b + 2} must lie in {J}")
    p1_labels = tuple(b_list)
    p0_labels = tuple(b - 1 for b in b_list) + (c,)
    P1s = [projective(i, t, field) for i in p1_labels]
    P0s = [projective(i, t, field) for i in p0_labels]
    T = standard_module(J, t, field)
    P1, P0 = direct_sum(*P1s), direct_sum(*P0s)
    grid = {}
    for k, b in enumerate(b_list):
        grid[(k, k)] = standard_morphism(projective_support(b), projective_support(b - 1), b - 1, t, field)
        nxt = p0_labels[k + 1]
        grid[(k + 1, k)] = _scaled(
            standard_morphism(projective_support(b), projective_support(nxt), b, t, field),
            field.neg(field.one))
    psi = _block_morphism(P1s, P0s, grid, P1, P0)
    eps_grid = {(0, k): standard_morphism(projective_support(lab), J, lab, t, field)
                for k, lab in enumerate(p0_labels)}
    eps = _block_morphism(P0s, [T], eps_grid, P0, T)
    return Resolution(T, p1_labels, p0_labels, P1, P0, psi, eps)
