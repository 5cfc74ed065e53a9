"""Brute-force B(q)-orbits on n(d) over a prime field.

An element of n(d) over F_q is stored as an integer code: its coordinates
in root order are the base-q digits, the first root being the most
significant digit.  Numeric order on codes is then lexicographic order on
coordinate vectors, so the least code of an orbit is its canonical key.

Conjugation by a group element is linear on coordinates, hence each
generator of B(q) becomes a D x D matrix over F_q (D = dim n) that is lower
triangular in root order.  Truncating to the first l coordinates gives the
action on n_l = n / m_l.  Whole orbit partitions are connected components
of the generator graph (scipy); single orbits are found by a vectorised
breadth-first search.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .combinatorics import ThinDimVector, classify, relabel
from .constructions import decompose_JK
from .errors import BudgetExceeded, NonPrimeField, NotAPowerOfQ, NotMinimal
from .fields import GF, is_prime
from .matrix_model import IdealElement, element_from_coordinates, ideal_roots

DEFAULT_BUDGET = 1 << 24
BITMAP_LIMIT = 1 << 26  # dense visited arrays up to 64 MB


class FiniteFieldContext:
    """Generator matrices of B(q) and U(q) acting on the coordinates of n(d)."""

    def __init__(self, d: ThinDimVector, q: int):
        if not is_prime(q):
            raise NonPrimeField(f"{q} is not prime")
        self.d, self.q = d, q
        self.field = GF(q)
        self.roots = ideal_roots(d)
        self.D = self.roots.dim
        self.n = d.n
        lab = relabel(d)
        # 0-based matrix positions of each root
        self.pos = [(lab.gamma[i] - 1, lab.gamma[j] - 1) for i, j in self.roots.roots]
        self.powers = np.array([q ** (self.D - 1 - k) for k in range(self.D)], dtype=np.int64)

    @property
    def n_states(self) -> int:
        return self.q ** self.D

    @property
    def group_order(self) -> int:
        n, q = self.n, self.q
        return (q - 1) ** n * q ** (n * (n - 1) // 2)

    @cached_property
    def unipotent_generators(self) -> list[np.ndarray]:
        """``1 + E_ab`` for every a < b; over a prime field these generate U(q)."""
        out = []
        n = self.n
        for a in range(n):
            for b in range(a + 1, n):
                out.append(self._conjugation_matrix(lambda r, c: _unipotent_image(r, c, a, b)))
        return out

    @cached_property
    def torus_generators(self) -> list[np.ndarray]:
        """The diagonal matrix with a primitive root at one position, for each position."""
        w = self.field.primitive_root()
        winv = pow(w, -1, self.q)
        out = []
        for a in range(self.n):
            factors = []
            for r, c in self.pos:
                f = 1
                if r == a:
                    f = f * w % self.q
                if c == a:
                    f = f * winv % self.q
                factors.append(f)
            out.append(np.diag(np.array(factors, dtype=np.int64)))
        return [m for m in out if not np.array_equal(m, np.eye(self.D, dtype=np.int64))]

    @property
    def borel_generators(self) -> list[np.ndarray]:
        return self.unipotent_generators + self.torus_generators

    def _conjugation_matrix(self, image) -> np.ndarray:
        """Matrix whose column k holds the coordinates of ``g E_k g^-1``."""
        index = {p: k for k, p in enumerate(self.pos)}
        M = np.zeros((self.D, self.D), dtype=np.int64)
        for k, (r, c) in enumerate(self.pos):
            for (r2, c2), v in image(r, c).items():
                v %= self.q
                if v:
                    M[index[(r2, c2)], k] = v
        assert np.array_equal(M, np.tril(M)), "conjugation moved a coordinate to an earlier root"
        return M

    @cached_property
    def torus_factors(self) -> np.ndarray:
        """Row per element of T(q): the scalar by which it multiplies each coordinate."""
        q = self.q
        units = range(1, q)
        rows = []
        for tvec in itertools.product(units, repeat=self.n):
            rows.append([tvec[r] * pow(tvec[c], -1, q) % q for r, c in self.pos])
        return np.array(rows, dtype=np.int64).reshape(-1, self.D)

    # -- codes ----------------------------------------------------------------

    def encode_digits(self, digits: np.ndarray, level: int | None = None) -> np.ndarray:
        l = self.D if level is None else level
        pw = self.powers[self.D - l:] if l else self.powers[:0]
        return digits @ pw

    def decode(self, codes: np.ndarray, level: int | None = None) -> np.ndarray:
        l = self.D if level is None else level
        pw = self.powers[self.D - l:]
        return (codes[:, None] // pw[None, :]) % self.q

    def code_of(self, y: IdealElement) -> int:
        self._check(y)
        return int(sum(int(v) * int(p) for v, p in zip(y.coordinates(), self.powers)))

    def element(self, code: int) -> IdealElement:
        digits = self.decode(np.array([code], dtype=np.int64))[0]
        return element_from_coordinates(self.d, [int(v) for v in digits], self.field)

    def digits_str(self, code: int) -> str:
        return ",".join(str(int(v)) for v in self.decode(np.array([code], dtype=np.int64))[0])

    def _check(self, y: IdealElement) -> None:
        if y.d != self.d or y.field != self.field:
            raise ValueError(f"element lives in n({y.d}) over {y.field}, context is "
                             f"n({self.d}) over {self.field}")

    # -- actions --------------------------------------------------------------

    def apply(self, M: np.ndarray, codes: np.ndarray, level: int | None = None) -> np.ndarray:
        l = self.D if level is None else level
        if l == 0:
            return codes.copy()
        digits = self.decode(codes, l)
        block = M[:l, :l]
        return self.encode_digits((digits @ block.T) % self.q, l)

    def closure(self, start, mats: list[np.ndarray], level: int | None = None,
                budget: int = DEFAULT_BUDGET) -> np.ndarray:
        """Sorted codes of the orbit of ``start`` under the group generated by ``mats``."""
        start = np.unique(np.asarray(start, dtype=np.int64))
        l = self.D if level is None else level
        if self.q ** l <= BITMAP_LIMIT:
            return self._closure_bitmap(start, mats, l, budget)
        visited = start
        frontier = visited
        while frontier.size:
            images = np.unique(np.concatenate([self.apply(M, frontier, level) for M in mats]))
            new = images[~np.isin(images, visited, assume_unique=True)]
            if not new.size:
                break
            visited = np.union1d(visited, new)
            if visited.size > budget:
                raise BudgetExceeded(int(visited.size), budget)
            frontier = new
        return visited

    def _closure_bitmap(self, start, mats, level, budget) -> np.ndarray:
        seen = np.zeros(self.q ** level, dtype=bool)
        seen[start] = True
        count = start.size
        frontier = start
        while frontier.size:
            images = np.unique(np.concatenate([self.apply(M, frontier, level) for M in mats]))
            new = images[~seen[images]]
            seen[new] = True
            count += new.size
            if count > budget:
                raise BudgetExceeded(int(count), budget)
            frontier = new
        return np.flatnonzero(seen)

    def components(self, mats: list[np.ndarray], level: int | None = None,
                   budget: int = DEFAULT_BUDGET) -> np.ndarray:
        """Orbit label of every state of n_level; labels ordered by least code."""
        l = self.D if level is None else level
        N = self.q ** l
        if N > budget:
            raise BudgetExceeded(N, budget)
        codes = np.arange(N, dtype=np.int64)
        if not mats or l == 0:
            return codes
        digits = self.decode(codes, l)
        cols = []
        for M in mats:
            cols.append(self.encode_digits((digits @ M[:l, :l].T) % self.q, l))
        del digits
        rows = np.tile(codes, len(mats))
        cols = np.concatenate(cols)
        graph = csr_matrix((np.ones(rows.size, dtype=np.int8), (rows, cols)), shape=(N, N))
        _, labels = connected_components(graph, directed=True, connection="weak")
        # renumber so that orbit k has the k-th smallest least code
        _, first = np.unique(labels, return_index=True)
        order = np.empty_like(first)
        order[np.argsort(first)] = np.arange(first.size)
        return order[labels]


def _unipotent_image(r: int, c: int, a: int, b: int) -> dict[tuple[int, int], int]:
    """``(1 + E_ab) E_rc (1 - E_ab)`` as a sparse matrix."""
    out: dict[tuple[int, int], int] = {}

    def add(pos, v):
        out[pos] = out.get(pos, 0) + v

    add((r, c), 1)
    if b == r:
        add((a, c), 1)
    if c == a:
        add((r, b), -1)
    if b == r and c == a:
        add((a, b), -1)
    return out


# -- per-element invariants ----------------------------------------------------

def _context(y: IdealElement) -> FiniteFieldContext:
    q = y.field.characteristic
    if q == 0:
        raise NonPrimeField("orbit computations need a prime field")
    return _cached_context(y.d, q)


_CONTEXTS: dict[tuple[ThinDimVector, int], FiniteFieldContext] = {}


def _cached_context(d: ThinDimVector, q: int) -> FiniteFieldContext:
    key = (d, q)
    if key not in _CONTEXTS:
        _CONTEXTS[key] = FiniteFieldContext(d, q)
    return _CONTEXTS[key]


def orbit_of(y: IdealElement, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """Codes of ``B(q) . y``."""
    ctx = _context(y)
    return ctx.closure([ctx.code_of(y)], ctx.borel_generators, budget=budget)


def u_orbit(y: IdealElement, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    ctx = _context(y)
    return ctx.closure([ctx.code_of(y)], ctx.unipotent_generators, budget=budget)


def _log_q(size: int, q: int) -> int:
    k, s = 0, size
    while s % q == 0 and s > 1:
        s //= q
        k += 1
    if s != 1:
        raise NotAPowerOfQ(f"orbit size {size} is not a power of {q}")
    return k


def u_orbit_size(y: IdealElement, budget: int = DEFAULT_BUDGET) -> tuple[int, int]:
    """``(|U(q) . y|, In)`` where the size is ``q ** In``."""
    size = int(u_orbit(y, budget).size)
    return size, _log_q(size, y.field.characteristic)


def sublattice_rank(y: IdealElement) -> int:
    """Rank of the lattice spanned by ``eps_i - eps_j`` over the support of ``y``."""
    parent = {}

    def find(v):
        while parent.get(v, v) != v:
            v = parent[v]
        return v

    rank = 0
    for i, j in y.support:
        a, b = find(i), find(j)
        if a != b:
            parent[a] = b
            rank += 1
    return rank


def inert_points(y: IdealElement, budget: int = DEFAULT_BUDGET,
                 exhaustive: bool = False) -> list[bool]:
    """Flag per level: True when the level is inert for ``y``.

    Level l is inert when ``y_{<=l}`` and ``y_{<=l} + e_l`` share a U(q)-orbit in
    n_l.  With ``exhaustive`` the whole fibre is checked for the all-or-nothing
    behaviour and an AssertionError is raised if it fails.
    """
    ctx = _context(y)
    q, D = ctx.q, ctx.D
    code = ctx.code_of(y)
    gens = ctx.unipotent_generators
    flags = []
    for l in range(1, D + 1):
        prefix = code // q ** (D - l)
        digit = prefix % q
        base = prefix - digit
        orbit = ctx.closure([prefix], gens, level=l, budget=budget)
        other = base + (digit + 1) % q
        inert = bool(np.isin(other, orbit))
        if exhaustive:
            hits = int(np.isin(base + np.arange(q), orbit).sum())
            assert hits in (1, q), f"fibre at level {l} is neither one orbit nor split"
            assert inert == (hits == q)
        flags.append(inert)
    return flags


def is_minimal(y: IdealElement, budget: int = DEFAULT_BUDGET) -> bool:
    """Zero at inert points, and 1 at each new independent root of the support."""
    flags = inert_points(y, budget)
    coords = y.coordinates()
    parent: dict[int, int] = {}

    def find(v):
        while parent.get(v, v) != v:
            v = parent[v]
        return v

    for (i, j), a, inert in zip(ideal_roots(y.d).roots, coords, flags):
        if a == 0:
            continue
        if inert:
            return False
        ri, rj = find(i), find(j)
        if ri != rj:
            if a != 1:
                return False
            parent[ri] = rj
    return True


def class_size_formula(y: IdealElement, budget: int = DEFAULT_BUDGET) -> int:
    """``(q-1)^mm(y) * q^In(y)`` for a minimal representative ``y``."""
    if not is_minimal(y, budget):
        raise NotMinimal(f"{y} is not the minimal representative of its orbit")
    q = y.field.characteristic
    return (q - 1) ** sublattice_rank(y) * q ** sum(inert_points(y, budget))


def same_b_orbit(y1: IdealElement, y2: IdealElement, budget: int = DEFAULT_BUDGET) -> bool:
    """``y2 in B . y1`` decided as ``T . y2`` meeting ``U . y1`` (B = TU)."""
    ctx = _context(y1)
    uo = u_orbit(y1, budget)
    digits = ctx.decode(np.array([ctx.code_of(y2)], dtype=np.int64))[0]
    torus = np.unique(ctx.encode_digits((ctx.torus_factors * digits[None, :]) % ctx.q))
    return bool(np.isin(torus, uo, assume_unique=True).any())


# -- whole-space census -------------------------------------------------------

@dataclass(frozen=True)
class OrbitRow:
    key: int
    size: int
    mm: int
    In: int
    key_is_minimal: bool
    minimal_rep: int
    minimal_count: int


class OrbitCensus:
    """Partition of n(d)(F_q) into B(q)-orbits, plus per-state invariants."""

    def __init__(self, ctx: FiniteFieldContext, labels: np.ndarray, budget: int):
        self.ctx = ctx
        self.labels = labels
        self.budget = budget
        self.sizes = np.bincount(labels)
        self.keys = np.unique(labels, return_index=True)[1]

    @property
    def d(self) -> ThinDimVector:
        return self.ctx.d

    @property
    def q(self) -> int:
        return self.ctx.q

    @property
    def n_orbits(self) -> int:
        return int(self.sizes.size)

    @property
    def max_size(self) -> int:
        return int(self.sizes.max())

    def sizes_consistent(self) -> bool:
        """Sizes sum to q^D and divide |B(q)|."""
        order = self.ctx.group_order
        return (int(self.sizes.sum()) == self.ctx.n_states
                and all(order % int(s) == 0 for s in self.sizes))

    @cached_property
    def level_labels(self) -> list[np.ndarray]:
        """U(q)-orbit labels on n_l for l = 0..D."""
        gens = self.ctx.unipotent_generators
        return [self.ctx.components(gens, level=l, budget=self.budget)
                for l in range(self.ctx.D + 1)]

    @cached_property
    def inert_table(self) -> np.ndarray:
        """Boolean array (states x levels): inert flags of every element."""
        ctx, q, D = self.ctx, self.ctx.q, self.ctx.D
        codes = np.arange(ctx.n_states, dtype=np.int64)
        table = np.zeros((codes.size, D), dtype=bool)
        for l in range(1, D + 1):
            prefix = codes // q ** (D - l)
            digit = prefix % q
            other = prefix - digit + (digit + 1) % q
            lab = self.level_labels[l]
            table[:, l - 1] = lab[prefix] == lab[other]
        return table

    @cached_property
    def inert_count(self) -> np.ndarray:
        return self.inert_table.sum(axis=1)

    def dichotomy_holds(self) -> bool:
        """Each fibre is one U-orbit trace or q distinct ones, at every level."""
        q = self.q
        for l in range(1, self.ctx.D + 1):
            lab = self.level_labels[l].reshape(-1, q)
            s = np.sort(lab, axis=1)
            distinct = 1 + (np.diff(s, axis=1) != 0).sum(axis=1)
            if not np.all((distinct == 1) | (distinct == q)):
                return False
        return True

    def u_orbit_sizes_match(self) -> bool:
        """|U(q) . y| = q^In(y) for every y."""
        top = self.level_labels[self.ctx.D]
        usize = np.bincount(top)[top]
        return bool(np.all(usize == self.q ** self.inert_count))

    @cached_property
    def _minimal_and_mm(self) -> tuple[np.ndarray, np.ndarray]:
        ctx = self.ctx
        codes = np.arange(ctx.n_states, dtype=np.int64)
        digits = ctx.decode(codes)
        inert = self.inert_table
        N = codes.size
        comp = np.tile(np.arange(ctx.n, dtype=np.int16), (N, 1))
        ok = np.ones(N, dtype=bool)
        mm = np.zeros(N, dtype=np.int16)
        rows = np.arange(N)
        for k, (r, c) in enumerate(ctx.pos):
            a = digits[:, k]
            nz = a != 0
            ok &= ~(nz & inert[:, k])
            cr, cc = comp[rows, r], comp[rows, c]
            new = nz & (cr != cc)
            ok &= ~(new & (a != 1))
            mm += new
            # merge the component of c into that of r where a new root appears
            hit = new[:, None] & (comp == cc[:, None])
            comp = np.where(hit, cr[:, None], comp)
        return ok, mm

    @property
    def minimal_mask(self) -> np.ndarray:
        return self._minimal_and_mm[0]

    @property
    def mm(self) -> np.ndarray:
        return self._minimal_and_mm[1]

    def minimal_counts(self) -> np.ndarray:
        return np.bincount(self.labels[self.minimal_mask], minlength=self.n_orbits)

    def unique_minimal(self) -> bool:
        return bool(np.all(self.minimal_counts() == 1))

    def formula_mismatches(self) -> list[int]:
        """Codes of minimal elements whose orbit size differs from (q-1)^mm q^In."""
        q = self.q
        idx = np.flatnonzero(self.minimal_mask)
        predicted = (q - 1) ** self.mm[idx].astype(np.int64) * q ** self.inert_count[idx].astype(np.int64)
        actual = self.sizes[self.labels[idx]]
        return [int(c) for c in idx[predicted != actual]]

    def rows(self, with_profiles: bool = True) -> list[OrbitRow]:
        out = []
        if with_profiles:
            minimal = self.minimal_mask
            reps = np.full(self.n_orbits, -1, dtype=np.int64)
            idx = np.flatnonzero(minimal)
            reps[self.labels[idx][::-1]] = idx[::-1]  # least minimal code per orbit
            counts = self.minimal_counts()
        for k in range(self.n_orbits):
            key = int(self.keys[k])
            if with_profiles:
                rep = int(reps[k])
                mm = int(self.mm[rep]) if rep >= 0 else -1
                out.append(OrbitRow(key, int(self.sizes[k]), mm, int(self.inert_count[key]),
                                    bool(minimal[key]), rep, int(counts[k])))
            else:
                out.append(OrbitRow(key, int(self.sizes[k]), -1, -1, False, -1, 0))
        return out

    def to_tsv(self) -> str:
        fmt = self.ctx.digits_str
        lines = ["canonical_key\tsize\tmm\tIn\tis_minimal_rep\tminimal_rep"]
        for r in self.rows():
            rep = fmt(r.minimal_rep) if r.minimal_rep >= 0 else "-"
            lines.append(f"{fmt(r.key)}\t{r.size}\t{r.mm}\t{r.In}\t{str(r.key_is_minimal).lower()}\t{rep}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        fmt = self.ctx.digits_str
        return {
            "schema": 1,
            "d": list(self.d.entries),
            "q": self.q,
            "dim": self.ctx.D,
            "orbits": self.n_orbits,
            "total": self.ctx.n_states,
            "rows": [{"canonical_key": fmt(r.key), "size": r.size, "mm": r.mm, "In": r.In,
                      "is_minimal_rep": r.key_is_minimal,
                      "minimal_rep": fmt(r.minimal_rep) if r.minimal_rep >= 0 else None}
                     for r in self.rows()],
        }


def enumerate_orbits(d: ThinDimVector, q: int, budget: int = DEFAULT_BUDGET) -> OrbitCensus:
    ctx = _cached_context(d, q) if is_prime(q) else FiniteFieldContext(d, q)
    if ctx.n_states > budget:
        raise BudgetExceeded(ctx.n_states, budget)
    labels = ctx.components(ctx.borel_generators, budget=budget)
    return OrbitCensus(ctx, labels, budget)


# -- closed formula for the largest class ---------------------------------------

def predicted_max_class_size(d: ThinDimVector, q: int) -> Fraction:
    """Largest B(q)-class size in n(F_q) as the closed formula gives it."""
    c = classify(d)
    n, dim = d.n, ideal_roots(d).dim
    if c.e == 0:
        return Fraction(q - 1) ** (n - 2) * Fraction(q) ** (dim - (n - 2))
    return Fraction(q - 1) ** (n - 1) * Fraction(q) ** (dim - (n - 2 + c.e))


def dense_profile_size(d: ThinDimVector, q: int) -> int:
    """The e = 1 class size ``(q-1)^(n-1) q^(dim-(n-1))``, the smaller of the dense sizes."""
    n, dim = d.n, ideal_roots(d).dim
    return (q - 1) ** (n - 1) * q ** (dim - (n - 1))


@dataclass(frozen=True)
class MaxClassReport:
    d: ThinDimVector
    q: int
    e: int
    brute: int
    predicted: Fraction
    match: bool
    anomaly: bool  # second row of the decomposition is empty

    def to_json(self) -> dict:
        return {"d": list(self.d.entries), "q": self.q, "e": self.e, "brute_max": self.brute,
                "predicted": str(self.predicted), "match": self.match, "anomaly": self.anomaly}


def max_class_size(d: ThinDimVector, q: int, budget: int = DEFAULT_BUDGET,
                   census: OrbitCensus | None = None) -> MaxClassReport:
    census = census or enumerate_orbits(d, q, budget)
    brute = census.max_size
    predicted = predicted_max_class_size(d, q)
    anomaly = not decompose_JK(d).K
    return MaxClassReport(d, q, classify(d).e, brute, predicted, Fraction(brute) == predicted,
                          anomaly)


def census_json(census: OrbitCensus) -> str:
    return json.dumps(census.to_json(), sort_keys=True)
