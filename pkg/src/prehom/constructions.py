"""Two-row diagrams and the representatives they define.

Every thin ``d`` splits its support into a standard subset ``J`` (row 1)
and the rest ``K`` (row 0).  Arrows between vertices of the diagram give
matrix units; summing them gives a representative ``x``.  When ``e(d) >= 2``
some arrows carry a parameter and the sum is a family ``F(t_2, ..., t_e)``.
The modified diagram yields ``x-bar`` (or ``F-bar``), whose coordinates
vanish at every inert point.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, replace
from typing import Sequence

from . import linalg
from .combinatorics import ThinDimVector, internal_even_ends, relabel
from .errors import NoConjugateMember, WrongSubsetShape, ZeroParameter
from .fields import Field, QQ
from .matrix_model import IdealElement, conjugate, element_from_sparse, ideal_roots
from .quiver import (QuiverModule, Resolution, StandardSubset, find_isomorphism,
                     module_from_element, resolve_standard, standard_module, sub_and_quotient)

Vertex = tuple[int, int]  # (label, row)


@dataclass(frozen=True)
class JKDecomposition:
    d: ThinDimVector
    J: StandardSubset
    K: tuple[int, ...]
    b_list: tuple[int, ...]
    c: int | None

    @property
    def e(self) -> int:
        return len(self.b_list)

    def T(self, field: Field = QQ) -> QuiverModule:
        return standard_module(self.J, self.d.t, field)

    def S(self, field: Field = QQ) -> QuiverModule:
        return standard_module(self.K, self.d.t, field)

    def to_json(self) -> dict:
        return {"J": list(self.J.elements), "K": list(self.K), "b": list(self.b_list), "c": self.c}


def _chain(start: int, stop: int, step: int) -> list[int]:
    out = []
    k = start
    while (step > 0 and k <= stop) or (step < 0 and k >= stop):
        out.append(k)
        k += step
    return out


def decompose_JK(d: ThinDimVector) -> JKDecomposition:
    supp = d.support
    b = internal_even_ends(d)
    if not b:
        J = [j for j in supp if j % 2 == 1]
    else:
        J = _chain(b[0] - 1, 1, -2)
        for lo, hi in zip(b, b[1:]):
            J += _chain(lo + 2, hi - 1, 2)
        J += _chain(b[-1] + 2, d.t, 2)
    J = sorted(J)
    missing = set(J) - set(supp)
    assert not missing, f"J leaves the support of {d}: {sorted(missing)}"
    Js = StandardSubset(tuple(J), d.t)
    K = tuple(j for j in supp if j not in set(J))
    dec = JKDecomposition(d, Js, K, tuple(b), max(J) if J else None)
    for bi in b:
        assert bi - 1 in Js and bi + 2 in Js, (d, bi)
    if len(b) == 1:
        assert dec.c in (d.t - 1, d.t)
    return dec


# -- diagrams -----------------------------------------------------------------

@dataclass(frozen=True)
class Arrow:
    source: Vertex
    target: Vertex
    param: int | None = None  # index i of the indeterminate x_i

    @property
    def root(self) -> tuple[int, int]:
        # an arrow j -> i contributes f_ij
        return (self.target[0], self.source[0])


@dataclass(frozen=True)
class OrbitDiagram:
    decomposition: JKDecomposition
    vertices: tuple[Vertex, ...]
    arrows: tuple[Arrow, ...]
    modified: bool = False

    @property
    def d(self) -> ThinDimVector:
        return self.decomposition.d

    def to_dot(self) -> str:
        name = "Dbar" if self.modified else "D"
        lines = [f"digraph {name} {{", "  rankdir=RL;"]
        for label, row in self.vertices:
            lines.append(f'  v{label} [label="{label}", row={row}];')
        for a in self.arrows:
            attr = f' [style=dashed, label="x_{a.param}"]' if a.param is not None else ""
            lines.append(f"  v{a.source[0]} -> v{a.target[0]}{attr};")
        lines.append("}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "d": list(self.d.entries),
            "modified": self.modified,
            "vertices": [list(v) for v in self.vertices],
            "arrows": [{"from": list(a.source), "to": list(a.target), "param": a.param}
                       for a in self.arrows],
        }

    def to_text(self) -> str:
        """Both rows as labels, then the arrows one per line."""
        rows = []
        for r in (1, 0):
            rows.append(f"row {r}: " + " ".join(str(v[0]) for v in self.vertices if v[1] == r))
        for a in self.arrows:
            tag = f" ~x_{a.param}" if a.param is not None else ""
            rows.append(f"{a.source[0]} -> {a.target[0]}{tag}")
        return "\n".join(rows)


def build_diagram(d: ThinDimVector) -> OrbitDiagram:
    dec = decompose_JK(d)
    J, K, b = dec.J.elements, dec.K, dec.b_list
    vertices = tuple(sorted([(j, 1) for j in J] + [(k, 0) for k in K]))
    # J-vertices b_i + 2 (i >= 2) lose their arrow to the left neighbour
    no_left = {bi + 2 for bi in b[1:]}
    arrows = []
    for row, labels in ((1, J), (0, K)):
        for left, right in zip(labels, labels[1:]):
            if row == 1 and right in no_left:
                continue
            arrows.append(Arrow((right, row), (left, row)))
    for bi in b:
        arrows.append(Arrow((bi + 2, 1), (bi, 0)))
    for k, bi in enumerate(b[1:], start=2):
        arrows.append(Arrow((bi + 2, 1), (bi - 1, 1), param=k))
    return OrbitDiagram(dec, vertices, tuple(arrows))


def modify_diagram(D: OrbitDiagram) -> OrbitDiagram:
    """Redirect the row-0 arrow ending at each ``b_i`` to ``b_i - 1``."""
    dec = D.decomposition
    K = dec.K
    redirect: dict[int, int] = {}
    for bi in dec.b_list:
        right = [k for k in K if k > bi]
        if right:
            redirect[right[0]] = bi
    arrows = []
    for a in D.arrows:
        src, tgt = a.source, a.target
        if src[1] == 0 and tgt[1] == 0 and redirect.get(src[0]) == tgt[0]:
            arrows.append(replace(a, target=(tgt[0] - 1, 1)))
        else:
            arrows.append(a)
    return OrbitDiagram(dec, D.vertices, tuple(arrows), modified=True)


# -- families and elements --------------------------------------------------

@dataclass(frozen=True)
class ParametricFamily:
    d: ThinDimVector
    base: tuple[tuple[int, int], ...]
    params: tuple[tuple[int, tuple[int, int]], ...]  # (index i, root of x_i)

    @property
    def n_params(self) -> int:
        return len(self.params)

    def instantiate(self, values: Sequence = (), field: Field = QQ) -> IdealElement:
        values = list(values)
        if len(values) != len(self.params):
            raise ValueError(f"expected {len(self.params)} parameters, got {len(values)}")
        pairs = [(r, field.one) for r in self.base]
        for (k, root), v in zip(self.params, values):
            v = field(v)
            if field.is_zero(v):
                raise ZeroParameter(f"parameter x_{k} must be nonzero")
            pairs.append((root, v))
        return element_from_sparse(self.d, pairs, field)

    def ones(self, field: Field = QQ) -> IdealElement:
        return self.instantiate([field.one] * self.n_params, field)

    def __str__(self) -> str:
        terms = [(r, "") for r in self.base] + [(r, f"x_{k}*") for k, r in self.params]
        terms.sort()
        return " + ".join(f"{c}f[{i},{j}]" for (i, j), c in terms)

    def to_json(self) -> dict:
        return {
            "d": list(self.d.entries),
            "base": [list(r) for r in self.base],
            "params": [{"index": k, "root": list(r)} for k, r in self.params],
        }


def family_from_diagram(D: OrbitDiagram) -> ParametricFamily:
    base = tuple(sorted(a.root for a in D.arrows if a.param is None))
    params = tuple(sorted((a.param, a.root) for a in D.arrows if a.param is not None))
    return ParametricFamily(D.d, base, params)


def family_F(d: ThinDimVector) -> ParametricFamily:
    return family_from_diagram(build_diagram(d))


def family_Fbar(d: ThinDimVector) -> ParametricFamily:
    return family_from_diagram(modify_diagram(build_diagram(d)))


def element_x(d: ThinDimVector, params: Sequence | None = None, field: Field = QQ) -> IdealElement:
    """The representative ``x`` (for ``e >= 2``, ``F`` at ``params``, default all ones)."""
    F = family_F(d)
    return F.instantiate(params if params is not None else [1] * F.n_params, field)


def element_xbar(d: ThinDimVector, params: Sequence | None = None, field: Field = QQ) -> IdealElement:
    F = family_Fbar(d)
    return F.instantiate(params if params is not None else [1] * F.n_params, field)


# -- conjugator -----------------------------------------------------------------

@dataclass(frozen=True)
class Conjugation:
    """``g F(params) g^-1 = F-bar(bar_params)`` with ``g`` upper triangular."""

    d: ThinDimVector
    g: list
    params: tuple
    bar_params: tuple
    field: Field = QQ

    def holds(self) -> bool:
        return conjugation_holds(self.d, self.g, self.params, self.bar_params, self.field)


def conjugator(d: ThinDimVector, params: Sequence | None = None, field: Field = QQ,
               seed: int = 0) -> Conjugation:
    """An element of B taking ``x`` (or ``F(params)``) into the modified family.

    For ``e(d) <= 1`` this is the explicit base change ``f_{i_l} -> f_{j_l} - f_{i_l}``.
    For ``e(d) >= 2`` the target parameters differ from ``params`` in general, so
    both ``g`` and the target are solved for (see :func:`_solve_family_conjugator`).
    """
    dec = decompose_JK(d)
    n = d.n
    gamma = relabel(d).gamma
    if dec.e == 0:
        return Conjugation(d, linalg.identity(n, field), (), (), field)
    if dec.e == 1:
        b = dec.b_list[0]
        i_list = [k for k in dec.K if k > b]
        j_list = [j for j in dec.J if j >= b + 2][:len(i_list)]
        if len(j_list) < len(i_list):
            raise WrongSubsetShape(f"not enough row-1 vertices right of {b + 2}")
        g = linalg.identity(n, field)
        for i, j in zip(i_list, j_list):
            assert j < i, (d, i, j)
            col = gamma[i] - 1
            g[col][col] = field.neg(field.one)
            g[gamma[j] - 1][col] = field.one
        return Conjugation(d, g, (), (), field)
    F, Fb = family_F(d), family_Fbar(d)
    params = tuple(field(v) for v in (params if params is not None else [1] * F.n_params))
    x = F.instantiate(params, field).to_matrix()
    g, bar = _solve_family_conjugator(d, x, Fb, field, random.Random(seed))
    return Conjugation(d, g, params, bar, field)


def _upper_vars(n: int) -> dict[tuple[int, int], int]:
    return {(a, b): k for k, (a, b) in enumerate((a, b) for a in range(n) for b in range(a, n))}


def _intertwining_rows(x, y, field: Field, var) -> list[dict[int, object]]:
    """Entries of ``g x - y g`` as linear forms in the upper triangular ``g``."""
    n = len(x)
    rows = []
    for r in range(n):
        for c in range(n):
            row: dict[int, object] = {}
            for k in range(r, n):
                if not field.is_zero(x[k][c]):
                    key = var[(r, k)]
                    row[key] = field.add(row.get(key, field.zero), x[k][c])
            for k in range(c + 1):
                if not field.is_zero(y[r][k]):
                    key = var[(k, c)]
                    row[key] = field.sub(row.get(key, field.zero), y[r][k])
            rows.append({k: v for k, v in row.items() if not field.is_zero(v)})
    return rows


def _random_point(basis, nvars, field: Field, rng: random.Random) -> list:
    vec = [field.zero] * nvars
    for v in basis:
        cf = field.random_element(rng, 20)
        vec = [field.add(a, field.mul(cf, w)) for a, w in zip(vec, v)]
    return vec


def _solve_conjugator(x, y, field: Field, rng: random.Random, tries: int = 20) -> list[list]:
    """Random invertible upper triangular ``g`` with ``g x = y g``."""
    n = len(x)
    var = _upper_vars(n)
    rows = [r for r in _intertwining_rows(x, y, field, var) if r]
    basis = linalg.nullspace(rows, len(var), field)
    for _ in range(tries):
        vec = _random_point(basis, len(var), field, rng)
        if all(not field.is_zero(vec[var[(a, a)]]) for a in range(n)):
            g = linalg.zeros(n, n, field)
            for (a, b), k in var.items():
                g[a][b] = vec[k]
            return g
    raise ArithmeticError("no invertible solution found; the elements may not be conjugate")


def _solve_family_conjugator(d, x, Fb: ParametricFamily, field: Field, rng: random.Random,
                             samples: int = 3):
    """Find ``s`` and ``g`` with ``g x = F-bar(s) g``.

    B acts triangularly in root order, so the coordinates of ``g x g^-1`` up to
    the site of ``x_p`` depend on ``g`` alone once ``s_2 .. s_{p-1}`` are fixed.
    At that site the equation reads ``L(g) = s_p g[c_p, c_p]`` with ``g``
    running over the solutions of the earlier coordinates; ``s_p`` is read off
    several random solutions and must come out the same each time.  ``g`` is
    then solved with all of ``s`` fixed, and only verified answers are returned.
    """
    n = len(x)
    gamma = relabel(d).gamma
    index = {(gamma[i] - 1, gamma[j] - 1): k for (i, j), k in ideal_roots(d).index.items()}
    var = _upper_vars(n)
    sites = [(gamma[i] - 1, gamma[j] - 1) for _, (i, j) in Fb.params]
    s: list = []
    for p, (rp, cp) in enumerate(sites):
        y = Fb.instantiate(s + [field.one] * (len(sites) - p), field).to_matrix()
        y[rp][cp] = field.zero
        rows = _intertwining_rows(x, y, field, var)
        level = index[(rp, cp)]
        earlier = [rows[r * n + c] for (r, c), k in index.items() if k < level]
        basis = linalg.nullspace([r for r in earlier if r], len(var), field)
        values, hits = set(), 0
        for _ in range(samples * 4):
            vec = _random_point(basis, len(var), field, rng)
            pivot = vec[var[(cp, cp)]]
            if field.is_zero(pivot):
                continue
            lhs = field.zero
            for k, cf in rows[rp * n + cp].items():
                lhs = field.add(lhs, field.mul(cf, vec[k]))
            values.add(field.div(lhs, pivot))
            hits += 1
            if hits == samples or len(values) > 1:
                break
        if len(values) != 1:
            raise ArithmeticError(f"parameter x_{p + 2} is not determined at its root")
        value = values.pop()
        if field.is_zero(value):
            raise NoConjugateMember("no member of the modified family with nonzero "
                                    "parameters is conjugate to this element")
        s.append(value)
    y = Fb.instantiate(s, field).to_matrix()
    try:
        g = _solve_conjugator(x, y, field, rng)
    except ArithmeticError as exc:
        raise NoConjugateMember(str(exc)) from exc
    return g, tuple(s)


def conjugation_holds(d: ThinDimVector, g: list[list], params: Sequence | None = None,
                      bar_params: Sequence | None = None, field: Field = QQ) -> bool:
    """Exact check that ``g`` is in B and ``g x g^-1 = x-bar``."""
    n = d.n
    upper = all(field.is_zero(g[a][b]) for a in range(n) for b in range(a))
    diag = all(not field.is_zero(g[a][a]) for a in range(n))
    if not (upper and diag):
        return False
    target = element_xbar(d, bar_params if bar_params is not None else params, field)
    return conjugate(element_x(d, params, field), g) == target


# -- module-theoretic checks ----------------------------------------------------

def resolution_of_T(d: ThinDimVector, field: Field = QQ) -> Resolution:
    dec = decompose_JK(d)
    if dec.e == 0:
        raise WrongSubsetShape("the resolution needs e(d) >= 1")
    return resolve_standard(dec.J, dec.b_list, dec.c, d.t, field)


def k_filtration(x: IdealElement) -> tuple[QuiverModule, QuiverModule] | None:
    """Submodule of M(x) on ``span{f_k : k in K}`` and the quotient, if stable."""
    d = x.d
    dec = decompose_JK(d)
    gamma = relabel(d).gamma
    M = module_from_element(x)
    keep = [[gamma[k] - 1 for k in dec.K if k <= i] for i in range(1, d.t + 1)]
    return sub_and_quotient(M, keep)


def has_standard_filtration(x: IdealElement, rng: random.Random | None = None) -> bool:
    """Check ``Delta(K) -> M(x) -> Delta(J)`` with explicit isomorphisms."""
    pair = k_filtration(x)
    if pair is None:
        return False
    sub, quo = pair
    dec = decompose_JK(x.d)
    rng = rng or random.Random(0)
    return (find_isomorphism(sub, dec.S(x.field), rng) is not None
            and find_isomorphism(quo, dec.T(x.field), rng) is not None)


def diagram_json(d: ThinDimVector, modified: bool = False) -> str:
    D = build_diagram(d)
    if modified:
        D = modify_diagram(D)
    return json.dumps(D.to_json(), sort_keys=True)

