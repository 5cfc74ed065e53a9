"""Thin dimension vectors, their 1-string sequences and the dense-orbit test.

A thin dimension vector ``d`` is a 0/1 word that starts and ends with 1 and
never has two zeros in a row.  It is the same data as the tuple ``a`` of
lengths of its maximal runs of ones, which is how most users think of it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterable, Iterator, Sequence

from .errors import ConsecutiveZeros, LeadingOrTrailingZero, NonBinaryEntry, NonPositiveEntry


@dataclass(frozen=True)
class ThinDimVector:
    entries: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(int(v) for v in self.entries))
        _check_thin(self.entries)

    @property
    def t(self) -> int:
        return len(self.entries)

    @property
    def n(self) -> int:
        return sum(self.entries)

    @cached_property
    def support(self) -> tuple[int, ...]:
        """Positions (1-based) of the entries equal to 1."""
        return tuple(i for i, v in enumerate(self.entries, start=1) if v)

    def partial_sums(self) -> tuple[int, ...]:
        """``(dim V_1, ..., dim V_t)`` of the standard flag."""
        out, acc = [], 0
        for v in self.entries:
            acc += v
            out.append(acc)
        return tuple(out)

    def __str__(self) -> str:
        return ",".join(map(str, self.entries))

    def __len__(self) -> int:
        return self.t


@dataclass(frozen=True)
class OneStringSequence:
    """Lengths ``(a_0, ..., a_{r+1})`` of the maximal runs of ones."""

    a: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(int(v) for v in self.a))
        if not self.a:
            raise NonPositiveEntry("empty 1-string sequence")
        bad = [v for v in self.a if v < 1]
        if bad:
            raise NonPositiveEntry(f"1-string lengths must be positive, got {bad[0]}")

    @property
    def r(self) -> int:
        # r = -1 when d has no zero at all
        return len(self.a) - 2

    @property
    def internal(self) -> tuple[int, ...]:
        return self.a[1:-1]

    def __str__(self) -> str:
        return ",".join(map(str, self.a))


@dataclass(frozen=True)
class Classification:
    e: int
    dense: bool
    codim: int


@dataclass(frozen=True)
class Relabeling:
    """Order-preserving bijection ``gamma: supp d -> {1..n}`` and its inverse."""

    gamma: dict
    inverse: dict

    def __call__(self, j: int) -> int:
        return self.gamma[j]


def _check_thin(entries: Sequence[int]) -> None:
    if not entries:
        raise NonBinaryEntry("a thin dimension vector needs at least one entry")
    for v in entries:
        if v not in (0, 1):
            raise NonBinaryEntry(f"entries must be 0 or 1, got {v}")
    if entries[0] != 1 or entries[-1] != 1:
        raise LeadingOrTrailingZero("first and last entries must be 1")
    for u, v in zip(entries, entries[1:]):
        if u == 0 and v == 0:
            raise ConsecutiveZeros("two consecutive zero entries")


def validate_thin(raw: Iterable[int]) -> ThinDimVector:
    return ThinDimVector(tuple(raw))


def one_strings(d: ThinDimVector) -> OneStringSequence:
    runs, cur = [], 0
    for v in d.entries:
        if v:
            cur += 1
        else:
            runs.append(cur)
            cur = 0
    runs.append(cur)
    return OneStringSequence(tuple(runs))


def from_strings(a: OneStringSequence | Sequence[int]) -> ThinDimVector:
    if not isinstance(a, OneStringSequence):
        a = OneStringSequence(tuple(a))
    out: list[int] = []
    for k, length in enumerate(a.a):
        if k:
            out.append(0)
        out.extend([1] * length)
    return ThinDimVector(tuple(out))


def even_internal_count(d: ThinDimVector) -> int:
    return sum(1 for v in one_strings(d).internal if v % 2 == 0)


def classify(d: ThinDimVector) -> Classification:
    e = even_internal_count(d)
    return Classification(e=e, dense=e <= 1, codim=max(0, e - 1))


def relabel(d: ThinDimVector) -> Relabeling:
    gamma = {j: k for k, j in enumerate(d.support, start=1)}
    return Relabeling(gamma=gamma, inverse={k: j for j, k in gamma.items()})


def internal_even_ends(d: ThinDimVector) -> list[int]:
    """Positions ``b_1 < ... < b_e`` where the internal even 1-strings end."""
    a = one_strings(d).a
    ends, pos = [], 0
    for k, length in enumerate(a):
        pos += length
        if 0 < k < len(a) - 1 and length % 2 == 0:
            ends.append(pos)
        pos += 1  # the zero after the string
    return ends


def compositions(total: int) -> Iterator[tuple[int, ...]]:
    """All tuples of positive integers summing to ``total``."""
    if total < 1:
        return
    for cuts in product((False, True), repeat=total - 1):
        parts, cur = [], 1
        for cut in cuts:
            if cut:
                parts.append(cur)
                cur = 1
            else:
                cur += 1
        parts.append(cur)
        yield tuple(parts)


def thin_vectors(t_max: int | None = None, n_max: int | None = None) -> list[ThinDimVector]:
    """Every thin dimension vector with ``t <= t_max`` and ``n <= n_max``.

    Sorted by ``(t, entries)`` so sweeps are deterministic.
    """
    if t_max is None and n_max is None:
        raise ValueError("need t_max or n_max")
    # n <= t always, and t <= 2n - 1
    bound = n_max if n_max is not None else t_max
    out = []
    for n in range(1, bound + 1):
        for a in compositions(n):
            d = from_strings(a)
            if t_max is not None and d.t > t_max:
                continue
            out.append(d)
    return sorted(out, key=lambda d: (d.t, d.entries))


def parse_bits(text: str) -> ThinDimVector:
    return validate_thin(int(tok) for tok in _tokens(text))


def parse_strings(text: str) -> ThinDimVector:
    return from_strings(OneStringSequence(tuple(int(tok) for tok in _tokens(text))))


def _tokens(text: str) -> list[str]:
    toks = [tok for tok in text.replace(" ", "").split(",") if tok]
    if not toks:
        raise NonBinaryEntry("empty vector")
    return toks
