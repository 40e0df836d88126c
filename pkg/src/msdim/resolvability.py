"""Distance representations and the four resolvability predicates.

``r(u|S)`` is the vector of distances from ``u`` to an ordered landmark list
and ``m(u|S)`` the multiset of the same distances.  A landmark set is
*resolving* when every vertex gets a distinct representation.  The *outer*
variants only require distinct representations for vertices outside ``S``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptyLandmarkSet
from .graph import DistanceMatrix

__all__ = [
    "Notion",
    "MultisetRepr",
    "multiset_repr",
    "vector_repr",
    "is_resolving",
    "histogram_rows",
]


class Notion(str, Enum):
    RESOLVING = "resolving"
    OUTER_RESOLVING = "outer-resolving"
    MULTISET = "multiset"
    OUTER_MULTISET = "outer-multiset"

    @property
    def is_outer(self) -> bool:
        return self in (Notion.OUTER_RESOLVING, Notion.OUTER_MULTISET)

    @property
    def is_multiset(self) -> bool:
        return self in (Notion.MULTISET, Notion.OUTER_MULTISET)

    @classmethod
    def parse(cls, text: "str | Notion") -> "Notion":
        if isinstance(text, Notion):
            return text
        key = text.strip().lower().replace("_", "-")
        if key.endswith("-resolving") and key != "outer-resolving":
            key = key[: -len("-resolving")]
        try:
            return cls(key)
        except ValueError:
            names = ", ".join(n.value for n in cls)
            raise ValueError(f"unknown notion {text!r} (expected one of {names})") from None


@dataclass(frozen=True)
class MultisetRepr:
    """A multiset of distances stored as sorted ``(distance, multiplicity)`` pairs."""

    counts: tuple[tuple[int, int], ...]

    @classmethod
    def from_distances(cls, distances: Iterable[int]) -> "MultisetRepr":
        return cls(tuple(sorted(Counter(int(x) for x in distances).items())))

    def __getitem__(self, distance: int) -> int:
        for x, c in self.counts:
            if x == distance:
                return c
        return 0

    def __len__(self) -> int:
        return sum(c for _, c in self.counts)

    def as_dict(self) -> dict[int, int]:
        return dict(self.counts)

    def profile(self, upto: int) -> tuple[int, ...]:
        """Multiplicities of distances ``1..upto``."""
        return tuple(self[x] for x in range(1, upto + 1))

    def __str__(self) -> str:
        parts = [str(x) if c == 1 else f"{x}^{c}" for x, c in self.counts]
        return "{" + ", ".join(parts) + "}"


def _landmarks(S: Iterable[int]) -> list[int]:
    out = list(S)
    if not out:
        raise EmptyLandmarkSet("landmark set is empty")
    return out


def multiset_repr(dm: DistanceMatrix, u: int, S: Iterable[int]) -> MultisetRepr:
    lm = _landmarks(S)
    return MultisetRepr.from_distances(dm.d[u, lm])


def vector_repr(dm: DistanceMatrix, u: int, S: Sequence[int]) -> tuple[int, ...]:
    lm = _landmarks(S)
    return tuple(int(x) for x in dm.d[u, lm])


def histogram_rows(dm: DistanceMatrix, S: Sequence[int]) -> np.ndarray:
    """Row ``u`` holds the multiplicities of distances ``0..diam`` in ``m(u|S)``."""
    sub = dm.d[:, list(S)]
    hist = np.zeros((dm.n, dm.diameter + 1), dtype=np.int64)
    for x in range(dm.diameter + 1):
        hist[:, x] = (sub == x).sum(axis=1)
    return hist


def is_resolving(dm: DistanceMatrix, S: Iterable[int], notion: "Notion | str") -> bool:
    """Decide whether ``S`` is a resolving set of the given flavour.

    Representations are turned into canonical rows (distance histograms for
    the multiset notions, distance vectors under ascending landmark order for
    the vector notions) and duplicates are found by sorting the rows.
    """
    notion = Notion.parse(notion)
    lm = sorted(set(int(v) for v in S))
    n = dm.n
    if notion.is_outer:
        members = np.zeros(n, dtype=bool)
        members[lm] = True
        checked = np.flatnonzero(~members)
    else:
        checked = np.arange(n)
    if len(checked) <= 1:
        return True
    if not lm:
        return False
    if notion.is_multiset:
        rows = histogram_rows(dm, lm)[checked]
    else:
        rows = dm.d[np.ix_(checked, lm)]
    return len(np.unique(rows, axis=0)) == len(checked)
