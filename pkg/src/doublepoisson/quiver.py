"""The double derivation quiver of a semi-simple algebra.

An arrow with tail j, head i and colours (p, q) stands for the double
derivation given by the tensor e^i_{p1} (x) e^j_{1q}: the loop x^i_{pq} when
i == j and the arrow y^{ij}_{pq} otherwise.  The loop colour (1,1) is not an
arrow; it is the combination -sum_{r>=2} x^i_{rr} modulo inner derivations
of central elements.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterable

from .algebra import BratteliDiagram, MatrixUnit, SemiSimpleAlgebra, relative_multiplicities


@total_ordering
@dataclass(frozen=True)
class Arrow:
    head: int
    tail: int
    primary: int
    secondary: int

    @property
    def sort_key(self) -> tuple[int, int, int, int]:
        return (self.tail, self.head, self.primary, self.secondary)

    def __lt__(self, other: "Arrow") -> bool:
        if not isinstance(other, Arrow):
            return NotImplemented
        return self.sort_key < other.sort_key

    @property
    def is_loop(self) -> bool:
        return self.head == self.tail

    def tensor(self) -> tuple[MatrixUnit, MatrixUnit]:
        """The pair (e^head_{p1}, e^tail_{1q}) representing the derivation."""
        return MatrixUnit(self.head, self.primary, 1), MatrixUnit(self.tail, 1, self.secondary)

    def label(self) -> str:
        if self.is_loop:
            return f"x{self.head}[{self.primary},{self.secondary}]"
        return f"y{self.head}{self.tail}[{self.primary},{self.secondary}]"

    def __str__(self) -> str:
        return f"({self.tail})-[{self.primary},{self.secondary}]->({self.head})"

    def to_dict(self) -> dict:
        return {"head": self.head, "tail": self.tail, "primary": self.primary, "secondary": self.secondary}

    @classmethod
    def from_dict(cls, d: dict) -> "Arrow":
        return cls(int(d["head"]), int(d["tail"]), int(d["primary"]), int(d["secondary"]))


def loop(i: int, p: int, q: int) -> Arrow:
    return Arrow(i, i, p, q)


def arrow(head: int, tail: int, p: int = 1, q: int = 1) -> Arrow:
    """y^{head,tail}_{pq}, the arrow tail -> head."""
    return Arrow(head, tail, p, q)


@dataclass(frozen=True)
class Quiver:
    vertex_count: int
    arrows: tuple[Arrow, ...]

    def loops_at(self, i: int) -> list[Arrow]:
        return [a for a in self.arrows if a.is_loop and a.head == i]

    def arrows_between(self, tail: int, head: int) -> list[Arrow]:
        return [a for a in self.arrows if a.tail == tail and a.head == head]

    def out_of(self, v: int) -> list[Arrow]:
        return [a for a in self.arrows if a.tail == v]

    def counts(self) -> dict[tuple[int, int], int]:
        out: dict[tuple[int, int], int] = {}
        for a in self.arrows:
            out[(a.tail, a.head)] = out.get((a.tail, a.head), 0) + 1
        return out

    def to_dict(self) -> dict:
        return {"vertices": self.vertex_count, "arrows": [a.to_dict() for a in self.arrows]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "Quiver":
        return cls(int(d["vertices"]), tuple(sorted(Arrow.from_dict(a) for a in d["arrows"])))

    @classmethod
    def from_json(cls, text: str) -> "Quiver":
        return cls.from_dict(json.loads(text))

    def __iter__(self):
        return iter(self.arrows)

    def __len__(self) -> int:
        return len(self.arrows)


def build_quiver(S: SemiSimpleAlgebra) -> Quiver:
    arrows = []
    for j in range(1, S.k + 1):
        for i in range(1, S.k + 1):
            for p in range(1, S.d(i) + 1):
                for q in range(1, S.d(j) + 1):
                    if i == j and (p, q) == (1, 1):
                        continue
                    arrows.append(Arrow(i, j, p, q))
    return Quiver(S.k, tuple(sorted(arrows)))


def _copy_labels(row: Iterable[int]) -> list[tuple[int, int]]:
    """(block u, copy h) pairs of one Bratteli row, in embedding order."""
    return [(u, h) for u, a in enumerate(row, start=1) for h in range(a)]


def build_relative_quiver(S: SemiSimpleAlgebra, B: BratteliDiagram) -> Quiver:
    """r_i loops at i and r_ij arrows j -> i.

    Colour c of vertex i numbers the copies (u, h) of T-blocks inside M_{d_i};
    an arrow j -> i pairs a copy in i with a copy of the same block in j.  At a
    loop the pair (1,1) is dropped, as in the absolute quiver.
    """
    relative_multiplicities(S, B)  # validates
    labels = {i: _copy_labels(B.multiplicities[i - 1]) for i in range(1, S.k + 1)}
    arrows = []
    for j in range(1, S.k + 1):
        for i in range(1, S.k + 1):
            for p, (u, _) in enumerate(labels[i], start=1):
                for q, (w, _) in enumerate(labels[j], start=1):
                    if u != w:
                        continue
                    if i == j and (p, q) == (1, 1):
                        continue
                    arrows.append(Arrow(i, j, p, q))
    return Quiver(S.k, tuple(sorted(arrows)))


def quiver_dimension(S: SemiSimpleAlgebra, Q: Quiver) -> int:
    """Sum over arrows j -> i of d_i d_j, the dimension of the module they span."""
    return sum(S.d(a.head) * S.d(a.tail) for a in Q.arrows)
