"""Necklaces: cyclic words in the double derivation quiver modulo graded rotation.

Every arrow has degree 1, so rotating a word of length n by one step costs a
sign (-1)^(n-1).  A word equal to one of its own rotations with total sign -1
is zero in the quotient by supercommutators.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .exactmath import Coeff, Poly, coeff_to_str, parse_coefficient, simplify
from .quiver import Arrow


class NonComposable(ValueError):
    pass


class WrongAlgebra(ValueError):
    pass


@dataclass(frozen=True)
class Necklace:
    """A canonical cyclic word; degree-0 necklaces are vertex symbols."""

    word: tuple[Arrow, ...]
    vertex: int | None = None

    @property
    def degree(self) -> int:
        return len(self.word)

    @property
    def vertices(self) -> frozenset[int]:
        if not self.word:
            return frozenset({self.vertex})
        return frozenset(a.tail for a in self.word)

    @property
    def sort_key(self) -> tuple:
        return (self.degree, self.vertex or 0, tuple(a.sort_key for a in self.word))

    def __lt__(self, other: "Necklace") -> bool:
        return self.sort_key < other.sort_key

    def __str__(self) -> str:
        if not self.word:
            return f"({self.vertex})"
        parts = [f"({self.word[0].tail})"]
        for a in self.word:
            parts.append(f"-[{a.primary},{a.secondary}]->({a.head})")
        return "".join(parts)

    def to_dict(self) -> dict:
        if not self.word:
            return {"vertex": self.vertex, "word": []}
        return {"word": [a.to_dict() for a in self.word]}

    @classmethod
    def from_dict(cls, d: Mapping) -> "Necklace":
        if not d["word"]:
            return cls((), int(d["vertex"]))
        return cls(tuple(Arrow.from_dict(a) for a in d["word"]))

    @classmethod
    def vertex_symbol(cls, v: int) -> "Necklace":
        return cls((), v)


def check_composable(word: Sequence[Arrow]) -> None:
    n = len(word)
    for t in range(n):
        if word[t].head != word[(t + 1) % n].tail:
            raise NonComposable(f"arrow {t + 1} ends at {word[t].head} but arrow {(t + 1) % n + 1} starts at {word[(t + 1) % n].tail}")


def canonicalize(word: Sequence[Arrow], coeff: Coeff = 1) -> tuple[Necklace, Coeff]:
    """Minimal rotation of a cyclic word with the graded rotation sign.

    Returns coefficient 0 when the word is killed by its own rotation symmetry.
    """
    word = tuple(word)
    if not word:
        raise ValueError("use Necklace.vertex_symbol for degree-0 necklaces")
    check_composable(word)
    n = len(word)
    keys = [a.sort_key for a in word]
    rotations = [tuple(keys[s:] + keys[:s]) for s in range(n)]
    best = min(rotations)
    shifts = [s for s in range(n) if rotations[s] == best]
    s = shifts[0]
    sign = -1 if (n - 1) * s % 2 else 1
    if len(shifts) > 1 and (n - 1) * (shifts[1] - shifts[0]) % 2:
        return Necklace(word[s:] + word[:s]), 0
    return Necklace(word[s:] + word[:s]), simplify(coeff * sign)


class GradedElement:
    """Finite linear combination of necklaces with exact coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Necklace, Coeff] | None = None):
        clean = {}
        for k, v in (terms or {}).items():
            v = simplify(v)
            if v:
                clean[k] = v
        self.terms: dict[Necklace, Coeff] = clean

    @classmethod
    def from_words(cls, pairs: Iterable[tuple[Sequence[Arrow], Coeff]]) -> "GradedElement":
        acc: dict[Necklace, Coeff] = {}
        for word, c in pairs:
            neck, c = canonicalize(word, c)
            if c:
                acc[neck] = acc.get(neck, 0) + c
        return cls(acc)

    @classmethod
    def necklace(cls, word: Sequence[Arrow], coeff: Coeff = 1) -> "GradedElement":
        return cls.from_words([(word, coeff)])

    @classmethod
    def vertex(cls, v: int, coeff: Coeff = 1) -> "GradedElement":
        return cls({Necklace.vertex_symbol(v): coeff})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, GradedElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "GradedElement") -> "GradedElement":
        acc = dict(self.terms)
        for k, v in other.terms.items():
            acc[k] = acc.get(k, 0) + v
        return GradedElement(acc)

    def __neg__(self) -> "GradedElement":
        return GradedElement({k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "GradedElement") -> "GradedElement":
        return self + (-other)

    def scale(self, c: Coeff) -> "GradedElement":
        return GradedElement({k: v * c for k, v in self.terms.items()})

    __rmul__ = scale

    def degrees(self) -> set[int]:
        return {k.degree for k in self.terms}

    @property
    def degree(self) -> int:
        ds = self.degrees()
        if len(ds) != 1:
            raise ValueError(f"element is not homogeneous (degrees {sorted(ds)})")
        return ds.pop()

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key)

    def evaluate(self, assignment: Mapping[str, Coeff]) -> "GradedElement":
        return GradedElement(
            {k: v.evaluate(assignment) if isinstance(v, Poly) else v for k, v in self.terms.items()}
        )

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for neck, c in self.items():
            text = coeff_to_str(c)
            if isinstance(c, Poly) and len(c.terms) > 1:
                text = f"({text})"
            parts.append(f"{text}*{neck}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"GradedElement({self})"

    def to_list(self) -> list[dict]:
        return [{"coeff": coeff_to_str(c), **n.to_dict()} for n, c in self.items()]

    def to_json(self) -> str:
        return json.dumps(self.to_list(), sort_keys=True)

    @classmethod
    def from_list(cls, items: Iterable[Mapping]) -> "GradedElement":
        acc: dict[Necklace, Coeff] = {}
        for item in items:
            neck = Necklace.from_dict(item)
            acc[neck] = acc.get(neck, 0) + parse_coefficient(item["coeff"])
        return cls(acc)

    @classmethod
    def from_json(cls, text: str) -> "GradedElement":
        return cls.from_list(json.loads(text))


_STEP = re.compile(r"-\[(\d+),(\d+)\]->\((\d+)\)")


def parse_necklace_word(text: str) -> list[Arrow]:
    """Parse "(1)-[1,2]->(2)-[1,1]->(1)" into its arrows."""
    text = text.strip()
    m = re.match(r"\((\d+)\)", text)
    if not m:
        raise ValueError(f"cannot parse necklace {text!r}")
    current = int(m.group(1))
    pos = m.end()
    word = []
    while pos < len(text):
        step = _STEP.match(text, pos)
        if not step:
            raise ValueError(f"cannot parse necklace {text!r} near position {pos}")
        p, q, head = (int(g) for g in step.groups())
        word.append(Arrow(head, current, p, q))
        current = head
        pos = step.end()
    return word


# ----------------------------------------------------------------------
# the bracket


def _expand_arrow(S, a: Arrow) -> list[tuple[Arrow, int]]:
    """Arrow with the (1,1)-loop shorthand expanded into genuine arrows."""
    if a.is_loop and (a.primary, a.secondary) == (1, 1):
        return [(Arrow(a.head, a.head, r, r), -1) for r in range(2, S.d(a.head) + 1)]
    return [(a, 1)]


def _gluings(S, u: tuple[Arrow, ...], v: tuple[Arrow, ...]) -> Iterable[tuple[tuple[Arrow, ...], int]]:
    """Words and signs of {u, v} for two cyclic words of positive length.

    For every arrow u_i of u and v_j of v:
      * if t(u_i) = h(v_j) and secondary(u_i) = primary(v_j), drop both and
        join the loose ends by the arrow t(v_j) -> h(u_i) coloured
        (primary(u_i), secondary(v_j)), giving v_<j z u_>i u_<i v_>j;
      * if h(u_i) = t(v_j) and primary(u_i) = secondary(v_j), join them by
        t(u_i) -> h(v_j) coloured (primary(v_j), secondary(u_i)), giving
        -(v_<j u_>i u_<i z v_>j).
    Positions are 1-based; the sign is (-1)^((m-1)(j-1) + (i-1)(m-i+1)) for
    the first family and (-1)^((m-1)(j-1) + i(m-i)) for the second.
    """
    m = len(u)
    for i, ui in enumerate(u, start=1):
        rest = u[i:] + u[: i - 1]
        for j, vj in enumerate(v, start=1):
            before, after = v[: j - 1], v[j:]
            base = (m - 1) * (j - 1)
            if ui.tail == vj.head and ui.secondary == vj.primary:
                sign = -1 if (base + (i - 1) * (m - i + 1)) % 2 else 1
                z = Arrow(ui.head, vj.tail, ui.primary, vj.secondary)
                for z2, c in _expand_arrow(S, z):
                    yield before + (z2,) + rest + after, sign * c
            if ui.head == vj.tail and ui.primary == vj.secondary:
                sign = 1 if (base + i * (m - i)) % 2 else -1
                z = Arrow(vj.head, ui.tail, vj.primary, ui.secondary)
                for z2, c in _expand_arrow(S, z):
                    yield before + rest + (z2,) + after, sign * c


def necklace_bracket(w1: GradedElement, w2: GradedElement, S) -> GradedElement:
    """The graded Lie bracket on DS/[DS, DS] by gluing necklaces.

    ``S`` is the semi-simple algebra (needed to expand (1,1)-coloured loops).
    Brackets with vertex symbols vanish.
    """
    acc: dict[Necklace, Coeff] = {}
    for n1, c1 in w1.terms.items():
        if not n1.word:
            continue
        for n2, c2 in w2.terms.items():
            if not n2.word:
                continue
            for word, sign in _gluings(S, n1.word, n2.word):
                neck, c = canonicalize(word, sign)
                if c:
                    acc[neck] = acc.get(neck, 0) + c * c1 * c2
    return GradedElement(acc)


def schouten_for_Cn(S, a1: Arrow, a2: Arrow) -> dict:
    """{{a1, a2}} on the path algebra of Q_S for S = C^n.

    Returns {(left, right): coeff} where a slot is ("vertex", i) for the
    idempotent e_i or ("arrow", arrow):
    {{i<-j, k<-i}} = -i (x) (k<-j) and {{k<-i, i<-j}} = (k<-j) (x) i for j != k,
    and 0 otherwise.
    """
    if any(d != 1 for d in S.dims):
        raise WrongAlgebra(f"the path-algebra form needs S = C^n, got dimensions {S.dims}")
    out: dict = {}
    if a1.head == a2.tail and a1.tail != a2.head:
        out[(("vertex", a1.head), ("arrow", Arrow(a2.head, a1.tail, 1, 1)))] = -1
    if a1.tail == a2.head and a1.head != a2.tail:
        out[(("arrow", Arrow(a1.head, a2.tail, 1, 1)), ("vertex", a1.tail))] = 1
    return out
