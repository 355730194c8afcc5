"""The double Schouten bracket on DS = T_S Der(S, S(x)S).

Words.  A basis of the degree-m part of DS is given by

    Path(a, (g_1, ..., g_m), b) = e^{t}_{a1} g_1 ... g_m e^{h}_{1b},

with t the tail of g_1 and h the head of g_m; degree 0 is S itself (matrix
units).  The generator g for an arrow with colours (p, q) is the derivation of
the tensor e^head_{p1} (x) e^tail_{1q}, and the inner bimodule action gives
e_{a1}.g.e_{1b} <-> e^head_{pb} (x) e^tail_{aq}.

Brackets.  Elements of DS (x) DS are dicts keyed by pairs of words.  The
bracket of two generators comes either from the closed-form table
(``schouten_generators``) or straight from the definition by composing
explicit derivations (``schouten_oracle``); ``SchoutenEngine`` extends either
one to all words by the graded Leibniz rule and graded antisymmetry.

Sign conventions (checked against the definition-level oracle):
  {{a, bc}} = (-1)^{(|a|-1)|b|} b{{a,c}} + {{a,b}}c      (outer action)
  {{a, b}}  = -(-1)^{(|a|-1)(|b|-1)} sigma{{b, a}},
  sigma(x (x) y) = (-1)^{|x||y|} y (x) x.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence

from .algebra import (
    ExplicitDoubleDerivation,
    MatrixUnit,
    SemiSimpleAlgebra,
    derivation_to_vector,
    inner_derivation,
    inner_derivation_matrix,
    lin_accumulate,
    pair_from_index,
)
from .exactmath import Coeff, LinearSolver, simplify
from .necklace import GradedElement, Necklace, canonicalize
from .quiver import Arrow, build_quiver


class DimensionTooLarge(ValueError):
    pass


class NotADerivation(ArithmeticError):
    pass


ORACLE_DIMENSION_LIMIT = 5


@dataclass(frozen=True, order=True)
class Path:
    start: int
    arrows: tuple[Arrow, ...]
    end: int

    @property
    def degree(self) -> int:
        return len(self.arrows)

    @property
    def tail(self) -> int:
        return self.arrows[0].tail

    @property
    def head(self) -> int:
        return self.arrows[-1].head

    def __str__(self) -> str:
        body = "*".join(a.label() for a in self.arrows)
        left = f"e{self.tail}[{self.start},1]*" if self.start != 1 else ""
        right = f"*e{self.head}[1,{self.end}]" if self.end != 1 else ""
        return left + body + right


Word = MatrixUnit | Path


def degree(w: Word) -> int:
    return 0 if isinstance(w, MatrixUnit) else len(w.arrows)


def generator(g: Arrow) -> Path:
    return Path(1, (g,), 1)


def mul(w1: Word | None, w2: Word | None) -> Word | None:
    """Product of basis words (None stands for the unit 1 on input)."""
    if w1 is None:
        return w2
    if w2 is None:
        return w1
    if isinstance(w1, MatrixUnit):
        if isinstance(w2, MatrixUnit):
            return SemiSimpleAlgebra.mul_units(w1, w2)
        if w1.component == w2.tail and w1.col == w2.start:
            return Path(w1.row, w2.arrows, w2.end)
        return None
    if isinstance(w2, MatrixUnit):
        if w2.component == w1.head and w1.end == w2.row:
            return Path(w1.start, w1.arrows, w2.col)
        return None
    if w1.head == w2.tail and w1.end == w2.start:
        return Path(w1.start, w1.arrows + w2.arrows, w2.end)
    return None


def factors(w: Word) -> list[Word]:
    if isinstance(w, MatrixUnit):
        return [w]
    out: list[Word] = [generator(g) for g in w.arrows]
    if w.start != 1:
        out.insert(0, MatrixUnit(w.tail, w.start, 1))
    if w.end != 1:
        out.append(MatrixUnit(w.head, 1, w.end))
    return out


def word_of(arrows: Sequence[Arrow], start: int = 1, end: int = 1) -> Path:
    arrows = tuple(arrows)
    for a, b in zip(arrows, arrows[1:]):
        if a.head != b.tail:
            raise ValueError(f"{a} and {b} do not compose")
    return Path(start, arrows, end)


def expand_loop11(vertex: int, d: int, start: int, end: int) -> dict[Path, int]:
    """x^i_{11} = -sum_{r>=2} x^i_{rr} with the given outer indices."""
    return {Path(start, (Arrow(vertex, vertex, r, r),), end): -1 for r in range(2, d + 1)}


def arrow_element(S: SemiSimpleAlgebra, g: Arrow, start: int = 1, end: int = 1) -> dict[Path, int]:
    """e_{start,1} g e_{1,end}, with (1,1) loops expanded."""
    if g.is_loop and (g.primary, g.secondary) == (1, 1):
        return expand_loop11(g.head, S.d(g.head), start, end)
    return {Path(start, (g,), end): 1}


# ----------------------------------------------------------------------
# DS (x) DS helpers


def sigma(t: Mapping) -> dict:
    out: dict = {}
    for (x, y), c in t.items():
        lin_accumulate(out, (y, x), -c if degree(x) * degree(y) % 2 else c)
    return out


def left_mul(w: Word | None, t: Mapping) -> dict:
    if w is None:
        return dict(t)
    out: dict = {}
    for (x, y), c in t.items():
        z = mul(w, x)
        if z is not None:
            lin_accumulate(out, (z, y), c)
    return out


def right_mul(t: Mapping, w: Word | None) -> dict:
    if w is None:
        return dict(t)
    out: dict = {}
    for (x, y), c in t.items():
        z = mul(y, w)
        if z is not None:
            lin_accumulate(out, (x, z), c)
    return out


def multiply(t: Mapping) -> dict:
    """mu : DS (x) DS -> DS."""
    out: dict = {}
    for (x, y), c in t.items():
        z = mul(x, y)
        if z is not None:
            lin_accumulate(out, z, c)
    return out


def reduce_mod_commutators(element: Mapping[Word, Coeff]) -> GradedElement:
    """Image of an element of DS in DS/[DS, DS]."""
    acc: dict[Necklace, Coeff] = {}
    for w, c in element.items():
        if isinstance(w, MatrixUnit):
            if w.row == w.col:
                neck = Necklace.vertex_symbol(w.component)
                acc[neck] = acc.get(neck, 0) + c
            continue
        if w.start != w.end or w.head != w.tail:
            continue
        neck, c2 = canonicalize(w.arrows, c)
        if c2:
            acc[neck] = acc.get(neck, 0) + c2
    return GradedElement(acc)


def necklace_word(n: Necklace) -> Word:
    if not n.word:
        return MatrixUnit(n.vertex, 1, 1)
    return Path(1, n.word, 1)


def format_tensor(t: Mapping) -> str:
    if not t:
        return "0"
    parts = []
    for (x, y), c in sorted(t.items(), key=lambda kv: _tensor_sort_key(kv[0])):
        parts.append(f"{c}*[{x} (x) {y}]")
    return " + ".join(parts).replace("+ -", "- ")


def _word_sort_key(w: Word) -> tuple:
    if isinstance(w, MatrixUnit):
        return (0, w.component, w.row, w.col)
    return (w.degree, w.start, tuple(a.sort_key for a in w.arrows), w.end)


def _tensor_sort_key(pair) -> tuple:
    return (_word_sort_key(pair[0]), _word_sort_key(pair[1]))


# ----------------------------------------------------------------------
# generator brackets: closed form


class _Terms:
    """Accumulator for sums of (slot1, slot2) products of words."""

    def __init__(self, S: SemiSimpleAlgebra):
        self.S = S
        self.out: dict = {}

    def add(self, c: Coeff, left: Sequence, right: Sequence) -> None:
        """Add c * prod(left) (x) prod(right); factors are words or arrows."""
        if not c:
            return
        for lw, lc in self._expand(left).items():
            for rw, rc in self._expand(right).items():
                lin_accumulate(self.out, (lw, rw), c * lc * rc)

    def _expand(self, factors_: Sequence) -> dict:
        acc: dict = {None: 1}
        for f in factors_:
            parts = arrow_element(self.S, f) if isinstance(f, Arrow) else {f: 1}
            nxt: dict = {}
            for w, c in acc.items():
                for w2, c2 in parts.items():
                    z = mul(w, w2)
                    if z is not None:
                        lin_accumulate(nxt, z, c * c2)
            acc = nxt
        return {w: c for w, c in acc.items() if w is not None}


def _delta(a: int, b: int) -> int:
    return 1 if a == b else 0


def _closed_form(S: SemiSimpleAlgebra, g1: Arrow, g2: Arrow) -> dict:
    """The case table for {{g1, g2}}.

    Products such as e_{1q} x_{rs} are products in DS, so most of the listed
    terms vanish unless the relevant colour is 1.  The y-x case is obtained
    from the x-y case by antisymmetry.
    """
    e = MatrixUnit
    T = _Terms(S)
    if g1.is_loop and g2.is_loop:
        i, p, q = g1.head, g1.primary, g1.secondary
        j, r, s = g2.head, g2.primary, g2.secondary
        if i != j:
            return {}
        T.add(1, [e(i, p, 1)], [e(i, 1, q), g2])
        T.add(-1, [g2, e(i, p, 1)], [e(i, 1, q)])
        T.add(1, [e(i, 1, s)], [g1, e(i, r, 1)])
        T.add(-1, [e(i, 1, s), g1], [e(i, r, 1)])
        T.add(_delta(r, q), [Arrow(i, i, p, s)], [e(i, 1, 1)])
        T.add(-_delta(p, s), [e(i, 1, 1)], [Arrow(i, i, r, q)])
        return T.out
    if g1.is_loop:
        i, p, q = g1.head, g1.primary, g1.secondary
        u, v, r, s = g2.head, g2.tail, g2.primary, g2.secondary
        if u == i:
            T.add(1, [e(v, 1, s)], [g1, e(i, r, 1)])
            T.add(_delta(q, r), [Arrow(i, v, p, s)], [e(i, 1, 1)])
            T.add(-1, [g2, e(i, p, 1)], [e(i, 1, q)])
        elif v == i:
            T.add(1, [e(i, p, 1)], [e(i, 1, q), g2])
            T.add(-_delta(p, s), [e(i, 1, 1)], [Arrow(u, i, r, q)])
            T.add(-1, [e(i, 1, s), g1], [e(u, r, 1)])
        return T.out
    if g2.is_loop:
        return {k: -c for k, c in sigma(_closed_form(S, g2, g1)).items()}
    r, s, p, q = g1.head, g1.tail, g1.primary, g1.secondary
    c, d, a, b = g2.head, g2.tail, g2.primary, g2.secondary
    if r != d and c != s:
        T.add(1, [e(r, p, 1)], [e(s, 1, q), g2])
        T.add(1, [e(d, 1, b)], [g1, e(c, a, 1)])
        T.add(-1, [e(d, 1, b), g1], [e(c, a, 1)])
        T.add(-1, [g2, e(r, p, 1)], [e(s, 1, q)])
    elif r == d and c != s:
        T.add(-_delta(b, p), [e(d, 1, 1)], [Arrow(c, s, a, q)])
    elif r != d and c == s:
        # not listed in the table; mirror image of the previous row
        T.add(_delta(q, a), [Arrow(r, d, p, b)], [e(s, 1, 1)])
    else:
        T.add(-_delta(b, p), [e(r, 1, 1)], [Arrow(s, s, a, q)])
        T.add(_delta(q, a), [Arrow(r, r, p, b)], [e(s, 1, 1)])
    return T.out


def schouten_generators(S: SemiSimpleAlgebra, g1: Arrow, g2: Arrow) -> dict:
    """{{g1, g2}} for two arrows of Q_S, as an element of DS (x) DS."""
    return dict(_generator_table(S)(g1, g2))


@lru_cache(maxsize=None)
def _generator_table(S: SemiSimpleAlgebra) -> Callable[[Arrow, Arrow], dict]:
    @lru_cache(maxsize=None)
    def table(g1: Arrow, g2: Arrow) -> dict:
        return _closed_form(S, g1, g2)

    return table


# ----------------------------------------------------------------------
# generator brackets: from the definition


class _Oracle:
    """Brackets of generators computed from explicit derivations."""

    def __init__(self, S: SemiSimpleAlgebra):
        if sum(S.dims) > ORACLE_DIMENSION_LIMIT:
            raise DimensionTooLarge(f"oracle is limited to sum(d_i) <= {ORACLE_DIMENSION_LIMIT}, got {sum(S.dims)}")
        self.S = S
        self.solver = LinearSolver(inner_derivation_matrix(S))
        self.derivations = {g: inner_derivation(S, {g.tensor(): 1}) for g in build_quiver(S)}

    def decompose(self, theta: ExplicitDoubleDerivation) -> dict[Path, Coeff]:
        """Write a derivation as a combination of degree-1 words."""
        S = self.S
        x = self.solver.solve(derivation_to_vector(S, theta))
        out: dict = {}
        for col, c in x.items():
            u, v = pair_from_index(S, col)
            g = Arrow(u.component, v.component, u.row, v.col)
            for w, s in arrow_element(S, g, v.row, u.col).items():
                lin_accumulate(out, w, c * s)
        return out

    def bracket(self, g1: Arrow, g2: Arrow) -> dict:
        S = self.S
        delta, Delta = self.derivations[g1], self.derivations[g2]
        left_slices: dict[MatrixUnit, dict] = {}
        right_slices: dict[MatrixUnit, dict] = {}
        for z in S.units:
            # The middle factor of each triple tensor is the S-part; the outer
            # two carry the derivation.  tau_(23) / tau_(12) then move the
            # S-part to the right / left.
            # (delta (x) 1) Delta(z) - (1 (x) Delta) delta(z)
            for (a, b), c in Delta.on_unit(z).items():
                for (a1, a2), c2 in delta.on_unit(a).items():
                    _put(left_slices, a2, z, (a1, b), c * c2)
            for (a, b), c in delta.on_unit(z).items():
                for (b1, b2), c2 in Delta.on_unit(b).items():
                    _put(left_slices, b1, z, (a, b2), -c * c2)
            # (1 (x) delta) Delta(z) - (Delta (x) 1) delta(z)
            for (a, b), c in Delta.on_unit(z).items():
                for (b1, b2), c2 in delta.on_unit(b).items():
                    _put(right_slices, b1, z, (a, b2), c * c2)
            for (a, b), c in delta.on_unit(z).items():
                for (a1, a2), c2 in Delta.on_unit(a).items():
                    _put(right_slices, a2, z, (a1, b), -c * c2)
        out: dict = {}
        for s, values in left_slices.items():
            theta = self._as_derivation(values)
            for w, c in self.decompose(theta).items():
                lin_accumulate(out, (w, s), c)
        for s, values in right_slices.items():
            theta = self._as_derivation(values)
            for w, c in self.decompose(theta).items():
                lin_accumulate(out, (s, w), c)
        return out

    def _as_derivation(self, values: dict) -> ExplicitDoubleDerivation:
        theta = ExplicitDoubleDerivation(self.S, {z: {k: v for k, v in t.items() if v} for z, t in values.items()})
        defect = theta.leibniz_defect()
        if defect is not None:
            raise NotADerivation(f"slice fails the Leibniz rule on {defect[0]}, {defect[1]}")
        return theta


def _put(slices: dict, s: MatrixUnit, z: MatrixUnit, pair, c: Coeff) -> None:
    lin_accumulate(slices.setdefault(s, {}).setdefault(z, {}), pair, c)


@lru_cache(maxsize=None)
def _oracle(S: SemiSimpleAlgebra) -> _Oracle:
    return _Oracle(S)


def schouten_oracle(S: SemiSimpleAlgebra, g1: Arrow, g2: Arrow) -> dict:
    """{{g1, g2}} evaluated from the definition {{d, D}}_l + {{d, D}}_r."""
    return _oracle(S).bracket(g1, g2)


def derivation_value(S: SemiSimpleAlgebra, g: Arrow, s: MatrixUnit) -> dict:
    """{{g, s}} = g(s) in S (x) S for a generator g."""
    (u, v) = g.tensor()
    out: dict = {}
    # x' (x) x'' s - s x' (x) x''
    w = SemiSimpleAlgebra.mul_units(v, s)
    if w is not None:
        lin_accumulate(out, (u, w), 1)
    w = SemiSimpleAlgebra.mul_units(s, u)
    if w is not None:
        lin_accumulate(out, (w, v), -1)
    return out


# ----------------------------------------------------------------------


class SchoutenEngine:
    """Double Schouten bracket on all of DS, built from generator brackets."""

    def __init__(self, S: SemiSimpleAlgebra, generator_bracket: Callable[[Arrow, Arrow], dict] | None = None):
        self.S = S
        self._gen = generator_bracket or _generator_table(S)
        self._cache: dict = {}

    @classmethod
    def from_oracle(cls, S: SemiSimpleAlgebra) -> "SchoutenEngine":
        oracle = _oracle(S)
        return cls(S, lru_cache(maxsize=None)(oracle.bracket))

    def _base(self, w1: Word, w2: Word) -> dict:
        if isinstance(w1, MatrixUnit):
            if isinstance(w2, MatrixUnit):
                return {}
            return {k: -c for k, c in _swap(derivation_value(self.S, w2.arrows[0], w1)).items()}
        if isinstance(w2, MatrixUnit):
            return derivation_value(self.S, w1.arrows[0], w2)
        return self._gen(w1.arrows[0], w2.arrows[0])

    def word_bracket(self, w1: Word, w2: Word) -> dict:
        key = (w1, w2)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        f2 = factors(w2)
        if len(f2) > 1:
            out: dict = {}
            d1 = degree(w1) - 1
            for s, f in enumerate(f2):
                left = _product(f2[:s])
                right = _product(f2[s + 1 :])
                sign = -1 if d1 * _deg(f2[:s]) % 2 else 1
                part = left_mul(left, right_mul(self.word_bracket(w1, f), right))
                for k, c in part.items():
                    lin_accumulate(out, k, sign * c)
        elif len(factors(w1)) > 1:
            sign = 1 if (degree(w1) - 1) * (degree(w2) - 1) % 2 else -1
            out = {k: sign * c for k, c in sigma(self.word_bracket(w2, w1)).items()}
        else:
            out = self._base(w1, w2)
        self._cache[key] = out
        return out

    def bracket(self, x: Mapping[Word, Coeff], y: Mapping[Word, Coeff]) -> dict:
        out: dict = {}
        for w1, c1 in x.items():
            for w2, c2 in y.items():
                for k, c in self.word_bracket(w1, w2).items():
                    lin_accumulate(out, k, simplify(c1 * c2 * c))
        return out

    def cyclic_bracket(self, a: GradedElement, b: GradedElement) -> GradedElement:
        """{a, b} = mu{{a, b}} modulo supercommutators."""
        out = GradedElement()
        for n1, c1 in a.terms.items():
            for n2, c2 in b.terms.items():
                t = self.word_bracket(necklace_word(n1), necklace_word(n2))
                out = out + reduce_mod_commutators(multiply(t)).scale(c1 * c2)
        return out


def _swap(t: Mapping) -> dict:
    return {(y, x): c for (x, y), c in t.items()}


def _product(ws: Sequence[Word]) -> Word | None:
    out = None
    for w in ws:
        out = mul(out, w)
    return out


def _deg(ws: Iterable[Word]) -> int:
    return sum(degree(w) for w in ws)


# ----------------------------------------------------------------------
# double brackets on S induced by degree-2 tensors


UnitPair = tuple[MatrixUnit, MatrixUnit]


class DoubleBracketTable:
    """A bilinear map S x S -> S (x) S stored on pairs of matrix units."""

    def __init__(self, S: SemiSimpleAlgebra, values: Mapping[UnitPair, Mapping[UnitPair, Coeff]] | None = None):
        self.S = S
        self.values: dict[UnitPair, dict[UnitPair, Coeff]] = {
            k: dict(v) for k, v in (values or {}).items() if v
        }

    def on_units(self, a: MatrixUnit, b: MatrixUnit) -> dict[UnitPair, Coeff]:
        return self.values.get((a, b), {})

    def __call__(self, x: Mapping[MatrixUnit, Coeff], y: Mapping[MatrixUnit, Coeff]) -> dict:
        out: dict = {}
        for a, ca in x.items():
            for b, cb in y.items():
                for k, c in self.on_units(a, b).items():
                    lin_accumulate(out, k, simplify(ca * cb * c))
        return out

    def is_zero(self) -> bool:
        return not self.values

    def antisymmetry_defect(self) -> UnitPair | None:
        """First (a, b) with {{a,b}} != -{{b,a}}^o (degree 0, so ^o is the swap)."""
        for a in self.S.units:
            for b in self.S.units:
                lhs = self.on_units(a, b)
                rhs = {(y, x): -c for (x, y), c in self.on_units(b, a).items()}
                if _differs(lhs, rhs):
                    return (a, b)
        return None

    def leibniz_defect(self) -> tuple[MatrixUnit, MatrixUnit, MatrixUnit] | None:
        """First (a, b, c) with {{a, bc}} != b{{a,c}} + {{a,b}}c."""
        S = self.S
        for a in S.units:
            for b in S.units:
                for c in S.units:
                    bc = S.mul_units(b, c)
                    lhs = self.on_units(a, bc) if bc is not None else {}
                    rhs: dict = {}
                    for (x, y), v in self.on_units(a, c).items():
                        z = S.mul_units(b, x)
                        if z is not None:
                            lin_accumulate(rhs, (z, y), v)
                    for (x, y), v in self.on_units(a, b).items():
                        z = S.mul_units(y, c)
                        if z is not None:
                            lin_accumulate(rhs, (x, z), v)
                    if _differs(lhs, rhs):
                        return (a, b, c)
        return None

    def format(self) -> str:
        lines = []
        for (a, b), v in sorted(self.values.items()):
            lines.append(f"{{{{{a}, {b}}}}} = {format_tensor(v)}")
        return "\n".join(lines) if lines else "0"


def _differs(x: Mapping, y: Mapping) -> bool:
    keys = set(x) | set(y)
    return any(simplify(x.get(k, 0) - y.get(k, 0)) for k in keys)


def tensor_terms(P) -> Mapping[tuple[Arrow, Arrow], Coeff]:
    return P.terms if hasattr(P, "terms") else P


def induced_double_bracket(S: SemiSimpleAlgebra, P) -> DoubleBracketTable:
    """{{a,b}} = D(b)'d(a)'' (x) d(a)'D(b)'' - d(b)'D(a)'' (x) D(a)'d(b)'' for P = dD."""
    values: dict[UnitPair, dict] = {}
    for (g1, g2), coeff in tensor_terms(P).items():
        vals1 = {s: derivation_value(S, g1, s) for s in S.units}
        vals2 = {s: derivation_value(S, g2, s) for s in S.units}
        for a in S.units:
            for b in S.units:
                acc = values.setdefault((a, b), {})
                _induced_terms(acc, vals1[a], vals2[b], coeff)
                _induced_terms(acc, vals1[b], vals2[a], -coeff, flip=True)
    values = {k: {p: simplify(c) for p, c in v.items() if simplify(c)} for k, v in values.items()}
    table = DoubleBracketTable(S, {k: v for k, v in values.items() if v})
    return table


def _induced_terms(acc: dict, da: Mapping, Db: Mapping, coeff: Coeff, flip: bool = False) -> None:
    """Add coeff * Db' da'' (x) da' Db'' (or d(b)' D(a)'' (x) D(a)' d(b)'' when flip)."""
    for (d1, d2), c1 in da.items():
        for (D1, D2), c2 in Db.items():
            if flip:
                # da is d(b), Db is D(a):  d(b)' D(a)'' (x) D(a)' d(b)''
                left = SemiSimpleAlgebra.mul_units(d1, D2)
                right = SemiSimpleAlgebra.mul_units(D1, d2)
            else:
                left = SemiSimpleAlgebra.mul_units(D1, d2)
                right = SemiSimpleAlgebra.mul_units(d1, D2)
            if left is not None and right is not None:
                lin_accumulate(acc, (left, right), coeff * c1 * c2)


def double_jacobi_check(table: DoubleBracketTable) -> tuple[bool, tuple | None]:
    """Check {{a,{{b,c}}}}_L + tau{{b,{{c,a}}}}_L + tau^2{{c,{{a,b}}}}_L = 0 on matrix units.

    {{a, x (x) y}}_L = {{a,x}} (x) y and tau(u (x) v (x) w) = w (x) u (x) v.
    Only triples where one of {{b,c}}, {{c,a}}, {{a,b}} is nonzero can fail.
    """
    S = table.S
    units = S.units
    idx = {u: n for n, u in enumerate(units)}
    T: dict[tuple[int, int], list[tuple[int, int, Coeff]]] = {}
    for (a, b), val in table.values.items():
        T[(idx[a], idx[b])] = [(idx[x], idx[y], c) for (x, y), c in val.items()]
    n = len(units)
    triples = set()
    for (x, y) in T:
        for z in range(n):
            triples.add((z, x, y))
            triples.add((y, z, x))
            triples.add((x, y, z))
    empty: list = []
    for a, b, c in sorted(triples):
        total: dict = {}
        # {{a,{{b,c}}}}_L
        for x, y, c1 in T.get((b, c), empty):
            for u, v, c2 in T.get((a, x), empty):
                k = (u, v, y)
                total[k] = total.get(k, 0) + c1 * c2
        # tau {{b,{{c,a}}}}_L: (u, v, y) -> (y, u, v)
        for x, y, c1 in T.get((c, a), empty):
            for u, v, c2 in T.get((b, x), empty):
                k = (y, u, v)
                total[k] = total.get(k, 0) + c1 * c2
        # tau^2 {{c,{{a,b}}}}_L: (u, v, y) -> (v, y, u)
        for x, y, c1 in T.get((a, b), empty):
            for u, v, c2 in T.get((c, x), empty):
                k = (v, y, u)
                total[k] = total.get(k, 0) + c1 * c2
        if any(simplify(v) for v in total.values()):
            return False, (units[a], units[b], units[c])
    return True, None
