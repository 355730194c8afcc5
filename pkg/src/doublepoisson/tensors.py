"""Degree-2 double Poisson tensors: 2-cycle monomials, {P,P} and moment maps.

A monomial g1 g2 is the element Path(1, (g1, g2), 1) of DS, i.e. the tensor
delta Delta with delta = g1 and Delta = g2.  It is a 2-cycle when g2 returns
to the tail of g1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .algebra import ExplicitDoubleDerivation, MatrixUnit, SemiSimpleAlgebra, gauge_element, inner_derivation
from .exactmath import Coeff, ExactMatrix, Inconsistent, LinearSolver, Poly, coeff_to_str, parse_coefficient, simplify
from .necklace import GradedElement, necklace_bracket
from .quiver import Arrow, build_quiver
from .schouten import (
    Path,
    SchoutenEngine,
    double_jacobi_check,
    induced_double_bracket,
    multiply,
)


class NotACycle(ValueError):
    pass


class NoMomentMap(ArithmeticError):
    pass


class NotPoisson(ArithmeticError):
    pass


class SymbolicCoefficients(TypeError):
    pass


Monomial = tuple[Arrow, Arrow]


def check_cycle(m: Monomial) -> None:
    g1, g2 = m
    if g1.head != g2.tail or g2.head != g1.tail:
        raise NotACycle(f"{g1.label()} {g2.label()} is not a cycle of length two")


class DoubleTensor:
    """A linear combination of 2-cycle monomials with (possibly symbolic) coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Coeff] | None = None):
        clean: dict[Monomial, Coeff] = {}
        for m, c in (terms or {}).items():
            check_cycle(m)
            c = simplify(c)
            if c:
                clean[m] = simplify(clean.get(m, 0) + c)
        self.terms = {m: c for m, c in clean.items() if c}

    @classmethod
    def monomial(cls, g1: Arrow, g2: Arrow, coeff: Coeff = 1) -> "DoubleTensor":
        return cls({(g1, g2): coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def necklace(self) -> GradedElement:
        """Image in DS/[DS, DS]."""
        out = GradedElement()
        for (g1, g2), c in self.terms.items():
            out = out + GradedElement.necklace((g1, g2), c)
        return out

    def element(self) -> dict:
        """The element of DS as {Path: coeff}."""
        return {Path(1, m, 1): c for m, c in self.terms.items()}

    def is_symbolic(self) -> bool:
        return any(isinstance(c, Poly) for c in self.terms.values())

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: (kv[0][0].sort_key, kv[0][1].sort_key))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (g1, g2), c in self.items():
            text = coeff_to_str(c)
            if isinstance(c, Poly) and len(c.terms) > 1:
                text = f"({text})"
            parts.append(f"{text}*{g1.label()} {g2.label()}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_list(self) -> list[dict]:
        return [{"coeff": coeff_to_str(c), "delta": g1.to_dict(), "Delta": g2.to_dict()} for (g1, g2), c in self.items()]

    @classmethod
    def from_list(cls, items: Iterable[Mapping]) -> "DoubleTensor":
        acc: dict[Monomial, Coeff] = {}
        for item in items:
            m = (Arrow.from_dict(item["delta"]), Arrow.from_dict(item["Delta"]))
            acc[m] = acc.get(m, 0) + parse_coefficient(str(item["coeff"]))
        return cls(acc)


# ----------------------------------------------------------------------
# monomial classification


def is_poisson_monomial(m: Monomial, S: SemiSimpleAlgebra, reading: str = "stated") -> bool:
    """Closed-form test for {P,P} = 0 on a 2-cycle monomial.

    ``reading="stated"`` applies the published conditions: for y^{pq}_{ab} y^{qp}_{cd}
    the four cases on whether S_p, S_q are C; for x_{pq} x_{rs} the test
    (p-q)(p-s)(r-s)(r-q) != 0 or p=q=r or r=s=p.

    ``reading="corrected"`` is the rule that matches the brute-force routes:
    (a-d)(b-c) != 0 unless both vertices are C (then always true), and the loop
    test extended by its mirror cases p=q=s and r=s=q.
    """
    check_cycle(m)
    if reading not in ("stated", "corrected"):
        raise ValueError(f"unknown reading {reading!r}")
    g1, g2 = m
    if g1.is_loop:
        p, q, r, s = g1.primary, g1.secondary, g2.primary, g2.secondary
        ok = (p - q) * (p - s) * (r - s) * (r - q) != 0 or p == q == r or r == s == p
        if reading == "corrected":
            ok = ok or p == q == s or r == s == q
        return ok
    p, q = g1.head, g1.tail
    a, b, c, d = g1.primary, g1.secondary, g2.primary, g2.secondary
    big_p, big_q = S.d(p) > 1, S.d(q) > 1
    if not big_p and not big_q:
        return True
    if reading == "corrected" or (big_p and big_q):
        return (a - d) * (b - c) != 0
    if big_p:
        return a != d
    return b != c


@dataclass(frozen=True)
class TensorCheck:
    poisson: bool
    obstruction: GradedElement


def check_tensor(P: DoubleTensor, S: SemiSimpleAlgebra) -> TensorCheck:
    """{P,P} modulo supercommutators, as a polynomial identity in the coefficients."""
    neck = P.necklace()
    obstruction = necklace_bracket(neck, neck, S)
    return TensorCheck(not obstruction, obstruction)


def two_cycle_monomials(S: SemiSimpleAlgebra) -> list[Monomial]:
    arrows = build_quiver(S).arrows
    return [(g1, g2) for g1 in arrows for g2 in arrows if g1.head == g2.tail and g2.head == g1.tail]


@dataclass(frozen=True)
class MonomialReport:
    monomial: Monomial
    lemma: bool
    bracket: bool
    jacobi: bool
    nontrivial: bool

    @property
    def agree(self) -> bool:
        return self.lemma == self.bracket == self.jacobi

    def label(self) -> str:
        return f"{self.monomial[0].label()} {self.monomial[1].label()}"

    def to_dict(self) -> dict:
        return {
            "monomial": self.label(),
            "lemma": self.lemma,
            "bracket": self.bracket,
            "jacobi": self.jacobi,
            "nontrivial": self.nontrivial,
        }


def classify_monomial(m: Monomial, S: SemiSimpleAlgebra) -> MonomialReport:
    """The three routes: closed-form lemma, {P,P} on necklaces, double Jacobi on S."""
    P = DoubleTensor({m: 1})
    table = induced_double_bracket(S, P)
    return MonomialReport(
        m,
        is_poisson_monomial(m, S),
        check_tensor(P, S).poisson,
        double_jacobi_check(table)[0],
        not table.is_zero(),
    )


def classify_monomials(S: SemiSimpleAlgebra) -> list[MonomialReport]:
    return [classify_monomial(m, S) for m in two_cycle_monomials(S)]


def enumerate_poisson_monomials(S: SemiSimpleAlgebra, max_total: int = 5) -> list[MonomialReport]:
    """Monomials passing is_poisson_monomial, each with its brute-force certificates."""
    if sum(S.dims) > max_total:
        raise ValueError(f"sum of block sizes {sum(S.dims)} exceeds the bound {max_total}")
    return [r for r in classify_monomials(S) if r.lemma]


# ----------------------------------------------------------------------
# S = C^n


def cn_tensor(n: int, coeffs: Mapping[tuple[int, int], Coeff]) -> DoubleTensor:
    """P = sum_{i<j} c_ij d_ij d_ji with d_ij the arrow j -> i."""
    terms = {}
    for (i, j), c in coeffs.items():
        if not 1 <= i < j <= n:
            raise ValueError(f"need 1 <= i < j <= {n}, got ({i}, {j})")
        terms[(Arrow(i, j, 1, 1), Arrow(j, i, 1, 1))] = c
    return DoubleTensor(terms)


def symbolic_cn_tensor(n: int, prefix: str = "a") -> DoubleTensor:
    return cn_tensor(n, {(i, j): Poly.var(f"{prefix}{i}{j}") for i, j in itertools.combinations(range(1, n + 1), 2)})


def joint_vertex_relations(n: int, prefix: str = "a") -> list[Poly]:
    """a_ij a_ik + a_ik a_jk - a_ij a_jk for i < j < k."""
    a = lambda i, j: Poly.var(f"{prefix}{i}{j}")  # noqa: E731
    return [
        a(i, j) * a(i, k) + a(i, k) * a(j, k) - a(i, j) * a(j, k)
        for i, j, k in itertools.combinations(range(1, n + 1), 3)
    ]


def cn_coefficients(P: DoubleTensor, n: int) -> dict[tuple[int, int], Coeff]:
    out: dict[tuple[int, int], Coeff] = {(i, j): 0 for i, j in itertools.combinations(range(1, n + 1), 2)}
    for (g1, g2), c in P.terms.items():
        i, j = g1.head, g1.tail
        if not (i < j and g2.head == j and g2.tail == i):
            raise ValueError(f"{g1.label()} {g2.label()} is not of the form d_ij d_ji with i < j")
        out[(i, j)] = c
    return out


@dataclass(frozen=True)
class MomentMap:
    coefficients: dict[int, Coeff]

    def element(self) -> dict[MatrixUnit, Coeff]:
        return {MatrixUnit(i, 1, 1): c for i, c in self.coefficients.items() if c}

    def __str__(self) -> str:
        parts = [f"{coeff_to_str(c)}*e{i}" for i, c in sorted(self.coefficients.items()) if c]
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"

    def to_dict(self) -> dict:
        return {f"e{i}": coeff_to_str(c) for i, c in sorted(self.coefficients.items())}


def degree_one_derivation(S: SemiSimpleAlgebra, element: Mapping) -> ExplicitDoubleDerivation:
    """A degree-1 element of DS as a map S -> S (x) S.

    e_{a1} g e_{1b} is the inner derivation of e^head_{pb} (x) e^tail_{aq}.
    """
    tensor: dict = {}
    for w, c in element.items():
        if not isinstance(w, Path) or w.degree != 1:
            raise ValueError(f"{w} is not of degree one")
        g = w.arrows[0]
        key = (MatrixUnit(g.head, g.primary, w.end), MatrixUnit(g.tail, w.start, g.secondary))
        tensor[key] = tensor.get(key, 0) + c
    return inner_derivation(S, tensor)


def bracket_with_element(S: SemiSimpleAlgebra, P: DoubleTensor, mu: Mapping[MatrixUnit, Coeff]) -> ExplicitDoubleDerivation:
    """{P, mu} = multiplication of {{P, mu}}, read as a derivation of S."""
    engine = SchoutenEngine(S)
    return degree_one_derivation(S, multiply(engine.bracket(P.element(), mu)))


def moment_map(P: DoubleTensor, n: int) -> MomentMap:
    """The element mu with {P, mu} = -E, normalized by mu_1 = 0."""
    if P.is_symbolic():
        raise SymbolicCoefficients("moment maps need numeric coefficients")
    coeffs = cn_coefficients(P, n)
    zero = sorted(k for k, c in coeffs.items() if not c)
    if zero:
        raise NoMomentMap(f"c_{zero[0][0]}{zero[0][1]} = 0")
    S = SemiSimpleAlgebra((1,) * n)
    check = check_tensor(P, S)
    if not check.poisson:
        raise NotPoisson(f"{{P,P}} = {check.obstruction}")
    # {P, -} is linear in mu: solve for mu_2, ..., mu_n
    target = gauge_element(S).scaled(-1)
    columns = [bracket_with_element(S, P, {MatrixUnit(i, 1, 1): 1}) for i in range(2, n + 1)]
    keys = sorted({(u, k) for d in columns + [target] for u, v in d.values.items() for k in v})
    row = {k: r for r, k in enumerate(keys)}
    m = ExactMatrix.from_columns(
        [{row[(u, k)]: c for u, v in d.values.items() for k, c in v.items()} for d in columns], len(keys)
    )
    rhs = {row[(u, k)]: c for u, v in target.values.items() for k, c in v.items()}
    try:
        x = LinearSolver(m).solve(rhs)
    except Inconsistent:
        raise NoMomentMap("{P, mu} = -E has no solution") from None
    mu = MomentMap({1: Fraction(0), **{i: x.get(i - 2, Fraction(0)) for i in range(2, n + 1)}})
    if not verify_moment_map(P, mu, n):
        raise AssertionError("moment map failed verification")
    return mu


def verify_moment_map(P: DoubleTensor, mu: MomentMap, n: int) -> bool:
    S = SemiSimpleAlgebra((1,) * n)
    return bracket_with_element(S, P, mu.element()) == gauge_element(S).scaled(-1)
