"""The complex d_P = {P, -} on DS/[DS, DS] and its cohomology.

Degree 0 is spanned by the vertex symbols e_i; degree n >= 1 by the nonzero
necklaces of length n in the double derivation quiver.  On necklaces d_P is
the gluing bracket; on vertex symbols it is {P, e_i} computed by the
Schouten engine and reduced modulo supercommutators.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .algebra import MatrixUnit, SemiSimpleAlgebra
from .exactmath import ExactMatrix, Poly, rank, rank_and_kernel
from .necklace import GradedElement, Necklace, canonicalize, necklace_bracket
from .quiver import Arrow, build_quiver
from .schouten import SchoutenEngine
from .tensors import DoubleTensor, NotPoisson, check_tensor

MAX_BASIS = 20000


class BasisTooLarge(ValueError):
    pass


class UnsupportedTensorShape(ValueError):
    pass


def necklace_basis(S: SemiSimpleAlgebra, degree: int, limit: int = MAX_BASIS) -> list[Necklace]:
    """Nonzero necklaces of the given degree, sorted."""
    if degree == 0:
        return [Necklace.vertex_symbol(i) for i in range(1, S.k + 1)]
    arrows = sorted(build_quiver(S).arrows)
    out: set[Necklace] = set()

    def walk(word: list[Arrow]) -> None:
        if len(word) == degree:
            if word[-1].head == word[0].tail:
                neck, c = canonicalize(word)
                if c:
                    out.add(neck)
                    if len(out) > limit:
                        raise BasisTooLarge(f"more than {limit} necklaces in degree {degree}")
            return
        for a in arrows:
            # the first arrow is a minimal one, so every rotation class is reached
            if a.tail == word[-1].head and not a < word[0]:
                word.append(a)
                walk(word)
                word.pop()

    for first in arrows:
        walk([first])
    return sorted(out)


@dataclass
class Complex:
    P: DoubleTensor
    S: SemiSimpleAlgebra
    max_degree: int
    bases: dict[int, list[Necklace]] = field(default_factory=dict)
    differentials: dict[int, ExactMatrix] = field(default_factory=dict)

    def betti(self, i: int) -> int:
        if not 0 <= i < self.max_degree:
            raise ValueError(f"degree {i} needs the complex up to degree {i + 1}; built up to {self.max_degree}")
        dim = len(self.bases[i])
        out_rank = rank(self.differentials[i])
        in_rank = rank(self.differentials[i - 1]) if i > 0 else 0
        return dim - out_rank - in_rank

    def betti_via_kernel(self, i: int) -> int:
        """Second route: kernel of d_i minus rank of the transposed d_{i-1}."""
        kernel = rank_and_kernel(self.differentials[i])[1]
        in_rank = rank(self.differentials[i - 1].transpose()) if i > 0 else 0
        return len(kernel) - in_rank

    @cached_property
    def square_is_zero(self) -> bool:
        for i in range(self.max_degree - 1):
            if not (self.differentials[i + 1] @ self.differentials[i]).is_zero():
                return False
        return True

    def apply(self, x: GradedElement) -> GradedElement:
        return differential(self.P, self.S, x)

    def table(self) -> dict[int, int]:
        return {i: self.betti(i) for i in range(self.max_degree)}


def differential(P: DoubleTensor, S: SemiSimpleAlgebra, x: GradedElement) -> GradedElement:
    necklaces = GradedElement({n: c for n, c in x.terms.items() if n.word})
    out = necklace_bracket(P.necklace(), necklaces, S)
    vertices = {n: c for n, c in x.terms.items() if not n.word}
    if vertices:
        engine = SchoutenEngine(S)
        out = out + engine.cyclic_bracket(P.necklace(), GradedElement(vertices))
    return out


def build_complex(P: DoubleTensor, S: SemiSimpleAlgebra, max_degree: int, limit: int = MAX_BASIS) -> Complex:
    """Bases in degrees 0..max_degree and the matrices of d_P between them."""
    if any(isinstance(c, Poly) for c in P.terms.values()):
        raise ValueError("the complex needs numeric coefficients")
    check = check_tensor(P, S)
    if not check.poisson:
        raise NotPoisson(f"{{P,P}} = {check.obstruction}")
    cx = Complex(P, S, max_degree)
    for n in range(max_degree + 1):
        cx.bases[n] = necklace_basis(S, n, limit)
    for n in range(max_degree):
        target = {neck: r for r, neck in enumerate(cx.bases[n + 1])}
        columns = []
        for neck in cx.bases[n]:
            image = differential(P, S, GradedElement({neck: 1}))
            col = {}
            for k, c in image.terms.items():
                if k not in target:
                    raise AssertionError(f"{k} missing from the degree {n + 1} basis")
                col[target[k]] = c
            columns.append(col)
        cx.differentials[n] = ExactMatrix.from_columns(columns, len(cx.bases[n + 1]))
    if not cx.square_is_zero:
        raise AssertionError("d_P o d_P != 0")
    return cx


def betti(P: DoubleTensor, S: SemiSimpleAlgebra, i: int) -> int:
    return build_complex(P, S, i + 1).betti(i)


# ----------------------------------------------------------------------
# first cohomology for a single 2-cycle


def _loop(S: SemiSimpleAlgebra, v: int, a: int, b: int) -> GradedElement:
    """The loop at v coloured (a, b); the (1,1) colour is -sum_{r>=2} x_rr."""
    if (a, b) != (1, 1):
        return GradedElement.necklace((Arrow(v, v, a, b),))
    return GradedElement.from_words([((Arrow(v, v, r, r),), -1) for r in range(2, S.d(v) + 1)])


def h1_dimension_formula(P: DoubleTensor, S: SemiSimpleAlgebra) -> int:
    """sum_{k != i,j} (n_k^2 - 1) + (n_i - 1)^2 + (n_j - 1)^2."""
    i, j, *_ = _two_vertex_shape(P, S)
    return sum(S.d(k) ** 2 - 1 for k in range(1, S.k + 1) if k not in (i, j)) + (S.d(i) - 1) ** 2 + (S.d(j) - 1) ** 2


def _two_vertex_shape(P: DoubleTensor, S: SemiSimpleAlgebra) -> tuple[int, int, int, int, int, int]:
    """(i, j, p, q, r, s) for P = (i -(p,q)-> j)(j -(r,s)-> i) with q != r and p != s.

    Two copies of C are also accepted: no loops live there, so the colour
    condition has nothing to restrict.
    """
    if len(P.terms) != 1:
        raise UnsupportedTensorShape("need a single monomial")
    (g1, g2), _ = next(iter(P.terms.items()))
    if g1.is_loop:
        raise UnsupportedTensorShape("the closed form covers two distinct vertices")
    i, j = g1.tail, g1.head
    p, q, r, s = g1.primary, g1.secondary, g2.primary, g2.secondary
    if (q == r or p == s) and (S.d(i), S.d(j)) != (1, 1):
        raise UnsupportedTensorShape("need q != r and p != s")
    return i, j, p, q, r, s


def h1_generators(P: DoubleTensor, S: SemiSimpleAlgebra) -> list[GradedElement]:
    """The listed degree-1 classes for P = (i -(p,q)-> j)(j -(r,s)-> i).

    Loop colours at i come from [n_i] and at j from [n_j]: q, r are colours at
    i and p, s colours at j.  The two sums pair the loop coloured by the
    colour at i with the loop coloured by the colour at j on the same arrow.
    """
    i, j, p, q, r, s = _two_vertex_shape(P, S)
    out: list[GradedElement] = []
    for k in range(1, S.k + 1):
        if k in (i, j):
            continue
        for a in range(1, S.d(k) + 1):
            for b in range(1, S.d(k) + 1):
                if (a, b) != (1, 1):
                    out.append(_loop(S, k, a, b))
    for a in range(1, S.d(i) + 1):
        for b in range(1, S.d(i) + 1):
            if a != q and b != r:
                out.append(_loop(S, i, a, b))
    for a in range(1, S.d(j) + 1):
        for b in range(1, S.d(j) + 1):
            if a != s and b != p:
                out.append(_loop(S, j, a, b))
    out.append(_loop(S, i, r, r) + _loop(S, j, s, s))
    out.append(_loop(S, i, q, q) + _loop(S, j, p, p))
    return [g for g in out if g]
