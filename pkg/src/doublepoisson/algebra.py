"""Concrete semi-simple algebras M_{d_1} + ... + M_{d_k} in the matrix-unit basis.

Elements of S, S (x) S and S (x) S (x) S are sparse dicts keyed by matrix
units (resp. tuples of them).  Double derivations are stored by their value
on every matrix unit; this is the brute-force layer the quiver and bracket
formulas are checked against.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Iterable, Mapping, Sequence

from .exactmath import Coeff, ExactMatrix, LinearSolver, rank_and_kernel


class InvalidBratteli(ValueError):
    pass


@dataclass(frozen=True, order=True)
class MatrixUnit:
    """e^{component}_{row,col}; all indices start at 1."""

    component: int
    row: int
    col: int

    def __str__(self) -> str:
        return f"e{self.component}[{self.row},{self.col}]"


# ----------------------------------------------------------------------
# sparse linear combinations


def lin_add(*terms: Mapping) -> dict:
    out: dict = {}
    for t in terms:
        for k, v in t.items():
            out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v}


def lin_scale(t: Mapping, c: Coeff) -> dict:
    if not c:
        return {}
    return {k: v * c for k, v in t.items() if v * c}


def lin_sub(a: Mapping, b: Mapping) -> dict:
    return lin_add(a, lin_scale(b, -1))


def lin_accumulate(out: dict, key, value) -> None:
    if not value:
        return
    v = out.get(key, 0) + value
    if v:
        out[key] = v
    else:
        out.pop(key, None)


# ----------------------------------------------------------------------


@dataclass(frozen=True)
class SemiSimpleAlgebra:
    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise ValueError(f"invalid dimension vector {self.dims!r}")
        object.__setattr__(self, "dims", dims)

    @property
    def k(self) -> int:
        return len(self.dims)

    def d(self, i: int) -> int:
        return self.dims[i - 1]

    @cached_property
    def units(self) -> tuple[MatrixUnit, ...]:
        return tuple(
            MatrixUnit(i, p, q)
            for i, d in enumerate(self.dims, start=1)
            for p in range(1, d + 1)
            for q in range(1, d + 1)
        )

    @cached_property
    def unit_index(self) -> dict[MatrixUnit, int]:
        return {u: n for n, u in enumerate(self.units)}

    @property
    def dim(self) -> int:
        return sum(d * d for d in self.dims)

    def unit(self, i: int, p: int, q: int) -> MatrixUnit:
        u = MatrixUnit(i, p, q)
        if u not in self.unit_index:
            raise ValueError(f"{u} is not a matrix unit of S{self.dims}")
        return u

    def idempotent(self, i: int) -> dict[MatrixUnit, Fraction]:
        """e_i as e^i_{11} (only meaningful as a vertex idempotent when d_i = 1)."""
        return {self.unit(i, 1, 1): Fraction(1)}

    def one(self) -> dict[MatrixUnit, Fraction]:
        return {u: Fraction(1) for u in self.units if u.row == u.col}

    @staticmethod
    def mul_units(u: MatrixUnit, v: MatrixUnit) -> MatrixUnit | None:
        if u.component == v.component and u.col == v.row:
            return MatrixUnit(u.component, u.row, v.col)
        return None

    def mul(self, a: Mapping[MatrixUnit, Coeff], b: Mapping[MatrixUnit, Coeff]) -> dict:
        out: dict = {}
        for u, x in a.items():
            for v, y in b.items():
                w = self.mul_units(u, v)
                if w is not None:
                    lin_accumulate(out, w, x * y)
        return out

    def __str__(self) -> str:
        return " + ".join(f"M{d}" if d > 1 else "C" for d in self.dims)


# tensor helpers --------------------------------------------------------


def tensor(a: Mapping, b: Mapping) -> dict:
    out: dict = {}
    for u, x in a.items():
        for v, y in b.items():
            lin_accumulate(out, (u, v), x * y)
    return out


def act_slot(t: Mapping, slot: int, s: Mapping, side: str) -> dict:
    """Multiply factor ``slot`` of every tensor by ``s`` on the given side."""
    out: dict = {}
    for key, c in t.items():
        for v, y in s.items():
            if side == "left":
                w = SemiSimpleAlgebra.mul_units(v, key[slot])
            else:
                w = SemiSimpleAlgebra.mul_units(key[slot], v)
            if w is not None:
                lin_accumulate(out, key[:slot] + (w,) + key[slot + 1 :], c * y)
    return out


def permute(t: Mapping, perm: Sequence[int]) -> dict:
    """tau_s: (a_1,...,a_n) -> (a_{s^-1(1)},...).  ``perm[j]`` is the source slot of slot j."""
    return {tuple(key[p] for p in perm): c for key, c in t.items()}


def swap(t: Mapping) -> dict:
    return {(k[1], k[0]): c for k, c in t.items()}


# ----------------------------------------------------------------------


@dataclass
class ExplicitDoubleDerivation:
    """A double derivation S -> S (x) S stored by its values on matrix units."""

    algebra: SemiSimpleAlgebra
    values: dict[MatrixUnit, dict] = field(default_factory=dict)

    def __call__(self, y: Mapping[MatrixUnit, Coeff]) -> dict:
        out: dict = {}
        for u, c in y.items():
            for key, v in self.values.get(u, {}).items():
                lin_accumulate(out, key, c * v)
        return out

    def on_unit(self, u: MatrixUnit) -> dict:
        return self.values.get(u, {})

    def is_zero(self) -> bool:
        return not any(self.values.values())

    def __add__(self, other: "ExplicitDoubleDerivation") -> "ExplicitDoubleDerivation":
        units = set(self.values) | set(other.values)
        return ExplicitDoubleDerivation(
            self.algebra, {u: lin_add(self.values.get(u, {}), other.values.get(u, {})) for u in units}
        )

    def scaled(self, c: Coeff) -> "ExplicitDoubleDerivation":
        return ExplicitDoubleDerivation(self.algebra, {u: lin_scale(v, c) for u, v in self.values.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExplicitDoubleDerivation):
            return NotImplemented
        units = set(self.values) | set(other.values)
        return all(not lin_sub(self.values.get(u, {}), other.values.get(u, {})) for u in units)

    def inner_action(self, s: Mapping, t: Mapping) -> "ExplicitDoubleDerivation":
        """(s.theta.t)(u) = theta(u)' t (x) s theta(u)''."""
        vals = {}
        for u, v in self.values.items():
            vals[u] = act_slot(act_slot(v, 0, t, "right"), 1, s, "left")
        return ExplicitDoubleDerivation(self.algebra, vals)

    def leibniz_defect(self) -> tuple[MatrixUnit, MatrixUnit] | None:
        """First pair (a, b) with theta(ab) != a.theta(b) + theta(a).b, else None."""
        S = self.algebra
        for a in S.units:
            for b in S.units:
                ab = S.mul_units(a, b)
                lhs = self.on_unit(ab) if ab is not None else {}
                rhs = lin_add(
                    act_slot(self.on_unit(b), 0, {a: 1}, "left"),
                    act_slot(self.on_unit(a), 1, {b: 1}, "right"),
                )
                if lin_sub(lhs, rhs):
                    return (a, b)
        return None

    def is_derivation(self) -> bool:
        return self.leibniz_defect() is None


def inner_derivation(S: SemiSimpleAlgebra, x: Mapping) -> ExplicitDoubleDerivation:
    """d_x(y) = x' (x) x''y - yx' (x) x''."""
    vals = {}
    for y in S.units:
        vals[y] = lin_sub(act_slot(x, 1, {y: 1}, "right"), act_slot(x, 0, {y: 1}, "left"))
    return ExplicitDoubleDerivation(S, {u: v for u, v in vals.items() if v})


def gauge_element(S: SemiSimpleAlgebra) -> ExplicitDoubleDerivation:
    """E(a) = 1 (x) a - a (x) 1, the inner derivation of 1 (x) 1."""
    return inner_derivation(S, tensor(S.one(), S.one()))


# ----------------------------------------------------------------------
# the map D : S (x) S -> Der(S, S (x) S)


def _pair_basis(S: SemiSimpleAlgebra) -> list[tuple[MatrixUnit, MatrixUnit]]:
    return [(u, v) for u in S.units for v in S.units]


def _inner_derivation_matrix(
    S: SemiSimpleAlgebra, test_elements: Sequence[Mapping[MatrixUnit, Coeff]]
) -> ExactMatrix:
    """Matrix of x |-> (d_x(y))_{y in test_elements} on the pair basis of S (x) S."""
    pairs = _pair_basis(S)
    n = S.dim
    idx = S.unit_index
    entries: dict[tuple[int, int], Coeff] = {}
    for col, (a, b) in enumerate(pairs):
        for t, y in enumerate(test_elements):
            for yu, yc in y.items():
                # x'(x)x''y
                w = S.mul_units(b, yu)
                if w is not None:
                    r = (t * n + idx[a]) * n + idx[w]
                    entries[(r, col)] = entries.get((r, col), 0) + yc
                # - y x' (x) x''
                w = S.mul_units(yu, a)
                if w is not None:
                    r = (t * n + idx[w]) * n + idx[b]
                    entries[(r, col)] = entries.get((r, col), 0) - yc
    entries = {k: v for k, v in entries.items() if v}
    return ExactMatrix(len(test_elements) * n * n, len(pairs), entries)


def inner_derivation_matrix(S: SemiSimpleAlgebra) -> ExactMatrix:
    return _inner_derivation_matrix(S, [{u: Fraction(1)} for u in S.units])


def derivation_module_dimension(S: SemiSimpleAlgebra) -> tuple[int, dict]:
    """dim Der(S, S(x)S) as dim(S(x)S) - dim Ker(D), with the quiver certificate."""
    m = inner_derivation_matrix(S)
    rk, kernel = rank_and_kernel(m)
    dims = S.dims
    loops = {i: d * d - 1 for i, d in enumerate(dims, start=1)}
    arrows = {
        (i, j): dims[i - 1] * dims[j - 1]
        for i in range(1, S.k + 1)
        for j in range(1, S.k + 1)
        if i != j
    }
    formula = sum(loops[i] * dims[i - 1] ** 2 for i in loops) + sum(
        c * dims[i - 1] * dims[j - 1] for (i, j), c in arrows.items()
    )
    certificate = {
        "tensor_dimension": m.cols,
        "kernel_dimension": len(kernel),
        "loops": loops,
        "arrows": {f"{j}->{i}": c for (i, j), c in arrows.items()},
        "formula_dimension": formula,
    }
    return m.cols - len(kernel), certificate


# ----------------------------------------------------------------------
# Bratteli diagrams


@dataclass(frozen=True)
class BratteliDiagram:
    """Embedding T = M_{e_1} + ... + M_{e_l} in S; a[i][u] copies of M_{e_u} in M_{d_i}."""

    sub_dims: tuple[int, ...]
    multiplicities: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "sub_dims", tuple(int(e) for e in self.sub_dims))
        object.__setattr__(self, "multiplicities", tuple(tuple(int(a) for a in row) for row in self.multiplicities))
        if any(e < 1 for e in self.sub_dims):
            raise InvalidBratteli("sub-dimensions must be positive")
        for row in self.multiplicities:
            if len(row) != len(self.sub_dims) or any(a < 0 for a in row):
                raise InvalidBratteli("multiplicity grid has the wrong shape or negative entries")

    def validate(self, S: SemiSimpleAlgebra) -> None:
        if len(self.multiplicities) != S.k:
            raise InvalidBratteli(f"expected {S.k} rows, got {len(self.multiplicities)}")
        for i, row in enumerate(self.multiplicities, start=1):
            total = sum(a * e for a, e in zip(row, self.sub_dims))
            if total != S.d(i):
                raise InvalidBratteli(f"row {i}: sum a_iu e_u = {total} != d_{i} = {S.d(i)}")
        for u in range(len(self.sub_dims)):
            if not any(row[u] for row in self.multiplicities):
                raise InvalidBratteli(f"component {u + 1} of T is not embedded (unital embedding needs a_iu > 0 somewhere)")

    def offset(self, i: int, u: int) -> int:
        """n_iu = a_i1 e_1 + ... + a_i(u-1) e_(u-1) (1-based i, u)."""
        row = self.multiplicities[i - 1]
        return sum(row[w] * self.sub_dims[w] for w in range(u - 1))

    def embed(self, S: SemiSimpleAlgebra, u: int, v: int, w: int) -> dict[MatrixUnit, Fraction]:
        """Image of the (v, w) matrix unit of the u-th component of T."""
        out = {}
        e_u = self.sub_dims[u - 1]
        for i in range(1, S.k + 1):
            n = self.offset(i, u)
            for h in range(self.multiplicities[i - 1][u - 1]):
                out[S.unit(i, n + h * e_u + v, n + h * e_u + w)] = Fraction(1)
        return out

    def subalgebra_units(self, S: SemiSimpleAlgebra) -> list[dict[MatrixUnit, Fraction]]:
        return [
            self.embed(S, u, v, w)
            for u, e in enumerate(self.sub_dims, start=1)
            for v in range(1, e + 1)
            for w in range(1, e + 1)
        ]

    @classmethod
    def identity(cls, S: SemiSimpleAlgebra) -> "BratteliDiagram":
        return cls(S.dims, tuple(tuple(int(i == j) for j in range(S.k)) for i in range(S.k)))


def relative_multiplicities(S: SemiSimpleAlgebra, B: BratteliDiagram) -> tuple[list[int], list[list[int]]]:
    """r_i = sum_u a_iu^2 - 1 and r_ij = sum_u a_iu a_ju (i != j; diagonal left 0)."""
    B.validate(S)
    a = B.multiplicities
    r = [sum(x * x for x in row) - 1 for row in a]
    r_off = [
        [0 if i == j else sum(x * y for x, y in zip(a[i], a[j])) for j in range(S.k)]
        for i in range(S.k)
    ]
    return r, r_off


def relative_dimension_formula(S: SemiSimpleAlgebra, B: BratteliDiagram) -> int:
    r, r_off = relative_multiplicities(S, B)
    d = S.dims
    return sum(r[i] * d[i] ** 2 for i in range(S.k)) + sum(
        r_off[i][j] * d[i] * d[j] for i in range(S.k) for j in range(S.k) if i != j
    )


def relative_derivation_oracle(S: SemiSimpleAlgebra, B: BratteliDiagram) -> int:
    """dim Der_T(S, S(x)S) by solving d_x(y) = 0 for all matrix units y of T."""
    B.validate(S)
    constraint = _inner_derivation_matrix(S, B.subalgebra_units(S))
    rank_t, _ = rank_and_kernel(constraint)
    rank_d, _ = rank_and_kernel(inner_derivation_matrix(S))
    # dim{x : d_x|_T = 0} - dim Ker D = (n - rank_t) - (n - rank_d)
    return rank_d - rank_t


def derivation_coordinates_solver(S: SemiSimpleAlgebra) -> LinearSolver:
    """Solver for x in S(x)S with d_x = given derivation (value table)."""
    return LinearSolver(inner_derivation_matrix(S))


def derivation_to_vector(S: SemiSimpleAlgebra, theta: ExplicitDoubleDerivation) -> dict[int, Coeff]:
    n = S.dim
    idx = S.unit_index
    vec = {}
    for t, y in enumerate(S.units):
        for (a, b), c in theta.on_unit(y).items():
            vec[(t * n + idx[a]) * n + idx[b]] = c
    return vec


def pair_from_index(S: SemiSimpleAlgebra, col: int) -> tuple[MatrixUnit, MatrixUnit]:
    n = S.dim
    return S.units[col // n], S.units[col % n]


def all_dimension_vectors(max_total: int, max_parts: int) -> Iterable[tuple[int, ...]]:
    """Non-increasing dimension vectors with at most ``max_parts`` parts."""

    def rec(remaining, largest, parts):
        if parts:
            yield tuple(parts)
        if len(parts) == max_parts:
            return
        for d in range(min(largest, remaining), 0, -1):
            yield from rec(remaining - d, d, parts + [d])

    yield from rec(max_total, max_total, [])
