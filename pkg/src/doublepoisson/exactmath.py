"""Exact coefficients and exact linear algebra.

Coefficients are either :class:`fractions.Fraction` (or plain ``int``) or
:class:`Poly`, a multivariate polynomial with rational coefficients.  All the
other modules only rely on ``+``, ``-``, ``*`` and truthiness (zero test), so
numbers and polynomials can be mixed freely.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
import re
from math import gcd
from typing import Iterable, Mapping, Sequence, Union

Rational = Fraction

# Global variable registry: names are identified globally and get an index the
# first time they are seen.  The index drives the term order.
_VARIABLES: list[str] = []
_VAR_INDEX: dict[str, int] = {}


def _var_index(name: str) -> int:
    idx = _VAR_INDEX.get(name)
    if idx is None:
        idx = len(_VARIABLES)
        _VARIABLES.append(name)
        _VAR_INDEX[name] = idx
    return idx


def variables() -> tuple[str, ...]:
    return tuple(_VARIABLES)


Monomial = tuple  # tuple of (variable name, exponent) sorted by variable index


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for name, e in b:
        exps[name] = exps.get(name, 0) + e
    return tuple(sorted(exps.items(), key=lambda t: _var_index(t[0])))


def _grlex_key(m: Monomial) -> tuple:
    # graded lexicographic: total degree first, then exponent vector
    vec = [0] * len(_VARIABLES)
    for name, e in m:
        vec[_var_index(name)] = e
    return (sum(e for _, e in m), tuple(vec))


class Poly:
    """Immutable multivariate polynomial over the rationals."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, object] | None = None):
        clean: dict[Monomial, Fraction] = {}
        if terms:
            for mono, c in terms.items():
                c = Fraction(c)
                if c:
                    for name, _ in mono:
                        _var_index(name)
                    clean[mono] = c
        self._terms = clean
        self._hash = None

    # construction -----------------------------------------------------
    @classmethod
    def var(cls, name: str) -> "Poly":
        _var_index(name)
        return cls({((name, 1),): 1})

    @classmethod
    def const(cls, c) -> "Poly":
        return cls({(): c})

    @staticmethod
    def coerce(x) -> "Poly":
        if isinstance(x, Poly):
            return x
        return Poly.const(x)

    # inspection -------------------------------------------------------
    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self._terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def variables(self) -> tuple[str, ...]:
        names = {n for mono in self._terms for n, _ in mono}
        return tuple(sorted(names, key=_var_index))

    def is_constant(self) -> bool:
        return all(not mono for mono in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms.get((), Fraction(0))

    def degree(self) -> int:
        return max((sum(e for _, e in m) for m in self._terms), default=0)

    # arithmetic -------------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self._terms)

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self._terms.items()})

    def __add__(self, other) -> "Poly":
        if not isinstance(other, (Poly, int, Fraction)):
            return NotImplemented
        other = Poly.coerce(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(out)

    __radd__ = __add__

    def __sub__(self, other) -> "Poly":
        if not isinstance(other, (Poly, int, Fraction)):
            return NotImplemented
        return self + (-Poly.coerce(other))

    def __rsub__(self, other) -> "Poly":
        return Poly.coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return Poly({m: c * other for m, c in self._terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        out = Poly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __truediv__(self, other) -> "Poly":
        if isinstance(other, Poly):
            other = other.constant_value()
        return self * (Fraction(1) / Fraction(other))

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # substitution -----------------------------------------------------
    def evaluate(self, assignment: Mapping[str, object]):
        """Substitute values (numbers or polynomials) for variables.

        Returns a Fraction when the result is constant, a Poly otherwise.
        """
        out = Poly()
        for mono, c in self._terms.items():
            term = Poly.const(c)
            for name, e in mono:
                if name in assignment:
                    term = term * (Poly.coerce(assignment[name]) ** e)
                else:
                    term = term * Poly({((name, e),): 1})
            out = out + term
        return simplify(out)

    def __repr__(self) -> str:
        return f"Poly({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for mono, c in self.sorted_terms():
            body = "*".join(n if e == 1 else f"{n}^{e}" for n, e in mono)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append(f"{c}*{body}")
        return " + ".join(parts).replace("+ -", "- ")


Coeff = Union[int, Fraction, Poly]


def simplify(c: Coeff) -> Coeff:
    """Collapse constant polynomials to Fractions."""
    if isinstance(c, Poly) and c.is_constant():
        return c.constant_value()
    if isinstance(c, int) and not isinstance(c, bool):
        return Fraction(c)
    return c


def parse_coefficient(text: str) -> Coeff:
    """Parse ``"3"``, ``"-1/2"``, ``"a12"`` or a printed polynomial like ``"2*a12^2 - a13 + 1"``."""
    text = text.strip()
    try:
        return Fraction(text)
    except ValueError:
        pass
    if not text:
        raise ValueError("cannot parse empty coefficient")
    total: Coeff = Fraction(0)
    for sign, term in _split_terms(text):
        value: Coeff = Fraction(sign)
        for factor in term.split("*"):
            factor = factor.strip()
            name, _, exp = factor.partition("^")
            try:
                value = value * Fraction(factor)
                continue
            except ValueError:
                pass
            if not name.isidentifier() or (exp and not exp.isdigit()):
                raise ValueError(f"cannot parse coefficient {text!r}")
            value = value * Poly.var(name) ** (int(exp) if exp else 1)
        total = total + value
    return simplify(total)


def _split_terms(text: str) -> list[tuple[int, str]]:
    out, sign, start = [], 1, 0
    text = re.sub(r"\s*([+\-*/^])\s*", r"\1", text)
    if any(ch.isspace() for ch in text):
        raise ValueError(f"cannot parse coefficient {text!r}")
    if text.startswith("-"):
        sign, start = -1, 1
    for k in range(start, len(text) + 1):
        if k == len(text) or (text[k] in "+-" and k > start and text[k - 1] not in "*/^"):
            term = text[start:k]
            if not term:
                raise ValueError(f"cannot parse coefficient {text!r}")
            out.append((sign, term))
            if k < len(text):
                sign, start = (1 if text[k] == "+" else -1), k + 1
    return out


def poly_arith(a: Coeff, b: Coeff, op: str) -> Poly:
    a, b = Poly.coerce(a), Poly.coerce(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def coeff_to_str(c: Coeff) -> str:
    if isinstance(c, Poly):
        return str(c)
    return str(Fraction(c))


# ----------------------------------------------------------------------
# Linear algebra


class PolynomialEntries(ValueError):
    pass


class Inconsistent(ValueError):
    pass


@dataclass(frozen=True)
class ExactMatrix:
    """Sparse rows x cols matrix with exact entries."""

    rows: int
    cols: int
    entries: Mapping[tuple[int, int], Coeff] = field(default_factory=dict)

    def __post_init__(self):
        for (r, c) in self.entries:
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise IndexError(f"entry ({r},{c}) outside {self.rows}x{self.cols}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Coeff]], cols: int | None = None) -> "ExactMatrix":
        ncols = cols if cols is not None else (len(rows[0]) if rows else 0)
        ent = {(i, j): v for i, row in enumerate(rows) for j, v in enumerate(row) if v}
        return cls(len(rows), ncols, ent)

    @classmethod
    def from_columns(cls, columns: Sequence[Mapping[int, Coeff]], rows: int) -> "ExactMatrix":
        ent = {}
        for j, col in enumerate(columns):
            for i, v in col.items():
                if v:
                    ent[(i, j)] = v
        return cls(rows, len(columns), ent)

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})

    def to_rows(self) -> list[list[Coeff]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def apply(self, vec: Mapping[int, Coeff] | Sequence[Coeff]) -> dict[int, Coeff]:
        if not isinstance(vec, Mapping):
            vec = {i: v for i, v in enumerate(vec) if v}
        out: dict[int, Coeff] = {}
        for (r, c), v in self.entries.items():
            x = vec.get(c)
            if x:
                out[r] = out.get(r, 0) + v * x
        return {r: v for r, v in out.items() if v}

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        by_row: dict[int, dict[int, Coeff]] = {}
        for (r, c), v in other.entries.items():
            by_row.setdefault(r, {})[c] = v
        out: dict[tuple[int, int], Coeff] = {}
        for (r, k), v in self.entries.items():
            for c, w in by_row.get(k, {}).items():
                out[(r, c)] = out.get((r, c), 0) + v * w
        return ExactMatrix(self.rows, other.cols, {k: v for k, v in out.items() if v})

    def is_zero(self) -> bool:
        return not any(self.entries.values())


def _as_rational(v) -> Fraction:
    if isinstance(v, Poly):
        if not v.is_constant():
            raise PolynomialEntries(f"non-constant entry {v}")
        return v.constant_value()
    return Fraction(v)


def _primitive_int_row(row: Mapping[int, Fraction]) -> dict[int, int]:
    """Scale a rational row to a primitive integer row (content 1)."""
    den = 1
    for v in row.values():
        den = den * v.denominator // gcd(den, v.denominator)
    ints = {c: int(v * den) for c, v in row.items() if v}
    g = 0
    for v in ints.values():
        g = gcd(g, v)
    if g > 1:
        ints = {c: v // g for c, v in ints.items()}
    return ints


class _Echelon:
    """Fraction-free reduced echelon form built row by row.

    Rows are kept as primitive integer vectors; eliminating ``row`` against a
    pivot row computes ``p*row - c*pivot`` (no division) followed by removal
    of the content, which keeps the entries bounded.
    """

    def __init__(self):
        self.pivots: dict[int, dict[int, int]] = {}  # pivot column -> row
        self.col_users: dict[int, set[int]] = {}  # column -> pivot columns whose row uses it

    def _eliminate(self, row: dict[int, int], col: int, piv: dict[int, int]) -> dict[int, int]:
        c = row[col]
        p = piv[col]
        g = gcd(p, c)
        a, b = p // g, c // g
        out = {k: a * v for k, v in row.items()}
        for k, v in piv.items():
            out[k] = out.get(k, 0) - b * v
        out = {k: v for k, v in out.items() if v}
        h = 0
        for v in out.values():
            h = gcd(h, v)
            if h == 1:
                break
        if h > 1:
            out = {k: v // h for k, v in out.items()}
        return out

    def reduce(self, row: dict[int, int]) -> dict[int, int]:
        changed = True
        while changed:
            changed = False
            for col in [c for c in row if c in self.pivots]:
                if col in row:
                    row = self._eliminate(row, col, self.pivots[col])
                    changed = True
        return row

    def add(self, row: Mapping[int, Fraction]) -> bool:
        ints = self.reduce(_primitive_int_row(row))
        if not ints:
            return False
        col = min(ints, key=lambda c: (abs(ints[c]) != 1, len(self.col_users.get(c, ())), c))
        if ints[col] < 0:
            ints = {k: -v for k, v in ints.items()}
        # back-substitute into existing pivot rows to keep the form reduced
        for other in list(self.col_users.get(col, ())):
            prow = self.pivots[other]
            if col in prow:
                self._set(other, self._eliminate(prow, col, ints))
        self._set(col, ints)
        return True

    def _set(self, pcol: int, row: dict[int, int]) -> None:
        old = self.pivots.get(pcol)
        if old is not None:
            for k in old:
                users = self.col_users.get(k)
                if users is not None:
                    users.discard(pcol)
        if row[pcol] < 0:
            row = {k: -v for k, v in row.items()}
        self.pivots[pcol] = row
        for k in row:
            self.col_users.setdefault(k, set()).add(pcol)

    @property
    def rank(self) -> int:
        return len(self.pivots)


def _components(m: ExactMatrix) -> list[tuple[list[int], list[int]]]:
    """Split the columns/rows into independent blocks (union-find on columns)."""
    parent = list(range(m.cols))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    rows: dict[int, list[int]] = {}
    for (r, c), v in m.entries.items():
        if v:
            rows.setdefault(r, []).append(c)
    for cols in rows.values():
        root = find(cols[0])
        for c in cols[1:]:
            rc = find(c)
            if rc != root:
                parent[rc] = root
    col_groups: dict[int, list[int]] = {}
    for c in range(m.cols):
        col_groups.setdefault(find(c), []).append(c)
    row_groups: dict[int, list[int]] = {}
    for r, cols in rows.items():
        row_groups.setdefault(find(cols[0]), []).append(r)
    return [(sorted(row_groups.get(root, [])), cols) for root, cols in col_groups.items()]


def _row_dicts(m: ExactMatrix) -> dict[int, dict[int, Fraction]]:
    rows: dict[int, dict[int, Fraction]] = {}
    for (r, c), v in m.entries.items():
        q = _as_rational(v)
        if q:
            rows.setdefault(r, {})[c] = q
    return rows


def echelon(m: ExactMatrix) -> _Echelon:
    ech = _Echelon()
    for r in sorted(_row_dicts(m).items()):
        ech.add(r[1])
    return ech


def rank_and_kernel(m: ExactMatrix) -> tuple[int, list[dict[int, Fraction]]]:
    """Rank of ``m`` and a basis of its right kernel (sparse vectors).

    Raises :class:`PolynomialEntries` if some entry is a non-constant Poly.
    """
    rows = _row_dicts(m)
    rank = 0
    kernel: list[dict[int, Fraction]] = []
    for row_ids, cols in _components(m):
        ech = _Echelon()
        for r in row_ids:
            ech.add(rows[r])
        rank += ech.rank
        for free in cols:
            if free in ech.pivots:
                continue
            vec = {free: Fraction(1)}
            for pcol, prow in ech.pivots.items():
                if free in prow:
                    vec[pcol] = Fraction(-prow[free], prow[pcol])
            kernel.append(vec)
    kernel.sort(key=lambda v: min(v))
    return rank, kernel


def rank(m: ExactMatrix) -> int:
    return rank_and_kernel(m)[0]


def row_reduce_rank(m: ExactMatrix) -> int:
    """Rank by plain Gauss-Jordan elimination over Fractions (no blocking)."""
    rows = [dict(r) for r in _row_dicts(m).values()]
    rank_ = 0
    used: set[int] = set()
    while rows:
        row = rows.pop()
        if not row:
            continue
        col = min(row)
        piv = row[col]
        rank_ += 1
        used.add(col)
        new_rows = []
        for other in rows:
            f = other.get(col)
            if f:
                other = dict(other)
                for k, v in row.items():
                    nv = other.get(k, 0) - f * v / piv
                    if nv:
                        other[k] = nv
                    else:
                        other.pop(k, None)
            new_rows.append(other)
        rows = [r for r in new_rows if r]
    return rank_


class LinearSolver:
    """Solve ``m x = b`` for many right-hand sides with one elimination.

    Each echelon row carries the combination of original rows it came from,
    so a right-hand side is processed by a dot product per pivot.
    """

    def __init__(self, m: ExactMatrix):
        self.cols = m.cols
        rows = _row_dicts(m)
        pivots: dict[int, tuple[dict[int, Fraction], dict[int, Fraction]]] = {}
        self._conditions: list[dict[int, Fraction]] = []
        for r, row in sorted(rows.items()):
            row = dict(row)
            comb = {r: Fraction(1)}
            for pcol, (prow, pcomb) in pivots.items():
                f = row.get(pcol)
                if f:
                    for k, v in prow.items():
                        nv = row.get(k, 0) - f * v
                        if nv:
                            row[k] = nv
                        else:
                            row.pop(k, None)
                    for k, v in pcomb.items():
                        nv = comb.get(k, 0) - f * v
                        if nv:
                            comb[k] = nv
                        else:
                            comb.pop(k, None)
            if not row:
                self._conditions.append(comb)
                continue
            col = min(row)
            piv = row[col]
            row = {k: v / piv for k, v in row.items()}
            comb = {k: v / piv for k, v in comb.items()}
            for pcol in list(pivots):
                prow, pcomb = pivots[pcol]
                f = prow.get(col)
                if f:
                    prow = dict(prow)
                    pcomb = dict(pcomb)
                    for k, v in row.items():
                        nv = prow.get(k, 0) - f * v
                        if nv:
                            prow[k] = nv
                        else:
                            prow.pop(k, None)
                    for k, v in comb.items():
                        nv = pcomb.get(k, 0) - f * v
                        if nv:
                            pcomb[k] = nv
                        else:
                            pcomb.pop(k, None)
                    pivots[pcol] = (prow, pcomb)
            pivots[col] = (row, comb)
        self._pivots = pivots

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def solve(self, rhs: Mapping[int, Coeff]) -> dict[int, Fraction]:
        """Return one solution x (free variables set to 0).

        Raises :class:`Inconsistent` if there is none.
        """
        b = {r: _as_rational(v) for r, v in rhs.items() if v}
        for cond in self._conditions:
            if sum(c * b.get(r, 0) for r, c in cond.items()):
                raise Inconsistent("system has no solution")
        x: dict[int, Fraction] = {}
        for pcol, (_, comb) in self._pivots.items():
            val = sum(c * b.get(r, 0) for r, c in comb.items())
            if val:
                x[pcol] = Fraction(val)
        return x


def solve(m: ExactMatrix, rhs: Mapping[int, Coeff]) -> dict[int, Fraction]:
    return LinearSolver(m).solve(rhs)


def vector_is_zero(vec: Iterable[Coeff]) -> bool:
    return not any(vec)
