"""Double and trace brackets on the free product C^ns * C^nt.

Letters are ("e", i) for the idempotents of S = C^ns and ("f", k) for those of
T = C^nt.  A double Poisson tensor on each factor is given by coefficients
c_ij (S) and d_kl (T); only cb_ij = c_ij - c_ji and db_kl = d_kl - d_lk enter.

Generator brackets:
  <<e_a, e_b>> = cb_ab (e_a (x) e_b - e_b (x) e_a)      a != b
  <<e_a, e_a>> = e_a (x) ebar_a - ebar_a (x) e_a,  ebar_a = -sum_{s != a} cb_as e_s
and the same for f with db.  Brackets between e and f letters vanish.  The
bracket is a derivation in its second argument for the outer bimodule
structure and in its first for the inner one:
  <<x1 x2, y>> = x1 o <<x2, y>> + <<x1, y>> o x2,   a o (u (x) v) o b = ub (x) av.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exactmath import Coeff, Poly, coeff_to_str, simplify

Letter = tuple[str, int]
Word = tuple[Letter, ...]


class MalformedWord(ValueError):
    pass


class IndexOutOfRange(IndexError):
    pass


class SingularConjugator(ArithmeticError):
    pass


# ----------------------------------------------------------------------
# words


def reduce_word(word: Sequence[Letter]) -> Word | None:
    """Merge neighbouring letters of one factor: e_i e_j = delta_ij e_i."""
    out: list[Letter] = []
    for a in word:
        if out and out[-1][0] == a[0]:
            if out[-1][1] != a[1]:
                return None
            continue
        out.append(a)
    return tuple(out)


def _cyclic_reduce(word: Sequence[Letter]) -> Word | None:
    w = reduce_word(word)
    if w is None:
        return None
    w = list(w)
    while len(w) > 1 and w[0][0] == w[-1][0]:
        if w[0][1] != w[-1][1]:
            return None
        w.pop()
    return tuple(w)


def alternating_word(pairs: Sequence[tuple[int, int]]) -> Word:
    """e_{i1} f_{i1'} ... e_{ip} f_{ip'} from [(i1, i1'), ...]."""
    if not pairs:
        raise MalformedWord("a trace word needs at least one (e, f) pair")
    out: list[Letter] = []
    for i, k in pairs:
        out += [("e", int(i)), ("f", int(k))]
    return tuple(out)


def parse_word(text: str) -> Word:
    """"1:2,3:1" -> e1 f2 e3 f1."""
    pairs = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            i, k = chunk.split(":")
            pairs.append((int(i), int(k)))
        except ValueError:
            raise MalformedWord(f"cannot parse {chunk!r}; expected i:k") from None
    return alternating_word(pairs)


def _check_alternating(word: Word) -> list[tuple[int, int]]:
    if len(word) < 2 or len(word) % 2:
        raise MalformedWord("an alternating word has even length >= 2")
    pairs = []
    for t in range(0, len(word), 2):
        a, b = word[t], word[t + 1]
        if a[0] != "e" or b[0] != "f":
            raise MalformedWord(f"letters must alternate e, f: {word_str(word)}")
        pairs.append((a[1], b[1]))
    return pairs


def word_str(word: Sequence[Letter]) -> str:
    return "*".join(f"{t}{i}" for t, i in word) if word else "1"


def sigma(word: Word, times: int = 1) -> Word:
    """sigma(a*x) = x*a."""
    if not word:
        return word
    s = times % len(word)
    return word[s:] + word[:s]


@dataclass(frozen=True, order=True)
class TraceWord:
    """tr of a cyclic word, stored in its minimal rotation."""

    letters: Word

    @classmethod
    def of(cls, word: Sequence[Letter]) -> "TraceWord | None":
        w = _cyclic_reduce(word)
        if w is None:
            return None
        if len(w) <= 1:
            return cls(w)
        return cls(min(w[s:] + w[:s] for s in range(len(w)) if w[s][0] == "e"))

    @classmethod
    def alternating(cls, pairs: Sequence[tuple[int, int]]) -> "TraceWord":
        return cls.of(alternating_word(pairs))

    def __str__(self) -> str:
        return f"tr({word_str(self.letters)})"


TraceSum = dict[TraceWord, Coeff]


def trace_sum_str(t: Mapping[TraceWord, Coeff]) -> str:
    if not t:
        return "0"
    parts = []
    for w, c in sorted(t.items()):
        text = coeff_to_str(c)
        if isinstance(c, Poly) and len(c.terms) > 1:
            text = f"({text})"
        parts.append(f"{text}*{w}")
    return " + ".join(parts).replace("+ -", "- ")


def _add(acc: dict, key, c: Coeff) -> None:
    v = simplify(acc.get(key, 0) + c)
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


# ----------------------------------------------------------------------
# coefficients


@dataclass(frozen=True)
class Coefficients:
    """c on S = C^ns and d on T = C^nt, as {(i, j): value} (missing = 0)."""

    ns: int
    nt: int
    c: Mapping[tuple[int, int], Coeff]
    d: Mapping[tuple[int, int], Coeff]

    def bar(self, kind: str, a: int, b: int) -> Coeff:
        m = self.c if kind == "e" else self.d
        return simplify(m.get((a, b), 0) - m.get((b, a), 0))

    def size(self, kind: str) -> int:
        return self.ns if kind == "e" else self.nt

    def barred(self, letter: Letter) -> dict[Word, Coeff]:
        """ebar_a = -sum_{s != a} cb_as e_s (fbar likewise)."""
        kind, a = letter
        out: dict[Word, Coeff] = {}
        for s in range(1, self.size(kind) + 1):
            if s != a:
                _add(out, ((kind, s),), -self.bar(kind, a, s))
        return out

    def check_word(self, word: Sequence[Letter]) -> None:
        for kind, i in word:
            if not 1 <= i <= self.size(kind):
                raise IndexOutOfRange(f"{kind}{i} outside 1..{self.size(kind)}")


# ----------------------------------------------------------------------
# double brackets


WordTensor = dict[tuple[Word, Word], Coeff]


def _tensor_add(acc: WordTensor, left: Sequence[Letter], right: Sequence[Letter], c: Coeff) -> None:
    lw, rw = reduce_word(left), reduce_word(right)
    if lw is not None and rw is not None and c:
        _add(acc, (lw, rw), c)


def generator_bracket(a: Letter, b: Letter, co: Coefficients) -> WordTensor:
    out: WordTensor = {}
    if a[0] != b[0]:
        return out
    if a != b:
        cb = co.bar(a[0], a[1], b[1])
        _tensor_add(out, (a,), (b,), cb)
        _tensor_add(out, (b,), (a,), -cb)
        return out
    for (s,), c in co.barred(a).items():
        _tensor_add(out, (a,), (s,), c)
        _tensor_add(out, (s,), (a,), -c)
    return out


def oracle_double_bracket(x: Sequence[Letter], y: Sequence[Letter], co: Coefficients) -> WordTensor:
    """<<x, y>> from the generator brackets by the two derivation rules."""
    co.check_word(x)
    co.check_word(y)
    out: WordTensor = {}
    for s, a in enumerate(x):
        xl, xr = tuple(x[:s]), tuple(x[s + 1 :])
        for k, b in enumerate(y):
            yl, yr = tuple(y[:k]), tuple(y[k + 1 :])
            for (u, v), c in generator_bracket(a, b, co).items():
                # outer action by y, then inner action by x
                _tensor_add(out, yl + u + xr, xl + v + yr, c)
    return out


def amalgamated_double_bracket(x: Word, y: Word, co: Coefficients) -> WordTensor:
    """The four-family closed formula for <<x, y>> on alternating words."""
    X, Y = _check_alternating(x), _check_alternating(y)
    co.check_word(x)
    co.check_word(y)
    out: WordTensor = {}
    for l in range(1, len(X) + 1):
        il, ilp = X[l - 1]
        for k in range(1, len(Y) + 1):
            jk, jkp = Y[k - 1]
            # f-families: f_{j_k'} against f_{i_l'}
            pre, post = y[: 2 * k - 1], y[2 * k :]
            if jkp != ilp:
                mid, coeff = {(("f", jkp),): 1}, co.bar("f", ilp, jkp)
            else:
                mid, coeff = co.barred(("f", jkp)), 1
            for m, c in mid.items():
                c = simplify(coeff * c)
                _tensor_add(out, pre + x[2 * l - 1 :], x[: 2 * l - 1] + m + post, c)
                _tensor_add(out, pre + m + x[2 * l :], x[: 2 * l] + post, -c)
            # e-families: e_{j_k} against e_{i_l}
            pre, post = y[: 2 * k - 2], y[2 * k - 1 :]
            if jk != il:
                mid, coeff = {(("e", jk),): 1}, co.bar("e", il, jk)
            else:
                mid, coeff = co.barred(("e", jk)), 1
            for m, c in mid.items():
                c = simplify(coeff * c)
                _tensor_add(out, pre + x[2 * l - 2 :], x[: 2 * l - 2] + m + post, c)
                _tensor_add(out, pre + m + x[2 * l - 1 :], x[: 2 * l - 1] + post, -c)
    return out


def tensor_str(t: Mapping[tuple[Word, Word], Coeff]) -> str:
    if not t:
        return "0"
    parts = [f"{coeff_to_str(c)}*[{word_str(u)} (x) {word_str(v)}]" for (u, v), c in sorted(t.items())]
    return " + ".join(parts).replace("+ -", "- ")


def tensor_swap(t: Mapping[tuple[Word, Word], Coeff]) -> WordTensor:
    return {(v, u): c for (u, v), c in t.items()}


# ----------------------------------------------------------------------
# the trace bracket


def trace_of_tensor(t: Mapping[tuple[Word, Word], Coeff]) -> TraceSum:
    """{tr x, tr y} = sum_{ij} <<x,y>>'_ij <<x,y>>''_ji = tr(<<x,y>>' <<x,y>>'')."""
    out: TraceSum = {}
    for (u, v), c in t.items():
        w = TraceWord.of(u + v)
        if w is not None:
            _add(out, w, c)
    return out


def _expand(word: Sequence, pos: int, repl: Mapping[Word, Coeff]) -> list[tuple[Word, Coeff]]:
    return [(tuple(word[:pos]) + m + tuple(word[pos + 1 :]), c) for m, c in repl.items()]


def induced_trace_bracket(x: Word, y: Word, co: Coefficients, reading: str = "corrected") -> TraceSum:
    """The sigma-form closed formula for {tr x, tr y}.

    ``reading="corrected"`` pairs tr(sigma^{2l} x * sigma^{2k} y) in the c-family
    with cb_{i_{l+1} j_{k+1}} and the condition j_{k+1} != i_{l+1}, which is
    what regrouping the trace of the double bracket gives.  ``reading="stated"``
    uses cb_{i_{l+1} j_k} with j_k != i_l as printed.
    """
    if reading not in ("corrected", "stated"):
        raise ValueError(f"unknown reading {reading!r}")
    X, Y = _check_alternating(x), _check_alternating(y)
    co.check_word(x)
    co.check_word(y)
    p, q = len(X), len(Y)
    out: TraceSum = {}

    def put(a: Word, b: Word, c: Coeff) -> None:
        w = TraceWord.of(a + b)
        if w is not None and c:
            _add(out, w, c)

    for l in range(1, p + 1):
        il, ilp = X[l - 1]
        x_odd, x_even, x_prev = sigma(x, 2 * l - 1), sigma(x, 2 * l), sigma(x, 2 * (l - 1))
        for k in range(1, q + 1):
            jk, jkp = Y[k - 1]
            y_odd, y_even, y_prev = sigma(y, 2 * k - 1), sigma(y, 2 * k), sigma(y, 2 * (k - 1))
            if jkp != ilp:
                db = co.bar("f", ilp, jkp)
                put(x_odd, y_odd, db)
                put(x_even, y_even, -db)
            else:
                # y_k: f_{j_k'} replaced by fbar
                for yk, c in _expand(y, 2 * k - 1, co.barred(("f", jkp))):
                    put(x_odd, sigma(yk, 2 * k - 1), c)
                    put(x_even, sigma(yk, 2 * k), -c)
            if jk != il:
                put(x_odd, y_odd, -co.bar("e", il, jk))
            else:
                # _k y: e_{j_k} replaced by ebar
                for ky, c in _expand(y, 2 * k - 2, co.barred(("e", jk))):
                    put(x_prev, sigma(ky, 2 * (k - 1)), c)
                    put(x_odd, sigma(ky, 2 * k - 1), -c)
            # second half of the c-family, sigma^{2l}(x) * sigma^{2k}(y)
            if reading == "corrected":
                i_next, j_next = X[l % p][0], Y[k % q][0]
                if j_next != i_next:
                    put(x_even, y_even, co.bar("e", i_next, j_next))
            else:
                i_next = X[l % p][0]
                if jk != il:
                    put(x_even, y_even, co.bar("e", i_next, jk))
    return out


def trace_bracket_via_double(x: Sequence[Letter], y: Sequence[Letter], co: Coefficients) -> TraceSum:
    """{tr x, tr y} for arbitrary words through the generator-level double bracket."""
    return trace_of_tensor(oracle_double_bracket(x, y, co))


def bracket_with_sum(x: Sequence[Letter], t: Mapping[TraceWord, Coeff], co: Coefficients) -> TraceSum:
    out: TraceSum = {}
    for w, c in t.items():
        for w2, c2 in trace_bracket_via_double(x, w.letters, co).items():
            _add(out, w2, c * c2)
    return out


# ----------------------------------------------------------------------
# representations


Matrix = list[list[Fraction]]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    n, m = len(a), len(b[0]) if b else 0
    bt = list(zip(*b))
    return [[sum((a[i][t] * bt[j][t] for t in range(len(b)) if a[i][t]), Fraction(0)) for j in range(m)] for i in range(n)]


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    m = [list(row) + identity(n)[i] for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            raise SingularConjugator("matrix is singular")
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [v * inv for v in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [v - f * w for v, w in zip(m[r], m[col])]
    return [row[n:] for row in m]


def _block_projectors(n: int, dims: Sequence[int]) -> list[Matrix]:
    out, start = [], 0
    for d in dims:
        p = [[Fraction(0)] * n for _ in range(n)]
        for t in range(start, start + d):
            p[t][t] = Fraction(1)
        out.append(p)
        start += d
    return out


@dataclass(frozen=True)
class Representation:
    n: int
    e_blocks: tuple[int, ...]
    e: tuple[tuple[tuple[Fraction, ...], ...], ...]
    f: tuple[tuple[tuple[Fraction, ...], ...], ...]

    @classmethod
    def build(cls, e_blocks: Sequence[int], f: Sequence[Matrix]) -> "Representation":
        n = sum(e_blocks)
        e = _block_projectors(n, e_blocks)
        freeze = lambda m: tuple(tuple(Fraction(v) for v in row) for row in m)  # noqa: E731
        rep = cls(n, tuple(e_blocks), tuple(freeze(m) for m in e), tuple(freeze(m) for m in f))
        rep.validate()
        return rep

    def matrix(self, letter: Letter) -> Matrix:
        kind, i = letter
        mats = self.e if kind == "e" else self.f
        if not 1 <= i <= len(mats):
            raise IndexOutOfRange(f"{kind}{i} outside 1..{len(mats)}")
        return [list(r) for r in mats[i - 1]]

    def validate(self) -> None:
        for mats in (self.e, self.f):
            total = [[Fraction(0)] * self.n for _ in range(self.n)]
            ms = [[list(r) for r in m] for m in mats]
            for a, ma in enumerate(ms):
                for b, mb in enumerate(ms):
                    prod = matmul(ma, mb)
                    want = ma if a == b else [[0] * self.n for _ in range(self.n)]
                    if prod != want:
                        raise ValueError("projectors are not orthogonal idempotents")
                total = [[u + v for u, v in zip(r1, r2)] for r1, r2 in zip(total, ma)]
            if total != identity(self.n):
                raise ValueError("projectors do not sum to the identity")


def random_composition(rng: random.Random, n: int, parts: int) -> list[int]:
    """Block sizes summing to n, all positive when n >= parts."""
    dims = [1 if n >= parts else 0 for _ in range(parts)]
    for _ in range(n - sum(dims)):
        dims[rng.randrange(parts)] += 1
    return dims


def random_representation(n: int, ns: int, nt: int, seed: int, attempts: int = 100) -> Representation:
    """e diagonal block projectors, f = g (diagonal block projectors) g^-1."""
    rng = random.Random(seed)
    e_dims = random_composition(rng, n, ns)
    f_dims = random_composition(rng, n, nt)
    for _ in range(attempts):
        g = [[Fraction(rng.randint(-3, 3)) for _ in range(n)] for _ in range(n)]
        try:
            gi = inverse(g)
        except SingularConjugator:
            continue
        f = [matmul(matmul(g, p), gi) for p in _block_projectors(n, f_dims)]
        return Representation.build(e_dims, f)
    raise SingularConjugator(f"no invertible conjugator after {attempts} draws")


def evaluate_word(word: Sequence[Letter], R: Representation) -> Fraction:
    m = identity(R.n)
    for letter in word:
        m = matmul(m, R.matrix(letter))
    return sum((m[i][i] for i in range(R.n)), Fraction(0))


def evaluate_on_representation(t: Mapping[TraceWord, Coeff], R: Representation) -> Fraction:
    total = Fraction(0)
    for w, c in t.items():
        if isinstance(c, Poly):
            raise TypeError("substitute numeric coefficients before evaluating")
        total += Fraction(c) * evaluate_word(w.letters, R)
    return total


def evaluate_tensor_trace(t: Mapping[tuple[Word, Word], Coeff], R: Representation) -> Fraction:
    """sum_{ij} t'_ij t''_ji evaluated directly on matrices."""
    total = Fraction(0)
    for (u, v), c in t.items():
        a, b = identity(R.n), identity(R.n)
        for letter in u:
            a = matmul(a, R.matrix(letter))
        for letter in v:
            b = matmul(b, R.matrix(letter))
        total += Fraction(c) * sum((a[i][j] * b[j][i] for i in range(R.n) for j in range(R.n)), Fraction(0))
    return total


def random_alternating_word(rng: random.Random, ns: int, nt: int, max_pairs: int = 3) -> Word:
    return alternating_word([(rng.randint(1, ns), rng.randint(1, nt)) for _ in range(rng.randint(1, max_pairs))])


def poisson_coefficients(n: int, rng: random.Random) -> dict[tuple[int, int], Fraction]:
    """c_ij (i < j) with cb_ij = 1/(t_i - t_j) for distinct t, so every joint-vertex relation holds."""
    ts = rng.sample(range(-20, 21), n)
    return {(i, j): Fraction(1, ts[i - 1] - ts[j - 1]) for i in range(1, n + 1) for j in range(i + 1, n + 1)}
