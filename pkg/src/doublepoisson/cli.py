"""Command-line front end.

Exit codes: 0 success, 1 mathematical failure (a check fails or the requested
object does not exist), 2 usage error.
"""

from __future__ import annotations

import json
import random
import sys
from fractions import Fraction

import click

from . import cohomology, freeproduct, tensors
from .algebra import BratteliDiagram, InvalidBratteli, SemiSimpleAlgebra, relative_dimension_formula
from .exactmath import Poly, coeff_to_str, parse_coefficient
from .necklace import GradedElement, NonComposable, necklace_bracket, parse_necklace_word
from .quiver import Arrow, Quiver, build_quiver, build_relative_quiver
from .schouten import (
    DimensionTooLarge,
    format_tensor,
    schouten_generators,
    schouten_oracle,
)


class MathFailure(click.ClickException):
    exit_code = 1


def _emit(obj, as_json: bool, text: str) -> None:
    if as_json:
        click.echo(json.dumps(obj, sort_keys=True, indent=2))
    else:
        click.echo(text)


def _dims(text: str) -> SemiSimpleAlgebra:
    try:
        dims = tuple(int(t) for t in text.split(",") if t.strip())
        return SemiSimpleAlgebra(dims)
    except ValueError as exc:
        raise click.BadParameter(f"{text!r}: expected positive integers like 2,1,1 ({exc})") from None


def _pairs(items: tuple[str, ...]) -> dict[tuple[int, int], object]:
    """Parse "i,j:value" items (also accepted ';'-separated inside one item)."""
    out = {}
    for item in items:
        for chunk in item.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            try:
                key, value = chunk.split(":")
                i, j = (int(t) for t in key.split(","))
                out[(i, j)] = parse_coefficient(value)
            except ValueError:
                raise click.BadParameter(f"{chunk!r}: expected i,j:value with value a rational or a name") from None
    return out


def _element(text: str) -> GradedElement:
    """"c*(1)-[p,q]->(2)... + ..." or a vertex symbol "(i)"."""
    out = GradedElement()
    for term in text.split("+"):
        term = term.strip()
        if not term:
            continue
        coeff, _, body = term.rpartition("*")
        c = parse_coefficient(coeff) if coeff else 1
        try:
            word = parse_necklace_word(body)
            if word:
                out = out + GradedElement.necklace(word, c)
            else:
                out = out + GradedElement.vertex(int(body.strip()[1:-1]), c)
        except (ValueError, NonComposable) as exc:
            raise click.BadParameter(f"{term!r}: {exc}") from None
    return out


def _tensor(terms: tuple[str, ...]) -> tensors.DoubleTensor:
    acc = {}
    for item in terms:
        for term in item.split("+"):
            term = term.strip()
            if not term:
                continue
            coeff, _, body = term.rpartition("*")
            try:
                word = parse_necklace_word(body)
                if len(word) != 2:
                    raise ValueError("a degree-2 monomial has two arrows")
                m = (word[0], word[1])
                acc[m] = acc.get(m, 0) + (parse_coefficient(coeff) if coeff else 1)
                tensors.check_cycle(m)
            except ValueError as exc:
                raise click.BadParameter(f"{term!r}: {exc}") from None
    return tensors.DoubleTensor(acc)


def _arrow(text: str) -> Arrow:
    try:
        word = parse_necklace_word(text)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from None
    if len(word) != 1:
        raise click.BadParameter(f"{text!r}: expected a single arrow like (2)-[1,1]->(1)")
    return word[0]


def _check_arrow(S: SemiSimpleAlgebra, a: Arrow) -> None:
    if a not in build_quiver(S).arrows:
        raise click.BadParameter(f"{a} is not an arrow of the quiver of {S.dims}")


@click.group()
def main() -> None:
    """Double Poisson structures on finite dimensional semi-simple algebras."""


# ----------------------------------------------------------------------


@main.command()
@click.option("--dims", required=True, help="block sizes, e.g. 2,1")
@click.option("--json", "as_json", is_flag=True)
def quiver(dims: str, as_json: bool) -> None:
    """The double derivation quiver Q_S."""
    Q = build_quiver(_dims(dims))
    _quiver_out(Q, as_json)


def _quiver_out(Q: Quiver, as_json: bool) -> None:
    lines = [f"vertices: {Q.vertex_count}", f"arrows: {len(Q)}"] + [f"  {a}  {a.label()}" for a in Q.arrows]
    _emit(Q.to_dict(), as_json, "\n".join(lines))


@main.command("relative-quiver")
@click.option("--dims", required=True, help="block sizes of S")
@click.option("--sub", required=True, help="block sizes of T")
@click.option("--mult", required=True, help="Bratteli grid, rows separated by ';', e.g. '1,1;1,1'")
@click.option("--json", "as_json", is_flag=True)
def relative_quiver(dims: str, sub: str, mult: str, as_json: bool) -> None:
    """The T-relative double derivation quiver."""
    S = _dims(dims)
    try:
        B = BratteliDiagram(
            tuple(int(t) for t in sub.split(",")),
            tuple(tuple(int(t) for t in row.split(",")) for row in mult.split(";")),
        )
        Q = build_relative_quiver(S, B)
    except (ValueError, InvalidBratteli) as exc:
        raise click.UsageError(str(exc)) from None
    if as_json:
        data = Q.to_dict()
        data["dimension"] = relative_dimension_formula(S, B)
        _emit(data, True, "")
    else:
        _quiver_out(Q, False)
        click.echo(f"dimension: {relative_dimension_formula(S, B)}")


@main.command()
@click.option("--dims", required=True)
@click.option("--a", "a_text", required=True, help="first arrow, e.g. '(2)-[1,1]->(1)'")
@click.option("--b", "b_text", required=True, help="second arrow")
@click.option("--oracle", is_flag=True, help="compute from the definition instead of the table")
@click.option("--json", "as_json", is_flag=True)
def bracket(dims: str, a_text: str, b_text: str, oracle: bool, as_json: bool) -> None:
    """Double Schouten bracket {{a, b}} of two generators."""
    S = _dims(dims)
    a, b = _arrow(a_text), _arrow(b_text)
    _check_arrow(S, a)
    _check_arrow(S, b)
    try:
        value = schouten_oracle(S, a, b) if oracle else schouten_generators(S, a, b)
    except DimensionTooLarge as exc:
        raise click.UsageError(str(exc)) from None
    items = sorted(value.items(), key=lambda kv: (str(kv[0][0]), str(kv[0][1])))
    data = [{"coeff": coeff_to_str(c), "left": str(x), "right": str(y)} for (x, y), c in items]
    _emit(data, as_json, format_tensor(value))


@main.command("necklace-bracket")
@click.option("--dims", required=True)
@click.option("--u", "u_text", required=True, help="e.g. '(1)-[1,1]->(2)-[1,1]->(1)' or '2*... + ...'")
@click.option("--v", "v_text", required=True)
@click.option("--json", "as_json", is_flag=True)
def necklace_bracket_cmd(dims: str, u_text: str, v_text: str, as_json: bool) -> None:
    """The Lie bracket {u, v} on necklaces."""
    S = _dims(dims)
    result = necklace_bracket(_element(u_text), _element(v_text), S)
    _emit(result.to_list(), as_json, str(result))


def _cn_or_terms(S: SemiSimpleAlgebra, c: tuple[str, ...], term: tuple[str, ...], symbolic: bool) -> tensors.DoubleTensor:
    if symbolic:
        if any(d != 1 for d in S.dims):
            raise click.UsageError("--symbolic needs S = C^n (all block sizes 1)")
        return tensors.symbolic_cn_tensor(S.k)
    if c:
        if any(d != 1 for d in S.dims):
            raise click.UsageError("--c needs S = C^n; use --term for other algebras")
        try:
            return tensors.cn_tensor(S.k, _pairs(c))
        except ValueError as exc:
            raise click.BadParameter(str(exc)) from None
    return _tensor(term)


def _relations(obstruction: GradedElement) -> list[Poly]:
    """Distinct coefficients of the obstruction, made primitive with positive leading term."""
    seen = {}
    for _, c in obstruction.items():
        p = Poly.coerce(c)
        terms = p.sorted_terms()
        lead = terms[0][1]
        p = p / lead
        seen[str(p)] = p
    return [seen[k] for k in sorted(seen)]


@main.command("check-tensor")
@click.option("--dims", required=True)
@click.option("--c", multiple=True, help="over C^n: 'i,j:value' pairs for P = sum c_ij d_ij d_ji")
@click.option("--term", multiple=True, help="'coeff*(i)-[p,q]->(j)-[r,s]->(i)' monomials")
@click.option("--symbolic", is_flag=True, help="over C^n with symbolic a_ij")
@click.option("--json", "as_json", is_flag=True)
def check_tensor(dims: str, c: tuple[str, ...], term: tuple[str, ...], symbolic: bool, as_json: bool) -> None:
    """Compute {P, P} modulo supercommutators."""
    S = _dims(dims)
    P = _cn_or_terms(S, c, term, symbolic)
    res = tensors.check_tensor(P, S)
    rels = [str(r) for r in _relations(res.obstruction)]
    data = {"tensor": P.to_list(), "poisson": res.poisson, "obstruction": res.obstruction.to_list(), "relations": rels}
    lines = [f"P = {P}", f"poisson: {str(res.poisson).lower()}", f"{{P,P}} = {res.obstruction}"]
    lines += [f"relation: {r} = 0" for r in rels]
    _emit(data, as_json, "\n".join(lines))


@main.command("enumerate-tensors")
@click.option("--dims", required=True)
@click.option("--max-total", default=5, show_default=True)
@click.option("--all", "show_all", is_flag=True, help="list every 2-cycle monomial, not only the accepted ones")
@click.option("--json", "as_json", is_flag=True)
def enumerate_tensors(dims: str, max_total: int, show_all: bool, as_json: bool) -> None:
    """2-cycle monomials with the lemma test and both brute-force certificates."""
    S = _dims(dims)
    if sum(S.dims) > max_total:
        raise click.UsageError(f"sum of block sizes exceeds --max-total {max_total}")
    reports = tensors.classify_monomials(S) if show_all else tensors.enumerate_poisson_monomials(S, max_total)
    lines = [
        f"{r.label()}  lemma={int(r.lemma)} bracket={int(r.bracket)} jacobi={int(r.jacobi)} nontrivial={int(r.nontrivial)}"
        for r in reports
    ]
    _emit([r.to_dict() for r in reports], as_json, "\n".join(lines) if lines else "(none)")


@main.command("moment-map")
@click.option("--dims", required=True, help="1,1,...,1")
@click.option("--c", multiple=True, required=True, help="'i,j:value' pairs, i < j")
@click.option("--json", "as_json", is_flag=True)
def moment_map(dims: str, c: tuple[str, ...], as_json: bool) -> None:
    """Moment map mu with {P, mu} = -E (normalized mu_1 = 0)."""
    S = _dims(dims)
    if any(d != 1 for d in S.dims):
        raise click.UsageError("moment maps are computed for S = C^n")
    try:
        P = tensors.cn_tensor(S.k, _pairs(c))
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from None
    try:
        mu = tensors.moment_map(P, S.k)
    except tensors.SymbolicCoefficients as exc:
        raise click.UsageError(str(exc)) from None
    except (tensors.NoMomentMap, tensors.NotPoisson) as exc:
        raise MathFailure(f"{type(exc).__name__}: {exc}") from None
    _emit({"mu": mu.to_dict()}, as_json, f"mu = {mu}")


@main.command("cohomology")
@click.option("--dims", required=True)
@click.option("--c", multiple=True)
@click.option("--term", multiple=True)
@click.option("--max-degree", default=2, show_default=True, help="cohomology is reported in degrees below this")
@click.option("--json", "as_json", is_flag=True)
def cohomology_cmd(dims: str, c: tuple[str, ...], term: tuple[str, ...], max_degree: int, as_json: bool) -> None:
    """Betti numbers of d_P = {P, -} on necklaces."""
    S = _dims(dims)
    P = _cn_or_terms(S, c, term, False)
    try:
        cx = cohomology.build_complex(P, S, max_degree)
    except tensors.NotPoisson as exc:
        raise MathFailure(f"NotPoisson: {exc}") from None
    except cohomology.BasisTooLarge as exc:
        raise click.UsageError(str(exc)) from None
    table = cx.table()
    data = {"betti": {str(i): b for i, b in table.items()}, "basis_sizes": {str(i): len(b) for i, b in cx.bases.items()}}
    lines = [f"H^{i} = {b}" for i, b in table.items()]
    try:
        gens = cohomology.h1_generators(P, S)
        data["h1_generators"] = [str(g) for g in gens]
        lines += ["H^1 generators:"] + [f"  {g}" for g in gens]
    except cohomology.UnsupportedTensorShape:
        pass
    _emit(data, as_json, "\n".join(lines))


@main.command("free-product-bracket")
@click.option("--p", "ns", type=int, required=True, help="number of idempotents of S")
@click.option("--q", "nt", type=int, required=True, help="number of idempotents of T")
@click.option("--x", "x_text", required=True, help="trace word as i:k pairs, e.g. '1:1,2:2'")
@click.option("--y", "y_text", required=True)
@click.option("--c", multiple=True, help="'i,j:value' coefficients on S")
@click.option("--d", multiple=True, help="'k,l:value' coefficients on T")
@click.option("--eval", "eval_spec", default=None, help="'n,seed': evaluate on a random n-dimensional representation")
@click.option("--json", "as_json", is_flag=True)
def free_product_bracket(ns, nt, x_text, y_text, c, d, eval_spec, as_json) -> None:
    """{tr x, tr y} on the free product C^p * C^q."""
    try:
        x, y = freeproduct.parse_word(x_text), freeproduct.parse_word(y_text)
        co = freeproduct.Coefficients(ns, nt, _pairs(c), _pairs(d))
        double = freeproduct.amalgamated_double_bracket(x, y, co)
        trace = freeproduct.induced_trace_bracket(x, y, co)
    except (freeproduct.MalformedWord, freeproduct.IndexOutOfRange) as exc:
        raise click.UsageError(str(exc)) from None
    data = {
        "double_bracket": [
            {"coeff": coeff_to_str(v), "left": freeproduct.word_str(u), "right": freeproduct.word_str(w)}
            for (u, w), v in sorted(double.items())
        ],
        "trace_bracket": [{"coeff": coeff_to_str(v), "word": str(w)} for w, v in sorted(trace.items())],
    }
    lines = [f"<<x,y>> = {freeproduct.tensor_str(double)}", f"{{tr x, tr y}} = {freeproduct.trace_sum_str(trace)}"]
    if eval_spec:
        try:
            n, seed = (int(t) for t in eval_spec.split(","))
            R = freeproduct.random_representation(n, ns, nt, seed)
            value = freeproduct.evaluate_on_representation(trace, R)
            direct = freeproduct.evaluate_tensor_trace(double, R)
        except TypeError:
            raise click.UsageError("evaluation needs numeric coefficients") from None
        except ValueError:
            raise click.BadParameter(f"{eval_spec!r}: expected n,seed") from None
        data["evaluation"] = {"n": n, "seed": seed, "formula": str(value), "via_double_bracket": str(direct)}
        lines.append(f"evaluated (n={n}, seed={seed}): {value}  via double bracket: {direct}")
        if value != direct:
            _emit(data, as_json, "\n".join(lines))
            raise MathFailure("the two evaluation routes disagree")
    _emit(data, as_json, "\n".join(lines))


# ----------------------------------------------------------------------


def _verify_checks(seed: int) -> list[tuple[str, bool, str]]:
    rng = random.Random(seed)
    out: list[tuple[str, bool, str]] = []

    for dims in [(1, 1), (2,), (2, 1)]:
        S = SemiSimpleAlgebra(dims)
        arrows = build_quiver(S).arrows
        bad = [(a, b) for a in arrows for b in arrows if schouten_generators(S, a, b) != schouten_oracle(S, a, b)]
        out.append((f"schouten table = definition on {dims}", not bad, f"{len(bad)} mismatches"))

    for dims in [(1, 1), (2,), (2, 1), (2, 2)]:
        S = SemiSimpleAlgebra(dims)
        reps = tensors.classify_monomials(S)
        brute = sum(r.bracket != r.jacobi for r in reps)
        lemma = sum(r.lemma != r.bracket for r in reps)
        out.append((f"{{P,P}} = 0 <=> double Jacobi on {dims}", brute == 0, f"{brute} of {len(reps)} disagree"))
        out.append((f"lemma conditions = brute force on {dims}", lemma == 0, f"{lemma} of {len(reps)} disagree"))

    S = SemiSimpleAlgebra((1, 1, 1))
    res = tensors.check_tensor(tensors.symbolic_cn_tensor(3), S)
    rel = tensors.joint_vertex_relations(3)[0]
    rel = rel / rel.sorted_terms()[0][1]
    ok = [str(r) for r in _relations(res.obstruction)] == [str(rel)]
    out.append(("joint-vertex relation over C^3", ok, str(res.obstruction)))

    for n in (2, 3, 4):
        coeffs = freeproduct.poisson_coefficients(n, rng)
        P = tensors.cn_tensor(n, coeffs)
        mu = tensors.moment_map(P, n)
        out.append((f"moment map over C^{n}", tensors.verify_moment_map(P, mu, n), f"mu = {mu}"))

    P = tensors.cn_tensor(2, {(1, 2): 1})
    cx = cohomology.build_complex(P, SemiSimpleAlgebra((1, 1)), 5)
    table = cx.table()
    out.append(("d_P o d_P = 0 over C+C", cx.square_is_zero, ""))
    out.append(("H^1..H^4 over C+C = 0,1,0,1", [table[i] for i in range(1, 5)] == [0, 1, 0, 1], str(table)))
    out.append(("H^0 = 0 over C+C", table[0] == 0, f"H^0 = {table[0]}"))

    agree = stated = zero = zero_total = 0
    samples = 40
    for _ in range(samples):
        ns, nt = rng.randint(2, 3), rng.randint(2, 3)
        co = freeproduct.Coefficients(ns, nt, freeproduct.poisson_coefficients(ns, rng), freeproduct.poisson_coefficients(nt, rng))
        x = freeproduct.random_alternating_word(rng, ns, nt)
        y = freeproduct.random_alternating_word(rng, ns, nt)
        R = freeproduct.random_representation(rng.randint(2, 4), ns, nt, rng.randrange(10**6))
        double = freeproduct.amalgamated_double_bracket(x, y, co)
        direct = freeproduct.evaluate_tensor_trace(double, R)
        same = double == freeproduct.oracle_double_bracket(x, y, co)
        agree += same and freeproduct.evaluate_on_representation(freeproduct.induced_trace_bracket(x, y, co), R) == direct
        stated += freeproduct.evaluate_on_representation(freeproduct.induced_trace_bracket(x, y, co, "stated"), R) == direct
        if ns == 2:
            zero_total += 1
            zero += direct == 0
    out.append(("free product: closed forms = generator route", agree == samples, f"{agree}/{samples}"))
    out.append(("free product: trace formula with printed indexing", stated == samples, f"{stated}/{samples}"))
    out.append(("free product: p = 2 bracket vanishes", zero == zero_total, f"{zero}/{zero_total}"))
    return out


@main.command()
@click.option("--seed", default=0, show_default=True)
@click.option("--json", "as_json", is_flag=True)
def verify(seed: int, as_json: bool) -> None:
    """Run the cross-checks and print a pass/fail report."""
    checks = _verify_checks(seed)
    data = [{"check": name, "pass": ok, "detail": detail} for name, ok, detail in checks]
    lines = [f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else "") for name, ok, detail in checks]
    _emit(data, as_json, "\n".join(lines))
    failed = sum(not ok for _, ok, _ in checks)
    if failed:
        raise MathFailure(f"{failed} of {len(checks)} checks failed")


def run(argv: list[str]) -> int:
    """Run the CLI in-process and return the exit code."""
    try:
        main.main(args=argv, prog_name="doublepoisson", standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.Abort:
        return 1
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
