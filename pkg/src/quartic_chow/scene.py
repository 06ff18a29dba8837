"""Scene files: a line-oriented declarative format for verification targets.

A scene is a list of statements, one per line (a statement continues onto
following lines while brackets are open; ``#`` starts a comment)::

    target chow-git                     # name of the target
    depends ambient                     # targets whose artifacts are imported
    ring H:1 c2:2 c3:3                  # current ring; names resolve to its variables
    import rtr4 rtr5 from ambient       # load serialized artifacts
    let I = ideal(rtr4, rtr5)           # bind a value
    check hilbert("A*", I, "1+t", cite="thm:x")
    export I                            # serialize for later targets

Every ``check`` must carry a ``cite="..."`` label; the loader rejects
uncited checks.  Expected values are string literals (polynomial or series
text) or expressions.  Check kinds: ``equal``, ``member``, ``ideal_equal``,
``hilbert``, ``series``, ``table``.
"""

from __future__ import annotations

import re
import time
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

from . import blowup as _bl
from . import chern as _ch
from . import kirwan as _kw
from . import rings as _rg
from .errors import ChowError, SceneError
from .expr import BinOp, Call, ListNode, Name, Neg, Node, Num, Str, parse_expr
from .groebner import (
    BasisCache,
    IdealBasis,
    buchberger,
    eliminate,
    graded_dimensions,
    hilbert_series,
    ideal_equal,
)
from .poly import GradedPoly, VarTable
from .series import RatSeries

CHECK_KINDS = ("equal", "member", "ideal_equal", "hilbert", "series", "table")
PASS = "pass"
FAIL = "fail"
UNIMPLEMENTED = "unimplemented"


# ---------------------------------------------------------------------------
# loading
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class Statement:
    kind: str
    line: int
    payload: tuple


@dataclass(frozen=True)
class SceneFile:
    """A parsed scene: target name, dependencies and statements."""

    name: str
    source: str
    depends: tuple[str, ...]
    statements: tuple[Statement, ...]
    description: str = ""

    def citations(self) -> list[str]:
        out = []
        for st in self.statements:
            if st.kind == "check":
                out.append(_kwarg_str(st.payload[0], "cite"))
        return out


def _depth(text: str) -> int:
    depth = 0
    in_str = False
    prev = ""
    for ch in text:
        if ch == '"' and prev != "\\":
            in_str = not in_str
        elif not in_str:
            if ch in "([":
                depth += 1
            elif ch in ")]":
                depth -= 1
        prev = ch
    return depth


def _strip_comment(line: str) -> str:
    in_str = False
    for i, ch in enumerate(line):
        if ch == '"':
            in_str = not in_str
        elif ch == "#" and not in_str:
            return line[:i]
    return line


def _kwarg_str(call: Call, key: str) -> str:
    for k, v in call.kwargs:
        if k == key and isinstance(v, Str):
            return v.value
    return ""


def _logical_lines(text: str, source: str) -> list[tuple[int, str]]:
    out: list[tuple[int, str]] = []
    buf: list[str] = []
    start = 0
    for no, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not buf and not line:
            continue
        if not buf:
            start = no
        buf.append(line)
        joined = " ".join(buf)
        if _depth(joined) <= 0:
            out.append((start, joined))
            buf = []
    if buf:
        raise SceneError("unbalanced brackets at end of file", source=source, line=start)
    return out


def parse_scene(text: str, source: str = "<scene>") -> SceneFile:
    """Parse scene text; raises ``SceneError`` with the offending line."""
    name = ""
    depends: list[str] = []
    description = ""
    statements: list[Statement] = []
    for line, body in _logical_lines(text, source):
        head, _, rest = body.partition(" ")
        rest = rest.strip()
        try:
            if head == "target":
                if name:
                    raise SceneError("duplicate target statement")
                name = rest
            elif head == "describe":
                description = rest
            elif head == "depends":
                depends.extend(rest.split())
            elif head == "ring":
                statements.append(Statement("ring", line, (VarTable.of(rest),)))
            elif head == "let":
                lhs, eq, rhs = rest.partition("=")
                if not eq or not lhs.strip().isidentifier():
                    raise SceneError("expected 'let NAME = EXPRESSION'")
                statements.append(Statement("let", line, (lhs.strip(), parse_expr(rhs))))
            elif head == "check":
                node = parse_expr(rest)
                if not isinstance(node, Call) or node.func not in CHECK_KINDS:
                    raise SceneError(f"check must call one of {', '.join(CHECK_KINDS)}")
                if not _kwarg_str(node, "cite"):
                    raise SceneError("check without a cite=\"...\" label")
                if not node.args or not isinstance(node.args[0], Str):
                    raise SceneError("the first argument of a check is its label string")
                statements.append(Statement("check", line, (node,)))
            elif head == "export":
                statements.append(Statement("export", line, tuple(rest.split())))
            elif head == "import":
                names, sep, dep = rest.rpartition(" from ")
                if not sep:
                    raise SceneError("expected 'import NAME ... from TARGET'")
                statements.append(Statement("import", line, (tuple(names.split()), dep.strip())))
            else:
                raise SceneError(f"unknown statement {head!r}")
        except SceneError as exc:
            raise SceneError(exc.message, source=source, line=line) from None
        except ChowError as exc:
            raise SceneError(str(exc), source=source, line=line) from None
    if not name:
        raise SceneError("missing target statement", source=source, line=1)
    for st in statements:
        if st.kind == "import" and st.payload[1] not in depends:
            raise SceneError(f"import from {st.payload[1]!r} which is not a dependency", source=source, line=st.line)
    return SceneFile(name, source, tuple(depends), tuple(statements), description)


def load_scene(path: str | Path) -> SceneFile:
    path = Path(path)
    return parse_scene(path.read_text(encoding="utf-8"), source=str(path))


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------
@dataclass
class Certificate:
    """Outcome of one check."""

    target: str
    kind: str
    label: str
    status: str
    citation: str
    expected: str
    computed: str
    ms: float = 0.0
    note: str = ""

    def record(self, *, timing: bool = True) -> dict[str, Any]:
        out: dict[str, Any] = {
            "target": self.target,
            "kind": self.kind,
            "label": self.label,
            "status": self.status,
            "citation": self.citation,
            "expected": self.expected,
            "computed": self.computed,
        }
        if self.note:
            out["note"] = self.note
        if timing:
            out["ms"] = round(self.ms, 1)
        return out


# ---------------------------------------------------------------------------
# serialization of artifacts
# ---------------------------------------------------------------------------
def serialize_value(value: Any) -> str:
    """Canonical text form of a scene value (used for artifacts and reports)."""
    if isinstance(value, GradedPoly):
        return f"poly {value.table}\n{value}\n"
    if isinstance(value, RatSeries):
        return f"series\n{value}\n"
    if isinstance(value, Fraction):
        return f"number\n{value}\n"
    if isinstance(value, IdealBasis):
        lines = [f"ideal {value.table}", f"eliminate {' '.join(value.order.eliminate)}".rstrip()]
        lines += [str(g) for g in value.generators]
        return "\n".join(lines) + "\n"
    raise SceneError(f"cannot serialize a value of type {type(value).__name__}")


def deserialize_value(text: str) -> Any:
    lines = text.splitlines()
    head = lines[0]
    if head.startswith("poly "):
        return GradedPoly.parse(lines[1], VarTable.of(head[5:]))
    if head == "series":
        return RatSeries.parse(lines[1])
    if head == "number":
        return Fraction(lines[1])
    if head.startswith("ideal "):
        table = VarTable.of(head[6:])
        elim = lines[1].split()[1:]
        return IdealBasis.of([GradedPoly.parse(line, table) for line in lines[2:] if line.strip()], table, elim)
    raise SceneError(f"unknown artifact header {head!r}")


def describe(value: Any) -> str:
    """One-line canonical rendering for certificates."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (GradedPoly, RatSeries, Fraction, int, str)):
        return str(value)
    if isinstance(value, IdealBasis):
        return "(" + ", ".join(str(g) for g in value.generators) + f") in Q[{value.table}]"
    if isinstance(value, (list, tuple)):
        return "[" + "; ".join(describe(v) for v in value) + "]"
    return repr(value)


# ---------------------------------------------------------------------------
# evaluation helpers
# ---------------------------------------------------------------------------
def minimal(p: GradedPoly) -> GradedPoly:
    """``p`` over the subtable of the variables it actually uses."""
    used = p.variables()
    return p.restrict(VarTable.of([(n, d) for n, d in zip(p.table.names, p.table.degrees) if n in used]))


def to_table(p: GradedPoly, table: VarTable) -> GradedPoly:
    if p.table == table:
        return p
    if p.table.is_subtable_of(table):
        return p.embed(table)
    return minimal(p).embed(table)


@dataclass
class Context:
    """Mutable evaluation state of one scene run."""

    ring: VarTable = field(default_factory=lambda: VarTable.of(""))
    env: dict[str, Any] = field(default_factory=dict)
    cache: BasisCache | None = None

    def common(self, a: GradedPoly, b: GradedPoly) -> tuple[GradedPoly, GradedPoly]:
        if a.table == b.table:
            return a, b
        used = a.variables() | b.variables()
        if used <= set(self.ring.names):
            return to_table(a, self.ring), to_table(b, self.ring)
        table = a.table.union(b.table)
        return a.embed(table), b.embed(table)

    def poly(self, value: Any) -> GradedPoly:
        if isinstance(value, GradedPoly):
            return value
        if isinstance(value, (Fraction, int)):
            return GradedPoly.const(self.ring, value)
        if isinstance(value, str):
            return GradedPoly.parse(value, self.ring)
        raise SceneError(f"expected a polynomial, got {type(value).__name__}")

    def series(self, value: Any) -> RatSeries:
        if isinstance(value, RatSeries):
            return value
        if isinstance(value, (Fraction, int)):
            return RatSeries([value])
        if isinstance(value, str):
            return RatSeries.parse(value)
        raise SceneError(f"expected a series, got {type(value).__name__}")

    def ideal(self, value: Any) -> IdealBasis:
        if isinstance(value, IdealBasis):
            return value
        if isinstance(value, list):
            return make_ideal(self, *value)
        raise SceneError(f"expected an ideal, got {type(value).__name__}")


def _arith(ctx: Context, op: str, a: Any, b: Any) -> Any:
    if op == "^":
        if not isinstance(b, Fraction) or b.denominator != 1 or b < 0:
            raise SceneError("exponents must be nonnegative integers")
        return a ** int(b)
    if isinstance(a, GradedPoly) and isinstance(b, GradedPoly):
        a, b = ctx.common(a, b)
    if isinstance(a, GradedPoly) and isinstance(b, RatSeries) or isinstance(a, RatSeries) and isinstance(b, GradedPoly):
        raise SceneError("cannot combine a polynomial with a series")
    if isinstance(a, (list, tuple)) or isinstance(b, (list, tuple)):
        raise SceneError("arithmetic on lists is not supported")
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        if isinstance(b, GradedPoly):
            if not b.is_constant() or not b:
                raise SceneError("division by a non-constant polynomial")
            b = b.constant_term()
        return a / b
    raise SceneError(f"unknown operator {op}")


def evaluate(node: Node, ctx: Context) -> Any:
    """Evaluate an expression tree in ``ctx``."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Str):
        return node.value
    if isinstance(node, Name):
        if node.name in ctx.env:
            return ctx.env[node.name]
        if node.name in ctx.ring:
            return GradedPoly.var(ctx.ring, node.name)
        if node.name in ("true", "false"):
            return node.name == "true"
        raise SceneError(f"undefined name {node.name!r}")
    if isinstance(node, Neg):
        return -evaluate(node.operand, ctx)
    if isinstance(node, BinOp):
        return _arith(ctx, node.op, evaluate(node.left, ctx), evaluate(node.right, ctx))
    if isinstance(node, ListNode):
        return [evaluate(n, ctx) for n in node.items]
    if isinstance(node, Call):
        fn = BUILTINS.get(node.func)
        if fn is None:
            raise SceneError(f"unknown function {node.func!r}")
        args = [evaluate(a, ctx) for a in node.args]
        kwargs = {k: evaluate(v, ctx) for k, v in node.kwargs}
        return fn(ctx, *args, **kwargs)
    raise SceneError(f"cannot evaluate {node!r}")


# ---------------------------------------------------------------------------
# builtin functions
# ---------------------------------------------------------------------------
BUILTINS: dict[str, Callable[..., Any]] = {}


def builtin(name: str) -> Callable[[Callable[..., Any]], Callable[..., Any]]:
    def deco(fn: Callable[..., Any]) -> Callable[..., Any]:
        BUILTINS[name] = fn
        return fn

    return deco


def _int(x: Any) -> int:
    if isinstance(x, bool) or not isinstance(x, (int, Fraction)) or Fraction(x).denominator != 1:
        raise SceneError(f"expected an integer, got {x!r}")
    return int(x)


def _flatten(items: Any) -> list[Any]:
    out: list[Any] = []
    for it in items:
        if isinstance(it, (list, tuple)):
            out.extend(_flatten(it))
        elif isinstance(it, IdealBasis):
            out.extend(it.generators)
        else:
            out.append(it)
    return out


@builtin("poly")
def _b_poly(ctx: Context, text: str, ring: str = "") -> GradedPoly:
    return GradedPoly.parse(text, VarTable.of(ring) if ring else ctx.ring)


@builtin("series")
def _b_series(ctx: Context, text: str) -> RatSeries:
    return RatSeries.parse(text)


@builtin("inring")
def _b_inring(ctx: Context, x: Any, ring: str = "") -> Any:
    table = VarTable.of(ring) if ring else ctx.ring
    if isinstance(x, list):
        return [to_table(ctx.poly(v), table) for v in x]
    if isinstance(x, IdealBasis):
        return IdealBasis.of([to_table(g, table) for g in x.generators], table)
    return to_table(ctx.poly(x), table)


@builtin("subst")
def _b_subst(ctx: Context, x: Any, **mapping: Any) -> Any:
    if isinstance(x, IdealBasis):
        return make_ideal(ctx, *[_b_subst(ctx, g, **mapping) for g in x.generators])
    if isinstance(x, list):
        return [_b_subst(ctx, g, **mapping) for g in x]
    x = ctx.poly(x)
    images = {k: (ctx.poly(v) if not isinstance(v, (Fraction, int)) else v) for k, v in mapping.items()}
    target = x.table.without(images)
    for v in images.values():
        if isinstance(v, GradedPoly):
            target = target.union(minimal(v).table)
    if set(target.names) <= set(ctx.ring.names):
        target = ctx.ring
    return x.substitute(images, target)


@builtin("evaluate")
def _b_evaluate(ctx: Context, x: GradedPoly, **mapping: Any) -> GradedPoly:
    return x.evaluate({k: (v if isinstance(v, (Fraction, int)) else ctx.poly(v)) for k, v in mapping.items()})


@builtin("select")
def _b_select(ctx: Context, x: GradedPoly, d: Fraction) -> GradedPoly:
    return x.select_degree(_int(d))


@builtin("truncate")
def _b_truncate(ctx: Context, x: GradedPoly, d: Fraction) -> GradedPoly:
    return x.truncate_above(_int(d))


@builtin("inverse")
def _b_inverse(ctx: Context, x: GradedPoly, top: Fraction) -> GradedPoly:
    return _ch.series_inverse(x, _int(top))


@builtin("mul_truncated")
def _b_multrunc(ctx: Context, a: GradedPoly, b: GradedPoly, top: Fraction) -> GradedPoly:
    a, b = ctx.common(a, b)
    return a.mul_truncated(b, _int(top))


@builtin("powersum")
def _b_powersum(ctx: Context, x: Any, lo: Fraction, hi: Fraction) -> Any:
    """Σ_{n=lo}^{hi} x^n."""
    x = ctx.poly(x) if not isinstance(x, RatSeries) else x
    total = None
    for n in range(_int(lo), _int(hi) + 1):
        term = x ** n
        total = term if total is None else total + term
    if total is None:
        raise SceneError("empty power sum")
    return total


@builtin("product")
def _b_product(ctx: Context, items: list) -> Any:
    out: Any = Fraction(1)
    for it in items:
        out = _arith(ctx, "*", out, it)
    return out


@builtin("item")
def _b_item(ctx: Context, items: list, i: Fraction) -> Any:
    """``items[i]`` (zero-based)."""
    return items[_int(i)]


@builtin("add_each")
def _b_add_each(ctx: Context, items: list, x: Any) -> list:
    """[a + x for a in items]."""
    return [_arith(ctx, "+", a, x) for a in items]


@builtin("sum")
def _b_sum(ctx: Context, items: list) -> Any:
    out: Any = Fraction(0)
    for it in items:
        out = _arith(ctx, "+", out, it)
    return out


@builtin("coefficient_of")
def _b_coefficient(ctx: Context, x: GradedPoly, var: str, power: Fraction = Fraction(1)) -> GradedPoly:
    """Coefficient of ``var^power`` (a polynomial free of ``var``)."""
    vi = x.table.index(var)
    k = _int(power)
    terms = {m[:vi] + (0,) + m[vi + 1 :]: c for m, c in x.items() if m[vi] == k}
    return GradedPoly(x.table, terms)


@builtin("solve_for")
def _b_solve_for(ctx: Context, x: GradedPoly, var: str) -> GradedPoly:
    """Solve ``x = 0`` for a variable occurring linearly with constant coefficient."""
    mono = x.table.var_monomial(var)
    c = x.coefficient(mono)
    rest = x - GradedPoly.monomial(x.table, mono, c)
    if not c or var in rest.variables():
        raise SceneError(f"{var} does not occur linearly with a constant coefficient")
    return minimal(-rest / c).embed(x.table.without([var]))


# ---- Chern calculus --------------------------------------------------------
@builtin("roots")
def _b_roots(ctx: Context, names: list, values: list) -> Any:
    """Bundle(s) from formal roots with prescribed elementary symmetric values.

    With nested lists, one bundle per group is returned, all sharing one
    root context so that they can be added.
    """
    nested = bool(names) and isinstance(names[0], list)
    groups = list(zip(names, values)) if nested else [(names, values)]

    def value(v: Any) -> Any:
        return v if isinstance(v, Fraction) else to_table(ctx.poly(v), ctx.ring)

    rc = _ch.RootSystemContext(ctx.ring, [(list(n), [value(v) for v in vs]) for n, vs in groups])
    bundles = [_ch.BundleSpec.from_group(rc, i) for i in range(len(groups))]
    return bundles if nested else bundles[0]


@builtin("lines")
def _b_lines(ctx: Context, classes: list, weights: list | None = None) -> _ch.BundleSpec:
    rc = _ch.RootSystemContext(ctx.ring)
    return _ch.BundleSpec.lines(rc, [to_table(ctx.poly(c), ctx.ring) for c in classes], [_int(w) for w in weights or []])


@builtin("sym")
def _b_sym(ctx: Context, E: _ch.BundleSpec, d: Fraction) -> _ch.BundleSpec:
    return _ch.sym_power(E, _int(d))


@builtin("twist")
def _b_twist(ctx: Context, E: _ch.BundleSpec, L: Any) -> _ch.BundleSpec:
    return _ch.twist(E, to_table(ctx.poly(L), E.ctx.base))


@builtin("dual")
def _b_dual(ctx: Context, E: _ch.BundleSpec) -> _ch.BundleSpec:
    return E.dual()


@builtin("dsum")
def _b_dsum(ctx: Context, E: _ch.BundleSpec, F: _ch.BundleSpec) -> _ch.BundleSpec:
    return E + F


@builtin("weights")
def _b_weights(ctx: Context, E: _ch.BundleSpec, w: Any) -> _ch.BundleSpec:
    return E.with_weights([_int(x) for x in w] if isinstance(w, list) else _int(w))


@builtin("chern_total")
def _b_ctotal(ctx: Context, E: _ch.BundleSpec, top: Any = None) -> GradedPoly:
    return _ch.total_chern(E, top=None if top is None else _int(top))


@builtin("chern")
def _b_chern(ctx: Context, E: _ch.BundleSpec, k: Fraction) -> GradedPoly:
    return _ch.chern_class(E, _int(k))


@builtin("top_chern")
def _b_topchern(ctx: Context, E: _ch.BundleSpec) -> GradedPoly:
    return _ch.top_chern(E)


@builtin("segre")
def _b_segre(ctx: Context, E: _ch.BundleSpec, top: Fraction) -> GradedPoly:
    return _ch.segre(E, _int(top))


@builtin("weighted_chern")
def _b_wchern(ctx: Context, E: _ch.BundleSpec, var: str = "t") -> GradedPoly:
    return _ch.weighted_chern_poly(E, var)


@builtin("normalized_dual_chern")
def _b_ndc(ctx: Context, total: GradedPoly, rank: Fraction) -> GradedPoly:
    return _ch.normalized_dual_chern(total, _int(rank))


@builtin("free_of")
def _b_free_of(ctx: Context, x: Any, names: list) -> bool:
    """True when no variable of ``names`` occurs in ``x``."""
    return not (ctx.poly(x).variables() & set(names))


@builtin("spread")
def _b_spread(ctx: Context, s: Any, k: Fraction) -> RatSeries:
    """s(t^k)."""
    return ctx.series(s).substitute_power(_int(k))


# ---- intersection rings ----------------------------------------------------
@builtin("layer")
def _b_layer(ctx: Context, var: str, rank: Fraction, total: Any) -> _rg.ProjectiveBundleLayer:
    return _rg.ProjectiveBundleLayer(var, _int(rank), minimal(ctx.poly(total)))


@builtin("layer_relation")
def _b_layer_rel(ctx: Context, layer: _rg.ProjectiveBundleLayer) -> GradedPoly:
    return layer.relation(ctx.ring)


@builtin("push")
def _b_push(ctx: Context, x: Any, *layers: _rg.ProjectiveBundleLayer) -> GradedPoly:
    x = ctx.poly(x)
    for layer in layers:
        x = _rg.layer_pushforward(x, layer)
    return x


@builtin("solve_push")
def _b_solve_push(ctx: Context, x: Any, pullback: Any, layers: list, target: _rg.ProjectiveBundleLayer, dim: Fraction, degree: Fraction) -> GradedPoly:
    x = ctx.poly(x)
    pb = ctx.poly(pullback)
    x, pb = ctx.common(x, pb)
    return _rg.solve_pushforward(x, pb, lambda y: _rg.tower_pushforward(y, layers), target, _int(dim), _int(degree)).value


@builtin("flag")
def _b_flag(ctx: Context, zeta_layer: _rg.ProjectiveBundleLayer, xi_layer: _rg.ProjectiveBundleLayer) -> _rg.FlagVariety:
    table = VarTable.of([(zeta_layer.var, 1), (xi_layer.var, 1)])
    table = table.union(zeta_layer.chern_total.table).union(xi_layer.chern_total.table.without([zeta_layer.var]))
    return _rg.FlagVariety(table, zeta_layer, xi_layer)


@builtin("flag_relations")
def _b_flag_rel(ctx: Context, fl: _rg.FlagVariety, zeta: str = "", xi: str = "") -> list:
    rels = fl.relations(ctx.ring if set(fl.table.names) <= set(ctx.ring.names) else fl.table)
    if zeta or xi:
        rels = [r.substitute({fl.zeta: GradedPoly.var(ctx.ring, zeta or fl.zeta), fl.xi: GradedPoly.var(ctx.ring, xi or fl.xi)}, ctx.ring) for r in rels]
    return rels


@builtin("structure_constant")
def _b_structure(ctx: Context, fl: _rg.FlagVariety, i: Fraction, j: Fraction) -> GradedPoly:
    return _rg.flag_structure_constant(fl, _int(i), _int(j))


@builtin("diagonal")
def _b_diagonal(ctx: Context, fl: _rg.FlagVariety, zeta2: str, xi2: str) -> GradedPoly:
    """[Δ] = Σ F_b ⊗ b written with the second factor's variables renamed."""
    diag = _rg.flag_diagonal(fl)
    out = GradedPoly.zero(ctx.ring)
    for (i, j), F in diag.terms:
        b = GradedPoly.var(ctx.ring, zeta2) ** i * GradedPoly.var(ctx.ring, xi2) ** j
        out = out + to_table(F, ctx.ring) * b
    return out


@builtin("swap_involution")
def _b_swap(ctx: Context, fl: _rg.FlagVariety, zeta_in: list, xi_in: list) -> list:
    """[σ(ζ), σ(ξ)] for the swap μ ↔ ν, given ζ and ξ as a·μ + b·ν."""
    sigma = _rg.involution_from_swap(fl, (Fraction(zeta_in[0]), Fraction(zeta_in[1])), (Fraction(xi_in[0]), Fraction(xi_in[1])))
    return [to_table(sigma[fl.zeta], ctx.ring), to_table(sigma[fl.xi], ctx.ring)]


def _trace_fn(ctx: Context, fl: _rg.FlagVariety, sigma: list, invariant: Any, image: Any) -> Callable[[GradedPoly], GradedPoly]:
    sig = {fl.zeta: to_table(ctx.poly(sigma[0]), fl.table), fl.xi: to_table(ctx.poly(sigma[1]), fl.table)}
    inv = to_table(ctx.poly(invariant), fl.table)
    img = ctx.poly(image)

    def fn(x: GradedPoly) -> GradedPoly:
        return _rg.mu2_trace(to_table(x, fl.table), fl, sig, inv, ctx.ring, img)

    return fn


@builtin("trace")
def _b_trace(ctx: Context, x: Any, fl: _rg.FlagVariety, sigma: list, invariant: Any, image: Any) -> GradedPoly:
    return _trace_fn(ctx, fl, sigma, invariant, image)(ctx.poly(x))


@builtin("diagonal_trace")
def _b_diag_trace(ctx: Context, fl: _rg.FlagVariety, sigma: list, invariant: Any, image: Any) -> GradedPoly:
    """Σ_b F_b · tr(b): the diagonal with its second factor pushed along the trace."""
    fn = _trace_fn(ctx, fl, sigma, invariant, image)
    out = GradedPoly.zero(ctx.ring)
    for b, F in _rg.flag_diagonal(fl).terms:
        out = out + to_table(F, ctx.ring) * to_table(fn(fl.monomial(*b)), ctx.ring)
    return out


# ---- ideals ----------------------------------------------------------------
def make_ideal(ctx: Context, *items: Any, ring: str = "", eliminate: list | None = None) -> IdealBasis:
    gens = [ctx.poly(g) for g in _flatten(items)]
    if ring:
        table = VarTable.of(ring)
    elif gens and all(g.variables() <= set(ctx.ring.names) for g in gens):
        table = ctx.ring
    elif gens:
        table = gens[0].table
        for g in gens[1:]:
            table = table.union(g.table)
    else:
        table = ctx.ring
    return IdealBasis.of([to_table(g, table) for g in gens], table, list(eliminate or []))


BUILTINS["ideal"] = make_ideal


@builtin("eliminate")
def _b_eliminate(ctx: Context, I: Any, names: list) -> IdealBasis:
    I = ctx.ideal(I)
    return eliminate(I.with_order(list(names)), list(names), cache=ctx.cache)


@builtin("nf")
def _b_nf(ctx: Context, x: Any, I: Any) -> GradedPoly:
    I = ctx.ideal(I)
    return buchberger(I, cache=ctx.cache).normal_form(to_table(ctx.poly(x), I.table))


@builtin("hilbert")
def _b_hilbert(ctx: Context, I: Any) -> RatSeries:
    return hilbert_series(ctx.ideal(I), cache=ctx.cache).rational


@builtin("dims")
def _b_dims(ctx: Context, I: Any, top: Fraction) -> RatSeries:
    """Degreewise dimensions by rank computation, as a polynomial series."""
    return RatSeries(graded_dimensions(ctx.ideal(I), _int(top)))


@builtin("truncated")
def _b_truncated(ctx: Context, s: Any, top: Fraction) -> RatSeries:
    return RatSeries(ctx.series(s).expand_int(_int(top)))


@builtin("halve")
def _b_halve(ctx: Context, s: Any) -> RatSeries:
    return ctx.series(s).halve()


@builtin("double")
def _b_double(ctx: Context, s: Any) -> RatSeries:
    return ctx.series(s).double()


# ---- blowups ---------------------------------------------------------------
def _blowup_data(ctx: Context, base: Any, kernel: list, pn: Any, center: Any, t: str) -> _bl.BlowupData:
    base = ctx.ideal(base)
    table = base.table
    return _bl.BlowupData(
        table,
        tuple(base.generators),
        tuple(to_table(ctx.poly(k), table) for k in kernel),
        to_table(ctx.poly(pn), table.extend([(t, 1)], front=True)),
        to_table(ctx.poly(center), table),
        t,
    )


@builtin("blowup")
def _b_blowup(ctx: Context, base: Any, kernel: list, pn: Any, center: Any, t: str = "t", q: bool = True) -> IdealBasis:
    pres = _bl.blowup_presentation(_blowup_data(ctx, base, kernel, pn, center, t), include_q=bool(q))
    gens = [to_table(g, ctx.ring) if g.variables() <= set(ctx.ring.names) else g for g in pres.relations]
    return make_ideal(ctx, gens)


@builtin("q_class")
def _b_qclass(ctx: Context, base: Any, kernel: list, pn: Any, center: Any, t: str = "t") -> GradedPoly:
    return _bl.q_class(_blowup_data(ctx, base, kernel, pn, center, t))


@builtin("proper_transform")
def _b_proper(ctx: Context, S: Any, codim: Fraction, center_term: Any, t: str = "t") -> GradedPoly:
    S, X = ctx.common(ctx.poly(S), ctx.poly(center_term))
    if t not in S.table:
        table = S.table.union(VarTable.of([(t, 1)]))
        S, X = S.embed(table), X.embed(table)
    return _bl.proper_transform(_bl.TransformData(S, _int(codim), X, t))


@builtin("quad_push")
def _b_quad_push(ctx: Context, x: Any, var: str, relation: Any) -> GradedPoly:
    rel = ctx.poly(relation)
    x, rel = ctx.common(ctx.poly(x), rel)
    return _bl.QuadraticExceptional(var, rel).pushforward(x)


@builtin("contraction")
def _b_contraction(ctx: Context, gens: Any, var: str, relation: Any) -> list:
    rel = ctx.poly(relation)
    gs = [ctx.common(ctx.poly(g), rel)[0] for g in _flatten([gens])]
    return _bl.QuadraticExceptional(var, ctx.common(gs[0], rel)[1]).contraction_generators(gs)


# ---- Kirwan series ---------------------------------------------------------
@builtin("ternary")
def _b_ternary(ctx: Context, d: Fraction) -> _kw.WeightSystem:
    return _kw.WeightSystem.ternary(_int(d))


@builtin("binary")
def _b_binary(ctx: Context, n: Fraction) -> _kw.WeightSystem:
    return _kw.WeightSystem.binary(_int(n))


@builtin("normalizer")
def _b_normalizer(ctx: Context, weights: list) -> _kw.WeightSystem:
    return _kw.WeightSystem.torus_normalizer([_int(w) for w in weights])


@builtin("strata_table")
def _b_strata_table(ctx: Context, W: _kw.WeightSystem) -> list:
    return [format_stratum(s) for s in _kw.enumerate_strata(W)]


def format_stratum(s: _kw.StratumRecord) -> str:
    """``support | stabilizer | contribution | dim Y | codim``."""
    return f"{' '.join(s.support)} | {s.group} | {s.contribution} | {s.dim_y} | {s.codim}"


_SUPPORT_TOKEN = re.compile(r"\(\s*-?\d+(?:\s*,\s*-?\d+)*\s*\)")


def normalize_row(row: str) -> tuple[str, ...]:
    """Canonical form of a table row: support as a sorted set, series in lowest terms."""
    fields = [f.strip() for f in row.split("|")]
    out = []
    for i, f in enumerate(fields):
        tokens = _SUPPORT_TOKEN.findall(f)
        if i == 0 and tokens:
            out.append(" ".join(sorted(t.replace(" ", "") for t in tokens)))
            continue
        try:
            out.append(str(RatSeries.parse(f)) if "t" in f else f)
        except ChowError:
            out.append(f)
    return tuple(out)


@builtin("strata_sum")
def _b_strata_sum(ctx: Context, W: _kw.WeightSystem) -> RatSeries:
    return _kw.strata_sum(_kw.enumerate_strata(W))


@builtin("semistable")
def _b_semistable(ctx: Context, W: _kw.WeightSystem) -> RatSeries:
    return _kw.semistable_series(W)


@builtin("equivariant")
def _b_equivariant(ctx: Context, W: _kw.WeightSystem) -> RatSeries:
    return _kw.equivariant_series(W)


@builtin("binary_semistable")
def _b_binary_ss(ctx: Context, n: Fraction) -> RatSeries:
    return _kw.binary_semistable_series(_int(n))


@builtin("blowup_correction")
def _b_blowup_corr(ctx: Context, center: Any, codim: Fraction) -> RatSeries:
    return _kw.blowup_correction(ctx.series(center), _int(codim))


@builtin("blowdown")
def _b_blowdown(ctx: Context, blown: Any, center: Any, codim: Fraction) -> RatSeries:
    return _kw.blowdown_series(ctx.series(blown), ctx.series(center), _int(codim))


@builtin("ip_prime")
def _b_ip_prime(ctx: Context, P: Any, dim: Fraction) -> RatSeries:
    return _kw.ip_prime(ctx.series(P), _int(dim))


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------
def _scalar_fit(a: GradedPoly, b: GradedPoly) -> Fraction | None:
    """k with a = k·b, or None."""
    if not b:
        return Fraction(0) if not a else None
    mono, cb = b.sorted_terms()[0]
    k = a.coefficient(mono) / cb
    return k if a == b.scale(k) else None


def _reduce_mod(ctx: Context, x: GradedPoly, mod: Any) -> GradedPoly:
    if mod is None:
        return x
    I = ctx.ideal(mod)
    return buchberger(I, cache=ctx.cache).normal_form(to_table(x, I.table))


def check_equal(ctx: Context, computed: Any, expected: Any, *, mod: Any = None, up_to_scalar: bool = False) -> tuple[bool, str, str, str]:
    if isinstance(computed, RatSeries):
        exp = ctx.series(expected)
        return computed == exp, describe(exp), describe(computed), ""
    if isinstance(computed, list):
        exps = expected if isinstance(expected, list) else [expected]
        if len(exps) != len(computed):
            return False, describe(exps), describe(computed), "length mismatch"
        results = [check_equal(ctx, c, e, mod=mod, up_to_scalar=up_to_scalar) for c, e in zip(computed, exps)]
        notes = "; ".join(r[3] for r in results if r[3])
        return all(r[0] for r in results), describe([r[1] for r in results]), describe([r[2] for r in results]), notes
    if isinstance(computed, (Fraction, int)) and not isinstance(expected, (GradedPoly, str)):
        return Fraction(computed) == Fraction(expected), describe(expected), describe(computed), ""
    c = ctx.poly(computed)
    e = ctx.poly(expected) if not isinstance(expected, str) else GradedPoly.parse(expected, c.table if set(c.table.names) >= set(ctx.ring.names) else ctx.ring)
    c, e = ctx.common(c, e)
    rc, re_ = _reduce_mod(ctx, c, mod), _reduce_mod(ctx, e, mod)
    shown_expected = expected if isinstance(expected, str) else str(e)
    if up_to_scalar:
        k = _scalar_fit(rc, re_)
        if k is None or (k == 0 and re_):
            return False, shown_expected, str(c), f"no scalar fits; residues {rc} vs {re_}"
        return True, shown_expected, str(c), f"scalar {k}"
    diff = rc - re_
    note = "" if not diff else f"difference{' modulo the ideal' if mod is not None else ''}: {diff}"
    return not diff, shown_expected, str(c), note


def _error_note(exc: BaseException, line: int) -> str:
    """``line N: Kind: message`` with the scene location filled in."""
    message = exc.message if isinstance(exc, SceneError) else str(exc)
    return f"line {line}: {type(exc).__name__}: {message}"


def run_check(ctx: Context, call: Call, target: str, line: int = 0) -> Certificate:
    label = call.args[0].value  # type: ignore[union-attr]
    cite = _kwarg_str(call, "cite")
    start = time.perf_counter()
    expected_text = ""
    try:
        args = [evaluate(a, ctx) for a in call.args[1:]]
        kwargs = {k: evaluate(v, ctx) for k, v in call.kwargs if k != "cite"}
        ok, expected_text, computed_text, note = _dispatch(ctx, call.func, args, kwargs)
        status = PASS if ok else FAIL
    except NotImplementedError as exc:
        status, computed_text, note = UNIMPLEMENTED, "", str(exc)
    except (ChowError, ZeroDivisionError, ValueError, TypeError, KeyError) as exc:
        status, computed_text, note = FAIL, "", "error: " + _error_note(exc, line)
    ms = (time.perf_counter() - start) * 1000
    return Certificate(target, call.func, label, status, cite, expected_text, computed_text, ms, note)


def _dispatch(ctx: Context, kind: str, args: list, kwargs: dict) -> tuple[bool, str, str, str]:
    if kind == "equal":
        computed, expected = args
        ok, exp_s, got_s, note = check_equal(ctx, computed, expected, mod=kwargs.get("mod"), up_to_scalar=bool(kwargs.get("up_to_scalar", False)))
        if "show" in kwargs:
            note = "; ".join(x for x in (note, f"value: {describe(kwargs['show'])}") if x)
        return ok, exp_s, got_s, note
    if kind == "member":
        x, I = args
        want = bool(kwargs.get("expect", True))
        I = ctx.ideal(I)
        gb = buchberger(I, cache=ctx.cache)
        xs = x if isinstance(x, list) else [x]
        residues = [gb.normal_form(to_table(ctx.poly(v), I.table)) for v in xs]
        inside = all(not r for r in residues)
        note = "" if inside else "residues: " + "; ".join(str(r) for r in residues if r)
        return inside == want, "member" if want else "not a member", "member" if inside else "not a member", note
    if kind == "ideal_equal":
        A, B = ctx.ideal(args[0]), ctx.ideal(args[1])
        if A.table != B.table:
            table = B.table if A.table.is_subtable_of(B.table) else A.table.union(B.table)
            A = IdealBasis.of([to_table(g, table) for g in A.generators], table)
            B = IdealBasis.of([to_table(g, table) for g in B.generators], table)
        same = ideal_equal(A, B, cache=ctx.cache)
        note = ""
        mod = kwargs.get("mod")
        if mod is not None and len(A.generators) == len(B.generators):
            fits = []
            for a, b in zip(A.generators, B.generators):
                k = _scalar_fit(_reduce_mod(ctx, a, mod), _reduce_mod(ctx, b, mod))
                fits.append("none" if k is None else str(k))
            note = "generator scalars: " + ", ".join(fits)
        return same, describe(B), describe(A), note
    if kind == "hilbert":
        I, expected = args
        hs = hilbert_series(ctx.ideal(I), cache=ctx.cache).rational
        exp = ctx.series(expected)
        note = ""
        top = kwargs.get("rank_check")
        ok = hs == exp
        if top is not None:
            dims = graded_dimensions(ctx.ideal(I), _int(top))
            agree = dims == hs.expand_int(_int(top))
            note = f"degreewise ranks up to {_int(top)}: {'agree' if agree else 'DISAGREE ' + str(dims)}"
            ok = ok and agree
        return ok, str(exp), str(hs), note
    if kind == "series":
        computed, expected = ctx.series(args[0]), ctx.series(args[1])
        ok = computed == expected
        note = "" if ok else f"difference: {computed - expected}"
        return ok, str(expected), str(computed), note
    if kind == "table":
        rows, expected = args
        rows_s = [str(r) for r in rows]
        exp_s = [str(r) for r in expected]
        got = Counter(normalize_row(r) for r in rows_s)
        want = Counter(normalize_row(r) for r in exp_s)
        missing = [" | ".join(r) for r in (want - got).elements()]
        extra = [" | ".join(r) for r in (got - want).elements()]
        note = ""
        if missing or extra:
            note = f"missing rows: {missing}; unexpected rows: {extra}"
        return not missing and not extra, "\n".join(exp_s), "\n".join(rows_s), note
    raise SceneError(f"unknown check kind {kind!r}")


# ---------------------------------------------------------------------------
# running a scene
# ---------------------------------------------------------------------------
class ArtifactStore:
    """Directory of serialized values, one subdirectory per target."""

    def __init__(self, root: str | Path) -> None:
        self.root = Path(root)

    def path(self, target: str, name: str) -> Path:
        return self.root / target / f"{name}.txt"

    def write(self, target: str, name: str, value: Any) -> None:
        p = self.path(target, name)
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(serialize_value(value), encoding="utf-8")

    def read(self, target: str, name: str) -> Any:
        p = self.path(target, name)
        if not p.exists():
            raise SceneError(f"artifact {name!r} of target {target!r} is missing (run {target} first)")
        return deserialize_value(p.read_text(encoding="utf-8"))


def run_scene(scene: SceneFile, store: ArtifactStore, cache: BasisCache | None = None) -> list[Certificate]:
    """Execute every statement; failures become certificates, never exceptions."""
    ctx = Context(cache=cache)
    certs: list[Certificate] = []
    failed: set[str] = set()
    for st in scene.statements:
        try:
            if st.kind == "ring":
                ctx.ring = st.payload[0]
            elif st.kind == "let":
                name, node = st.payload
                start = time.perf_counter()
                try:
                    ctx.env[name] = evaluate(node, ctx)
                except (ChowError, ZeroDivisionError, ValueError, TypeError, KeyError) as exc:
                    failed.add(name)
                    ms = (time.perf_counter() - start) * 1000
                    certs.append(Certificate(scene.name, "let", name, FAIL, "", "", "", ms, _error_note(exc, st.line)))
            elif st.kind == "check":
                certs.append(run_check(ctx, st.payload[0], scene.name, st.line))
            elif st.kind == "export":
                for name in st.payload:
                    if name in ctx.env:
                        store.write(scene.name, name, ctx.env[name])
            elif st.kind == "import":
                names, dep = st.payload
                for name in names:
                    ctx.env[name] = store.read(dep, name)
        except ChowError as exc:
            certs.append(Certificate(scene.name, st.kind, f"line {st.line}", FAIL, "", "", "", 0.0, str(exc)))
    return certs
