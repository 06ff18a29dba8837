"""Exact sparse multivariate polynomials over Q with weighted gradings.

A :class:`VarTable` fixes the ordered list of generators together with their
positive integer degrees.  A :class:`GradedPoly` is an immutable sparse map
from exponent tuples to :class:`fractions.Fraction` coefficients over one
table.  Canonical printing uses weighted graded reverse lexicographic order,
largest monomial first, so serialized output is byte-stable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

from . import expr as _expr
from .errors import GradingError, SceneError, StructuralError

Monomial = tuple[int, ...]
Scalar = Union[int, Fraction]


@dataclass(frozen=True)
class VarTable:
    """Ordered graded generators; the order is the monomial-order tie-break."""

    names: tuple[str, ...]
    degrees: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.names) != len(self.degrees):
            raise StructuralError("names and degrees differ in length")
        if len(set(self.names)) != len(self.names):
            raise StructuralError(f"duplicate variable names in {self.names}")
        if any(int(d) < 1 for d in self.degrees):
            raise StructuralError("variable degrees must be positive integers")

    @classmethod
    def of(cls, spec: Iterable[tuple[str, int]] | str) -> "VarTable":
        """Build from ``[("H", 1), ("c2", 2)]`` or the text ``"H:1 c2:2"``."""
        if isinstance(spec, str):
            pairs = []
            for item in spec.replace(",", " ").split():
                name, _, deg = item.partition(":")
                pairs.append((name, int(deg or 1)))
            spec = pairs
        pairs = list(spec)
        return cls(tuple(n for n, _ in pairs), tuple(int(d) for _, d in pairs))

    def __len__(self) -> int:
        return len(self.names)

    def __contains__(self, name: object) -> bool:
        return name in self.names

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise StructuralError(f"unknown variable {name!r} (have {', '.join(self.names)})") from None

    def degree_of(self, mono: Monomial) -> int:
        return sum(e * d for e, d in zip(mono, self.degrees))

    def unit(self) -> Monomial:
        return (0,) * len(self.names)

    def var_monomial(self, name: str) -> Monomial:
        i = self.index(name)
        return tuple(1 if k == i else 0 for k in range(len(self.names)))

    def extend(self, spec: Iterable[tuple[str, int]] | str, *, front: bool = False) -> "VarTable":
        """Return a table with extra generators appended (or prepended)."""
        extra = VarTable.of(spec)
        if front:
            return VarTable(extra.names + self.names, extra.degrees + self.degrees)
        return VarTable(self.names + extra.names, self.degrees + extra.degrees)

    def without(self, names: Iterable[str]) -> "VarTable":
        drop = set(names)
        keep = [(n, d) for n, d in zip(self.names, self.degrees) if n not in drop]
        return VarTable.of(keep)

    def is_subtable_of(self, other: "VarTable") -> bool:
        return all(n in other.names and other.degrees[other.index(n)] == d for n, d in zip(self.names, self.degrees))

    def union(self, other: "VarTable") -> "VarTable":
        """Generators of ``self`` followed by the new generators of ``other``."""
        if self.is_subtable_of(other) and len(self) == len(other):
            return other
        pairs = list(zip(self.names, self.degrees))
        for n, d in zip(other.names, other.degrees):
            if n in self.names:
                if self.degrees[self.index(n)] != d:
                    raise StructuralError(f"variable {n!r} has conflicting degrees")
            else:
                pairs.append((n, d))
        return VarTable.of(pairs)

    def __str__(self) -> str:
        return " ".join(f"{n}:{d}" for n, d in zip(self.names, self.degrees))


def grevlex_key(table: VarTable, mono: Monomial) -> tuple:
    """Sort key realizing weighted-degree reverse lexicographic order."""
    return (table.degree_of(mono), tuple(-e for e in reversed(mono)))


def _as_fraction(c: object) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise StructuralError(f"cannot use {c!r} as an exact rational coefficient")


class GradedPoly:
    """Immutable polynomial with exact rational coefficients over a VarTable."""

    __slots__ = ("table", "_terms", "_hash")

    def __init__(self, table: VarTable, terms: Mapping[Monomial, Scalar] | None = None, *, _trusted: bool = False) -> None:
        self.table = table
        if _trusted:
            self._terms: dict[Monomial, Fraction] = terms  # type: ignore[assignment]
        else:
            clean: dict[Monomial, Fraction] = {}
            n = len(table)
            for mono, c in (terms or {}).items():
                mono = tuple(int(e) for e in mono)
                if len(mono) != n or any(e < 0 for e in mono):
                    raise StructuralError(f"bad exponent vector {mono} for table {table}")
                c = _as_fraction(c)
                if c:
                    clean[mono] = clean.get(mono, Fraction(0)) + c
                    if not clean[mono]:
                        del clean[mono]
            self._terms = clean
        self._hash: int | None = None

    # ---- constructors -------------------------------------------------
    @classmethod
    def zero(cls, table: VarTable) -> "GradedPoly":
        return cls(table, {}, _trusted=True)

    @classmethod
    def const(cls, table: VarTable, c: Scalar) -> "GradedPoly":
        c = _as_fraction(c)
        return cls(table, {table.unit(): c} if c else {}, _trusted=True)

    @classmethod
    def one(cls, table: VarTable) -> "GradedPoly":
        return cls.const(table, 1)

    @classmethod
    def var(cls, table: VarTable, name: str) -> "GradedPoly":
        return cls(table, {table.var_monomial(name): Fraction(1)}, _trusted=True)

    @classmethod
    def monomial(cls, table: VarTable, mono: Monomial, c: Scalar = 1) -> "GradedPoly":
        return cls(table, {tuple(mono): c})

    @classmethod
    def parse(cls, text: str, table: VarTable) -> "GradedPoly":
        """Parse polynomial text such as ``"60*H^4 - 120*c2*H^2"`` over ``table``."""
        return _evaluate(_expr.parse_expr(text), table)

    # ---- accessors ------------------------------------------------------
    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return self._terms

    def items(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(self._terms.items())

    def coefficient(self, mono: Monomial) -> Fraction:
        return self._terms.get(tuple(mono), Fraction(0))

    def constant_term(self) -> Fraction:
        return self._terms.get(self.table.unit(), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def is_constant(self) -> bool:
        unit = self.table.unit()
        return all(m == unit for m in self._terms)

    def variables(self) -> set[str]:
        used: set[str] = set()
        for mono in self._terms:
            used.update(n for n, e in zip(self.table.names, mono) if e)
        return used

    def degrees(self) -> set[int]:
        return {self.table.degree_of(m) for m in self._terms}

    def degree(self) -> int:
        """Top weighted degree; ``-1`` for the zero polynomial."""
        return max(self.degrees(), default=-1)

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def homogeneous_degree(self) -> int:
        degs = self.degrees()
        if len(degs) > 1:
            raise GradingError(f"polynomial is not homogeneous (degrees {sorted(degs)}): {self}")
        return degs.pop() if degs else 0

    def homogeneous_components(self) -> dict[int, "GradedPoly"]:
        parts: dict[int, dict[Monomial, Fraction]] = {}
        for mono, c in self._terms.items():
            parts.setdefault(self.table.degree_of(mono), {})[mono] = c
        return {d: GradedPoly(self.table, t, _trusted=True) for d, t in sorted(parts.items())}

    def select_degree(self, d: int) -> "GradedPoly":
        """The weighted-degree-``d`` component."""
        deg = self.table.degree_of
        return GradedPoly(self.table, {m: c for m, c in self._terms.items() if deg(m) == d}, _trusted=True)

    def truncate_above(self, d: int) -> "GradedPoly":
        """Sum of the components of weighted degree at most ``d``."""
        deg = self.table.degree_of
        return GradedPoly(self.table, {m: c for m, c in self._terms.items() if deg(m) <= d}, _trusted=True)

    # ---- arithmetic -------------------------------------------------------
    def _coerce(self, other: object) -> "GradedPoly":
        if isinstance(other, GradedPoly):
            if other.table != self.table:
                raise StructuralError(f"variable tables differ: [{self.table}] vs [{other.table}]")
            return other
        if isinstance(other, (int, Fraction)):
            return GradedPoly.const(self.table, other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other: object) -> "GradedPoly":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for m, c in o._terms.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v += c
                if v:
                    out[m] = v
                else:
                    del out[m]
        return GradedPoly(self.table, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self) -> "GradedPoly":
        return GradedPoly(self.table, {m: -c for m, c in self._terms.items()}, _trusted=True)

    def __sub__(self, other: object) -> "GradedPoly":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> "GradedPoly":
        return (-self) + other

    def scale(self, c: Scalar) -> "GradedPoly":
        c = _as_fraction(c)
        if not c:
            return GradedPoly.zero(self.table)
        return GradedPoly(self.table, {m: v * c for m, v in self._terms.items()}, _trusted=True)

    def __mul__(self, other: object) -> "GradedPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in o._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                v = out.get(m)
                out[m] = c1 * c2 if v is None else v + c1 * c2
        return GradedPoly(self.table, {m: c for m, c in out.items() if c}, _trusted=True)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> "GradedPoly":
        if isinstance(other, (int, Fraction)) and other:
            return self.scale(1 / _as_fraction(other))
        if isinstance(other, GradedPoly) and other.is_constant() and other:
            return self.scale(1 / other.constant_term())
        raise StructuralError("polynomials can only be divided by nonzero constants")

    def __pow__(self, n: int) -> "GradedPoly":
        if not isinstance(n, int) or n < 0:
            raise StructuralError("exponent must be a nonnegative integer")
        result = GradedPoly.one(self.table)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def mul_truncated(self, other: "GradedPoly", top: int) -> "GradedPoly":
        """Product with every monomial of weighted degree above ``top`` discarded."""
        o = self._coerce(other)
        deg = self.table.degree_of
        a = [(m, c, deg(m)) for m, c in self._terms.items() if deg(m) <= top]
        b = [(m, c, deg(m)) for m, c in o._terms.items() if deg(m) <= top]
        out: dict[Monomial, Fraction] = {}
        for m1, c1, d1 in a:
            for m2, c2, d2 in b:
                if d1 + d2 > top:
                    continue
                m = tuple(x + y for x, y in zip(m1, m2))
                v = out.get(m)
                out[m] = c1 * c2 if v is None else v + c1 * c2
        return GradedPoly(self.table, {m: c for m, c in out.items() if c}, _trusted=True)

    # ---- comparison ---------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self._terms == GradedPoly.const(self.table, other)._terms
        if not isinstance(other, GradedPoly):
            return NotImplemented
        return self.table == other.table and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.table, frozenset(self._terms.items())))
        return self._hash

    # ---- ring changes -------------------------------------------------------
    def embed(self, table: VarTable) -> "GradedPoly":
        """Reinterpret over a table containing every variable of ``self.table``."""
        if table == self.table:
            return self
        if not self.table.is_subtable_of(table):
            raise StructuralError(f"cannot embed [{self.table}] into [{table}]")
        pos = [table.index(n) for n in self.table.names]
        out: dict[Monomial, Fraction] = {}
        width = len(table)
        for mono, c in self._terms.items():
            new = [0] * width
            for p, e in zip(pos, mono):
                new[p] = e
            out[tuple(new)] = c
        return GradedPoly(table, out, _trusted=True)

    def restrict(self, table: VarTable) -> "GradedPoly":
        """Drop to a smaller table; every used variable must survive."""
        missing = self.variables() - set(table.names)
        if missing:
            raise StructuralError(f"variables {sorted(missing)} are not in [{table}]")
        out = {}
        for mono, c in self._terms.items():
            new = [0] * len(table)
            for n, e in zip(self.table.names, mono):
                if e:
                    new[table.index(n)] = e
            out[tuple(new)] = c
        return GradedPoly(table, out, _trusted=True)

    def substitute(
        self,
        mapping: Mapping[str, "GradedPoly | Scalar"],
        target: VarTable | None = None,
        *,
        check_grading: bool = True,
    ) -> "GradedPoly":
        """Graded ring homomorphism sending each mapped variable to its image.

        Unmapped variables are sent to the variable of the same name in
        ``target`` (default: the source table).  With ``check_grading`` every
        image must be homogeneous of its source variable's degree.
        """
        target = target or self.table
        images: list[GradedPoly] = []
        for name, deg in zip(self.table.names, self.table.degrees):
            if name in mapping:
                img = mapping[name]
                img = img.embed(target) if isinstance(img, GradedPoly) else GradedPoly.const(target, img)
                if check_grading and img and (not img.is_homogeneous() or img.homogeneous_degree() != deg):
                    raise GradingError(f"image of {name} is not homogeneous of degree {deg}: {img}")
            elif name in target:
                img = GradedPoly.var(target, name)
            else:
                raise StructuralError(f"no image for variable {name!r} in [{target}]")
            images.append(img)
        cache: dict[tuple[int, int], GradedPoly] = {}

        def power(i: int, e: int) -> GradedPoly:
            key = (i, e)
            if key not in cache:
                cache[key] = images[i] ** e
            return cache[key]

        result = GradedPoly.zero(target)
        acc: dict[Monomial, Fraction] = {}
        for mono, c in self._terms.items():
            term = GradedPoly.const(target, c)
            for i, e in enumerate(mono):
                if e:
                    term = term * power(i, e)
            for m, v in term._terms.items():
                acc[m] = acc.get(m, Fraction(0)) + v
        result = GradedPoly(target, {m: v for m, v in acc.items() if v}, _trusted=True)
        return result

    def evaluate(self, mapping: Mapping[str, "GradedPoly | Scalar"], target: VarTable | None = None) -> "GradedPoly":
        """Substitution without grading checks (e.g. setting ``t = 1``)."""
        return self.substitute(mapping, target, check_grading=False)

    # ---- normalization ------------------------------------------------------
    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in canonical order: weighted grevlex, largest first."""
        return sorted(self._terms.items(), key=lambda mc: grevlex_key(self.table, mc[0]), reverse=True)

    def leading_coefficient(self) -> Fraction:
        terms = self.sorted_terms()
        return terms[0][1] if terms else Fraction(0)

    def monic(self) -> "GradedPoly":
        """Divide by the grevlex leading coefficient (zero stays zero)."""
        lc = self.leading_coefficient()
        return self.scale(1 / lc) if lc else self

    def primitive(self) -> "GradedPoly":
        """Scale to coprime integer coefficients with positive leading coefficient."""
        if not self._terms:
            return self
        from math import gcd, lcm

        den = 1
        for c in self._terms.values():
            den = lcm(den, c.denominator)
        nums = [int(c * den) for c in self._terms.values()]
        g = 0
        for n in nums:
            g = gcd(g, n)
        p = self.scale(Fraction(den, g))
        return p if p.leading_coefficient() > 0 else -p

    # ---- printing -----------------------------------------------------------
    def monomial_str(self, mono: Monomial) -> str:
        parts = []
        for n, e in zip(self.table.names, mono):
            if e == 1:
                parts.append(n)
            elif e > 1:
                parts.append(f"{n}^{e}")
        return "*".join(parts)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        out: list[str] = []
        for mono, c in self.sorted_terms():
            ms = self.monomial_str(mono)
            mag = abs(c)
            if not ms:
                body = str(mag)
            elif mag == 1:
                body = ms
            else:
                body = f"{mag}*{ms}"
            if not out:
                out.append(body if c > 0 else f"-{body}")
            else:
                out.append(("+ " if c > 0 else "- ") + body)
        return " ".join(out)

    def __repr__(self) -> str:
        return f"GradedPoly({str(self)!r}, [{self.table}])"


def _evaluate(node: _expr.Node, table: VarTable) -> GradedPoly:
    if isinstance(node, _expr.Num):
        return GradedPoly.const(table, node.value)
    if isinstance(node, _expr.Name):
        if node.name not in table:
            raise SceneError(f"unknown variable {node.name!r} (ring has {', '.join(table.names)})")
        return GradedPoly.var(table, node.name)
    if isinstance(node, _expr.Neg):
        return -_evaluate(node.operand, table)
    if isinstance(node, _expr.BinOp):
        left = _evaluate(node.left, table)
        if node.op == "^":
            exp = _evaluate(node.right, table)
            if not exp.is_constant() or exp.constant_term().denominator != 1:
                raise SceneError("exponents must be nonnegative integers")
            return left ** int(exp.constant_term())
        right = _evaluate(node.right, table)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        if node.op == "/":
            return left / right
    raise SceneError(f"unsupported construct in polynomial text: {node}")
