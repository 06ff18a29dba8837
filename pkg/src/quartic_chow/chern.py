"""Characteristic classes of formal bundles via Chern roots.

A :class:`RootSystemContext` adjoins groups of formal roots (degree 1) to a
base ring and records the elementary symmetric functions of each group as
base-ring classes.  A :class:`BundleSpec` is a list of Chern roots, each a
linear class in the context's extended ring, optionally paired with a
positive scaling weight for the fiberwise multiplicative-group action.
Symmetric expressions in the roots are reduced back to the base ring with
Gauss's leading-term algorithm.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Sequence

from .errors import ContextError, GradingError, StructuralError
from .poly import GradedPoly, Monomial, VarTable


@dataclass(frozen=True)
class RootGroup:
    """Formal roots ``names`` whose elementary symmetric functions are ``values``."""

    names: tuple[str, ...]
    values: tuple[GradedPoly, ...]


class RootSystemContext:
    """Base ring plus groups of formal Chern roots with declared symmetric values."""

    def __init__(self, base: VarTable, groups: Sequence[tuple[Sequence[str], Sequence[GradedPoly | int]]] = ()) -> None:
        self.base = base
        names: list[tuple[str, int]] = []
        built: list[RootGroup] = []
        for roots, values in groups:
            roots = tuple(roots)
            if len(values) != len(roots):
                raise StructuralError(f"group {roots} needs {len(roots)} elementary values, got {len(values)}")
            vals = []
            for k, v in enumerate(values, start=1):
                v = v.embed(base) if isinstance(v, GradedPoly) else GradedPoly.const(base, v)
                if v and (not v.is_homogeneous() or v.homogeneous_degree() != k):
                    raise GradingError(f"e_{k} of {roots} must be homogeneous of degree {k}: {v}")
                vals.append(v)
            built.append(RootGroup(roots, tuple(vals)))
            names.extend((r, 1) for r in roots)
        self.groups = tuple(built)
        self.table = base.extend(names) if names else base
        self._emono_cache: dict[tuple[int, tuple[int, ...]], dict] = {}

    # ---- building classes -------------------------------------------------
    def root(self, name: str) -> GradedPoly:
        return GradedPoly.var(self.table, name)

    def lift(self, p: GradedPoly) -> GradedPoly:
        return p.embed(self.table)

    def roots_of(self, group: int = 0) -> list[GradedPoly]:
        return [self.root(n) for n in self.groups[group].names]

    # ---- symmetric reduction ------------------------------------------------
    def _elementary(self, gi: int, k: int) -> dict[Monomial, int]:
        """e_k of group ``gi`` as a dict over the group's exponent vectors."""
        n = len(self.groups[gi].names)
        out: dict[Monomial, int] = {}
        from itertools import combinations

        for combo in combinations(range(n), k):
            out[tuple(1 if i in combo else 0 for i in range(n))] = 1
        return out

    def _emonomial(self, gi: int, powers: tuple[int, ...]) -> dict[Monomial, int]:
        """Expansion of Π e_k^{powers[k-1]} in the roots of group ``gi``."""
        key = (gi, powers)
        if key in self._emono_cache:
            return self._emono_cache[key]
        n = len(self.groups[gi].names)
        acc: dict[Monomial, int] = {(0,) * n: 1}
        for k, p in enumerate(powers, start=1):
            ek = self._elementary(gi, k)
            for _ in range(p):
                nxt: dict[Monomial, int] = {}
                for m1, c1 in acc.items():
                    for m2, c2 in ek.items():
                        m = tuple(a + b for a, b in zip(m1, m2))
                        nxt[m] = nxt.get(m, 0) + c1 * c2
                acc = {m: c for m, c in nxt.items() if c}
        self._emono_cache[key] = acc
        return acc

    def reduce(self, p: GradedPoly) -> GradedPoly:
        """Rewrite a polynomial symmetric in every root group as a base class."""
        if p.table != self.table:
            p = p.embed(self.table)
        positions = {n: i for i, n in enumerate(self.table.names)}
        cur = p
        for gi, group in enumerate(self.groups):
            idx = [positions[n] for n in group.names]
            others = [i for i in range(len(self.table)) if i not in idx]
            # split into root-exponent -> coefficient dict over the other variables
            split: dict[Monomial, dict[Monomial, Fraction]] = {}
            for mono, c in cur.items():
                rk = tuple(mono[i] for i in idx)
                ok = tuple(mono[i] for i in others)
                split.setdefault(rk, {})[ok] = split.get(rk, {}).get(ok, Fraction(0)) + c
            result: dict[Monomial, Fraction] = {}
            evals = group.values
            n = len(idx)
            # e-values expressed over the "others" coordinates
            other_table = VarTable(tuple(self.table.names[i] for i in others), tuple(self.table.degrees[i] for i in others))
            evals_o = [v.embed(self.table).restrict(other_table) for v in evals]
            epow_cache: dict[tuple[int, int], GradedPoly] = {}

            def epow(k: int, e: int) -> GradedPoly:
                if (k, e) not in epow_cache:
                    epow_cache[(k, e)] = evals_o[k] ** e
                return epow_cache[(k, e)]

            while split:
                lead = max(split)
                coeff = {m: c for m, c in split[lead].items() if c}
                if not coeff:
                    del split[lead]
                    continue
                if any(lead[i] < lead[i + 1] for i in range(n - 1)):
                    raise ContextError(f"expression is not symmetric in roots {group.names}")
                powers = tuple(lead[i] - (lead[i + 1] if i + 1 < n else 0) for i in range(n))
                # subtract coeff * Π e_k^{powers}
                for m, c in self._emonomial(gi, powers).items():
                    bucket = split.setdefault(m, {})
                    for om, oc in coeff.items():
                        v = bucket.get(om, Fraction(0)) - c * oc
                        if v:
                            bucket[om] = v
                        else:
                            bucket.pop(om, None)
                    if not bucket:
                        del split[m]
                # add coeff * Π value_k^{powers} to the result
                val = GradedPoly(other_table, coeff)
                for k, e in enumerate(powers):
                    if e:
                        val = val * epow(k, e)
                for om, oc in val.items():
                    v = result.get(om, Fraction(0)) + oc
                    if v:
                        result[om] = v
                    else:
                        result.pop(om, None)
            full: dict[Monomial, Fraction] = {}
            for om, oc in result.items():
                mono = [0] * len(self.table)
                for i, e in zip(others, om):
                    mono[i] = e
                full[tuple(mono)] = oc
            cur = GradedPoly(self.table, full)
        return cur.restrict(self.base)


@dataclass(frozen=True)
class BundleSpec:
    """A formal bundle: Chern roots (classes in ``ctx.table``) with scaling weights."""

    ctx: RootSystemContext
    roots: tuple[GradedPoly, ...]
    weights: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        roots = tuple(r.embed(self.ctx.table) if isinstance(r, GradedPoly) else GradedPoly.const(self.ctx.table, r) for r in self.roots)
        object.__setattr__(self, "roots", roots)
        if not self.weights:
            object.__setattr__(self, "weights", (1,) * len(roots))
        if len(self.weights) != len(self.roots):
            raise StructuralError("one scaling weight per root is required")
        for r in roots:
            if r and (not r.is_homogeneous() or r.homogeneous_degree() != 1):
                raise GradingError(f"Chern roots must be linear classes: {r}")

    @property
    def rank(self) -> int:
        return len(self.roots)

    @classmethod
    def from_group(cls, ctx: RootSystemContext, group: int = 0) -> "BundleSpec":
        return cls(ctx, tuple(ctx.roots_of(group)))

    @classmethod
    def lines(cls, ctx: RootSystemContext, classes: Iterable[GradedPoly], weights: Sequence[int] = ()) -> "BundleSpec":
        return cls(ctx, tuple(classes), tuple(weights))

    def with_weights(self, weights: Sequence[int] | int) -> "BundleSpec":
        if isinstance(weights, int):
            weights = (weights,) * self.rank
        return BundleSpec(self.ctx, self.roots, tuple(weights))

    def dual(self) -> "BundleSpec":
        return BundleSpec(self.ctx, tuple(-r for r in self.roots), self.weights)

    def __add__(self, other: "BundleSpec") -> "BundleSpec":
        if other.ctx is not self.ctx:
            raise StructuralError("direct sum of bundles from different contexts")
        return BundleSpec(self.ctx, self.roots + other.roots, self.weights + other.weights)

    def tensor(self, other: "BundleSpec") -> "BundleSpec":
        roots = tuple(a + b for a in self.roots for b in other.roots)
        return BundleSpec(self.ctx, roots)


def sym_power(E: BundleSpec, d: int) -> BundleSpec:
    """Roots of Sym^d E: all sums of ``d`` roots taken as a multiset."""
    if d < 0:
        raise StructuralError("symmetric power degree must be nonnegative")
    roots = []
    for combo in combinations_with_replacement(range(E.rank), d):
        r = GradedPoly.zero(E.ctx.table)
        for i in combo:
            r = r + E.roots[i]
        roots.append(r)
    return BundleSpec(E.ctx, tuple(roots))


def twist(E: BundleSpec, L: GradedPoly) -> BundleSpec:
    """E ⊗ (line bundle with first Chern class ``L``)."""
    L = L.embed(E.ctx.table)
    if L and (not L.is_homogeneous() or L.homogeneous_degree() != 1):
        raise GradingError(f"twisting class must be linear: {L}")
    return BundleSpec(E.ctx, tuple(r + L for r in E.roots), E.weights)


def _linear_product(factors: Sequence[GradedPoly], top: int | None) -> GradedPoly:
    table = factors[0].table if factors else None
    acc = GradedPoly.one(table) if table else None
    for f in factors:
        acc = acc * f if top is None else acc.mul_truncated(f, top)
    return acc


def total_chern(E: BundleSpec, top: int | None = None) -> GradedPoly:
    """c(E) = Π(1 + root), reduced to the base ring (optionally truncated)."""
    if E.rank == 0:
        return GradedPoly.one(E.ctx.base)
    one = GradedPoly.one(E.ctx.table)
    prod = _linear_product([one + r for r in E.roots], top)
    return E.ctx.reduce(prod)


def chern_class(E: BundleSpec, k: int) -> GradedPoly:
    return total_chern(E, top=k).select_degree(k)


def top_chern(E: BundleSpec) -> GradedPoly:
    return chern_class(E, E.rank)


def series_inverse(p: GradedPoly, top: int) -> GradedPoly:
    """Inverse of ``p`` (constant term nonzero) as a power series truncated at degree ``top``."""
    c0 = p.constant_term()
    if not c0:
        raise StructuralError(f"cannot invert a series with zero constant term: {p}")
    x = p.truncate_above(top) / c0 - 1  # p/c0 = 1 + x
    result = GradedPoly.one(p.table)
    power = GradedPoly.one(p.table)
    for _ in range(top):
        power = (-power).mul_truncated(x, top)
        if not power:
            break
        result = result + power
    return result / c0


def segre(E: BundleSpec, top: int) -> GradedPoly:
    """s(E) = 1/c(E) up to degree ``top``."""
    return series_inverse(total_chern(E, top=top), top)


def weighted_chern_poly(E: BundleSpec, tvar: str = "t") -> GradedPoly:
    """P_E(t) = Π (w_i t + root_i) over the base ring extended by ``t`` (degree 1)."""
    ctx = E.ctx
    base = ctx.base if tvar in ctx.base else ctx.base.extend([(tvar, 1)])
    ext = RootSystemContext(base, [(g.names, list(g.values)) for g in ctx.groups])
    t = GradedPoly.var(ext.table, tvar)
    prod = GradedPoly.one(ext.table)
    for r, w in zip(E.roots, E.weights):
        prod = prod * (t.scale(w) + r.embed(ext.table))
    return ext.reduce(prod)


def weighted_segre(E: BundleSpec, top: int) -> GradedPoly:
    """s^wt(E) = 1/P_E(1) as a series truncated at degree ``top``."""
    one = GradedPoly.one(E.ctx.table)
    prod = _linear_product([one.scale(w) + r for r, w in zip(E.roots, E.weights)], top)
    return series_inverse(E.ctx.reduce(prod), top)


def normalized_dual(E: BundleSpec) -> BundleSpec:
    """E* ⊗ (det E)^{1/r}: roots ``-r_i + (Σ r_j)/rank``."""
    mean = GradedPoly.zero(E.ctx.table)
    for r in E.roots:
        mean = mean + r
    mean = mean / E.rank
    return BundleSpec(E.ctx, tuple(mean - r for r in E.roots))


def chern_from_total(total: GradedPoly, rank: int) -> tuple[GradedPoly, ...]:
    """Split a total Chern class into its graded pieces ``c_1 .. c_rank``."""
    return tuple(total.select_degree(k) for k in range(1, rank + 1))


def normalized_dual_chern(total: GradedPoly, rank: int) -> GradedPoly:
    """Total Chern class of E* ⊗ (det E)^{1/rank} from the total class of E.

    Works on the Chern classes directly by adjoining ``rank`` formal roots
    whose elementary functions are the given classes.
    """
    base = total.table
    names = [f"_r{i}" for i in range(rank)]
    ctx = RootSystemContext(base, [(names, list(chern_from_total(total, rank)))])
    E = BundleSpec.from_group(ctx)
    return total_chern(normalized_dual(E))


def ses_residue(total: GradedPoly, sub: GradedPoly, quotient: GradedPoly, top: int) -> GradedPoly:
    """c(total) - c(sub)·c(quotient) up to degree ``top`` (zero iff Whitney holds)."""
    return total.truncate_above(top) - sub.mul_truncated(quotient, top)


def divisor_structure_sheaf_chern(D: GradedPoly, top: int) -> GradedPoly:
    """c(O_D) = 1/c(O(-D)) for a divisor class ``D``."""
    return series_inverse(GradedPoly.one(D.table) - D, top)
