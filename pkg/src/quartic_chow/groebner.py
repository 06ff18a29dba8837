"""Gröbner bases, normal forms, elimination and Hilbert series.

All ideals are homogeneous for the weighted grading of their VarTable.
Buchberger's algorithm runs with the Gebauer–Möller pair criteria (the
product criterion and the chain criterion) and the normal selection strategy
(lowest weighted lcm degree first), which for homogeneous input computes the
basis degree by degree.
"""

from __future__ import annotations

import hashlib
import os
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .errors import ComputationError, GradingError, StructuralError
from .poly import GradedPoly, Monomial, VarTable
from .series import RatSeries

CACHE_ENV = "QUARTIC_CHOW_CACHE"
DEFAULT_PAIR_BUDGET = 500_000


# ---------------------------------------------------------------------------
# monomial orders
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class MonomialOrder:
    """Weighted grevlex, or a block order that puts ``eliminate`` first.

    The block order compares the eliminated block by weighted grevlex first
    and breaks ties by weighted grevlex on the remaining variables, so any
    monomial involving an eliminated variable beats every monomial free of
    them within a fixed total degree.
    """

    table: VarTable
    eliminate: tuple[str, ...] = ()

    @property
    def kind(self) -> str:
        return "block" if self.eliminate else "grevlex"

    def key_function(self) -> Callable[[Monomial], tuple]:
        degs = self.table.degrees
        if not self.eliminate:

            def key(m: Monomial) -> tuple:
                return (sum(e * d for e, d in zip(m, degs)), tuple(-e for e in reversed(m)))

            return key
        block = [self.table.index(n) for n in self.eliminate]
        rest = [i for i in range(len(self.table)) if i not in block]

        def bkey(m: Monomial) -> tuple:
            eb = [m[i] for i in block]
            er = [m[i] for i in rest]
            return (
                sum(m[i] * degs[i] for i in block),
                tuple(-e for e in reversed(eb)),
                sum(m[i] * degs[i] for i in rest),
                tuple(-e for e in reversed(er)),
            )

        return bkey

    def describe(self) -> str:
        return f"{self.kind}[{','.join(self.eliminate)}]" if self.eliminate else "grevlex"


# ---------------------------------------------------------------------------
# ideals
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class IdealBasis:
    """A list of homogeneous generators over one table, with a monomial order."""

    table: VarTable
    generators: tuple[GradedPoly, ...]
    order: MonomialOrder

    @classmethod
    def of(cls, gens: Iterable[GradedPoly], table: VarTable | None = None, eliminate: Sequence[str] = ()) -> "IdealBasis":
        gens = list(gens)
        if table is None:
            if not gens:
                raise StructuralError("an empty ideal needs an explicit table")
            table = gens[0].table
        out = []
        for g in gens:
            if g.table != table:
                g = g.embed(table)
            if not g.is_homogeneous():
                raise GradingError(f"ideal generator is not homogeneous: {g}")
            if g:
                out.append(g)
        return cls(table, tuple(out), MonomialOrder(table, tuple(eliminate)))

    def with_order(self, eliminate: Sequence[str] = ()) -> "IdealBasis":
        return IdealBasis(self.table, self.generators, MonomialOrder(self.table, tuple(eliminate)))

    def __add__(self, other: "IdealBasis | Iterable[GradedPoly]") -> "IdealBasis":
        more = other.generators if isinstance(other, IdealBasis) else tuple(other)
        return IdealBasis.of(self.generators + tuple(more), self.table, self.order.eliminate)

    def map(self, fn: Callable[[GradedPoly], GradedPoly], table: VarTable | None = None) -> "IdealBasis":
        return IdealBasis.of([fn(g) for g in self.generators], table or self.table)

    def content_hash(self) -> str:
        h = hashlib.sha256()
        h.update(str(self.table).encode())
        h.update(self.order.describe().encode())
        for g in sorted(str(g.monic()) for g in self.generators):
            h.update(b"\n" + g.encode())
        return h.hexdigest()


# ---------------------------------------------------------------------------
# Buchberger internals on raw dictionaries
# ---------------------------------------------------------------------------
Raw = dict  # Monomial -> Fraction


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def _quot(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def _coprime(a: Monomial, b: Monomial) -> bool:
    return all(not (x and y) for x, y in zip(a, b))


class _Poly:
    """Mutable working polynomial with a cached leading monomial."""

    __slots__ = ("terms", "lm", "lc")

    def __init__(self, terms: Raw, key: Callable[[Monomial], tuple]) -> None:
        self.terms = terms
        if terms:
            self.lm = max(terms, key=key)
            self.lc = terms[self.lm]
        else:
            self.lm = None
            self.lc = Fraction(0)


def _make_monic(terms: Raw, key: Callable[[Monomial], tuple]) -> _Poly:
    p = _Poly(terms, key)
    if p.lc != 1 and p.terms:
        inv = 1 / p.lc
        p.terms = {m: c * inv for m, c in p.terms.items()}
        p.lc = Fraction(1)
    return p


def _find_divisor(m: Monomial, basis: Sequence[_Poly]) -> _Poly | None:
    for g in basis:
        if _divides(g.lm, m):
            return g
    return None


def _reduce(terms: Raw, basis: Sequence[_Poly], key: Callable[[Monomial], tuple], *, full: bool = True) -> Raw:
    """Remainder of ``terms`` on division by ``basis`` (monic leading terms)."""
    p = dict(terms)
    rem: Raw = {}
    while p:
        m = max(p, key=key)
        c = p[m]
        g = _find_divisor(m, basis)
        if g is None:
            if not full:
                rem.update(p)
                return rem
            rem[m] = c
            del p[m]
            continue
        q = _quot(m, g.lm)
        for gm, gc in g.terms.items():
            t = tuple(a + b for a, b in zip(q, gm))
            v = p.get(t, 0) - c * gc
            if v:
                p[t] = v
            else:
                p.pop(t, None)
    return rem


def _spoly(f: _Poly, g: _Poly) -> Raw:
    lcm = _lcm(f.lm, g.lm)
    qf, qg = _quot(lcm, f.lm), _quot(lcm, g.lm)
    out: Raw = {}
    for m, c in f.terms.items():
        t = tuple(a + b for a, b in zip(qf, m))
        out[t] = out.get(t, 0) + c
    for m, c in g.terms.items():
        t = tuple(a + b for a, b in zip(qg, m))
        v = out.get(t, 0) - c
        if v:
            out[t] = v
        else:
            out.pop(t, None)
    return {m: c for m, c in out.items() if c}


def _buchberger_raw(gens: list[Raw], table: VarTable, key: Callable[[Monomial], tuple], budget: int) -> list[_Poly]:
    degs = table.degrees

    def wdeg(m: Monomial) -> int:
        return sum(e * d for e, d in zip(m, degs))

    polys: list[_Poly] = []
    active: list[int] = []
    pairs: list[tuple[int, int, Monomial]] = []

    def update(h_idx: int) -> None:
        nonlocal active, pairs
        h = polys[h_idx]
        cands = [(g, _lcm(h.lm, polys[g].lm)) for g in active]
        kept: list[tuple[int, Monomial]] = []
        while cands:
            g, l = cands.pop(0)
            if _coprime(h.lm, polys[g].lm) or (
                not any(_divides(l2, l) for _, l2 in cands) and not any(_divides(l2, l) for _, l2 in kept)
            ):
                kept.append((g, l))
        new_pairs = [(g, h_idx, l) for g, l in kept if not _coprime(h.lm, polys[g].lm)]
        survivors = []
        for a, b, l in pairs:
            if _divides(h.lm, l) and _lcm(polys[a].lm, h.lm) != l and _lcm(polys[b].lm, h.lm) != l:
                continue
            survivors.append((a, b, l))
        pairs = survivors + new_pairs
        active = [g for g in active if not _divides(h.lm, polys[g].lm)] + [h_idx]

    # process input generators in increasing degree, reducing each first
    for raw in sorted(gens, key=lambda t: wdeg(max(t, key=key))):
        basis = [polys[i] for i in active]
        red = _reduce(raw, basis, key)
        if red:
            polys.append(_make_monic(red, key))
            update(len(polys) - 1)

    processed = 0
    while pairs:
        pairs.sort(key=lambda p: (wdeg(p[2]), key(p[2])))
        a, b, _ = pairs.pop(0)
        processed += 1
        if processed > budget:
            raise ComputationError(f"Buchberger pair budget of {budget} exhausted", step=processed)
        s = _spoly(polys[a], polys[b])
        if not s:
            continue
        basis = [polys[i] for i in active]
        red = _reduce(s, basis, key)
        if red:
            polys.append(_make_monic(red, key))
            update(len(polys) - 1)

    # minimal + reduced basis
    basis = [polys[i] for i in active]
    basis = [g for g in basis if not any(h is not g and _divides(h.lm, g.lm) for h in basis)]
    basis.sort(key=lambda g: key(g.lm))
    reduced: list[_Poly] = []
    for i, g in enumerate(basis):
        others = basis[:i] + basis[i + 1 :]
        tail = {m: c for m, c in g.terms.items() if m != g.lm}
        tail = _reduce(tail, others, key)
        tail[g.lm] = Fraction(1)
        reduced.append(_Poly(tail, key))
    return reduced


# ---------------------------------------------------------------------------
# public Gröbner basis type
# ---------------------------------------------------------------------------
class GroebnerBasis:
    """Reduced monic Gröbner basis of an :class:`IdealBasis`."""

    def __init__(self, ideal: IdealBasis, polys: Sequence[GradedPoly]) -> None:
        self.ideal = ideal
        self.table = ideal.table
        self.order = ideal.order
        self._key = ideal.order.key_function()
        self._work = [_Poly(dict(p.terms), self._key) for p in polys]
        self._work.sort(key=lambda g: self._key(g.lm))
        self.polys: tuple[GradedPoly, ...] = tuple(GradedPoly(self.table, g.terms) for g in self._work)

    @property
    def leading_monomials(self) -> list[Monomial]:
        return [g.lm for g in self._work]

    def normal_form(self, p: GradedPoly) -> GradedPoly:
        if p.table != self.table:
            p = p.embed(self.table)
        return GradedPoly(self.table, _reduce(dict(p.terms), self._work, self._key), _trusted=True)

    def contains(self, p: GradedPoly) -> bool:
        return self.normal_form(p).is_zero()

    def is_unit_ideal(self) -> bool:
        return any(not any(g.lm) for g in self._work)

    def serialize(self) -> str:
        lines = [f"table {self.table}", f"order {self.order.describe()}"]
        lines += [str(p) for p in self.polys]
        return "\n".join(lines) + "\n"

    def __len__(self) -> int:
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)


class BasisCache:
    """On-disk store of reduced bases keyed by the ideal's content hash.

    Writes go to a temporary file renamed into place, so concurrent writers
    never expose partial entries (last writer wins with identical content).
    """

    def __init__(self, directory: str | os.PathLike[str] | None) -> None:
        self.directory = Path(directory) if directory else None

    @classmethod
    def from_env(cls, default: str | None = None) -> "BasisCache":
        return cls(os.environ.get(CACHE_ENV, default))

    def _path(self, ideal: IdealBasis) -> Path | None:
        if self.directory is None:
            return None
        return self.directory / f"{ideal.content_hash()}.gb"

    def load(self, ideal: IdealBasis) -> GroebnerBasis | None:
        path = self._path(ideal)
        if path is None or not path.exists():
            return None
        lines = path.read_text(encoding="utf-8").splitlines()
        if len(lines) < 2 or lines[0] != f"table {ideal.table}" or lines[1] != f"order {ideal.order.describe()}":
            return None
        polys = [GradedPoly.parse(line, ideal.table) for line in lines[2:] if line.strip()]
        return GroebnerBasis(ideal, polys)

    def store(self, gb: GroebnerBasis) -> None:
        path = self._path(gb.ideal)
        if path is None:
            return
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(gb.serialize())
        os.replace(tmp, path)

    def entries(self) -> list[Path]:
        if self.directory is None or not self.directory.exists():
            return []
        return sorted(self.directory.glob("*.gb"))

    def clear(self) -> int:
        n = 0
        for p in self.entries():
            p.unlink()
            n += 1
        return n


_NO_CACHE = BasisCache(None)
_memo: dict[str, GroebnerBasis] = {}


def buchberger(ideal: IdealBasis, *, cache: BasisCache | None = None, budget: int = DEFAULT_PAIR_BUDGET) -> GroebnerBasis:
    """Reduced Gröbner basis of ``ideal`` for its monomial order."""
    digest = ideal.content_hash()
    if digest in _memo:
        return GroebnerBasis(ideal, _memo[digest].polys)
    cache = cache or _NO_CACHE
    gb = cache.load(ideal)
    if gb is None:
        key = ideal.order.key_function()
        raw = _buchberger_raw([dict(g.terms) for g in ideal.generators], ideal.table, key, budget)
        gb = GroebnerBasis(ideal, [GradedPoly(ideal.table, p.terms) for p in raw])
        cache.store(gb)
    _memo[digest] = gb
    return gb


def normal_form(p: GradedPoly, gb: GroebnerBasis) -> GradedPoly:
    return gb.normal_form(p)


def ideal_contains(ideal: IdealBasis, p: GradedPoly, *, cache: BasisCache | None = None) -> bool:
    return buchberger(ideal, cache=cache).contains(p)


def ideal_equal(a: IdealBasis, b: IdealBasis, *, cache: BasisCache | None = None) -> bool:
    """True iff each generator of either ideal lies in the other."""
    if a.table != b.table:
        raise StructuralError("ideal_equal needs both ideals over the same table")
    ga, gb_ = buchberger(a.with_order(), cache=cache), buchberger(b.with_order(), cache=cache)
    return all(gb_.contains(g) for g in a.generators) and all(ga.contains(g) for g in b.generators)


def eliminate(ideal: IdealBasis, drop: Sequence[str], *, cache: BasisCache | None = None) -> IdealBasis:
    """Generators of ``ideal ∩ Q[remaining variables]`` over the smaller table."""
    for name in drop:
        ideal.table.index(name)
    gb = buchberger(ideal.with_order(tuple(drop)), cache=cache)
    idx = [ideal.table.index(n) for n in drop]
    small = ideal.table.without(drop)
    kept = [p for p in gb.polys if all(all(m[i] == 0 for i in idx) for m in p.terms)]
    return IdealBasis.of([p.restrict(small) for p in kept], small)


# ---------------------------------------------------------------------------
# Hilbert series
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class HilbertSeries:
    """``numerator(t) / Π (1 - t^{d_i})`` for a graded quotient ring."""

    numerator: tuple[int, ...]
    denominator_degrees: tuple[int, ...]
    rational: RatSeries = field(compare=False)

    @classmethod
    def build(cls, numerator: Sequence[int], degrees: Sequence[int]) -> "HilbertSeries":
        num = list(numerator)
        while num and num[-1] == 0:
            num.pop()
        return cls(tuple(num), tuple(degrees), RatSeries.product_denominator(num, degrees))

    def expand(self, order: int) -> list[int]:
        return self.rational.expand_int(order)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, HilbertSeries):
            return self.rational == other.rational
        if isinstance(other, RatSeries):
            return self.rational == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.rational)

    def __str__(self) -> str:
        return str(self.rational)


def _monomial_numerator(gens: list[Monomial], degs: Sequence[int], memo: dict) -> dict[int, int]:
    """Numerator of the Hilbert series of ``Q[x]/(gens)`` by pivot recursion."""
    gens = _minimalize(gens)
    key = tuple(sorted(gens))
    if key in memo:
        return memo[key]

    def deg(m: Monomial) -> int:
        return sum(e * d for e, d in zip(m, degs))

    # base case: pairwise coprime generators (includes pure powers)
    if all(_coprime(a, b) for i, a in enumerate(gens) for b in gens[i + 1 :]):
        poly = {0: 1}
        for m in gens:
            d = deg(m)
            nxt: dict[int, int] = {}
            for k, c in poly.items():
                nxt[k] = nxt.get(k, 0) + c
                nxt[k + d] = nxt.get(k + d, 0) - c
            poly = {k: c for k, c in nxt.items() if c}
        memo[key] = poly
        return poly
    # pivot on the variable occurring in the most non-pure generators
    counts = [0] * len(degs)
    for m in gens:
        if sum(1 for e in m if e) > 1:
            for i, e in enumerate(m):
                if e:
                    counts[i] += 1
    var = max(range(len(degs)), key=lambda i: counts[i])
    exps = sorted(m[var] for m in gens if m[var])
    e = exps[(len(exps) - 1) // 2]
    pivot = tuple(e if i == var else 0 for i in range(len(degs)))
    left = gens + [pivot]
    right = [tuple(max(x - y, 0) for x, y in zip(m, pivot)) for m in gens]
    a = _monomial_numerator(left, degs, memo)
    b = _monomial_numerator(right, degs, memo)
    d = deg(pivot)
    out = dict(a)
    for k, c in b.items():
        out[k + d] = out.get(k + d, 0) + c
    out = {k: c for k, c in out.items() if c}
    memo[key] = out
    return out


def _minimalize(gens: list[Monomial]) -> list[Monomial]:
    out: list[Monomial] = []
    for m in sorted(set(gens), key=sum):
        if not any(_divides(g, m) for g in out):
            out.append(m)
    return out


def monomial_hilbert_series(gens: Sequence[Monomial], degrees: Sequence[int]) -> HilbertSeries:
    num = _monomial_numerator(list(gens), degrees, {})
    top = max(num, default=0)
    return HilbertSeries.build([num.get(k, 0) for k in range(top + 1)], degrees)


def hilbert_series(ideal: IdealBasis, *, cache: BasisCache | None = None) -> HilbertSeries:
    """Hilbert series of ``Q[vars]/ideal`` via the leading-term ideal."""
    gb = buchberger(ideal, cache=cache)
    return monomial_hilbert_series(gb.leading_monomials, ideal.table.degrees)


# ---------------------------------------------------------------------------
# independent route: degreewise linear algebra
# ---------------------------------------------------------------------------
def monomials_of_degree(table: VarTable, d: int) -> list[Monomial]:
    """All exponent vectors of weighted degree ``d``."""
    out: list[Monomial] = []
    n = len(table)
    degs = table.degrees

    def rec(i: int, left: int, acc: list[int]) -> None:
        if i == n - 1:
            if left % degs[i] == 0:
                out.append(tuple(acc + [left // degs[i]]))
            return
        for e in range(left // degs[i] + 1):
            rec(i + 1, left - e * degs[i], acc + [e])

    if n == 0:
        return [()] if d == 0 else []
    rec(0, d, [])
    return out


def _rank(rows: list[dict[Monomial, Fraction]]) -> int:
    """Exact rank of sparse rational rows by Gaussian elimination."""
    pivots: dict[Monomial, dict[Monomial, Fraction]] = {}
    for row in rows:
        r = dict(row)
        while r:
            col = max(r)
            if col not in pivots:
                inv = 1 / r[col]
                pivots[col] = {m: c * inv for m, c in r.items()}
                break
            c = r[col]
            for m, v in pivots[col].items():
                nv = r.get(m, 0) - c * v
                if nv:
                    r[m] = nv
                else:
                    r.pop(m, None)
    return len(pivots)


def graded_dimensions(ideal: IdealBasis, top: int) -> list[int]:
    """``dim_Q (Q[vars]/ideal)_k`` for ``k = 0..top`` by row reduction of generator multiples."""
    table = ideal.table
    dims = []
    for k in range(top + 1):
        monos = monomials_of_degree(table, k)
        rows = []
        for g in ideal.generators:
            dg = g.homogeneous_degree()
            if dg > k:
                continue
            for m in monomials_of_degree(table, k - dg):
                rows.append({tuple(a + b for a, b in zip(m, gm)): c for gm, c in g.terms.items()})
        dims.append(len(monos) - _rank(rows))
    return dims
