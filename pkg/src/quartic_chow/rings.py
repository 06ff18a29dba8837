"""Ring presentations, projective-bundle pushforwards and flag-variety tools.

A :class:`ProjectiveBundleLayer` records a hyperplane variable ``ζ`` over a
base, together with the total Chern class of the defining rank-``r`` bundle
``E``.  The layer relation is ``ζ^r + c_1 ζ^{r-1} + … + c_r`` and the
pushforward is ``π_*(ζ^{r-1+k}) = s_k(E)`` with ``s = 1/c``.  The ``dual``
convention flips every sign ``c_i ↦ (-1)^i c_i`` (the other common
normalization of the tautological class); calibration tests pick one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .chern import series_inverse
from .errors import ComputationError, StructuralError
from .groebner import BasisCache, GroebnerBasis, IdealBasis, buchberger
from .poly import GradedPoly, VarTable

DIRECT = "direct"
DUAL = "dual"


@dataclass(frozen=True)
class ProjectiveBundleLayer:
    """Projectivization of a rank-``rank`` bundle with hyperplane class ``var``."""

    var: str
    rank: int
    chern_total: GradedPoly
    convention: str = DIRECT

    def __post_init__(self) -> None:
        if self.convention not in (DIRECT, DUAL):
            raise StructuralError(f"unknown projectivization convention {self.convention!r}")
        if self.chern_total.constant_term() != 1:
            raise StructuralError("total Chern class must have constant term 1")
        if self.var in self.chern_total.variables():
            raise StructuralError("the defining bundle cannot involve the layer's own variable")

    def oriented_total(self) -> GradedPoly:
        c = self.chern_total
        if self.convention == DIRECT:
            return c
        out = GradedPoly.zero(c.table)
        for d, part in c.homogeneous_components().items():
            out = out + (part if d % 2 == 0 else -part)
        return out

    def relation(self, table: VarTable) -> GradedPoly:
        """``ζ^r + c_1 ζ^{r-1} + … + c_r`` over ``table``."""
        z = GradedPoly.var(table, self.var)
        c = self.oriented_total().embed(table)
        out = GradedPoly.zero(table)
        for i in range(self.rank + 1):
            out = out + c.select_degree(i) * z ** (self.rank - i)
        return out

    def segre(self, top: int) -> GradedPoly:
        return series_inverse(self.oriented_total(), top)


class PushforwardTable:
    """``ζ^{r-1+k} ↦ s_k`` for one layer, with Segre classes grown on demand."""

    def __init__(self, layer: ProjectiveBundleLayer) -> None:
        self.layer = layer
        self._segre: GradedPoly | None = None
        self._top = -1

    def segre_class(self, k: int) -> GradedPoly:
        if k > self._top:
            self._top = max(k, 2 * self._top, 8)
            self._segre = self.layer.segre(self._top)
        assert self._segre is not None
        return self._segre.select_degree(k)

    def image_of_power(self, n: int) -> GradedPoly:
        k = n - (self.layer.rank - 1)
        if k < 0:
            return GradedPoly.zero(self.layer.chern_total.table)
        return self.segre_class(k)

    def entries(self, upto: int) -> list[tuple[int, GradedPoly]]:
        """Table rows ``(n, π_*(ζ^n))`` for the report appendix."""
        return [(n, self.image_of_power(n)) for n in range(upto + 1)]


_tables: dict[ProjectiveBundleLayer, PushforwardTable] = {}


def pushforward_table(layer: ProjectiveBundleLayer) -> PushforwardTable:
    if layer not in _tables:
        _tables[layer] = PushforwardTable(layer)
    return _tables[layer]


def layer_pushforward(x: GradedPoly, layer: ProjectiveBundleLayer) -> GradedPoly:
    """π_* along one layer; every other variable is a coefficient."""
    table = x.table
    target = table.without([layer.var])
    vi = table.index(layer.var)
    pt = pushforward_table(layer)
    out = GradedPoly.zero(target)
    by_power: dict[int, dict] = {}
    for mono, c in x.items():
        rest = mono[:vi] + mono[vi + 1 :]
        by_power.setdefault(mono[vi], {})[rest] = c
    for n, coeffs in sorted(by_power.items()):
        img = pt.image_of_power(n)
        if not img:
            continue
        out = out + GradedPoly(target, coeffs) * img.embed(target)
    return out


def tower_pushforward(x: GradedPoly, layers: Sequence[ProjectiveBundleLayer]) -> GradedPoly:
    """Iterated pushforward, top layer first (``layers`` listed top-down)."""
    for layer in layers:
        x = layer_pushforward(x, layer)
    return x


def pullback_embed(x: GradedPoly, table: VarTable) -> GradedPoly:
    """π^*: view a base class in a table with extra fiber variables."""
    return x.embed(table)


# ---------------------------------------------------------------------------
# ring presentations
# ---------------------------------------------------------------------------
@dataclass
class RingPresentation:
    """Q[vars]/(relations); optionally tagged with its projective-bundle tower."""

    table: VarTable
    relations: tuple[GradedPoly, ...]
    tower: tuple[ProjectiveBundleLayer, ...] = ()
    name: str = ""
    _gb: GroebnerBasis | None = field(default=None, repr=False)

    @classmethod
    def from_tower(cls, table: VarTable, layers: Sequence[ProjectiveBundleLayer], extra: Sequence[GradedPoly] = (), name: str = "") -> "RingPresentation":
        rels = [layer.relation(table) for layer in layers] + [r.embed(table) for r in extra]
        return cls(table, tuple(rels), tuple(layers), name)

    def ideal(self) -> IdealBasis:
        return IdealBasis.of(self.relations, self.table)

    def groebner(self, cache: BasisCache | None = None) -> GroebnerBasis:
        if self._gb is None:
            self._gb = buchberger(self.ideal(), cache=cache)
        return self._gb

    def reduce(self, p: GradedPoly) -> GradedPoly:
        return self.groebner().normal_form(p.embed(self.table))

    def check_tower(self) -> None:
        for layer in self.tower:
            rel = layer.relation(self.table)
            vi = self.table.index(layer.var)
            top = [m for m in rel.terms if m[vi] == layer.rank]
            if len(top) != 1 or rel.coefficient(top[0]) != 1:
                raise StructuralError(f"layer relation for {layer.var} is not monic of degree {layer.rank}")


# ---------------------------------------------------------------------------
# triangular pushforward solver
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class SolvedPushforward:
    """m_*(x) = Σ_j α_j H^{D-j} together with the solve/verify record."""

    value: GradedPoly
    alphas: tuple[GradedPoly, ...]
    codim_degree: int
    verified_extra: int


def solve_pushforward(
    x: GradedPoly,
    pullback: GradedPoly,
    source_push: Callable[[GradedPoly], GradedPoly],
    target: ProjectiveBundleLayer,
    target_dim: int,
    out_degree: int,
    *,
    extra: int = 5,
) -> SolvedPushforward:
    """Determine m_*(x) in A*(P(E)) from integrals against powers of the hyperplane.

    ``pullback`` is m^*H in the source ring, ``source_push`` integrates source
    classes down to the common base, ``target`` is the projective-bundle layer
    of the target (fiber dimension ``target_dim``) and ``out_degree`` is the
    degree D of m_*(x).  For each k the identity
    ``Σ_j α_j s_{k-j}(E) = source_push(x · (m^*H)^{target_dim - D + k})``
    is triangular because s_0 = 1; k = 0..D solve for the α_j and ``extra``
    further values of k are verified.
    """
    pt = pushforward_table(target)
    alphas: list[GradedPoly] = []
    base_table = target.chern_total.table
    D = out_degree
    if target_dim - D < 0:
        raise ComputationError("pushforward degree exceeds the target dimension")
    rhs_power = pullback ** (target_dim - D)
    for k in range(D + 1 + extra):
        rhs = source_push(x * rhs_power)
        if rhs.table != base_table:
            rhs = rhs.restrict(base_table) if base_table.is_subtable_of(rhs.table) else rhs.embed(base_table)
        acc = GradedPoly.zero(base_table)
        for j, a in enumerate(alphas):
            acc = acc + a * pt.segre_class(k - j)
        if k <= D:
            alphas.append(rhs - acc)
        else:
            residue = rhs - acc
            if residue:
                raise ComputationError(f"pushforward system inconsistent at k={k}", step=k, residue=residue)
        rhs_power = rhs_power * pullback
    out_table = base_table.extend([(target.var, 1)], front=True)
    H = GradedPoly.var(out_table, target.var)
    value = GradedPoly.zero(out_table)
    for j, a in enumerate(alphas):
        value = value + a.embed(out_table) * H ** (D - j)
    return SolvedPushforward(value, tuple(alphas), D, extra)


# ---------------------------------------------------------------------------
# flag variety: diagonal and involution trace
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class FlagVariety:
    """Two-layer tower ``Fl → PV → BG`` with hyperplane variables ``zeta``, ``xi``."""

    table: VarTable
    zeta_layer: ProjectiveBundleLayer
    xi_layer: ProjectiveBundleLayer

    @property
    def zeta(self) -> str:
        return self.zeta_layer.var

    @property
    def xi(self) -> str:
        return self.xi_layer.var

    def relations(self, table: VarTable | None = None) -> list[GradedPoly]:
        table = table or self.table
        return [self.zeta_layer.relation(table), self.xi_layer.relation(table)]

    def presentation(self) -> RingPresentation:
        return RingPresentation.from_tower(self.table, [self.xi_layer, self.zeta_layer], name="Fl")

    def basis(self) -> list[tuple[int, int]]:
        """Exponent pairs (i, j) of the monomial basis ζ^i ξ^j over the base."""
        return [(i, j) for i in range(self.zeta_layer.rank) for j in range(self.xi_layer.rank)]

    def dimension(self) -> int:
        return (self.zeta_layer.rank - 1) + (self.xi_layer.rank - 1)

    def pushforward(self, x: GradedPoly) -> GradedPoly:
        """Integrate out ξ then ζ; other variables are coefficients."""
        return layer_pushforward(layer_pushforward(x, self.xi_layer), self.zeta_layer)

    def monomial(self, i: int, j: int, table: VarTable | None = None) -> GradedPoly:
        table = table or self.table
        return GradedPoly.var(table, self.zeta) ** i * GradedPoly.var(table, self.xi) ** j

    def reduce(self, x: GradedPoly) -> GradedPoly:
        """Normal form modulo the flag relations (in x's own table)."""
        gb = buchberger(IdealBasis.of(self.relations(x.table), x.table))
        return gb.normal_form(x)


@dataclass(frozen=True)
class DiagonalClass:
    """[Δ] = Σ_b F_b ⊗ b with b running over the monomial basis."""

    terms: tuple[tuple[tuple[int, int], GradedPoly], ...]

    def dual_of(self, b: tuple[int, int]) -> GradedPoly:
        return dict(self.terms)[b]


def flag_structure_constant(fl: FlagVariety, i: int, j: int) -> GradedPoly:
    """G_ij = ∫_Fl ζ^i ξ^j."""
    return fl.pushforward(fl.monomial(i, j))


def flag_diagonal(fl: FlagVariety) -> DiagonalClass:
    """Solve Σ_b F_b · ∫(ζ^a ξ^c · b) = ζ^a ξ^c for every basis monomial.

    The Gram matrix of the integration pairing on the monomial basis is
    constant plus strictly positive-degree corrections; its constant part is
    invertible, so the unknowns are solved degree by degree.
    """
    basis = fl.basis()
    n = fl.dimension()
    table = fl.table
    deg = {b: b[0] + b[1] for b in basis}
    gram = {(a, b): flag_structure_constant(fl, a[0] + b[0], a[1] + b[1]) for a in basis for b in basis}
    # constant part: pairs with deg a + deg b = n
    from .linalg import solve_rational

    const = [[gram[(a, b)].constant_term() if deg[a] + deg[b] == n else Fraction(0) for b in basis] for a in basis]
    unknown: dict[tuple[int, int], GradedPoly] = {}
    for b_deg in sorted({deg[b] for b in basis}, reverse=True):
        # rows a with deg a = n - b_deg pair constants with the current unknowns
        cols = [b for b in basis if deg[b] == b_deg]
        rows = [a for a in basis if deg[a] == n - b_deg]
        rhs_list = []
        for a in rows:
            rhs = fl.monomial(*a)
            for b, F in unknown.items():
                g = gram[(a, b)].embed(table)
                if deg[a] + deg[b] > n and g:
                    rhs = rhs - g * F
            rhs_list.append(rhs)
        mat = [[const[basis.index(a)][basis.index(b)] for b in cols] for a in rows]
        sol = solve_rational(mat, rhs_list)
        for b, F in zip(cols, sol):
            unknown[b] = F
    # verify every equation (including those with higher-degree corrections)
    for a in basis:
        total = GradedPoly.zero(table)
        for b, F in unknown.items():
            total = total + gram[(a, b)].embed(table) * F
        if fl.reduce(total - fl.monomial(*a)):
            raise ComputationError(f"diagonal equation for ζ^{a[0]}ξ^{a[1]} fails", residue=total)
    return DiagonalClass(tuple((b, unknown[b]) for b in basis))


def involution_from_swap(fl: FlagVariety, zeta_in: tuple[Fraction, Fraction], xi_in: tuple[Fraction, Fraction]) -> dict[str, GradedPoly]:
    """σ on (ζ, ξ) induced by swapping two characters μ ↔ ν.

    ``zeta_in`` and ``xi_in`` give ζ and ξ as linear forms a·μ + b·ν.
    """
    (a, b), (c, d) = zeta_in, xi_in
    det = a * d - b * c
    if not det:
        raise ComputationError("ζ and ξ are not independent characters")
    z = GradedPoly.var(fl.table, fl.zeta)
    x = GradedPoly.var(fl.table, fl.xi)
    # μ, ν in terms of ζ, ξ
    mu = (z.scale(d) - x.scale(b)).scale(1 / det)
    nu = (x.scale(a) - z.scale(c)).scale(1 / det)
    return {fl.zeta: nu.scale(a) + mu.scale(b), fl.xi: nu.scale(c) + mu.scale(d)}


def mu2_trace(
    x: GradedPoly,
    fl: FlagVariety,
    sigma: Mapping[str, GradedPoly],
    invariant: GradedPoly,
    target: VarTable,
    invariant_image: GradedPoly,
) -> GradedPoly:
    """x + σ(x), written in the invariant subring and sent to ``target``.

    The flag ring is the polynomial ring in ζ, ξ once the base classes are
    expressed through them; σ-invariants form Q[s, c_2] with ``s`` the
    linear invariant ``invariant``.  The result is the unique polynomial in
    ``s`` and the base classes, with ``s`` replaced by ``invariant_image``.
    """
    table = x.table
    sig = {k: v.embed(table) for k, v in sigma.items()}
    y = x + x.substitute(sig)
    # express y via s and the anti-invariant u = σ-eigenvector with eigenvalue -1
    z = GradedPoly.var(table, fl.zeta)
    w = GradedPoly.var(table, fl.xi)
    s_expr = invariant.embed(table)
    # find anti-invariant linear form u = p ζ + q ξ with σ(u) = -u
    sz, sw = sig[fl.zeta], sig[fl.xi]
    m = [[sz.coefficient(table.var_monomial(fl.zeta)), sw.coefficient(table.var_monomial(fl.zeta))],
         [sz.coefficient(table.var_monomial(fl.xi)), sw.coefficient(table.var_monomial(fl.xi))]]
    # σ acts on coordinate vectors (p, q) of pζ+qξ by (p, q) ↦ (p m00 + q m01, p m10 + q m11)
    p_, q_ = (m[0][1], -(m[0][0] + 1)) if (m[0][1] or m[0][0] + 1) else (m[1][1] + 1, -m[1][0])
    if not (p_ or q_):
        p_, q_ = Fraction(1), Fraction(0)
    u_expr = z.scale(p_) + w.scale(q_)
    # coordinates (s, u): solve ζ, ξ as linear forms in s, u
    a1, b1 = s_expr.coefficient(table.var_monomial(fl.zeta)), s_expr.coefficient(table.var_monomial(fl.xi))
    a2, b2 = p_, q_
    det = a1 * b2 - a2 * b1
    if not det:
        raise ComputationError("invariant and anti-invariant forms are dependent")
    work = table.extend([("_s", 1), ("_u", 1)])
    S = GradedPoly.var(work, "_s")
    U = GradedPoly.var(work, "_u")
    zeta_su = (S.scale(b2) - U.scale(b1)).scale(1 / det)
    xi_su = (U.scale(a1) - S.scale(a2)).scale(1 / det)
    # base classes expressed in ζ, ξ via the flag relations
    base_exprs = _base_classes_in_flag(fl, work, zeta_su, xi_su)
    mapping = {fl.zeta: zeta_su, fl.xi: xi_su, **base_exprs}
    y_su = y.embed(work).substitute({k: v for k, v in mapping.items()}, work)
    # now y_su is a polynomial in s, u and the non-flag variables; u appears to even powers
    # replace u^2 by its expression in s and c2 from the c2 relation
    u2 = _u_squared(fl, work, zeta_su, xi_su)
    y_s = _eliminate_u(y_su, work, u2)
    out_map = {"_s": invariant_image.embed(target)}
    keep = [n for n in work.names if n not in (fl.zeta, fl.xi, "_u")]
    small = VarTable(tuple(keep), tuple(work.degrees[work.index(n)] for n in keep))
    return y_s.restrict(small).substitute(out_map, target)


def _base_classes_in_flag(fl: FlagVariety, work: VarTable, zeta: GradedPoly, xi: GradedPoly) -> dict[str, GradedPoly]:
    """Solve the flag relations for the base Chern classes in terms of ζ, ξ.

    Requires each base class to occur linearly (with constant coefficient)
    in exactly one relation, as for SL_3 where c2 comes from the ξ relation
    and c3 from the ζ relation.
    """
    out: dict[str, GradedPoly] = {}
    rels = [fl.xi_layer.relation(work), fl.zeta_layer.relation(work)]
    names = [n for n in fl.table.names if n not in (fl.zeta, fl.xi)]
    for rel in rels:
        for n in names:
            if n in out:
                continue
            mono = work.var_monomial(n)
            c = rel.coefficient(mono)
            rest = rel - GradedPoly.monomial(work, mono, c)
            if c and n not in rest.variables():
                expr = (-rest).scale(1 / c)
                expr = expr.substitute({fl.zeta: zeta, fl.xi: xi, **out}, work)
                out[n] = expr
                break
    return out


def _u_squared(fl: FlagVariety, work: VarTable, zeta: GradedPoly, xi: GradedPoly) -> tuple[str, GradedPoly]:
    """From the ξ-relation, u^2 = linear combination of s^2 and the degree-2 base class."""
    rel = fl.xi_layer.relation(work).substitute({fl.zeta: zeta, fl.xi: xi}, work)
    u2 = tuple(2 * e for e in work.var_monomial("_u"))
    c = rel.coefficient(u2)
    if not c:
        raise ComputationError("cannot express u^2 through invariants")
    rest = rel - GradedPoly.monomial(work, u2, c)
    return ("_u", (-rest).scale(1 / c))


def _eliminate_u(y: GradedPoly, work: VarTable, u2: tuple[str, GradedPoly]) -> GradedPoly:
    ui = work.index("_u")
    out = GradedPoly.zero(work)
    sq = u2[1]
    for mono, c in y.items():
        e = mono[ui]
        if e % 2:
            raise ComputationError("trace is not σ-invariant (odd power of the anti-invariant)")
        base = list(mono)
        base[ui] = 0
        out = out + GradedPoly.monomial(work, tuple(base), c) * sq ** (e // 2)
    return out


def diagonal_pushforward_first(diag: DiagonalClass, fl: FlagVariety, second: GradedPoly) -> GradedPoly:
    """pr_{1*}([Δ] · (1 ⊗ y)) for y a polynomial in ζ, ξ (result in the first factor)."""
    out = GradedPoly.zero(fl.table)
    for b, F in diag.terms:
        out = out + F * fl.pushforward(fl.monomial(*b) * second.embed(fl.table))
    return fl.reduce(out)
