"""Chow rings of weighted blowups and classes of proper transforms.

The blowup of ``Y`` along a center ``Z`` whose restriction map is surjective
has the presentation ``A*(Y)[t] / (t·ker, Q_N)`` with
``Q_N = P_N(t) − P_N(0) + [Z]``, where ``t = −[E]`` and ``P_N`` is the
weighted Chern polynomial of the normal bundle.  Pushforward along the
exceptional divisor is multiplication by ``−t``, so proper transforms are
``f^*[S] + {t·(1 + t + t^2 + …)·X}^c``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import ComputationError, GradingError, StructuralError
from .poly import GradedPoly, VarTable
from .rings import RingPresentation


@dataclass(frozen=True)
class BlowupData:
    """Inputs of the blowup presentation, all written in the base ring ``table``.

    ``normal_poly`` lives in ``table`` extended by ``tvar`` (degree 1).
    """

    table: VarTable
    base_relations: tuple[GradedPoly, ...]
    kernel: tuple[GradedPoly, ...]
    normal_poly: GradedPoly
    center_class: GradedPoly
    tvar: str = "t"

    @property
    def blown_table(self) -> VarTable:
        return self.table.extend([(self.tvar, 1)], front=True)

    def codim(self) -> int:
        p = self.normal_poly
        if not p.is_homogeneous():
            raise GradingError(f"normal-bundle polynomial is not homogeneous: {p}")
        return p.homogeneous_degree()


def q_class(d: BlowupData) -> GradedPoly:
    """``Q_N = P_N(t) − P_N(0) + f^*[Z]`` in the blown-up table."""
    table = d.blown_table
    pn = d.normal_poly.embed(table)
    q = pn - pn.evaluate({d.tvar: 0}) + d.center_class.embed(table)
    if q and not q.is_homogeneous():
        raise GradingError(f"Q_N is not homogeneous (center class of the wrong degree?): {q}")
    if q and q.homogeneous_degree() != d.codim():
        raise GradingError(f"Q_N has degree {q.homogeneous_degree()}, expected {d.codim()}")
    return q


def kernel_relations(d: BlowupData) -> list[GradedPoly]:
    """``t·g`` for every kernel generator ``g``."""
    table = d.blown_table
    t = GradedPoly.var(table, d.tvar)
    out = []
    for g in d.kernel:
        if g and not g.is_homogeneous():
            raise GradingError(f"kernel generator {g} is not homogeneous")
        out.append(t * g.embed(table))
    return out


def blowup_presentation(d: BlowupData, *, name: str = "", include_q: bool = True) -> RingPresentation:
    """Base relations, ``t·ker`` and ``Q_N`` over the base table plus ``t``."""
    table = d.blown_table
    rels = [r.embed(table) for r in d.base_relations] + kernel_relations(d)
    if include_q:
        rels.append(q_class(d))
    return RingPresentation(table, tuple(rels), (), name)


@dataclass(frozen=True)
class TransformData:
    """Inputs of the proper-transform formula.

    ``center_term`` is the class X in the bracket ``{t(1+t+…)·X}^c`` (the
    excess factor times the pushed weighted Segre class), already written in
    the blown-up table.
    """

    subvariety_class: GradedPoly
    codim: int
    center_term: GradedPoly
    tvar: str = "t"


def proper_transform(d: TransformData) -> GradedPoly:
    """``f^*[S] + {t·(1 + t + t^2 + …)·X}^c``."""
    table = d.subvariety_class.table
    if d.center_term.table != table:
        raise StructuralError("class and center term must share a variable table")
    t = GradedPoly.var(table, d.tvar)
    geo = GradedPoly.zero(table)
    power = t
    for _ in range(d.codim):
        geo = geo + power
        power = power * t
    return d.subvariety_class + (geo.truncate_above(d.codim) * d.center_term.truncate_above(d.codim)).select_degree(d.codim)


# ---------------------------------------------------------------------------
# pushforward along a blowdown with a quadratic exceptional relation
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class QuadraticExceptional:
    """Relation ``a·t^2 + b·t + c = 0`` in the exceptional variable ``var``."""

    var: str
    relation: GradedPoly

    def coefficients(self) -> tuple[GradedPoly, GradedPoly]:
        """``(b/a, c/a)`` so that ``t^2 = −(b/a) t − c/a``."""
        rel = self.relation
        vi = rel.table.index(self.var)
        parts: dict[int, dict] = {}
        for mono, c in rel.items():
            parts.setdefault(mono[vi], {})[mono[:vi] + (0,) + mono[vi + 1 :]] = c
        if max(parts, default=0) != 2:
            raise ComputationError(f"relation is not quadratic in {self.var}: {rel}")
        lead = GradedPoly(rel.table, parts[2])
        if not lead.is_constant() or not lead:
            raise ComputationError(f"leading coefficient in {self.var} must be a nonzero constant")
        a = lead.constant_term()
        b = GradedPoly(rel.table, parts.get(1, {})) / a
        c = GradedPoly(rel.table, parts.get(0, {})) / a
        return b, c

    def split(self, x: GradedPoly) -> tuple[GradedPoly, GradedPoly]:
        """Write ``x = α + β·t`` with α, β free of ``t``."""
        b, c = self.coefficients()
        table = x.table
        if table != self.relation.table:
            x = x.embed(self.relation.table)
            table = x.table
        vi = table.index(self.var)
        by_power: dict[int, dict] = {}
        for mono, v in x.items():
            by_power.setdefault(mono[vi], {})[mono[:vi] + (0,) + mono[vi + 1 :]] = v
        # t^k = A_k + B_k t
        alpha = GradedPoly.zero(table)
        beta = GradedPoly.zero(table)
        A, B = GradedPoly.one(table), GradedPoly.zero(table)
        top = max(by_power, default=0)
        for k in range(top + 1):
            coeff = GradedPoly(table, by_power.get(k, {}))
            if coeff:
                alpha = alpha + coeff * A
                beta = beta + coeff * B
            # t^{k+1} = A t + B t^2 = -B c + (A - B b) t
            A, B = -(B * c), A - B * b
        return alpha, beta

    def pushforward(self, x: GradedPoly) -> GradedPoly:
        """Φ_*(α + β t) = α."""
        return self.split(x)[0]

    def contraction_generators(self, gens: Sequence[GradedPoly]) -> list[GradedPoly]:
        """``α`` and ``c·β`` for each generator, the images under Φ_* of g and g·t."""
        _, c = self.coefficients()
        out: list[GradedPoly] = []
        for g in gens:
            a, bt = self.split(g)
            out.append(a)
            out.append(c * bt)
        return [g for g in out if g]
