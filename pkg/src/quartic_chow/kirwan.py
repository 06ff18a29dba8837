"""Kirwan stratifications from weight data and Poincaré-series arithmetic.

A :class:`WeightSystem` lists the torus weights of a linear action on a
projective space together with the group data needed by the codimension
formula ``codim S_β = dim M − (dim K + dim Y_β − dim P_β)``.  Strata are
indexed by the closest points β to the origin of convex hulls of weights;
in rank ≤ 2 it suffices to look at single weights and at segments.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Sequence

from .errors import StructuralError, UnsupportedCase
from .series import RatSeries

Vector = tuple[Fraction, ...]

TERNARY = "ternary"
BINARY = "binary"
TORUS = "torus"
TRIVIAL = "trivial"

# stabilizer classifications
TORUS_POINT = "torus-point"
TORUS_ORBIT = "torus-orbit"
RANK2_POINT = "rank2-point"
RANK2_BINARY = "rank2-binary"

MAX_DEGREE = 12


def _dot(a: Vector, b: Vector) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def _sub(a: Vector, b: Vector) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def _axpy(t: Fraction, a: Vector, b: Vector) -> Vector:
    """``b + t·(a − b)``."""
    return tuple(y + t * (x - y) for x, y in zip(a, b))


@dataclass(frozen=True)
class WeightSystem:
    """Torus weights of a linear action plus the group data for codimensions.

    ``kind`` selects the Weyl chamber: ``ternary`` (rank-2 special linear
    group, chamber β1 ≤ β2 ≤ β3 in sum-zero coordinates), ``binary`` and
    ``torus`` (rank 1, chamber β > 0), or ``trivial`` (a point).
    """

    name: str
    kind: str
    weights: tuple[Vector, ...]
    labels: tuple[str, ...]
    group_dim: int
    parabolic_dim: int
    wall_parabolic_dim: int
    classifying: RatSeries
    scale: Fraction = Fraction(1)

    # ---- constructors -----------------------------------------------------
    @classmethod
    def ternary(cls, d: int) -> "WeightSystem":
        """Plane curves of degree ``d`` under the rank-2 special linear group."""
        if d > MAX_DEGREE:
            raise StructuralError(f"degree {d} exceeds the combinatorial budget {MAX_DEGREE}")
        third = Fraction(d, 3)
        weights, labels = [], []
        for i in range(d + 1):
            for j in range(d + 1 - i):
                k = d - i - j
                weights.append((i - third, j - third, k - third))
                labels.append(f"({i},{j})")
        bg = RatSeries.geometric(4) * RatSeries.geometric(6)
        return cls(f"ternary-{d}", TERNARY, tuple(weights), tuple(labels), 8, 5, 6, bg)

    @classmethod
    def binary(cls, n: int) -> "WeightSystem":
        """Binary forms of degree ``n``; the monomial x^{n-i}y^i has weight n − 2i."""
        if n > 4 * MAX_DEGREE:
            raise StructuralError(f"degree {n} exceeds the combinatorial budget")
        weights = tuple((Fraction(n - 2 * i),) for i in range(n + 1))
        labels = tuple(f"({i})" for i in range(n + 1))
        return cls(f"binary-{n}", BINARY, weights, labels, 3, 2, 2, RatSeries.geometric(4))

    @classmethod
    def torus_normalizer(cls, positive: Sequence[int]) -> "WeightSystem":
        """A one-dimensional torus extended by the sign involution, weights ±w."""
        ws = sorted(set(int(w) for w in positive))
        if not ws or ws[0] <= 0:
            raise StructuralError("normalizer weights must be positive integers")
        weights = tuple((Fraction(s * w),) for w in ws for s in (1, -1))
        labels = tuple(f"({s * w})" for w in ws for s in (1, -1))
        name = "normalizer-" + ",".join(str(w) for w in ws)
        return cls(name, TORUS, weights, labels, 1, 1, 1, RatSeries.geometric(4))

    @classmethod
    def point(cls) -> "WeightSystem":
        return cls("point", TRIVIAL, ((),), ("()",), 0, 0, 0, RatSeries([1]))

    def scaled(self, k: Fraction | int) -> "WeightSystem":
        """Same action with the inner product multiplied by ``k``."""
        k = Fraction(k)
        if k <= 0:
            raise StructuralError("inner-product scale must be positive")
        return WeightSystem(self.name, self.kind, self.weights, self.labels, self.group_dim,
                            self.parabolic_dim, self.wall_parabolic_dim, self.classifying, self.scale * k)

    # ---- geometry ---------------------------------------------------------
    @property
    def dimension(self) -> int:
        return len(self.weights) - 1

    @property
    def rank(self) -> int:
        return {TERNARY: 2, BINARY: 1, TORUS: 1, TRIVIAL: 0}[self.kind]

    def in_chamber(self, beta: Vector) -> bool:
        if self.kind == TERNARY:
            return beta[0] <= beta[1] <= beta[2]
        if self.kind in (BINARY, TORUS):
            return beta[0] > 0
        return False

    def on_wall(self, beta: Vector) -> bool:
        return self.kind == TERNARY and (beta[0] == beta[1] or beta[1] == beta[2])


@dataclass(frozen=True)
class StratumRecord:
    """One unstable stratum S_β."""

    beta: Vector
    support: tuple[str, ...]
    stabilizer: str
    binary_degree: int
    dim_y: int
    codim: int
    contribution: RatSeries = field(compare=False)

    @property
    def stabilizer_label(self) -> str:
        if self.stabilizer == RANK2_BINARY:
            return f"{RANK2_BINARY}({self.binary_degree})"
        return self.stabilizer

    @property
    def group(self) -> str:
        """``GL2`` for the rank-two stabilizers, ``T`` for a maximal torus."""
        return "GL2" if self.stabilizer.startswith("rank2") else "T"

    def weighted(self) -> RatSeries:
        """``t^{2 codim} · P^{Stab β}(Z_β^ss)``."""
        return RatSeries.monomial(2 * self.codim) * self.contribution


def _candidates(weights: Sequence[Vector]) -> list[Vector]:
    """Closest points to the origin of single weights and of segments."""
    out: list[Vector] = []
    seen: set[Vector] = set()

    def add(v: Vector) -> None:
        if v not in seen:
            seen.add(v)
            out.append(v)

    for w in weights:
        add(w)
    for a, b in combinations(weights, 2):
        d = _sub(a, b)
        dd = _dot(d, d)
        if not dd:
            continue
        # point b + t(a − b) closest to the origin
        t = -_dot(b, d) / dd
        if 0 < t < 1:
            add(_axpy(t, a, b))
    return out


def _in_hull_on_line(beta: Vector, pts: Sequence[Vector]) -> tuple[bool, bool]:
    """(β in the convex hull of the collinear ``pts``, β strictly inside)."""
    if not pts:
        return False, False
    if len(pts) == 1:
        return pts[0] == beta, False
    base = pts[0]
    direction = next((_sub(p, base) for p in pts if p != base), None)
    if direction is None:
        return base == beta, False
    dd = _dot(direction, direction)
    params = [_dot(_sub(p, base), direction) / dd for p in pts]
    tb = _dot(_sub(beta, base), direction) / dd
    if _axpy(tb, tuple(b + d for b, d in zip(base, direction)), base) != beta:
        return False, False
    lo, hi = min(params), max(params)
    return lo <= tb <= hi, lo < tb < hi


def binary_semistable_series(n: int) -> RatSeries:
    """SL2-equivariant Poincaré series of the semistable binary forms of degree ``n``.

    Computed recursively from the rank-1 stratification of ``P^n``.
    """
    return semistable_series(WeightSystem.binary(n))


def stratum_contribution(rank: int, stabilizer: str, binary_degree: int = 0) -> RatSeries:
    """``P^{Stab β}(Z_β^ss)`` for the supported stabilizer cases."""
    g2 = RatSeries.geometric(2)
    if stabilizer == TORUS_POINT:
        return g2**rank
    if stabilizer == TORUS_ORBIT:
        if rank < 2:
            raise UnsupportedCase("a one-dimensional torus orbit needs a rank-2 torus")
        return g2 ** (rank - 1)
    if stabilizer == RANK2_POINT:
        return g2 * RatSeries.geometric(4)
    if stabilizer == RANK2_BINARY:
        return g2 * binary_semistable_series(binary_degree)
    raise UnsupportedCase(f"unsupported stabilizer case {stabilizer!r}")


def enumerate_strata(W: WeightSystem) -> list[StratumRecord]:
    """All unstable strata of ``W``, largest ‖β‖ first."""
    if W.kind == TRIVIAL:
        return []
    records: list[StratumRecord] = []
    for beta in _candidates(W.weights):
        bb = _dot(beta, beta)
        if not bb or not W.in_chamber(beta):
            continue
        on = [i for i, w in enumerate(W.weights) if _dot(w, beta) == bb]
        inside, strict = _in_hull_on_line(beta, [W.weights[i] for i in on])
        if not inside:
            continue
        ys = [i for i, w in enumerate(W.weights) if _dot(w, beta) >= bb]
        dim_y = len(ys) - 1
        wall = W.on_wall(beta)
        parabolic = W.wall_parabolic_dim if wall else W.parabolic_dim
        codim = W.dimension - (W.group_dim + dim_y - parabolic)
        degree = 0
        if wall:
            degree = len(on) - 1
            stab = RANK2_POINT if degree == 0 else RANK2_BINARY
        elif len(on) == 1:
            stab = TORUS_POINT
        elif len(on) == 2 and strict:
            stab = TORUS_ORBIT
        else:
            raise UnsupportedCase(f"stratum at β={beta} with {len(on)} weights on its hyperplane")
        contribution = stratum_contribution(W.rank, stab, degree)
        if contribution == 0:
            # Z_β^ss is empty (e.g. binary forms of degree 1)
            continue
        scaled_beta = tuple(W.scale * x for x in beta)
        records.append(StratumRecord(scaled_beta, tuple(W.labels[i] for i in on), stab, degree, dim_y, codim, contribution))
    records.sort(key=lambda r: (-_dot(r.beta, r.beta), r.support))
    return records


def equivariant_series(W: WeightSystem) -> RatSeries:
    """``P_t(P^m) · P_t(BK)``."""
    return RatSeries.one_minus(2 * (W.dimension + 1)) * RatSeries.geometric(2) * W.classifying


def strata_sum(strata: Sequence[StratumRecord]) -> RatSeries:
    total = RatSeries([0])
    for s in strata:
        total = total + s.weighted()
    return total


def semistable_series(W: WeightSystem) -> RatSeries:
    """Equivariant series minus the weighted stratum contributions."""
    return equivariant_series(W) - strata_sum(enumerate_strata(W))


def blowup_correction(center: RatSeries, codim: int) -> RatSeries:
    """``(t^2 − t^{2 codim})/(1 − t^2) · P(center)``."""
    if codim < 2:
        raise StructuralError("blowup center must have codimension at least 2")
    return (RatSeries.monomial(2) - RatSeries.monomial(2 * codim)) * RatSeries.geometric(2) * center


def blowup_series(base: RatSeries, center: RatSeries, codim: int, new_strata: Sequence[StratumRecord | RatSeries] = ()) -> RatSeries:
    """Series after blowing up ``center`` and removing the new unstable strata."""
    out = base + blowup_correction(center, codim)
    for s in new_strata:
        out = out - (s.weighted() if isinstance(s, StratumRecord) else s)
    return out


def blowdown_series(blown_up: RatSeries, center: RatSeries, codim: int) -> RatSeries:
    """Series of the base of a blowup, given the blown-up space and its center."""
    return blown_up - blowup_correction(center, codim)


def ip_prime(P: RatSeries, complex_dim: int) -> RatSeries:
    """``IP'``: shift by t^2 in degrees up to ``complex_dim``, identity above."""
    coeffs = P.as_polynomial()
    out: dict[int, Fraction] = {}
    for i, c in enumerate(coeffs):
        if not c:
            continue
        if i + 2 <= complex_dim:
            out[i + 2] = out.get(i + 2, Fraction(0)) + c
        if i > complex_dim:
            out[i] = out.get(i, Fraction(0)) + c
    top = max(out, default=0)
    return RatSeries([out.get(i, 0) for i in range(top + 1)])


def ic_correction(resolution: RatSeries, corrections: Sequence[tuple[RatSeries, RatSeries]]) -> RatSeries:
    """``resolution − Σ factor · IP'``."""
    out = resolution
    for factor, ipp in corrections:
        out = out - factor * ipp
    return out


def monomial_count(kind: str, d: int) -> int:
    """Expected number of weights, used as a sanity check."""
    return comb(d + 2, 2) if kind == TERNARY else d + 1
