"""Weighted graded polynomials over the rationals."""

from fractions import Fraction

import pytest

from quartic_chow.errors import GradingError, StructuralError
from quartic_chow.poly import GradedPoly, VarTable

T = VarTable.of("H:1 c2:2 c3:3")


def P(text: str, table: VarTable = T) -> GradedPoly:
    return GradedPoly.parse(text, table)


def test_parse_and_print_roundtrip() -> None:
    p = P("60*H^4 - 120*c2*H^2 - 276*c3*H")
    assert P(str(p)) == p


def test_addition_cancels() -> None:
    t = VarTable.of("lam:1 del:1")
    assert P("lam+del", t) + P("lam-del", t) == P("2*lam", t)
    x = P("lam^2*del", t)
    assert (x - x).is_zero()
    assert not (x - x).terms


def test_multiplication_and_degree() -> None:
    t = VarTable.of("lam:1 del:1")
    assert P("lam", t) * P("lam*del + 2*del^2", t) == P("lam^2*del + 2*lam*del^2", t)
    assert (P("H") * P("c3")).homogeneous_degree() == 4


def test_rational_coefficients_are_exact() -> None:
    p = P("H/3") + P("H/6")
    assert p.coefficient((1, 0, 0)) == Fraction(1, 2)


def test_homogeneous_components_partition() -> None:
    p = P("1 + H + H^2 + c2 + c3*H")
    comps = p.homogeneous_components()
    assert sorted(comps) == [0, 1, 2, 4]
    total = GradedPoly.zero(T)
    for c in comps.values():
        total = total + c
    assert total == p


def test_substitution_preserves_degree() -> None:
    t = VarTable.of("lam:1 e:1 H:1")
    p = P("lam*e - 2*e^2", t)
    out = p.substitute({"lam": P("3*H + 2*e", t)})
    assert out == P("3*H*e", t)


def test_substitution_identity() -> None:
    p = P("H^2 + c2")
    assert p.substitute({}) == p


def test_flex_substitution() -> None:
    t = VarTable.of("h1:1 h3:1 H:1 c2:2")
    f2 = P("3*h1^2 + 3*h1*h3 + h3^2 + c2", t)
    assert f2.substitute({"h3": P("H - h1", t)}) == P("H^2 + c2 + H*h1 + h1^2", t)


def test_inhomogeneous_substitution_rejected() -> None:
    with pytest.raises(GradingError):
        P("H^2").substitute({"H": P("1 + H")})


def test_mismatched_tables_rejected() -> None:
    other = VarTable.of("x:1")
    with pytest.raises(StructuralError):
        P("H") + GradedPoly.var(other, "x")


def test_truncate_and_select() -> None:
    p = P("1 + H + c2 + H*c2")
    assert p.truncate_above(2) == P("1 + H + c2")
    assert p.select_degree(3) == P("H*c2")


def test_duplicate_variables_rejected() -> None:
    with pytest.raises(StructuralError):
        VarTable.of("x:1 x:2")


def test_embed_and_restrict() -> None:
    big = T.extend("e:1")
    p = P("H*c2")
    assert p.embed(big).restrict(T) == p
