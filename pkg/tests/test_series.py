from fractions import Fraction
from math import comb, factorial

import pytest
from hypothesis import given, settings, strategies as st

from hypalg.geometry import config_alpha_beta, lift_config
from hypalg.relations import relation_lattice
from hypalg.series import (
    BracketError,
    FormalSeries,
    Window,
    a_family,
    apply_box,
    apply_derivation,
    apply_euler,
    bracket,
    bracket_vec,
    constant_series,
    construct_v,
    phi_series,
    pochhammer,
    psi_mns_series,
    solve_offsets,
    specialize,
    thm66_shift,
    verify_box_euler,
    verify_K_family,
    verify_polynomial_relation,
)

from conftest import EXAMPLE1_B, EXAMPLE1_U0

F = Fraction
V1 = (0, F(-7, 9), F(-1, 9), F(-2, 3), F(-4, 9), F(-2, 9), F(-7, 9))
GAMMA1 = (9, 1, -5, -3, -2, -1, 1)


def poch(a, k):
    out = F(1)
    for i in range(k):
        out *= a + i
    return out


def ray_term(l):
    return (-1) ** l * poch(F(1, 9), 5 * l) * poch(F(2, 3), 3 * l) * poch(F(4, 9), 2 * l) / (
        poch(F(1), 9 * l) * poch(F(2, 9), l))


def test_bracket_examples():
    assert bracket(F(3, 7), 0) == 1
    assert bracket(0, 5) == F(1, 120)
    for l in range(6):
        assert bracket(-1, -l) == (-1) ** l * factorial(l)
    assert bracket(2, -3) == 0
    with pytest.raises(BracketError):
        bracket(-2, 2)


def test_pochhammer():
    assert pochhammer(F(5, 3), 0) == 1
    assert all(pochhammer(1, k) == factorial(k) for k in range(8))
    assert pochhammer(F(2, 3), 3) == F(80, 27)


@settings(max_examples=200, deadline=None)
@given(st.fractions(min_value=-5, max_value=5, max_denominator=9), st.integers(-6, 6))
def test_bracket_recurrences(z, k):
    def safe(z, k):
        try:
            return bracket(z, k)
        except BracketError:
            return None

    b = safe(z, k)
    if k >= 0 and b is not None and z + k + 1 != 0:
        nxt = safe(z, k + 1)
        assert nxt == b / (z + k + 1)
    if k <= 0 and b is not None:
        assert safe(z, k - 1) == b * (z + k)
    if not (z.denominator == 1 and z < 0):
        lhs = safe(z - 1, k + 1)
        if lhs is not None:
            assert z * lhs == bracket(z, k)


def test_bracket_vec():
    assert bracket_vec(V1, (0,) * 7) == 1
    assert bracket_vec((0, F(-1, 2)), (-1, 3)) == 0
    expected = -poch(F(1, 9), 5) * poch(F(2, 3), 3) * poch(F(4, 9), 2) / (
        poch(F(1), 9) * poch(F(2, 9), 1))
    assert bracket_vec(V1, GAMMA1) == expected


def test_solve_offsets(example1, example1_L, cfg211):
    w = Window.cube(7, 20)
    assert (0,) * 7 in solve_offsets(example1, (0,) * 6, example1_L, w)
    L = relation_lattice(cfg211)
    got = solve_offsets(cfg211, (0, 0, 0, 0), L, Window.around_line(L.basis[0], -4, 6))
    assert got == sorted(tuple(l * g for g in L.basis[0]) for l in range(-4, 7))
    # the points 0 and 2 on a line only reach even first coordinates
    cfg = lift_config([(0,), (2,)])
    assert solve_offsets(cfg, (1, 0), relation_lattice(cfg), Window.cube(2, 10)) == []


def test_phi_trivial(example1, example1_L):
    w = Window.cube(7, 9)
    s = phi_series((0,) * 7, (0,) * 6, example1, example1_L, w)
    assert s.terms == {(0,) * 7: 1}
    s = phi_series((0,) * 7, (1, 0, 0, 0, 0, 1), example1, example1_L, w)
    assert s.terms == {(1, 0, 0, 0, 0, 0, 0): 1}


def test_phi_derivative_and_euler(example1, example1_L):
    vp, _, beta = thm66_shift(V1, example1)
    w = Window.cube(7, 60)
    u = (2, 1, -1, 0, 0, 3)
    s = phi_series(vp, u, example1, example1_L, w)
    assert s.terms
    for j, a in enumerate(example1.lifted):
        lhs = apply_derivation(s, j)
        rhs = phi_series(vp, tuple(x - y for x, y in zip(u, a)), example1, example1_L, w)
        assert lhs.equals(rhs)
    param = tuple(b + x for b, x in zip(beta, u))
    assert all(r.is_zero() for r in apply_euler(s, param, example1))


def test_a_family_trivial(cfg211):
    L = relation_lattice(cfg211)
    fam = a_family((0,) * 5, (0, 0, 0, 0), cfg211, L, 2, Window.cube(5, 6))
    assert fam.members[(0, 0, 0, 0)].terms == {(0,) * 5: 1}
    nonconst = [u for u, s in fam.members.items() if u != (0, 0, 0, 0) and s.terms]
    assert nonconst == []
    assert verify_K_family(fam, cfg211, L).passed


def test_a_family_rejects_wrong_beta(example1, example1_L):
    with pytest.raises(ValueError):
        a_family(V1, (0,) * 6, example1, example1_L, 1, Window.cube(7, 5))


def test_k_family_fault_injection(example1, example1_L):
    vp, _, beta = thm66_shift(V1, example1)
    fam = a_family(vp, beta, example1, example1_L, 3, Window.cube(7, 40))
    u = EXAMPLE1_U0
    bad = dict(fam.members)
    s = bad[u]
    k = s.offsets()[0]
    terms = dict(s.terms)
    terms[k] = terms[k] + 1
    bad[u] = FormalSeries(s.base, terms, s.window)
    rep = verify_K_family(type(fam)(fam.beta, fam.v, bad, fam.degree), example1, example1_L)
    assert not rep.passed
    assert any(str(u) in key[0] for key in rep.residuals)


def test_psi_example1_matches_pochhammer(example1, example1_L):
    w = Window.around_line(GAMMA1, -3, 10)
    s = psi_mns_series(V1, example1, example1_L, w)
    coeffs = specialize(s, GAMMA1, origin=(0,) * 7)
    assert coeffs == [ray_term(l) for l in range(11)]


def test_psi_alpha_beta(cfg211):
    L = relation_lattice(cfg211)
    g = L.basis[0]
    v = (-1, -1, 0, 0, 0)
    s = psi_mns_series(v, cfg211, L, Window.around_line(g, -3, 12))
    coeffs = specialize(s, g, origin=(0,) * 5)
    assert [abs(c) for c in coeffs] == [comb(2 * l, l) for l in range(13)]
    assert coeffs == [(-1) ** (l * 3) * comb(2 * l, l) for l in range(13)]


def test_construct_v(example1, cfg211):
    assert construct_v(example1, EXAMPLE1_U0, subset=range(1, 7)) == V1
    v = construct_v(cfg211, (1, 0, 0, 2))
    assert v == (-1, -1, 0, 0, 0)
    default = construct_v(example1, EXAMPLE1_U0)
    assert example1.combination([-x for x in default]) == EXAMPLE1_U0
    assert all(-1 <= x <= 0 for x in default)
    with pytest.raises(ValueError):
        construct_v(cfg211, (1, 0, 0, 2), subset=[2, 3, 4, 1])


def test_shift_parameters(example1):
    vp, u1, beta = thm66_shift(V1, example1)
    assert vp == (0, F(-16, 9), F(-10, 9), F(-5, 3), F(-13, 9), F(-11, 9), F(-16, 9))
    assert u1 == example1.combination([0, 1, 1, 1, 1, 1, 1])
    vp0, u10, b0 = thm66_shift((0,) * 7, example1)
    assert vp0 == (0,) * 7 and not any(u10) and not any(b0)
    with pytest.raises(ValueError):
        thm66_shift((-1, -1, 0, 0, 0), config_alpha_beta((2,), (1, 1)))


def test_euler_on_monomial(example1):
    s = FormalSeries(V1, {(0,) * 7: F(3)}, Window.cube(7, 0))
    param = example1.combination(V1)
    assert all(r.is_zero() for r in apply_euler(s, param, example1))


def test_box_on_psi(example1, example1_L):
    s = psi_mns_series(V1, example1, example1_L, Window.around_line(GAMMA1, -2, 8))
    assert apply_box(s, GAMMA1).is_zero()
    assert verify_box_euler(s, [-x for x in EXAMPLE1_U0], example1, example1_L).passed


def test_specialize_constant_and_line_error():
    assert specialize(constant_series(3, 5), (1, -1, 0)) == [5]
    s = FormalSeries((0, 0), {(0, 0): 1, (1, 0): 1}, Window.cube(2, 2))
    with pytest.raises(ValueError):
        specialize(s, (1, 1))


def test_polynomial_relation():
    y = [comb(2 * k, k) for k in range(51)]
    assert verify_polynomial_relation(y, {(0, 2): 1, (1, 2): -4, (0, 0): -1}, K=50)
    assert not verify_polynomial_relation(y, {(0, 2): 1, (0, 0): -1})
    assert verify_polynomial_relation([1], {(0, 1): 1, (0, 0): -1})
    with pytest.raises(ValueError):
        verify_polynomial_relation([1, 2], {(0, 1): 1}, K=5)


@settings(max_examples=15, deadline=None)
@given(st.integers(2, 8), st.integers(1, 6))
def test_window_monotonicity(l1, extra):
    cfg = lift_config(EXAMPLE1_B)
    L = relation_lattice(cfg)
    small = psi_mns_series(V1, cfg, L, Window.around_line(GAMMA1, -1, l1))
    big = psi_mns_series(V1, cfg, L, Window.around_line(GAMMA1, -1, l1 + extra))
    assert all(big.terms[k] == c for k, c in small.terms.items())
    assert big.restrict(small.window).equals(small)
