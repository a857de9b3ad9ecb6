from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

import oracles
from quaplectic import fock_rep as fr
from quaplectic import lie_core as lc

NATURAL = fr.RepConfig(Fraction(2), Fraction(1))
MATCHED = fr.RepConfig.matched(2)


def _all_ops(space, cfg, choice="position-time"):
    ops = {}
    ops.update(fr.complex_generators(space, cfg))
    ops.update(fr.four_generators(space, cfg))
    ops.update(fr.real_generators(space, cfg, choice))
    return ops


@pytest.mark.parametrize(
    "preset,noncompact",
    [("C(1)", False), ("C(2)", False), ("C(3)", False), ("C(1,1)", True), ("C(1,2)", True), ("C(1,3)", True),
     ("C(1,2)-real-n", True), ("C(1,3)-real-n", True), ("C(1,2)-real-4", True), ("heisenberg(3)", False)],
)
@pytest.mark.parametrize("cfg", [NATURAL, MATCHED, fr.RepConfig(Fraction(-1), Fraction(1, 2))])
def test_brackets_on_interior(preset, noncompact, cfg):
    alg = lc.load_preset(preset)
    space = fr.TruncatedFock(alg.constants.n, 8, noncompact)
    rep = fr.verify_brackets(_all_ops(space, cfg), alg.constants, cfg, depth=2, tol=1e-12)
    assert rep.ok, rep


@pytest.mark.parametrize("choice", fr.BASIS_CHOICES)
def test_basis_choices_preserve_brackets(choice):
    alg = lc.load_preset("C(1,2)-real-n")
    space = fr.TruncatedFock(2, 6, True)
    assert fr.verify_brackets(_all_ops(space, MATCHED, choice), alg.constants, MATCHED).ok


def test_momentum_basis_exchanges_position_and_momentum():
    space = fr.TruncatedFock(1, 6)
    pos = fr.real_generators(space, NATURAL)
    mom = fr.real_generators(space, NATURAL, "momentum-time")
    rows = space.interior(1)
    assert np.allclose(mom["Q1"].block(rows), pos["P1"].block(rows), atol=1e-14)


def test_unknown_basis_choice():
    with pytest.raises(ValueError):
        fr.real_generators(fr.TruncatedFock(1, 2), NATURAL, "sideways")


def test_broken_operator_detected():
    alg = lc.load_preset("C(2)")
    space = fr.TruncatedFock(2, 6)
    ops = _all_ops(space, NATURAL)
    ops["Z12"] = ops["Z12"] * 1.01
    assert not fr.verify_brackets(ops, alg.constants, NATURAL).ok


def test_ladder_matrix_elements():
    space = fr.TruncatedFock(2, 8)
    ops = fr.complex_generators(space, NATURAL)
    v = ops["A+1"].apply(space.basis_vector((2, 0)))
    assert math.isclose(abs(v[space.index[(3, 0)]]), math.sqrt(3))
    v = ops["Z11"].apply(space.basis_vector((2, 0)))
    assert math.isclose(v[space.index[(2, 0)]].real, 2 * float(NATURAL.kappa / NATURAL.s))
    v = ops["Z21"].apply(space.basis_vector((1, 0)))
    assert math.isclose(v[space.index[(0, 1)]].real, 0.5)


def test_time_mode_ladders_swap():
    space = fr.TruncatedFock(1, 6, True)
    ops = fr.complex_generators(space, NATURAL)
    v = ops["A+0"].apply(space.basis_vector((2, 0)))
    assert abs(v[space.index[(1, 0)]]) > 0 and abs(v[space.index[(3, 0)]]) == 0
    u = fr.rho_U(fr.TruncatedFock(2, 6, True), NATURAL)
    sp2 = fr.TruncatedFock(2, 6, True)
    assert math.isclose(u.apply(sp2.basis_vector((2, 1, 0)))[sp2.index[(2, 1, 0)]].real, -0.5)


def test_central_element_and_config_validation():
    space = fr.TruncatedFock(1, 3)
    assert np.allclose(fr.rho_I(space, fr.RepConfig(2, 3)).dense(), 3 * np.eye(space.dim))
    for s, k in ((1, 1), (0, 1), (2, 0), (2, -1)):
        with pytest.raises(ValueError):
            fr.RepConfig(s, k)
    assert fr.RepConfig.matched(3).kappa == Fraction(3, 2)


def test_vacuum_expectations():
    space = fr.TruncatedFock(1, 6)
    ops = fr.real_generators(space, NATURAL)
    vac = space.basis_vector((0,))
    q, p = ops["Q1"].dense(), ops["P1"].dense()
    assert math.isclose((vac.conj() @ (q @ q + p @ p) @ vac).real, 1.0)
    assert np.isclose(p[space.index[(0,)], space.index[(1,)]], -1j / math.sqrt(2))
    diag = np.diag(ops["M11"].dense()).real[:4]
    assert np.allclose(diag, [(2 * k + 1) * NATURAL.lam for k in range(4)])


@pytest.mark.parametrize("name", ["Q1", "P1", "J12", "M11", "M12", "T", "E", "K1", "N2", "R"])
def test_coordinate_forms(name):
    space = fr.TruncatedFock(2, 5, True)
    assert fr.coordinate_check(name, space, MATCHED, depth=2) <= 1e-10


@pytest.mark.parametrize("name", ["J1", "J2", "J3"])
def test_coordinate_forms_axial(name):
    assert fr.coordinate_check(name, fr.TruncatedFock(3, 4), NATURAL) <= 1e-10


def test_real_generators_hermitian():
    space = fr.TruncatedFock(2, 6, True)
    for name, op in fr.real_generators(space, MATCHED).items():
        assert fr.hermiticity_residual(op) <= 1e-14, name


def test_degenerate_limit_probe():
    probe = fr.degenerate_limit_probe(1, Fraction(2), ["1", "1/2", "1/4", "1/8", "1/16"])
    assert probe.slope_error <= 1e-12
    assert math.isclose(probe.slope, 1.0, rel_tol=1e-12)
    with pytest.raises(ValueError):
        fr.degenerate_limit_probe(1, Fraction(2), ["1/2", "1"])


@pytest.mark.parametrize("alpha", [2, 3])
def test_u_n_casimir_degeneracy(alpha):
    space = fr.TruncatedFock(2, 8)
    for cfg in (NATURAL, MATCHED):
        assert fr.degeneracy_residual(space, cfg, alpha) <= 1e-10


def test_printed_degeneracy_form_disagrees():
    space = fr.TruncatedFock(2, 8)
    assert fr.printed_degeneracy_residual(space, NATURAL, 2) > 1


# -- Hermite functions -----------------------------------------------------------------


def test_hermite_orthonormal_64_point():
    x, w = fr.quadrature(64)
    tab = fr.hermite_table(20, x)
    gram = (tab * w) @ tab.T
    assert np.abs(gram - np.eye(21)).max() <= 1e-10


def test_hermite_ground_state_value():
    assert math.isclose(fr.hermite_fn(0, 0.0), math.pi ** -0.25)
    assert math.isclose(fr.hermite_fn(0, 0.0), 0.7511255444649425, rel_tol=1e-15)


@pytest.mark.parametrize("k", [0, 1, 2, 7, 20])
def test_oscillator_equation_exact(k):
    expansion = oracles.oscillator_expansion_exact(k)
    assert expansion[k] == 2 * k + 1
    assert all(v == 0 for m, v in expansion.items() if m != k)


@given(st.integers(0, 30), st.floats(-6, 6))
def test_hermite_matches_sympy(k, x):
    ref = float(sympy.hermite(k, x) * sympy.exp(-x * x / 2) / sympy.sqrt(2**k * sympy.factorial(k) * sympy.sqrt(sympy.pi)))
    assert math.isclose(fr.hermite_fn(k, x), ref, rel_tol=1e-9, abs_tol=1e-12)


def test_hermite_derivative_against_finite_difference():
    x = np.linspace(-3, 3, 13)
    h = 1e-5
    num = (fr.hermite_table(6, x + h) - fr.hermite_table(6, x - h)) / (2 * h)
    assert np.abs(fr.hermite_derivative(6, x) - num).max() <= 1e-8


def test_hermite_range_guard():
    with pytest.raises(ValueError):
        fr.hermite_table(fr.HERMITE_MAX_K + 1, 0.0)
    with pytest.raises(ValueError):
        fr.hermite_fn(-1, 0.0)


# -- space bookkeeping ---------------------------------------------------------------


@given(st.integers(1, 3), st.integers(0, 5), st.booleans())
def test_truncated_space_counts(n, n_max, noncompact):
    space = fr.TruncatedFock(n, n_max, noncompact)
    modes = n + int(noncompact)
    assert space.dim == math.comb(n_max + modes, modes)
    assert all(space.index[k] == i for i, k in enumerate(space.states))
    assert len(space.interior(n_max)) == 1


LADDER_SPACE = fr.TruncatedFock(2, 7, True)


@given(st.lists(st.complex_numbers(max_magnitude=1, allow_nan=False, allow_infinity=False), min_size=LADDER_SPACE.dim, max_size=LADDER_SPACE.dim))
def test_unit_ladders_canonical(coeffs):
    space = LADDER_SPACE
    psi = np.array(coeffs) * np.isin(np.arange(space.dim), space.interior(2))
    for a in space.modes:
        for b in space.modes:
            c = fr.commutator(fr.unit_ladder(space, a, "-"), fr.unit_ladder(space, b, "+"))
            expect = psi * (space.eta(a) if a == b else 0)
            assert np.abs(c.apply(psi) - expect).max() <= 1e-12 * max(1.0, np.abs(psi).max())


def test_sparse_operator_text_is_stable():
    space = fr.TruncatedFock(1, 3)
    op = fr.complex_generators(space, NATURAL)["A+1"]
    assert op.to_text() == fr.complex_generators(space, NATURAL)["A+1"].to_text()
    assert op.coordinate_list() == sorted(op.coordinate_list())
