from __future__ import annotations

import random
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

import oracles
from quaplectic import gt_basis as gt


def random_labels(count: int, seed: int = 7) -> list[tuple[int, ...]]:
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(1, 4)
        top = tuple(sorted((rng.randint(-2, 3) for _ in range(n)), reverse=True))
        if top not in out:
            out.append(top)
    return out


labels = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.integers(-2, 3), min_size=n, max_size=n).map(lambda xs: tuple(sorted(xs, reverse=True)))
)


@pytest.mark.parametrize("top", random_labels(20))
def test_dimension_matches_weyl(top):
    space = gt.GTSpace(top)
    assert space.dim == gt.weyl_dimension(top)
    assert space.dim == oracles.hook_content_dimension(top)
    assert space.dim == oracles.brute_force_pattern_count(top)


@pytest.mark.parametrize("top,dim", [((1, 0), 2), ((2, 0), 3), ((1, 0, 0), 3), ((2, 1, 0), 8), ((3, 1, -1), 27), ((2, 1, 1, 0), 15)])
def test_known_dimensions(top, dim):
    assert gt.weyl_dimension(top) == dim


def test_spin_half_matrices_exact():
    space = gt.GTSpace((1, 0))
    ref = oracles.spin_matrices(1)
    for (k, kk), name in (((1, 2), "J+"), ((2, 1), "J-")):
        exact = space.exact_entries(k, kk)
        got = [[sympy.sqrt(exact.get((r, c), Fraction(0))) for c in range(2)] for r in range(2)]
        assert got == ref[name]
    half = {(r, c): sympy.Rational(v.numerator, v.denominator) for (r, c), v in space.exact_entries(1, 1).items()}
    minus = {(r, c): sympy.Rational(v.numerator, v.denominator) for (r, c), v in space.exact_entries(2, 2).items()}
    j3 = [[(half.get((r, c), sympy.Integer(0)) - minus.get((r, c), sympy.Integer(0))) / 2 for c in range(2)] for r in range(2)]
    assert j3 == ref["J3"]


@pytest.mark.parametrize("two_j", [1, 2, 3, 4])
def test_u2_spin_matrices(two_j):
    space = gt.GTSpace((two_j, 0))
    ref = oracles.spin_matrices(two_j)
    plus = np.array(ref["J+"], dtype=float)
    assert np.allclose(space.sigma_Z(1, 2), plus, atol=1e-15)
    assert np.allclose(space.sigma_Z(2, 1), plus.T, atol=1e-15)


@given(labels)
def test_gl_relations(top):
    space = gt.GTSpace(top)
    n = space.n
    mats = {(a, b): space.sigma_Z(a, b) for a in range(1, n + 1) for b in range(1, n + 1)}
    for (a, b), x in mats.items():
        for (c, d), y in mats.items():
            rhs = (b == c) * mats[(a, d)] - (a == d) * mats[(c, b)]
            assert np.abs(x @ y - y @ x - rhs).max() <= 1e-12


CASIMIR_LABELS = [(1, 0), (2, 0), (2, 1), (3, -1), (0, 0), (4, 2), (1, 0, 0), (2, 1, 0), (2, 2, 0), (3, 1, -1), (1, 1, 1), (3, 0, 0)]


@pytest.mark.parametrize("top", CASIMIR_LABELS)
def test_casimir_polynomials_match_operators(top):
    n = len(top)
    values = gt.un_casimirs(top, n)
    for alpha, value in enumerate(values, start=1):
        exact = gt.casimir_polynomial(top, alpha)
        assert exact.denominator == 1
        assert abs(value - round(value)) <= 1e-9 and Fraction(round(value)) == exact


def test_casimir_reference_values():
    assert gt.un_casimirs((2, 1, 0), 3) == [3, 9, 30]
    assert gt.casimir_polynomial((1, 0), 2) == 2


def test_label_validation():
    with pytest.raises(ValueError):
        gt.IrrepLabel((0, 1))
    with pytest.raises(ValueError):
        gt.IrrepLabel(())
    assert gt.IrrepLabel.parse("2, 1,0").top == (2, 1, 0)
    with pytest.raises(IndexError):
        gt.GTSpace((1, 0)).sigma_Z(0, 1)


def test_scalar_sigma():
    s = gt.scalar_sigma(3, 2)
    assert s[(1, 1)][0, 0] == 3 and s[(1, 2)][0, 0] == 0
    lor = gt.scalar_sigma(2, 2, (-1, 1, 1))
    assert lor[(0, 0)][0, 0] == -2


# -- u(1,n) ladder modules ---------------------------------------------------------------


@pytest.mark.parametrize("n,grade", [(1, 1), (2, 1), (2, 2), (3, 1)])
def test_ladder_relations_on_interior(n, grade):
    lad = gt.LadderSpace(n, grade, 4)
    mats = gt.u1n_generators(lad)
    eta = lambda a, b: (-1 if a == 0 else 1) if a == b else 0  # noqa: E731
    keep = lad.interior_mask()
    for (a, b), x in mats.items():
        for (c, d), y in mats.items():
            rhs = eta(b, c) * mats[(a, d)] - eta(a, d) * mats[(c, b)]
            diff = (x @ y - y @ x - rhs)[np.ix_(keep, keep)]
            assert np.abs(diff).max() <= 1e-12


@pytest.mark.parametrize("n,grade", [(1, 1), (2, 2), (3, 1), (2, 0)])
def test_ladder_trace_is_scalar(n, grade):
    lad = gt.LadderSpace(n, grade, 3)
    u = -lad.sigma_Z(0, 0) + sum(lad.sigma_Z(a, a) for a in range(1, n + 1))
    assert np.allclose(u, (grade - 1) * np.eye(lad.dim))
    assert lad.d1 == grade - 1
