from __future__ import annotations

import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from quaplectic import casimir_fields as cf
from quaplectic.fock_rep import RepConfig, TruncatedFock, unit_ladder
from quaplectic.gt_basis import LadderSpace

UNIT = RepConfig(Fraction(2), Fraction(2))  # a = 1
NATURAL = RepConfig(Fraction(2), Fraction(1))


@pytest.mark.parametrize("s", [2, 3, -1])
def test_compact_boundary_conditions(s):
    rep = cf.verify_boundary_conditions(s, 2, n_max=8)
    assert rep.realized
    assert rep.max_deviation <= 1e-10 and rep.shift_deviation <= 1e-10
    assert rep.c1 == Fraction(s, s - 1) and rep.c2 == 2 * rep.a
    assert len(rep.labels_checked) >= 6


def test_noncompact_boundary_conditions():
    rep = cf.verify_boundary_conditions(2, 3, noncompact=True)
    assert rep.realized and rep.coupling_rule == "k = d1"


@pytest.mark.parametrize("s", [0, 1])
def test_boundary_values_reject_degenerate_s(s):
    with pytest.raises(ValueError):
        cf.boundary_values(s, 2)


def test_boundary_values_exact():
    assert cf.boundary_values(3, 2) == (Fraction(3, 4), Fraction(3, 2), Fraction(3, 2))
    assert cf.boundary_values(-1, 3, noncompact=True) == (Fraction(1, 4), Fraction(1, 2), Fraction(1, 2))


def test_mismatched_label_leaves_matched_value():
    # the label (2, 0) carries d1 = 2, so only the l = 2 block sits at c2
    a, c1, c2 = cf.boundary_values(2, 2)
    space = cf.ProductSpace.compact((2, 0), 6)
    rep = cf.spectrum(cf.build_C(2, space, RepConfig(Fraction(2), c1)))
    by_grade = {b.grade: np.array(b.eigenvalues) for b in rep.blocks}
    assert np.abs(by_grade[2] - float(c2)).max() <= 1e-10
    assert np.abs(by_grade[0] - float(c2)).min() > 1


@pytest.mark.parametrize("n", [1, 2, 3])
def test_compact_scalar_spectrum(n):
    space = cf.ProductSpace.scalar(n, 6)
    rep = cf.spectrum(cf.build_C(2, space, UNIT))
    for blk in rep.blocks:
        assert np.abs(np.array(blk.eigenvalues) - (2 * blk.grade + n)).max() <= 1e-10
        assert blk.dim == math.comb(blk.grade + n - 1, n - 1)


def test_noncompact_scalar_spectrum():
    space = cf.ProductSpace.scalar(3, 8, True)
    rep = cf.spectrum(cf.build_C(2, space, UNIT), depth=1)
    grades = [b.grade for b in rep.blocks]
    assert min(grades) < 0 < max(grades)
    for blk in rep.blocks:
        assert np.abs(np.array(blk.eigenvalues) - (2 * blk.grade + 2)).max() <= 1e-10
        assert blk.residual <= 1e-10


def test_noncompact_ladder_module_spectrum():
    space = cf.ProductSpace(TruncatedFock(2, 6, True), LadderSpace(2, 1, 3))
    rep = cf.spectrum(cf.build_C(2, space, UNIT), depth=2)
    for blk in rep.blocks:
        assert np.abs(np.array(blk.eigenvalues) - (2 * blk.grade + 1)).max() <= 1e-10


def _diagonal_gl_residual(op: cf.FieldOperator) -> float:
    space = op.space
    worst = 0.0
    for a in space.modes:
        for b in space.modes:
            pair = (unit_ladder(space.fock, a, "+") @ unit_ladder(space.fock, b, "-")).matrix
            k = space.lift_internal(space.sigma(a, b)) + space.lift_fock(pair)
            d = op.matrix @ k - k @ op.matrix
            worst = max(worst, float(abs(d).max()) if d.nnz else 0.0)
    return worst


@pytest.mark.parametrize("label", [(1, 0), (2, 1), (1, 0, 0)])
@pytest.mark.parametrize("cfg", [NATURAL, RepConfig(Fraction(3), Fraction(2))])
def test_casimir_fields_are_rotation_invariant(label, cfg):
    space = cf.ProductSpace.compact(label, 5)
    for order in (2, 4):
        assert _diagonal_gl_residual(cf.build_C(order, space, cfg)) <= 1e-10


@pytest.mark.parametrize("label", [(1, 0), (2, 1)])
def test_projective_generators_against_casimir_fields(label):
    space = cf.ProductSpace.compact(label, 5)
    res = cf.commutator_residuals(cf.build_C(2, space, NATURAL), NATURAL)
    assert max(v for k, v in res.items() if k[0] in "ZI") <= 1e-10
    # the ladders move between blocks, so they shift the value instead
    assert min(v for k, v in res.items() if k[0] == "A") > 0.1
    # rho(Z) scales its internal and Fock parts differently unless s = -1,
    # so the sigma x b+b cross term in C4 only sees the diagonal action
    res = cf.commutator_residuals(cf.build_C(4, space, NATURAL), NATURAL)
    assert max(v for k, v in res.items() if k[0] == "Z") > 1
    minus = RepConfig(Fraction(-1), Fraction(1, 2))
    res = cf.commutator_residuals(cf.build_C(4, space, minus), minus)
    assert max(v for k, v in res.items() if k[0] == "Z") <= 1e-10


def test_ladder_shift():
    assert cf.ladder_shift_residual(cf.ProductSpace.compact((1, 0), 8), RepConfig.matched(2)) <= 1e-10
    assert cf.ladder_shift_residual(cf.ProductSpace.scalar(3, 8, True), NATURAL) <= 1e-10


def test_low_orders_are_scalar():
    space = cf.ProductSpace.scalar(2, 3)
    assert np.allclose(cf.build_C(1, space, NATURAL).dense(), np.eye(space.dim))
    with pytest.raises(ValueError):
        cf.build_C(3, space, NATURAL)
    with pytest.raises(ValueError):
        cf.build_C(6, space, NATURAL)


def test_product_space_validation():
    with pytest.raises(ValueError):
        cf.ProductSpace(TruncatedFock(2, 4, True), cf.GTSpace((1, 0)))
    with pytest.raises(ValueError):
        cf.ProductSpace(TruncatedFock(2, 4), LadderSpace(2, 1, 2))
    with pytest.raises(IndexError):
        cf.build_W(0, 1, cf.ProductSpace.scalar(2, 3), NATURAL)


# -- fourth-order reduction -------------------------------------------------------------


@pytest.mark.parametrize("grade", [0, 1, 2, 3])
def test_derived_reduction_holds(grade):
    space = cf.ProductSpace.compact((1, 0), 8)
    rep = cf.verify_C4_reduction(space, RepConfig.matched(2), grade, "derived", "invariant")
    assert rep.ok(1e-9)


@pytest.mark.parametrize("s", [3, -1])
def test_derived_reduction_other_s(s):
    space = cf.ProductSpace.compact((2, 1), 5)
    cfg = RepConfig.matched(s)
    for grade in (1, 2):
        assert cf.verify_C4_reduction(space, cfg, grade, "derived", "invariant").ok()


def test_printed_reduction_fails_at_l2():
    space = cf.ProductSpace.compact((1, 0), 8)
    rep = cf.verify_C4_reduction(space, RepConfig.matched(2), 2, "printed", "printed")
    assert not rep.ok(1e-9)
    assert len(rep.c4_values) == 2


def test_reduction_argument_checks():
    space = cf.ProductSpace.compact((1, 0), 4)
    with pytest.raises(ValueError):
        cf.verify_C4_reduction(space, NATURAL, 2, "guessed")
    with pytest.raises(ValueError):
        cf.reduction_lhs(space, "sideways")
    with pytest.raises(ValueError):
        cf.verify_C4_reduction(space, NATURAL, 9)
    with pytest.raises(ValueError):
        cf.verify_C4_reduction(cf.ProductSpace.scalar(2, 4, True), NATURAL, 0)


# -- coordinate equations ---------------------------------------------------------------


@given(st.lists(st.integers(0, 6), min_size=1, max_size=3))
def test_compact_oscillator_pde(quanta):
    rep = cf.oscillator_pde_check(quanta, grid=21)
    assert rep.eigenvalue == 2 * sum(quanta) + len(quanta)
    assert rep.coefficient_residual <= 1e-12 and rep.grid_residual <= 1e-10


@given(st.lists(st.integers(0, 6), min_size=2, max_size=3))
def test_noncompact_oscillator_pde(quanta):
    rep = cf.oscillator_pde_check(quanta, noncompact=True, grid=21)
    assert rep.eigenvalue == 2 * (sum(quanta[1:]) - quanta[0]) + len(quanta) - 2
    assert rep.coefficient_residual <= 1e-12 and rep.grid_residual <= 1e-10


def test_mass_moments_of_vacuum():
    fock = TruncatedFock(2, 6, True)
    state = fock.basis_vector((0, 0, 0))
    mean, var = cf.mass_moments(state, fock, NATURAL)
    # a Gaussian in every mode is not a mass eigenstate
    assert var > 0.1
    with pytest.raises(ValueError):
        cf.mass_moments(2 * state, fock, NATURAL)
    with pytest.raises(ValueError):
        cf.mass_moments(fock.basis_vector((6, 0, 0)), fock, NATURAL)
    with pytest.raises(ValueError):
        cf.mass_operator(TruncatedFock(2, 4), NATURAL)


# -- reciprocity on the Fock space -------------------------------------------------------


@pytest.mark.parametrize("kind", ["qp", "te"])
def test_born_conjugation_keeps_spectrum(kind):
    space = cf.ProductSpace.scalar(2, 6, True)
    op = cf.build_C(2, space, UNIT)
    img = cf.born_conjugate(op, kind)
    a = cf.multiset(sum((b.eigenvalues for b in cf.spectrum(op, 1).blocks), []))
    b = cf.multiset(sum((b.eigenvalues for b in cf.spectrum(img, 1).blocks), []))
    assert a == b


def test_born_phases_are_unitary():
    fock = TruncatedFock(2, 4, True)
    for kind in ("qp", "te"):
        assert np.allclose(np.abs(cf.born_fock_phases(fock, kind)), 1.0)
    with pytest.raises(ValueError):
        cf.born_fock_phases(TruncatedFock(2, 4), "te")


# -- reports ---------------------------------------------------------------------------


def _small_report() -> cf.SpectrumReport:
    space = cf.ProductSpace.scalar(1, 2)
    return cf.spectrum(cf.build_C(2, space, UNIT), config=cf.spectrum_config(space, UNIT))


def test_report_formats():
    rep = _small_report()
    data = json.loads(rep.to_json())
    assert data["config"]["n"] == 1 and [b["grade"] for b in data["blocks"]] == [0, 1, 2]
    assert rep.to_csv().splitlines()[0] == "grade,index,eigenvalue"
    assert rep.to_csv().splitlines()[1] == "0,0,1.0"
    assert rep.to_markdown().splitlines()[2].startswith("| 0 | 1 | 1 |")
    assert rep.to_json() == _small_report().to_json()


def test_zero_truncation_single_block():
    space = cf.ProductSpace.scalar(2, 0)
    rep = cf.spectrum(cf.build_C(2, space, UNIT))
    assert [(b.grade, b.eigenvalues) for b in rep.blocks] == [(0, [2.0])]


def test_multiset_formatting():
    assert cf.multiset([1.0, 1.0 + 1e-12, -0.0]) == [(0.0, 1), (1.0, 2)]
    assert cf.format_multiset([2.0, 2.0, 3.5]) == "2 (x2), 3.5"
