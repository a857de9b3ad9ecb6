"""Casimir field operators on internal (GT or ladder) space tensor Fock space.

The field operators are

    W_ab = 1 (x) (1 + c1/s) sym(b_a^+ b_b)  -  c1 sigma(Z_ab) (x) 1

with unit ladders ``b`` (mode 0 role-swapped when noncompact), Weyl order
``sym(b_a^+ b_b) = b_a^+ b_b + eta_ab/2`` and ``c1`` the central eigenvalue.
The Fock factor is ``rho(A+_a A-_b) - c1 rho(Z_ab)`` with
``rho(Z) = -(1/s) sym(b^+ b)``; it equals ``2a sym(b^+ b)`` with
``a = (1 + c1/s)/2``, which in coordinates is ``a (x_a x_b - d_a d_b)``.

Compact: ``C2 = a (2l + n) - c1 d1``.  Noncompact:
``C2 = a (2k + n - 1) - c1 d1`` with ``k = sum k_i - k_0``.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .fock_rep import (
    RepConfig,
    TruncatedFock,
    hermite_table,
    real_generators,
    unit_ladder,
)
from .gt_basis import GTSpace, IrrepLabel, LadderSpace, un_casimirs

BRACKET_TOL = 1e-12
REDUCTION_TOL = 1e-9


class TrivialInternal:
    """One-dimensional internal space with ``sigma = 0``."""

    dim = 1

    def sigma_Z(self, a: int, b: int) -> np.ndarray:
        return np.zeros((1, 1))


class ProductSpace:
    """Internal space tensor truncated Fock space; internal index most significant."""

    def __init__(self, fock: TruncatedFock, internal: GTSpace | LadderSpace | None = None) -> None:
        if isinstance(internal, GTSpace) and (fock.noncompact or internal.n != fock.n):
            raise ValueError("a GT space needs a compact Fock space of the same dimension")
        if isinstance(internal, LadderSpace) and (not fock.noncompact or internal.n != fock.n):
            raise ValueError("a ladder space needs a noncompact Fock space of the same dimension")
        self.fock = fock
        self.internal = internal if internal is not None else TrivialInternal()
        self.dim = self.internal.dim * fock.dim
        self.grades = np.tile(fock.grades, self.internal.dim)
        self.totals = np.tile(np.array([sum(k) for k in fock.states]), self.internal.dim)

    @classmethod
    def compact(cls, label: Sequence[int], n_max: int = 8) -> ProductSpace:
        lab = IrrepLabel(tuple(label))
        return cls(TruncatedFock(lab.n, n_max), GTSpace(lab))

    @classmethod
    def scalar(cls, n: int, n_max: int = 8, noncompact: bool = False) -> ProductSpace:
        return cls(TruncatedFock(n, n_max, noncompact))

    @property
    def n(self) -> int:
        return self.fock.n

    @property
    def modes(self) -> tuple[int, ...]:
        return self.fock.modes

    @property
    def d1(self) -> int:
        """Eigenvalue of ``eta^{ab} sigma(Z_ab)``."""
        if isinstance(self.internal, GTSpace):
            return sum(self.internal.label.top)
        if isinstance(self.internal, LadderSpace):
            return self.internal.d1
        return 0

    def sigma(self, a: int, b: int) -> np.ndarray:
        return self.internal.sigma_Z(a, b)

    def block(self, grade: int) -> np.ndarray:
        return np.flatnonzero(self.grades == grade)

    def interior(self, depth: int) -> np.ndarray:
        """Rows whose Fock part lies in ``interior(depth)`` and, for a ladder, on an interior rung."""
        keep = self.totals <= self.fock.n_max - depth
        if isinstance(self.internal, LadderSpace):
            keep &= np.repeat(self.internal.interior_mask(), self.fock.dim)
        return np.flatnonzero(keep)

    def lift_fock(self, op: sp.spmatrix) -> sp.csr_matrix:
        return sp.kron(sp.identity(self.internal.dim), op, format="csr")

    def lift_internal(self, mat: np.ndarray) -> sp.csr_matrix:
        return sp.kron(sp.csr_matrix(mat), sp.identity(self.fock.dim), format="csr")


@dataclass(frozen=True)
class FieldOperator:
    space: ProductSpace
    matrix: sp.csr_matrix = field(repr=False)

    def __post_init__(self) -> None:
        if self.matrix.shape != (self.space.dim, self.space.dim):
            raise ValueError("operator does not match the product space")

    def __add__(self, other: FieldOperator) -> FieldOperator:
        return FieldOperator(self.space, self.matrix + other.matrix)

    def __sub__(self, other: FieldOperator) -> FieldOperator:
        return FieldOperator(self.space, self.matrix - other.matrix)

    def __matmul__(self, other: FieldOperator) -> FieldOperator:
        return FieldOperator(self.space, (self.matrix @ other.matrix).tocsr())

    def __mul__(self, scalar: complex) -> FieldOperator:
        return FieldOperator(self.space, self.matrix * scalar)

    __rmul__ = __mul__

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()


def _coupling(cfg: RepConfig, coupling: float | Fraction | None) -> float:
    return float(cfg.kappa if coupling is None else coupling)


def _eta(space: ProductSpace, a: int) -> int:
    return space.fock.eta(a)


def weyl_pair(space: ProductSpace, a: int, b: int) -> sp.csr_matrix:
    """``sym(b_a^+ b_b)`` on the Fock factor."""
    op = (unit_ladder(space.fock, a, "+") @ unit_ladder(space.fock, b, "-")).matrix
    if a == b:
        op = op + sp.identity(space.fock.dim, format="csr") * (0.5 * _eta(space, a))
    return op


def field_a(cfg: RepConfig, coupling: float | Fraction | None = None) -> float:
    return 0.5 * (1.0 + _coupling(cfg, coupling) / float(cfg.s))


def build_W(a: int, b: int, space: ProductSpace, cfg: RepConfig, coupling: float | Fraction | None = None) -> FieldOperator:
    """``rho(W_ab)``; ``coupling`` overrides the central eigenvalue (``0`` leaves the ladder product)."""
    if a not in space.modes or b not in space.modes:
        raise IndexError(f"indices must lie in {space.modes}")
    c1 = _coupling(cfg, coupling)
    fock = space.lift_fock(weyl_pair(space, a, b)) * (1.0 + c1 / float(cfg.s))
    internal = space.lift_internal(space.sigma(a, b)) * c1
    return FieldOperator(space, (fock - internal).tocsr())


def build_all_W(space: ProductSpace, cfg: RepConfig, coupling: float | Fraction | None = None) -> dict[tuple[int, int], FieldOperator]:
    return {(a, b): build_W(a, b, space, cfg, coupling) for a in space.modes for b in space.modes}


def build_C(order: int, space: ProductSpace, cfg: RepConfig, coupling: float | Fraction | None = None) -> FieldOperator:
    """``C_0 = C_1 = c1`` and ``C_2m = sum eta.. W_{a1 a2} W_{a2 a3} ... W_{am a1}``."""
    c1 = _coupling(cfg, coupling)
    if order in (0, 1):
        return FieldOperator(space, sp.identity(space.dim, format="csr") * c1)
    if order % 2 or order < 0:
        raise ValueError("Casimir orders are 0, 1 or even")
    m = order // 2
    if m > len(space.modes):
        raise ValueError(f"order {order} exceeds {2 * len(space.modes)}")
    W = build_all_W(space, cfg, coupling)
    total = sp.csr_matrix((space.dim, space.dim))
    for chain in itertools.product(space.modes, repeat=m):
        sign = math.prod(_eta(space, x) for x in chain)
        op = W[(chain[0], chain[1 % m])].matrix
        for t in range(1, m):
            op = op @ W[(chain[t], chain[(t + 1) % m])].matrix
        total = total + op * sign
    return FieldOperator(space, total.tocsr())


def field_generators(space: ProductSpace, cfg: RepConfig, coupling: float | Fraction | None = None) -> dict[str, sp.csr_matrix]:
    """``rho(Z_ab) = sigma(Z_ab) (x) 1 - (1/s) 1 (x) sym(b^+ b)``, ``rho(A) = 1 (x) b`` and ``rho(I) = c1``."""
    out: dict[str, sp.csr_matrix] = {}
    for a in space.modes:
        for b in space.modes:
            out[f"Z{a}{b}"] = (space.lift_internal(space.sigma(a, b)) - space.lift_fock(weyl_pair(space, a, b)) / float(cfg.s)).tocsr()
    for a in space.modes:
        out[f"A+{a}"] = space.lift_fock(unit_ladder(space.fock, a, "+").matrix)
        out[f"A-{a}"] = space.lift_fock(unit_ladder(space.fock, a, "-").matrix)
    out["I"] = sp.identity(space.dim, format="csr") * _coupling(cfg, coupling)
    return out


def commutator_residuals(op: FieldOperator, cfg: RepConfig, depth: int = 2, coupling: float | Fraction | None = None) -> dict[str, float]:
    """``max |[op, rho(X)]|`` on interior rows for every generator ``X``."""
    rows = op.space.interior(depth)
    out = {}
    for name, x in field_generators(op.space, cfg, coupling).items():
        c = (op.matrix @ x - x @ op.matrix)[rows][:, rows]
        out[name] = float(abs(c).max()) if c.nnz else 0.0
    return out


def ladder_shift_residual(space: ProductSpace, cfg: RepConfig, depth: int = 3) -> float:
    """``[C2, rho(A+_a)] = 2a rho(A+_a)``: each raising ladder moves C2 up one oscillator quantum."""
    c2 = build_C(2, space, cfg).matrix
    a = field_a(cfg)
    rows = space.interior(depth)
    worst = 0.0
    for m in space.modes:
        up = space.lift_fock(unit_ladder(space.fock, m, "+").matrix)
        diff = (c2 @ up - up @ c2 - up * (2 * a))[rows][:, rows]
        worst = max(worst, float(abs(diff).max()) if diff.nnz else 0.0)
    return worst


# -- spectra -----------------------------------------------------------------------


@dataclass(frozen=True)
class BlockSpectrum:
    grade: int
    dim: int
    eigenvalues: list[float]
    residual: float


@dataclass(frozen=True)
class SpectrumReport:
    config: dict
    blocks: list[BlockSpectrum]

    def as_dict(self) -> dict:
        return {"config": self.config, "blocks": [asdict(b) for b in self.blocks]}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True)

    def to_markdown(self) -> str:
        lines = ["| grade | dim | eigenvalues (multiplicity) | residual |", "|---:|---:|---|---:|"]
        for b in self.blocks:
            lines.append(f"| {b.grade} | {b.dim} | {format_multiset(b.eigenvalues)} | {b.residual:.1e} |")
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        lines = ["grade,index,eigenvalue"]
        for b in self.blocks:
            lines += [f"{b.grade},{i},{v!r}" for i, v in enumerate(b.eigenvalues)]
        return "\n".join(lines) + "\n"


def multiset(values: Iterable[float], digits: int = 9) -> list[tuple[float, int]]:
    out: dict[float, int] = {}
    for v in values:
        key = round(float(v), digits) + 0.0
        out[key] = out.get(key, 0) + 1
    return sorted(out.items())


def format_multiset(values: Iterable[float]) -> str:
    return ", ".join(f"{v:g}" + (f" (x{m})" if m > 1 else "") for v, m in multiset(values))


def spectrum(
    op: FieldOperator,
    depth: int = 0,
    grades: Iterable[int] | None = None,
    config: dict | None = None,
    herm_tol: float = 1e-9,
) -> SpectrumReport:
    """Per-grade eigensolve on rows with total quanta ``<= n_max - depth``.

    The residual of each block is ``max |(Op - lam) v|`` over all rows of the
    full operator, so leakage out of the block or the kept rows shows up.
    """
    space = op.space
    kept = np.zeros(space.dim, dtype=bool)
    kept[space.interior(depth)] = True
    grade_list = sorted(set(space.grades.tolist())) if grades is None else sorted(set(grades))
    cols = op.matrix.tocsc()
    blocks = []
    for g in grade_list:
        idx = np.flatnonzero((space.grades == g) & kept)
        if idx.size == 0:
            continue
        sub = cols[:, idx].tocsr()
        blk = sub[idx].toarray()
        if np.abs(blk - blk.conj().T).max(initial=0.0) > herm_tol:
            raise ValueError(f"block {g} is not Hermitian")
        vals, vecs = np.linalg.eigh(0.5 * (blk + blk.conj().T))
        resid = float(np.abs(blk @ vecs - vecs * vals).max(initial=0.0))
        outside = np.ones(space.dim, dtype=bool)
        outside[idx] = False
        leak = sub[outside]
        if leak.nnz:
            resid = max(resid, float(np.abs(leak @ vecs).max()))
        blocks.append(BlockSpectrum(int(g), int(idx.size), [float(v) for v in vals], resid))
    return SpectrumReport(dict(config or {}), blocks)


def spectrum_config(space: ProductSpace, cfg: RepConfig, label: Sequence[int] | None = None) -> dict:
    return {
        "s": str(cfg.s),
        "kappa": str(cfg.kappa),
        "label": list(label) if label is not None else None,
        "n": space.n,
        "n_max": space.fock.n_max,
        "noncompact": space.fock.noncompact,
    }


# -- boundary conditions -------------------------------------------------------------


@dataclass(frozen=True)
class BoundaryReport:
    s: Fraction
    n: int
    noncompact: bool
    a: Fraction
    c1: Fraction
    c2: Fraction
    coupling_rule: str
    max_deviation: float
    shift_deviation: float
    labels_checked: tuple[tuple[int, ...], ...]

    @property
    def realized(self) -> bool:
        return self.max_deviation <= 1e-10 and self.shift_deviation <= 1e-10


def boundary_values(s: Fraction | int | str, n: int, noncompact: bool = False) -> tuple[Fraction, Fraction, Fraction]:
    """``a = s/(2(s-1))``, ``c1 = 2a`` and ``c2 = n a`` (or ``(n-1) a`` noncompact)."""
    s = Fraction(s)
    if s == 1:
        raise ValueError("s = 1 is an ordinary representation; the boundary conditions need s != 1")
    if s == 0:
        raise ValueError("s must be nonzero")
    a = s / (2 * (s - 1))
    return a, 2 * a, (n - 1 if noncompact else n) * a


def compact_labels(n: int, max_d1: int) -> list[tuple[int, ...]]:
    """Non-negative non-increasing labels with ``d1 <= max_d1``."""
    out = []
    for top in itertools.product(range(max_d1 + 1), repeat=n):
        if all(x >= y for x, y in zip(top, top[1:])) and sum(top) <= max_d1:
            out.append(top)
    return sorted(out, key=lambda t: (sum(t), t))


def verify_boundary_conditions(
    s: Fraction | int | str,
    n: int = 2,
    noncompact: bool = False,
    n_max: int = 8,
    labels: Iterable[Sequence[int]] | None = None,
    rungs: int = 3,
) -> BoundaryReport:
    """Build with ``kappa = c1`` and compare the C2 spectrum with ``c2`` on the matched blocks.

    Compact: every label (default: all with ``d1 <= min(n_max, 3)``), block
    ``l = d1``; mismatched blocks must sit at ``c2 - (c2 + c1 d1 - 2 a l - n a)``.
    Noncompact: the scalar sector and ladder modules of grade ``1..2``, block
    ``k = d1``; other blocks at ``c2 + a (2k + n - 1) - c1 d1 - (n - 1) a``.
    """
    a, c1, c2 = boundary_values(s, n, noncompact)
    cfg = RepConfig(Fraction(s), c1)
    af, c1f, c2f = float(a), float(c1), float(c2)
    worst = worst_shift = 0.0
    checked = []
    if not noncompact:
        for lab in labels if labels is not None else compact_labels(n, min(n_max, 3)):
            space = ProductSpace.compact(lab, n_max)
            d1 = space.d1
            rep = spectrum(build_C(2, space, cfg))
            for blk in rep.blocks:
                vals = np.array(blk.eigenvalues)
                expect = c2f - (c2f + c1f * d1 - 2 * af * blk.grade - n * af)
                if blk.grade == d1:
                    worst = max(worst, float(np.abs(vals - c2f).max()))
                worst_shift = max(worst_shift, float(np.abs(vals - expect).max()), blk.residual)
            checked.append(tuple(lab))
        rule = "d1 = l"
    else:
        fock = TruncatedFock(n, n_max, True)
        spaces = [ProductSpace(fock)] + [ProductSpace(fock, LadderSpace(n, g, rungs)) for g in (1, 2)]
        for space in spaces:
            d1 = space.d1
            rep = spectrum(build_C(2, space, cfg), depth=2)
            for blk in rep.blocks:
                vals = np.array(blk.eigenvalues)
                expect = af * (2 * blk.grade + n - 1) - c1f * d1
                if blk.grade == d1:
                    worst = max(worst, float(np.abs(vals - c2f).max()))
                worst_shift = max(worst_shift, float(np.abs(vals - expect).max()), blk.residual)
            checked.append((d1,))
        rule = "k = d1"
    return BoundaryReport(Fraction(s), n, noncompact, a, c1, c2, rule, worst, worst_shift, tuple(checked))


# -- fourth-order reduction ------------------------------------------------------------


def printed_f_coefficients(n: int, s: Fraction, c4: float) -> dict[str, float]:
    """Coefficients of ``1, d1, d1^2, d2`` as printed for the compact reduction."""
    s = float(s)
    return {
        "1": n - n * n * (1 / s**2 - 0.25) - 0.5 * c4,
        "d1": -2 + n / s - 1.5 * n,
        "d1^2": 2 * (1 + 1 / n),
        "d2": 0.5,
    }


def derived_f_coefficients(n: int, a: float, c1: float, l: int, c4: float) -> dict[str, float]:
    """Coefficients that make the invariant-orientation reduction exact on block ``l``.

    From ``C4 = 4a^2 (l(l+n) + n/4) - 2 a c1 (S + d1) + c1^2 d2`` with
    ``S = sum sigma(Z_ji) (x) 2 b_i^+ b_j``.
    """
    k = 2 * a * c1
    return {
        "1": (4 * a * a * (l * (l + n) + n / 4) - c4) / k,
        "d1": -1.0,
        "d1^2": 0.0,
        "d2": c1 * c1 / k,
    }


@dataclass(frozen=True)
class ReductionReport:
    grade: int
    c4_values: tuple[float, ...]
    residuals: tuple[float, ...]
    coefficients: str
    orientation: str

    @property
    def residual(self) -> float:
        return max(self.residuals, default=0.0)

    def ok(self, tol: float = REDUCTION_TOL) -> bool:
        return self.residual <= tol


def reduction_lhs(space: ProductSpace, orientation: str = "printed") -> sp.csr_matrix:
    """``sum sigma(Z_ij) (x) 2 b_i^+ b_j`` (printed) or ``sum sigma(Z_ji) (x) 2 b_i^+ b_j`` (invariant)."""
    if orientation not in ("printed", "invariant"):
        raise ValueError("orientation is 'printed' or 'invariant'")
    out = sp.csr_matrix((space.dim, space.dim))
    for i in space.modes:
        for j in space.modes:
            sig = space.sigma(i, j) if orientation == "printed" else space.sigma(j, i)
            pair = (unit_ladder(space.fock, i, "+") @ unit_ladder(space.fock, j, "-")).matrix
            out = out + sp.kron(sp.csr_matrix(sig), pair * 2.0, format="csr")
    return out.tocsr()


def verify_C4_reduction(
    space: ProductSpace,
    cfg: RepConfig,
    grade: int,
    coefficients: str = "printed",
    orientation: str = "printed",
    c4: float | None = None,
    cluster_tol: float = 1e-8,
) -> ReductionReport:
    """Compare the reduction LHS with its scalar RHS on each C4 eigenspace of one block.

    ``c4`` is read from the C4 spectrum on the block (one value per
    eigenspace) unless given explicitly, in which case it is used for the
    whole block.
    """
    if space.fock.noncompact:
        raise ValueError("the reduction is implemented for compact spaces")
    if not isinstance(space.internal, (GTSpace, TrivialInternal)):
        raise ValueError("internal space must be a GT space or trivial")
    idx = space.block(grade)
    if idx.size == 0:
        raise ValueError(f"no block with grade {grade}")
    n = space.n
    c1, a = float(cfg.kappa), field_a(cfg)
    if isinstance(space.internal, GTSpace):
        d1, d2 = un_casimirs(space.internal.label.top, 2)
    else:
        d1, d2 = 0.0, 0.0
    c4_op = build_C(4, space, cfg).matrix[idx][:, idx].toarray()
    lhs = reduction_lhs(space, orientation)[idx][:, idx].toarray()
    vals, vecs = np.linalg.eigh(0.5 * (c4_op + c4_op.T.conj()))
    if c4 is None:
        groups: list[tuple[float, np.ndarray]] = []
        start = 0
        for i in range(1, len(vals) + 1):
            if i == len(vals) or vals[i] - vals[i - 1] > cluster_tol:
                groups.append((float(np.mean(vals[start:i])), vecs[:, start:i]))
                start = i
    else:
        groups = [(float(c4), np.eye(idx.size))]
    residuals, c4s = [], []
    for value, basis in groups:
        if coefficients == "printed":
            f = printed_f_coefficients(n, cfg.s, value)
        elif coefficients == "derived":
            f = derived_f_coefficients(n, a, c1, grade, value)
        else:
            raise ValueError("coefficients are 'printed' or 'derived'")
        rhs = f["1"] + f["d1"] * d1 + f["d1^2"] * d1 * d1 + f["d2"] * d2
        residuals.append(float(np.abs(lhs @ basis - rhs * basis).max()))
        c4s.append(value)
    return ReductionReport(grade, tuple(c4s), tuple(residuals), coefficients, orientation)


# -- coordinate equations ----------------------------------------------------------------


def _apply_q(vec: dict[int, float], sign: int) -> dict[int, float]:
    """``q`` (sign +1) or ``d/dq`` (sign -1) on a Hermite expansion, by the ladder identities."""
    out: dict[int, float] = {}
    for k, c in vec.items():
        if k > 0:
            out[k - 1] = out.get(k - 1, 0.0) + c * math.sqrt(k / 2)
        out[k + 1] = out.get(k + 1, 0.0) + sign * c * math.sqrt((k + 1) / 2)
    return out


def oscillator_one_mode(k: int) -> dict[int, float]:
    """``(q^2 - d^2) eta_k`` as a Hermite expansion."""
    qq = _apply_q(_apply_q({k: 1.0}, 1), 1)
    dd = _apply_q(_apply_q({k: 1.0}, -1), -1)
    keys = set(qq) | set(dd)
    return {j: qq.get(j, 0.0) - dd.get(j, 0.0) for j in keys}


@dataclass(frozen=True)
class PDEReport:
    quanta: tuple[int, ...]
    eigenvalue: int
    coefficient_residual: float
    grid_residual: float


def oscillator_pde_check(quanta: Sequence[int], noncompact: bool = False, grid: int = 41, half_width: float = 5.0) -> PDEReport:
    """Residual of ``(q^2 - d^2 - (2l + n)) psi`` or, noncompact with ``quanta[0] = k0``,
    ``(-t^2 + d_t^2 + q^2 - d_q^2 - (2k + n - 1)) psi`` on ``psi = prod eta_{k_a}``.

    The operator acts mode by mode through the ladder identities; the
    coefficient residual is the exact-expansion remainder and the grid
    residual evaluates the expansion against the product of Hermite functions.
    """
    ks = tuple(int(k) for k in quanta)
    signs = [-1 if (noncompact and i == 0) else 1 for i in range(len(ks))]
    n = len(ks) - (1 if noncompact else 0)
    eig = sum(sg * (2 * k + 1) for sg, k in zip(signs, ks))
    expect = (2 * (sum(ks[1:]) - ks[0]) + n - 1) if noncompact else (2 * sum(ks) + n)
    if eig != expect:
        raise AssertionError("eigenvalue bookkeeping mismatch")
    coeff_res = 0.0
    x = np.linspace(-half_width, half_width, grid)
    tabs = hermite_table(max(ks) + 2, x)
    # each mode contributes sign * (q^2 - d^2) on its own factor
    total = None
    for m, (sg, k) in enumerate(zip(signs, ks)):
        expansion = oscillator_one_mode(k)
        for j, c in expansion.items():
            target = sg * (2 * k + 1) if j == k else 0.0
            coeff_res = max(coeff_res, abs(sg * c - target))
        factor_vals = [sum(c * tabs[j] for j, c in expansion.items()) * sg if mm == m else tabs[kk] for mm, kk in enumerate(ks)]
        term = _outer(factor_vals)
        total = term if total is None else total + term
    psi = _outer([tabs[k] for k in ks])
    grid_res = float(np.abs(total - expect * psi).max())
    return PDEReport(ks, expect, coeff_res, grid_res)


def _outer(factors: list[np.ndarray]) -> np.ndarray:
    out = factors[0]
    for f in factors[1:]:
        out = np.multiply.outer(out, f)
    return out


# -- mass moments ---------------------------------------------------------------------


def mass_operator(fock: TruncatedFock, cfg: RepConfig) -> sp.csr_matrix:
    """``E^2 - sum_i P_i^2`` in natural units."""
    if not fock.noncompact:
        raise ValueError("mass moments need the time mode")
    ops = real_generators(fock, cfg)
    out = ops["E"].matrix @ ops["E"].matrix
    for i in range(1, fock.n + 1):
        p = ops[f"P{i}"].matrix
        out = out - p @ p
    return out.tocsr()


def mass_moments(state: np.ndarray, fock: TruncatedFock, cfg: RepConfig) -> tuple[float, float]:
    """Mean and variance of the squared-mass operator; ``mu^2`` is not an eigenvalue."""
    state = np.asarray(state, dtype=complex)
    if abs(np.linalg.norm(state) - 1.0) > 1e-12:
        raise ValueError("state must be normalized")
    outside = np.setdiff1d(np.arange(fock.dim), fock.interior(2))
    if np.abs(state[outside]).max(initial=0.0) > 0:
        raise ValueError("state must lie in interior(2) for exact moments")
    mu2 = mass_operator(fock, cfg)
    v = mu2 @ state
    mean = float(np.vdot(state, v).real)
    return mean, float(np.vdot(v, v).real - mean * mean)


# -- Born reciprocity on the Fock space -----------------------------------------------


def born_fock_phases(fock: TruncatedFock, kind: str = "qp") -> np.ndarray:
    """Diagonal unitary ``U`` with ``U^+ rho(X) U = rho(B X)`` on the translation generators.

    ``qp`` acts with ``(-i)^{k_i}`` on the spatial modes; ``te`` with ``i^{k_0}``
    on the time mode.  The index permutation is the identity, so the induced
    map is a monomial (phase times permutation) matrix.
    """
    if kind == "qp":
        return np.array([(-1j) ** sum(k[1:] if fock.noncompact else k) for k in fock.states])
    if kind == "te":
        if not fock.noncompact:
            raise ValueError("the t-e exchange needs the time mode")
        return np.array([(1j) ** k[0] for k in fock.states])
    raise ValueError("kind is 'qp' or 'te'")


def born_conjugate(op: FieldOperator, kind: str = "qp") -> FieldOperator:
    u = sp.diags(np.tile(born_fock_phases(op.space.fock, kind), op.space.internal.dim), format="csr")
    return FieldOperator(op.space, (u.conj().T @ op.matrix @ u).tocsr())
