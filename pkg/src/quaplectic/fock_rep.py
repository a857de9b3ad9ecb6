"""Truncated bosonic Fock space and the Hermitian ladder realization.

Basis vectors ``|K>`` carry one occupation number per mode.  In the
noncompact case mode 0 is the time direction and its ladder roles are
swapped, so ``rho(A+_0)`` lowers ``k_0``.  With ``b_a^+ = rho(A+_a)/sqrt(kappa)``
and ``b_a = rho(A-_a)/sqrt(kappa)`` every mode then obeys
``[b_a, b_b^+] = eta_ab`` and

* ``rho(Z_ab) = (kappa/s) b_a^+ b_b`` (normal ordered),
* ``[rho X, rho Y] = i lam(X, Y) rho([X, Y])`` with ``lam = kappa/s`` when a
  homogeneous generator takes part and ``lam = 1`` otherwise,
* ``rho(I) = kappa``.

Truncation keeps states with total quanta ``<= N_max``; products of ``d``
ladder operators are exact on ``interior(d)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np
import scipy.sparse as sp

from .lie_core import rotation_names

DEFAULT_N_MAX = 8
HERMITE_MAX_K = 400
BASIS_CHOICES = ("position-time", "momentum-time", "energy-momentum", "energy-position")

FockIndex = tuple[int, ...]


def fock_index(values: Iterable[int]) -> FockIndex:
    out = tuple(int(v) for v in values)
    if any(v < 0 for v in out):
        raise ValueError(f"occupation numbers must be non-negative: {out}")
    return out


@dataclass(frozen=True)
class RepConfig:
    s: Fraction
    kappa: Fraction

    def __post_init__(self) -> None:
        s, kappa = Fraction(self.s), Fraction(self.kappa)
        if s in (0, 1):
            raise ValueError("the projective constant s must differ from 0 and 1")
        if kappa <= 0:
            raise ValueError("kappa must be positive")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "kappa", kappa)

    @classmethod
    def matched(cls, s: Fraction | int | str) -> RepConfig:
        """``kappa = s/(s-1)``, the value the oscillator boundary conditions pick."""
        s = Fraction(s)
        if s == 1:
            raise ValueError("s = 1 admits no matched central charge")
        return cls(s, s / (s - 1))

    @property
    def lam(self) -> float:
        return float(self.kappa / self.s)


class TruncatedFock:
    """States with total quanta ``<= n_max`` in graded-lex order (mode 0 most significant)."""

    def __init__(self, n: int, n_max: int = DEFAULT_N_MAX, noncompact: bool = False) -> None:
        if n < 1:
            raise ValueError("need at least one spatial mode")
        if n_max < 0:
            raise ValueError("n_max must be non-negative")
        self.n = n
        self.n_max = n_max
        self.noncompact = noncompact
        self.modes: tuple[int, ...] = tuple(range(0, n + 1)) if noncompact else tuple(range(1, n + 1))
        states = [
            k
            for total in range(n_max + 1)
            for k in sorted(_compositions(total, len(self.modes)), reverse=True)
        ]
        self.states: list[FockIndex] = states
        self.index: dict[FockIndex, int] = {k: i for i, k in enumerate(states)}

    @property
    def n_modes(self) -> int:
        return len(self.modes)

    @property
    def dim(self) -> int:
        return len(self.states)

    def eta(self, label: int) -> int:
        return -1 if (self.noncompact and label == 0) else 1

    def position(self, label: int) -> int:
        try:
            return self.modes.index(label)
        except ValueError:
            raise IndexError(f"mode {label} not in {self.modes}") from None

    def interior(self, d: int) -> np.ndarray:
        """Row indices with total quanta ``<= n_max - d``."""
        return np.array([i for i, k in enumerate(self.states) if sum(k) <= self.n_max - d], dtype=int)

    def grade(self, k: FockIndex) -> int:
        """``l = sum k_i`` (compact) or ``k = -k_0 + sum k_i`` (noncompact)."""
        if self.noncompact:
            return sum(k[1:]) - k[0]
        return sum(k)

    @cached_property
    def grades(self) -> np.ndarray:
        return np.array([self.grade(k) for k in self.states])

    def basis_vector(self, k: Iterable[int]) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[self.index[fock_index(k)]] = 1.0
        return v


def _compositions(total: int, parts: int) -> list[tuple[int, ...]]:
    if parts == 1:
        return [(total,)]
    return [(k,) + rest for k in range(total + 1) for rest in _compositions(total - k, parts - 1)]


@dataclass(frozen=True)
class SparseOperator:
    space: TruncatedFock
    matrix: sp.csr_matrix = field(repr=False)

    def __post_init__(self) -> None:
        m = sp.csr_matrix(self.matrix, dtype=complex)
        if m.shape != (self.space.dim, self.space.dim):
            raise ValueError(f"shape {m.shape} does not match space dimension {self.space.dim}")
        m.eliminate_zeros()
        object.__setattr__(self, "matrix", m)

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def __add__(self, other: SparseOperator) -> SparseOperator:
        return SparseOperator(self.space, self.matrix + other.matrix)

    def __sub__(self, other: SparseOperator) -> SparseOperator:
        return SparseOperator(self.space, self.matrix - other.matrix)

    def __neg__(self) -> SparseOperator:
        return SparseOperator(self.space, -self.matrix)

    def __mul__(self, scalar: complex) -> SparseOperator:
        return SparseOperator(self.space, self.matrix * complex(scalar))

    __rmul__ = __mul__

    def __matmul__(self, other: SparseOperator) -> SparseOperator:
        return SparseOperator(self.space, self.matrix @ other.matrix)

    @property
    def H(self) -> SparseOperator:
        return SparseOperator(self.space, self.matrix.conj().T)

    def apply(self, vec: np.ndarray) -> np.ndarray:
        return self.matrix @ vec

    def block(self, rows: np.ndarray, cols: np.ndarray | None = None) -> np.ndarray:
        cols = rows if cols is None else cols
        return self.matrix[rows][:, cols].toarray()

    def coordinate_list(self) -> list[tuple[int, int, float, float]]:
        coo = self.matrix.tocoo()
        order = np.lexsort((coo.col, coo.row))
        return [(int(coo.row[i]), int(coo.col[i]), float(coo.data[i].real), float(coo.data[i].imag)) for i in order]

    def to_text(self) -> str:
        return "".join(f"{r} {c} {re!r} {im!r}\n" for r, c, re, im in self.coordinate_list())


def commutator(x: SparseOperator, y: SparseOperator) -> SparseOperator:
    return x @ y - y @ x


def identity(space: TruncatedFock, scale: complex = 1.0) -> SparseOperator:
    return SparseOperator(space, sp.identity(space.dim, dtype=complex, format="csr") * scale)


# -- ladder operators ----------------------------------------------------------


def _raw_ladder(space: TruncatedFock, label: int, create: bool) -> sp.csr_matrix:
    """Unit-normalized ``a^+`` (create) or ``a`` on one mode, ignoring role swaps."""
    pos = space.position(label)
    rows, cols, vals = [], [], []
    for col, k in enumerate(space.states):
        kk = list(k)
        if create:
            kk[pos] += 1
            amp = math.sqrt(k[pos] + 1)
        else:
            if k[pos] == 0:
                continue
            kk[pos] -= 1
            amp = math.sqrt(k[pos])
        row_ = space.index.get(tuple(kk))
        if row_ is not None:
            rows.append(row_)
            cols.append(col)
            vals.append(amp)
    return sp.csr_matrix((vals, (rows, cols)), shape=(space.dim, space.dim), dtype=complex)


def unit_ladder(space: TruncatedFock, label: int, sign: str) -> SparseOperator:
    """``b^+_a`` for sign '+' and ``b_a`` for '-'; mode 0 of a noncompact space swaps roles."""
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    create = sign == "+"
    if space.noncompact and label == 0:
        create = not create
    return SparseOperator(space, _raw_ladder(space, label, create))


def ladder(space: TruncatedFock, label: int, sign: str, cfg: RepConfig) -> SparseOperator:
    """``rho(A^sign_label) = sqrt(kappa) * b^sign_label``."""
    return unit_ladder(space, label, sign) * math.sqrt(cfg.kappa)


def rho_Z(space: TruncatedFock, a: int, b: int, cfg: RepConfig) -> SparseOperator:
    """``(kappa/s) b_a^+ b_b``; on spatial modes ``Z_ii |K> = (kappa/s) k_i |K>``."""
    return (unit_ladder(space, a, "+") @ unit_ladder(space, b, "-")) * cfg.lam


def rho_U(space: TruncatedFock, cfg: RepConfig) -> SparseOperator:
    """``eta^{ab} rho(Z_ab)``: diagonal ``(kappa/s) * grade``."""
    diag = np.array([cfg.lam * space.grade(k) for k in space.states], dtype=complex)
    return SparseOperator(space, sp.diags(diag, format="csr"))


def rho_I(space: TruncatedFock, cfg: RepConfig) -> SparseOperator:
    return identity(space, float(cfg.kappa))


def complex_generators(space: TruncatedFock, cfg: RepConfig) -> dict[str, SparseOperator]:
    """Images of the complex basis ``Z_ab, A+_a, A-_a, I`` under the preset's names."""
    out: dict[str, SparseOperator] = {}
    for a in space.modes:
        for b in space.modes:
            out[f"Z{a}{b}"] = rho_Z(space, a, b, cfg)
    for a in space.modes:
        out[f"A+{a}"] = ladder(space, a, "+", cfg)
    for a in space.modes:
        out[f"A-{a}"] = ladder(space, a, "-", cfg)
    out["I"] = rho_I(space, cfg)
    return out


# -- real generators -------------------------------------------------------------


def _basis_phase(space: TruncatedFock, choice: str) -> np.ndarray:
    """Phases ``prod (-i)^{k_a}`` over the modes whose conjugate variable is diagonal."""
    if choice not in BASIS_CHOICES:
        raise ValueError(f"unknown basis choice {choice!r}; expected one of {BASIS_CHOICES}")
    momentum = choice in ("momentum-time", "energy-momentum")
    energy = choice in ("energy-momentum", "energy-position")
    flip = [((label == 0) and energy) or ((label != 0) and momentum) for label in space.modes]
    return np.array([(-1j) ** sum(k for k, f in zip(state, flip) if f) for state in space.states])


def four_generators(space: TruncatedFock, cfg: RepConfig, symmetric: bool = True) -> dict[str, SparseOperator]:
    """``X_a, Y_a, L_ab, M_ab, I`` built from the complex images.

    ``X = (A+ + A-)/sqrt2``, ``Y = i(A+ - A-)/sqrt2``, ``L_ab = i(Z_ab - Z_ba)`` and
    ``M_ab = Z_ab + Z_ba``.  With ``symmetric`` the diagonal ``M_aa`` get the
    Weyl-ordering shift ``(kappa/s) eta_aa``; it is central in the bracket
    table, so the relations are unchanged.
    """
    cx = complex_generators(space, cfg)
    out: dict[str, SparseOperator] = {}
    r2 = math.sqrt(2.0)
    for a, b in itertools.combinations(space.modes, 2):
        out[f"L{a}{b}"] = (cx[f"Z{a}{b}"] - cx[f"Z{b}{a}"]) * 1j
    for a, b in itertools.combinations_with_replacement(space.modes, 2):
        m = cx[f"Z{a}{b}"] + cx[f"Z{b}{a}"]
        if symmetric and a == b:
            m = m + identity(space, cfg.lam * space.eta(a))
        out[f"M{a}{b}"] = m
    for a in space.modes:
        out[f"X{a}"] = (cx[f"A+{a}"] + cx[f"A-{a}"]) * (1 / r2)
    for a in space.modes:
        out[f"Y{a}"] = (cx[f"A+{a}"] - cx[f"A-{a}"]) * (1j / r2)
    out["I"] = cx["I"]
    return out


def real_generators(
    space: TruncatedFock, cfg: RepConfig, basis_choice: str = "position-time", symmetric: bool = True
) -> dict[str, SparseOperator]:
    """Named real generators: ``J, M, Q, P, I`` and, when noncompact, ``K, N, R, T, E``.

    Natural units.  The basis choice conjugates by the Fourier phase on the
    modes whose momentum (or energy) is diagonal.
    """
    four = four_generators(space, cfg, symmetric)
    n = space.n
    out: dict[str, SparseOperator] = {}
    for name in rotation_names(n):
        if n == 3:
            src, sign = {"J1": ("L23", -1), "J2": ("L13", 1), "J3": ("L12", -1)}[name]
        else:
            src, sign = "L" + name[1:], 1
        out[name] = four[src] * sign
    if space.noncompact:
        for i in range(1, n + 1):
            out[f"K{i}"] = four[f"L0{i}"]
        for i in range(1, n + 1):
            out[f"N{i}"] = four[f"M0{i}"]
    for i, j in itertools.combinations_with_replacement(range(1, n + 1), 2):
        out[f"M{i}{j}"] = four[f"M{i}{j}"]
    if space.noncompact:
        out["R"] = four["M00"] * 0.5
        out["T"] = four["X0"]
        out["E"] = four["Y0"]
    for i in range(1, n + 1):
        out[f"Q{i}"] = four[f"X{i}"]
    for i in range(1, n + 1):
        out[f"P{i}"] = four[f"Y{i}"]
    out["I"] = four["I"]
    if basis_choice != "position-time":
        phase = sp.diags(_basis_phase(space, basis_choice), format="csr")
        out = {k: SparseOperator(space, phase.conj().T @ v.matrix @ phase) for k, v in out.items()}
    return out


# -- bracket verification ----------------------------------------------------------


@dataclass(frozen=True)
class BracketReport:
    ok: bool
    max_residual: float
    pairs_checked: int
    worst: tuple[str, str] | None

    def as_dict(self) -> dict:
        return {"ok": self.ok, "max_residual": self.max_residual, "pairs_checked": self.pairs_checked, "worst": self.worst}


def verify_brackets(
    ops: Mapping[str, SparseOperator],
    sc,
    cfg: RepConfig,
    depth: int = 2,
    tol: float = 1e-12,
) -> BracketReport:
    """Check ``[rho X, rho Y] = i lam rho([X, Y])`` on ``interior(depth)`` for every pair.

    ``sc`` is a :class:`~quaplectic.lie_core.StructureConstants` whose basis
    names are keys of ``ops``.
    """
    names = sc.basis.names
    space = next(iter(ops.values())).space
    rows = space.interior(depth)
    homogeneous = {nm for nm, g in zip(names, sc.basis.grading) if g == "homogeneous"}
    worst, worst_pair, count = 0.0, None, 0
    for i, j in itertools.combinations(range(len(names)), 2):
        x, y = names[i], names[j]
        lhs = commutator(ops[x], ops[y]).matrix
        rhs = sp.csr_matrix((space.dim, space.dim), dtype=complex)
        for t, c in sc.bracket(i, j).items():
            rhs = rhs + ops[names[t]].matrix * complex(float(c.x), float(c.y))
        lam = cfg.lam if (x in homogeneous or y in homogeneous) else 1.0
        diff = (lhs - 1j * lam * rhs)[rows][:, rows]
        res = float(abs(diff).max()) if diff.nnz else 0.0
        count += 1
        if res > worst:
            worst, worst_pair = res, (x, y)
    return BracketReport(worst <= tol, worst, count, worst_pair)


def hermiticity_residual(op: SparseOperator, depth: int = 1) -> float:
    rows = op.space.interior(depth)
    diff = (op.matrix - op.matrix.conj().T)[rows][:, rows]
    return float(abs(diff).max()) if diff.nnz else 0.0


# -- Hermite functions -----------------------------------------------------------------


def hermite_table(k_max: int, x: np.ndarray | float) -> np.ndarray:
    """Rows ``eta_0 .. eta_{k_max}`` evaluated at ``x``, by the normalized upward recurrence."""
    if k_max < 0:
        raise ValueError("k must be non-negative")
    if k_max > HERMITE_MAX_K:
        raise ValueError(f"k > {HERMITE_MAX_K} is outside the validated recurrence range")
    x = np.asarray(x, dtype=float)
    out = np.empty((k_max + 1,) + x.shape)
    out[0] = math.pi ** -0.25 * np.exp(-0.5 * x * x)
    if k_max >= 1:
        out[1] = math.sqrt(2.0) * x * out[0]
    for k in range(1, k_max):
        out[k + 1] = math.sqrt(2.0 / (k + 1)) * x * out[k] - math.sqrt(k / (k + 1)) * out[k - 1]
    return out


def hermite_fn(k: int, x: np.ndarray | float) -> np.ndarray | float:
    """L2-normalized Hermite function ``eta_k(x)``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    val = hermite_table(k, x)[k]
    return float(val) if np.ndim(val) == 0 else val


def hermite_derivative(k_max: int, x: np.ndarray) -> np.ndarray:
    """``eta_k'`` from ``H_k' = 2k H_{k-1}``: ``eta_k' = -x eta_k + sqrt(2k) eta_{k-1}``."""
    tab = hermite_table(k_max, x)
    out = -x * tab
    for k in range(1, k_max + 1):
        out[k] += math.sqrt(2.0 * k) * tab[k - 1]
    return out


def quadrature(points: int = 64) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for plain integrals of functions carrying ``exp(-x^2)``."""
    x, w = np.polynomial.hermite.hermgauss(points)
    return x, w * np.exp(x * x)


def one_mode_tables(k_max: int, points: int = 96) -> dict[str, np.ndarray]:
    """``<eta_j| op |eta_k>`` for ``op`` in ``1, q, d, q^2, d^2`` from the coordinate forms.

    Derivatives come from the Hermite-polynomial identity and the oscillator ODE
    (``eta_k'' = (x^2 - 2k - 1) eta_k``), not from the ladder recurrences.
    """
    x, w = quadrature(points)
    f = hermite_table(k_max, x)
    df = hermite_derivative(k_max, x)
    ddf = (x * x - (2 * np.arange(k_max + 1) + 1)[:, None]) * f
    sandwich = lambda g: (f * w) @ g.T  # noqa: E731
    return {"1": sandwich(f), "q": sandwich(x * f), "d": sandwich(df), "qq": sandwich(x * x * f), "dd": sandwich(ddf)}


# coordinate forms: sums of products of one-mode factors, coefficient * {mode: factor}
CoordForm = list[tuple[complex, dict[int, str]]]


def coordinate_form(name: str, space: TruncatedFock, cfg: RepConfig) -> CoordForm:
    """Differential-operator form of a real generator in position(-time) coordinates.

    ``Q_i = sqrt(kappa) q_i``, ``P_i = -i sqrt(kappa) d_i``, ``T = sqrt(kappa) t``,
    ``E = i sqrt(kappa) d_t``, ``L_ij = i (kappa/s)(q_i d_j - q_j d_i)``,
    ``M_ij = (kappa/s)(q_i q_j - d_i d_j)``, ``K_i = i (kappa/s)(t d_i + q_i d_t)``,
    ``N_i = (kappa/s)(t q_i + d_t d_i)``, ``R = (kappa/2s)(t^2 - d_t^2)``.
    """
    rk, lam = math.sqrt(cfg.kappa), cfg.lam

    def prod(i: int, fi: str, j: int, fj: str) -> dict[int, str]:
        return {i: fi + fj} if i == j else {i: fi, j: fj}

    if name == "I":
        return [(float(cfg.kappa), {})]
    head, rest = name[0], name[1:]
    if head == "Q":
        return [(rk, {int(rest): "q"})]
    if head == "P":
        return [(-1j * rk, {int(rest): "d"})]
    if name == "T":
        return [(rk, {0: "q"})]
    if name == "E":
        return [(1j * rk, {0: "d"})]
    if name == "R":
        return [(lam / 2, {0: "qq"}), (-lam / 2, {0: "dd"})]
    if head == "M":
        i, j = int(rest[0]), int(rest[1])
        return [(lam, prod(i, "q", j, "q")), (-lam, prod(i, "d", j, "d"))]
    if head == "K":
        i = int(rest)
        return [(1j * lam, {0: "q", i: "d"}), (1j * lam, {i: "q", 0: "d"})]
    if head == "N":
        i = int(rest)
        return [(lam, {0: "q", i: "q"}), (lam, {0: "d", i: "d"})]
    if head == "J":
        if space.n == 3:
            (i, j), sign = {"J1": ((2, 3), -1), "J2": ((1, 3), 1), "J3": ((1, 2), -1)}[name]
        else:
            (i, j), sign = (int(rest[0]), int(rest[1])), 1
        return [(1j * lam * sign, {i: "q", j: "d"}), (-1j * lam * sign, {j: "q", i: "d"})]
    raise KeyError(f"no coordinate form for {name!r}")


def coordinate_matrix(form: CoordForm, space: TruncatedFock, tables: dict[str, np.ndarray]) -> np.ndarray:
    out = np.zeros((space.dim, space.dim), dtype=complex)
    for coeff, factors in form:
        mats = [tables[factors.get(label, "1")] for label in space.modes]
        for col, k in enumerate(space.states):
            for row_, j in enumerate(space.states):
                val = coeff
                for m, jj, kk in zip(mats, j, k):
                    val *= m[jj, kk]
                    if val == 0:
                        break
                out[row_, col] += val
    return out


def coordinate_check(name: str, space: TruncatedFock, cfg: RepConfig, depth: int = 2) -> float:
    """Max deviation between the ladder-built generator and its coordinate form on ``interior(depth)``."""
    ops = real_generators(space, cfg)
    if name not in ops:
        raise KeyError(f"unknown generator {name!r}")
    tables = one_mode_tables(space.n_max + 2)
    ref = coordinate_matrix(coordinate_form(name, space, cfg), space, tables)
    rows = space.interior(depth)
    return float(np.abs((ops[name].dense() - ref)[np.ix_(rows, rows)]).max())


# -- degenerate limit and degeneracy of the u(n) Casimirs ----------------------------


@dataclass(frozen=True)
class LimitProbe:
    kappas: tuple[Fraction, ...]
    norms: tuple[float, ...]
    slope: float
    slope_error: float


def degenerate_limit_probe(n: int, s: Fraction, kappas: Iterable[Fraction | str], n_max: int = 6) -> LimitProbe:
    """Operator norm of ``[Q_1, P_1]`` on interior rows for a decreasing kappa sequence."""
    ks = tuple(Fraction(k) for k in kappas)
    if any(b >= a for a, b in zip(ks, ks[1:])):
        raise ValueError("kappa sequence must be strictly decreasing")
    space = TruncatedFock(n, n_max)
    rows = space.interior(2)
    norms = []
    for k in ks:
        ops = real_generators(space, RepConfig(s, k))
        c = commutator(ops["Q1"], ops["P1"]).dense()[np.ix_(rows, rows)]
        norms.append(float(np.linalg.norm(c, 2)))
    kk = np.array([float(k) for k in ks])
    slope = float(np.dot(kk, norms) / np.dot(kk, kk))
    err = float(np.max(np.abs(np.array(norms) - slope * kk)))
    return LimitProbe(ks, tuple(norms), slope, err)


def un_casimir_images(space: TruncatedFock, cfg: RepConfig, alpha: int) -> SparseOperator:
    """``D_alpha = sum rho(Z_{i1 i2}) rho(Z_{i2 i3}) ... rho(Z_{i_alpha i1})`` over spatial modes."""
    spatial = [m for m in space.modes if m != 0 or not space.noncompact]
    z = {(a, b): rho_Z(space, a, b, cfg) for a in spatial for b in spatial}
    total = SparseOperator(space, sp.csr_matrix((space.dim, space.dim), dtype=complex))
    for chain in itertools.product(spatial, repeat=alpha):
        op = z[(chain[0], chain[1 % alpha])]
        for t in range(1, alpha):
            op = op @ z[(chain[t], chain[(t + 1) % alpha])]
        total = total + op
    return total


def degeneracy_residual(space: TruncatedFock, cfg: RepConfig, alpha: int) -> float:
    """``D_alpha - D_1 (D_1 + lam (n-1))^{alpha-1}`` on ``interior(2 alpha)``."""
    d1 = un_casimir_images(space, cfg, 1)
    da = un_casimir_images(space, cfg, alpha)
    shifted = d1 + identity(space, cfg.lam * (space.n - 1))
    rhs = d1
    for _ in range(alpha - 1):
        rhs = rhs @ shifted
    rows = space.interior(2 * alpha)
    return float(np.abs((da - rhs).block(rows)).max())


def printed_degeneracy_residual(space: TruncatedFock, cfg: RepConfig, alpha: int) -> float:
    """Same comparison against ``s^alpha D_1 (D_1 + n)^{alpha-1}``."""
    d1 = un_casimir_images(space, cfg, 1)
    da = un_casimir_images(space, cfg, alpha)
    shifted = d1 + identity(space, space.n)
    rhs = d1 * float(cfg.s) ** alpha
    for _ in range(alpha - 1):
        rhs = rhs @ shifted
    rows = space.interior(2 * alpha)
    return float(np.abs((da - rhs).block(rows)).max())
