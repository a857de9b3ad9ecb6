"""Gel'fand-Tsetlin patterns and the matrices of u(n) in that basis.

Matrices are exact: every entry is a rational square root, stored as the
rational square (with sign) and only turned into floats on request.  The
raising and lowering coefficients use shifted labels ``l_{i,k} = m_{i,k} - i``.

Conventions: ``sigma(Z_ab)`` is the Hermitian-convention image of the complex
basis generator, so the matrices satisfy the gl(n) relations
``[E_ab, E_cd] = delta_bc E_ad - delta_ad E_cb`` with ``E_ab = sigma(Z_ab)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

Pattern = tuple[tuple[int, ...], ...]  # rows top (length n) to bottom (length 1)


@dataclass(frozen=True)
class IrrepLabel:
    top: tuple[int, ...]

    def __post_init__(self) -> None:
        top = tuple(int(x) for x in self.top)
        if not top:
            raise ValueError("label must have at least one entry")
        if any(a < b for a, b in zip(top, top[1:])):
            raise ValueError(f"label {top} must be non-increasing")
        object.__setattr__(self, "top", top)

    @property
    def n(self) -> int:
        return len(self.top)

    @classmethod
    def parse(cls, text: str) -> IrrepLabel:
        return cls(tuple(int(x) for x in text.replace(" ", "").split(",") if x))


def weyl_dimension(label: IrrepLabel | Sequence[int]) -> int:
    """``prod_{i<j} (1 + (m_i - m_j)/(j - i))``."""
    top = label.top if isinstance(label, IrrepLabel) else tuple(label)
    out = Fraction(1)
    for i, j in itertools.combinations(range(len(top)), 2):
        out *= 1 + Fraction(top[i] - top[j], j - i)
    return int(out)


def _between(upper: tuple[int, ...]) -> list[tuple[int, ...]]:
    ranges = [range(upper[i + 1], upper[i] + 1) for i in range(len(upper) - 1)]
    return [tuple(r) for r in itertools.product(*ranges)]


def _patterns(top: tuple[int, ...]) -> list[Pattern]:
    if len(top) == 1:
        return [(top,)]
    out = []
    for row in _between(top):
        for rest in _patterns(row):
            out.append((top,) + rest)
    return out


def row(p: Pattern, k: int) -> tuple[int, ...]:
    """Row ``k`` (1-based, length ``k``); row 0 is empty."""
    if k == 0:
        return ()
    return p[len(p) - k]


def satisfies_betweenness(p: Pattern) -> bool:
    for k in range(2, len(p) + 1):
        up, low = row(p, k), row(p, k - 1)
        if any(not (up[i] >= low[i] >= up[i + 1]) for i in range(k - 1)):
            return False
    return True


def _bump(p: Pattern, k: int, j: int, delta: int) -> Pattern:
    rows = [list(r) for r in p]
    rows[len(p) - k][j] += delta
    return tuple(tuple(r) for r in rows)


class GTSpace:
    """All patterns of one irrep, in a deterministic (lexicographic) order."""

    def __init__(self, label: IrrepLabel | Sequence[int]) -> None:
        self.label = label if isinstance(label, IrrepLabel) else IrrepLabel(tuple(label))
        self.patterns: list[Pattern] = sorted(_patterns(self.label.top), reverse=True)
        self.index = {p: i for i, p in enumerate(self.patterns)}

    @property
    def n(self) -> int:
        return self.label.n

    @property
    def dim(self) -> int:
        return len(self.patterns)

    # -- exact matrix elements ---------------------------------------------

    def _raise_sq(self, p: Pattern, k: int, j: int) -> Fraction:
        """Square of the coefficient of ``|p + delta_{j,k}>`` in ``E_{k,k+1}|p>``."""
        shifted = lambda r: [m - i for i, m in enumerate(row(p, r))]  # noqa: E731
        up, mid, low = shifted(k + 1), shifted(k), shifted(k - 1)
        lj = mid[j]
        num = Fraction(1)
        for li in up:
            num *= li - lj
        for li in low:
            num *= li - lj - 1
        den = Fraction(1)
        for i, li in enumerate(mid):
            if i != j:
                den *= (li - lj) * (li - lj - 1)
        return -num / den

    def _raise_terms(self, p: Pattern, k: int) -> list[tuple[Pattern, Fraction]]:
        out = []
        for j in range(k):
            q = _bump(p, k, j, +1)
            if q in self.index:
                out.append((q, self._raise_sq(p, k, j)))
        return out

    def _lower_terms(self, p: Pattern, k: int) -> list[tuple[Pattern, Fraction]]:
        out = []
        for j in range(k):
            q = _bump(p, k, j, -1)
            if q in self.index:
                out.append((q, self._raise_sq(q, k, j)))
        return out

    def weight(self, p: Pattern, k: int) -> int:
        return sum(row(p, k)) - sum(row(p, k - 1))

    # -- float matrices -------------------------------------------------------

    def _check(self, k: int) -> None:
        if not 1 <= k <= self.n:
            raise IndexError(f"index {k} outside 1..{self.n}")

    def sigma_Z(self, k: int, kk: int) -> np.ndarray:
        """``sigma(Z_{k,kk})``; 1-based indices, any pair."""
        self._check(k)
        self._check(kk)
        return self._all[(k, kk)]

    @cached_property
    def _all(self) -> dict[tuple[int, int], np.ndarray]:
        n, d = self.n, self.dim
        mats: dict[tuple[int, int], np.ndarray] = {}
        for k in range(1, n + 1):
            mats[(k, k)] = np.diag([float(self.weight(p, k)) for p in self.patterns])
        for k in range(1, n):
            up = np.zeros((d, d))
            for p in self.patterns:
                for q, sq in self._raise_terms(p, k):
                    up[self.index[q], self.index[p]] = math.sqrt(sq)
            mats[(k, k + 1)] = up
            mats[(k + 1, k)] = up.T.copy()
        # E_{a,b} = [E_{a,b-1}, E_{b-1,b}] for b > a + 1, and transposes
        for gap in range(2, n):
            for a in range(1, n - gap + 1):
                b = a + gap
                x, y = mats[(a, b - 1)], mats[(b - 1, b)]
                mats[(a, b)] = x @ y - y @ x
                mats[(b, a)] = mats[(a, b)].T.copy()
        return mats

    def exact_entries(self, k: int, kk: int) -> dict[tuple[int, int], Fraction]:
        """Signed squares of the nonzero entries for neighbouring or diagonal indices."""
        self._check(k)
        self._check(kk)
        out: dict[tuple[int, int], Fraction] = {}
        if k == kk:
            for p in self.patterns:
                w = self.weight(p, k)
                if w:
                    i = self.index[p]
                    out[(i, i)] = Fraction(w * abs(w))
            return out
        if kk == k + 1:
            for p in self.patterns:
                for q, sq in self._raise_terms(p, k):
                    out[(self.index[q], self.index[p])] = sq
            return out
        if k == kk + 1:
            for p in self.patterns:
                for q, sq in self._lower_terms(p, kk):
                    out[(self.index[q], self.index[p])] = sq
            return out
        raise ValueError("exact entries are provided for diagonal and neighbouring indices")

    def as_rows(self) -> list[list[int]]:
        """Patterns as row-major integer lists (top row first)."""
        return [[m for r in p for m in r] for p in self.patterns]


def enumerate_patterns(label: IrrepLabel | Sequence[int]) -> GTSpace:
    return GTSpace(label)


def sigma_Z(k: int, kk: int, space: GTSpace) -> np.ndarray:
    return space.sigma_Z(k, kk)


def un_casimirs(label: IrrepLabel | Sequence[int], up_to: int) -> list[float]:
    """``d_alpha = delta-traced alpha-fold products of sigma(Z)`` evaluated on the first pattern.

    The value is checked to be the same on every pattern.
    """
    space = GTSpace(label)
    if up_to > space.n:
        raise ValueError(f"u({space.n}) has {space.n} independent invariants")
    out = []
    n = space.n
    for alpha in range(1, up_to + 1):
        total = np.zeros((space.dim, space.dim))
        for chain in itertools.product(range(1, n + 1), repeat=alpha):
            prod = np.eye(space.dim)
            for t in range(alpha):
                prod = prod @ space.sigma_Z(chain[t], chain[(t + 1) % alpha])
            total += prod
        diag = np.diag(total)
        if not np.allclose(total, diag[0] * np.eye(space.dim), atol=1e-9):
            raise ArithmeticError("invariant is not scalar on the irrep")
        out.append(float(round(diag[0], 9)))
    return out


def casimir_polynomial(label: Sequence[int], alpha: int) -> Fraction:
    """Closed-form ``d_alpha`` for trace-type invariants.

    ``d_1 = sum m_i`` and ``d_2 = sum m_i^2 + sum_i (n + 1 - 2i) m_i``; the
    third-order value uses the same shifted-label generating function and is
    computed as a power sum of ``l_i = m_i + n - i`` corrected by the
    standard Perelomov-Popov recursion.
    """
    m = [Fraction(x) for x in label]
    n = len(m)
    if alpha == 1:
        return sum(m, Fraction(0))
    if alpha == 2:
        return sum(x * x for x in m) + sum((n + 1 - 2 * (i + 1)) * x for i, x in enumerate(m))
    return _perelomov_popov(m, alpha)


def _perelomov_popov(m: list[Fraction], alpha: int) -> Fraction:
    # tr(E^p) eigenvalue: sum_i gamma_i (l_i)^p with l_i = m_i + n - i and
    # gamma_i = prod_{j != i} (1 - 1/(l_i - l_j)).
    n = len(m)
    l = [m[i] + n - (i + 1) for i in range(n)]
    total = Fraction(0)
    for i in range(n):
        g = Fraction(1)
        for j in range(n):
            if j != i:
                g *= 1 - Fraction(1) / (l[i] - l[j])
        total += g * l[i] ** alpha
    return total


def scalar_sigma(d1: int, n: int, metric: Sequence[int] | None = None) -> dict[tuple[int, int], np.ndarray]:
    """One-dimensional ``Sigma_ab = d1 * eta_ab`` (``delta_ab`` when no metric is given).

    Indices are 1-based for the compact case and run over ``0..n`` when a
    Lorentzian metric of length ``n + 1`` is passed.
    """
    if metric is None:
        idx = list(range(1, n + 1))
        eta = {i: 1 for i in idx}
    else:
        idx = list(range(len(metric)))
        eta = dict(zip(idx, metric))
    return {
        (a, b): np.array([[float(d1 * eta[a]) if a == b else 0.0]])
        for a in idx
        for b in idx
    }


# ---------------------------------------------------------------------------
# u(1,n) as a truncated ladder of u(n) rungs


@dataclass(frozen=True)
class LadderSpace:
    """Truncated u(1,n) module built from an oscillator realization.

    ``n + 1`` bosonic modes with index 0 the noncompact direction and
    ``sigma(Z_ab) = b_a^+ b_b`` where ``b_i^+ = a_i^+``, ``b_i = a_i`` and the
    mode-0 roles are swapped (``b_0^+ = a_0``, ``b_0 = a_0^+``).  Then
    ``[b_b, b_c^+] = eta_bc`` and the matrices satisfy
    ``[E_ab, E_cd] = eta_bc E_ad - eta_ad E_cb`` exactly on states whose
    neighbours are kept.  The grade ``k = sum_i k_i - k_0`` is fixed; rungs
    are the u(n) subspaces ``k_0 = const`` (u(n) label ``(l, 0, ..., 0)`` with
    ``l = k + k_0``), truncated to ``rungs`` of them.  On each rung
    ``sigma(Z_00) = k_0 + 1 = -(d_1 - l)`` with ``d_1 = k - 1`` the eigenvalue
    of ``eta^{ab} sigma(Z_ab)``.
    """

    n: int
    grade: int
    rungs: int

    def __post_init__(self) -> None:
        if self.rungs < 3:
            raise ValueError("a ladder needs at least three rungs for interior checks")
        if self.n < 1:
            raise ValueError("n must be positive")

    @property
    def k0_min(self) -> int:
        return max(0, -self.grade)

    @cached_property
    def states(self) -> list[tuple[int, ...]]:
        out = []
        for k0 in range(self.k0_min, self.k0_min + self.rungs):
            for ks in _compositions(self.grade + k0, self.n):
                out.append((k0,) + ks)
        return out

    @cached_property
    def index(self) -> dict[tuple[int, ...], int]:
        return {s: i for i, s in enumerate(self.states)}

    @property
    def dim(self) -> int:
        return len(self.states)

    @property
    def d1(self) -> int:
        return self.grade - 1

    def rung_of(self, state: tuple[int, ...]) -> int:
        return state[0] - self.k0_min

    def interior_mask(self) -> np.ndarray:
        """States on rungs that are neither the first nor the last."""
        return np.array([0 < self.rung_of(s) < self.rungs - 1 for s in self.states])

    @staticmethod
    def _apply(state: tuple[int, ...], a: int, create: bool) -> tuple[tuple[int, ...], float] | None:
        raise_mode = create != (a == 0)  # b_0^+ lowers k_0, b_0 raises it
        k = state[a]
        if not raise_mode and k == 0:
            return None
        t = list(state)
        t[a] += 1 if raise_mode else -1
        return tuple(t), math.sqrt(k + 1 if raise_mode else k)

    def sigma_Z(self, a: int, b: int) -> np.ndarray:
        """``b_a^+ b_b`` on the ladder (indices ``0..n``, 0 noncompact)."""
        if not (0 <= a <= self.n and 0 <= b <= self.n):
            raise IndexError("index outside 0..n")
        mat = np.zeros((self.dim, self.dim))
        for s, col in self.index.items():
            first = self._apply(s, b, create=False)
            if first is None:
                continue
            second = self._apply(first[0], a, create=True)
            if second is None:
                continue
            row_ = self.index.get(second[0])
            if row_ is not None:
                mat[row_, col] += first[1] * second[1]
        return mat


def _compositions(total: int, parts: int) -> list[tuple[int, ...]]:
    if total < 0:
        return []
    if parts == 1:
        return [(total,)]
    out = []
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            out.append((first,) + rest)
    return out


def u1n_generators(ladder: LadderSpace) -> dict[tuple[int, int], np.ndarray]:
    """All ``sigma(Z_ab)`` for ``a, b = 0..n`` on the truncated ladder."""
    return {(a, b): ladder.sigma_Z(a, b) for a in range(ladder.n + 1) for b in range(ladder.n + 1)}
