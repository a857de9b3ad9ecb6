"""Structure constants for the quaplectic family of Lie algebras.

Every table is stored symbolically: each bracket term carries an exact
Gaussian-rational coefficient together with integer exponents of the
dimensional constants ``(c, b, hbar)``.  Evaluating at concrete
:class:`Params` gives the numeric table used by the rest of the package,
and the exponents are what :func:`contract` inspects to take group
contraction limits exactly.

The real presets are not typed in by hand.  They are transported from the
real four-basis table through a monomial change of basis (see
:func:`_real_n_mapping`), so the velocity/force boost tables, the Heisenberg
tables and the Poincare subalgebras all inherit one consistent sign
convention, which the Jacobi scan then certifies.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

import numpy as np
from scipy.linalg import expm

from .coeffs import IMAG, ONE, ZERO, GaussRat, format_coeff, gq, to_complex

GRADINGS = ("homogeneous", "translation", "center")
PARAM_NAMES = ("c", "b", "hbar")
Powers = tuple[int, int, int]
NO_POWERS: Powers = (0, 0, 0)

MAX_QUAPLECTIC_N = 4
MAX_N = 9  # single-digit generator indices


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class GeneratorBasis:
    names: tuple[str, ...]
    grading: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(set(self.names)) != len(self.names):
            raise ValueError("generator labels must be unique")
        if len(self.grading) != len(self.names):
            raise ValueError("grading must have one tag per generator")
        bad = set(self.grading) - set(GRADINGS)
        if bad:
            raise ValueError(f"unknown grading tags {sorted(bad)}")
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(self.names)})

    @property
    def dim(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"no generator named {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def of_grade(self, grade: str) -> list[int]:
        return [i for i, g in enumerate(self.grading) if g == grade]


@dataclass(frozen=True)
class Metric:
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(e not in (-1, 1) for e in self.entries):
            raise ValueError("metric entries must be +1 or -1")

    @property
    def signature(self) -> tuple[int, int]:
        return (self.entries.count(-1), self.entries.count(1))

    def __getitem__(self, i: int) -> int:
        return self.entries[i]

    def __len__(self) -> int:
        return len(self.entries)

    @classmethod
    def euclidean(cls, n: int) -> Metric:
        return cls((1,) * n)

    @classmethod
    def lorentzian(cls, n: int) -> Metric:
        return cls((-1,) + (1,) * n)


@dataclass(frozen=True)
class Params:
    """Dimensional constants; exact positive rationals, natural units by default."""

    c: Fraction = Fraction(1)
    b: Fraction = Fraction(1)
    hbar: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        for name in PARAM_NAMES:
            value = Fraction(getattr(self, name))
            if value <= 0:
                raise ValueError(f"{name} must be positive")
            object.__setattr__(self, name, value)

    def monomial(self, powers: Powers) -> Fraction:
        out = Fraction(1)
        for value, p in zip((self.c, self.b, self.hbar), powers):
            out *= value**p
        return out

    def is_natural(self) -> bool:
        return self.c == self.b == self.hbar == 1


class Term(NamedTuple):
    target: int
    coeff: GaussRat
    powers: Powers = NO_POWERS


class StructureConstants:
    """Sparse antisymmetric bracket table.

    ``terms`` maps ordered pairs to symbolic terms; pairs may be given in either
    order (they are normalised to ``a < b``).  The evaluated table at
    ``params`` is cached for both orders.
    """

    def __init__(
        self,
        basis: GeneratorBasis,
        terms: Mapping[tuple[int, int], Iterable[Term]],
        params: Params | None = None,
        name: str = "",
        n: int = 0,
    ) -> None:
        self.basis = basis
        self.params = params or Params()
        self.name = name
        self.n = n
        acc: dict[tuple[int, int], dict[tuple[int, Powers], GaussRat]] = {}
        for (a, b), ts in terms.items():
            if a == b:
                if any(t.coeff for t in ts):
                    raise ValueError(f"[{basis.names[a]}, {basis.names[a]}] must vanish")
                continue
            sign = ONE if a < b else -ONE
            key = (min(a, b), max(a, b))
            slot = acc.setdefault(key, {})
            for t in ts:
                k = (t.target, tuple(t.powers))
                slot[k] = slot.get(k, ZERO) + sign * t.coeff
        self._terms: dict[tuple[int, int], tuple[Term, ...]] = {}
        for key in sorted(acc):
            kept = tuple(Term(t, c, p) for (t, p), c in sorted(acc[key].items()) if c)
            if kept:
                self._terms[key] = kept
        self._table: dict[tuple[int, int], dict[int, GaussRat]] = {}
        for (a, b), ts in self._terms.items():
            row: dict[int, GaussRat] = {}
            for t in ts:
                row[t.target] = row.get(t.target, ZERO) + t.coeff * gq(self.params.monomial(t.powers))
            row = {k: v for k, v in sorted(row.items()) if v}
            if row:
                self._table[(a, b)] = row
                self._table[(b, a)] = {k: -v for k, v in row.items()}

    # -- access -------------------------------------------------------------

    @property
    def dim(self) -> int:
        return self.basis.dim

    def bracket(self, a: int, b: int) -> dict[int, GaussRat]:
        return self._table.get((a, b), {})

    def bracket_names(self, x: str, y: str) -> dict[str, GaussRat]:
        row = self.bracket(self.basis.index(x), self.basis.index(y))
        return {self.basis.names[t]: v for t, v in row.items()}

    def symbolic_terms(self) -> dict[tuple[int, int], tuple[Term, ...]]:
        return dict(self._terms)

    def nonzero_pairs(self) -> Iterator[tuple[int, int]]:
        return (k for k in self._table if k[0] < k[1])

    def is_real(self) -> bool:
        return all(not v.y for row in self._table.values() for v in row.values())

    def with_params(self, params: Params) -> StructureConstants:
        return StructureConstants(self.basis, self._terms, params, self.name, self.n)

    def entry_set(self) -> set[tuple[str, str, str, GaussRat]]:
        """Evaluated table as a set of ``(x, y, target, coeff)`` with ``x < y`` in basis order."""
        names = self.basis.names
        return {
            (names[a], names[b], names[t], v)
            for (a, b), row in self._table.items()
            if a < b
            for t, v in row.items()
        }

    def restrict(self, names: Sequence[str], label: str = "") -> StructureConstants:
        """Subalgebra spanned by ``names``; raises if the span is not closed."""
        keep = [self.basis.index(x) for x in names]
        new_index = {old: i for i, old in enumerate(keep)}
        terms: dict[tuple[int, int], list[Term]] = {}
        for (a, b), ts in self._terms.items():
            if a in new_index and b in new_index:
                for t in ts:
                    if t.target not in new_index:
                        raise ValueError(
                            f"span not closed: [{self.basis.names[a]}, {self.basis.names[b]}] "
                            f"contains {self.basis.names[t.target]}"
                        )
                    terms.setdefault((new_index[a], new_index[b]), []).append(
                        Term(new_index[t.target], t.coeff, t.powers)
                    )
        basis = GeneratorBasis(
            tuple(names), tuple(self.basis.grading[i] for i in keep)
        )
        return StructureConstants(basis, terms, self.params, label or self.name, self.n)

    # -- numeric views ------------------------------------------------------

    def tensor(self, dtype=complex) -> np.ndarray:
        """Dense ``F[a, b, t]`` with ``[X_a, X_b] = sum_t F[a, b, t] X_t``."""
        d = self.dim
        out = np.zeros((d, d, d), dtype=dtype)
        for (a, b), row in self._table.items():
            for t, v in row.items():
                out[a, b, t] = to_complex(v) if dtype is complex else float(v.x)
        return out

    def adjoint_matrix(self, z: Sequence, dtype=complex) -> np.ndarray:
        """Matrix of ``ad_z`` acting on coefficient column vectors."""
        f = self.tensor(dtype)
        return np.einsum("a,abt->tb", np.asarray(z, dtype=dtype), f)

    # -- export -------------------------------------------------------------

    def to_json_dict(self) -> dict:
        names = self.basis.names
        entries = [
            {"a": names[a], "b": names[b], "coeff": format_coeff(v), "target": names[t]}
            for (a, b), row in sorted(self._table.items())
            if a < b
            for t, v in row.items()
        ]
        return {"basis": list(names), "entries": entries}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)

    def __repr__(self) -> str:
        return f"StructureConstants({self.name or 'anonymous'}, dim={self.dim})"


class Algebra(NamedTuple):
    basis: GeneratorBasis
    constants: StructureConstants
    metric: Metric


@dataclass(frozen=True)
class AlgebraElement:
    basis: GeneratorBasis
    coeffs: tuple

    def __post_init__(self) -> None:
        if len(self.coeffs) != self.basis.dim:
            raise ValueError("coefficient vector length must equal basis dimension")

    @classmethod
    def zero(cls, basis: GeneratorBasis, exact: bool = True) -> AlgebraElement:
        return cls(basis, (ZERO if exact else 0.0,) * basis.dim)

    @classmethod
    def from_dict(cls, basis: GeneratorBasis, parts: Mapping[str, object]) -> AlgebraElement:
        exact = all(isinstance(v, (int, Fraction, GaussRat)) for v in parts.values())
        coeffs: list = [ZERO if exact else 0.0] * basis.dim
        for name, v in parts.items():
            coeffs[basis.index(name)] += gq(v) if exact else v
        return cls(basis, tuple(coeffs))

    @classmethod
    def generator(cls, basis: GeneratorBasis, name: str) -> AlgebraElement:
        return cls.from_dict(basis, {name: 1})

    @property
    def exact(self) -> bool:
        return all(isinstance(v, GaussRat) for v in self.coeffs)

    def as_dict(self) -> dict[str, object]:
        return {n: v for n, v in zip(self.basis.names, self.coeffs) if v}

    def to_numpy(self) -> np.ndarray:
        if self.exact:
            return np.array([to_complex(v) for v in self.coeffs])
        return np.asarray(self.coeffs)

    def _check(self, other: AlgebraElement) -> None:
        if other.basis != self.basis:
            raise ValueError("elements live over different bases")

    def __add__(self, other: AlgebraElement) -> AlgebraElement:
        self._check(other)
        return AlgebraElement(self.basis, tuple(x + y for x, y in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: AlgebraElement) -> AlgebraElement:
        return self + (-other)

    def __neg__(self) -> AlgebraElement:
        return AlgebraElement(self.basis, tuple(-x for x in self.coeffs))

    def scale(self, k) -> AlgebraElement:
        k = gq(k) if self.exact and isinstance(k, (int, Fraction)) else k
        return AlgebraElement(self.basis, tuple(k * x for x in self.coeffs))


# ---------------------------------------------------------------------------
# bracket algebra


def commutator(x: AlgebraElement, y: AlgebraElement, sc: StructureConstants) -> AlgebraElement:
    """Bilinear extension of the table; exact when both inputs are exact."""
    if x.basis != y.basis or x.basis != sc.basis:
        raise ValueError("basis mismatch between elements and structure constants")
    if x.exact and y.exact:
        out = [ZERO] * sc.dim
        for i, xi in enumerate(x.coeffs):
            if not xi:
                continue
            for j, yj in enumerate(y.coeffs):
                if not yj:
                    continue
                for t, v in sc.bracket(i, j).items():
                    out[t] += xi * yj * v
        return AlgebraElement(sc.basis, tuple(out))
    f = sc.tensor(complex)
    vec = np.einsum("a,b,abt->t", x.to_numpy(), y.to_numpy(), f)
    if sc.is_real() and not np.iscomplexobj(np.asarray(x.coeffs)) and not np.iscomplexobj(np.asarray(y.coeffs)):
        vec = vec.real
    return AlgebraElement(sc.basis, tuple(vec))


@dataclass(frozen=True)
class JacobiReport:
    ok: bool
    max_residual: Fraction
    triples_checked: int
    failures: tuple[tuple[str, str, str, str, GaussRat], ...] = field(default=())


def _size(v: GaussRat) -> Fraction:
    return max(abs(Fraction(int(v.x.numerator), int(v.x.denominator))),
               abs(Fraction(int(v.y.numerator), int(v.y.denominator))))


def verify_jacobi(sc: StructureConstants, max_failures: int = 20) -> JacobiReport:
    """Exact scan of ``[[x,y],z] + [[y,z],x] + [[z,x],y]`` over all basis triples."""

    def nested(a: int, b: int, c: int) -> dict[int, GaussRat]:
        out: dict[int, GaussRat] = {}
        for t, v in sc.bracket(a, b).items():
            for u, w in sc.bracket(t, c).items():
                out[u] = out.get(u, ZERO) + v * w
        return out

    worst = Fraction(0)
    failures = []
    count = 0
    for a, b, c in itertools.combinations(range(sc.dim), 3):
        count += 1
        total: dict[int, GaussRat] = {}
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            for t, v in nested(x, y, z).items():
                total[t] = total.get(t, ZERO) + v
        for t, v in total.items():
            if v:
                worst = max(worst, _size(v))
                if len(failures) < max_failures:
                    n = sc.basis.names
                    failures.append((n[a], n[b], n[c], n[t], v))
    return JacobiReport(worst == 0, worst, count, tuple(failures))


def verify_antisymmetry(sc: StructureConstants) -> bool:
    return all(
        sc.bracket(b, a) == {k: -v for k, v in sc.bracket(a, b).items()}
        for a in range(sc.dim)
        for b in range(sc.dim)
    )


# ---------------------------------------------------------------------------
# contraction


class ContractionError(ValueError):
    pass


@dataclass(frozen=True)
class ContractionScaling:
    """New generator = eps**exponent * old generator, with eps = 1/param.

    ``rename`` gives the label of each rescaled generator in the contracted
    algebra (for example ``K1 -> G1``).
    """

    param: str
    exponents: Mapping[str, int]
    rename: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.param not in PARAM_NAMES:
            raise ValueError(f"contraction parameter must be one of {PARAM_NAMES}")


def contract(sc: StructureConstants, scaling: ContractionScaling, name: str = "") -> StructureConstants:
    """Exact eps -> 0 limit of the rescaled brackets."""
    slot = PARAM_NAMES.index(scaling.param)
    for label in scaling.exponents:
        sc.basis.index(label)
    e = [scaling.exponents.get(x, 0) for x in sc.basis.names]
    terms: dict[tuple[int, int], list[Term]] = {}
    for (a, b), ts in sc.symbolic_terms().items():
        for t in ts:
            order = e[a] + e[b] - e[t.target] - t.powers[slot]
            if order < 0:
                n = sc.basis.names
                raise ContractionError(
                    f"bracket [{n[a]}, {n[b]}] -> {n[t.target]} diverges as eps**{order}"
                )
            if order == 0:
                powers = list(t.powers)
                powers[slot] = 0
                terms.setdefault((a, b), []).append(Term(t.target, t.coeff, tuple(powers)))
    names = tuple(scaling.rename.get(x, x) for x in sc.basis.names)
    basis = GeneratorBasis(names, sc.basis.grading)
    return StructureConstants(basis, terms, sc.params, name or sc.name, sc.n)


# ---------------------------------------------------------------------------
# preset construction


def _pair(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a <= b else (b, a)


def _antisym(prefix: str, a: int, b: int) -> dict[str, GaussRat]:
    if a == b:
        return {}
    return {f"{prefix}{a}{b}": ONE} if a < b else {f"{prefix}{b}{a}": -ONE}


def _sym(prefix: str, a: int, b: int) -> dict[str, GaussRat]:
    i, j = _pair(a, b)
    return {f"{prefix}{i}{j}": ONE}


def _combine(*parts: tuple[object, Mapping[str, GaussRat]]) -> dict[str, GaussRat]:
    out: dict[str, GaussRat] = {}
    for k, vec in parts:
        if not k:
            continue
        kk = gq(k)
        for name, v in vec.items():
            out[name] = out.get(name, ZERO) + kk * v
    return {n: v for n, v in out.items() if v}


_GEN = re.compile(r"^([A-Za-z]+[+-]?|A[+-])(\d*)$")


def _parse_gen(name: str) -> tuple[str, tuple[int, ...]]:
    m = _GEN.match(name)
    if not m:
        raise ValueError(f"cannot parse generator name {name!r}")
    return m.group(1), tuple(int(ch) for ch in m.group(2))


def _from_rule(
    names: Sequence[str],
    grading: Sequence[str],
    rule,
    label: str,
    n: int,
    params: Params | None = None,
) -> StructureConstants:
    """Build a table from ``rule(x, y) -> {name: coeff} | None`` on parsed generators."""
    basis = GeneratorBasis(tuple(names), tuple(grading))
    parsed = [_parse_gen(x) for x in names]
    terms: dict[tuple[int, int], list[Term]] = {}
    for a, b in itertools.combinations(range(len(names)), 2):
        out = rule(parsed[a], parsed[b])
        if out is None:
            swapped = rule(parsed[b], parsed[a])
            out = {k: -v for k, v in (swapped or {}).items()}
        if out:
            terms[(a, b)] = [Term(basis.index(t), v) for t, v in out.items()]
    return StructureConstants(basis, terms, params, label, n)


def _eta(metric: Metric, offset: int):
    def eta(a: int, b: int) -> int:
        return metric[a - offset] if a == b else 0

    return eta


def _real_four_table(n: int, offset: int = 0, metric: Metric | None = None) -> StructureConstants:
    """Real four-basis table in natural units, indices ``offset..offset+n``.

    Generators ``L_ab`` (antisymmetric), ``M_ab`` (symmetric), ``X_a``, ``Y_a``, ``I``.
    """
    metric = metric or Metric.lorentzian(n)
    idx = list(range(offset, offset + len(metric)))
    eta = _eta(metric, offset)
    names = (
        [f"L{a}{b}" for a, b in itertools.combinations(idx, 2)]
        + [f"M{a}{b}" for a, b in itertools.combinations_with_replacement(idx, 2)]
        + [f"X{a}" for a in idx]
        + [f"Y{a}" for a in idx]
        + ["I"]
    )
    grading = (
        ["homogeneous"] * (len(idx) * (len(idx) - 1) // 2 + len(idx) * (len(idx) + 1) // 2)
        + ["translation"] * (2 * len(idx))
        + ["center"]
    )

    def rule(x, y):
        (kx, ix), (ky, iy) = x, y
        L = lambda p, q: _antisym("L", p, q)  # noqa: E731
        M = lambda p, q: _sym("M", p, q)  # noqa: E731
        if kx == "L" and ky == "L":
            a, b = ix
            c, d = iy
            return _combine((-eta(a, c), L(b, d)), (eta(a, d), L(b, c)), (eta(b, c), L(a, d)), (-eta(b, d), L(a, c)))
        if kx == "L" and ky == "M":
            a, b = ix
            c, d = iy
            return _combine((-eta(a, c), M(b, d)), (-eta(a, d), M(b, c)), (eta(b, c), M(a, d)), (eta(b, d), M(a, c)))
        if kx == "M" and ky == "M":
            a, b = ix
            c, d = iy
            return _combine((-eta(a, c), L(b, d)), (-eta(a, d), L(b, c)), (-eta(b, c), L(a, d)), (-eta(b, d), L(a, c)))
        if kx == "L" and ky in ("X", "Y"):
            a, b = ix
            (c,) = iy
            return _combine((-eta(a, c), {f"{ky}{b}": ONE}), (eta(b, c), {f"{ky}{a}": ONE}))
        if kx == "M" and ky == "X":
            a, b = ix
            (c,) = iy
            return _combine((-eta(a, c), {f"Y{b}": ONE}), (-eta(b, c), {f"Y{a}": ONE}))
        if kx == "M" and ky == "Y":
            a, b = ix
            (c,) = iy
            return _combine((eta(a, c), {f"X{b}": ONE}), (eta(b, c), {f"X{a}": ONE}))
        if kx == "X" and ky == "Y":
            return _combine((eta(ix[0], iy[0]), {"I": ONE}))
        if (kx, ky) in (("X", "X"), ("Y", "Y"), ("I", "I")) or "I" in (kx, ky):
            return {}
        return None

    return _from_rule(names, grading, rule, "real-four", n)


class _Map(NamedTuple):
    """new generator = factor * c**p_c b**p_b hbar**p_h * old generator"""

    new: str
    grade: str
    old: str
    factor: Fraction
    powers: Powers = NO_POWERS


def _transport(source: StructureConstants, mapping: Sequence[_Map], label: str, n: int, params: Params | None) -> StructureConstants:
    """Change of basis by a monomial map; symbolic powers follow the scale factors."""
    by_old = {m.old: m for m in mapping}
    basis = GeneratorBasis(tuple(m.new for m in mapping), tuple(m.grade for m in mapping))
    terms: dict[tuple[int, int], list[Term]] = {}
    for i, j in itertools.combinations(range(len(mapping)), 2):
        mi, mj = mapping[i], mapping[j]
        oi, oj = source.basis.index(mi.old), source.basis.index(mj.old)
        for t in _symbolic_bracket(source, oi, oj):
            target_old = source.basis.names[t.target]
            mt = by_old.get(target_old)
            if mt is None:
                raise ValueError(f"bracket leaves the mapped span at {target_old}")
            coeff = t.coeff * gq(mi.factor * mj.factor / mt.factor)
            powers = tuple(p + q - r + s for p, q, r, s in zip(mi.powers, mj.powers, mt.powers, t.powers))
            terms.setdefault((i, j), []).append(Term(basis.index(mt.new), coeff, powers))
    return StructureConstants(basis, terms, params, label, n)


def _symbolic_bracket(sc: StructureConstants, a: int, b: int) -> tuple[Term, ...]:
    if a == b:
        return ()
    if a < b:
        return sc.symbolic_terms().get((a, b), ())
    return tuple(Term(t.target, -t.coeff, t.powers) for t in sc.symbolic_terms().get((b, a), ()))


_LEVI = {(1, 2, 3): 1, (2, 3, 1): 1, (3, 1, 2): 1, (1, 3, 2): -1, (3, 2, 1): -1, (2, 1, 3): -1}


def rotation_names(n: int) -> list[str]:
    """Axial-vector labels J1..J3 when n = 3, otherwise plane labels Jij."""
    if n == 3:
        return ["J1", "J2", "J3"]
    return [f"J{i}{j}" for i, j in itertools.combinations(range(1, n + 1), 2)]


def _rotation_maps(n: int) -> list[_Map]:
    if n == 3:
        # J_k = -(1/2) eps_kij L_ij, which gives [J_i, J_j] = eps_ijk J_k
        return [
            _Map("J1", "homogeneous", "L23", Fraction(-1)),
            _Map("J2", "homogeneous", "L13", Fraction(1)),
            _Map("J3", "homogeneous", "L12", Fraction(-1)),
        ]
    return [_Map(f"J{i}{j}", "homogeneous", f"L{i}{j}", Fraction(1)) for i, j in itertools.combinations(range(1, n + 1), 2)]


def _real_n_mapping(n: int) -> list[_Map]:
    sp = range(1, n + 1)
    return (
        _rotation_maps(n)
        + [_Map(f"K{i}", "homogeneous", f"L0{i}", Fraction(1)) for i in sp]
        + [_Map(f"N{i}", "homogeneous", f"M0{i}", Fraction(1)) for i in sp]
        + [_Map(f"M{i}{j}", "homogeneous", f"M{i}{j}", Fraction(1)) for i, j in itertools.combinations_with_replacement(sp, 2)]
        + [_Map("R", "homogeneous", "M00", Fraction(1, 2))]
        + [
            _Map("T", "translation", "X0", Fraction(1)),
            _Map("E", "translation", "Y0", Fraction(1), (1, 1, 0)),
        ]
        + [_Map(f"Q{i}", "translation", f"X{i}", Fraction(1), (1, 0, 0)) for i in sp]
        + [_Map(f"P{i}", "translation", f"Y{i}", Fraction(1), (0, 1, 0)) for i in sp]
        + [_Map("I", "center", "I", Fraction(1), (1, 1, -1))]
    )


def _real_n(n: int, params: Params | None) -> StructureConstants:
    return _transport(_real_four_table(n), _real_n_mapping(n), f"C(1,{n})-real-n", n, params)


def _real_four_physical(n: int, params: Params | None) -> StructureConstants:
    base = _real_four_table(n)
    maps = []
    for name, grade in zip(base.basis.names, base.basis.grading):
        if name.startswith("Y"):
            maps.append(_Map(name, grade, name, Fraction(1), (0, 1, 0)))
        elif name == "I":
            maps.append(_Map(name, grade, name, Fraction(1), (0, 1, -1)))
        else:
            maps.append(_Map(name, grade, name, Fraction(1)))
    return _transport(base, maps, f"C(1,{n})-real-4", n, params)


def _complex_table(indices: Sequence[int], metric: Metric, with_heisenberg: bool, label: str, n: int, u_only: bool = False) -> StructureConstants:
    """Complex basis: ``[Z_ab, Z_cd] = i(eta_ad Z_cb - eta_bc Z_ad)``,
    ``[Z_ab, A+_c] = -i eta_bc A+_a``, ``[Z_ab, A-_c] = i eta_ac A-_b``,
    ``[A+_a, A-_b] = i eta_ab I``.
    """
    eta = _eta(metric, indices[0])
    names: list[str] = []
    grading: list[str] = []
    if u_only:
        names.append("U")
        grading.append("homogeneous")
    else:
        names += [f"Z{a}{b}" for a in indices for b in indices]
        grading += ["homogeneous"] * len(indices) ** 2
    if with_heisenberg:
        names += [f"A+{a}" for a in indices] + [f"A-{a}" for a in indices] + ["I"]
        grading += ["translation"] * (2 * len(indices)) + ["center"]

    def z_act(a: int, b: int, kind: str, c: int) -> dict[str, GaussRat]:
        if kind == "A+":
            return _combine((-eta(b, c), {f"A+{a}": IMAG}))
        return _combine((eta(a, c), {f"A-{b}": IMAG}))

    def rule(x, y):
        (kx, ix), (ky, iy) = x, y
        if kx == "Z" and ky == "Z":
            a, b = ix
            c, d = iy
            return _combine((eta(a, d), {f"Z{c}{b}": IMAG}), (-eta(b, c), {f"Z{a}{d}": IMAG}))
        if kx == "Z" and ky in ("A+", "A-"):
            return z_act(ix[0], ix[1], ky, iy[0])
        if kx == "U" and ky in ("A+", "A-"):
            out: dict[str, GaussRat] = {}
            for a in indices:
                for b in indices:
                    if eta(a, b):
                        for k, v in z_act(a, b, ky, iy[0]).items():
                            out[k] = out.get(k, ZERO) + gq(eta(a, b)) * v
            return {k: v for k, v in out.items() if v}
        if kx == "A+" and ky == "A-":
            return _combine((eta(ix[0], iy[0]), {"I": IMAG}))
        if kx == ky or "I" in (kx, ky) or (kx, ky) == ("A-", "A+"):
            return None if (kx, ky) == ("A-", "A+") else {}
        return None

    return _from_rule(names, grading, rule, label, n)


# ---------------------------------------------------------------------------
# presets

PRESET_FAMILIES = (
    "heisenberg(n)",
    "heisenberg(1,n)",
    "translation(m)",
    "poincare(1,n)",
    "galilei(n)",
    "u(n)",
    "u(1,n)",
    "C(n)",
    "C(1,n)-real-n",
    "C(1,n)-real-4",
    "C(1,n)-complex",
    "Os(1,n)",
    "B(1,n)",
    "galilean-phase-limit",
)

_QUAPLECTIC = {"C(n)", "C(1,n)-real-n", "C(1,n)-real-4", "C(1,n)-complex", "Os(1,n)", "B(1,n)", "galilean-phase-limit", "u(1,n)"}
_NATURAL_ONLY = {"u(n)", "u(1,n)", "C(n)", "C(1,n)-complex", "Os(1,n)"}


def galilei_scaling(n: int) -> ContractionScaling:
    ks = [f"K{i}" for i in range(1, n + 1)]
    return ContractionScaling("c", {k: 1 for k in ks}, {k: "G" + k[1:] for k in ks})


def b_limit_scaling(n: int) -> ContractionScaling:
    ms = [f"M{a}{b}" for a, b in itertools.combinations_with_replacement(range(n + 1), 2)]
    return ContractionScaling("b", {m: 1 for m in ms}, {m: "Mo" + m[1:] for m in ms})


def phase_limit_scalings(n: int) -> tuple[ContractionScaling, ContractionScaling]:
    """c -> inf then b -> inf with K = cG, N = bF, R = bc Ro, M = bc Mo."""
    sp = range(1, n + 1)
    ms = [f"M{i}{j}" for i, j in itertools.combinations_with_replacement(sp, 2)]
    first = ContractionScaling(
        "c",
        {**{f"K{i}": 1 for i in sp}, "R": 1, **{m: 1 for m in ms}},
        {**{f"K{i}": f"G{i}" for i in sp}, "R": "Ro", **{m: "Mo" + m[1:] for m in ms}},
    )
    mos = ["Mo" + m[1:] for m in ms]
    second = ContractionScaling(
        "b",
        {**{f"N{i}": 1 for i in sp}, "Ro": 1, **{m: 1 for m in mos}},
        {f"N{i}": f"F{i}" for i in sp},
    )
    return first, second


def build_algebra(preset: str, n: int, params: Params | None = None) -> Algebra:
    """Build one of the :data:`PRESET_FAMILIES` at spatial dimension ``n``."""
    if preset not in PRESET_FAMILIES:
        raise ValueError(f"unknown preset {preset!r}")
    if not isinstance(n, int) or n < 1 or n > MAX_N:
        raise ValueError(f"n must be an integer in 1..{MAX_N}")
    if preset in _QUAPLECTIC and n > MAX_QUAPLECTIC_N:
        raise ValueError(f"{preset} supports n <= {MAX_QUAPLECTIC_N}")
    params = params or Params()
    if preset in _NATURAL_ONLY and not params.is_natural():
        raise ValueError(f"{preset} is built in natural units (c = b = hbar = 1)")
    if preset == "C(1,n)-real-4" and params.c != 1:
        raise ValueError("the four-basis table is written with c = 1")
    sp = range(1, n + 1)
    label = preset.replace("(1,n)", f"(1,{n})").replace("(n)", f"({n})").replace("(m)", f"({n})")

    if preset == "translation(m)":
        names = tuple(f"X{i}" for i in range(1, n + 1))
        sc = StructureConstants(GeneratorBasis(names, ("translation",) * n), {}, params, label, n)
        return Algebra(sc.basis, sc, Metric.euclidean(n))
    if preset in ("u(n)", "C(n)"):
        sc = _complex_table(list(sp), Metric.euclidean(n), preset == "C(n)", label, n)
        return Algebra(sc.basis, sc, Metric.euclidean(n))
    if preset in ("u(1,n)", "C(1,n)-complex", "Os(1,n)"):
        sc = _complex_table(
            list(range(n + 1)), Metric.lorentzian(n), preset != "u(1,n)", label, n, u_only=preset == "Os(1,n)"
        )
        return Algebra(sc.basis, sc, Metric.lorentzian(n))
    if preset == "C(1,n)-real-4":
        sc = _real_four_physical(n, params)
        sc.name = label
        return Algebra(sc.basis, sc, Metric.lorentzian(n))
    if preset == "B(1,n)":
        sc = contract(_real_four_physical(n, params), b_limit_scaling(n), label)
        return Algebra(sc.basis, sc, Metric.lorentzian(n))

    full = _real_n(n, params)
    rot = rotation_names(n)
    if preset == "C(1,n)-real-n":
        full.name = label
        return Algebra(full.basis, full, Metric.lorentzian(n))
    if preset == "galilean-phase-limit":
        first, second = phase_limit_scalings(n)
        sc = contract(contract(full, first), second, f"galilean-phase-limit({n})")
        return Algebra(sc.basis, sc, Metric.lorentzian(n))
    if preset == "heisenberg(n)":
        sc = full.restrict([f"Q{i}" for i in sp] + [f"P{i}" for i in sp] + ["I"], label)
        return Algebra(sc.basis, sc, Metric.euclidean(n))
    if preset == "heisenberg(1,n)":
        sc = full.restrict(["T", "E"] + [f"Q{i}" for i in sp] + [f"P{i}" for i in sp] + ["I"], label)
        return Algebra(sc.basis, sc, Metric.lorentzian(n))
    poincare = full.restrict(rot + [f"K{i}" for i in sp] + ["T"] + [f"Q{i}" for i in sp], f"poincare(1,{n})")
    if preset == "poincare(1,n)":
        return Algebra(poincare.basis, poincare, Metric.lorentzian(n))
    # galilei(n)
    sc = contract(poincare, galilei_scaling(n), label)
    return Algebra(sc.basis, sc, Metric.euclidean(n))


_PRESET_TEXT = [
    (re.compile(r"^heisenberg\((\d+)\)$"), "heisenberg(n)"),
    (re.compile(r"^heisenberg\(1,(\d+)\)$"), "heisenberg(1,n)"),
    (re.compile(r"^translation\((\d+)\)$"), "translation(m)"),
    (re.compile(r"^poincare\(1,(\d+)\)$"), "poincare(1,n)"),
    (re.compile(r"^galilei\((\d+)\)$"), "galilei(n)"),
    (re.compile(r"^u\((\d+)\)$"), "u(n)"),
    (re.compile(r"^u\(1,(\d+)\)$"), "u(1,n)"),
    (re.compile(r"^C\((\d+)\)$"), "C(n)"),
    (re.compile(r"^C\(1,(\d+)\)-real-n$"), "C(1,n)-real-n"),
    (re.compile(r"^C\(1,(\d+)\)-real-4$"), "C(1,n)-real-4"),
    (re.compile(r"^C\(1,(\d+)\)(?:-complex)?$"), "C(1,n)-complex"),
    (re.compile(r"^Os\(1,(\d+)\)$"), "Os(1,n)"),
    (re.compile(r"^B\(1,(\d+)\)$"), "B(1,n)"),
    (re.compile(r"^galilean-phase-limit(?:\((\d+)\))?$"), "galilean-phase-limit"),
]


def parse_preset(text: str) -> tuple[str, int]:
    """``'C(1,3)-real-n'`` -> ``('C(1,n)-real-n', 3)``; bare ``C(1,3)`` means the complex basis."""
    compact = text.replace(" ", "")
    for pattern, family in _PRESET_TEXT:
        m = pattern.match(compact)
        if m:
            return family, int(m.group(1) or 3)
    raise ValueError(f"unrecognised preset {text!r}")


def load_preset(text: str, params: Params | None = None) -> Algebra:
    family, n = parse_preset(text)
    return build_algebra(family, n, params)


# ---------------------------------------------------------------------------
# transformations


@dataclass(frozen=True)
class BoostParams:
    """Parameters of a homogeneous element
    ``beta.K + gamma.N + alpha.J + theta.M + vartheta R``.

    ``alpha`` runs over the rotation generators in basis order and ``theta``
    is a symmetric matrix contracted with the full ``M_ij`` (both orders).
    """

    beta: Sequence[float] = ()
    gamma: Sequence[float] = ()
    alpha: Sequence[float] = ()
    theta: Sequence[Sequence[float]] | None = None
    vartheta: float = 0.0

    def element(self, basis: GeneratorBasis, n: int) -> np.ndarray:
        z = np.zeros(basis.dim)

        def put(name: str, value: float) -> None:
            if value:
                z[basis.index(name)] += value

        for i, v in enumerate(self.beta, start=1):
            put(f"K{i}", v)
        for i, v in enumerate(self.gamma, start=1):
            put(f"N{i}", v)
        for name, v in zip(rotation_names(n), self.alpha):
            put(name, v)
        if self.theta is not None:
            th = np.asarray(self.theta, dtype=float)
            for i in range(n):
                for j in range(n):
                    put(f"M{min(i, j) + 1}{max(i, j) + 1}", th[i, j])
        put("R", self.vartheta)
        return z


def boost_transform(params: BoostParams, a: AlgebraElement, sc: StructureConstants) -> AlgebraElement:
    """``exp(ad_Z) a`` with ``Z`` built from ``params``; float output."""
    if a.basis != sc.basis:
        raise ValueError("element and table use different bases")
    z = params.element(sc.basis, sc.n)
    ad = sc.adjoint_matrix(z, float if sc.is_real() else complex)
    vec = a.to_numpy()
    if ad.dtype != vec.dtype:
        if np.any(vec.imag):
            ad = ad.astype(complex)
        else:
            vec = vec.real
    out = expm(ad) @ vec
    return AlgebraElement(sc.basis, tuple(out))


def infinitesimal_transform(z: AlgebraElement, a: AlgebraElement, sc: StructureConstants) -> AlgebraElement:
    """First-order action ``a + [z, a]`` with grading checks."""
    grades = sc.basis.grading
    if any(v and grades[i] != "homogeneous" for i, v in enumerate(z.coeffs)):
        raise ValueError("z must lie in the homogeneous span")
    if any(v and grades[i] == "homogeneous" for i, v in enumerate(a.coeffs)):
        raise ValueError("a must lie in the translation span")
    return a + commutator(z, a, sc)


# ---------------------------------------------------------------------------
# reciprocity maps


@dataclass(frozen=True)
class BornMap:
    """Linear map on span{T, E, Q_i, P_i, I}: ``image[x] = [(y, factor), ...]``."""

    n: int
    image: Mapping[str, tuple[tuple[str, Fraction], ...]]

    @property
    def domain(self) -> tuple[str, ...]:
        return ("T", "E") + tuple(f"Q{i}" for i in range(1, self.n + 1)) + tuple(
            f"P{i}" for i in range(1, self.n + 1)
        ) + ("I",)

    def apply(self, x: AlgebraElement) -> AlgebraElement:
        out = {name: ZERO for name in x.basis.names}
        for name, v in x.as_dict().items():
            if name not in self.image:
                raise ValueError(f"{name} is outside the map's domain")
            for target, k in self.image[name]:
                out[target] += gq(v) * gq(k)
        return AlgebraElement(x.basis, tuple(out[nm] for nm in x.basis.names))

    def matrix(self) -> list[list[Fraction]]:
        """``B[row][col]``: coefficient of domain[col] in the image of domain[row]."""
        dom = self.domain
        pos = {x: i for i, x in enumerate(dom)}
        mat = [[Fraction(0)] * len(dom) for _ in dom]
        for x, img in self.image.items():
            for y, k in img:
                mat[pos[x]][pos[y]] += k
        return mat

    def compose(self, other: BornMap) -> BornMap:
        """``(self o other)(x) = self(other(x))``."""
        out: dict[str, dict[str, Fraction]] = {}
        for x, img in other.image.items():
            acc: dict[str, Fraction] = {}
            for y, k in img:
                for z, m in self.image[y]:
                    acc[z] = acc.get(z, Fraction(0)) + k * m
            out[x] = {z: v for z, v in acc.items() if v}
        return BornMap(self.n, {x: tuple(sorted(v.items())) for x, v in out.items()})


def born_map(n: int, params: Params | None = None, kind: str = "qp") -> BornMap:
    """Reciprocity maps on the Heisenberg span.

    ``kind='qp'``: Q -> (b/c) P, P -> -(c/b) Q, T, E, I fixed.
    ``kind='te'``: T -> (bc) E, E -> -T/(bc), Q, P, I fixed.
    The factors make each map an isometry of :func:`phase_space_form` on
    coefficient vectors; they reduce to the bare swaps at c = b = 1.
    """
    p = params or Params()
    image: dict[str, tuple[tuple[str, Fraction], ...]] = {"I": (("I", Fraction(1)),)}
    sp = range(1, n + 1)
    if kind == "qp":
        image["T"] = (("T", Fraction(1)),)
        image["E"] = (("E", Fraction(1)),)
        for i in sp:
            image[f"Q{i}"] = ((f"P{i}", p.b / p.c),)
            image[f"P{i}"] = ((f"Q{i}", -p.c / p.b),)
    elif kind == "te":
        image["T"] = (("E", p.b * p.c),)
        image["E"] = (("T", -1 / (p.b * p.c)),)
        for i in sp:
            image[f"Q{i}"] = ((f"Q{i}", Fraction(1)),)
            image[f"P{i}"] = ((f"P{i}", Fraction(1)),)
    else:
        raise ValueError("kind must be 'qp' or 'te'")
    return BornMap(n, image)


def phase_space_form(n: int, params: Params | None = None) -> list[list[Fraction]]:
    """Diagonal quadratic form ``-T^2 + Q^2/c^2 + P^2/b^2 - E^2/(b c)^2`` over the map's domain (I weight 0)."""
    p = params or Params()
    diag = [Fraction(-1), -1 / (p.b * p.c) ** 2] + [1 / p.c**2] * n + [1 / p.b**2] * n + [Fraction(0)]
    size = len(diag)
    return [[diag[i] if i == j else Fraction(0) for j in range(size)] for i in range(size)]


def congruent(form: list[list[Fraction]], mat: list[list[Fraction]]) -> bool:
    """Exact check that ``B G B^T == G`` (rows of ``B`` are images)."""
    size = len(form)
    for i in range(size):
        for j in range(size):
            total = sum(
                (mat[i][k] * form[k][m] * mat[j][m] for k in range(size) for m in range(size) if mat[i][k] and mat[j][m]),
                Fraction(0),
            )
            if total != form[i][j]:
                return False
    return True


# ---------------------------------------------------------------------------
# spin-1/2 factorisation

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def pauli_identity_check(p: Sequence[float], energy: float = 1.0, tol: float = 1e-14) -> bool:
    """``(sigma.p)^2 = |p|^2 1`` and hence ``e^2 1 - (sigma.p)^2 = (e^2 - |p|^2) 1``,
    i.e. the second- and fourth-order plane-wave eigenvalues coincide."""
    p = np.asarray(p, dtype=float)
    sp = sum(pi * s for pi, s in zip(p, PAULI))
    square = sp @ sp
    norm2 = float(p @ p)
    scale = max(1.0, norm2)
    first = np.max(np.abs(square - norm2 * np.eye(2))) <= tol * scale
    fourth = energy**2 * np.eye(2) - square
    second = np.max(np.abs(fourth - (energy**2 - norm2) * np.eye(2))) <= tol * max(scale, energy**2)
    return bool(first and second)
