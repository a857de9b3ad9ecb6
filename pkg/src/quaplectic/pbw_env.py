"""Enveloping-algebra arithmetic in a PBW basis.

Elements are stored as maps from sorted generator words to exact Gaussian
rational coefficients.  The PBW order is the declaration order of the
generators in the preset.  Products are brought to normal form by the usual
rewrite ``X_b X_a -> X_a X_b + [X_b, X_a]`` for ``a < b``, memoised per
(word, generator) pair.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .coeffs import IMAG, ONE, ZERO, GaussRat, format_coeff, gq, parse_coeff
from .lie_core import Algebra, StructureConstants, rotation_names

DEGREE_CAP = 8

Word = tuple[int, ...]


class DegreeCapError(ValueError):
    pass


class EnvElement:
    """Canonical (normal-ordered) element of the enveloping algebra."""

    __slots__ = ("env", "terms")

    def __init__(self, env: Envelope, terms: Mapping[Word, GaussRat] | None = None) -> None:
        self.env = env
        self.terms: dict[Word, GaussRat] = {w: c for w, c in (terms or {}).items() if c}

    # -- construction -------------------------------------------------------

    @property
    def names(self) -> tuple[str, ...]:
        return self.env.sc.basis.names

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def _same(self, other: EnvElement) -> None:
        if other.env is not self.env:
            raise ValueError("elements belong to different enveloping algebras")

    def __add__(self, other: EnvElement) -> EnvElement:
        self._same(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, ZERO) + c
        return EnvElement(self.env, out)

    def __neg__(self) -> EnvElement:
        return EnvElement(self.env, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: EnvElement) -> EnvElement:
        return self + (-other)

    def scale(self, k) -> EnvElement:
        k = gq(k)
        return EnvElement(self.env, {w: k * c for w, c in self.terms.items()})

    def __mul__(self, other: EnvElement) -> EnvElement:
        self._same(other)
        return self.env.multiply(self, other)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, EnvElement) and other.env is self.env and other.terms == self.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def bracket(self, other: EnvElement) -> EnvElement:
        return self * other - other * self

    # -- text form ----------------------------------------------------------

    def monomial_text(self, word: Word) -> str:
        if not word:
            return "1"
        parts = []
        for g, run in itertools.groupby(word):
            e = len(list(run))
            parts.append(self.names[g] + (f"^{e}" if e > 1 else ""))
        return " ".join(parts)

    def to_text(self) -> str:
        """One ``coeff * g_i^e ...`` line per term, sorted by degree then word."""
        if not self.terms:
            return "0"
        lines = [
            f"{format_coeff(c)} * {self.monomial_text(w)}"
            for w, c in sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0]))
        ]
        return "\n".join(lines)

    def __repr__(self) -> str:
        body = self.to_text().replace("\n", " + ")
        return f"EnvElement({body})"


class Envelope:
    """Normal-ordering context for one structure-constant table."""

    def __init__(self, sc: StructureConstants, degree_cap: int = DEGREE_CAP) -> None:
        self.sc = sc
        self.degree_cap = degree_cap
        self._memo: dict[tuple[Word, int], dict[Word, GaussRat]] = {}

    # -- elements -----------------------------------------------------------

    def zero(self) -> EnvElement:
        return EnvElement(self)

    def one(self) -> EnvElement:
        return EnvElement(self, {(): ONE})

    def scalar(self, k) -> EnvElement:
        return EnvElement(self, {(): gq(k)})

    def gen(self, name: str | int) -> EnvElement:
        i = name if isinstance(name, int) else self.sc.basis.index(name)
        return EnvElement(self, {(i,): ONE})

    def linear(self, parts: Mapping[str, object]) -> EnvElement:
        return EnvElement(self, {(self.sc.basis.index(k),): gq(v) for k, v in parts.items()})

    def from_text(self, text: str) -> EnvElement:
        """Inverse of :meth:`EnvElement.to_text`."""
        if text.strip() == "0":
            return self.zero()
        out = self.zero()
        for line in text.strip().splitlines():
            coeff_text, _, mono = line.partition(" * ")
            prod = self.scalar(parse_coeff(coeff_text))
            if mono.strip() != "1":
                for token in mono.split():
                    name, _, exp = token.partition("^")
                    for _ in range(int(exp or 1)):
                        prod = prod * self.gen(name)
            out = out + prod
        return out

    # -- rewriting ----------------------------------------------------------

    def _word_times_gen(self, word: Word, g: int) -> dict[Word, GaussRat]:
        if not word or word[-1] <= g:
            return {word + (g,): ONE}
        key = (word, g)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        head, x = word[:-1], word[-1]
        out: dict[Word, GaussRat] = {}
        # head x g = (head g) x + head [x, g]
        for w, c in self._word_times_gen(head, g).items():
            for w2, c2 in self._word_times_gen(w, x).items():
                out[w2] = out.get(w2, ZERO) + c * c2
        for t, v in self.sc.bracket(x, g).items():
            for w2, c2 in self._word_times_gen(head, t).items():
                out[w2] = out.get(w2, ZERO) + v * c2
        out = {w: c for w, c in out.items() if c}
        self._memo[key] = out
        return out

    def _word_times_word(self, left: Word, right: Word) -> dict[Word, GaussRat]:
        acc: dict[Word, GaussRat] = {left: ONE}
        for g in right:
            nxt: dict[Word, GaussRat] = {}
            for w, c in acc.items():
                for w2, c2 in self._word_times_gen(w, g).items():
                    nxt[w2] = nxt.get(w2, ZERO) + c * c2
            acc = {w: c for w, c in nxt.items() if c}
        return acc

    def multiply(self, a: EnvElement, b: EnvElement) -> EnvElement:
        if a.degree + b.degree > self.degree_cap:
            raise DegreeCapError(
                f"product degree {a.degree + b.degree} exceeds the cap of {self.degree_cap}"
            )
        out: dict[Word, GaussRat] = {}
        for w1, c1 in a.terms.items():
            for w2, c2 in b.terms.items():
                for w, c in self._word_times_word(w1, w2).items():
                    out[w] = out.get(w, ZERO) + c1 * c2 * c
        return EnvElement(self, out)

    def normal_order(self, product: Sequence[int | str]) -> EnvElement:
        idx = [p if isinstance(p, int) else self.sc.basis.index(p) for p in product]
        if len(idx) > self.degree_cap:
            raise DegreeCapError(f"word length {len(idx)} exceeds the cap of {self.degree_cap}")
        for i in idx:
            if not 0 <= i < self.sc.dim:
                raise IndexError(f"generator index {i} out of range")
        return EnvElement(self, self._word_times_word((), tuple(idx)))

    def product(self, factors: Iterable[EnvElement]) -> EnvElement:
        out = self.one()
        for f in factors:
            out = out * f
        return out


_ENVELOPES: dict[int, Envelope] = {}


def envelope(sc: StructureConstants) -> Envelope:
    """Shared normal-ordering context (keeps the rewrite memo warm)."""
    env = _ENVELOPES.get(id(sc))
    if env is None or env.sc is not sc:
        env = Envelope(sc)
        _ENVELOPES[id(sc)] = env
    return env


def normal_order(product: Sequence[int | str], sc: StructureConstants) -> EnvElement:
    return envelope(sc).normal_order(product)


# ---------------------------------------------------------------------------
# named elements of the quaplectic and unitary families


def _indices(algebra: Algebra) -> list[int]:
    names = algebra.basis.names
    if "Z00" in names or "A+0" in names or "X0" in names:
        return list(range(len(algebra.metric)))
    return list(range(1, len(algebra.metric) + 1))


def _eta_up(algebra: Algebra, a: int) -> int:
    # diagonal metric with entries +-1 is its own inverse
    offset = _indices(algebra)[0]
    return algebra.metric[a - offset]


def u_generator(algebra: Algebra) -> EnvElement:
    """``U = eta^{ab} Z_ab`` (the generator itself for the oscillator algebra)."""
    env = envelope(algebra.constants)
    if "U" in algebra.basis:
        return env.gen("U")
    return env.linear({f"Z{a}{a}": _eta_up(algebra, a) for a in _indices(algebra)})


def zhat(algebra: Algebra, a: int, b: int) -> EnvElement:
    """Traceless part ``Z_ab - U eta_ab / (n+1)``, with ``n+1`` the index count."""
    env = envelope(algebra.constants)
    z = env.gen(f"Z{a}{b}")
    if a != b:
        return z
    count = len(_indices(algebra))
    return z - u_generator(algebra).scale(Fraction(_eta_up(algebra, a), count))


def w_element(algebra: Algebra, a: int, b: int) -> EnvElement:
    """``W_ab = A+_a A-_b - I Z_ab``."""
    env = envelope(algebra.constants)
    return env.gen(f"A+{a}") * env.gen(f"A-{b}") - env.gen("I") * env.gen(f"Z{a}{b}")


def _eta_trace(algebra: Algebra, factor, m: int) -> EnvElement:
    """``eta^{a1 a2m} eta^{a2 a3} ... F_{a1 a2} ... F_{a2m-1 a2m}``: trace of an m-fold product."""
    env = envelope(algebra.constants)
    idx = _indices(algebra)
    total = env.zero()
    for chain in itertools.product(idx, repeat=m):
        sign = 1
        for a in chain:
            sign *= _eta_up(algebra, a)
        # factors F_{chain[0] chain[1]} F_{chain[1] chain[2]} ... F_{chain[m-1] chain[0]}
        term = env.product(factor(chain[k], chain[(k + 1) % m]) for k in range(m))
        total = total + term.scale(sign)
    return total


def _kind(algebra: Algebra) -> str:
    names = algebra.basis.names
    if "U" in names:
        return "oscillator"
    if "Z" + "11" in names or "Z00" in names:
        return "quaplectic" if "I" in names else "unitary"
    if "X0" in names and "M00" in names:
        return "real-four"
    if "K1" in names and "T" in names and "I" not in names and "N1" not in names:
        return "poincare"
    raise ValueError("no Casimir builder for this preset")


def invariant_count(algebra: Algebra) -> int:
    """Highest order accepted by :func:`build_casimir` (counted as in the builder)."""
    kind = _kind(algebra)
    count = len(_indices(algebra))
    if kind == "quaplectic":
        return 2 * count
    if kind == "unitary":
        return count
    if kind == "oscillator":
        return 2
    if kind == "real-four":
        return 2
    return 4 if len(algebra.metric) - 1 == 3 else 2


def build_casimir(algebra: Algebra, order: int) -> EnvElement:
    """Casimir element of the given order.

    quaplectic ``C(n)``, ``C(1,n)``: order 1 is ``I``; order ``2m`` is the
    eta-traced ``m``-fold product of ``W_ab`` (orders up to ``2(n+1)`` for the
    Lorentzian presets, ``2n`` for the compact ones).
    unitary ``u(n)``, ``u(1,n)``: order ``m`` is the eta-traced ``m``-fold
    product of ``Z_ab``.
    oscillator ``Os(1,n)``: orders 1 and 2.
    ``C(1,n)-real-4``: order 2 is ``(X^2 + Y^2)/2 - I U``.
    ``poincare(1,n)``: order 2 is ``-T^2 + Q^2/c^2``; order 4 (n = 3) is the
    squared epsilon-contracted Pauli-Lubanski vector.
    """
    kind = _kind(algebra)
    if order < 1 or order > invariant_count(algebra):
        raise ValueError(f"order {order} exceeds the invariants available for this preset")
    env = envelope(algebra.constants)
    if kind == "quaplectic":
        if order == 1:
            return env.gen("I")
        if order % 2:
            raise ValueError("quaplectic invariants have order 1 or even order")
        return _eta_trace(algebra, lambda a, b: w_element(algebra, a, b), order // 2)
    if kind == "unitary":
        return _eta_trace(algebra, lambda a, b: env.gen(f"Z{a}{b}"), order)
    if kind == "oscillator":
        if order == 1:
            return env.gen("I")
        a2 = env.zero()
        for a in _indices(algebra):
            a2 = a2 + (env.gen(f"A+{a}") * env.gen(f"A-{a}")).scale(_eta_up(algebra, a))
        return a2 - env.gen("I") * env.gen("U")
    if kind == "real-four":
        if order == 1:
            return env.gen("I")
        quad = env.zero()
        u = env.zero()
        for a in _indices(algebra):
            e = _eta_up(algebra, a)
            x, y = env.gen(f"X{a}"), env.gen(f"Y{a}")
            quad = quad + (x * x + y * y).scale(e)
            u = u + env.gen(f"M{a}{a}").scale(Fraction(e, 2))
        return quad.scale(Fraction(1, 2)) - env.gen("I") * u
    # poincare
    n = len(algebra.metric) - 1
    c = algebra.constants.params.c
    if order == 2:
        out = -(env.gen("T") * env.gen("T"))
        for i in range(1, n + 1):
            q = env.gen(f"Q{i}")
            out = out + (q * q).scale(1 / c**2)
        return out
    if order == 4:
        return pauli_lubanski_square(algebra)
    raise ValueError("poincare invariants have order 2 or 4")


@dataclass(frozen=True)
class CentralityReport:
    ok: bool
    checked: int
    residuals: dict[str, str] = field(default_factory=dict)


def verify_central(c: EnvElement, algebra: Algebra) -> CentralityReport:
    """Normal-ordered ``[c, X]`` for every basis generator ``X``."""
    env = c.env
    residuals = {}
    for name in algebra.basis.names:
        r = c.bracket(env.gen(name))
        if not r.is_zero():
            residuals[name] = r.to_text()
    return CentralityReport(not residuals, algebra.basis.dim, residuals)


# ---------------------------------------------------------------------------
# W relations


@dataclass(frozen=True)
class WRelationsReport:
    ok: bool
    translation_invariant: bool
    rotation_pattern: bool
    checked: int
    failures: tuple[str, ...] = ()


def verify_W_relations(algebra: Algebra) -> WRelationsReport:
    """``[A_c^+-, W_ab] = 0`` and ``[Z_ab, W_cd] = i(eta_ad W_cb - eta_bc W_ad)``,
    the same pattern as the ``Z`` brackets."""
    if _kind(algebra) != "quaplectic":
        raise ValueError("W relations apply to the quaplectic presets")
    env = envelope(algebra.constants)
    idx = _indices(algebra)
    eta = lambda a, b: _eta_up(algebra, a) if a == b else 0  # noqa: E731
    w = {(a, b): w_element(algebra, a, b) for a in idx for b in idx}
    failures = []
    checked = 0
    trans_ok = rot_ok = True
    for (a, b), wab in w.items():
        for c in idx:
            for sign in "+-":
                checked += 1
                if not env.gen(f"A{sign}{c}").bracket(wab).is_zero():
                    trans_ok = False
                    failures.append(f"[A{sign}{c}, W{a}{b}] != 0")
    for a, b, c, d in itertools.product(idx, repeat=4):
        checked += 1
        lhs = env.gen(f"Z{a}{b}").bracket(w[(c, d)])
        rhs = (w[(c, b)].scale(eta(a, d)) - w[(a, d)].scale(eta(b, c))).scale(IMAG)
        if lhs != rhs:
            rot_ok = False
            failures.append(f"[Z{a}{b}, W{c}{d}] off pattern")
    return WRelationsReport(trans_ok and rot_ok, trans_ok, rot_ok, checked, tuple(failures[:20]))


# ---------------------------------------------------------------------------
# Pauli-Lubanski


def _levi4(p: Sequence[int]) -> int:
    p = list(p)
    if len(set(p)) < 4:
        return 0
    sign = 1
    for i in range(4):
        for j in range(i + 1, 4):
            if p[i] > p[j]:
                sign = -sign
    return sign


def _poincare_views(algebra: Algebra):
    """``(Y, L)``: translations ``Y_0 = T, Y_i = Q_i`` and rotations ``L_ab`` as EnvElements."""
    env = envelope(algebra.constants)
    if len(algebra.metric) != 4 or rotation_names(3)[0] not in algebra.basis:
        raise ValueError("the Pauli-Lubanski vector is built for poincare(1,3)")
    y = [env.gen("T")] + [env.gen(f"Q{i}") for i in (1, 2, 3)]
    j = {k: env.gen(f"J{k}") for k in (1, 2, 3)}
    lab: dict[tuple[int, int], EnvElement] = {}
    for i in (1, 2, 3):
        lab[(0, i)] = env.gen(f"K{i}")
    # J1 = -L23, J2 = L13, J3 = -L12
    lab[(2, 3)] = -j[1]
    lab[(1, 3)] = j[2]
    lab[(1, 2)] = -j[3]
    for (a, b), v in list(lab.items()):
        lab[(b, a)] = -v
    for a in range(4):
        lab[(a, a)] = env.zero()
    return env, y, lab


def pauli_lubanski_vector(algebra: Algebra) -> list[EnvElement]:
    """``W^a = (1/2) eps^{abcd} Y_b L_cd`` with ``eps^{0123} = 1``."""
    env, y, lab = _poincare_views(algebra)
    out = []
    for a in range(4):
        acc = env.zero()
        for b, c, d in itertools.product(range(4), repeat=3):
            s = _levi4((a, b, c, d))
            if s:
                acc = acc + (y[b] * lab[(c, d)]).scale(s)
        out.append(acc.scale(Fraction(1, 2)))
    return out


def pauli_lubanski_square(algebra: Algebra) -> EnvElement:
    """``eta_ab W^a W^b`` from the epsilon-contracted vector."""
    w = pauli_lubanski_vector(algebra)
    metric = algebra.metric
    total = w[0].env.zero()
    for a in range(4):
        total = total + (w[a] * w[a]).scale(metric[a])
    return total


def _three_vector_parts(algebra: Algebra):
    env = envelope(algebra.constants)
    g = env.gen
    sp = (1, 2, 3)

    def dot(x: str, y: str) -> EnvElement:
        return sum((g(f"{x}{i}") * g(f"{y}{i}") for i in sp), env.zero())

    return env, g, dot


def pauli_lubanski_expansion(algebra: Algebra) -> EnvElement:
    """``-J^2 T^2 + (Q.J)^2 + K^2 Q^2 - (K.Q)^2``: the three-vector form as
    commonly printed, with ``T`` and ``Q`` in the roles of energy and momentum."""
    env, g, dot = _three_vector_parts(algebra)
    t = g("T")
    return -(dot("J", "J") * t * t) + dot("Q", "J") * dot("Q", "J") + dot("K", "K") * dot("Q", "Q") - dot("K", "Q") * dot("K", "Q")


def pauli_lubanski_expansion_derived(algebra: Algebra) -> EnvElement:
    """Three-vector form of ``eta_ab W^a W^b`` worked out from ``W^0 = -Q.J`` and
    ``W_i = T J_i + (Q x K)_i``:
    ``J^2 T^2 - (Q.J)^2 + K^2 Q^2 - (K.Q)^2 + 2 T J.(Q x K)``, up to lower-order terms."""
    env, g, dot = _three_vector_parts(algebra)
    t = g("T")
    triple = env.zero()
    for (i, j, k), s in _LEVI3.items():
        triple = triple + (g(f"J{i}") * g(f"Q{j}") * g(f"K{k}")).scale(s)
    return (
        dot("J", "J") * t * t
        - dot("Q", "J") * dot("Q", "J")
        + dot("K", "K") * dot("Q", "Q")
        - dot("K", "Q") * dot("K", "Q")
        + (t * triple).scale(2)
    )


_LEVI3 = {(1, 2, 3): 1, (2, 3, 1): 1, (3, 1, 2): 1, (1, 3, 2): -1, (3, 2, 1): -1, (2, 1, 3): -1}


def top_degree(x: EnvElement) -> EnvElement:
    """Highest-degree component; independent of the ordering used to write ``x``."""
    d = x.degree
    return EnvElement(x.env, {w: c for w, c in x.terms.items() if len(w) == d})


@dataclass(frozen=True)
class PauliLubanskiReport:
    ok: bool
    difference: str
    central: bool
    expansion_central: bool
    derived_symbol_match: bool
    residuals: dict[str, str] = field(default_factory=dict)


def verify_pauli_lubanski(algebra: Algebra) -> PauliLubanskiReport:
    """Compare the epsilon-contracted square with the three-vector expansion.

    ``ok`` requires an exact zero difference and centrality.  The report also
    records whether the expansion is itself central and whether the derived
    three-vector form has the same leading symbol as the contracted square.
    """
    square = pauli_lubanski_square(algebra)
    expansion = pauli_lubanski_expansion(algebra)
    diff = square - expansion
    central = verify_central(square, algebra)
    derived = top_degree(square) == top_degree(pauli_lubanski_expansion_derived(algebra))
    return PauliLubanskiReport(
        diff.is_zero() and central.ok,
        diff.to_text(),
        central.ok,
        verify_central(expansion, algebra).ok,
        derived,
        central.residuals,
    )
