"""Exact Gaussian-rational scalars shared by the exact modules."""

from __future__ import annotations

from fractions import Fraction
from typing import Union

from sympy.polys.domains import QQ, QQ_I

GaussRat = type(QQ_I(0, 0))
Scalar = Union[int, Fraction, GaussRat]

ZERO = QQ_I(0, 0)
ONE = QQ_I(1, 0)
IMAG = QQ_I(0, 1)


def gq(re: int | Fraction | GaussRat = 0, im: int | Fraction = 0) -> GaussRat:
    """Coerce ints, Fractions or Gaussian rationals into the coefficient field."""
    if isinstance(re, GaussRat):
        return re if not im else re + gq(0, im)
    re, im = Fraction(re), Fraction(im)
    return QQ_I(QQ(re.numerator, re.denominator), QQ(im.numerator, im.denominator))


def conj(x: GaussRat) -> GaussRat:
    return QQ_I(x.x, -x.y)


def to_complex(x: GaussRat) -> complex:
    return complex(float(x.x), float(x.y))


def is_real(x: GaussRat) -> bool:
    return not x.y


def _frac_text(v) -> str:
    f = Fraction(int(v.numerator), int(v.denominator))
    return str(f)


def format_coeff(x: GaussRat) -> str:
    """Stable text form: '3/2', '-1', 'i', '1/2-3i'."""
    re, im = x.x, x.y
    if not im:
        return _frac_text(re)
    im_text = "i" if im == 1 else "-i" if im == -1 else f"{_frac_text(im)}i"
    if not re:
        return im_text
    sign = "" if im_text.startswith("-") else "+"
    return f"{_frac_text(re)}{sign}{im_text}"


def parse_coeff(text: str) -> GaussRat:
    """Inverse of :func:`format_coeff`."""
    text = text.strip()
    if not text.endswith("i"):
        return gq(Fraction(text))
    body = text[:-1]
    # split at the last sign that is not the leading one
    cut = max(body.rfind("+", 1), body.rfind("-", 1))
    if cut <= 0 or body[cut - 1] == "/":
        re_part, im_part = "0", body
    else:
        re_part, im_part = body[:cut], body[cut:]
    if im_part in ("", "+"):
        im_part = "1"
    elif im_part == "-":
        im_part = "-1"
    return gq(Fraction(re_part), Fraction(im_part.lstrip("+")))
