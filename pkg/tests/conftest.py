from __future__ import annotations

import sys
from fractions import Fraction
from pathlib import Path

from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def canonical(entries) -> set[tuple[str, str, str, Fraction]]:
    """Entry set with each pair ordered alphabetically; coefficients as Fractions (real tables only)."""
    out = set()
    for x, y, t, v in entries:
        if hasattr(v, "x"):
            if v.y:
                raise ValueError("complex coefficient in a real table")
            v = Fraction(int(v.x.numerator), int(v.x.denominator))
        v = Fraction(v)
        out.add((x, y, t, v) if x < y else (y, x, t, -v))
    return out
