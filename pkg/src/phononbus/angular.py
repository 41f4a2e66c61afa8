"""Angular-momentum algebra: Wigner 3j symbols and Gaunt integrals.

Arguments are integers or half-integers passed as floats; factorial sums are
evaluated exactly with Python integers before the single final square root.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np


def _twice(j: float) -> int:
    t = round(2 * j)
    if abs(2 * j - t) > 1e-9:
        raise ValueError(f"{j} is not a half-integer")
    return t


def _fact(n2: int) -> int:
    # n2 is twice an integer argument
    return math.factorial(n2 // 2)


@lru_cache(maxsize=None)
def _wigner3j_twice(j1: int, j2: int, j3: int, m1: int, m2: int, m3: int) -> float:
    if m1 + m2 + m3 != 0:
        return 0.0
    if any(abs(m) > j for m, j in ((m1, j1), (m2, j2), (m3, j3))):
        return 0.0
    if any((j - m) % 2 for m, j in ((m1, j1), (m2, j2), (m3, j3))):
        return 0.0
    if j3 > j1 + j2 or j3 < abs(j1 - j2) or (j1 + j2 + j3) % 2:
        return 0.0
    # Racah formula, all quantities doubled
    t1 = j2 - j3 - m1
    t2 = j1 - j3 + m2
    t3 = j1 + j2 - j3
    t4 = j1 - m1
    t5 = j2 + m2
    kmin = max(0, t1, t2)
    kmax = min(t3, t4, t5)
    total = 0
    for k in range(kmin, kmax + 1, 2):
        den = (
            _fact(k) * _fact(k - t1) * _fact(k - t2) * _fact(t3 - k) * _fact(t4 - k) * _fact(t5 - k)
        )
        total += Fraction((-1) ** (k // 2), den)
    tri = Fraction(
        _fact(j1 + j2 - j3) * _fact(j1 - j2 + j3) * _fact(-j1 + j2 + j3),
        _fact(j1 + j2 + j3 + 2),
    )
    norm = (
        tri
        * _fact(j1 + m1) * _fact(j1 - m1)
        * _fact(j2 + m2) * _fact(j2 - m2)
        * _fact(j3 + m3) * _fact(j3 - m3)
    )
    sign = -1 if ((j1 - j2 - m3) // 2) % 2 else 1
    value = total * total * norm
    return sign * (1 if total >= 0 else -1) * math.sqrt(value)


def wigner3j(j1: float, j2: float, j3: float, m1: float, m2: float, m3: float) -> float:
    return _wigner3j_twice(*(_twice(v) for v in (j1, j2, j3, m1, m2, m3)))


def clebsch_gordan(j1: float, m1: float, j2: float, m2: float, j: float, m: float) -> float:
    """<j1 m1 j2 m2 | j m> in the Condon-Shortley convention."""
    phase = -1 if (_twice(j1 - j2 + m) // 2) % 2 else 1
    return phase * math.sqrt(2 * j + 1) * wigner3j(j1, j2, j, m1, m2, -m)


def gaunt(l1: int, l2: int, l3: int, m1: int, m2: int, m3: int) -> float:
    """Integral of Y_l1^m1 Y_l2^m2 Y_l3^m3 over the unit sphere."""
    if (l1 + l2 + l3) % 2:
        return 0.0
    pref = math.sqrt((2 * l1 + 1) * (2 * l2 + 1) * (2 * l3 + 1) / (4 * math.pi))
    return pref * wigner3j(l1, l2, l3, 0, 0, 0) * wigner3j(l1, l2, l3, m1, m2, m3)


def ylm_triple(la: int, ma: int, l: int, m: int, lb: int, mb: int) -> float:
    """Integral of conj(Y_la^ma) Y_l^m Y_lb^mb."""
    sign = -1 if ma % 2 else 1
    return sign * gaunt(la, l, lb, -ma, m, mb)


def ladder(j: float, m: float, up: bool = True) -> float:
    """Matrix element of J+ (or J-) from |j m>."""
    mp = m + (1 if up else -1)
    if abs(mp) > j + 1e-12:
        return 0.0
    return math.sqrt(j * (j + 1) - m * mp)


def spherical_components(vector: np.ndarray) -> dict[int, complex]:
    """Coefficients a_q with v . r = r sqrt(4 pi/3) sum_q a_q Y_1^q.

    Uses x = r sqrt(2pi/3)(Y_1^-1 - Y_1^1), y = i r sqrt(2pi/3)(Y_1^-1 + Y_1^1),
    z = r sqrt(4pi/3) Y_1^0.
    """
    vx, vy, vz = (complex(c) for c in vector)
    s = math.sqrt(0.5)
    return {-1: s * (vx + 1j * vy), 0: vz, 1: s * (-vx + 1j * vy)}
