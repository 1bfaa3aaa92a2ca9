"""Jiang-Shu regularity indicators evaluated in closed form.

The indicator of a polynomial P over a cell of width h is

    I[P] = sum over l >= 1 of  h**(2l-1) * integral of (d^l P/dx^l)**2,

the integral taken over the cell.  On the scaled variable xi = (x - center)/h
this is a quadratic form with constant rational coefficients, assembled once
per degree and applied to coefficient vectors.
"""

from fractions import Fraction
from functools import lru_cache
from math import factorial

import numpy as np

from .poly import Poly

__all__ = ["unit_quadratic_form", "jiang_shu"]


@lru_cache(maxsize=None)
def unit_quadratic_form(degree: int) -> np.ndarray:
    """Matrix Q with I[P] = b @ Q @ b for P = sum_m b_m xi^m, xi in [-1/2, 1/2].

    Entries are assembled in exact arithmetic and rounded once.  Row and
    column 0 are zero: the indicator ignores the constant term.
    """
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    q = np.zeros((degree + 1, degree + 1))
    for i in range(1, degree + 1):
        for j in range(i, degree + 1):
            if (i + j) % 2:
                continue
            s = Fraction(0)
            for l in range(1, i + 1):
                s += (Fraction(factorial(i) * factorial(j),
                               factorial(i - l) * factorial(j - l))
                      * Fraction(2) ** (2 * l - i - j)
                      / (i + j - 2 * l + 1))
            q[i, j] = q[j, i] = float(s)
    q.flags.writeable = False
    return q


def jiang_shu(P: Poly, cell) -> float:
    """Indicator of ``P`` over ``cell = (lo, hi)``.

    ``P`` must be centered at the cell midpoint.
    """
    lo, hi = cell
    h = hi - lo
    b = P.coeffs * (h / P.scale) ** np.arange(P.coeffs.size)
    return float(b @ unit_quadratic_form(P.degree) @ b)
