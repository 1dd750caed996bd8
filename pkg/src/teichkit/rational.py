"""Exact rational functions ``P(z) / Q(z)`` with ascending coefficient arrays.

Differentials of polynomial (or rational) maps are rational, so keeping
this form alongside the truncated Taylor series lets sup-norms be
evaluated right up to the unit circle without truncation error.
"""

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

from . import series


def _poly(c):
    c = np.atleast_1d(np.asarray(c, dtype=complex))
    return series.trim(c) if len(c) else np.zeros(1, dtype=complex)


@dataclass(frozen=True, eq=False)
class Rational:
    num: np.ndarray
    den: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "num", _poly(self.num))
        object.__setattr__(self, "den", _poly(self.den))
        if not np.any(self.den):
            raise ZeroDivisionError("rational function with zero denominator")

    @classmethod
    def polynomial(cls, c):
        return cls(c, [1.0])

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return series.evaluate(self.num, z) / series.evaluate(self.den, z)

    def deriv(self):
        dn = P.polysub(P.polymul(P.polyder(self.num), self.den),
                       P.polymul(self.num, P.polyder(self.den)))
        return Rational(dn, P.polymul(self.den, self.den))

    def __add__(self, other):
        if not isinstance(other, Rational):
            other = Rational.polynomial([other])
        if np.array_equal(self.den, other.den):
            return Rational(P.polyadd(self.num, other.num), self.den)
        return Rational(P.polyadd(P.polymul(self.num, other.den), P.polymul(other.num, self.den)),
                        P.polymul(self.den, other.den))

    def __neg__(self):
        return Rational(-self.num, self.den)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Rational):
            return Rational(P.polymul(self.num, other.num), P.polymul(self.den, other.den))
        return Rational(self.num * complex(other), self.den)

    __rmul__ = __mul__

    def taylor(self, n):
        return series.div(self.num, self.den, n)
