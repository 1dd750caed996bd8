"""Truncated power-series arithmetic on complex coefficient arrays.

A series is a 1-d complex array ``c`` with ``c[k]`` the coefficient of
``z**k``.  Every operation takes a truncation degree ``n`` and returns an
array of length ``n + 1``.
"""

import numpy as np

PIVOT_TOL = 1e-12


def as_series(c, n=None):
    """Coerce ``c`` to a complex array, padded or cut to degree ``n``."""
    c = np.atleast_1d(np.asarray(c, dtype=complex))
    if n is None:
        return c.copy()
    out = np.zeros(n + 1, dtype=complex)
    m = min(len(c), n + 1)
    out[:m] = c[:m]
    return out


def evaluate(c, z):
    """Horner evaluation of the series at ``z`` (scalar or array)."""
    z = np.asarray(z, dtype=complex)
    acc = np.zeros_like(z)
    for coeff in c[::-1]:
        acc = acc * z + coeff
    return acc


def mul(a, b, n):
    return as_series(np.convolve(as_series(a, n), as_series(b, n)), n)


def div(a, b, n):
    """Taylor coefficients of ``a / b`` to degree ``n``.

    Solved recursively with pivot ``b[0]``; raises ``ZeroDivisionError``
    when ``|b[0]|`` is below ``PIVOT_TOL``.
    """
    a = as_series(a, n)
    b = as_series(b, n)
    if abs(b[0]) < PIVOT_TOL:
        raise ZeroDivisionError("series division: leading coefficient of divisor vanishes")
    q = np.zeros(n + 1, dtype=complex)
    for k in range(n + 1):
        # b[1:k+1] . q[k-1::-1]
        q[k] = (a[k] - np.dot(b[1:k + 1], q[k - 1::-1] if k else q[:0])) / b[0]
    return q


def deriv(c, order=1):
    c = as_series(c)
    for _ in range(order):
        if len(c) <= 1:
            return np.zeros(1, dtype=complex)
        c = c[1:] * np.arange(1, len(c))
    return c


def integ(c):
    """Antiderivative vanishing at 0 (degree grows by one)."""
    c = as_series(c)
    out = np.zeros(len(c) + 1, dtype=complex)
    out[1:] = c / np.arange(1, len(c) + 1)
    return out


def exp(c, n):
    """Taylor coefficients of ``exp(c(z))`` to degree ``n``.

    Uses ``E' = c' E``, i.e. ``k e_k = sum_{j=1..k} j c_j e_{k-j}``.
    """
    c = as_series(c, n)
    e = np.zeros(n + 1, dtype=complex)
    e[0] = np.exp(c[0])
    jc = np.arange(n + 1) * c
    for k in range(1, n + 1):
        e[k] = np.dot(jc[1:k + 1], e[k - 1::-1]) / k
    return e


def compose(outer, inner, n):
    """Coefficients of ``outer(inner(z))`` to degree ``n``; needs ``inner(0) == 0``."""
    inner = as_series(inner, n)
    if abs(inner[0]) > 0:
        raise ValueError("series composition requires inner(0) == 0")
    outer = as_series(outer)
    acc = np.zeros(n + 1, dtype=complex)
    # outer degree beyond n contributes nothing once inner(0) == 0
    for coeff in outer[:n + 1][::-1]:
        acc = mul(acc, inner, n)
        acc[0] += coeff
    return acc


def power(c, k, n):
    out = as_series([1.0], n)
    for _ in range(k):
        out = mul(out, c, n)
    return out


def trim(c, tol=0.0):
    """Drop trailing coefficients with modulus <= tol (keeps at least one)."""
    c = as_series(c)
    nz = np.nonzero(np.abs(c) > tol)[0]
    return c[: (nz[-1] + 1 if len(nz) else 1)]


def tail_bound(c, n, radius=1.0):
    """Sum of ``|c_k| radius**k`` for ``k > n``: the discarded-tail bound."""
    c = as_series(c)
    if len(c) <= n + 1:
        return 0.0
    k = np.arange(n + 1, len(c))
    return float(np.sum(np.abs(c[n + 1:]) * radius ** k))
