"""Stable evaluation of the special functions behind all closed-form expressions.

Laguerre and physicists' Hermite polynomials go through three-term
recurrences; the two-parameter Hermite polynomial and every factorial or
binomial weight are handled in log-magnitude + sign form so that modulation
powers up to the supported caps never overflow an intermediate product.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

MAX_POLY_DEGREE = 64
MAX_BIVARIATE_DEGREE = 32
MAX_FACTORIAL_ARG = 128

_LOG_DBL_MAX = math.log(np.finfo(float).max)


@dataclass(frozen=True)
class PolynomialEval:
    """Polynomial value plus the largest intermediate magnitude met while
    forming it, a cheap loss-of-precision diagnostic."""

    value: complex | float
    condition_hint: float


@dataclass(frozen=True)
class LogCoeff:
    """A coefficient stored as natural-log magnitude and a sign in {-1, 0, +1}.

    For arguments whose value fits a double exactly, ``log_magnitude`` is
    nudged so that ``sign * exp(log_magnitude)`` lands as close to the exact
    value as the exp/log grid permits (exactly, whenever a preimage exists).
    """

    log_magnitude: float
    sign: int

    def to_float(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.log_magnitude)


def _check_degree(n: int, cap: int, what: str) -> None:
    if not isinstance(n, (int, np.integer)):
        raise ValueError(f"{what} degree must be an integer, got {n!r}")
    if n < 0:
        raise ValueError(f"{what} degree must be nonnegative, got {n}")
    if n > cap:
        raise ValueError(f"{what} degree {n} exceeds the supported cap {cap}")


def _as_value(arr: np.ndarray):
    return arr.item() if arr.ndim == 0 else arr


def laguerre_eval(n: int, x) -> PolynomialEval:
    """Laguerre polynomial L_n(x) by the three-term recurrence
    (k+1) L_{k+1} = (2k+1-x) L_k - k L_{k-1}."""
    _check_degree(n, MAX_POLY_DEGREE, "Laguerre")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return PolynomialEval(_as_value(prev), 1.0)
    cur = 1.0 - x
    hint = max(1.0, float(np.max(np.abs(cur))))
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 - x) * cur - k * prev) / (k + 1)
        hint = max(hint, float(np.max(np.abs(cur))))
    return PolynomialEval(_as_value(cur), hint)


def laguerre(n: int, x):
    return laguerre_eval(n, x).value


def hermite_eval(n: int, x) -> PolynomialEval:
    """Physicists' Hermite polynomial H_n(x) via H_{k+1} = 2x H_k - 2k H_{k-1}."""
    _check_degree(n, MAX_POLY_DEGREE, "Hermite")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return PolynomialEval(_as_value(prev), 1.0)
    cur = 2.0 * x
    hint = max(1.0, float(np.max(np.abs(cur))))
    for k in range(1, n):
        prev, cur = cur, 2.0 * x * cur - 2.0 * k * prev
        hint = max(hint, float(np.max(np.abs(cur))))
    return PolynomialEval(_as_value(cur), hint)


def hermite(n: int, x):
    return hermite_eval(n, x).value


def p_hermite_eval(n: int, x) -> PolynomialEval:
    """Modified Hermite combination H_n + 4n H_{n-2} + 4n(n-3) H_{n-4},
    defined for n = 0 and n >= 3 (the quantum numbers the oscillator admits).

    At n = 3 the last term carries coefficient 4n(n-3) = 0, which annihilates
    the otherwise undefined H_{-1}; the term is simply skipped.
    """
    if n in (1, 2):
        raise ValueError(f"index {n} is excluded (supported: 0 and n >= 3)")
    _check_degree(n, MAX_POLY_DEGREE, "modified Hermite")
    x = np.asarray(x, dtype=float)
    if n == 0:
        return PolynomialEval(_as_value(np.ones_like(x)), 1.0)
    head = hermite_eval(n, x)
    mid = hermite_eval(n - 2, x)
    out = np.asarray(head.value) + 4.0 * n * np.asarray(mid.value)
    hint = max(head.condition_hint, 4.0 * n * mid.condition_hint)
    if n > 3:
        low = hermite_eval(n - 4, x)
        out = out + 4.0 * n * (n - 3) * np.asarray(low.value)
        hint = max(hint, 4.0 * n * (n - 3) * low.condition_hint)
    return PolynomialEval(_as_value(out), hint)


def p_hermite(n: int, x):
    return p_hermite_eval(n, x).value


_FACTORIALS = [math.factorial(k) for k in range(MAX_FACTORIAL_ARG + 1)]
_LOG_FACTORIALS = [0.0] * (MAX_FACTORIAL_ARG + 1)
for _k in range(2, MAX_FACTORIAL_ARG + 1):
    _LOG_FACTORIALS[_k] = math.log(_FACTORIALS[_k])


def log_factorial_value(n: int) -> float:
    """Natural log of n! (exact-integer based for n <= 128, lgamma beyond)."""
    if n < 0:
        raise ValueError(f"factorial argument must be nonnegative, got {n}")
    if n <= MAX_FACTORIAL_ARG:
        return _LOG_FACTORIALS[n]
    return math.lgamma(n + 1)


def _snap_log(target: float) -> float:
    """Log of ``target`` nudged (up to a few ulp) so exp round-trips as
    closely as the exp/log float grid allows."""
    lm = math.log(target)
    best, best_err = lm, abs(math.exp(lm) - target)
    for direction in (math.inf, -math.inf):
        cand = lm
        for _ in range(4):
            cand = math.nextafter(cand, direction)
            err = abs(math.exp(cand) - target)
            if err < best_err:
                best, best_err = cand, err
            if err == 0.0:
                return cand
    return best


def log_factorial(n: int) -> LogCoeff:
    if n < 0 or n > MAX_FACTORIAL_ARG:
        raise ValueError(f"factorial argument must be in [0, {MAX_FACTORIAL_ARG}], got {n}")
    if n <= 1:
        return LogCoeff(0.0, 1)
    return LogCoeff(_snap_log(float(_FACTORIALS[n])), 1)


def log_binomial(n: int, k: int) -> LogCoeff:
    if n < 0 or n > MAX_FACTORIAL_ARG:
        raise ValueError(f"binomial row must be in [0, {MAX_FACTORIAL_ARG}], got {n}")
    c = math.comb(n, k) if 0 <= k <= n else 0
    if c == 0:
        return LogCoeff(-math.inf, 0)
    if c == 1:
        return LogCoeff(0.0, 1)
    return LogCoeff(_snap_log(float(c)), 1)


def signed_log_sum(entries) -> complex:
    """Sum of terms given as (log_magnitude, unit_phase) pairs.

    The accumulation factors out the largest magnitude first, so individual
    terms may exceed the double range as long as the final sum does not.
    """
    entries = [(lm, ph) for lm, ph in entries if lm != -math.inf and ph != 0]
    if not entries:
        return 0.0 + 0.0j
    top = max(lm for lm, _ in entries)
    acc = 0.0 + 0.0j
    for lm, ph in entries:
        acc += math.exp(lm - top) * ph
    if acc == 0:
        return 0.0 + 0.0j
    log_total = top + math.log(abs(acc))
    if log_total > _LOG_DBL_MAX:
        raise ValueError(f"sum magnitude exp({log_total:.1f}) exceeds the double range")
    return math.exp(top) * acc


def two_param_hermite_eval(m: int, n: int, z: complex) -> PolynomialEval:
    """Bivariate Hermite polynomial at the conjugate-pair argument (z, -z*):

        m! n! sum_k (-1/2)^k (-z*)^(m-k) z^(n-k) / (k! (m-k)! (n-k)!)

    for k = 0 .. min(m, n), assembled from log-space coefficients.
    """
    _check_degree(m, MAX_BIVARIATE_DEGREE, "bivariate Hermite")
    _check_degree(n, MAX_BIVARIATE_DEGREE, "bivariate Hermite")
    z = complex(z)
    w = -z.conjugate()
    log_abs_z = math.log(abs(z)) if z != 0 else -math.inf
    log_abs_w = math.log(abs(w)) if w != 0 else -math.inf
    arg_z = cmath.phase(z) if z != 0 else 0.0
    arg_w = cmath.phase(w) if w != 0 else 0.0
    lbase = log_factorial_value(m) + log_factorial_value(n)

    entries = []
    hint = 0.0
    for k in range(min(m, n) + 1):
        if m - k > 0 and w == 0:
            continue
        if n - k > 0 and z == 0:
            continue
        lm = (
            lbase
            - log_factorial_value(k)
            - log_factorial_value(m - k)
            - log_factorial_value(n - k)
            - k * math.log(2.0)
            + (m - k) * (log_abs_w if m - k else 0.0)
            + (n - k) * (log_abs_z if n - k else 0.0)
        )
        if lm > _LOG_DBL_MAX:
            raise ValueError("term magnitude exceeds the double range")
        phase = (-1.0) ** k * cmath.exp(1j * ((m - k) * arg_w + (n - k) * arg_z))
        entries.append((lm, phase))
        hint = max(hint, math.exp(min(lm, _LOG_DBL_MAX)))
    return PolynomialEval(signed_log_sum(entries), hint)


def two_param_hermite(m: int, n: int, z: complex) -> complex:
    return complex(two_param_hermite_eval(m, n, z).value)
