# zaremba-spectra - Spectral toolkit for non-coercive mixed problems
# Copyright (C) 2025 Nicholas Acord <ncacord@protonmail.com>
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.

"""
bessel.py - Bessel functions of the first kind of real order.

- Power series for small arguments
- Miller backward recurrence with a Neumann-sum normalisation beyond
- Values come in adjacent-order pairs (J_p, J_{p+1}) so derivatives need
  no negative orders
- The ratio J_{p+1}/J_p by continued fraction, for orders whose J_p
  underflows at small arguments

Accuracy for t <= 50: absolute error below 1e-11, relative error below
1e-11 wherever |J_p| >= 1e-2. Near a zero only the absolute bound holds.
"""

import math

import numpy as np
from scipy.special import gammaln

from utils.error_handler import OrderNegative

SERIES_LIMIT = 8.0
SERIES_TOL = 1e-17
RESCALE = 1e250


def _series(nu, t):
    """Power series of J_nu on an array of t > 0."""
    half = t / 2.0
    term = np.exp(nu * np.log(half) - gammaln(nu + 1.0))
    total = term.copy()
    q = -half * half
    m = 0
    while True:
        m += 1
        term = term * q / (m * (m + nu))
        total = total + term
        if m > 4 and np.all(np.abs(term) <= SERIES_TOL * np.abs(total) + 1e-300):
            break
        if m > 400:
            break
    return total


def _start_index(n, t_max):
    top = max(n, int(t_max)) + 15 + int(math.sqrt(160.0 * max(n, t_max, 1.0)))
    return 2 * (top // 2) + 2


def _miller(p0, n, t):
    """J_{p0+n}, J_{p0+n+1} on an array of t via backward recurrence.

    The recurrence runs on orders p0 + m from an even start index; the
    normalising identity (t/2)^p0 = sum_k c_k J_{p0+2k} fixes the scale.
    """
    big_m = _start_index(n + 1, float(np.max(t)))

    coeffs = np.empty(big_m // 2 + 1)
    r = math.exp(gammaln(p0 + 1.0))
    coeffs[0] = r
    for k in range(1, big_m // 2 + 1):
        coeffs[k] = (p0 + 2 * k) * r
        r *= (p0 + k) / (k + 1)

    f_next = np.zeros_like(t)
    f_cur = np.full_like(t, 1e-30)
    total = np.zeros_like(t)
    keep_n = np.zeros_like(t)
    keep_n1 = np.zeros_like(t)

    m = big_m
    while True:
        if m == n + 1:
            keep_n1 = f_cur.copy()
        if m == n:
            keep_n = f_cur.copy()
        if m % 2 == 0:
            total = total + coeffs[m // 2] * f_cur
        if m == 0:
            break
        f_prev = 2.0 * (p0 + m) / t * f_cur - f_next
        f_next, f_cur = f_cur, f_prev
        m -= 1

        scale = np.where(np.abs(f_cur) > RESCALE, RESCALE, 1.0)
        if np.any(scale != 1.0):
            f_cur = f_cur / scale
            f_next = f_next / scale
            total = total / scale
            keep_n = keep_n / scale
            keep_n1 = keep_n1 / scale

    norm = np.power(t / 2.0, p0) / total
    return keep_n * norm, keep_n1 * norm


def bessel_pair(p, t):
    """Return (J_p(t), J_{p+1}(t)) for p >= 0 and an array (or scalar) t >= 0.

    Raises:
        OrderNegative: p < 0.
    """
    if p < 0:
        raise OrderNegative(f"Bessel order must be non-negative, got {p}", order=p)
    if np.any(np.asarray(t) < 0):
        raise ValueError("Bessel argument must be non-negative")

    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    j0 = np.zeros_like(t_arr)
    j1 = np.zeros_like(t_arr)

    j0[t_arr == 0.0] = 1.0 if p == 0 else 0.0

    small = (t_arr > 0.0) & (t_arr <= SERIES_LIMIT)
    if np.any(small):
        ts = t_arr[small]
        j0[small] = _series(p, ts)
        j1[small] = _series(p + 1.0, ts)

    large = t_arr > SERIES_LIMIT
    if np.any(large):
        n = int(math.floor(p))
        p0 = p - n
        j0[large], j1[large] = _miller(p0, n, t_arr[large])

    if np.ndim(t) == 0:
        return float(j0[0]), float(j1[0])
    return j0, j1


def bessel_j(p, t):
    """Bessel function of the first kind J_p(t), real order p >= 0, t >= 0."""
    return bessel_pair(p, t)[0]


def bessel_ratio(p, t):
    """J_{p+1}(t) / J_p(t) by the backward continued fraction.

    Valid below the first positive zero of J_p (in particular for t < p),
    where J_p > 0. Only the ratio is propagated, so it stays finite where
    J_p itself underflows.

    Raises:
        OrderNegative: p < 0.
    """
    if p < 0:
        raise OrderNegative(f"Bessel order must be non-negative, got {p}", order=p)
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t_arr < 0):
        raise ValueError("Bessel argument must be non-negative")

    ratio = np.zeros_like(t_arr)
    # r_nu = t / (2(nu+1) - t r_{nu+1}), started at zero far above p
    for m in range(_start_index(0, float(np.max(t_arr, initial=0.0))), 0, -1):
        ratio = t_arr / (2.0 * (p + m) - t_arr * ratio)

    if np.ndim(t) == 0:
        return float(ratio[0])
    return ratio


def _prime_at_zero(p):
    if p == 0:
        return 0.0
    if p == 1:
        return 0.5
    if p < 1:
        return math.inf
    return 0.0


def bessel_j_prime(p, t):
    """Derivative J'_p(t) = (p/t) J_p(t) - J_{p+1}(t), with the series limit at t = 0."""
    jp, jp1 = bessel_pair(p, t)
    t_arr = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(
            t_arr > 0.0, (p / np.where(t_arr > 0, t_arr, 1.0)) * jp - jp1, _prime_at_zero(p)
        )
    if np.ndim(t) == 0:
        return float(out)
    return out


def bessel_j_second(p, t):
    """Second derivative from the two-order identities, for t > 0.

    Uses J'_p = (p/t) J_p - J_{p+1} and J'_{p+1} = J_p - ((p+1)/t) J_{p+1}.
    """
    jp, jp1 = bessel_pair(p, t)
    t_arr = np.asarray(t, dtype=float)
    d_p = (p / t_arr) * jp - jp1
    d_p1 = jp - ((p + 1.0) / t_arr) * jp1
    out = -(p / t_arr**2) * jp + (p / t_arr) * d_p - d_p1
    if np.ndim(t) == 0:
        return float(out)
    return out
