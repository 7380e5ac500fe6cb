# zaremba-spectra - Spectral toolkit for non-coercive mixed problems
# Copyright (C) 2025 Nicholas Acord <ncacord@protonmail.com>
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.

"""
disk_spectrum.py - The unit-disk model problem.

Operator 4 vartheta dbar* dbar + lambda^2 |z|^(2d) with the Robin-type
boundary operator whose angular symbol is B_k. Separation of variables gives
u = g(r) e^{ik phi} with the bounded radial profile

    g(r) = J_p(mu r^s / (s sqrt(vartheta))),   s = d + 1,   p = |k| / s,

and mu is fixed by the boundary equation at r = 1. Two forms of that
equation are available:

- scaled (default): vartheta t J'_p(t) + (B_k - vartheta k) J_p(t),
  t = mu / (s sqrt(vartheta)); at vartheta = 1 this is
  (mu/s) J'_p(mu/s) + c_k J_p(mu/s)
- normal: the same with the true normal derivative (r g')(1) = s t J'_p(t)

Both coincide for d = 0. This module enumerates the eigenpairs, evaluates
the weighted and form-domain inner products, checks the radial ODE and
expands functions in the eigenbasis.
"""

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq
from tqdm import tqdm

from spectral.bessel import bessel_j, bessel_j_prime, bessel_j_second, bessel_pair, bessel_ratio
from utils.error_handler import (
    BracketingFailed,
    ConfigInvalid,
    InsufficientSpectrum,
    RhoOutOfRange,
)
from utils.logging_manager import get_logger, logger_manager

logger = get_logger("zaremba.disk_spectrum")

__all__ = [
    "BOUNDARY_MODES",
    "BOUNDARY_FORMS",
    "DiskModel",
    "RadialEigenpair",
    "QuadratureRule",
    "Expansion",
    "DecayFit",
    "bessel_j",
    "bessel_j_prime",
    "gauss_legendre",
    "radial_profile",
    "boundary_residual",
    "find_eigenvalues",
    "eigenvalues_below",
    "spectrum_table",
    "weighted_inner",
    "hplus_inner",
    "radial_gram",
    "ode_residual",
    "expand_function",
    "fit_decay_slope",
    "decay_exponent_fit",
]

BOUNDARY_MODES = ("paper_eq_unit", "derived_from_B")
BOUNDARY_FORMS = ("scaled", "normal")
DEFAULT_ORDER = 200
SCAN_START = 1e-4
SCAN_STEP = math.pi / 4
ROOT_XTOL = 1e-15
ROOT_RESIDUAL_TOL = 1e-11
MIN_DECAY_COUNT = 200
MAX_DECAY_WAVENUMBER = 5000


@dataclass(frozen=True)
class DiskModel:
    """Unit-disk model: vartheta, weight exponent d, boundary order rho."""

    vartheta: float = 1.0
    d: float = 0.0
    rho: float = 0.0
    boundary_coeff_mode: str = "paper_eq_unit"
    boundary_form: str = "scaled"

    def __post_init__(self):
        if not self.vartheta > 0:
            raise ConfigInvalid(f"vartheta must be positive, got {self.vartheta}")
        if not self.d >= 0:
            raise ConfigInvalid(f"weight exponent d must be non-negative, got {self.d}")
        if not 0.0 <= self.rho <= 0.5:
            raise RhoOutOfRange(f"rho must lie in [0, 1/2], got {self.rho}", rho=self.rho)
        if self.boundary_coeff_mode not in BOUNDARY_MODES:
            raise ConfigInvalid(
                f"boundary_coeff_mode must be one of {BOUNDARY_MODES}, got {self.boundary_coeff_mode}"
            )
        if self.boundary_form not in BOUNDARY_FORMS:
            raise ConfigInvalid(f"boundary_form must be one of {BOUNDARY_FORMS}, got {self.boundary_form}")

    @property
    def s(self) -> float:
        return self.d + 1.0

    def order(self, k: int) -> float:
        return abs(k) / self.s

    def argument_scale(self) -> float:
        """t = mu r^s * argument_scale()."""
        return 1.0 / (self.s * math.sqrt(self.vartheta))

    def boundary_weight(self, k: int) -> float:
        """B_k: (1+k^2)^(rho/2), doubled in derived_from_B mode."""
        psi = (1.0 + k * k) ** (self.rho / 2.0)
        return 2.0 * psi if self.boundary_coeff_mode == "derived_from_B" else psi

    @property
    def derivative_weight(self) -> float:
        """Factor on vartheta t J'_p(t) in the boundary equation."""
        return 1.0 if self.boundary_form == "scaled" else self.s

    def form_boundary_weight(self, k: int) -> float:
        """Boundary coefficient of the H+ form whose natural condition is the boundary equation.

        The normal form gives B_k; the scaled form multiplies the Robin
        coefficient B_k - vartheta k by s, which leaves s B_k - d vartheta k.
        """
        if self.boundary_form == "normal":
            return self.boundary_weight(k)
        return self.s * self.boundary_weight(k) - self.d * self.vartheta * k

    def as_dict(self) -> dict:
        return {
            "vartheta": self.vartheta,
            "d": self.d,
            "rho": self.rho,
            "boundary_coeff_mode": self.boundary_coeff_mode,
            "boundary_form": self.boundary_form,
        }


@dataclass(frozen=True)
class RadialEigenpair:
    """One eigenpair u = g(r) e^{ik phi}; lambda^2 = -mu^2."""

    k: int
    nu: int
    mu: float
    lambda_sq: float
    norm_hd: float
    residual: float
    model: DiskModel = field(repr=False, compare=False)
    relative_residual: float = field(default=0.0, compare=False)

    def profile(self, r):
        """Unnormalised radial profile g(r)."""
        return radial_profile(self.k, self.model.d, self.mu, r, self.model.vartheta)

    def normalized_profile(self, r):
        """Radial factor of u with h(u, u) = 1."""
        return self.profile(r) / (math.sqrt(2.0 * math.pi) * self.norm_hd)


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Legendre rule on (0, 1)."""

    nodes: np.ndarray
    weights: np.ndarray
    order: int

    def integrate(self, values) -> float:
        return float(np.dot(self.weights, values))

    def mapped(self, s: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Nodes r = y^(2/s) with weights for int r^(2s-1) F dr and int F/r dr.

        Returns (r, weights_hd, weights_inv_r). The substitution removes the
        fractional powers of r carried by the profiles near the origin.
        """
        y = self.nodes
        r = np.power(y, 2.0 / s)
        weights_hd = self.weights * (2.0 / s) * y**3
        weights_inv_r = self.weights * (2.0 / s) / y
        return r, weights_hd, weights_inv_r


@dataclass
class Expansion:
    """Coefficients of f in {u_k^nu} and relative L2_h remainders."""

    coefficients: Dict[Tuple[int, int], complex]
    remainder: float
    norm_f: float
    remainder_by_n: List[float]
    K: int
    N: int


@dataclass
class DecayFit:
    slope: float
    intercept: float
    expected: float
    values: np.ndarray
    fit_range: Tuple[int, int]
    mu_max: float

    @property
    def deviation(self) -> float:
        return abs(self.slope - self.expected)


_RULES: Dict[int, QuadratureRule] = {}


def gauss_legendre(order: int = DEFAULT_ORDER) -> QuadratureRule:
    """Gauss-Legendre rule with `order` nodes mapped to (0, 1) (cached)."""
    if order < 1:
        raise ValueError("quadrature order must be positive")
    rule = _RULES.get(order)
    if rule is None:
        x, w = np.polynomial.legendre.leggauss(order)
        rule = QuadratureRule(nodes=(x + 1.0) / 2.0, weights=w / 2.0, order=order)
        _RULES[order] = rule
    return rule


def radial_profile(k: int, d: float, mu: float, r, vartheta: float = 1.0):
    """g_k(r, mu) = J_{|k|/(d+1)}(mu r^(d+1) / ((d+1) sqrt(vartheta)))."""
    s = d + 1.0
    t = mu * np.power(np.asarray(r, dtype=float), s) / (s * math.sqrt(vartheta))
    return bessel_j(abs(k) / s, t)


def boundary_residual(model: DiskModel, k: int, mu):
    """
    vartheta w t1 J'_p(t1) + (B_k - vartheta k) J_p(t1), t1 = mu / (s sqrt(vartheta)).

    w is 1 in the scaled form and s in the normal form, where the first term
    is vartheta (r g')(1). For vartheta = 1 and d = 0 both read
    mu J'_p(mu) + c_k J_p(mu).
    """
    t1 = np.asarray(mu, dtype=float) * model.argument_scale()
    jp, jp1 = bessel_pair(model.order(k), t1)
    p = model.order(k)
    # t J'_p(t) = p J_p - t J_{p+1}, finite at t = 0
    t_jprime = p * jp - t1 * jp1
    value = model.vartheta * model.derivative_weight * t_jprime + (
        model.boundary_weight(k) - model.vartheta * k
    ) * jp
    if np.ndim(mu) == 0:
        return float(value)
    return value


def _signed_residual(model: DiskModel, k: int, mu):
    """
    A function with the sign and roots of boundary_residual.

    Below t = p the residual is divided by J_p(t) > 0 and evaluated through
    J_{p+1}/J_p, so high orders whose J_p underflows still change sign
    where the residual does.
    """
    mu_arr = np.atleast_1d(np.asarray(mu, dtype=float))
    t = mu_arr * model.argument_scale()
    p = model.order(k)
    out = np.empty_like(t)

    below = t < p
    if np.any(below):
        tb = t[below]
        out[below] = model.vartheta * model.derivative_weight * (p - tb * bessel_ratio(p, tb)) + (
            model.boundary_weight(k) - model.vartheta * k
        )
    if not np.all(below):
        out[~below] = boundary_residual(model, k, mu_arr[~below])

    if np.ndim(mu) == 0:
        return float(out[0])
    return out


def _relative_residual(model: DiskModel, k: int, mu: float) -> float:
    """|residual| over the sum of the magnitudes of its two terms."""
    t = mu * model.argument_scale()
    p = model.order(k)
    weight = model.vartheta * model.derivative_weight
    coeff = model.boundary_weight(k) - model.vartheta * k
    if t < p:
        ratio = bessel_ratio(p, t)
        return abs(weight * (p - t * ratio) + coeff) / (weight * (p + t * ratio) + abs(coeff))
    jp, jp1 = bessel_pair(p, t)
    derivative = weight * (p * jp - t * jp1)
    scale = abs(derivative) + abs(coeff * jp)
    return abs(derivative + coeff * jp) / scale if scale > 0.0 else 0.0


def _scan_roots(model: DiskModel, k: int, mu_stop: float, limit: Optional[int]) -> List[Tuple[float, float]]:
    """Brackets (a, b) of strict sign changes of the residual for mu in (0, mu_stop]."""
    mu_step = SCAN_STEP / model.argument_scale()
    mu_start = SCAN_START / model.argument_scale()
    steps = int(math.ceil((mu_stop - mu_start) / mu_step)) + 1
    grid = mu_start + mu_step * np.arange(steps + 1)
    signs = np.sign(_signed_residual(model, k, grid))

    brackets = []
    for i in range(len(grid) - 1):
        if signs[i] * signs[i + 1] < 0:
            brackets.append((grid[i], grid[i + 1]))
        elif signs[i + 1] == 0 and i + 2 < len(grid) and signs[i] * signs[i + 2] < 0:
            # root exactly on a grid point
            brackets.append((grid[i], grid[i + 2]))
        if limit is not None and len(brackets) >= limit:
            break
    return [b for b in brackets if b[0] <= mu_stop]


def _solve_bracket(model: DiskModel, k: int, bracket: Tuple[float, float]) -> float:
    a, b = bracket
    return brentq(lambda m: _signed_residual(model, k, m), a, b, xtol=ROOT_XTOL, maxiter=200)


def _polish(model: DiskModel, k: int, nu: int, bracket: Tuple[float, float], quad: QuadratureRule) -> RadialEigenpair:
    mu = _solve_bracket(model, k, bracket)
    residual = boundary_residual(model, k, mu)
    relative = _relative_residual(model, k, mu)
    if relative >= ROOT_RESIDUAL_TOL:
        logger.warning(
            f"Root residual above tolerance | k={k} | nu={nu} | mu={mu:.15g} | relative={relative:.3e}"
        )

    r, weights_hd, _ = quad.mapped(model.s)
    g = radial_profile(k, model.d, mu, r, model.vartheta)
    norm_hd = math.sqrt(float(np.dot(weights_hd, g * g)))
    if norm_hd == 0.0:
        logger.warning(f"Profile underflows, h-norm is zero | k={k} | nu={nu} | mu={mu:.15g}")
    return RadialEigenpair(
        k=k,
        nu=nu,
        mu=float(mu),
        lambda_sq=-float(mu) ** 2,
        norm_hd=norm_hd,
        residual=float(residual),
        model=model,
        relative_residual=float(relative),
    )


def find_eigenvalues(
    model: DiskModel, k: int, count: int, quad: Optional[QuadratureRule] = None
) -> List[RadialEigenpair]:
    """
    First `count` positive roots of the boundary equation for wavenumber k.

    Roots are bracketed on a grid of step pi/4 in t = mu / (s sqrt(vartheta))
    and polished with Brent's method.

    Raises:
        BracketingFailed: the scan range ran out before `count` sign changes.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    quad = quad or gauss_legendre()
    p = model.order(k)
    scale = model.argument_scale()

    t_stop = math.pi * (count + p + 8)
    brackets: List[Tuple[float, float]] = []
    for _ in range(4):
        brackets = _scan_roots(model, k, t_stop / scale, count)
        if len(brackets) >= count:
            break
        t_stop *= 2.0
    if len(brackets) < count:
        raise BracketingFailed(
            f"found {len(brackets)} of {count} roots for k={k} below t={t_stop:.1f}",
            k=k,
            found=len(brackets),
        )

    pairs = [_polish(model, k, nu, bracket, quad) for nu, bracket in enumerate(brackets[:count], start=1)]
    logger.debug(
        f"Eigenvalues found | k={k} | count={count} | mu_1={pairs[0].mu:.12g} | mu_last={pairs[-1].mu:.12g}"
    )
    return pairs


def eigenvalues_below(
    model: DiskModel, k: int, mu_max: float, quad: Optional[QuadratureRule] = None
) -> List[RadialEigenpair]:
    """All eigenpairs of wavenumber k with mu < mu_max."""
    quad = quad or gauss_legendre()
    brackets = _scan_roots(model, k, mu_max, None)
    pairs = [_polish(model, k, nu, bracket, quad) for nu, bracket in enumerate(brackets, start=1)]
    return [pair for pair in pairs if pair.mu < mu_max]


def spectrum_table(
    model: DiskModel,
    ks: Iterable[int],
    count: int,
    threads: int = 1,
    progress: bool = False,
    quad: Optional[QuadratureRule] = None,
) -> Dict[int, List[RadialEigenpair]]:
    """find_eigenvalues over several wavenumbers, optionally on a thread pool."""
    ks = list(ks)
    quad = quad or gauss_legendre()
    start = time.perf_counter()

    def job(k: int) -> List[RadialEigenpair]:
        return find_eigenvalues(model, k, count, quad)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(
                tqdm(pool.map(job, ks), total=len(ks), disable=not progress, desc="wavenumbers")
            )
    else:
        results = [job(k) for k in tqdm(ks, disable=not progress, desc="wavenumbers")]

    logger_manager.log_performance(
        "spectrum_table",
        time.perf_counter() - start,
        extra={"wavenumbers": len(ks), "count": count, "threads": threads},
    )
    return dict(zip(ks, results))


def weighted_inner(f: Callable, g: Callable, d: float, quad: Optional[QuadratureRule] = None):
    """h_d(f, g) = int_0^1 r^(2d+1) f(r) conj(g(r)) dr."""
    quad = quad or gauss_legendre()
    r, weights_hd, _ = quad.mapped(d + 1.0)
    fv = np.broadcast_to(np.asarray(f(r)), r.shape)
    gv = np.broadcast_to(np.asarray(g(r)), r.shape)
    value = np.sum(weights_hd * fv * np.conj(gv))
    if np.iscomplexobj(value):
        return complex(value)
    return float(value)


def _tangential_factor(model: DiskModel, pair: RadialEigenpair, r) -> np.ndarray:
    """G(r) = r g'(r) - k g(r) = s t J'_p(t) - k J_p(t)."""
    p = model.order(pair.k)
    t = pair.mu * np.power(r, model.s) * model.argument_scale()
    jp, jp1 = bessel_pair(p, t)
    return model.s * (p * jp - t * jp1) - pair.k * jp


def hplus_inner(
    model: DiskModel,
    first: RadialEigenpair,
    second: RadialEigenpair,
    quad: Optional[QuadratureRule] = None,
) -> complex:
    """
    (u, v)_+ = 4 vartheta (dbar u, dbar v) + (Psi u, Psi v) on the boundary, for
    the h-normalised eigenfunctions of the two pairs.

    With dbar = (e^{i phi}/2)(d_r + (i/r) d_phi) the area term reduces to
    2 pi vartheta int G1 G2 / r dr, G = r g' - k g, and the boundary term to
    2 pi beta_k g1(1) g2(1) with beta_k = model.form_boundary_weight(k).
    Distinct wavenumbers give exactly zero.
    """
    if first.k != second.k:
        return 0j
    quad = quad or gauss_legendre()
    r, _, weights_inv_r = quad.mapped(model.s)
    g1 = _tangential_factor(model, first, r)
    g2 = _tangential_factor(model, second, r)
    area = model.vartheta * float(np.dot(weights_inv_r, g1 * g2))
    boundary = model.form_boundary_weight(first.k) * first.profile(1.0) * second.profile(1.0)
    scale = first.norm_hd * second.norm_hd
    # 2 pi from the angle cancels against the 2 pi of the h-normalisation
    return complex((area + boundary) / scale)


def radial_gram(pairs: Sequence[RadialEigenpair], quad: Optional[QuadratureRule] = None) -> np.ndarray:
    """Gram matrix of h_d over normalised profiles of one wavenumber."""
    if not pairs:
        return np.zeros((0, 0))
    model = pairs[0].model
    quad = quad or gauss_legendre()
    r, weights_hd, _ = quad.mapped(model.s)
    profiles = np.array([pair.profile(r) / pair.norm_hd for pair in pairs])
    return (profiles * weights_hd) @ profiles.T


def ode_residual(model: DiskModel, pair: RadialEigenpair, r_nodes, amplitude: float = 1.0) -> float:
    """
    Max relative residual of vartheta[(r g')' - k^2 g / r] + mu^2 r^(2d+1) g.

    Derivatives come from the two-order Bessel identities. For mu = 0 the
    bounded solution is g = r^|k|.
    """
    r = np.asarray(r_nodes, dtype=float)
    if np.any(r <= 0.0) or np.any(r > 1.0):
        raise ValueError("ODE residual nodes must lie in (0, 1]")
    k = pair.k
    s = model.s

    if pair.mu == 0.0:
        g = amplitude * r ** abs(k)
        rg_prime_prime = amplitude * k * k * r ** (abs(k) - 1)
        terms = [model.vartheta * rg_prime_prime, model.vartheta * k * k * g / r]
        residual = terms[0] - terms[1]
    else:
        p = model.order(k)
        t = pair.mu * r**s * model.argument_scale()
        jp = amplitude * bessel_j(p, t)
        d1 = amplitude * bessel_j_prime(p, t)
        d2 = amplitude * bessel_j_second(p, t)
        # (r g')' = (s^2 t / r) (J' + t J'')
        rg_prime_prime = (s * s * t / r) * (d1 + t * d2)
        terms = [
            model.vartheta * rg_prime_prime,
            model.vartheta * k * k * jp / r,
            pair.mu**2 * r ** (2 * model.d + 1) * jp,
        ]
        residual = terms[0] - terms[1] + terms[2]

    scale = max(float(np.max(np.abs(term))) for term in terms)
    if scale == 0.0:
        return 0.0
    return float(np.max(np.abs(residual)) / scale)


def expand_function(
    model: DiskModel,
    f: Callable,
    K: int,
    N: int,
    quad: Optional[QuadratureRule] = None,
    basis: Optional[Dict[int, List[RadialEigenpair]]] = None,
) -> Expansion:
    """
    Project f onto {u_k^nu : |k| <= K, nu <= N} in L2_h, h(u, v) = int |z|^(2d) u conj(v).

    f is called as f(x1, x2) on arrays. The angular part uses an FFT on a
    uniform grid, the radial part the mapped Gauss-Legendre nodes. The
    remainder ||f - Pf||_h / ||f||_h is evaluated directly on the grid for
    every N' <= N.
    """
    if K < 0 or N < 1:
        raise ValueError("expansion needs K >= 0 and N >= 1")
    quad = quad or gauss_legendre()
    r, weights_hd, _ = quad.mapped(model.s)
    m = max(64, 4 * K + 4)
    phi = 2.0 * np.pi * np.arange(m) / m
    x1 = np.outer(r, np.cos(phi))
    x2 = np.outer(r, np.sin(phi))
    values = np.broadcast_to(np.asarray(f(x1, x2), dtype=complex), x1.shape)

    modes = np.fft.fft(values, axis=1) / m  # modes[:, k % m] = f_k(r)
    wavenumbers = range(-K, K + 1)
    kept = np.zeros(m, dtype=bool)
    for k in wavenumbers:
        kept[k % m] = True

    tail = np.sum(np.abs(modes[:, ~kept]) ** 2, axis=1)
    norm_sq = 2.0 * np.pi * float(np.dot(weights_hd, np.sum(np.abs(modes) ** 2, axis=1)))

    if basis is None:
        basis = {k: find_eigenvalues(model, k, N, quad) for k in wavenumbers}

    coefficients: Dict[Tuple[int, int], complex] = {}
    residual_fields = {}
    profiles = {}
    for k in wavenumbers:
        fk = modes[:, k % m]
        residual_fields[k] = fk.copy()
        profiles[k] = []
        for pair in basis[k][:N]:
            u = pair.normalized_profile(r)
            # h(f, u) = 2 pi int r^(2d+1) f_k(r) u(r) dr
            c = 2.0 * np.pi * complex(np.dot(weights_hd, fk * u))
            coefficients[(k, pair.nu)] = c
            profiles[k].append((c, u))

    if norm_sq == 0.0:
        return Expansion(
            coefficients={key: 0j for key in coefficients},
            remainder=0.0,
            norm_f=0.0,
            remainder_by_n=[0.0] * N,
            K=K,
            N=N,
        )

    remainder_by_n = []
    for n_index in range(N):
        radial = tail.copy()
        for k in wavenumbers:
            c, u = profiles[k][n_index]
            residual_fields[k] = residual_fields[k] - c * u
            radial = radial + np.abs(residual_fields[k]) ** 2
        rem_sq = 2.0 * np.pi * float(np.dot(weights_hd, radial))
        remainder_by_n.append(math.sqrt(max(rem_sq, 0.0) / norm_sq))

    logger.debug(
        f"Expansion | K={K} | N={N} | remainder={remainder_by_n[-1]:.3e}"
    )
    return Expansion(
        coefficients=coefficients,
        remainder=remainder_by_n[-1],
        norm_f=math.sqrt(norm_sq),
        remainder_by_n=remainder_by_n,
        K=K,
        N=N,
    )


def fit_decay_slope(values, lo: int, hi: int) -> Tuple[float, float]:
    """Least-squares slope and intercept of log(value) against log(rank) on ranks lo..hi (1-based)."""
    values = np.sort(np.asarray(values, dtype=float))[::-1]
    lo = max(lo, 1)
    hi = min(hi, len(values))
    if hi - lo < 2:
        raise InsufficientSpectrum("decay fit needs at least three ranks")
    ranks = np.arange(lo, hi + 1)
    slope, intercept = np.polyfit(np.log(ranks), np.log(values[lo - 1 : hi]), 1)
    return float(slope), float(intercept)


def decay_exponent_fit(model: DiskModel, count: int) -> DecayFit:
    """
    Log-log decay slope of the family eigenvalues 1/mu^2 over all (k, nu).

    The cutoff mu_max grows until at least `count` eigenvalues lie below it;
    every wavenumber with a root under the cutoff is included, so the sorted
    list is the true head of the spectrum. The smallest root grows with |k|,
    so the sweep over k stops at the first |k| with no root below mu_max.

    Raises:
        InsufficientSpectrum: count < 200, or the sweep passes
            MAX_DECAY_WAVENUMBER without reaching a root-free |k|.
    """
    if count < MIN_DECAY_COUNT:
        raise InsufficientSpectrum(
            f"decay fit needs at least {MIN_DECAY_COUNT} eigenvalues, got {count}",
            count=count,
        )
    mu_max = 2.0 * model.s * math.sqrt(count / model.s)

    while True:
        mus: List[float] = []
        k = 0
        while True:
            found = 0
            for wavenumber in {k, -k}:
                roots = _root_values(model, wavenumber, _scan_roots(model, wavenumber, mu_max, None), mu_max)
                found += len(roots)
                mus.extend(roots)
            if found == 0:
                break
            k += 1
            if k > MAX_DECAY_WAVENUMBER:
                raise InsufficientSpectrum(
                    f"decay sweep still finds roots below mu={mu_max:.3f} at |k|={k}",
                    mu_max=mu_max,
                    wavenumber=k,
                )
        if len(mus) >= count:
            break
        mu_max *= 1.5

    values = np.sort(1.0 / np.square(mus))[::-1][:count]
    lo, hi = count // 4, count
    slope, intercept = fit_decay_slope(values, lo, hi)
    expected = -(2.0 * model.rho + 1.0) / 2.0
    fit = DecayFit(
        slope=slope,
        intercept=intercept,
        expected=expected,
        values=values,
        fit_range=(lo, hi),
        mu_max=mu_max,
    )
    logger.info(
        f"Decay fit | slope={slope:.4f} | expected={expected:.4f} | mu_max={mu_max:.3f} | wavenumbers={k}"
    )
    return fit


def _root_values(
    model: DiskModel, k: int, brackets: Sequence[Tuple[float, float]], mu_max: float
) -> List[float]:
    out = []
    for bracket in brackets:
        mu = _solve_bracket(model, k, bracket)
        if mu < mu_max:
            out.append(mu)
    return out
