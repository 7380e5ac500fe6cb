# zaremba-spectra - Spectral toolkit for non-coercive mixed problems
# Copyright (C) 2025 Nicholas Acord <ncacord@protonmail.com>
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.

"""
ellipticity.py - Parameter-ellipticity audits on rays arg(lambda) = phi.

- Symbol evaluation and per-ray audits (theta0, theta1, eta)
- Optimal ray for a given phase oscillation and its admissible window
- Invertibility / completeness budgets for the perturbation norm
- Embedding exponent of the form domain
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from spectral.coefficients import EllipticCoefficients, PhaseDecomposition
from utils.error_handler import EmptySamples, OscillationTooLarge, RhoOutOfRange
from utils.logging_manager import get_logger

logger = get_logger("zaremba.ellipticity")

STRICT_MARGIN = 1e-12
AE_THRESHOLD = 0.01
BOUNDARY_CLASSES = ("Lipschitz", "C2")


def normalize_angle(phi: float) -> float:
    """Map an angle to (-pi, pi]."""
    return math.pi - math.fmod(math.fmod(math.pi - phi, 2 * math.pi) + 2 * math.pi, 2 * math.pi)


@dataclass(frozen=True)
class Ray:
    """The ray {arg(lambda) = phi_gamma}."""

    phi_gamma: float

    def __post_init__(self):
        object.__setattr__(self, "phi_gamma", normalize_angle(float(self.phi_gamma)))

    def point(self, modulus: float) -> complex:
        return modulus * complex(math.cos(self.phi_gamma), math.sin(self.phi_gamma))


@dataclass(frozen=True)
class RayReport:
    phi_gamma: float
    theta0: float
    theta1: float
    eta: float
    ok_strong: bool
    ok_ae: bool
    argmin_sample: int
    undefined_fraction: float

    def as_dict(self) -> dict:
        return {
            "phi_gamma": self.phi_gamma,
            "theta0": self.theta0,
            "theta1": self.theta1,
            "eta": self.eta,
            "ok_strong": self.ok_strong,
            "ok_ae": self.ok_ae,
            "argmin_sample": self.argmin_sample,
            "undefined_fraction": self.undefined_fraction,
        }


@dataclass(frozen=True)
class Budget:
    """Inputs of the invertibility and completeness budgets."""

    delta_s_norm: float
    rho: float
    n: int
    Phi: float
    norm_label: str = "discrete"

    def __post_init__(self):
        _check_rho(self.rho)
        if self.Phi < 0:
            raise ValueError("phase oscillation Phi must be non-negative")
        if self.n < 1:
            raise ValueError("dimension n must be positive")


@dataclass(frozen=True)
class BudgetVerdict:
    ok_inv: bool
    ok_complete: bool
    inv_value: float
    complete_value: float
    corner_width: float
    norm_label: str

    def as_dict(self) -> dict:
        return {
            "ok_inv": self.ok_inv,
            "ok_complete": self.ok_complete,
            "inv_value": self.inv_value,
            "complete_value": self.complete_value,
            "corner_width": self.corner_width,
            "norm_label": self.norm_label,
        }


@dataclass(frozen=True)
class EmbeddingExponent:
    """Sobolev exponent s; minus_epsilon marks 's = value - eps for every eps > 0'."""

    value: float
    minus_epsilon: bool

    def __str__(self) -> str:
        return f"{self.value:g} - eps" if self.minus_epsilon else f"{self.value:g}"


def _check_rho(rho: float) -> None:
    if not (0.0 <= rho <= 0.5):
        raise RhoOutOfRange(f"rho must lie in [0, 1/2], got {rho}", rho=rho)


def symbol_eval(
    coeffs: EllipticCoefficients,
    x,
    zeta,
    lam: complex,
    a1: Optional[Sequence] = None,
) -> complex:
    """
    sum a_ij(x) zeta_i zeta_j + lambda sum a_j^(1)(x) zeta_j + lambda^2 a02(x).

    Args:
        a1: optional first-order coefficients, evaluators or constants, one per direction
    """
    zeta = np.asarray(zeta, dtype=float)
    value = complex(zeta @ np.asarray(coeffs.A(x), dtype=complex) @ zeta)
    if a1 is not None:
        first = sum(
            (a(x) if callable(a) else a) * z for a, z in zip(a1, zeta)
        )
        value += lam * complex(first)
    value += lam**2 * complex(coeffs.a02(x))
    return value


def _cosines(decomp: PhaseDecomposition, phi_gamma: float) -> np.ndarray:
    defined = ~decomp.undefined
    values = np.full(decomp.size, np.inf)
    values[defined] = np.cos(decomp.phi0[defined] + 2.0 * phi_gamma)
    return values


def check_ray(
    decomp: PhaseDecomposition, ray: Ray, ae_threshold: float = AE_THRESHOLD
) -> RayReport:
    """
    Audit a ray against the phase data.

    theta1 = min cos(phi0(x) + 2 phi_gamma) over samples with a defined
    phase; eta = max(0, -theta1). ok_strong needs theta0 > 0 and
    theta1 > -1; ok_ae needs the zero-modulus fraction below ae_threshold.

    Raises:
        EmptySamples: the decomposition holds no samples.
    """
    if decomp.size == 0:
        raise EmptySamples("check_ray needs at least one sample")

    cosines = _cosines(decomp, ray.phi_gamma)
    argmin = int(np.argmin(cosines))
    theta1 = float(cosines[argmin])
    eta = max(0.0, -theta1)

    report = RayReport(
        phi_gamma=ray.phi_gamma,
        theta0=decomp.theta0,
        theta1=theta1,
        eta=eta,
        ok_strong=bool(decomp.theta0 > 0 and theta1 > -1.0 + STRICT_MARGIN),
        ok_ae=bool(decomp.undefined_fraction < ae_threshold),
        argmin_sample=argmin,
        undefined_fraction=decomp.undefined_fraction,
    )
    logger.debug(
        f"Ray audit | phi={ray.phi_gamma:.6f} | theta1={theta1:.6f} | eta={eta:.6f}"
    )
    return report


def optimal_ray(decomp: PhaseDecomposition) -> Ray:
    """
    Ray at phi = -(Phi1 + Phi2)/4, where theta1 >= cos(Phi/2).

    Raises:
        OscillationTooLarge: Phi >= 2 pi.
    """
    if decomp.Phi >= 2 * math.pi:
        raise OscillationTooLarge(
            f"phase oscillation {decomp.Phi:.6f} is not below 2*pi", Phi=decomp.Phi
        )
    return Ray(-(decomp.Phi2 + decomp.Phi1) / 4.0)


def scan_rays(decomp: PhaseDecomposition, count: int) -> List[Tuple[float, float, float]]:
    """(phi_gamma, theta1, eta) on a uniform grid of phi in (-pi/2, pi/2]; theta1 has period pi."""
    if count < 1:
        raise ValueError("ray scan needs at least one ray")
    rows = []
    for i in range(count):
        phi = -math.pi / 2 + math.pi * (i + 1) / count
        report = check_ray(decomp, Ray(phi))
        rows.append((report.phi_gamma, report.theta1, report.eta))
    return rows


def corner_half_width(rho: float, n: int) -> float:
    """pi (2 rho + 1) / (2 n)."""
    return math.pi * (2.0 * rho + 1.0) / (2.0 * n)


def invertibility_budget(b: Budget) -> BudgetVerdict:
    """
    ok_inv:      ||ds||^2 + max(0, -cos(Phi/2))^2 < 1
    ok_complete: Phi < pi(2rho+1)/(2n) and
                 ||ds||^2 + max(0, -cos((pi(2rho+1) - 2n Phi)/(4n)))^2 < 1
    """
    ds2 = b.delta_s_norm**2
    inv_value = ds2 + max(0.0, -math.cos(b.Phi / 2.0)) ** 2
    width = corner_half_width(b.rho, b.n)
    angle = (math.pi * (2.0 * b.rho + 1.0) - 2.0 * b.n * b.Phi) / (4.0 * b.n)
    complete_value = ds2 + max(0.0, -math.cos(angle)) ** 2

    verdict = BudgetVerdict(
        ok_inv=inv_value < 1.0,
        ok_complete=bool(b.Phi < width and complete_value < 1.0),
        inv_value=inv_value,
        complete_value=complete_value,
        corner_width=width,
        norm_label=b.norm_label,
    )
    logger.debug(f"Budget | {verdict.as_dict()}")
    return verdict


def budget_from_matrix(Ds, Phi: float, rho: float, n: int) -> Budget:
    """Budget whose perturbation norm is the spectral norm of the matrix Ds."""
    ds = np.atleast_2d(np.asarray(Ds, dtype=complex))
    norm = float(linalg.norm(ds, 2)) if ds.size else 0.0
    return Budget(delta_s_norm=norm, rho=rho, n=n, Phi=Phi, norm_label="discrete")


def lemma_lower_bound(eta: float, delta_s_norm: float) -> float:
    """sqrt(1 - eta^2) - ||ds||: a lower bound for ||L(lambda)u||_- / ||u||_+ on the ray when positive."""
    if not 0.0 <= eta <= 1.0:
        raise ValueError("eta must lie in [0, 1]")
    return math.sqrt(1.0 - eta * eta) - delta_s_norm


def admissible_ray_window(
    decomp: PhaseDecomposition, rho: float, n: int, a: float = 0.5
) -> Tuple[float, float]:
    """
    Open interval of ray angles used for rays of minimal growth:
    -(pi + Phi1 - a eps)/2 < phi < (pi - Phi2 - a eps)/2 with
    2 eps = pi(2rho+1)/(2n) - Phi.

    Raises:
        OscillationTooLarge: Phi >= pi(2rho+1)/(2n).
    """
    _check_rho(rho)
    if not 0.0 < a < 1.0:
        raise ValueError("window parameter a must lie in (0, 1)")
    width = corner_half_width(rho, n)
    if decomp.Phi >= width:
        raise OscillationTooLarge(
            f"phase oscillation {decomp.Phi:.6f} exceeds corner width {width:.6f}",
            Phi=decomp.Phi,
        )
    eps = (width - decomp.Phi) / 2.0
    lo = -(math.pi + decomp.Phi1 - a * eps) / 2.0
    hi = (math.pi - decomp.Phi2 - a * eps) / 2.0
    return lo, hi


def embedding_exponent(rho: float, boundary_class: str) -> EmbeddingExponent:
    """
    Exponent s of the embedding of the form domain into H^s(D).

    rho = 0, Lipschitz boundary: s = 1/2 - eps; rho = 0, C2 boundary:
    s = 1/2; 0 < rho <= 1/2: s = 1/2 + rho.

    Raises:
        RhoOutOfRange: rho outside [0, 1/2].
    """
    _check_rho(rho)
    if boundary_class not in BOUNDARY_CLASSES:
        raise ValueError(f"boundary class must be one of {BOUNDARY_CLASSES}")
    if rho == 0:
        return EmbeddingExponent(0.5, minus_epsilon=boundary_class == "Lipschitz")
    return EmbeddingExponent(0.5 + rho, minus_epsilon=False)
