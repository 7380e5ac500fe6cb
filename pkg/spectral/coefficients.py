# zaremba-spectra - Spectral toolkit for non-coercive mixed problems
# Copyright (C) 2025 Nicholas Acord <ncacord@protonmail.com>
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.

"""
coefficients.py - Operator coefficient data and its elementary transforms.

- EllipticCoefficients: evaluators for the Hermitian matrix A(x) and the
  parameter coefficient a02(x), audited on a finite sample set
- Hermitian square-root factorisation D*D = A
- Polar decomposition of a02 with a continuous phase branch
- Lame <-> scalar complexification and boundary stress coefficients
- Sample sets, closed-form presets and tabulated CSV coefficients
"""

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg
from scipy.spatial import cKDTree
from scipy.stats import qmc

from utils.error_handler import (
    ConfigInvalid,
    EmptySamples,
    IoError,
    NonHermitian,
    NotPSD,
    NotUnitNormal,
    ZeroPhaseUndefined,
)
from utils.logging_manager import get_logger

logger = get_logger("zaremba.coefficients")

HERMITIAN_TOL = 1e-12
# eigenvalues down to -PSD_TOL * ||A|| count as roundoff
PSD_TOL = 1e-12
ZERO_MODULUS = 1e-14
DEFAULT_SAMPLES = 1000

TABULATED_COLUMNS = [
    "x1",
    "x2",
    "ReA11",
    "ImA11",
    "ReA12",
    "ImA12",
    "ReA21",
    "ImA21",
    "ReA22",
    "ImA22",
    "Rea02",
    "Ima02",
]


@dataclass(frozen=True)
class EllipticCoefficients:
    """Second-order and parameter coefficients of the operator."""

    n: int
    A: Callable[[np.ndarray], np.ndarray]
    a02: Callable[[np.ndarray], complex]
    sample_set: np.ndarray
    label: str = "custom"

    def a02_samples(self) -> np.ndarray:
        return np.array([complex(self.a02(x)) for x in self.sample_set])

    def audit(self) -> None:
        """Check Hermitian symmetry and positive semidefiniteness of A on every sample.

        Raises:
            EmptySamples: no samples.
            NonHermitian: A(x) differs from A(x)* beyond roundoff.
            NotPSD: A(x) has an eigenvalue below -1e-12 ||A(x)||.
        """
        if len(self.sample_set) == 0:
            raise EmptySamples("coefficient sample set is empty")
        for index, x in enumerate(self.sample_set):
            a = np.asarray(self.A(x), dtype=complex)
            _check_hermitian(a, where=f"sample {index}")
            scale = max(linalg.norm(a, 2), 1e-300)
            smallest = linalg.eigvalsh(a)[0]
            if smallest < -PSD_TOL * scale:
                raise NotPSD(
                    f"A(x) has eigenvalue {smallest:.3e} at sample {index}",
                    sample=index,
                )


@dataclass(frozen=True)
class FactorizedMatrix:
    """Factor D of a Hermitian PSD source with D*D = source."""

    D: np.ndarray
    source: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return self.D.conj().T @ self.D

    def relative_error(self) -> float:
        scale = max(linalg.norm(self.source, 2), 1e-300)
        return float(linalg.norm(self.reconstruct() - self.source, 2) / scale)


@dataclass(frozen=True)
class PhaseDecomposition:
    """Modulus and continuous phase branch of a02 over an ordered sample list."""

    modulus: np.ndarray
    phi0: np.ndarray  # NaN where the phase is undefined
    theta0: float
    Phi1: float
    Phi2: float
    Phi: float
    undefined: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=bool))

    @property
    def size(self) -> int:
        return int(self.modulus.size)

    @property
    def undefined_fraction(self) -> float:
        if self.size == 0:
            return 0.0
        return float(np.count_nonzero(self.undefined)) / self.size

    def recompose(self) -> np.ndarray:
        """modulus * exp(i phi0), with zero where the phase is undefined."""
        phases = np.where(self.undefined, 0.0, self.phi0)
        return np.where(self.undefined, 0.0, self.modulus * np.exp(1j * phases))


@dataclass(frozen=True)
class LameModel:
    """Lame-type system data: vartheta, alpha(x) >= 0 and rotation U(x)."""

    vartheta: float
    alpha: Callable[[np.ndarray], float]
    U: Callable[[np.ndarray], np.ndarray]

    def validate(self, samples: Sequence[np.ndarray]) -> None:
        if self.vartheta <= 0:
            raise ConfigInvalid("Lame parameter vartheta must be positive")
        for index, x in enumerate(samples):
            u = np.asarray(self.U(x), dtype=float)
            if abs(u[0, 0] - u[1, 1]) > HERMITIAN_TOL or abs(u[0, 1] + u[1, 0]) > HERMITIAN_TOL:
                raise ConfigInvalid(f"U(x) is not of the form (U1, -U2; U2, U1) at sample {index}")
            if abs(u[0, 0] ** 2 + u[1, 0] ** 2 - 1.0) > HERMITIAN_TOL:
                raise ConfigInvalid(f"U(x) is not orthogonal at sample {index}")
            if self.alpha(x) < 0:
                raise ConfigInvalid(f"alpha(x) is negative at sample {index}")


@dataclass(frozen=True)
class StressCoefficients:
    """First-order boundary operators as (coefficient of d1, coefficient of d2).

    sigma[i, j] is the stress component, tangential[i, j] the part
    nu_j d_i - nu_i d_j and tilde[i, j] the remainder with
    sigma = vartheta * (tilde + 2 * tangential).
    """

    nu: np.ndarray
    vartheta: float
    sigma: np.ndarray
    tangential: np.ndarray
    tilde: np.ndarray


def _check_hermitian(a: np.ndarray, where: str = "") -> None:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NonHermitian(f"matrix is not square {where}".strip())
    scale = max(float(np.max(np.abs(a))), 1.0)
    asym = float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0
    if asym > HERMITIAN_TOL * scale:
        raise NonHermitian(
            f"matrix is not Hermitian {where} (max |A - A*| = {asym:.3e})".strip(),
            asymmetry=asym,
        )


def hermitian_sqrt(A) -> FactorizedMatrix:
    """
    Unique PSD square root of a Hermitian PSD matrix via eigendecomposition.

    Eigenvalues down to -1e-12 ||A|| are clamped to zero.

    Raises:
        NonHermitian: A is not Hermitian within roundoff.
        NotPSD: an eigenvalue is below -1e-12 ||A||.
    """
    a = np.atleast_2d(np.asarray(A, dtype=complex))
    _check_hermitian(a)
    a = (a + a.conj().T) / 2.0

    w, v = linalg.eigh(a)
    scale = max(float(np.max(np.abs(w))) if w.size else 0.0, 1e-300)
    if w.size and w[0] < -PSD_TOL * scale:
        raise NotPSD(f"smallest eigenvalue {w[0]:.3e} is negative", eigenvalue=float(w[0]))

    clamped = int(np.count_nonzero(w < 0))
    if clamped:
        logger.debug(
            f"Clamped {clamped} roundoff-negative eigenvalues | min={w[0]:.3e}"
        )
    root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    root = (root + root.conj().T) / 2.0

    if np.isrealobj(A):
        root = root.real
    return FactorizedMatrix(D=root, source=np.atleast_2d(np.asarray(A)))


def polar_decompose(a02_samples, strict: bool = False, zero_tol: float = ZERO_MODULUS) -> PhaseDecomposition:
    """
    Split a02 samples into modulus and a continuous phase branch.

    The phase is unwrapped along the sample order. Samples with modulus below
    zero_tol have an undefined phase: they are excluded from Phi and force
    theta0 = 0.

    Args:
        a02_samples: complex samples in the intended continuation order
        strict: raise instead of marking undefined phases
        zero_tol: modulus below which the phase is undefined

    Raises:
        EmptySamples: no samples.
        ZeroPhaseUndefined: a zero-modulus sample with strict=True, or every
            sample has zero modulus.
    """
    z = np.asarray(a02_samples, dtype=complex).ravel()
    if z.size == 0:
        raise EmptySamples("polar_decompose needs at least one sample")

    modulus = np.abs(z)
    undefined = modulus < zero_tol

    if np.all(undefined):
        raise ZeroPhaseUndefined("every sample has zero modulus; no phase is defined")
    if np.any(undefined):
        count = int(np.count_nonzero(undefined))
        if strict:
            raise ZeroPhaseUndefined(
                f"{count} samples have modulus below {zero_tol:g}", count=count
            )
        logger.warning(
            f"Phase undefined at {count} zero-modulus samples; excluded from Phi"
        )

    phi0 = np.full(z.shape, np.nan)
    phi0[~undefined] = np.unwrap(np.angle(z[~undefined]))

    defined = phi0[~undefined]
    phi1 = float(np.min(defined))
    phi2 = float(np.max(defined))
    theta0 = 0.0 if np.any(undefined) else float(np.min(modulus))

    return PhaseDecomposition(
        modulus=modulus,
        phi0=phi0,
        theta0=theta0,
        Phi1=phi1,
        Phi2=phi2,
        Phi=phi2 - phi1,
        undefined=undefined,
    )


def complexify_lame(model: LameModel) -> Tuple[float, Callable[[np.ndarray], complex]]:
    """a02(x) = alpha(x) (U1(x) + i U2(x)); the scalar operator is 4 vartheta dbar* dbar + lambda^2 a02."""

    def a02(x):
        u = np.asarray(model.U(x), dtype=float)
        return complex(model.alpha(x) * (u[0, 0] + 1j * u[1, 0]))

    return model.vartheta, a02


def complexify_field(V1, V2):
    """u = V1 + i V2."""
    return np.asarray(V1, dtype=float) + 1j * np.asarray(V2, dtype=float)


def decomplexify(u):
    """(Re u, Im u)."""
    u = np.asarray(u, dtype=complex)
    return u.real.copy(), u.imag.copy()


def boundary_stress_coeffs(nu, vartheta: float) -> StressCoefficients:
    """
    Coefficients of sigma_ij = vartheta (delta_ij d_nu + nu_j d_i - nu_i d_j).

    Raises:
        NotUnitNormal: |nu| differs from 1 by more than 1e-12.
    """
    nu = np.asarray(nu, dtype=float)
    if nu.shape != (2,) or abs(math.hypot(nu[0], nu[1]) - 1.0) > 1e-12:
        raise NotUnitNormal(f"normal {nu.tolist()} is not a unit 2-vector")

    eye = np.eye(2)
    normal = np.zeros((2, 2, 2))
    tangential = np.zeros((2, 2, 2))
    for i in range(2):
        normal[i, i] = nu
        for j in range(2):
            tangential[i, j] = nu[j] * eye[i] - nu[i] * eye[j]

    sigma = vartheta * (normal + tangential)
    tilde = normal - tangential
    return StressCoefficients(
        nu=nu, vartheta=vartheta, sigma=sigma, tangential=tangential, tilde=tilde
    )


def modulus_factor(coeffs: EllipticCoefficients) -> EllipticCoefficients:
    """Companion coefficients with |a02| in place of a02."""
    return EllipticCoefficients(
        n=coeffs.n,
        A=coeffs.A,
        a02=lambda x: complex(abs(coeffs.a02(x))),
        sample_set=coeffs.sample_set,
        label=f"|{coeffs.label}|",
    )


def sample_disk(count: int = DEFAULT_SAMPLES, seed: int = 0, include_origin: bool = True) -> np.ndarray:
    """Quasi-random points in the closed unit disk (scrambled Halton)."""
    if count < 1:
        raise EmptySamples("sample count must be positive")
    sampler = qmc.Halton(d=2, scramble=True, seed=seed)
    draws = count - 1 if include_origin else count
    u = sampler.random(max(draws, 0))
    radius = np.sqrt(u[:, 0])
    angle = 2.0 * np.pi * u[:, 1]
    points = np.column_stack([radius * np.cos(angle), radius * np.sin(angle)])
    if include_origin:
        points = np.vstack([np.zeros((1, 2)), points])
    return points


def make_preset(
    name: str,
    count: int = DEFAULT_SAMPLES,
    seed: int = 0,
    value: complex = 1.0,
    d: float = 0.0,
    phase_lo: float = 0.0,
    phase_hi: float = 0.0,
) -> EllipticCoefficients:
    """
    Closed-form coefficient presets on the unit disk with A = I.

    - constant: a02 = value
    - monomial: a02 = |z|^(2d)
    - phase_ramp: a02 = exp(i phi(x1)), phi linear from phase_lo at x1 = -1
      to phase_hi at x1 = 1; samples are ordered by x1
    """
    samples = sample_disk(count, seed)
    identity = lambda x: np.eye(2, dtype=complex)  # noqa: E731

    if name == "constant":
        a02 = lambda x: complex(value)  # noqa: E731
    elif name == "monomial":
        if d < 0:
            raise ConfigInvalid("monomial preset requires d >= 0")

        def a02(x):
            r2 = float(x[0] ** 2 + x[1] ** 2)
            if d == 0:
                return 1.0 + 0.0j
            return complex(r2**d)

    elif name == "phase_ramp":
        samples = samples[np.argsort(samples[:, 0], kind="stable")]

        def a02(x):
            phase = phase_lo + (phase_hi - phase_lo) * (float(x[0]) + 1.0) / 2.0
            return complex(np.exp(1j * phase))

    else:
        raise ConfigInvalid(f"unknown coefficient preset '{name}'")

    logger.debug(f"Built preset coefficients | preset={name} | samples={len(samples)}")
    return EllipticCoefficients(n=2, A=identity, a02=a02, sample_set=samples, label=name)


def load_tabulated(path: str) -> EllipticCoefficients:
    """
    Load tabulated coefficients from CSV (columns x1, x2, ReA11, ..., Ima02).

    Evaluators return the value of the nearest tabulated sample; sample order
    is the file's row order.
    """
    rows: List[List[float]] = []
    try:
        with open(path, "r", encoding="utf-8", newline="") as f:
            reader = csv.reader(line for line in f if not line.startswith("#"))
            header = next(reader, None)
            if header is None or [h.strip() for h in header] != TABULATED_COLUMNS:
                raise ConfigInvalid(
                    f"tabulated coefficients need header {','.join(TABULATED_COLUMNS)}"
                )
            for line_no, row in enumerate(reader, start=2):
                if not row:
                    continue
                try:
                    rows.append([float(v) for v in row])
                except ValueError as e:
                    raise ConfigInvalid(f"bad number on line {line_no} of {path}") from e
    except OSError as e:
        raise IoError(f"cannot read tabulated coefficients: {e}") from e

    if not rows:
        raise EmptySamples(f"no samples in {path}")

    data = np.asarray(rows)
    points = data[:, 0:2]
    mats = (data[:, 2:10:2] + 1j * data[:, 3:10:2]).reshape(-1, 2, 2)
    a02_values = data[:, 10] + 1j * data[:, 11]
    tree = cKDTree(points)

    def nearest(x) -> int:
        return int(tree.query(np.asarray(x, dtype=float))[1])

    logger.info(f"Loaded tabulated coefficients | path={path} | samples={len(points)}")
    return EllipticCoefficients(
        n=2,
        A=lambda x: mats[nearest(x)],
        a02=lambda x: complex(a02_values[nearest(x)]),
        sample_set=points,
        label=f"tabulated:{path}",
    )


def coefficients_from_spec(spec: dict, count: Optional[int] = None, seed: int = 0) -> EllipticCoefficients:
    """Build coefficients from a config mapping: {"preset": ...} or {"tabulated": path}."""
    if not isinstance(spec, dict) or not spec:
        raise ConfigInvalid("coefficient spec must be a non-empty mapping")
    if "tabulated" in spec:
        return load_tabulated(spec["tabulated"])
    preset = spec.get("preset")
    if preset is None:
        raise ConfigInvalid("coefficient spec needs 'preset' or 'tabulated'")
    value = spec.get("value", 1.0)
    if isinstance(value, (list, tuple)):
        value = complex(value[0], value[1])
    return make_preset(
        preset,
        count=count or int(spec.get("samples", DEFAULT_SAMPLES)),
        seed=seed,
        value=complex(value),
        d=float(spec.get("d", 0.0)),
        phase_lo=float(spec.get("phase_lo", 0.0)),
        phase_hi=float(spec.get("phase_hi", 0.0)),
    )
