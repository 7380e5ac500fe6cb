# zaremba-spectra - Spectral toolkit for non-coercive mixed problems
# Copyright (C) 2025 Nicholas Acord <ncacord@protonmail.com>
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.

"""
family.py - Finite-dimensional holomorphic family L(lambda) = L0 + Ds + Dc + lambda^2 C.

Matrices live in form-domain orthonormal coordinates, so L0 is the identity
and the dual norm is Euclidean.

- Assembly from the disk eigenbasis, seeded perturbations, Jordan test families
- Solves, characteristic values (linearised in zeta = lambda^2), root chains
- Corner localisation, ray scans, double completeness
- JSON family files with CSV or base64 matrix blocks
"""

import base64
import io
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import orjson
from scipy import linalg
from scipy.cluster.hierarchy import fcluster, linkage

from spectral.disk_spectrum import DiskModel, QuadratureRule, spectrum_table
from spectral.ellipticity import Ray
from utils.error_handler import (
    ChainIncomplete,
    CharacteristicLambda,
    ConfigInvalid,
    IoError,
    SingularC,
)
from utils.logging_manager import get_logger

logger = get_logger("zaremba.family")

SOLVE_TOL = 1e-10
CLUSTER_TOL = 1e-4
SINGULAR_TOL = 1e-8
LSTSQ_COND = 1e-10
CHAIN_TOL = 1e-8
RANK_TOL = 1e-8
ZERO_ZETA = 1e-12
DEFAULT_SPLIT_ANGLE = math.pi / 8
BLOCKS = ("L0", "Ds", "Dc", "C")


@dataclass(frozen=True)
class FamilyMatrices:
    """The pencil (L0, Ds, Dc, C) in form-domain orthonormal coordinates."""

    dim: int
    L0: np.ndarray
    Ds: np.ndarray
    Dc: np.ndarray
    C: np.ndarray
    basis_tag: str = "custom"
    labels: Tuple[Tuple[int, int], ...] = field(default=(), compare=False)

    def __post_init__(self):
        for name in BLOCKS:
            block = np.asarray(getattr(self, name), dtype=complex)
            if block.shape != (self.dim, self.dim):
                raise ConfigInvalid(
                    f"family block {name} has shape {block.shape}, expected ({self.dim}, {self.dim})"
                )
            object.__setattr__(self, name, block)

    @property
    def static(self) -> np.ndarray:
        """L0 + Ds + Dc."""
        return self.L0 + self.Ds + self.Dc

    def at(self, lam: complex) -> np.ndarray:
        """L(lambda)."""
        return self.static + (lam * lam) * self.C

    def with_perturbations(self, Ds=None, Dc=None) -> "FamilyMatrices":
        return FamilyMatrices(
            dim=self.dim,
            L0=self.L0,
            Ds=self.Ds if Ds is None else Ds,
            Dc=self.Dc if Dc is None else Dc,
            C=self.C,
            basis_tag=self.basis_tag,
            labels=self.labels,
        )


@dataclass(frozen=True)
class CharacteristicValue:
    lam: complex
    zeta: complex
    algebraic_multiplicity: int
    chain_length: int
    geometric_multiplicity: int = 1


@dataclass
class RootChain:
    """Eigenvector u0 with associated vectors u1, ..."""

    lambda0: complex
    vectors: List[np.ndarray]

    @property
    def length(self) -> int:
        return len(self.vectors)

    def relation_residuals(self, F: FamilyMatrices) -> List[float]:
        """||sum_{j} F_{m-j} u_j|| for m = 0..length-1."""
        taylor = _taylor(F, self.lambda0)
        out = []
        for m in range(self.length):
            total = np.zeros(F.dim, dtype=complex)
            for j in range(max(0, m - 2), m + 1):
                total += taylor[m - j] @ self.vectors[j]
            out.append(float(linalg.norm(total)))
        return out


@dataclass
class CornerReport:
    inside_fraction: float
    outliers: List[Dict[str, complex]]
    half_width: float
    mode: str


@dataclass
class RayScan:
    """Per-modulus scan of L on a ray plus the fitted growth constants."""

    phi_gamma: float
    rows: List[Dict[str, float]]
    p1: float
    q1: float
    k0: float
    gamma: float
    alpha: float

    @property
    def p1_positive(self) -> bool:
        return self.p1 > 0.0


def _taylor(F: FamilyMatrices, lam0: complex) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    return F.at(lam0), 2.0 * lam0 * F.C, F.C


def _spectral_norm(a: np.ndarray) -> float:
    return float(linalg.norm(a, 2)) if a.size else 0.0


def assemble_disk_family(
    model: DiskModel,
    K: int,
    N_per_k: int,
    perturbations: Optional[Tuple[Optional[np.ndarray], Optional[np.ndarray]]] = None,
    quad: Optional[QuadratureRule] = None,
    threads: int = 1,
) -> FamilyMatrices:
    """
    Family in the basis u_k^nu / mu, |k| <= K, nu <= N_per_k.

    L0 = I and C = diag(1/mu^2) ordered by descending diagonal.

    Raises:
        BracketingFailed: propagated from the eigenvalue search.
    """
    table = spectrum_table(model, range(-K, K + 1), N_per_k, threads=threads, quad=quad)
    pairs = sorted((pair for pairs in table.values() for pair in pairs), key=lambda p: p.mu)
    dim = len(pairs)

    Ds, Dc = (None, None) if perturbations is None else perturbations
    family = FamilyMatrices(
        dim=dim,
        L0=np.eye(dim),
        Ds=np.zeros((dim, dim)) if Ds is None else Ds,
        Dc=np.zeros((dim, dim)) if Dc is None else Dc,
        C=np.diag([1.0 / pair.mu**2 for pair in pairs]),
        basis_tag=(
            f"disk(vartheta={model.vartheta:g}, d={model.d:g}, rho={model.rho:g}, "
            f"mode={model.boundary_coeff_mode}, form={model.boundary_form}, K={K}, N={N_per_k})"
        ),
        labels=tuple((pair.k, pair.nu) for pair in pairs),
    )
    logger.info(f"Assembled disk family | dim={dim} | tag={family.basis_tag}")
    return family


def random_perturbation(dim: int, norm: float, seed: int, hermitian: bool = False) -> np.ndarray:
    """Seeded complex Gaussian matrix scaled to the given spectral norm."""
    rng = np.random.default_rng(seed)
    m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    if hermitian:
        m = (m + m.conj().T) / 2.0
    size = _spectral_norm(m)
    if size == 0.0 or norm == 0.0:
        return np.zeros((dim, dim), dtype=complex)
    return m * (norm / size)


def engineered_jordan_family(blocks: Sequence[Tuple[complex, int]], seed: int = 0) -> FamilyMatrices:
    """
    Family with prescribed Jordan structure in zeta = lambda^2.

    L0 = C = I and Dc = A - I with A = S(-J)S^-1, J the Jordan matrix of the
    (zeta0, size) blocks and S a well-conditioned random similarity.
    """
    sizes = [size for _, size in blocks]
    dim = sum(sizes)
    jordan = np.zeros((dim, dim), dtype=complex)
    offset = 0
    for zeta0, size in blocks:
        for i in range(size):
            jordan[offset + i, offset + i] = zeta0
            if i + 1 < size:
                jordan[offset + i, offset + i + 1] = 1.0
        offset += size

    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    s = np.eye(dim) + 0.5 * g / _spectral_norm(g)
    a = s @ (-jordan) @ linalg.inv(s)

    return FamilyMatrices(
        dim=dim,
        L0=np.eye(dim),
        Ds=np.zeros((dim, dim)),
        Dc=a - np.eye(dim),
        C=np.eye(dim),
        basis_tag=f"jordan(blocks={[(complex(z), n) for z, n in blocks]}, seed={seed})",
    )


def hminus_norm(F: FamilyMatrices, w) -> float:
    """Dual norm of a coordinate vector; Euclidean because L0 is the identity isometry."""
    return float(linalg.norm(np.asarray(w, dtype=complex)))


def solve(F: FamilyMatrices, lam: complex, f) -> np.ndarray:
    """
    Solve L(lambda) u = f.

    Raises:
        CharacteristicLambda: sigma_min(L(lambda)) <= 1e-10 ||L(lambda)||.
    """
    matrix = F.at(lam)
    sv = linalg.svdvals(matrix)
    if sv[-1] <= SOLVE_TOL * sv[0]:
        raise CharacteristicLambda(
            f"lambda={lam} is characteristic (sigma_min={sv[-1]:.3e})", lam=lam
        )
    rhs = np.asarray(f, dtype=complex)
    u = linalg.solve(matrix, rhs)
    if linalg.norm(rhs) > 0:
        backward = linalg.norm(matrix @ u - rhs) / linalg.norm(rhs)
        logger.debug(f"Solve | lambda={lam} | backward_error={backward:.3e}")
    return u


def _relative_distance(a: np.ndarray, b: np.ndarray) -> float:
    za = complex(a[0], a[1])
    zb = complex(b[0], b[1])
    return abs(za - zb) / max(abs(za), abs(zb), 1.0)


def _cluster(zetas: np.ndarray, tol: float) -> List[np.ndarray]:
    if zetas.size == 1:
        return [np.array([0])]
    points = np.column_stack([zetas.real, zetas.imag])
    tree = linkage(points, method="single", metric=_relative_distance)
    labels = fcluster(tree, t=tol, criterion="distance")
    return [np.flatnonzero(labels == label) for label in np.unique(labels)]


def _null_basis(matrix: np.ndarray, tol: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(right null basis, left null basis, singular values) at relative tolerance."""
    u, s, vh = linalg.svd(matrix)
    scale = max(s[0], 1e-300)
    rank = int(np.count_nonzero(s > tol * scale))
    rank = min(rank, matrix.shape[0] - 1)
    return vh[rank:].conj().T, u[:, rank:], s


def _check_regular(F: FamilyMatrices) -> None:
    c_norm = _spectral_norm(F.C)
    if c_norm == 0.0:
        raise SingularC("C is zero; the pencil has no finite characteristic values")
    sv_c = linalg.svdvals(F.C)
    if sv_c[-1] > 1e-12 * c_norm:
        return
    rng = np.random.default_rng(12345)
    scale = _spectral_norm(F.static) / c_norm
    for _ in range(2):
        zeta = scale * complex(rng.standard_normal(), rng.standard_normal())
        sv = linalg.svdvals(F.static + zeta * F.C)
        if sv[-1] > 1e-12 * sv[0]:
            return
    raise SingularC("C is singular and the pencil L0 + Ds + Dc + zeta C is not regular")


def characteristic_values(F: FamilyMatrices, cluster_tol: float = CLUSTER_TOL) -> List[CharacteristicValue]:
    """
    Characteristic values of L from the generalized eigenproblem
    (L0 + Ds + Dc) v = -zeta C v, lambda = +-sqrt(zeta).

    Nearby zetas are grouped (single linkage, relative distance cluster_tol)
    and a group is kept only if L is singular at its mean; otherwise its
    members stay simple.

    Raises:
        SingularC: C = 0, or C singular with a non-regular pencil.
    """
    _check_regular(F)
    static = F.static
    alpha, beta = linalg.eig(static, -F.C, right=False, homogeneous_eigvals=True)
    finite = np.abs(beta) > 1e-12 * np.abs(alpha).clip(min=1e-300)
    zetas = alpha[finite] / beta[finite]
    dropped = int(np.count_nonzero(~finite))
    if dropped:
        logger.debug(f"Dropped {dropped} infinite eigenvalues of the linearised pencil")
    if zetas.size == 0:
        return []

    groups: List[np.ndarray] = []
    for members in _cluster(zetas, cluster_tol):
        if members.size == 1:
            groups.append(zetas[members])
            continue
        mean = complex(np.mean(zetas[members]))
        sv = linalg.svdvals(static + mean * F.C)
        if sv[-1] < SINGULAR_TOL * sv[0]:
            groups.append(np.array([mean] * members.size))
        else:
            logger.debug(f"Split unsingular cluster | size={members.size} | mean={mean}")
            groups.extend(zetas[[i]] for i in members)

    scale = max(float(np.max(np.abs(zetas))), 1.0)
    out: List[CharacteristicValue] = []
    for group in groups:
        zeta = complex(group[0])
        m = int(group.size)
        null, _, _ = _null_basis(static + zeta * F.C, SINGULAR_TOL)
        g = max(1, min(null.shape[1], m))
        chain = 1 if g == m else (m if g == 1 else m - g + 1)

        if abs(zeta) < ZERO_ZETA * scale:
            out.append(CharacteristicValue(0j, 0j, 2 * m, 2 * chain, g))
            continue
        lam = complex(np.sqrt(zeta))
        out.append(CharacteristicValue(lam, zeta, m, chain, g))
        out.append(CharacteristicValue(-lam, zeta, m, chain, g))

    out.sort(key=lambda cv: (abs(cv.lam), -cv.lam.imag, cv.lam.real))
    logger.info(f"Characteristic values | count={len(out)} | dim={F.dim}")
    return out


def root_chains(F: FamilyMatrices, cv: CharacteristicValue, tol: float = CHAIN_TOL) -> List[RootChain]:
    """
    Jordan chains at cv.lam from F0 u_m + F1 u_{m-1} + F2 u_{m-2} = 0 with
    F0 = L(lambda0), F1 = 2 lambda0 C, F2 = C.

    Raises:
        ChainIncomplete: the chains found carry fewer vectors than the
            algebraic multiplicity.
    """
    lam0 = cv.lam
    f0, f1, f2 = _taylor(F, lam0)
    gate = tol * (_spectral_norm(f0) + abs(lam0) * _spectral_norm(F.C))

    null, left, _ = _null_basis(f0, SINGULAR_TOL)
    if null.shape[1] == 0:
        null = linalg.svd(f0)[2][-1:].conj().T
        left = linalg.svd(f0)[0][:, -1:]

    if null.shape[1] > 1 and left.shape[1] == null.shape[1]:
        # eigenvectors u0 with W* F1 u0 = 0 first: they carry the longest chains
        _, _, qh = linalg.svd(left.conj().T @ f1 @ null)
        null = null @ qh.conj().T[:, ::-1]

    target = cv.algebraic_multiplicity
    chains: List[RootChain] = []
    total = 0
    for column in range(null.shape[1]):
        u0 = null[:, column]
        u0 = u0 / linalg.norm(u0)
        vectors = [u0]
        while total + len(vectors) < target:
            prev1 = vectors[-1]
            prev2 = vectors[-2] if len(vectors) > 1 else np.zeros(F.dim, dtype=complex)
            rhs = -(f1 @ prev1 + f2 @ prev2)
            candidate = linalg.lstsq(f0, rhs, cond=LSTSQ_COND)[0]
            residual = float(linalg.norm(f0 @ candidate - rhs))
            size = max(1.0, max(float(linalg.norm(v)) for v in vectors + [candidate]))
            if residual > gate * size:
                logger.debug(
                    f"Chain stops | lambda={lam0} | length={len(vectors)} | residual={residual:.3e}"
                )
                break
            vectors.append(candidate)
        chains.append(RootChain(lambda0=lam0, vectors=vectors))
        total += len(vectors)
        if total >= target:
            break

    if total < target:
        raise ChainIncomplete(
            f"root vectors at lambda={lam0}: found {total}, expected {target}",
            found=total,
            expected=target,
        )
    chains.sort(key=lambda c: -c.length)
    return chains


def all_root_chains(F: FamilyMatrices, cvs: Optional[Sequence[CharacteristicValue]] = None) -> List[RootChain]:
    cvs = characteristic_values(F) if cvs is None else cvs
    out: List[RootChain] = []
    for cv in cvs:
        out.extend(root_chains(F, cv))
    return out


def corner_check(
    cvs: Sequence,
    epsilon: float,
    rho: float = 0.0,
    n: int = 2,
    mode: str = "self_adjoint",
) -> CornerReport:
    """
    Classify characteristic values against the corners |arg(lambda) -+ pi/2| < w.

    w = epsilon in self_adjoint mode and pi(2 rho + 1)/(2n) + epsilon in general
    mode. lambda = 0 is always an outlier.
    """
    if not cvs:
        raise ValueError("corner_check needs at least one characteristic value")
    if mode == "self_adjoint":
        width = epsilon
    elif mode == "general":
        width = math.pi * (2.0 * rho + 1.0) / (2.0 * n) + epsilon
    else:
        raise ConfigInvalid(f"unknown corner mode '{mode}'")

    inside = 0
    outliers = []
    for cv in cvs:
        lam = complex(cv.lam if isinstance(cv, CharacteristicValue) else cv)
        if abs(lam) > 0.0:
            angle = math.atan2(lam.imag, lam.real)
            deviation = min(abs(angle - math.pi / 2), abs(angle + math.pi / 2))
            if deviation < width:
                inside += 1
                continue
        outliers.append({"lambda": lam, "modulus": abs(lam)})

    report = CornerReport(
        inside_fraction=inside / len(cvs), outliers=outliers, half_width=width, mode=mode
    )
    logger.debug(f"Corner check | inside={report.inside_fraction:.4f} | outliers={len(outliers)}")
    return report


def ray_scan(
    F: FamilyMatrices,
    ray: Ray,
    moduli: Sequence[float],
    alpha: float = DEFAULT_SPLIT_ANGLE,
) -> RayScan:
    """
    sigma_min(L(lambda)) and sigma_min(L C^-1)/|lambda|^2 along a ray.

    The growth constants come from gamma^2 = min over the grid of the least
    generalized eigenvalue of (L*L, I + |lambda|^4 C*C): then
    ||L u|| >= p1 ||u|| + q1 |lambda|^2 ||C u|| with p1 = gamma cos(alpha),
    q1 = gamma sin(alpha).

    The bound fixes only gamma, not how it is shared between p1 and q1.
    This scan resolves that by a fixed split angle alpha (pi/8 unless given)
    rather than fitting the largest p1 and q1 separately; by Cauchy-Schwarz
    every alpha in (0, pi/2) yields a valid pair.
    """
    moduli = [float(m) for m in moduli]
    if not moduli or min(moduli) <= 0:
        raise ValueError("ray scan needs a non-empty grid of positive moduli")

    c_sv = linalg.svdvals(F.C)
    c_invertible = c_sv[-1] > 1e-12 * max(c_sv[0], 1e-300)
    c_inv = linalg.inv(F.C) if c_invertible else None
    if not c_invertible:
        logger.warning("C is singular; restricted sigma_min is not available")
    eye = np.eye(F.dim)
    cc = F.C.conj().T @ F.C

    rows = []
    gamma_sq = math.inf
    for modulus in moduli:
        lam = ray.point(modulus)
        matrix = F.at(lam)
        sv = linalg.svdvals(matrix)
        sigma_min = float(sv[-1])
        restricted = (
            float(linalg.svdvals(matrix @ c_inv)[-1]) / modulus**2 if c_inv is not None else math.nan
        )
        weight = eye + modulus**4 * cc
        lowest = float(linalg.eigh(matrix.conj().T @ matrix, weight, eigvals_only=True)[0])
        gamma_sq = min(gamma_sq, max(lowest, 0.0))
        rows.append(
            {
                "modulus": modulus,
                "sigma_min": sigma_min,
                "sigma_min_restricted": restricted,
                "resolvent_norm": math.inf if sigma_min == 0.0 else 1.0 / sigma_min,
            }
        )

    gamma = math.sqrt(gamma_sq)
    scan = RayScan(
        phi_gamma=ray.phi_gamma,
        rows=rows,
        p1=gamma * math.cos(alpha),
        q1=gamma * math.sin(alpha),
        k0=min(moduli),
        gamma=gamma,
        alpha=alpha,
    )
    logger.info(f"Ray scan | phi={ray.phi_gamma:.6f} | points={len(rows)} | p1={scan.p1:.6f} | q1={scan.q1:.6f}")
    return scan


def companion_vectors(chains: Sequence[RootChain], eigenvectors_only: bool = False) -> np.ndarray:
    """Columns (u_j, lambda0 u_j + u_{j-1}) of the first companion linearisation, normalised."""
    columns = []
    for chain in chains:
        vectors = chain.vectors[:1] if eigenvectors_only else chain.vectors
        previous = np.zeros_like(vectors[0])
        for u in vectors:
            col = np.concatenate([u, chain.lambda0 * u + previous])
            columns.append(col / linalg.norm(col))
            previous = u
    if not columns:
        return np.zeros((0, 0), dtype=complex)
    return np.column_stack(columns)


def double_completeness_check(
    F: FamilyMatrices,
    chains: Optional[Sequence[RootChain]] = None,
    eigenvectors_only: bool = False,
) -> Dict[str, object]:
    """Rank of the companion root vectors against 2N, at relative tolerance 1e-8."""
    chains = all_root_chains(F) if chains is None else chains
    stacked = companion_vectors(chains, eigenvectors_only=eigenvectors_only)
    if stacked.size == 0:
        rank = 0
    else:
        sv = linalg.svdvals(stacked)
        rank = int(np.count_nonzero(sv > RANK_TOL * sv[0]))
    result = {
        "rank": rank,
        "dim": 2 * F.dim,
        "vectors": int(stacked.shape[1]) if stacked.size else 0,
        "complete": rank == 2 * F.dim,
        "criterion": "companion-linearization span",
    }
    logger.info(f"Double completeness | {result}")
    return result


def _encode_block(block: np.ndarray, encoding: str) -> str:
    if encoding == "base64":
        data = np.ascontiguousarray(block, dtype="<c16").tobytes()
        return base64.b64encode(data).decode("ascii")
    buffer = io.StringIO()
    pairs = np.empty((block.shape[0], 2 * block.shape[1]))
    pairs[:, 0::2] = block.real
    pairs[:, 1::2] = block.imag
    np.savetxt(buffer, pairs, delimiter=",", fmt="%.17g")
    return buffer.getvalue()


def _decode_block(text: str, encoding: str, dim: int) -> np.ndarray:
    if encoding == "base64":
        raw = np.frombuffer(base64.b64decode(text), dtype="<c16")
        if raw.size != dim * dim:
            raise ConfigInvalid(f"base64 block holds {raw.size} entries, expected {dim * dim}")
        return raw.reshape(dim, dim).astype(complex)
    pairs = np.loadtxt(io.StringIO(text), delimiter=",", ndmin=2)
    if pairs.shape != (dim, 2 * dim):
        raise ConfigInvalid(f"CSV block has shape {pairs.shape}, expected ({dim}, {2 * dim})")
    return pairs[:, 0::2] + 1j * pairs[:, 1::2]


def family_to_dict(F: FamilyMatrices, encoding: str = "csv") -> dict:
    if encoding not in ("csv", "base64"):
        raise ConfigInvalid(f"unknown matrix encoding '{encoding}'")
    doc = {
        "dim": F.dim,
        "basis_tag": F.basis_tag,
        "encoding": encoding,
        "labels": [list(label) for label in F.labels],
    }
    for name in BLOCKS:
        doc[name] = _encode_block(getattr(F, name), encoding)
    return doc


def family_from_dict(doc: dict) -> FamilyMatrices:
    try:
        dim = int(doc["dim"])
        encoding = doc.get("encoding", "csv")
        blocks = {name: _decode_block(doc[name], encoding, dim) for name in BLOCKS}
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigInvalid(f"malformed family document: {e}") from e
    return FamilyMatrices(
        dim=dim,
        basis_tag=doc.get("basis_tag", "file"),
        labels=tuple(tuple(label) for label in doc.get("labels", [])),
        **blocks,
    )


def save_family(F: FamilyMatrices, path: str, encoding: str = "csv") -> None:
    try:
        with open(path, "wb") as f:
            f.write(orjson.dumps(family_to_dict(F, encoding), option=orjson.OPT_INDENT_2))
    except OSError as e:
        raise IoError(f"cannot write family file {path}: {e}") from e
    logger.info(f"Saved family | path={path} | dim={F.dim} | encoding={encoding}")


def load_family(path: str) -> FamilyMatrices:
    try:
        with open(path, "rb") as f:
            doc = orjson.loads(f.read())
    except OSError as e:
        raise IoError(f"cannot read family file {path}: {e}") from e
    except orjson.JSONDecodeError as e:
        raise ConfigInvalid(f"family file {path} is not valid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise ConfigInvalid(f"family file {path} must hold a JSON object")
    return family_from_dict(doc)
