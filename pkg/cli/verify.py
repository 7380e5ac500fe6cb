"""
verify.py - Property suites run by `zaremba verify --suite NAME`.

Each suite records its measured values against tolerances on the Report.
Tolerances can be overridden through RunConfig.tolerances.
"""

import math
from typing import Callable, Dict, List, Optional

import numpy as np

from cli.report import Report
from cli.settings import RunConfig
from spectral.disk_spectrum import (
    BOUNDARY_MODES,
    DiskModel,
    boundary_residual,
    decay_exponent_fit,
    expand_function,
    gauss_legendre,
    hplus_inner,
    ode_residual,
    radial_gram,
    spectrum_table,
)
from spectral.ellipticity import Ray
from spectral.family import (
    FamilyMatrices,
    assemble_disk_family,
    characteristic_values,
    corner_check,
    random_perturbation,
    ray_scan,
)
from utils.error_handler import UnknownSuite
from utils.logging_manager import get_logger

logger = get_logger("zaremba.cli")

ODE_NODES = np.linspace(0.05, 0.999, 200)
DECAY_COUNT = 300
PERTURBED_DC_NORM = 0.3
PERTURBED_EPS = 0.5
EXTRA_PER_K = 10


def model_from_config(config: RunConfig, mode: Optional[str] = None) -> DiskModel:
    return DiskModel(
        vartheta=config.vartheta,
        d=config.d,
        rho=config.rho,
        boundary_coeff_mode=mode or config.boundary_coeff_mode,
        boundary_form=config.form,
    )


def _table(config: RunConfig, model: DiskModel):
    return spectrum_table(
        model,
        range(config.kmin, config.kmax + 1),
        config.count,
        threads=config.threads,
        quad=gauss_legendre(config.quad_order),
    )


def suite_orthogonality(config: RunConfig, report: Report) -> None:
    """Radial Gram matrices, boundary residuals and ODE residuals."""
    model = model_from_config(config)
    table = _table(config, model)

    gram_off = 0.0
    root_residual = 0.0
    ode = 0.0
    for pairs in table.values():
        gram = radial_gram(pairs, gauss_legendre(config.quad_order))
        off = gram - np.diag(np.diag(gram))
        gram_off = max(gram_off, float(np.max(np.abs(off))) if off.size else 0.0)
        for pair in pairs:
            root_residual = max(root_residual, abs(boundary_residual(model, pair.k, pair.mu)))
            ode = max(ode, ode_residual(model, pair, ODE_NODES))

    for name, value, default in (
        ("gram_offdiagonal", gram_off, 1e-8),
        ("boundary_residual", root_residual, 1e-11),
        ("ode_residual", ode, 1e-7),
    ):
        tol = config.tolerance(name, default)
        report.add_check(name, value, tol, value < tol)


def suite_rayleigh(config: RunConfig, report: Report) -> None:
    """(u, u)_+ = mu^2 h(u, u) in both boundary coefficient modes, for the configured form."""
    tol = config.tolerance("rayleigh", 1e-6)
    quad = gauss_legendre(config.quad_order)
    for mode in BOUNDARY_MODES:
        model = model_from_config(config, mode=mode)
        worst = 0.0
        for pairs in _table(config, model).values():
            for pair in pairs:
                # eigenfunctions are h-normalised, so h(u, u) = 1
                plus = hplus_inner(model, pair, pair, quad).real
                worst = max(worst, abs(plus - pair.mu**2) / pair.mu**2)
        report.add_check(f"rayleigh[{mode}]", worst, tol, worst < tol)


def _expansion_targets() -> Dict[str, Callable]:
    return {
        "one": lambda x1, x2: np.ones_like(x1),
        "re_z": lambda x1, x2: x1,
    }


def suite_completeness(config: RunConfig, report: Report) -> None:
    """Remainders of f = 1 and f = Re z decrease strictly and end below tolerance."""
    model = model_from_config(config)
    tol = config.tolerance("completeness", 1e-2)
    quad = gauss_legendre(config.quad_order)
    curves = {}
    for name, f in _expansion_targets().items():
        expansion = expand_function(model, f, max(config.kmax, 1), config.N, quad)
        curve = expansion.remainder_by_n
        curves[name] = curve
        steps = np.diff(curve)
        worst_step = float(np.max(steps)) if steps.size else -1.0
        report.add_check(f"remainder_decreasing[{name}]", worst_step, 0.0, worst_step < 0.0)
        report.add_check(f"remainder[{name}]", expansion.remainder, tol, expansion.remainder < tol)
    report.results["remainder_curves"] = curves


def _recovery_error(F: FamilyMatrices, cvs) -> float:
    """Relative mismatch of the upper-half characteristic values against i mu."""
    expected = np.sort(1.0 / np.sqrt(np.real(np.diag(F.C))))
    found = np.sort([cv.lam.imag for cv in cvs if cv.lam.imag > 0])
    if found.size != expected.size:
        return math.inf
    return float(np.max(np.abs(found - expected) / expected))


def _restrict(F: FamilyMatrices, per_k: int) -> FamilyMatrices:
    """Sub-family on the basis vectors with nu <= per_k."""
    keep = [i for i, (_, nu) in enumerate(F.labels) if nu <= per_k]
    index = np.ix_(keep, keep)
    return FamilyMatrices(
        dim=len(keep),
        L0=F.L0[index],
        Ds=F.Ds[index],
        Dc=F.Dc[index],
        C=F.C[index],
        basis_tag=f"{F.basis_tag}[nu<={per_k}]",
        labels=tuple(F.labels[i] for i in keep),
    )


def suite_corners(config: RunConfig, report: Report) -> None:
    """
    Unperturbed: every characteristic value in the eps-corners and equal
    to +-i mu. Perturbed by a seeded Dc: outliers of the 0.5-corners are
    counted for N and N + 10 per wavenumber under the same perturbation.
    """
    model = model_from_config(config)
    quad = gauss_legendre(config.quad_order)
    F = assemble_disk_family(model, config.kmax, config.count, quad=quad, threads=config.threads)
    cvs = characteristic_values(F)

    unperturbed = corner_check(cvs, config.eps, config.rho, config.n)
    report.add_check("inside_fraction", unperturbed.inside_fraction, 1.0, unperturbed.inside_fraction == 1.0)

    recovery = _recovery_error(F, cvs)
    tol = config.tolerance("char_value_recovery", 1e-9)
    report.add_check("char_value_recovery", recovery, tol, recovery < tol)

    dc_norm = config.dc_norm or PERTURBED_DC_NORM
    large = assemble_disk_family(
        model, config.kmax, config.count + EXTRA_PER_K, quad=quad, threads=config.threads
    )
    seed = config.seed if config.perturb_seed is None else config.perturb_seed
    large = large.with_perturbations(Dc=random_perturbation(large.dim, dc_norm, seed))
    small = _restrict(large, config.count)

    counts: List[int] = []
    for family in (small, large):
        corner = corner_check(characteristic_values(family), PERTURBED_EPS, config.rho, config.n)
        counts.append(len(corner.outliers))
    report.results["perturbed_outliers"] = {"N": counts[0], "N+10": counts[1], "dc_norm": dc_norm}
    report.add_check("outlier_count_stable", abs(counts[1] - counts[0]), 0.0, counts[0] == counts[1])


def suite_rayscan(config: RunConfig, report: Report) -> None:
    """Growth constants on arg(lambda) = 0 and sigma_min dips on arg(lambda) = pi/2."""
    model = model_from_config(config)
    quad = gauss_legendre(config.quad_order)
    F = assemble_disk_family(model, config.kmax, config.count, quad=quad, threads=config.threads)
    grid = list(np.linspace(1.0, 50.0, 50))

    scan = ray_scan(F, Ray(0.0), grid)
    report.add_check("p1", scan.p1, 0.9, scan.p1 >= 0.9)
    report.add_check("q1", scan.q1, 0.0, scan.q1 > 0.0)
    report.results["growth"] = {"p1": scan.p1, "q1": scan.q1, "gamma": scan.gamma, "k0": scan.k0}

    mus = sorted({1.0 / math.sqrt(float(c.real)) for c in np.diag(F.C)})
    mus = [mu for mu in mus if 1.0 <= mu <= 50.0]
    if not mus:
        logger.warning("No eigenvalue in [1, 50]; dip check skipped")
        return
    dip_tol = config.tolerance("sigma_dip", 1e-6)
    at_roots = ray_scan(F, Ray(math.pi / 2), mus)
    worst_dip = max(row["sigma_min"] for row in at_roots.rows)
    report.add_check("sigma_min_at_mu", worst_dip, dip_tol, worst_dip < dip_tol)

    midpoints = [(a + b) / 2.0 for a, b in zip(mus, mus[1:]) if b - a > 1e-3 * b]
    if midpoints:
        between = ray_scan(F, Ray(math.pi / 2), midpoints)
        lowest = min(row["sigma_min"] for row in between.rows)
        report.add_check("sigma_min_between", lowest, dip_tol, lowest > dip_tol)


def suite_decay(config: RunConfig, report: Report) -> None:
    """Log-log decay slope of the family eigenvalues; warns only."""
    model = model_from_config(config)
    fit = decay_exponent_fit(model, max(config.count, DECAY_COUNT))
    tol = config.tolerance("decay_slope", 0.2)
    report.add_check("decay_slope", fit.deviation, tol, fit.deviation <= tol, gated=False)
    report.results["decay"] = {
        "slope": fit.slope,
        "expected": fit.expected,
        "intercept": fit.intercept,
        "fit_range": list(fit.fit_range),
        "mu_max": fit.mu_max,
    }


SUITES: Dict[str, Callable[[RunConfig, Report], None]] = {
    "orthogonality": suite_orthogonality,
    "rayleigh": suite_rayleigh,
    "completeness": suite_completeness,
    "corners": suite_corners,
    "rayscan": suite_rayscan,
    "decay": suite_decay,
}


def verify_suite(name: str, config: RunConfig, report: Report) -> Report:
    """
    Run one property suite.

    Raises:
        UnknownSuite: name is not a registered suite.
    """
    suite = SUITES.get(name)
    if suite is None:
        raise UnknownSuite(f"unknown suite '{name}'; choose from {', '.join(SUITES)}", suite=name)
    logger.info(f"Running suite | {name}")
    suite(config, report)
    return report
