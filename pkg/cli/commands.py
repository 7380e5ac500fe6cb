"""
commands.py - Subcommand handlers and the run() orchestrator.

Each handler fills the Report and returns the CSV tables to emit with their
destinations (None means stdout). Tables are written only after the handler
returns, so a failing run leaves no partial CSV behind.
"""

import math
import time
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy.interpolate import LinearNDInterpolator, NearestNDInterpolator

from cli.report import CsvTable, Report
from cli.settings import RunConfig, canonical, config_hash, parse_complex, parse_moduli
from cli.verify import model_from_config, verify_suite
from spectral.coefficients import coefficients_from_spec, hermitian_sqrt, polar_decompose
from spectral.disk_spectrum import expand_function, gauss_legendre, spectrum_table
from spectral.ellipticity import (
    Budget,
    Ray,
    admissible_ray_window,
    check_ray,
    embedding_exponent,
    invertibility_budget,
    lemma_lower_bound,
    optimal_ray,
    scan_rays,
)
from spectral.family import (
    FamilyMatrices,
    all_root_chains,
    assemble_disk_family,
    characteristic_values,
    corner_check,
    double_completeness_check,
    load_family,
    random_perturbation,
    ray_scan,
    save_family,
    solve,
)
from utils.error_handler import (
    ConfigInvalid,
    IoError,
    OscillationTooLarge,
    ZarembaError,
    exit_code_for,
    handle_error,
)
from utils.logging_manager import get_logger, handle_exception, log_context, logger_manager

logger = get_logger("zaremba.cli")

Output = Tuple[CsvTable, Optional[str]]


def _new_table(config: RunConfig, columns) -> CsvTable:
    return CsvTable(columns, config_hash(config), config.seed)


def cmd_check_ellipticity(config: RunConfig, report: Report) -> List[Output]:
    if config.coefficients is None:
        raise ConfigInvalid("check-ellipticity needs a 'coefficients' entry in the config")
    coeffs = coefficients_from_spec(config.coefficients, seed=config.seed)
    coeffs.audit()

    factor_error = max(
        hermitian_sqrt(coeffs.A(x)).relative_error() for x in coeffs.sample_set
    )
    tol = config.tolerance("factorization", 1e-12)
    report.add_check("factorization", factor_error, tol, factor_error < tol)

    decomp = polar_decompose(coeffs.a02_samples())
    if config.ray is None:
        ray = optimal_ray(decomp)
        source = "optimal"
    else:
        ray = Ray(config.ray)
        source = "given"
    audit = check_ray(decomp, ray, config.ae_threshold)

    report.add_check("ok_strong", float(audit.ok_strong), 1.0, audit.ok_strong)
    report.add_check("ok_ae", audit.undefined_fraction, config.ae_threshold, audit.ok_ae)
    if source == "optimal":
        bound = math.cos(decomp.Phi / 2.0) - 1e-12
        report.add_check("optimal_ray_bound", audit.theta1, bound, audit.theta1 >= bound)

    verdict = invertibility_budget(
        Budget(delta_s_norm=config.delta_s_norm, rho=config.rho, n=config.n, Phi=decomp.Phi)
    )
    report.add_check("budget_inv", verdict.inv_value, 1.0, verdict.ok_inv)
    report.add_check("budget_complete", verdict.complete_value, 1.0, verdict.ok_complete, gated=False)

    try:
        window = list(admissible_ray_window(decomp, config.rho, config.n))
    except OscillationTooLarge as e:
        logger.warning(f"No admissible ray window: {e}")
        window = None

    report.results.update(
        {
            "coefficients": coeffs.label,
            "samples": decomp.size,
            "theta0": decomp.theta0,
            "Phi1": decomp.Phi1,
            "Phi2": decomp.Phi2,
            "Phi": decomp.Phi,
            "ray_source": source,
            "ray": audit.as_dict(),
            "lower_bound": lemma_lower_bound(audit.eta, config.delta_s_norm),
            "budget": verdict.as_dict(),
            "ray_window": window,
            "embedding_exponent": str(embedding_exponent(config.rho, config.boundary_class)),
        }
    )

    if config.scan_rays is None:
        return []
    table = _new_table(config, ["phi_gamma", "theta1", "eta"])
    for row in scan_rays(decomp, config.scan_rays):
        table.add(*row)
    return [(table, config.output)]


def cmd_spectrum(config: RunConfig, report: Report) -> List[Output]:
    model = model_from_config(config)
    table_data = spectrum_table(
        model,
        range(config.kmin, config.kmax + 1),
        config.count,
        threads=config.threads,
        quad=gauss_legendre(config.quad_order),
    )
    table = _new_table(config, ["k", "nu", "mu", "lambda_sq", "boundary_residual", "norm_hd"])
    worst = 0.0
    for k in sorted(table_data):
        for pair in table_data[k]:
            table.add(pair.k, pair.nu, pair.mu, pair.lambda_sq, pair.residual, pair.norm_hd)
            worst = max(worst, abs(pair.residual))

    tol = config.tolerance("boundary_residual", 1e-11)
    report.add_check("boundary_residual", worst, tol, worst < tol)
    report.results.update({"model": model.as_dict(), "rows": len(table.rows)})
    return [(table, config.output)]


def _load_scattered(path: str) -> Callable:
    """Interpolant of samples (x1, x2, re, im); nearest value outside the hull."""
    try:
        data = np.loadtxt(path, delimiter=",", comments="#", skiprows=1, ndmin=2)
    except OSError as e:
        raise IoError(f"cannot read input function {path}: {e}") from e
    except ValueError as e:
        raise ConfigInvalid(f"input function {path} must have columns x1,x2,re,im: {e}") from e
    if data.shape[0] < 3 or data.shape[1] != 4:
        raise ConfigInvalid(f"input function {path} needs at least 3 rows of x1,x2,re,im")

    points = data[:, :2]
    values = data[:, 2] + 1j * data[:, 3]
    linear = LinearNDInterpolator(points, values)
    nearest = NearestNDInterpolator(points, values)

    def f(x1, x2):
        out = linear(x1, x2)
        missing = np.isnan(out)
        if np.any(missing):
            out[missing] = nearest(x1[missing], x2[missing])
        return out

    return f


PRESET_FUNCTIONS: Dict[str, Callable] = {
    "one": lambda x1, x2: np.ones_like(x1),
    "re_z": lambda x1, x2: x1,
}


def cmd_expand(config: RunConfig, report: Report) -> List[Output]:
    model = model_from_config(config)
    f = PRESET_FUNCTIONS[config.preset] if config.preset else _load_scattered(config.input)
    expansion = expand_function(model, f, config.kmax, config.N, gauss_legendre(config.quad_order))

    coefficients = _new_table(config, ["k", "nu", "re", "im"])
    for (k, nu), c in sorted(expansion.coefficients.items()):
        coefficients.add_complex((k, nu), c)

    curve = _new_table(config, ["N", "remainder"])
    for n_index, value in enumerate(expansion.remainder_by_n, start=1):
        curve.add(n_index, value)

    tol = config.tolerance("expand_remainder", 1e-2)
    report.add_check("remainder", expansion.remainder, tol, expansion.remainder < tol, gated=False)
    report.results.update(
        {
            "source": config.preset or config.input,
            "K": expansion.K,
            "N": expansion.N,
            "norm_f": expansion.norm_f,
            "remainder": expansion.remainder,
        }
    )
    outputs = [(coefficients, config.output)]
    if config.remainder_output is not None:
        outputs.append((curve, config.remainder_output))
    else:
        report.results["remainder_by_n"] = expansion.remainder_by_n
    return outputs


def _family(config: RunConfig) -> FamilyMatrices:
    if config.family is not None:
        F = load_family(config.family)
    else:
        F = assemble_disk_family(
            model_from_config(config),
            config.kmax,
            config.count,
            quad=gauss_legendre(config.quad_order),
            threads=config.threads,
        )
    if config.perturb_seed is not None and (config.ds_norm > 0 or config.dc_norm > 0):
        F = F.with_perturbations(
            Ds=F.Ds + random_perturbation(F.dim, config.ds_norm, config.perturb_seed, hermitian=True),
            Dc=F.Dc + random_perturbation(F.dim, config.dc_norm, config.perturb_seed + 1),
        )
    if config.save_family is not None:
        save_family(F, config.save_family, config.encoding)
    return F


def _load_rhs(config: RunConfig, dim: int) -> np.ndarray:
    if config.rhs is None:
        rhs = np.zeros(dim, dtype=complex)
        rhs[0] = 1.0
        return rhs
    try:
        data = np.loadtxt(config.rhs, delimiter=",", comments="#", ndmin=2)
    except OSError as e:
        raise IoError(f"cannot read right-hand side {config.rhs}: {e}") from e
    except ValueError as e:
        raise ConfigInvalid(f"right-hand side {config.rhs} must hold re,im rows: {e}") from e
    if data.shape != (dim, 2):
        raise ConfigInvalid(f"right-hand side has shape {data.shape}, expected ({dim}, 2)")
    return data[:, 0] + 1j * data[:, 1]


def cmd_pencil(config: RunConfig, report: Report) -> List[Output]:
    F = _family(config)
    report.results.update({"dim": F.dim, "basis_tag": F.basis_tag})
    if config.save_family is not None:
        report.artifacts.append(config.save_family)
    action = config.action

    if action == "char-values":
        table = _new_table(
            config,
            ["lambda_re", "lambda_im", "zeta_re", "zeta_im", "algebraic", "geometric", "chain_length"],
        )
        cvs = characteristic_values(F)
        for cv in cvs:
            table.add(
                cv.lam.real, cv.lam.imag, cv.zeta.real, cv.zeta.imag,
                cv.algebraic_multiplicity, cv.geometric_multiplicity, cv.chain_length,
            )
        report.results["count"] = len(cvs)
        return [(table, config.output)]

    if action == "solve":
        lam = parse_complex(config.lambda_)
        rhs = _load_rhs(config, F.dim)
        u = solve(F, lam, rhs)
        backward = float(np.linalg.norm(F.at(lam) @ u - rhs) / max(np.linalg.norm(rhs), 1e-300))
        tol = config.tolerance("solve_backward", 1e-12)
        report.add_check("backward_error", backward, tol, backward < tol)
        table = _new_table(config, ["index", "re", "im"])
        for index, value in enumerate(u):
            table.add_complex((index,), complex(value))
        report.results["lambda"] = lam
        return [(table, config.output)]

    if action == "ray-scan":
        scan = ray_scan(F, Ray(config.phi), parse_moduli(config.moduli))
        table = _new_table(config, ["modulus", "sigma_min", "sigma_min_restricted", "resolvent_norm"])
        for row in scan.rows:
            table.add(row["modulus"], row["sigma_min"], row["sigma_min_restricted"], row["resolvent_norm"])
        report.results.update(
            {"phi_gamma": scan.phi_gamma, "p1": scan.p1, "q1": scan.q1, "k0": scan.k0, "gamma": scan.gamma}
        )
        report.add_check("p1_positive", scan.p1, 0.0, scan.p1_positive, gated=False)
        return [(table, config.output)]

    if action == "corners":
        corner = corner_check(characteristic_values(F), config.eps, config.rho, config.n, config.corner_mode)
        table = _new_table(config, ["lambda_re", "lambda_im", "modulus"])
        for outlier in corner.outliers:
            table.add_complex((), outlier["lambda"], (outlier["modulus"],))
        report.results.update(
            {
                "inside_fraction": corner.inside_fraction,
                "outliers": len(corner.outliers),
                "half_width": corner.half_width,
                "mode": corner.mode,
            }
        )
        return [(table, config.output)]

    if action == "chains":
        chains = all_root_chains(F)
        table = _new_table(config, ["lambda_re", "lambda_im", "length", "max_relation_residual"])
        worst = 0.0
        for chain in chains:
            residual = max(chain.relation_residuals(F))
            worst = max(worst, residual)
            table.add_complex((), chain.lambda0, (chain.length, residual))
        tol = config.tolerance("chain_relation", 1e-8)
        report.add_check("chain_relation", worst, tol, worst < tol)
        report.results["chains"] = len(chains)
        return [(table, config.output)]

    # double-completeness
    result = double_completeness_check(F)
    report.add_check("double_completeness_rank", result["rank"], result["dim"], result["complete"])
    report.results.update(result)
    return []


def cmd_verify(config: RunConfig, report: Report) -> List[Output]:
    verify_suite(config.suite, config, report)
    table = _new_table(config, ["name", "value", "tolerance", "passed", "gated"])
    for check in report.checks:
        table.add(check.name, check.value, check.tolerance, check.passed, check.gated)
    return [(table, config.output)]


HANDLERS: Dict[str, Callable[[RunConfig, Report], List[Output]]] = {
    "check-ellipticity": cmd_check_ellipticity,
    "spectrum": cmd_spectrum,
    "expand": cmd_expand,
    "pencil": cmd_pencil,
    "verify": cmd_verify,
}


@handle_exception
def run(config: RunConfig) -> Report:
    """
    Dispatch one validated config and write its tables.

    Library errors are recorded on the report (flagged partial) instead of
    propagating; no table is written for a failed run.
    """
    report = Report(
        command=config.command,
        inputs=canonical(config),
        config_hash=config_hash(config),
        seed=config.seed,
    )
    start = time.perf_counter()
    try:
        with log_context(config.command):
            outputs = HANDLERS[config.command](config, report)
            for table, path in outputs:
                table.write(path)
                if path is not None:
                    report.artifacts.append(path)
    except ZarembaError as e:
        handle_error(e, context=[config.command])
        report.add_error(e, exit_code_for(e))
    except (ValueError, np.linalg.LinAlgError) as e:
        handle_error(e, context=[config.command])
        report.add_error(e, exit_code_for(e))

    logger_manager.log_performance(
        f"command:{config.command}",
        time.perf_counter() - start,
        extra={"passed": report.passed, "config_hash": report.config_hash[:12]},
    )
    return report
