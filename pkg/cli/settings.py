"""
settings.py - Run configuration for the zaremba command line.

Loads JSON config files, merges command-line overrides, validates them with
pydantic and derives the config hash recorded in every artifact.
"""

import hashlib
import os
from typing import Any, Dict, List, Literal, Optional

import orjson
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from utils.error_handler import ConfigInvalid, IoError
from utils.logging_manager import get_logger

logger = get_logger("zaremba.cli")

# .env files are honoured in development only
try:
    from dotenv import load_dotenv  # type: ignore

    if os.environ.get("ZS_DEV_MODE"):
        load_dotenv()
except ImportError:
    pass

COMMANDS = ("check-ellipticity", "spectrum", "expand", "pencil", "verify")
SUITES = ("orthogonality", "rayleigh", "completeness", "corners", "rayscan", "decay")
MODE_ALIASES = {"paper": "paper_eq_unit", "derived": "derived_from_B"}
UNHASHED = ("output", "report", "remainder_output", "save_family", "threads")

# default config file consulted when --config is not given
SETTINGS_PATH = os.environ.get("ZS_CONFIG", "zaremba.json")


class RunConfig(BaseModel):
    """Validated parameters of one CLI run."""

    model_config = ConfigDict(extra="forbid")

    command: Literal["check-ellipticity", "spectrum", "expand", "pencil", "verify"]

    # disk model
    d: float = Field(0.0, ge=0.0)
    rho: float = Field(0.0, ge=0.0, le=0.5)
    vartheta: float = Field(1.0, gt=0.0)
    mode: Literal["paper", "derived"] = "paper"
    form: Literal["scaled", "normal"] = "scaled"

    # enumeration
    kmin: int = 0
    kmax: int = Field(2, ge=0)
    count: int = Field(5, ge=1)
    quad_order: int = Field(200, ge=8)

    # ellipticity
    coefficients: Optional[Dict[str, Any]] = None
    ray: Optional[float] = None
    scan_rays: Optional[int] = Field(None, ge=1)
    n: int = Field(2, ge=1)
    delta_s_norm: float = Field(0.0, ge=0.0)
    boundary_class: Literal["Lipschitz", "C2"] = "Lipschitz"
    ae_threshold: float = Field(0.01, gt=0.0, le=1.0)

    # expansion
    input: Optional[str] = None
    preset: Optional[Literal["one", "re_z"]] = None
    N: int = Field(20, ge=1)

    # pencil
    family: Optional[str] = None
    action: Optional[
        Literal["char-values", "solve", "ray-scan", "corners", "chains", "double-completeness"]
    ] = None
    lambda_: Optional[str] = Field(None, alias="lambda")
    rhs: Optional[str] = None
    phi: float = 0.0
    moduli: str = "1:50:50"
    eps: float = Field(1e-6, gt=0.0)
    corner_mode: Literal["self_adjoint", "general"] = "self_adjoint"
    perturb_seed: Optional[int] = None
    ds_norm: float = Field(0.0, ge=0.0)
    dc_norm: float = Field(0.0, ge=0.0)
    save_family: Optional[str] = None
    encoding: Literal["csv", "base64"] = "csv"

    # verify
    suite: Optional[str] = None

    # run plumbing
    seed: int = 0
    threads: int = Field(1, ge=1)
    output: Optional[str] = None
    report: Optional[str] = None
    remainder_output: Optional[str] = None
    tolerances: Dict[str, float] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_command_inputs(self) -> "RunConfig":
        if self.kmin > self.kmax:
            raise ValueError("kmin must not exceed kmax")
        if self.command == "expand" and (self.input is None) == (self.preset is None):
            raise ValueError("expand needs exactly one of input or preset")
        if self.command == "pencil" and self.action is None:
            raise ValueError("pencil needs an action")
        if self.command == "pencil" and self.action == "solve" and self.lambda_ is None:
            raise ValueError("pencil solve needs lambda")
        if self.command == "verify" and self.suite is None:
            raise ValueError("verify needs a suite")
        return self

    @property
    def boundary_coeff_mode(self) -> str:
        return MODE_ALIASES[self.mode]

    def tolerance(self, name: str, default: float) -> float:
        return float(self.tolerances.get(name, default))


def load_settings(path: Optional[str] = None) -> Dict[str, Any]:
    """
    Loads a JSON config file, SETTINGS_PATH by default.

    Returns:
        dict: the parsed object.

    Raises:
        IoError: unreadable file.
        ConfigInvalid: empty file, invalid JSON or a non-object document.
    """
    path = path or SETTINGS_PATH
    try:
        with open(path, "rb") as f:
            raw = f.read()
    except OSError as e:
        raise IoError(f"cannot read config {path}: {e}") from e

    if not raw.strip():
        raise ConfigInvalid(f"config file {path} is empty")
    try:
        data = orjson.loads(raw)
    except orjson.JSONDecodeError as e:
        raise ConfigInvalid(f"config file {path} is not valid JSON: {e}") from e
    if not isinstance(data, dict) or not data:
        raise ConfigInvalid(f"config file {path} must hold a non-empty JSON object")

    logger.info(f"Config loaded | path={path} | keys={sorted(data)}")
    return data


def save_settings(config: RunConfig, path: Optional[str] = None) -> bool:
    """
    Saves a validated config as JSON, SETTINGS_PATH by default.

    Returns:
        bool: True if successful, False otherwise.
    """
    path = path or SETTINGS_PATH
    try:
        with open(path, "wb") as f:
            f.write(orjson.dumps(canonical(config), option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS))
        logger.info(f"Config saved | path={path}")
        return True
    except OSError as e:
        logger.error(f"Failed to save config: {e}")
        return False


def resolve_threads(cli_threads: int) -> int:
    """ZS_THREADS overrides the --threads flag."""
    env = os.environ.get("ZS_THREADS")
    if env:
        try:
            value = int(env)
        except ValueError as e:
            raise ConfigInvalid(f"ZS_THREADS must be an integer, got '{env}'") from e
        if value < 1:
            raise ConfigInvalid("ZS_THREADS must be at least 1")
        return value
    return cli_threads


def build_config(values: Dict[str, Any], config_path: Optional[str] = None) -> RunConfig:
    """Merge a config file (--config, else SETTINGS_PATH when present) with explicit overrides and validate."""
    merged: Dict[str, Any] = {}
    if config_path is None and os.path.exists(SETTINGS_PATH):
        config_path = SETTINGS_PATH
    if config_path is not None:
        merged.update(load_settings(config_path))
    merged.update({k: v for k, v in values.items() if v is not None})

    try:
        config = RunConfig.model_validate(merged)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or 'config'}: {err['msg']}" for err in e.errors()
        )
        raise ConfigInvalid(f"invalid configuration: {problems}") from e

    return config.model_copy(update={"threads": resolve_threads(config.threads)})


def canonical(config: RunConfig) -> Dict[str, Any]:
    return config.model_dump(mode="json", by_alias=True)


def config_hash(config: RunConfig) -> str:
    """SHA-256 of the canonical JSON form of the validated config.

    Output destinations and the thread count do not change results and are
    left out.
    """
    data = {k: v for k, v in canonical(config).items() if k not in UNHASHED}
    payload = orjson.dumps(data, option=orjson.OPT_SORT_KEYS)
    return hashlib.sha256(payload).hexdigest()


def parse_complex(text: str) -> complex:
    """Parse 'a+bi', 'a-bj', 'bi' or 'a'."""
    cleaned = text.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(cleaned)
    except ValueError as e:
        raise ConfigInvalid(f"cannot parse complex number '{text}'") from e


def parse_moduli(text: str) -> List[float]:
    """'lo:hi:n' -> n equally spaced moduli."""
    parts = text.split(":")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except (IndexError, ValueError) as e:
        raise ConfigInvalid(f"moduli must look like lo:hi:n, got '{text}'") from e
    if lo <= 0 or hi < lo or n < 1:
        raise ConfigInvalid(f"moduli need 0 < lo <= hi and n >= 1, got '{text}'")
    if n == 1:
        return [lo]
    step = (hi - lo) / (n - 1)
    return [lo + i * step for i in range(n)]
