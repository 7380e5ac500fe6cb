import os

import orjson
import pytest  # type: ignore

import cli.settings as settings_mod
from cli.settings import (
    RunConfig,
    build_config,
    config_hash,
    load_settings,
    parse_complex,
    parse_moduli,
    resolve_threads,
    save_settings,
)
from utils.error_handler import ConfigInvalid, IoError


def test_settings_save_and_load(tmp_path, monkeypatch):
    # Isolate test: point SETTINGS_PATH at a scratch file
    test_path = tmp_path / "settings.json"
    monkeypatch.setattr(settings_mod, "SETTINGS_PATH", str(test_path))

    config = RunConfig(command="spectrum", d=0.5, kmax=3)
    assert save_settings(config) is True
    assert os.path.exists(test_path)

    loaded = load_settings()
    assert loaded["d"] == 0.5
    assert RunConfig.model_validate(loaded) == config


def test_default_settings_file_is_consulted(tmp_path, monkeypatch):
    path = tmp_path / "defaults.json"
    path.write_bytes(orjson.dumps({"rho": 0.25, "count": 3}))
    monkeypatch.setattr(settings_mod, "SETTINGS_PATH", str(path))

    config = build_config({"command": "spectrum", "count": 7})
    assert config.rho == 0.25
    assert config.count == 7


def test_load_settings_errors(tmp_path):
    with pytest.raises(IoError):
        load_settings(str(tmp_path / "missing.json"))

    empty = tmp_path / "empty.json"
    empty.write_text("")
    with pytest.raises(ConfigInvalid):
        load_settings(str(empty))

    broken = tmp_path / "broken.json"
    broken.write_text("{d: 1")
    with pytest.raises(ConfigInvalid):
        load_settings(str(broken))

    listing = tmp_path / "list.json"
    listing.write_text("[1, 2]")
    with pytest.raises(ConfigInvalid):
        load_settings(str(listing))


def test_save_settings_reports_failure(tmp_path):
    config = RunConfig(command="spectrum")
    assert save_settings(config, str(tmp_path / "no-such-dir" / "x.json")) is False


def test_validation_errors_become_config_invalid():
    with pytest.raises(ConfigInvalid, match="rho"):
        build_config({"command": "spectrum", "rho": 0.7})
    with pytest.raises(ConfigInvalid):
        build_config({"command": "spectrum", "kmin": 3, "kmax": 1})
    with pytest.raises(ConfigInvalid):
        build_config({"command": "spectrum", "colour": "red"})
    with pytest.raises(ConfigInvalid):
        build_config({"command": "expand"})
    with pytest.raises(ConfigInvalid):
        build_config({"command": "pencil", "action": "solve"})
    with pytest.raises(ConfigInvalid):
        build_config({"command": "verify"})


def test_overrides_take_precedence_over_file(tmp_path):
    path = tmp_path / "run.json"
    path.write_bytes(orjson.dumps({"command": "spectrum", "d": 0.25, "kmax": 4}))
    config = build_config({"command": "spectrum", "d": 0.5, "kmax": None}, str(path))
    assert config.d == 0.5
    assert config.kmax == 4


def test_lambda_alias():
    config = build_config({"command": "pencil", "action": "solve", "lambda": "1+2i"})
    assert config.lambda_ == "1+2i"
    assert parse_complex(config.lambda_) == 1 + 2j


def test_mode_alias():
    assert RunConfig(command="spectrum").boundary_coeff_mode == "paper_eq_unit"
    assert RunConfig(command="spectrum", mode="derived").boundary_coeff_mode == "derived_from_B"
    assert RunConfig(command="spectrum").form == "scaled"


def test_config_hash():
    a = RunConfig(command="spectrum", d=0.5)
    b = RunConfig(command="spectrum", d=0.5, output="table.csv", threads=4)
    c = RunConfig(command="spectrum", d=0.25)
    assert config_hash(a) == config_hash(b)
    assert config_hash(a) != config_hash(c)
    assert len(config_hash(a)) == 64


def test_threads_environment_override(monkeypatch):
    assert resolve_threads(3) == 3
    monkeypatch.setenv("ZS_THREADS", "6")
    assert resolve_threads(3) == 6
    assert build_config({"command": "spectrum", "threads": 2}).threads == 6
    monkeypatch.setenv("ZS_THREADS", "many")
    with pytest.raises(ConfigInvalid):
        resolve_threads(1)
    monkeypatch.setenv("ZS_THREADS", "0")
    with pytest.raises(ConfigInvalid):
        resolve_threads(1)


def test_tolerance_lookup():
    config = RunConfig(command="spectrum", tolerances={"rayleigh": 1e-3})
    assert config.tolerance("rayleigh", 1e-6) == 1e-3
    assert config.tolerance("boundary_residual", 1e-11) == 1e-11


def test_parse_complex():
    assert parse_complex("2") == 2
    assert parse_complex("-1.5i") == -1.5j
    assert parse_complex(" 0.5 - 3i ") == 0.5 - 3j
    with pytest.raises(ConfigInvalid):
        parse_complex("one")


def test_parse_moduli():
    assert parse_moduli("1:5:5") == [1.0, 2.0, 3.0, 4.0, 5.0]
    assert parse_moduli("2:2:1") == [2.0]
    for bad in ("1:5", "0:5:3", "5:1:3", "a:b:c"):
        with pytest.raises(ConfigInvalid):
            parse_moduli(bad)
