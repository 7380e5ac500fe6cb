# zaremba-spectra - CLI Module
# Copyright (C) 2025 Nicholas Acord <ncacord@protonmail.com>

"""
zaremba-spectra CLI module - configuration, orchestration and artifacts.

- settings: RunConfig validation, config files and the config hash
- report: JSON run reports and buffered CSV tables
- verify: Property suites behind `verify --suite`
- commands: Subcommand handlers and run()
"""

from .commands import run
from .report import CsvTable, Report
from .settings import RunConfig, build_config, config_hash
from .verify import verify_suite

__all__ = ["run", "Report", "CsvTable", "RunConfig", "build_config", "config_hash", "verify_suite"]
