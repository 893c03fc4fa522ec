# Copyright 2026 The Density Lab Authors
# SPDX-License-Identifier: Apache-2.0

"""Capability-density analysis: scaling-law fits, effective parameter size,
density and its trend over time."""

from ._core import *  # noqa: F401,F403
from ._core import DensityLabError, run_cli  # noqa: F401

__version__ = "0.1.0"
