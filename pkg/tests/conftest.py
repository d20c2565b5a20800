"""Shared test setup: compile the accelerated kernels once per session.

Warming the kernels up front keeps JIT compilation time out of the
runtime budgets asserted by the acceptance tests.
"""

import pytest

from thermoforge import kernels


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    kernels.warmup()
