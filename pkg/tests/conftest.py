import io
from contextlib import redirect_stderr, redirect_stdout

import pytest

from extropy import cli
from extropy.distributions import (
    beta_dist,
    exponential,
    gamma_dist,
    pareto,
    piecewise,
    tabulated,
    uniform,
)


def run_cli(*args):
    """Invoke the CLI in-process; returns (exit_code, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = cli.main(list(args))
    return code, out.getvalue(), err.getvalue()


@pytest.fixture(scope="session")
def cli_runner():
    return run_cli


def catalog_members():
    """One representative per family, all with well-behaved edges."""
    return [
        exponential(1.0),
        uniform(1.0, 3.0),
        gamma_dist(2.0, 1.0),
        beta_dist(2.0, 1.5),
        piecewise([0.3, 0.7]),
        pareto(2.0, 1.0),
        tabulated([[0.0, 0.5], [1.0, 1.5], [2.0, 0.5], [3.0, 0.1]]),
    ]


@pytest.fixture(scope="session")
def catalog():
    return catalog_members()
