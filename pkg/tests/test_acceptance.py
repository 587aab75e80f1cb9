"""Acceptance criteria, one check per criterion.

Under pytest the report lines appear in the terminal summary; run
``python3 tests/test_acceptance.py`` for the report alone.
"""

import csv
import io
import math
import time
from contextlib import redirect_stdout

import numpy as np
import pytest

from bergman_norm.bergman_ops import ProjectionParams
from bergman_norm.certification import certify, closed_constant, divergence_probe
from bergman_norm.checks import (
    adjoint_suite,
    change_of_variables_suite,
    identities_suite,
    inequality_suite,
    j_grid,
)
from bergman_norm.cli import main as cli_main
from bergman_norm.quadrature import QuadratureConfig, j_numeric
from bergman_norm.special_functions import JIntegralSpec, j_boundary, j_closed_form, j_limit

SEED = 42
# report lines, also echoed in the pytest terminal summary (see conftest.py)
REPORT = []


def report(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
    REPORT.append(line)
    print(line)
    return ok, detail


def criterion_1():
    p = ProjectionParams(1, 0.0)
    start = time.perf_counter()
    cert = certify(p, QuadratureConfig(1_000_000, seed=SEED))
    elapsed = time.perf_counter() - start
    closed_ok = abs(cert.closed_form - 6.0) <= 1e-12 * 6.0
    last = cert.lower_evidence[-1]
    eps = 1 - 2.0**-12
    lower_ok = last.eps == eps and abs(last.numeric - 6 * eps**2) <= 3 * last.std_error
    upper_ok = all(abs(b - 6.0) <= 1e-10 for _, b in cert.upper_evidence)
    ok = closed_ok and lower_ok and upper_ok and cert.verdict == "pass" and elapsed <= 60
    detail = (
        f"C = {cert.closed_form!r}, lower({eps}) = {last.numeric:.15g} +- {last.std_error:.2g} "
        f"vs 6 eps^2 = {6 * eps**2:.15g}, upper max dev "
        f"{max(abs(b - 6) for _, b in cert.upper_evidence):.1e}, verdict {cert.verdict}, {elapsed:.1f} s"
    )
    return report(1, ok, detail)


def criterion_2():
    worst = max(
        abs(closed_constant(ProjectionParams(n, 0.0)) - math.factorial(2 * n + 1) / math.factorial(n))
        / (math.factorial(2 * n + 1) / math.factorial(n))
        for n in range(1, 11)
    )
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = cli_main(["table", "--n-range", "1..3", "--sigma-list", "0"])
    column = [float(r["C_closed"]) for r in csv.DictReader(io.StringIO(buf.getvalue()))]
    ok = worst <= 1e-12 and code == 0 and column == [6.0, 60.0, 840.0]
    return report(2, ok, f"max rel err n=1..10 {worst:.1e}; table C column {column}")


def criterion_3():
    grid = j_grid()
    inside = 0
    for i, (n, c, t, r) in enumerate(grid):
        spec = JIntegralSpec(c, t, n, r)
        est = j_numeric(spec, QuadratureConfig(200_000, seed=SEED).substream(i))
        inside += est.agrees_with(j_closed_form(spec))
    frac = inside / len(grid)
    worst = 0.0
    for n in (1, 2):
        for c in (-3, -2, -1):
            for t in (0.0, 0.5):
                b = j_boundary(c, t, n)
                worst = max(worst, abs(j_limit(c, t, n) - b) / b)
    ok = frac >= 0.95 and worst <= 1e-6
    return report(3, ok, f"{inside}/{len(grid)} cells inside 3 se; boundary extrapolation max rel err {worst:.1e}")


def _suite(number, results):
    failed = [r for r in results if not r.passed]
    detail = f"{len(results) - len(failed)}/{len(results)} checks"
    if failed:
        detail += "; failed: " + "; ".join(r.line() for r in failed)
    return report(number, not failed, detail)


def criterion_4():
    return _suite(4, change_of_variables_suite(seed=SEED))


def criterion_5():
    results = identities_suite(samples=10_000, seed=SEED)
    return _suite(5, results)


def criterion_6():
    results = [r for r in adjoint_suite(seed=SEED) if "<Qf,g>" in r.name or "q_op" in r.name]
    return _suite(6, results)


def criterion_7():
    parts = []
    ok = True
    for sigma in (-2.0, -3.0):
        p = ProjectionParams(1, sigma)
        probe = divergence_probe(p)
        vals = np.array([j for _, j in probe])
        eps = [e for e, _ in probe]
        increasing = bool(np.all(np.diff(vals) > 0))
        ratio = vals[-1] / vals[0]
        verdict = certify(p, QuadratureConfig(1000, seed=SEED)).verdict
        ok &= increasing and ratio > 10 and eps[0] == 0.5 and eps[-1] == 1 - 2.0**-20 and verdict == "unbounded"
        parts.append(f"sigma={sigma:g}: ratio {ratio:.4g}, verdict {verdict}")
    cert = certify(ProjectionParams(1, -1.9), QuadratureConfig(1_000_000, seed=SEED))
    ok &= cert.verdict == "pass" and math.isfinite(cert.closed_form)
    parts.append(f"sigma=-1.9: verdict {cert.verdict}, C = {cert.closed_form:.10g}")
    return report(7, ok, "; ".join(parts))


def criterion_8():
    return _suite(8, inequality_suite(seed=SEED))


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 9)])
def test_criterion(criterion):
    ok, detail = criterion()
    assert ok, detail


if __name__ == "__main__":
    results = [c()[0] for c in CRITERIA]
    print(f"{sum(results)}/{len(results)} criteria pass")
