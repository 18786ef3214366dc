"""Acceptance gate: every criterion at its full stated grid, exact equality.

One test per criterion; each prints its PASS/FAIL line.  Runtime is a few
minutes total, dominated by the two oracle-equivalence grids.
"""

from trace_kit.verification import CRITERIA

_BY_NAME = dict(CRITERIA)


def _run(name):
    ok, detail = _BY_NAME[name](quick=False)
    print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    assert ok, f"{name}: {detail}"


def test_criterion_01_universal_operator():
    _run("universal operator battery")


def test_criterion_02_kronecker_hurwitz():
    _run("Kronecker-Hurwitz and inversion")


def test_criterion_03_level_one_eigenvalues():
    _run("level-one eigenvalues")


def test_criterion_04_dimension_identities():
    _run("dimension identities")


def test_criterion_05_oracle_equivalence():
    _run("oracle equivalence")


def test_criterion_06_eisenstein_triangle():
    _run("Eisenstein/coboundary triangle")


def test_criterion_07_level_four_specialization():
    _run("level-4 specialization")


def test_criterion_08_local_factor_tables():
    _run("local factor tables")


def test_criterion_09_cusp_sum_coherence():
    _run("cusp-sum coherence")


def test_criterion_10_scalar_term_slice():
    _run("scalar-term slice")
