"""Acceptance criteria 1-9 at full scale.

Each test prints one [PASS]/[FAIL] line (also collected into the pytest
terminal summary).  Running this file directly prints the same lines.
"""

import pytest

from normext import checks

SEED = checks.DEFAULT_SEED
CAP = 2


def _report(log, result):
    line = result.line()
    print(line)
    log.append(line)
    return result


@pytest.fixture(scope="module")
def sweep():
    # every G with |G| <= 64, every H with pG in H, 20 norms each; cap and cap+1
    return checks.extension_sweep(max_order=64, norms=20, cap=CAP, seed=SEED)


@pytest.fixture(scope="module")
def sweep_lines(sweep):
    return {r.number: r for r in checks.sweep_results(sweep, CAP)}


def test_criterion_1_restriction_identity(sweep, sweep_lines, acceptance_log):
    r = _report(acceptance_log, sweep_lines[1])
    assert sweep.extensions == sweep.pairs * 20 and sweep.groups == 117
    assert sweep.seconds < 300, f"sweep took {sweep.seconds:.0f}s"
    assert r.passed, sweep.first_failure


def test_criterion_2_validity(sweep, sweep_lines, acceptance_log):
    assert _report(acceptance_log, sweep_lines[2]).passed, sweep.first_failure


def test_criterion_3_oracle_equivalence(acceptance_log):
    r = _report(acceptance_log, checks.oracle_equivalence(queries=1000, max_order=16, seed=SEED))
    assert r.seconds < 120
    assert r.passed


def test_criterion_4_cap_stability(sweep, sweep_lines, acceptance_log):
    assert _report(acceptance_log, sweep_lines[4]).passed, sweep.first_failure


def test_criterion_5_transversals(acceptance_log):
    assert _report(acceptance_log, checks.transversal_contract(1000, 500, seed=SEED)).passed


def test_criterion_6_birkhoff(acceptance_log):
    assert _report(acceptance_log, checks.birkhoff_exactness(500, seed=SEED)).passed


def test_criterion_7_chain_extension(acceptance_log):
    assert _report(acceptance_log, checks.chain_sweep(max_order=64, norms=4, cap=CAP, seed=SEED)).passed


def test_criterion_8_winding(acceptance_log):
    r = _report(acceptance_log, checks.winding_claims(kmax=20, samples=100_000, seed=SEED))
    assert r.passed and r.seconds < 60


def test_criterion_9_lattice(acceptance_log):
    assert _report(acceptance_log, checks.lattice_case(window=8, cap=CAP)).passed


if __name__ == "__main__":
    results = checks.run_all(max_order=64, norms=20, chain_norms=4, queries=1000, seed=SEED, cap=CAP)
    for res in results:
        print(res.line())
    raise SystemExit(0 if all(res.passed for res in results) else 1)
