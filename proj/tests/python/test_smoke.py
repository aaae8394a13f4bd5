"""End-to-end smoke of the python module against known closed-form numbers."""

import pytest

import hygame as hg


def test_catalog():
    names = hg.scenario_names()
    assert set(names) == {
        "lq_periodic_1d",
        "robust_1d_nonunique",
        "bouncing_ball",
        "security_jump",
    }
    info = hg.scenario_info("robust_1d_nonunique")
    assert info["n"] == 1
    assert info["dims"]["mC1"] == 1 and info["dims"]["mC2"] == 1
    assert info["dims"]["mD1"] == 0
    assert info["has_value"] and info["has_law"]
    assert not info["has_terminal_set"]


def test_simulate_and_cost():
    run = hg.simulate("robust_1d_nonunique", x0=[2.0])
    assert run["stop"] == "BudgetExhausted"
    assert run["cost"]["total"] == pytest.approx(1.792425288, abs=1e-4)

    cost = hg.evaluate_cost("bouncing_ball", x0=[1.0, 1.0])
    assert cost["total"] == pytest.approx(1.5, abs=1e-4)
    assert cost["flow"] == 0.0


def test_branch_enumeration():
    runs = hg.simulate("security_jump", policy="both")
    assert isinstance(runs, list)
    assert sorted(r["branch"] for r in runs) == ["00", "01", "1"]
    # every branch of a saddle play costs the same
    totals = [r["cost"]["total"] for r in runs]
    assert max(totals) - min(totals) < 1e-6


def test_samples_shape():
    run = hg.simulate("bouncing_ball", x0=[1.0, 1.0], samples=True)
    assert run["stop"] == "ReachedTerminalSet"
    assert run["hit"][1] == 3
    assert len(run["intervals"]) == run["j_end"] + 1
    first = run["intervals"][0]
    assert len(first["t"]) == len(first["x"])
    assert first["x"][0] == [1.0, 1.0]


def test_solvers():
    periodic = hg.solve_periodic("lq_periodic_1d")
    assert periodic["P0"][0][0] == pytest.approx(6.965348865, abs=1e-5)
    assert periodic["residual"] <= 1e-7

    constant = hg.solve_constant("robust_1d_nonunique")
    assert constant["P"][0][0] == pytest.approx(0.4481063221, abs=1e-6)

    security = hg.solve_security("security_jump")
    assert security["P"][0][0] == pytest.approx(1.0, abs=1e-8)
    assert abs(security["P"][0][1]) < 1e-8
    assert security["flow_orthogonality"] < 1e-12


def test_audits():
    assert hg.check_hjbi("bouncing_ball")["passed"]
    assert hg.check_equivalent("robust_1d_nonunique")["passed"]
    stability = hg.check_stability("robust_1d_nonunique")
    assert stability["passed"]
    assert stability["basin"]["fraction"] == 1.0


def test_sweep():
    sweep = hg.saddle_sweep("robust_1d_nonunique", 0.9, 1.1, points=3)
    assert sweep["saddle_ordering"]
    assert sweep["j_star"] == pytest.approx(1.792425288, abs=2e-3)
    assert len(sweep["J"]) == 3 and len(sweep["J"][0]) == 3


def test_fingerprint():
    assert hg.fingerprint("") == "cbf29ce484222325"
    assert hg.fingerprint("foobar") == "85944171f73967e8"
    assert hg.fingerprint("a") != hg.fingerprint("b")


def test_unknown_scenario_raises():
    with pytest.raises(RuntimeError):
        hg.scenario_info("no_such_scenario")
