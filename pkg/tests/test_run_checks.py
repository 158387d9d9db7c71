import pytest
from derham_lab import run_checks
from derham_lab.checks import Check, KernelMomentCheck


class DummyCheck(Check):
    def _compute(self):
        return {"passed": True}


class DummyCheckParam(Check):
    def __init__(self, param="value"):
        self.param = param

    def _compute(self):
        return {"passed": self.param != "fail", "param": self.param}


def test_run_checks():
    # Check input -- not instantiated
    with pytest.raises(TypeError):
        run_checks([DummyCheck])

    # Check input -- wrong type
    with pytest.raises(TypeError):
        run_checks([DummyCheck(), "rando"])

    with pytest.raises(ValueError):
        run_checks([DummyCheck()], threads=0)

    # One check
    results = run_checks([DummyCheck()])
    assert isinstance(results, list)
    assert len(results) == 1
    assert results[0]["check"]["name"] == "DummyCheck"
    assert results[0]["passed"]

    # Duplicate check with different params
    results = run_checks([DummyCheckParam("param1"), DummyCheckParam("fail")])
    assert len(results) == 2
    assert results[0]["check"]["name"] == "DummyCheckParam"
    assert results[0]["check"].get("param") == "param1"
    assert results[1]["check"].get("param") == "fail"
    assert not results[1]["passed"]


def test_run_checks_threads():
    checks = [DummyCheckParam(f"param{i}") for i in range(5)] + [KernelMomentCheck()]
    results = run_checks(checks, threads=3)
    assert [r["check"].get("param") for r in results[:5]] == [f"param{i}" for i in range(5)]
    assert results[5]["check"]["name"] == "KernelMomentCheck"
    assert all(r["passed"] for r in results)
