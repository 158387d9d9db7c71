import pytest
from derham_lab.checks import Check, Results


class DummyCheck(Check):
    def __init__(self, passed=True, tol=1e-8):
        self.passed = passed
        self.tol = tol

    def _compute(self):
        return {"passed": self.passed, "value": 0.5}


class NoVerdictCheck(Check):
    def _compute(self):
        return {"value": 1}


def test_abstract_check():
    with pytest.raises(TypeError):
        Check()


def test_compute():
    results = DummyCheck(tol=1e-3).compute()
    assert isinstance(results, Results)
    assert results.passed
    assert results.check_info == {"name": "DummyCheck", "passed": True, "tol": 1e-3}


def test_failing_check():
    results = DummyCheck(passed=False).compute()
    assert not results.passed
    assert results.to_dict()["passed"] is False


def test_missing_verdict():
    with pytest.raises(KeyError):
        NoVerdictCheck().compute()


def test_results_to_dict():
    results = Results({"passed": 1, "value": 2}, {"name": "Named"})
    data = results.to_dict()
    assert set(data) == {"version", "check", "results", "passed"}
    assert data["passed"] is True
    assert data["check"]["name"] == "Named"
    assert isinstance(data["version"], str)
